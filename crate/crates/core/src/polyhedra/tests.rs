use super::*;
use crate::presymlin::linalg::from_ints;
use crate::scalars::{ConstantBasis, ExtScalar};

fn hs(n: &[i64], b: i64) -> Halfspace {
    Halfspace::from_ints(n, b)
}

fn segment() -> Polyhedron {
    intersect_halfspaces(2, &[hs(&[1, 0], 0), hs(&[0, 1], 0)], &[hs(&[1, 1], 1)]).unwrap()
}

fn sqrt2() -> ExtScalar {
    ConstantBasis::sqrt(2).unwrap().constant("sqrt2").unwrap()
}

#[test]
fn intersect_examples() {
    let s = segment();
    assert_eq!(
        s.vrep().vertices,
        vec![from_ints(&[0, 1]), from_ints(&[1, 0])]
    );
    assert_eq!(s.affine_dim(), Some(1));
    assert_eq!(s.halfspaces().len(), 2);

    let e = intersect_halfspaces(1, &[hs(&[1], 0), hs(&[-1], 1)], &[]).unwrap();
    assert!(e.is_empty());
    assert!(enumerate_vertices(&e).is_err());

    let o = Polyhedron::orthant(2);
    let v = enumerate_vertices(&o).unwrap();
    assert_eq!(v.vertices, vec![from_ints(&[0, 0])]);
    assert_eq!(v.rays, vec![from_ints(&[0, 1]), from_ints(&[1, 0])]);

    assert!(matches!(
        intersect_halfspaces(2, &[hs(&[1, 0, 0], 0)], &[]),
        Err(MomentError::DimensionMismatch(_))
    ));
}

#[test]
fn irrational_segment_vertices() {
    let s2 = sqrt2();
    let eq = Halfspace::new(vec![ExtScalar::one(), s2.clone()], ExtScalar::one());
    let p = intersect_halfspaces(2, &[hs(&[1, 0], 0), hs(&[0, 1], 0)], &[eq]).unwrap();
    let half_s2 = s2.scale(&crate::scalars::rat(1, 2));
    assert_eq!(
        p.vrep().vertices,
        vec![vec![ExtScalar::zero(), half_s2], from_ints(&[1, 0])]
    );
    assert!(!is_rational_polyhedral(&p).unwrap());
}

#[test]
fn simplex_vertices() {
    let ineqs: Vec<Halfspace> = (0..3)
        .map(|i| Halfspace::new(linalg::unit(3, i), ExtScalar::zero()))
        .collect();
    let p = intersect_halfspaces(3, &ineqs, &[hs(&[1, 1, 1], 1)]).unwrap();
    let mut expect: Vec<Vector> = (0..3).map(|i| linalg::unit(3, i)).collect();
    expect.sort_by(|a, b| cmp_vectors(a, b));
    assert_eq!(p.vrep().vertices, expect);
}

#[test]
fn affine_span_examples() {
    let a = affine_span(&segment()).unwrap();
    assert_eq!(
        a,
        AffineSubspace::new(
            from_ints(&[1, 0]),
            Subspace::span(2, &[from_ints(&[1, -1])]).unwrap()
        )
    );
    let pt = Polyhedron::convex_hull(2, &[from_ints(&[3, 4])]).unwrap();
    assert!(affine_span(&pt).unwrap().direction.is_zero());
    assert!(affine_span(&Polyhedron::orthant(2))
        .unwrap()
        .direction
        .is_full());
}

#[test]
fn rational_polyhedral_examples() {
    assert!(is_rational_polyhedral(&segment()).unwrap());
    assert!(is_rational_polyhedral(&Polyhedron::orthant(2)).unwrap());
    // full-dimensional triangle with one irrational facet normal
    let s2 = sqrt2();
    let tri = intersect_halfspaces(
        2,
        &[
            hs(&[1, 0], 0),
            hs(&[0, 1], 0),
            Halfspace::new(vec![-ExtScalar::one(), -s2], -ExtScalar::one()),
        ],
        &[],
    )
    .unwrap();
    assert!(!is_rational_polyhedral(&tri).unwrap());
}

#[test]
fn homogenize_examples() {
    let s = segment();
    let c = homogenize(&s).unwrap();
    assert_eq!(c.dim(), 3);
    assert!(c.contains(&[
        ExtScalar::ratio(1, 2),
        ExtScalar::ratio(1, 2),
        ExtScalar::one()
    ]));
    assert!(!c.contains(&[ExtScalar::one(), ExtScalar::one(), ExtScalar::one()]));
    let at_one = project(&c.with_equality(hs(&[0, 0, 1], 1)).unwrap(), &[0, 1]).unwrap();
    assert!(poly_equal(&at_one, &s).unwrap());

    let pt = Polyhedron::convex_hull(2, &[from_ints(&[2, 3])]).unwrap();
    let ray = homogenize(&pt).unwrap();
    assert!(ray.vrep().vertices == vec![from_ints(&[0, 0, 0])]);
    assert_eq!(ray.vrep().rays.len(), 1);
    assert_eq!(
        ray.vrep().rays[0],
        vec![
            ExtScalar::one(),
            ExtScalar::ratio(3, 2),
            ExtScalar::ratio(1, 2)
        ]
    );
}

#[test]
fn project_examples() {
    let cone = homogenize(&segment()).unwrap();
    let proj = project(&cone, &[0, 1]).unwrap();
    assert!(poly_equal(&proj, &Polyhedron::orthant(2)).unwrap());

    let bx = intersect_halfspaces(
        2,
        &[
            hs(&[1, 0], 0),
            hs(&[-1, 0], -1),
            hs(&[0, 1], 0),
            hs(&[0, -1], -1),
        ],
        &[],
    )
    .unwrap();
    let px = project(&bx, &[0]).unwrap();
    assert_eq!(px.vrep().vertices, vec![from_ints(&[0]), from_ints(&[1])]);

    let e = Polyhedron::empty(3);
    assert!(project(&e, &[0, 2]).unwrap().is_empty());
}

#[test]
fn poly_equal_examples() {
    let s = segment();
    let hull = Polyhedron::convex_hull(2, &s.vrep().vertices).unwrap();
    assert!(poly_equal(&s, &hull).unwrap());
    assert_eq!(s, hull);
    let shifted = intersect_halfspaces(2, &[hs(&[1, 0], 1), hs(&[0, 1], 0)], &[]).unwrap();
    assert!(!poly_equal(&Polyhedron::orthant(2), &shifted).unwrap());
    assert!(poly_equal(&s, &Polyhedron::orthant(3)).is_err());
}

#[test]
fn desk_scale_limit_is_enforced() {
    let many: Vec<Halfspace> = (0..70).map(|i| hs(&[1, i], -i)).collect();
    assert!(matches!(
        intersect_halfspaces(2, &many, &[]),
        Err(MomentError::DeskScaleExceeded(_))
    ));
    assert!(matches!(
        intersect_halfspaces(9, &[], &[]),
        Err(MomentError::DeskScaleExceeded(_))
    ));
}

#[test]
fn span_constants_are_rejected_by_the_exact_engine() {
    let b = ConstantBasis::span(&[("pi", std::f64::consts::PI)]).unwrap();
    let pi = b.constant("pi").unwrap();
    let h = Halfspace::new(vec![pi], ExtScalar::zero());
    assert!(matches!(
        intersect_halfspaces(1, &[h], &[]),
        Err(MomentError::UnsupportedOperation(_))
    ));
}

#[test]
fn json_shape() {
    let j = segment().to_json();
    assert_eq!(j["halfspaces"].as_array().unwrap().len(), 2);
    assert_eq!(j["equalities"][0]["normal"], serde_json::json!(["1", "1"]));
    assert_eq!(j["equalities"][0]["offset"], "1");
}

mod props {
    use super::*;
    use proptest::prelude::*;

    /// Random bounded rational polytope: the box [-3, 3]^d cut by extra
    /// random half-spaces through a neighbourhood of the origin.
    fn polytope() -> impl Strategy<Value = (usize, Vec<Halfspace>)> {
        (1usize..=4).prop_flat_map(|d| {
            proptest::collection::vec(
                (proptest::collection::vec(-3i64..=3, d), -2i64..=0),
                0..=(8 - 2 * d.min(4)).max(1),
            )
            .prop_map(move |extra| {
                let mut hsv = Vec::new();
                for i in 0..d {
                    let mut e = vec![0; d];
                    e[i] = 1;
                    hsv.push(Halfspace::from_ints(&e, -3));
                    e[i] = -1;
                    hsv.push(Halfspace::from_ints(&e, -3));
                }
                for (n, b) in extra {
                    if n.iter().any(|&x| x != 0) {
                        hsv.push(Halfspace::from_ints(&n, b));
                    }
                }
                (d, hsv)
            })
        })
    }

    fn lattice_points(d: usize, r: i64) -> Vec<Vector> {
        let mut pts = vec![vec![]];
        for _ in 0..d {
            pts = pts
                .into_iter()
                .flat_map(|p: Vec<i64>| {
                    (-r..=r).map(move |x| {
                        let mut q = p.clone();
                        q.push(x);
                        q
                    })
                })
                .collect();
        }
        pts.into_iter().map(|p| from_ints(&p)).collect()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn h_to_v_to_h_round_trip((d, hsv) in polytope()) {
            let p = intersect_halfspaces(d, &hsv, &[]).unwrap();
            prop_assert!(p.is_bounded());
            let q = Polyhedron::convex_hull(d, &p.vrep().vertices).unwrap();
            prop_assert_eq!(&p, &q);
            // every vertex has d independent tight constraints
            for v in &p.vrep().vertices {
                let tight: Vec<Vector> = p
                    .halfspaces()
                    .iter()
                    .filter(|h| h.slack(v).is_zero())
                    .chain(p.equalities())
                    .map(|h| h.normal.clone())
                    .collect();
                prop_assert_eq!(linalg::rank(&tight, d), d);
            }
            // membership agrees with the raw constraints on a grid
            for x in lattice_points(d, 3).iter().step_by(3) {
                let raw = hsv.iter().all(|h| !h.slack(x).is_negative().unwrap());
                prop_assert_eq!(raw, p.contains(x));
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(60))]

        #[test]
        fn homogenize_then_slice_recovers((d, hsv) in polytope(), pt in proptest::collection::vec(-4i64..=4, 4)) {
            prop_assume!(d <= 3);
            let p = intersect_halfspaces(d, &hsv, &[]).unwrap();
            let c = homogenize(&p).unwrap();
            let mut x = from_ints(&pt[..d]);
            let inside = p.contains(&x);
            x.push(ExtScalar::one());
            prop_assert_eq!(c.contains(&x), inside);
            let mut t1 = vec![0; d + 1];
            t1[d] = 1;
            let keep: Vec<usize> = (0..d).collect();
            let back = project(&c.with_equality(Halfspace::from_ints(&t1, 1)).unwrap(), &keep).unwrap();
            prop_assert!(poly_equal(&back, &p).unwrap());
        }

        #[test]
        fn projection_matches_projected_vertices((d, hsv) in polytope()) {
            prop_assume!(d >= 2);
            let p = intersect_halfspaces(d, &hsv, &[]).unwrap();
            let keep: Vec<usize> = (0..d - 1).collect();
            let fm = project(&p, &keep).unwrap();
            let pts: Vec<Vector> = p.vrep().vertices.iter().map(|v| v[..d - 1].to_vec()).collect();
            let oracle = Polyhedron::convex_hull(d - 1, &pts).unwrap();
            prop_assert!(poly_equal(&fm, &oracle).unwrap());
        }

        #[test]
        fn product_with_interval_projects_back((d, hsv) in polytope()) {
            prop_assume!(d <= 3);
            let p = intersect_halfspaces(d, &hsv, &[]).unwrap();
            let mut lifted: Vec<Halfspace> = hsv.iter().map(|h| {
                let mut n = h.normal.clone();
                n.push(ExtScalar::zero());
                Halfspace::new(n, h.offset.clone())
            }).collect();
            let mut up = vec![0; d + 1];
            up[d] = 1;
            lifted.push(Halfspace::from_ints(&up, 0));
            up[d] = -1;
            lifted.push(Halfspace::from_ints(&up, -1));
            let prod = intersect_halfspaces(d + 1, &lifted, &[]).unwrap();
            let keep: Vec<usize> = (0..d).collect();
            prop_assert!(poly_equal(&project(&prod, &keep).unwrap(), &p).unwrap());
        }

        #[test]
        fn projection_commutes_with_box_cut((d, hsv) in polytope(), lo in -2i64..=0, hi in 0i64..=2) {
            prop_assume!(d >= 2);
            let p = intersect_halfspaces(d, &hsv, &[]).unwrap();
            // cut by lo <= x_0 <= hi, which acts on a kept coordinate
            let mut a = vec![0; d];
            a[0] = 1;
            let mut b = vec![0; d];
            b[0] = -1;
            let cut = intersect_halfspaces(d, &[Halfspace::from_ints(&a, lo), Halfspace::from_ints(&b, -hi)], &[]).unwrap();
            let keep: Vec<usize> = (0..d - 1).collect();
            let left = project(&p.intersect(&cut).unwrap(), &keep).unwrap();
            let right = project(&p, &keep).unwrap().intersect(&project(&cut, &keep).unwrap()).unwrap();
            prop_assert!(poly_equal(&left, &right).unwrap());
        }
    }
}
