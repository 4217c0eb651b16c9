//! Critical sets of moment map components on affine slices, their Morse
//! indices and Bott nondegeneracy, and the vertex theorem.

use std::cmp::Ordering;

use crate::error::{MomentError, Result};
use crate::models::analysis::{point_data, Model};
use crate::models::slice::{action_kernel, moment_image, AffineSlice, Stratum};
use crate::polyhedra::{poly_equal, Polyhedron};
use crate::presymlin::linalg::{self, Vector};
use crate::presymlin::{inertia, Subspace};
use crate::scalars::ExtScalar;

/// A support stratum on which `Phi^xi` is critical.
#[derive(Clone, Debug)]
pub struct CriticalStratum {
    pub support: Vec<usize>,
    pub dimension: usize,
    pub moment_value_set: Polyhedron,
    /// `xi = eta + zeta` with `eta` in `g_S` and `zeta` in the null ideal.
    pub eta: Vector,
    pub zeta: Vector,
    /// `(j, <alpha_j, eta>)` for every coordinate off the support.
    pub normal_weights: Vec<(usize, ExtScalar)>,
    pub index: usize,
    /// `(positive, negative, zero)` inertia of the Hessian on `T_x X`.
    pub hessian_inertia: (usize, usize, usize),
    /// Hessian kernel equals the tangent space of the critical set.
    pub bott_nondegenerate: bool,
}

fn slice_of<M: Model + ?Sized>(model: &M) -> Result<&AffineSlice> {
    model
        .slice()
        .ok_or_else(|| MomentError::NotApplicable("slice models only".into()))
}

/// Solves `xi = eta + zeta` with `eta` in `g_S`, `zeta` in `a`.
fn split(slice: &AffineSlice, support: &[usize], xi: &[ExtScalar]) -> Option<(Vector, Vector)> {
    let d = slice.module().torus_rank();
    let gs = action_kernel(slice.module(), support);
    let a = slice.null_ideal();
    let mut gens: Vec<Vector> = gs.basis().to_vec();
    gens.extend(a.basis().iter().cloned());
    let cols = linalg::transpose(&gens, d);
    let c = linalg::solve(&cols, xi, gens.len())?;
    let eta = gs
        .basis()
        .iter()
        .zip(&c)
        .fold(linalg::zeros(d), |acc, (b, ci)| linalg::axpy(&acc, ci, b));
    let zeta = linalg::sub(xi, &eta);
    Some((eta, zeta))
}

fn is_critical(slice: &AffineSlice, support: &[usize], xi: &[ExtScalar]) -> bool {
    split(slice, support, xi).is_some()
}

/// Gram matrix of `v -> 1/2 sigma(eta v, v)` on a basis of `T_x X`.
fn hessian_gram(slice: &AffineSlice, eta: &[ExtScalar], tangent: &Subspace) -> Result<Vec<Vector>> {
    let module = slice.module();
    let a = module.action_matrix(eta)?;
    let sigma = module.form();
    let half = ExtScalar::ratio(1, 2);
    let b = tangent.basis();
    Ok(b.iter()
        .map(|u| {
            let au = linalg::mat_vec(&a, u);
            b.iter().map(|v| &half * &sigma.eval(&au, v)).collect()
        })
        .collect())
}

fn analyse(slice: &AffineSlice, stratum: &Stratum, xi: &[ExtScalar]) -> Result<CriticalStratum> {
    let module = slice.module();
    let n = module.real_dim();
    let support = stratum.support.clone();
    let (eta, zeta) = split(slice, &support, xi).ok_or(MomentError::NotCritical {
        support: support.clone(),
    })?;
    let e = slice.representative(&support);
    let pd = point_data(slice, &e)?;
    let stratum_tangent = pd.tangent.intersection(&Subspace::coordinate(
        n,
        &crate::models::WeightedModule::real_indices(&support),
    ))?;

    let normal_weights: Vec<(usize, ExtScalar)> = (0..module.n_coords())
        .filter(|j| !support.contains(j))
        .map(|j| (j, module.pairing(j, &eta)))
        .collect();
    let mut negative = 0;
    for (_, p) in &normal_weights {
        if p.sign()? == Ordering::Less {
            negative += 1;
        }
    }
    let index = 2 * negative;

    let gram = hessian_gram(slice, &eta, &pd.tangent)?;
    let hessian_inertia = inertia(&gram)?;
    if hessian_inertia.1 != index {
        return Err(MomentError::Internal(format!(
            "stratum {support:?}: Hessian has {} negative directions, weights give index {index}",
            hessian_inertia.1
        )));
    }
    // kernel of the Hessian as a subspace of R^{2m}
    let ker_coeffs = linalg::kernel(&gram, gram.len());
    let ker_vecs: Vec<Vector> = ker_coeffs
        .iter()
        .map(|c| {
            c.iter()
                .zip(pd.tangent.basis())
                .fold(linalg::zeros(n), |acc, (ci, b)| linalg::axpy(&acc, ci, b))
        })
        .collect();
    let hess_kernel = Subspace::span(n, &ker_vecs)?;
    // tangent space of the critical set: the largest critical stratum
    // containing this one in its closure
    let mut star = support.clone();
    for s in slice.strata() {
        if support.iter().all(|j| s.support.contains(j)) && is_critical(slice, &s.support, xi) {
            for &j in &s.support {
                if !star.contains(&j) {
                    star.push(j);
                }
            }
        }
    }
    star.sort_unstable();
    let crit_tangent = pd.tangent.intersection(&Subspace::coordinate(
        n,
        &crate::models::WeightedModule::real_indices(&star),
    ))?;

    Ok(CriticalStratum {
        dimension: stratum_tangent.dim(),
        moment_value_set: stratum.image.clone(),
        eta,
        zeta,
        normal_weights,
        index,
        hessian_inertia,
        bott_nondegenerate: hess_kernel == crit_tangent,
        support,
    })
}

/// Strata of the slice on which `xi(x)` is tangent to the null leaf,
/// i.e. `xi in g_S + a`.
pub fn critical_set<M: Model + ?Sized>(
    model: &M,
    xi: &[ExtScalar],
) -> Result<Vec<CriticalStratum>> {
    let slice = slice_of(model)?;
    slice.module().check_xi(xi)?;
    slice
        .strata()
        .iter()
        .filter(|s| is_critical(slice, &s.support, xi))
        .map(|s| analyse(slice, s, xi))
        .collect()
}

/// Morse index of `Phi^xi` along the stratum with the given support.
pub fn morse_index<M: Model + ?Sized>(
    model: &M,
    xi: &[ExtScalar],
    support: &[usize],
) -> Result<usize> {
    let slice = slice_of(model)?;
    slice.module().check_xi(xi)?;
    let stratum = slice.stratum(support).ok_or_else(|| {
        MomentError::PointNotOnModel(format!("no points with support {support:?}"))
    })?;
    Ok(analyse(slice, stratum, xi)?.index)
}

#[derive(Clone, Debug)]
pub struct MorseBottReport {
    pub holds: bool,
    pub strata: Vec<CriticalStratum>,
}

/// Whether `Phi^xi` is Morse-Bott, with the per-stratum data.
pub fn morse_bott_check<M: Model + ?Sized>(model: &M, xi: &[ExtScalar]) -> Result<MorseBottReport> {
    let strata = critical_set(model, xi)?;
    Ok(MorseBottReport {
        holds: strata.iter().all(|s| s.bott_nondegenerate),
        strata,
    })
}

/// The fixed-leaf strata and the vertex theorem checks.
#[derive(Clone, Debug)]
pub struct VertexReport {
    pub strata: Vec<CriticalStratum>,
    /// Moment value of each stratum, in stratum order.
    pub images: Vec<Vector>,
    /// `conv(images) = Phi(X)`
    pub hull_matches: bool,
    /// Over each vertex of `Phi(X)` the fixed strata are the faces of one
    /// of them, the stratum on the union of their supports. So each vertex
    /// fibre is a single component.
    pub vertex_fibres_connected: bool,
}

impl VertexReport {
    pub fn holds(&self) -> bool {
        self.hull_matches && self.vertex_fibres_connected
    }
}

/// Strata on which every component is critical (`g_S + a = g`) and the
/// vertex theorem checks. Requires a bounded moment image.
pub fn full_critical_set<M: Model + ?Sized>(model: &M) -> Result<VertexReport> {
    let slice = slice_of(model)?;
    let d = slice.module().torus_rank();
    let (image, _) = moment_image(slice)?;
    if !image.is_bounded() {
        return Err(MomentError::Unbounded(
            "the moment image is unbounded".into(),
        ));
    }
    let zero = linalg::zeros(d);
    let mut strata = Vec::new();
    let mut images = Vec::new();
    for s in slice.strata() {
        let full = action_kernel(slice.module(), &s.support).sum(slice.null_ideal())?;
        if !full.is_full() {
            continue;
        }
        let v = s.image.vrep();
        if v.vertices.len() != 1 || !v.rays.is_empty() || !v.lines.is_empty() {
            return Err(MomentError::Internal(format!(
                "fixed-leaf stratum {:?} has a non-point image",
                s.support
            )));
        }
        images.push(v.vertices[0].clone());
        strata.push(analyse(slice, s, &zero)?);
    }
    let hull = Polyhedron::convex_hull(d, &images)?;
    let hull_matches = poly_equal(&hull, &image)?;
    let vertex_fibres_connected = image.vrep().vertices.iter().all(|v| {
        let over: Vec<&[usize]> = strata
            .iter()
            .zip(&images)
            .filter(|(_, i)| *i == v)
            .map(|(c, _)| c.support.as_slice())
            .collect();
        let mut union: Vec<usize> = over.iter().flat_map(|s| s.iter().copied()).collect();
        union.sort_unstable();
        union.dedup();
        over.contains(&union.as_slice())
    });
    Ok(VertexReport {
        strata,
        images,
        hull_matches,
        vertex_fibres_connected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{build_affine_slice, WeightedModule};
    use crate::presymlin::hessian_quadratic;
    use crate::presymlin::linalg::from_ints;
    use crate::scalars::ConstantBasis;

    fn segment() -> AffineSlice {
        let w = Subspace::span(2, &[from_ints(&[1, -1])]).unwrap();
        build_affine_slice(WeightedModule::standard(2), from_ints(&[1, 0]), w).unwrap()
    }

    fn irrational_segment() -> AffineSlice {
        let s2 = ConstantBasis::sqrt(2).unwrap().constant("sqrt2").unwrap();
        let w = Subspace::kernel_of(2, &[vec![ExtScalar::one(), s2]]).unwrap();
        build_affine_slice(WeightedModule::standard(2), from_ints(&[1, 0]), w).unwrap()
    }

    #[test]
    fn segment_critical_set() {
        let s = segment();
        let cs = critical_set(&s, &from_ints(&[1, 0])).unwrap();
        let sup: Vec<_> = cs.iter().map(|c| c.support.clone()).collect();
        assert_eq!(sup, vec![vec![0], vec![1]]);
        assert_eq!(cs[0].eta, from_ints(&[0, -1]));
        assert_eq!(cs[0].index, 2);
        assert_eq!(cs[1].eta, from_ints(&[1, 0]));
        assert_eq!(cs[1].index, 0);
        assert_eq!(
            cs[0].moment_value_set.vrep().vertices,
            vec![from_ints(&[1, 0])]
        );
        assert_eq!(cs[0].dimension, 1);
        assert_eq!(morse_index(&s, &from_ints(&[1, 0]), &[0]).unwrap(), 2);
        assert!(matches!(
            morse_index(&s, &from_ints(&[1, 0]), &[0, 1]),
            Err(MomentError::NotCritical { .. })
        ));
    }

    #[test]
    fn components_in_the_null_ideal_are_constant() {
        let s = segment();
        assert_eq!(critical_set(&s, &from_ints(&[1, 1])).unwrap().len(), 3);
        assert_eq!(critical_set(&s, &from_ints(&[0, 0])).unwrap().len(), 3);
        let r = morse_bott_check(&s, &from_ints(&[1, 1])).unwrap();
        assert!(r.holds);
        assert!(r.strata.iter().all(|c| c.index == 0));
    }

    #[test]
    fn bott_and_products() {
        assert!(
            morse_bott_check(&segment(), &from_ints(&[1, 0]))
                .unwrap()
                .holds
        );
        let p =
            WeightedModule::new(2, vec![vec![1, 0], vec![1, 1], vec![1, -1]], vec![1, 2]).unwrap();
        assert!(matches!(
            morse_bott_check(&p, &from_ints(&[1, 0])),
            Err(MomentError::NotApplicable(_))
        ));
    }

    #[test]
    fn hessian_signs_on_normal_lines() {
        let s = segment();
        for c in critical_set(&s, &from_ints(&[1, 0])).unwrap() {
            let m = s.module();
            // zero along the stratum directions
            for &j in &c.support {
                let v = linalg::unit(4, 2 * j + 1);
                assert!(hessian_quadratic(m, &c.eta, &v).unwrap().is_zero());
            }
            for (j, w) in &c.normal_weights {
                let h = hessian_quadratic(m, &c.eta, &linalg::unit(4, 2 * j)).unwrap();
                assert_eq!(h.sign().unwrap(), w.sign().unwrap());
            }
        }
    }

    #[test]
    fn vertex_theorem_examples() {
        let r = full_critical_set(&segment()).unwrap();
        assert_eq!(r.images, vec![from_ints(&[1, 0]), from_ints(&[0, 1])]);
        assert!(r.holds());

        let r = full_critical_set(&irrational_segment()).unwrap();
        assert_eq!(r.images[0], from_ints(&[1, 0]));
        assert_eq!(r.images[1][1].to_string(), "1/2*sqrt2");
        assert!(r.holds());

        // repeated weight: three fixed strata over the vertex (1), all faces of {0,1}
        let w = WeightedModule::new(1, vec![vec![1], vec![1]], vec![]).unwrap();
        let r =
            full_critical_set(&build_affine_slice(w, from_ints(&[1]), Subspace::zero(1)).unwrap())
                .unwrap();
        assert_eq!(r.strata.len(), 3);
        assert!(r.holds());

        let open = build_affine_slice(
            WeightedModule::standard(2),
            from_ints(&[1, 1]),
            Subspace::full(2),
        )
        .unwrap();
        assert!(matches!(
            full_critical_set(&open),
            Err(MomentError::Unbounded(_))
        ));
    }
}
