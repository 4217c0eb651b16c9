use std::cmp::Ordering;

use crate::error::{MomentError, Result};
use crate::lattice::{is_rational_subspace, null_subgroup_closed, quasilattice, QuasiLattice};
use crate::models::module::{ModelPoint, WeightedModule};
use crate::polyhedra::{
    affine_span, is_rational_polyhedral, poly_equal, Halfspace, Polyhedron, VRep,
};
use crate::presymlin::linalg::{self, Vector};
use crate::presymlin::{moment_quadratic, AffineSubspace, Subspace};
use crate::scalars::{ensure_field, rat, ExtScalar};

/// Points with a fixed support `S` on the slice.
#[derive(Clone, Debug)]
pub struct Stratum {
    pub support: Vec<usize>,
    /// Relative-interior point of `{t >= 0 on S : sum t_j alpha_j in lambda + W}`;
    /// every entry is positive.
    pub t: Vector,
    /// `sum_j t_j alpha_j`, a moment value attained on the stratum.
    pub apex: Vector,
    /// Closure of the stratum's moment image.
    pub image: Polyhedron,
}

/// `X = phi^{-1}(lambda + W)` inside a weighted module without masked
/// coordinates. The null ideal is the annihilator of `W`.
#[derive(Clone, Debug)]
pub struct AffineSlice {
    module: WeightedModule,
    lambda: Vector,
    direction: Subspace,
    null_ideal: Subspace,
    strata: Vec<Stratum>,
}

fn weight_rows(module: &WeightedModule) -> Vec<Vector> {
    (0..module.n_coords()).map(|j| module.weight(j)).collect()
}

/// Kernel of the infinitesimal action on the given coordinates.
pub(crate) fn action_kernel(module: &WeightedModule, coords: &[usize]) -> Subspace {
    let rows: Vec<Vector> = coords.iter().map(|&j| module.weight(j)).collect();
    Subspace::kernel_of(module.torus_rank(), &rows).expect("integer rows")
}

fn support_of(mask: usize, m: usize) -> Vec<usize> {
    (0..m).filter(|j| mask & (1 << j) != 0).collect()
}

impl AffineSlice {
    pub fn module(&self) -> &WeightedModule {
        &self.module
    }

    pub fn lambda(&self) -> &Vector {
        &self.lambda
    }

    pub fn direction(&self) -> &Subspace {
        &self.direction
    }

    pub fn null_ideal(&self) -> &Subspace {
        &self.null_ideal
    }

    /// Nonempty support strata in increasing bitmask order.
    pub fn strata(&self) -> &[Stratum] {
        &self.strata
    }

    pub fn stratum(&self, support: &[usize]) -> Option<&Stratum> {
        self.strata.iter().find(|s| s.support == support)
    }

    /// `mu in lambda + W`, as equalities on `g*`.
    pub fn affine_constraints(&self) -> Vec<Halfspace> {
        self.null_ideal
            .basis()
            .iter()
            .map(|f| Halfspace::new(f.clone(), linalg::dot(f, &self.lambda)))
            .collect()
    }

    pub fn contains_value(&self, mu: &[ExtScalar]) -> bool {
        self.direction.contains(&linalg::sub(mu, &self.lambda))
    }

    /// Fails unless `phi(x)` lies in `lambda + W`.
    pub fn check_point(&self, x: &ModelPoint) -> Result<Vector> {
        let e = x.real();
        let mu = moment_quadratic(&self.module, &e)?;
        if !self.contains_value(&mu) {
            return Err(MomentError::PointNotOnModel(format!(
                "moment value {} is not in lambda + W",
                crate::presymlin::format_vector(&mu)
            )));
        }
        Ok(e)
    }

    /// Real point with `z_j = 1` on the support. It lies on the parallel
    /// slice through its own moment value; every tangent-level quantity
    /// depends only on the support and `W`.
    pub fn representative(&self, support: &[usize]) -> Vector {
        let mut e = linalg::zeros(self.module.real_dim());
        for &j in support {
            e[2 * j] = ExtScalar::one();
        }
        e
    }

    /// `{t >= 0 on S : sum_{j in S} t_j alpha_j in lambda + W}`.
    fn support_polyhedron(&self, support: &[usize]) -> Result<Polyhedron> {
        let k = support.len();
        let ineqs: Vec<Halfspace> = (0..k)
            .map(|i| Halfspace::new(linalg::unit(k, i), ExtScalar::zero()))
            .collect();
        let eqs: Vec<Halfspace> = self
            .null_ideal
            .basis()
            .iter()
            .map(|f| {
                let normal = support
                    .iter()
                    .map(|&j| linalg::dot(f, &self.module.weight(j)))
                    .collect();
                Halfspace::new(normal, linalg::dot(f, &self.lambda))
            })
            .collect();
        Polyhedron::from_constraints(k, &ineqs, &eqs)
    }

    fn weights_on(&self, support: &[usize], t: &[ExtScalar]) -> Vector {
        support
            .iter()
            .zip(t)
            .fold(linalg::zeros(self.module.torus_rank()), |acc, (&j, tj)| {
                linalg::axpy(&acc, tj, &self.module.weight(j))
            })
    }

    fn image_of(&self, support: &[usize], p: &Polyhedron) -> Result<Polyhedron> {
        let d = self.module.torus_rank();
        let v = p.vrep();
        let gens = VRep {
            vertices: v
                .vertices
                .iter()
                .map(|t| self.weights_on(support, t))
                .collect(),
            rays: v.rays.iter().map(|t| self.weights_on(support, t)).collect(),
            lines: v
                .lines
                .iter()
                .map(|t| self.weights_on(support, t))
                .collect(),
        };
        Polyhedron::from_generators(d, &gens)
    }
}

/// Validates and builds the slice `phi^{-1}(lambda + W)`.
///
/// Requires: no masked coordinates; the kernel of the action inside the
/// null ideal `W°`; the open stratum (full support) nonempty; and `W`
/// transverse to every stratum it meets (`W + span(alpha_S) = g*`).
pub fn build_affine_slice(
    module: WeightedModule,
    lambda: Vector,
    w: Subspace,
) -> Result<AffineSlice> {
    let d = module.torus_rank();
    let m = module.n_coords();
    if !module.masked().is_empty() {
        return Err(MomentError::InvalidModel(
            "affine slices need an unmasked module".into(),
        ));
    }
    if lambda.len() != d || w.ambient_dim() != d {
        return Err(MomentError::DimensionMismatch(format!(
            "lambda has length {} and W lives in R^{}, torus rank is {d}",
            lambda.len(),
            w.ambient_dim()
        )));
    }
    if m > crate::polyhedra::MAX_DIM {
        return Err(MomentError::DeskScaleExceeded(format!(
            "{m} complex coordinates"
        )));
    }
    ensure_field(lambda.iter().chain(w.basis().iter().flatten()))?;
    let null_ideal = w.annihilator();
    let all: Vec<usize> = (0..m).collect();
    let k = action_kernel(&module, &all);
    if !null_ideal.contains_subspace(&k) {
        return Err(MomentError::InvalidModel(format!(
            "the action has kernel {k} which is not inside the null ideal {null_ideal}"
        )));
    }
    let mut slice = AffineSlice {
        module,
        lambda,
        direction: w,
        null_ideal,
        strata: Vec::new(),
    };

    for mask in 0..(1usize << m) {
        let support = support_of(mask, m);
        let p = slice.support_polyhedron(&support)?;
        if p.is_empty() {
            continue;
        }
        let v = p.vrep();
        let n = ExtScalar::from_int(v.vertices.len() as i64);
        let mut t = v
            .vertices
            .iter()
            .fold(linalg::zeros(support.len()), |acc, x| linalg::add(&acc, x));
        t = linalg::scale(&n.checked_inv()?, &t);
        for r in &v.rays {
            t = linalg::add(&t, r);
        }
        let positive = t
            .iter()
            .all(|x| x.sign().expect("field data") == Ordering::Greater);
        if !positive {
            continue;
        }
        let mut spans: Vec<Vector> = slice.direction.basis().to_vec();
        spans.extend(support.iter().map(|&j| slice.module.weight(j)));
        if linalg::rank(&spans, d) < d {
            return Err(MomentError::NotTransverse { support });
        }
        let apex = slice.weights_on(&support, &t);
        let image = slice.image_of(&support, &p)?;
        slice.strata.push(Stratum {
            support,
            t,
            apex,
            image,
        });
    }
    if slice.strata.last().map(|s| s.support.len()) != Some(m) {
        return Err(MomentError::SliceMissesImage(format!(
            "lambda = {}, W = {}",
            crate::presymlin::format_vector(&slice.lambda),
            slice.direction
        )));
    }
    Ok(slice)
}

/// Findings attached to a moment image.
#[derive(Clone, Debug)]
pub struct MomentImageReport {
    /// `aff Phi(X) = lambda + W`.
    pub affine_span: AffineSubspace,
    pub affine_span_matches: bool,
    /// The image computed a second way, as the linear image of all
    /// nonnegative `t` with `sum t_j alpha_j in lambda + W`, agrees.
    pub symplectization_matches: bool,
    pub rational_polyhedral: bool,
    pub null_subgroup_closed: bool,
    pub quasilattice: QuasiLattice,
}

impl MomentImageReport {
    pub fn consistent(&self) -> bool {
        self.affine_span_matches
            && self.symplectization_matches
            && self.rational_polyhedral == self.null_subgroup_closed
            && (self.quasilattice.rank == self.quasilattice.quotient_dim)
                == self.null_subgroup_closed
    }
}

/// `Phi(X) = cone(alpha) cap (lambda + W)`, with its report.
pub fn moment_image(slice: &AffineSlice) -> Result<(Polyhedron, MomentImageReport)> {
    let d = slice.module.torus_rank();
    let cone = Polyhedron::from_generators(
        d,
        &VRep {
            vertices: vec![linalg::zeros(d)],
            rays: weight_rows(&slice.module),
            lines: Vec::new(),
        },
    )?;
    let plane = Polyhedron::from_constraints(d, &[], &slice.affine_constraints())?;
    let image = cone.intersect(&plane)?;
    if image.is_empty() {
        return Err(MomentError::EmptyPolyhedron("moment image".into()));
    }

    let span = affine_span(&image)?;
    let expected = AffineSubspace::new(slice.lambda.clone(), slice.direction.clone());
    let all: Vec<usize> = (0..slice.module.n_coords()).collect();
    let second = slice.image_of(&all, &slice.support_polyhedron(&all)?)?;
    let report = MomentImageReport {
        affine_span_matches: span == expected,
        affine_span: span,
        symplectization_matches: poly_equal(&image, &second)?,
        rational_polyhedral: is_rational_polyhedral(&image)?,
        null_subgroup_closed: null_subgroup_closed(slice),
        quasilattice: quasilattice(&slice.null_ideal),
    };
    debug_assert_eq!(
        report.null_subgroup_closed,
        is_rational_subspace(&slice.null_ideal)
    );
    Ok((image, report))
}

/// Local cone with apex `mu` for points of support `S`:
/// `mu + cone(alpha_j : j not in S) + span(alpha_j : j in S)`, cut by
/// `lambda + W`.
fn cone_at(slice: &AffineSlice, apex: &[ExtScalar], support: &[usize]) -> Result<Polyhedron> {
    let d = slice.module.torus_rank();
    let m = slice.module.n_coords();
    let gens = VRep {
        vertices: vec![apex.to_vec()],
        rays: (0..m)
            .filter(|j| !support.contains(j))
            .map(|j| slice.module.weight(j))
            .collect(),
        lines: support.iter().map(|&j| slice.module.weight(j)).collect(),
    };
    let c = Polyhedron::from_generators(d, &gens)?;
    c.intersect(&Polyhedron::from_constraints(
        d,
        &[],
        &slice.affine_constraints(),
    )?)
}

/// The local cone at a point of the slice.
pub fn local_cone(slice: &AffineSlice, x: &ModelPoint) -> Result<Polyhedron> {
    let e = slice.check_point(x)?;
    let mu = moment_quadratic(&slice.module, &e)?;
    cone_at(slice, &mu, &x.support())
}

/// Local cone shared by all points of a stratum.
pub fn stratum_cone(slice: &AffineSlice, stratum: &Stratum) -> Result<Polyhedron> {
    cone_at(slice, &stratum.apex, &stratum.support)
}

/// Intersection of the local cones of all strata, cut by `lambda + n°`.
pub fn intersect_local_cones(slice: &AffineSlice) -> Result<Polyhedron> {
    let d = slice.module.torus_rank();
    let mut acc = Polyhedron::from_constraints(d, &[], &slice.affine_constraints())?;
    for s in &slice.strata {
        acc = acc.intersect(&stratum_cone(slice, s)?)?;
    }
    Ok(acc)
}

/// A real point on the slice itself for a stratum whose `t` values are
/// twice squares in the scalar field: `x_j = sqrt(2 t_j)`. Returns `None`
/// when some square root is not available exactly.
pub fn exact_point(slice: &AffineSlice, stratum: &Stratum) -> Option<ModelPoint> {
    let m = slice.module.n_coords();
    let mut xs = vec![ExtScalar::zero(); m];
    for (&j, t) in stratum.support.iter().zip(&stratum.t) {
        let q = t.as_rational()? * rat(2, 1);
        let (n, dd) = (q.numer().clone(), q.denom().clone());
        let (rn, rd) = (n.sqrt(), dd.sqrt());
        if &rn * &rn != n || &rd * &rd != dd {
            return None;
        }
        xs[j] = ExtScalar::from_rational(num_rational::BigRational::new(rn, rd));
    }
    Some(ModelPoint::real_parts(xs))
}
