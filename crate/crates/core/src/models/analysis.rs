use crate::error::{MomentError, Result};
use crate::models::module::{ModelPoint, WeightedModule};
use crate::models::slice::{action_kernel, AffineSlice};
use crate::presymlin::linalg::{self, Vector};
use crate::presymlin::{
    moment_differential, natural_quotient, orbit_tangent, sigma_orthogonal, PresympForm, Reduction,
    Subspace,
};
use crate::scalars::ExtScalar;

/// A presymplectic Hamiltonian torus model built from a weighted module.
pub trait Model {
    fn module(&self) -> &WeightedModule;

    fn null_ideal_space(&self) -> Subspace;

    /// Tangent space of the model at a point of the ambient module. For an
    /// affine slice this is the tangent space of the parallel slice through
    /// the point, so representatives off the slice are allowed.
    fn tangent_space(&self, e: &[ExtScalar]) -> Result<Subspace>;

    /// Validates `x` and returns its real coordinates.
    fn check_on_model(&self, x: &ModelPoint) -> Result<Vector>;

    fn slice(&self) -> Option<&AffineSlice> {
        None
    }
}

/// A weighted module is a model by itself: symplectic, or a product with a
/// null factor when some coordinates are masked.
impl Model for WeightedModule {
    fn module(&self) -> &WeightedModule {
        self
    }

    fn null_ideal_space(&self) -> Subspace {
        action_kernel(self, &self.unmasked())
    }

    fn tangent_space(&self, e: &[ExtScalar]) -> Result<Subspace> {
        self.check_point(e)?;
        Ok(Subspace::full(self.real_dim()))
    }

    fn check_on_model(&self, x: &ModelPoint) -> Result<Vector> {
        let e = x.real();
        self.check_point(&e)?;
        Ok(e)
    }
}

impl Model for AffineSlice {
    fn module(&self) -> &WeightedModule {
        AffineSlice::module(self)
    }

    fn null_ideal_space(&self) -> Subspace {
        self.null_ideal().clone()
    }

    fn tangent_space(&self, e: &[ExtScalar]) -> Result<Subspace> {
        let dphi = moment_differential(AffineSlice::module(self), e)?;
        Subspace::preimage(
            AffineSlice::module(self).real_dim(),
            &dphi,
            self.direction(),
        )
    }

    fn check_on_model(&self, x: &ModelPoint) -> Result<Vector> {
        self.check_point(x)
    }

    fn slice(&self) -> Option<&AffineSlice> {
        Some(self)
    }
}

/// Null ideal of a model: `W°` for slices, the kernel of the action on the
/// symplectic factor for modules.
pub fn null_ideal<M: Model + ?Sized>(model: &M) -> Subspace {
    model.null_ideal_space()
}

/// Linear data of a model at one point.
#[derive(Clone, Debug)]
pub struct PointData {
    pub support: Vec<usize>,
    /// `T_x X`
    pub tangent: Subspace,
    /// Tangent space of the torus orbit.
    pub orbit: Subspace,
    /// Tangent space of the null leaf, `ker omega_x`.
    pub leaf: Subspace,
    /// `g_x`
    pub stabilizer: Subspace,
    /// `g_xbar = {xi : xi(x) tangent to the leaf}`
    pub leaf_stabilizer: Subspace,
}

/// Columns `xi_k(e)` of the map `xi -> xi(e)`, as rows of a `2m x d` matrix.
fn orbit_map(module: &WeightedModule, e: &[ExtScalar]) -> Vec<Vector> {
    let d = module.torus_rank();
    let cols: Vec<Vector> = (0..d)
        .map(|k| linalg::mat_vec(&module.action_matrix(&linalg::unit(d, k)).expect("unit"), e))
        .collect();
    linalg::transpose(&cols, module.real_dim())
}

fn support_of(e: &[ExtScalar]) -> Vec<usize> {
    (0..e.len() / 2)
        .filter(|&j| !e[2 * j].is_zero() || !e[2 * j + 1].is_zero())
        .collect()
}

/// Point data without checking that `e` lies on the model itself.
pub fn point_data<M: Model + ?Sized>(model: &M, e: &[ExtScalar]) -> Result<PointData> {
    let module = model.module();
    let n = module.real_dim();
    let sigma = module.form();
    let tangent = model.tangent_space(e)?;
    let orbit = orbit_tangent(module, e)?;
    let leaf = tangent.intersection(&sigma_orthogonal(&sigma, &tangent)?)?;
    let support = support_of(e);
    let stabilizer = action_kernel(module, &support);
    let leaf_stabilizer = Subspace::preimage(module.torus_rank(), &orbit_map(module, e), &leaf)?;
    debug_assert_eq!(leaf.ambient_dim(), n);
    Ok(PointData {
        support,
        tangent,
        orbit,
        leaf,
        stabilizer,
        leaf_stabilizer,
    })
}

/// `g_x = {xi : <alpha_j, xi> = 0 for j in supp(x)}`.
pub fn stabilizer_algebra<M: Model + ?Sized>(model: &M, x: &ModelPoint) -> Result<Subspace> {
    model.check_on_model(x)?;
    Ok(action_kernel(model.module(), &x.support()))
}

/// `g_xbar`, from the tangency condition `xi(x) in T_x F`.
pub fn leaf_stabilizer_algebra<M: Model + ?Sized>(model: &M, x: &ModelPoint) -> Result<Subspace> {
    let e = model.check_on_model(x)?;
    Ok(point_data(model, &e)?.leaf_stabilizer)
}

#[derive(Clone, Debug)]
pub struct CleanReport {
    pub stabilizer: Subspace,
    pub leaf_stabilizer: Subspace,
    pub null_ideal: Subspace,
    /// `g_xbar = g_x + n`
    pub clean: bool,
}

fn clean_report<M: Model + ?Sized>(model: &M, e: &[ExtScalar]) -> Result<CleanReport> {
    let pd = point_data(model, e)?;
    let n = model.null_ideal_space();
    let clean = pd.leaf_stabilizer == pd.stabilizer.sum(&n)?;
    Ok(CleanReport {
        stabilizer: pd.stabilizer,
        leaf_stabilizer: pd.leaf_stabilizer,
        null_ideal: n,
        clean,
    })
}

pub fn cleanness_at<M: Model + ?Sized>(model: &M, x: &ModelPoint) -> Result<CleanReport> {
    let e = model.check_on_model(x)?;
    clean_report(model, &e)
}

/// Cleanness at the representative of a support stratum of a slice.
pub fn cleanness_on_stratum(slice: &AffineSlice, support: &[usize]) -> Result<CleanReport> {
    clean_report(slice, &slice.representative(support))
}

/// Kernel and image of `T_x Phi` on `T_x X`.
pub fn dphi_kernel_image<M: Model + ?Sized>(
    model: &M,
    x: &ModelPoint,
) -> Result<(Subspace, Subspace)> {
    let e = model.check_on_model(x)?;
    dphi_at(model, &e)
}

pub(crate) fn dphi_at<M: Model + ?Sized>(
    model: &M,
    e: &[ExtScalar],
) -> Result<(Subspace, Subspace)> {
    let module = model.module();
    let dphi = moment_differential(module, e)?;
    let tangent = model.tangent_space(e)?;
    let kernel = tangent.intersection(&Subspace::kernel_of(module.real_dim(), &dphi)?)?;
    let image = tangent.image(&dphi)?;
    Ok((kernel, image))
}

/// Checks `ker T_x Phi = T_x(G x)^omega` and `im T_x Phi = g_xbar°` at `e`.
pub fn dphi_identities<M: Model + ?Sized>(model: &M, e: &[ExtScalar]) -> Result<bool> {
    let (kernel, image) = dphi_at(model, e)?;
    let pd = point_data(model, e)?;
    let orth = pd
        .tangent
        .intersection(&sigma_orthogonal(&model.module().form(), &pd.orbit)?)?;
    Ok(kernel == orth && image == pd.leaf_stabilizer.annihilator())
}

/// A weight label on a slice: an invariant plane of one coordinate, or the
/// zero-weight remainder (`coordinate == None`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightLabel {
    pub coordinate: Option<usize>,
    /// The weight as an element of `g*`.
    pub weight: Vector,
    /// Values of the weight on the canonical basis of `g_x`.
    pub restricted: Vector,
    pub real_dim: usize,
}

/// Symplectic slice `S_x` and null slice `V_x` with their `g_x`-weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceData {
    pub symplectic_dim: usize,
    pub symplectic_labels: Vec<WeightLabel>,
    pub null_dim: usize,
    pub null_labels: Vec<WeightLabel>,
}

impl SliceData {
    /// `g_x`-weights of `S_x` as complex lines, zero weights included.
    pub fn symplectic_weights(&self) -> Vec<Vector> {
        let mut out = Vec::new();
        for l in &self.symplectic_labels {
            for _ in 0..l.real_dim / 2 {
                out.push(l.restricted.clone());
            }
        }
        out
    }
}

fn labels(
    module: &WeightedModule,
    stab: &Subspace,
    planes: Vec<usize>,
    total: usize,
) -> Result<Vec<WeightLabel>> {
    let restrict = |w: &Vector| {
        stab.basis()
            .iter()
            .map(|b| linalg::dot(w, b))
            .collect::<Vector>()
    };
    let mut out: Vec<WeightLabel> = planes
        .iter()
        .map(|&j| {
            let w = module.weight(j);
            WeightLabel {
                coordinate: Some(j),
                restricted: restrict(&w),
                weight: w,
                real_dim: 2,
            }
        })
        .collect();
    let rest = total
        .checked_sub(2 * planes.len())
        .ok_or_else(|| MomentError::Internal("weight planes exceed the slice".into()))?;
    if rest > 0 {
        out.push(WeightLabel {
            coordinate: None,
            weight: linalg::zeros(module.torus_rank()),
            restricted: linalg::zeros(stab.dim()),
            real_dim: rest,
        });
    }
    Ok(out)
}

pub(crate) fn slices_from(
    model: &(impl Model + ?Sized),
    e: &[ExtScalar],
) -> Result<(PointData, SliceData)> {
    let module = model.module();
    let sigma = module.form();
    let pd = point_data(model, e)?;
    let f = pd
        .tangent
        .intersection(&sigma_orthogonal(&sigma, &pd.orbit)?)?;
    let s = natural_quotient(&sigma, &f, Reduction::Subspace)?;
    if !s.induced_form.is_nondegenerate() {
        return Err(MomentError::Internal(
            "symplectic slice form is degenerate".into(),
        ));
    }
    let outside: Vec<usize> = (0..module.n_coords())
        .filter(|j| !pd.support.contains(j))
        .collect();
    let sym_planes: Vec<usize> = outside
        .iter()
        .copied()
        .filter(|&j| !module.is_masked(j))
        .collect();
    let null_planes: Vec<usize> = outside
        .iter()
        .copied()
        .filter(|&j| module.is_masked(j))
        .collect();
    let null_dim = pd.orbit.sum(&pd.leaf)?.dim() - pd.orbit.dim();
    let data = SliceData {
        symplectic_dim: s.quotient_dim,
        symplectic_labels: labels(module, &pd.stabilizer, sym_planes, s.quotient_dim)?,
        null_dim,
        null_labels: labels(module, &pd.stabilizer, null_planes, null_dim)?,
    };
    Ok((pd, data))
}

/// `S_x = (T_x(G x)^omega)^natural` and `V_x = (T_x(G x) + T_x F) / T_x(G x)`.
pub fn slices_at<M: Model + ?Sized>(model: &M, x: &ModelPoint) -> Result<SliceData> {
    let e = model.check_on_model(x)?;
    Ok(slices_from(model, &e)?.1)
}

/// Dimensions entering the comparison between a model and its linear
/// symplectization `T_x X (+) (T_x F)*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplectizationCheck {
    pub slice_dim: usize,
    pub null_dim: usize,
    pub symplectized_slice_dim: usize,
}

impl SymplectizationCheck {
    /// `dim S_x(M) = dim S_x(X) + 2 dim V_x(X)`
    pub fn holds(&self) -> bool {
        self.symplectized_slice_dim == self.slice_dim + 2 * self.null_dim
    }
}

/// Builds `E_M = T_x X (+) K*` with `K = T_x F`, pairing `K*` against the
/// `K`-component of a splitting `T_x X = C (+) K`, and compares symplectic
/// slices.
pub fn symplectization_check<M: Model + ?Sized>(
    model: &M,
    e: &[ExtScalar],
) -> Result<SymplectizationCheck> {
    let module = model.module();
    let sigma = module.form();
    let (pd, data) = slices_from(model, e)?;
    let comp = pd.tangent.complement_in(&pd.leaf);
    let mut frame = comp.clone();
    frame.extend(pd.leaf.basis().iter().cloned());
    let t = frame.len();
    let k = pd.leaf.dim();
    let c = comp.len();
    let n = t + k;

    let mut m = vec![linalg::zeros(n); n];
    for a in 0..t {
        for b in 0..t {
            m[a][b] = sigma.eval(&frame[a], &frame[b]);
        }
    }
    for i in 0..k {
        m[t + i][c + i] = ExtScalar::one();
        m[c + i][t + i] = -ExtScalar::one();
    }
    let sigma_m = PresympForm::new(m)?;
    if !sigma_m.is_nondegenerate() {
        return Err(MomentError::Internal(
            "symplectization is degenerate".into(),
        ));
    }
    let cols = linalg::transpose(&frame, module.real_dim());
    let orbit_m: Vec<Vector> = pd
        .orbit
        .basis()
        .iter()
        .map(|v| {
            let mut coords = linalg::solve(&cols, v, t).expect("orbit is tangent");
            coords.extend(linalg::zeros(k));
            coords
        })
        .collect();
    let orbit_m = Subspace::span(n, &orbit_m)?;
    let s_m = natural_quotient(
        &sigma_m,
        &sigma_orthogonal(&sigma_m, &orbit_m)?,
        Reduction::Subspace,
    )?;
    Ok(SymplectizationCheck {
        slice_dim: data.symplectic_dim,
        null_dim: data.null_dim,
        symplectized_slice_dim: s_m.quotient_dim,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::slice::build_affine_slice;
    use crate::presymlin::linalg::from_ints;
    use crate::scalars::ConstantBasis;

    fn segment() -> AffineSlice {
        let w = Subspace::span(2, &[from_ints(&[1, -1])]).unwrap();
        build_affine_slice(WeightedModule::standard(2), from_ints(&[1, 0]), w).unwrap()
    }

    fn product() -> WeightedModule {
        WeightedModule::new(2, vec![vec![1, 0], vec![1, 1], vec![1, -1]], vec![1, 2]).unwrap()
    }

    fn sqrt2_point() -> ModelPoint {
        let s2 = ConstantBasis::sqrt(2).unwrap().constant("sqrt2").unwrap();
        ModelPoint::real_parts(vec![s2, ExtScalar::zero()])
    }

    fn span(vs: &[&[i64]]) -> Subspace {
        let d = vs[0].len();
        Subspace::span(d, &vs.iter().map(|v| from_ints(v)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn null_ideal_of_product() {
        assert_eq!(null_ideal(&product()), span(&[&[0, 1]]));
        assert!(null_ideal(&WeightedModule::standard(2)).is_zero());
        assert_eq!(null_ideal(&segment()), span(&[&[1, 1]]));
    }

    #[test]
    fn stabilizers() {
        let s = segment();
        let x = sqrt2_point();
        assert_eq!(stabilizer_algebra(&s, &x).unwrap(), span(&[&[0, 1]]));
        assert!(leaf_stabilizer_algebra(&s, &x).unwrap().is_full());
        let origin = ModelPoint::real_parts(vec![ExtScalar::zero(); 2]);
        assert!(stabilizer_algebra(&WeightedModule::standard(2), &origin)
            .unwrap()
            .is_full());
        let generic = ModelPoint::real_parts(vec![ExtScalar::one(); 2]);
        assert!(stabilizer_algebra(&WeightedModule::standard(2), &generic)
            .unwrap()
            .is_zero());
        // symplectic: the two stabilizers agree
        let m = WeightedModule::standard(2);
        assert_eq!(
            leaf_stabilizer_algebra(&m, &x).unwrap(),
            stabilizer_algebra(&m, &x).unwrap()
        );
    }

    #[test]
    fn cleanness_examples() {
        let p = product();
        let v = ModelPoint::real_parts(from_ints(&[0, 1, 1]));
        let r = cleanness_at(&p, &v).unwrap();
        assert!(r.leaf_stabilizer.is_full());
        assert!(r.stabilizer.is_zero());
        assert!(!r.clean);
        let y = ModelPoint::real_parts(from_ints(&[1, 0, 0]));
        let r = cleanness_at(&p, &y).unwrap();
        assert!(r.clean);
        assert_eq!(r.leaf_stabilizer, span(&[&[0, 1]]));

        let s = segment();
        for st in s.strata() {
            assert!(cleanness_on_stratum(&s, &st.support).unwrap().clean);
        }
        assert!(cleanness_at(&s, &sqrt2_point()).unwrap().clean);
    }

    #[test]
    fn dphi_examples() {
        let m = WeightedModule::standard(2);
        let x = ModelPoint::real_parts(from_ints(&[1, 0]));
        let (k, i) = dphi_kernel_image(&m, &x).unwrap();
        assert_eq!(
            k,
            Subspace::kernel_of(4, &[from_ints(&[1, 0, 0, 0])]).unwrap()
        );
        assert_eq!(i, span(&[&[1, 0]]));
        let origin = ModelPoint::real_parts(from_ints(&[0, 0]));
        let (k, i) = dphi_kernel_image(&m, &origin).unwrap();
        assert!(k.is_full() && i.is_zero());
        assert!(dphi_identities(&m, &x.real()).unwrap());
        let s = segment();
        assert!(dphi_identities(&s, &sqrt2_point().real()).unwrap());
        let p = product();
        assert!(dphi_identities(&p, &from_ints(&[1, 0, 0, 1, 1, 0])).unwrap());
    }

    #[test]
    fn slice_data_examples() {
        let s = segment();
        let d = slices_at(&s, &sqrt2_point()).unwrap();
        assert_eq!(d.symplectic_dim, 2);
        assert_eq!(d.null_dim, 0);
        assert_eq!(
            d.symplectic_labels,
            vec![WeightLabel {
                coordinate: Some(1),
                weight: from_ints(&[0, 1]),
                restricted: from_ints(&[1]),
                real_dim: 2
            }]
        );

        let m = WeightedModule::new(2, vec![vec![1, 0], vec![0, 0], vec![1, 1]], vec![]).unwrap();
        let origin = ModelPoint::real_parts(from_ints(&[0, 0, 0]));
        let d = slices_at(&m, &origin).unwrap();
        assert_eq!(d.symplectic_dim, 6);
        assert_eq!(d.null_dim, 0);
        let nonzero = d
            .symplectic_labels
            .iter()
            .filter(|l| !linalg::is_zero(&l.weight))
            .count();
        assert_eq!(nonzero, 2);

        // product model: the null factor is a null slice at y != 0
        let p = product();
        let y = ModelPoint::real_parts(from_ints(&[1, 0, 0]));
        let d = slices_at(&p, &y).unwrap();
        assert_eq!((d.symplectic_dim, d.null_dim), (0, 4));
        let c = symplectization_check(&p, &y.real()).unwrap();
        assert!(c.holds(), "{c:?}");
        let v = from_ints(&[0, 0, 1, 0, 1, 0]);
        let c = symplectization_check(&p, &v).unwrap();
        assert!(c.holds() && c.null_dim > 0, "{c:?}");
    }
}
