use crate::error::{MomentError, Result};
use crate::models::analysis::{slices_from, Model};
use crate::models::module::ModelPoint;
use crate::presymlin::linalg::{self, Vector};
use crate::presymlin::{moment_quadratic, Subspace};
use crate::scalars::{ensure_field, ExtScalar};

/// Ingredients of the local model `G x_H (q* x S x V)` for a torus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalModelData {
    pub lambda: Vector,
    /// Lie algebra `h` of the stabilizer.
    pub stabilizer: Subspace,
    /// Weights of `S`, one per complex line, as values on the canonical
    /// basis of `h`.
    pub s_weights: Vec<Vector>,
    pub v_dim: usize,
    /// The ideal `a`.
    pub ideal: Subspace,
    /// Image of the splitting `theta: g/h -> g`, chosen to map
    /// `(a + h)/h` into `a`.
    pub theta_image: Vec<Vector>,
    /// `dim q = dim g - dim(h + a)`
    pub q_dim: usize,
    /// Kernel of the action on the model: elements of `h` killing `S`.
    pub action_kernel: Subspace,
}

impl LocalModelData {
    /// `dim G/H + dim q + dim S + dim V`
    pub fn dim(&self) -> usize {
        let d = self.stabilizer.ambient_dim();
        (d - self.stabilizer.dim()) + self.q_dim + 2 * self.s_weights.len() + self.v_dim
    }

    /// Stabilizer of the basepoint `[1, 0, 0, 0]`: the elements of `g`
    /// whose image in `g/h` vanishes.
    pub fn basepoint_stabilizer(&self) -> Subspace {
        let d = self.stabilizer.ambient_dim();
        let rows = self.stabilizer.annihilator().basis().to_vec();
        Subspace::kernel_of(d, &rows).expect("rows of h°")
    }

    /// Moment value at the basepoint.
    pub fn basepoint_value(&self) -> &Vector {
        &self.lambda
    }

    /// Same discrete invariants: `lambda`, `h`, `a`, `dim V`, and the
    /// multiset of `S` weights.
    pub fn same_invariants(&self, other: &Self) -> bool {
        let sorted = |ws: &[Vector]| {
            let mut ws = ws.to_vec();
            ws.sort_by(|a, b| crate::polyhedra::cmp_vectors(a, b));
            ws
        };
        self.lambda == other.lambda
            && self.stabilizer == other.stabilizer
            && self.ideal == other.ideal
            && self.v_dim == other.v_dim
            && sorted(&self.s_weights) == sorted(&other.s_weights)
    }
}

/// Validates local model ingredients.
///
/// `h_basis` spans `h`; each `S` weight gives its values on `h_basis`.
/// Fails when `a cap h` acts nontrivially on `S` or when the kernel of the
/// action is not inside `a`.
pub fn build_local_model(
    lambda: Vector,
    h_basis: &[Vector],
    s_weights: &[Vector],
    v_dim: usize,
    a: Subspace,
) -> Result<LocalModelData> {
    let d = lambda.len();
    if a.ambient_dim() != d {
        return Err(MomentError::DimensionMismatch(format!(
            "ideal lives in R^{}, lambda in R^{d}",
            a.ambient_dim()
        )));
    }
    ensure_field(
        lambda
            .iter()
            .chain(h_basis.iter().flatten())
            .chain(s_weights.iter().flatten()),
    )?;
    let h = Subspace::span(d, h_basis)?;
    if h.dim() != h_basis.len() {
        return Err(MomentError::InvalidIngredients(
            "stabilizer basis is not independent".into(),
        ));
    }
    if let Some(w) = s_weights.iter().find(|w| w.len() != h.dim()) {
        return Err(MomentError::DimensionMismatch(format!(
            "S weight {} has {} values for a stabilizer of dimension {}",
            crate::presymlin::format_vector(w),
            w.len(),
            h.dim()
        )));
    }
    // coordinates of the canonical basis of h in h_basis
    let cols = linalg::transpose(h_basis, d);
    let change: Vec<Vector> = h
        .basis()
        .iter()
        .map(|b| linalg::solve(&cols, b, h_basis.len()).expect("b in span"))
        .collect();
    let canonical: Vec<Vector> = s_weights
        .iter()
        .map(|w| change.iter().map(|c| linalg::dot(c, w)).collect())
        .collect();

    // pairing of an element of h (in g coordinates) with a weight
    let h_cols = linalg::transpose(h.basis(), d);
    let pair = |xi: &Vector, w: &Vector| {
        let c = linalg::solve(&h_cols, xi, h.dim()).expect("xi in h");
        linalg::dot(&c, w)
    };
    let ah = a.intersection(&h)?;
    for xi in ah.basis() {
        if let Some(w) = canonical.iter().find(|w| !pair(xi, w).is_zero()) {
            return Err(MomentError::InvalidIngredients(format!(
                "a cap h contains {} acting on S with weight {}",
                crate::presymlin::format_vector(xi),
                crate::presymlin::format_vector(w)
            )));
        }
    }

    // kernel of the action: xi in h with w(xi) = 0 for all S weights
    let rows: Vec<Vector> = canonical.clone();
    let coeffs = linalg::kernel(&rows, h.dim());
    let kernel_vecs: Vec<Vector> = coeffs
        .iter()
        .map(|c| {
            c.iter()
                .zip(h.basis())
                .fold(linalg::zeros(d), |acc, (ci, b)| linalg::axpy(&acc, ci, b))
        })
        .collect();
    let action_kernel = Subspace::span(d, &kernel_vecs)?;
    if !a.contains_subspace(&action_kernel) {
        return Err(MomentError::InvalidIngredients(format!(
            "the action kernel {action_kernel} is not inside a = {a}"
        )));
    }

    // theta: complement of a cap h in a, then of (h + a) in g
    let mut theta = a.complement_in(&ah);
    let ha = h.sum(&a)?;
    theta.extend(Subspace::full(d).complement_in(&ha));
    let theta_space = Subspace::span(d, &theta)?;
    debug_assert!(theta_space.intersection(&h)?.is_zero());
    debug_assert!(a.contains_subspace(&theta_space.intersection(&ha)?));

    Ok(LocalModelData {
        q_dim: d - ha.dim(),
        lambda,
        stabilizer: h,
        s_weights: canonical,
        v_dim,
        ideal: a,
        theta_image: theta,
        action_kernel,
    })
}

/// Local model ingredients read off a point: `lambda = Phi(x)`, `h = g_x`,
/// the slices at `x`, and the null ideal.
pub fn local_model_at<M: Model + ?Sized>(model: &M, x: &ModelPoint) -> Result<LocalModelData> {
    let e = model.check_on_model(x)?;
    local_model_from(model, &e)
}

pub(crate) fn local_model_from<M: Model + ?Sized>(
    model: &M,
    e: &[ExtScalar],
) -> Result<LocalModelData> {
    let (pd, data) = slices_from(model, e)?;
    if pd.leaf_stabilizer != pd.stabilizer.sum(&model.null_ideal_space())? {
        return Err(MomentError::NotApplicable(
            "local models need a clean point".into(),
        ));
    }
    let lambda = moment_quadratic(model.module(), e)?;
    let lm = build_local_model(
        lambda,
        pd.stabilizer.basis(),
        &data.symplectic_weights(),
        data.null_dim,
        model.null_ideal_space(),
    )?;
    if lm.dim() != pd.tangent.dim() {
        return Err(MomentError::Internal(format!(
            "local model has dimension {} but the tangent space has dimension {}",
            lm.dim(),
            pd.tangent.dim()
        )));
    }
    Ok(lm)
}
