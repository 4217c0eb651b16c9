//! The quadratic moment map of a weighted module and its derivatives.

use crate::error::Result;
use crate::models::WeightedModule;
use crate::presymlin::linalg::{self, Vector};
use crate::presymlin::Subspace;
use crate::scalars::{rat, ExtScalar};

/// `Phi(e) = 1/2 sum_j |z_j|^2 alpha_j` over unmasked coordinates.
pub fn moment_quadratic(module: &WeightedModule, e: &[ExtScalar]) -> Result<Vector> {
    module.check_point(e)?;
    let half = rat(1, 2);
    let mut out = linalg::zeros(module.torus_rank());
    for j in module.unmasked() {
        let (x, y) = (&e[2 * j], &e[2 * j + 1]);
        if x.is_zero() && y.is_zero() {
            continue;
        }
        let r2 = x
            .checked_mul(x)?
            .checked_add(&y.checked_mul(y)?)?
            .scale(&half);
        for (o, &a) in out.iter_mut().zip(&module.weights()[j]) {
            if a != 0 {
                *o = &*o + r2.scale(&rat(a, 1));
            }
        }
    }
    Ok(out)
}

/// `Phi^xi(e) = 1/2 sigma(xi(e), e)`
pub fn moment_component(
    module: &WeightedModule,
    xi: &[ExtScalar],
    e: &[ExtScalar],
) -> Result<ExtScalar> {
    module.check_point(e)?;
    let a = module.action_matrix(xi)?;
    Ok(module
        .form()
        .eval(&linalg::mat_vec(&a, e), e)
        .scale(&rat(1, 2)))
}

/// Second-order term `1/2 sigma(xi(v), v)`; the moment map is quadratic,
/// so this is the same polynomial evaluated on a tangent vector.
pub fn hessian_quadratic(
    module: &WeightedModule,
    xi: &[ExtScalar],
    v: &[ExtScalar],
) -> Result<ExtScalar> {
    moment_component(module, xi, v)
}

/// Matrix of `dPhi_e`: `v -> sum_j (x_j v_xj + y_j v_yj) alpha_j`.
pub fn moment_differential(module: &WeightedModule, e: &[ExtScalar]) -> Result<Vec<Vector>> {
    module.check_point(e)?;
    let n = module.real_dim();
    let mut rows = vec![linalg::zeros(n); module.torus_rank()];
    for j in module.unmasked() {
        for (i, &a) in module.weights()[j].iter().enumerate() {
            if a == 0 {
                continue;
            }
            let c = rat(a, 1);
            rows[i][2 * j] = e[2 * j].scale(&c);
            rows[i][2 * j + 1] = e[2 * j + 1].scale(&c);
        }
    }
    Ok(rows)
}

/// Tangent space of the torus orbit through `e`.
pub fn orbit_tangent(module: &WeightedModule, e: &[ExtScalar]) -> Result<Subspace> {
    module.check_point(e)?;
    let d = module.torus_rank();
    let vs: Vec<Vector> = (0..d)
        .map(|k| {
            let a = module
                .action_matrix(&linalg::unit(d, k))
                .expect("unit vector");
            linalg::mat_vec(&a, e)
        })
        .collect();
    Subspace::span(module.real_dim(), &vs)
}

/// Splits `e` into its part on zero-weight coordinates (fixed by the torus)
/// and the rest.
pub fn fixed_decomposition(module: &WeightedModule, e: &[ExtScalar]) -> Result<(Vector, Vector)> {
    module.check_point(e)?;
    let mut e0 = linalg::zeros(e.len());
    let mut e1 = linalg::zeros(e.len());
    for j in 0..module.n_coords() {
        let target = if module.weights()[j].iter().all(|&a| a == 0) {
            &mut e0
        } else {
            &mut e1
        };
        target[2 * j] = e[2 * j].clone();
        target[2 * j + 1] = e[2 * j + 1].clone();
    }
    Ok((e0, e1))
}
