//! Exact presymplectic linear algebra: subspaces, skew forms, orthogonals,
//! reductions and the quadratic moment map of a weighted module.

pub mod form;
pub mod linalg;
pub mod moment;
pub mod subspace;

pub use form::{
    inertia, natural_quotient, quotient, sigma_orthogonal, PresympForm, ReducedSpace, Reduction,
};
pub use linalg::Vector;
pub use moment::{
    fixed_decomposition, hessian_quadratic, moment_component, moment_differential,
    moment_quadratic, orbit_tangent,
};
pub use subspace::{format_vector, AffineSubspace, Subspace};
