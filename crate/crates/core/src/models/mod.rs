//! Linear presymplectic torus models: affine slices of weighted modules and
//! products with null directions.
pub mod analysis;
pub mod module;
pub mod normal_form;
pub mod slice;

pub use analysis::{
    cleanness_at, cleanness_on_stratum, dphi_identities, dphi_kernel_image,
    leaf_stabilizer_algebra, null_ideal, point_data, slices_at, stabilizer_algebra,
    symplectization_check, CleanReport, Model, PointData, SliceData, SymplectizationCheck,
    WeightLabel,
};
pub use module::{ModelPoint, WeightedModule};
pub use normal_form::{build_local_model, local_model_at, LocalModelData};
pub use slice::{
    build_affine_slice, exact_point, intersect_local_cones, local_cone, moment_image, stratum_cone,
    AffineSlice, MomentImageReport, Stratum,
};
