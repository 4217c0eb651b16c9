//! The slice `mu_0 + mu_1 = 1` of the standard action on C^2: exact image,
//! null ideal and cleanness of each stratum.
use momentlab::models::{build_affine_slice, cleanness_on_stratum, moment_image, WeightedModule};
use momentlab::presymlin::{format_vector, linalg, Subspace};

fn main() -> momentlab::Result<()> {
    let w = Subspace::span(2, &[linalg::from_ints(&[1, -1])])?;
    let slice = build_affine_slice(WeightedModule::standard(2), linalg::from_ints(&[1, 0]), w)?;
    println!("null ideal: {}", slice.null_ideal());
    let (image, report) = moment_image(&slice)?;
    for v in &image.vrep().vertices {
        println!("vertex {}", format_vector(v));
    }
    println!("rational: {}", report.rational_polyhedral);
    for st in slice.strata() {
        let c = cleanness_on_stratum(&slice, &st.support)?;
        println!(
            "support {:?}: g_x = {}, g_xbar = {}, clean = {}",
            st.support, c.stabilizer, c.leaf_stabilizer, c.clean
        );
    }
    Ok(())
}
