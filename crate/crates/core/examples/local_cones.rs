//! Local cones on the strata of a triangle slice, and their intersection.
use momentlab::models::{
    build_affine_slice, intersect_local_cones, moment_image, stratum_cone, WeightedModule,
};
use momentlab::polyhedra::poly_equal;
use momentlab::presymlin::{format_vector, linalg, Subspace};

fn main() -> momentlab::Result<()> {
    let w = Subspace::kernel_of(3, &[linalg::from_ints(&[1, 1, 1])])?;
    let slice = build_affine_slice(
        WeightedModule::standard(3),
        linalg::from_ints(&[1, 0, 0]),
        w,
    )?;
    for st in slice.strata() {
        let c = stratum_cone(&slice, st)?;
        let rays: Vec<String> = c.vrep().rays.iter().map(|r| format_vector(r)).collect();
        println!(
            "support {:?}: apex {}, rays {}",
            st.support,
            format_vector(&st.apex),
            rays.join(" ")
        );
    }
    let (image, _) = moment_image(&slice)?;
    println!(
        "intersection equals the image: {}",
        poly_equal(&intersect_local_cones(&slice)?, &image)?
    );
    Ok(())
}
