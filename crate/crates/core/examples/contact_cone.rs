//! The cone over the segment image, and samples of the union of its dilates.
use momentlab::models::{build_affine_slice, moment_image, WeightedModule};
use momentlab::polyhedra::homogenize;
use momentlab::presymlin::{format_vector, linalg, Subspace};
use momentlab::sampler::{contact_cone_sample, CurveSpec};

fn main() -> momentlab::Result<()> {
    let w = Subspace::span(2, &[linalg::from_ints(&[1, -1])])?;
    let slice = build_affine_slice(WeightedModule::standard(2), linalg::from_ints(&[1, 0]), w)?;
    let (image, _) = moment_image(&slice)?;
    let cone = homogenize(&image)?;
    for h in cone.halfspaces() {
        println!("{} . (y, t) >= {}", format_vector(&h.normal), h.offset);
    }
    let line = CurveSpec::Affine {
        point: vec![1.0, 0.0],
        direction: vec![-1.0, 1.0],
        range: None,
    };
    let cloud = contact_cone_sample(&line, 5, 2.0, 7)?;
    for p in &cloud.points {
        println!("{p:?}");
    }
    Ok(())
}
