//! The local model at a point of the segment slice, built from its
//! invariants and compared with the one read off the point.
use momentlab::models::{
    build_affine_slice, build_local_model, local_model_at, ModelPoint, WeightedModule,
};
use momentlab::presymlin::{linalg, Subspace};
use momentlab::ExtScalar;

fn main() -> momentlab::Result<()> {
    let w = Subspace::span(2, &[linalg::from_ints(&[1, -1])])?;
    let slice = build_affine_slice(WeightedModule::standard(2), linalg::from_ints(&[1, 0]), w)?;
    // |z_0|^2 = |z_1|^2 = 1: the interior stratum
    let x = ModelPoint::real_parts(vec![ExtScalar::one(), ExtScalar::one()]);
    let found = local_model_at(&slice, &x)?;
    println!(
        "at {x}: dim {}, q dim {}, stabilizer {}",
        found.dim(),
        found.q_dim,
        found.stabilizer
    );

    let a = Subspace::span(2, &[linalg::from_ints(&[1, 1])])?;
    let built = build_local_model(
        linalg::from_ints(&[1, 0]),
        &[linalg::from_ints(&[0, 1])],
        &[linalg::from_ints(&[1])],
        0,
        a,
    )?;
    println!(
        "vertex model: dim {}, q dim {}, basepoint value {:?}",
        built.dim(),
        built.q_dim,
        linalg::to_f64(built.basepoint_value())
    );
    Ok(())
}
