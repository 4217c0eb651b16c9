//! `mu_0 + sqrt2 mu_1 = 1`: the null subgroup is dense in a 2-torus and the
//! image is not rational.
use momentlab::lattice::quasilattice;
use momentlab::models::{build_affine_slice, moment_image, WeightedModule};
use momentlab::presymlin::{format_vector, linalg, Subspace};
use momentlab::{ConstantBasis, ExtScalar};

fn main() -> momentlab::Result<()> {
    let sqrt2 = ConstantBasis::sqrt(2)?.constant("sqrt2")?;
    let w = Subspace::kernel_of(2, &[vec![ExtScalar::one(), sqrt2]])?;
    let slice = build_affine_slice(WeightedModule::standard(2), linalg::from_ints(&[1, 0]), w)?;
    let (image, report) = moment_image(&slice)?;
    for v in &image.vrep().vertices {
        println!("vertex {} ~ {:?}", format_vector(v), linalg::to_f64(v));
    }
    let q = quasilattice(slice.null_ideal());
    for (i, g) in q.generators.iter().enumerate() {
        println!("e_{i} -> {}", format_vector(g));
    }
    println!(
        "quasilattice rank {} of expected {}",
        q.rank, q.quotient_dim
    );
    println!(
        "rational: {}, null subgroup closed: {}",
        report.rational_polyhedral, report.null_subgroup_closed
    );
    Ok(())
}
