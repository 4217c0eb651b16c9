//! A product of a symplectic plane and a null C^2: cleanness fails where the
//! null factor is nonzero.
use momentlab::models::{cleanness_at, slices_at, ModelPoint, WeightedModule};
use momentlab::ExtScalar;

fn point(xs: [i64; 3]) -> ModelPoint {
    ModelPoint::real_parts(xs.iter().map(|&x| ExtScalar::from_int(x)).collect())
}

fn main() -> momentlab::Result<()> {
    let m = WeightedModule::new(2, vec![vec![1, 0], vec![1, 1], vec![1, -1]], vec![1, 2])?;
    for x in [point([0, 1, 1]), point([1, 0, 0])] {
        let c = cleanness_at(&m, &x)?;
        let s = slices_at(&m, &x)?;
        println!(
            "{x}: g_x = {}, g_xbar = {}, null ideal = {}",
            c.stabilizer, c.leaf_stabilizer, c.null_ideal
        );
        println!(
            "  clean = {}, symplectic slice dim {}, null slice dim {}",
            c.clean, s.symplectic_dim, s.null_dim
        );
    }
    Ok(())
}
