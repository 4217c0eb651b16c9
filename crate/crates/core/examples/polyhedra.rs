//! Exact polyhedra: H to V conversion, projection and homogenization.
use momentlab::polyhedra::{homogenize, project, Halfspace, Polyhedron};
use momentlab::presymlin::format_vector;

fn main() -> momentlab::Result<()> {
    // the unit simplex in R^3
    let ineqs: Vec<Halfspace> = (0..3)
        .map(|i| {
            let mut n = [0; 3];
            n[i] = 1;
            Halfspace::from_ints(&n, 0)
        })
        .collect();
    let simplex = Polyhedron::from_constraints(3, &ineqs, &[Halfspace::from_ints(&[1, 1, 1], 1)])?;
    for v in &simplex.vrep().vertices {
        println!("vertex {}", format_vector(v));
    }
    let shadow = project(&simplex, &[0, 1])?;
    println!(
        "projection to the first two coordinates has {} vertices",
        shadow.vrep().vertices.len()
    );
    let cone = homogenize(&shadow)?;
    for r in &cone.vrep().rays {
        println!("cone ray {}", format_vector(r));
    }
    Ok(())
}
