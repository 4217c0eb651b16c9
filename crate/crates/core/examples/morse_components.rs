//! Critical strata, Morse indices and the vertex check on the segment slice.
use momentlab::models::{build_affine_slice, WeightedModule};
use momentlab::morse::{full_critical_set, morse_bott_check};
use momentlab::presymlin::{format_vector, linalg, Subspace};

fn main() -> momentlab::Result<()> {
    let w = Subspace::span(2, &[linalg::from_ints(&[1, -1])])?;
    let slice = build_affine_slice(WeightedModule::standard(2), linalg::from_ints(&[1, 0]), w)?;
    for xi in [[1, 0], [0, 1], [2, 1]] {
        let rep = morse_bott_check(&slice, &linalg::from_ints(&xi))?;
        println!("xi = {xi:?}: Morse-Bott {}", rep.holds);
        for c in &rep.strata {
            println!(
                "  support {:?}: eta {}, index {}",
                c.support,
                format_vector(&c.eta),
                c.index
            );
        }
    }
    let v = full_critical_set(&slice)?;
    let imgs: Vec<String> = v.images.iter().map(|x| format_vector(x)).collect();
    println!(
        "fixed leaf images {}; hull is the image: {}",
        imgs.join(" "),
        v.hull_matches
    );
    Ok(())
}
