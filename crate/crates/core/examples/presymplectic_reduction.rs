//! Orthogonals and the two natural reductions for a degenerate form on R^4.
use momentlab::presymlin::{
    linalg, natural_quotient, sigma_orthogonal, PresympForm, Reduction, Subspace,
};
use momentlab::ExtScalar;

fn main() -> momentlab::Result<()> {
    // standard form on the first plane, zero on the second
    let mut m = vec![vec![ExtScalar::zero(); 4]; 4];
    m[0][1] = ExtScalar::from_int(-1);
    m[1][0] = ExtScalar::one();
    let sigma = PresympForm::new(m)?;
    let f = Subspace::span(
        4,
        &[
            linalg::from_ints(&[1, 0, 0, 0]),
            linalg::from_ints(&[0, 1, 1, 0]),
        ],
    )?;
    println!("ker sigma = {}", sigma.kernel());
    println!("F^sigma = {}", sigma_orthogonal(&sigma, &f)?);
    for which in [Reduction::Subspace, Reduction::Orthogonal] {
        let q = natural_quotient(&sigma, &f, which)?;
        println!(
            "{which:?}: dim {}, nondegenerate {}",
            q.quotient_dim,
            q.induced_form.is_nondegenerate()
        );
    }
    Ok(())
}
