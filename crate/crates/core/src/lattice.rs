//! Rationality of subspaces of R^d with respect to Z^d, and ranks of the
//! quasilattices generated by projecting Z^d to a quotient.

use num_rational::BigRational;

use crate::error::{MomentError, Result};
use crate::models::AffineSlice;
use crate::presymlin::linalg::Vector;
use crate::presymlin::Subspace;
use crate::scalars::{common_basis, ensure_field, rational_rank};

/// Images of the standard basis in exact coordinates on `R^d / n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiLattice {
    pub quotient_dim: usize,
    /// Rows whose common kernel is `n`; they are the quotient coordinates.
    pub coordinates: Vec<Vector>,
    /// Image of `e_i`, for each `i`.
    pub generators: Vec<Vector>,
    /// Rank of the subgroup generated by the images.
    pub rank: usize,
}

/// Rational expansion of a vector: the coefficient of every constant of
/// every entry.
fn expand(v: &[crate::scalars::ExtScalar], width: usize) -> Vec<BigRational> {
    v.iter()
        .flat_map(|x| (0..width).map(move |c| x.coeff(c)))
        .collect()
}

fn width_of(vs: &[Vector]) -> usize {
    common_basis(vs.iter().flatten())
        .expect("vectors of one subspace share a basis")
        .map_or(1, |b| b.len())
}

/// Whether `n` has a basis of rational vectors.
///
/// Split every row of the reduced echelon basis into its constant
/// components (rational vectors). The rows of the `1` component are
/// independent through the pivots; every other component vanishes on the
/// pivot columns. So the components span exactly `dim n` dimensions iff all
/// the irrational components vanish, i.e. iff the echelon basis is rational.
pub fn is_rational_subspace(n: &Subspace) -> bool {
    let width = width_of(n.basis());
    let slices: Vec<Vec<BigRational>> = n
        .basis()
        .iter()
        .flat_map(|b| (0..width).map(move |c| b.iter().map(|x| x.coeff(c)).collect()))
        .collect();
    rational_rank(slices) == n.dim()
}

/// Quasilattice of `n` with the reduced echelon annihilator as coordinates.
pub fn quasilattice(n: &Subspace) -> QuasiLattice {
    quasilattice_with(n, n.annihilator().basis().to_vec()).expect("annihilator has kernel n")
}

/// Quasilattice in caller-chosen quotient coordinates.
pub fn quasilattice_with(n: &Subspace, coordinates: Vec<Vector>) -> Result<QuasiLattice> {
    let d = n.ambient_dim();
    ensure_field(coordinates.iter().flatten())?;
    if coordinates.iter().any(|r| r.len() != d) {
        return Err(MomentError::DimensionMismatch(
            "quotient coordinate rows".into(),
        ));
    }
    if Subspace::kernel_of(d, &coordinates)? != *n || coordinates.len() != d - n.dim() {
        return Err(MomentError::InvalidModel(
            "quotient coordinates must be independent with kernel n".into(),
        ));
    }
    let generators: Vec<Vector> = (0..d)
        .map(|i| coordinates.iter().map(|r| r[i].clone()).collect())
        .collect();
    let width = width_of(&coordinates);
    let rank = rational_rank(generators.iter().map(|g| expand(g, width)).collect());
    Ok(QuasiLattice {
        quotient_dim: coordinates.len(),
        coordinates,
        generators,
        rank,
    })
}

/// Whether the null subgroup of the slice is closed, i.e. its null ideal is
/// a rational subspace.
pub fn null_subgroup_closed(slice: &AffineSlice) -> bool {
    is_rational_subspace(slice.null_ideal())
}

/// Dimension of `n cap Q^d`, computed from the annihilator equations split
/// into their rational components. Used as an independent check.
pub fn rational_part_dim(n: &Subspace) -> usize {
    let d = n.ambient_dim();
    let ann = n.annihilator();
    let width = width_of(ann.basis());
    let rows: Vec<Vec<BigRational>> = ann
        .basis()
        .iter()
        .flat_map(|f| (0..width).map(move |c| f.iter().map(|x| x.coeff(c)).collect()))
        .collect();
    d - rational_rank(rows)
}
