use std::fmt;

use crate::error::{MomentError, Result};
use crate::presymlin::linalg::{self, Vector};
use crate::scalars::{ensure_field, ExtScalar};

/// A linear subspace of a coordinate space, stored by its reduced
/// row-echelon basis so that equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vector>,
}

impl Subspace {
    pub fn span(ambient: usize, vectors: &[Vector]) -> Result<Self> {
        for v in vectors {
            if v.len() != ambient {
                return Err(MomentError::DimensionMismatch(format!(
                    "vector of length {} in a space of dimension {ambient}",
                    v.len()
                )));
            }
        }
        ensure_field(vectors.iter().flatten())?;
        Ok(Self::span_unchecked(ambient, vectors))
    }

    pub(crate) fn span_unchecked(ambient: usize, vectors: &[Vector]) -> Self {
        let (basis, _) = linalg::rref(vectors, ambient);
        Self { ambient, basis }
    }

    pub fn zero(ambient: usize) -> Self {
        Self {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self {
            ambient,
            basis: (0..ambient).map(|i| linalg::unit(ambient, i)).collect(),
        }
    }

    /// Span of the given standard basis vectors.
    pub fn coordinate(ambient: usize, indices: &[usize]) -> Self {
        let vs: Vec<Vector> = indices.iter().map(|&i| linalg::unit(ambient, i)).collect();
        Self::span_unchecked(ambient, &vs)
    }

    /// `{x : r . x = 0}` for every row `r`.
    pub fn kernel_of(ambient: usize, rows: &[Vector]) -> Result<Self> {
        for r in rows {
            if r.len() != ambient {
                return Err(MomentError::DimensionMismatch(format!(
                    "equation of length {} in a space of dimension {ambient}",
                    r.len()
                )));
            }
        }
        ensure_field(rows.iter().flatten())?;
        Ok(Self::span_unchecked(
            ambient,
            &linalg::kernel(rows, ambient),
        ))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.ambient == other.ambient {
            Ok(())
        } else {
            Err(MomentError::DimensionMismatch(format!(
                "subspaces of R^{} and R^{}",
                self.ambient, other.ambient
            )))
        }
    }

    pub fn contains(&self, v: &[ExtScalar]) -> bool {
        if linalg::is_zero(v) {
            return true;
        }
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        linalg::rank(&rows, self.ambient) == self.dim()
    }

    pub fn contains_subspace(&self, other: &Self) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Ok(Self::span_unchecked(self.ambient, &rows))
    }

    /// Annihilator in the dual space, written in dual coordinates.
    pub fn annihilator(&self) -> Self {
        Self::span_unchecked(self.ambient, &linalg::kernel(&self.basis, self.ambient))
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut rows = self.annihilator().basis;
        rows.extend(other.annihilator().basis);
        Ok(Self::span_unchecked(
            self.ambient,
            &linalg::kernel(&rows, self.ambient),
        ))
    }

    /// Image under the linear map with the given matrix (rows = outputs).
    pub fn image(&self, matrix: &[Vector]) -> Result<Self> {
        if matrix.iter().any(|r| r.len() != self.ambient) {
            return Err(MomentError::DimensionMismatch("matrix width".into()));
        }
        ensure_field(matrix.iter().flatten())?;
        let imgs: Vec<Vector> = self
            .basis
            .iter()
            .map(|b| linalg::mat_vec(matrix, b))
            .collect();
        Ok(Self::span_unchecked(matrix.len(), &imgs))
    }

    /// Preimage of `target` under the map `x -> matrix . x` on R^`ambient`.
    pub fn preimage(ambient: usize, matrix: &[Vector], target: &Self) -> Result<Self> {
        if matrix.len() != target.ambient || matrix.iter().any(|r| r.len() != ambient) {
            return Err(MomentError::DimensionMismatch(
                "preimage matrix shape".into(),
            ));
        }
        ensure_field(matrix.iter().flatten())?;
        // x maps into target iff every annihilating functional kills M x.
        let rows: Vec<Vector> = target
            .annihilator()
            .basis
            .iter()
            .map(|f| {
                (0..ambient)
                    .map(|c| {
                        matrix
                            .iter()
                            .zip(f)
                            .fold(ExtScalar::zero(), |acc, (row, fi)| acc + fi * &row[c])
                    })
                    .collect()
            })
            .collect();
        Ok(Self::span_unchecked(
            ambient,
            &linalg::kernel(&rows, ambient),
        ))
    }

    /// Vectors of `self` completing a basis of `sub` (assumed contained) to
    /// one of `self`, chosen greedily from the canonical basis.
    pub fn complement_in(&self, sub: &Self) -> Vec<Vector> {
        let mut rows = sub.basis.clone();
        let mut out = Vec::new();
        let mut r = sub.dim();
        for b in &self.basis {
            rows.push(b.clone());
            let nr = linalg::rank(&rows, self.ambient);
            if nr > r {
                out.push(b.clone());
                r = nr;
            } else {
                rows.pop();
            }
        }
        out
    }

    pub fn float_basis(&self) -> Vec<Vec<f64>> {
        self.basis.iter().map(|b| linalg::to_f64(b)).collect()
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.basis.is_empty() {
            return write!(f, "0 (in R^{})", self.ambient);
        }
        write!(f, "span{{")?;
        for (i, b) in self.basis.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write_vector(f, b)?;
        }
        write!(f, "}}")
    }
}

pub(crate) fn write_vector(f: &mut impl fmt::Write, v: &[ExtScalar]) -> fmt::Result {
    write!(f, "(")?;
    for (i, x) in v.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{x}")?;
    }
    write!(f, ")")
}

pub fn format_vector(v: &[ExtScalar]) -> String {
    let mut s = String::new();
    write_vector(&mut s, v).expect("writing to a string");
    s
}

/// `basepoint + direction`, with the basepoint reduced against the
/// direction so that equal affine spaces compare equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSubspace {
    pub basepoint: Vector,
    pub direction: Subspace,
}

impl AffineSubspace {
    pub fn new(basepoint: Vector, direction: Subspace) -> Self {
        let mut p = basepoint;
        for b in direction.basis() {
            let piv = b
                .iter()
                .position(|x| !x.is_zero())
                .expect("rref rows are nonzero");
            if !p[piv].is_zero() {
                let c = -&p[piv];
                p = linalg::axpy(&p, &c, b);
            }
        }
        Self {
            basepoint: p,
            direction,
        }
    }

    pub fn contains(&self, x: &[ExtScalar]) -> bool {
        self.direction.contains(&linalg::sub(x, &self.basepoint))
    }
}
