use std::cmp::Ordering;

use crate::error::{MomentError, Result};
use crate::presymlin::linalg::{self, Vector};
use crate::presymlin::subspace::Subspace;
use crate::scalars::{ensure_field, ExtScalar};

/// A constant skew-symmetric bilinear form, `sigma(u, v) = u^T M v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresympForm {
    matrix: Vec<Vector>,
}

impl PresympForm {
    pub fn new(matrix: Vec<Vector>) -> Result<Self> {
        let n = matrix.len();
        if matrix.iter().any(|r| r.len() != n) {
            return Err(MomentError::DimensionMismatch(
                "form matrix must be square".into(),
            ));
        }
        ensure_field(matrix.iter().flatten())?;
        for i in 0..n {
            for j in 0..=i {
                if matrix[i][j] != -&matrix[j][i] {
                    return Err(MomentError::InvalidModel(format!(
                        "form is not skew-symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(Self { matrix })
    }

    pub fn zero(n: usize) -> Self {
        Self {
            matrix: vec![linalg::zeros(n); n],
        }
    }

    /// Darboux form on R^{2m} with coordinates (q1, p1, q2, p2, ...) and
    /// `sigma(q_i, p_i) = 1`.
    pub fn standard(m: usize) -> Self {
        let mut f = Self::zero(2 * m);
        for i in 0..m {
            f.matrix[2 * i][2 * i + 1] = ExtScalar::one();
            f.matrix[2 * i + 1][2 * i] = -ExtScalar::one();
        }
        f
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vector] {
        &self.matrix
    }

    pub fn eval(&self, u: &[ExtScalar], v: &[ExtScalar]) -> ExtScalar {
        linalg::dot(u, &linalg::mat_vec(&self.matrix, v))
    }

    pub fn rank(&self) -> usize {
        linalg::rank(&self.matrix, self.dim())
    }

    pub fn kernel(&self) -> Subspace {
        Subspace::span_unchecked(self.dim(), &linalg::kernel(&self.matrix, self.dim()))
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.rank() == self.dim()
    }

    /// Gram matrix on the given vectors.
    pub fn gram(&self, vectors: &[Vector]) -> PresympForm {
        let images: Vec<Vector> = vectors
            .iter()
            .map(|v| linalg::mat_vec(&self.matrix, v))
            .collect();
        let matrix = vectors
            .iter()
            .map(|u| images.iter().map(|mv| linalg::dot(u, mv)).collect())
            .collect();
        PresympForm { matrix }
    }

    fn check(&self, f: &Subspace) -> Result<()> {
        if f.ambient_dim() == self.dim() {
            Ok(())
        } else {
            Err(MomentError::DimensionMismatch(format!(
                "subspace of R^{} for a form on R^{}",
                f.ambient_dim(),
                self.dim()
            )))
        }
    }
}

/// `F^sigma = {u : sigma(u, v) = 0 for all v in F}`.
pub fn sigma_orthogonal(sigma: &PresympForm, f: &Subspace) -> Result<Subspace> {
    sigma.check(f)?;
    let rows: Vec<Vector> = f
        .basis()
        .iter()
        .map(|v| linalg::mat_vec(sigma.matrix(), v))
        .collect();
    Ok(Subspace::span_unchecked(
        sigma.dim(),
        &linalg::kernel(&rows, sigma.dim()),
    ))
}

/// A quotient `A / B` with its induced form, given by representatives in A.
#[derive(Clone, Debug)]
pub struct ReducedSpace {
    pub quotient_dim: usize,
    pub induced_form: PresympForm,
    /// Representatives in the ambient space of a basis of the quotient.
    pub representatives: Vec<Vector>,
    /// Rows mapping a vector of `A` to its quotient coordinates.
    pub projection: Vec<Vector>,
}

/// Which reduction [`natural_quotient`] computes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reduction {
    /// `F / (F cap F^sigma)`
    Subspace,
    /// `F^sigma / ((F^sigma cap F) + ker sigma)`
    Orthogonal,
}

pub fn natural_quotient(
    sigma: &PresympForm,
    f: &Subspace,
    which: Reduction,
) -> Result<ReducedSpace> {
    sigma.check(f)?;
    let fs = sigma_orthogonal(sigma, f)?;
    let (top, bottom) = match which {
        Reduction::Subspace => {
            let b = f.intersection(&fs)?;
            (f.clone(), b)
        }
        Reduction::Orthogonal => {
            let b = fs.intersection(f)?.sum(&sigma.kernel())?;
            (fs, b)
        }
    };
    Ok(quotient(sigma, &top, &bottom))
}

/// `top / bottom` for `bottom` contained in `top`.
pub fn quotient(sigma: &PresympForm, top: &Subspace, bottom: &Subspace) -> ReducedSpace {
    let n = sigma.dim();
    let reps = top.complement_in(bottom);
    // Extend bottom + reps to a basis of R^n, invert, and keep the rows
    // reading off the rep coordinates.
    let mut frame: Vec<Vector> = bottom.basis().to_vec();
    frame.extend(reps.iter().cloned());
    let filler = Subspace::full(n).complement_in(&Subspace::span_unchecked(n, &frame));
    frame.extend(filler);
    let cols = linalg::transpose(&frame, n);
    let inv = linalg::inverse(&cols).expect("frame is a basis");
    let start = bottom.dim();
    let projection = inv[start..start + reps.len()].to_vec();
    ReducedSpace {
        quotient_dim: reps.len(),
        induced_form: sigma.gram(&reps),
        representatives: reps,
        projection,
    }
}

/// Sylvester inertia `(positive, negative, zero)` of a symmetric matrix.
pub fn inertia(sym: &[Vector]) -> Result<(usize, usize, usize)> {
    let n = sym.len();
    let mut m: Vec<Vector> = sym.to_vec();
    let mut pos = 0;
    let mut neg = 0;
    let mut active: Vec<usize> = (0..n).collect();
    while !active.is_empty() {
        // pick a nonzero diagonal entry; otherwise make one by congruence
        let diag = active.iter().copied().find(|&i| !m[i][i].is_zero());
        let pivot = match diag {
            Some(i) => i,
            None => {
                let pair = active.iter().copied().find_map(|i| {
                    active
                        .iter()
                        .copied()
                        .find(|&j| j != i && !m[i][j].is_zero())
                        .map(|j| (i, j))
                });
                let Some((i, j)) = pair else {
                    break;
                };
                // e_i <- e_i + e_j: row and column operation
                for k in 0..n {
                    let v = &m[i][k] + &m[j][k];
                    m[i][k] = v;
                }
                for k in 0..n {
                    let v = &m[k][i] + &m[k][j];
                    m[k][i] = v;
                }
                i
            }
        };
        let d = m[pivot][pivot].clone();
        match d.sign()? {
            Ordering::Greater => pos += 1,
            Ordering::Less => neg += 1,
            Ordering::Equal => unreachable!("pivot is nonzero"),
        }
        let dinv = d.checked_inv()?;
        active.retain(|&k| k != pivot);
        for &r in &active {
            if m[r][pivot].is_zero() {
                continue;
            }
            let f = &m[r][pivot] * &dinv;
            for &c in &active {
                let v = &m[r][c] - &f * &m[pivot][c];
                m[r][c] = v;
            }
        }
        for &r in &active {
            m[r][pivot] = ExtScalar::zero();
            m[pivot][r] = ExtScalar::zero();
        }
    }
    Ok((pos, neg, n - pos - neg))
}
