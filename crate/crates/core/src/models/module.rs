use std::fmt;

use crate::error::{MomentError, Result};
use crate::presymlin::linalg::{self, Vector};
use crate::presymlin::PresympForm;
use crate::scalars::{ensure_field, ExtScalar};

/// A torus `T^d` acting on `C^m` through integer weights, one per complex
/// coordinate. Complex coordinate `j` occupies real coordinates
/// `(2j, 2j+1) = (x_j, y_j)`.
///
/// On unmasked coordinates `sigma(e_x, e_y) = -1`, so that with `xi` acting
/// as `<alpha_j, xi> * i` the moment map is `1/2 sum_j <alpha_j, xi> |z_j|^2`.
/// Masked coordinates carry the zero form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedModule {
    torus_rank: usize,
    weights: Vec<Vec<i64>>,
    masked: Vec<usize>,
}

impl WeightedModule {
    pub fn new(torus_rank: usize, weights: Vec<Vec<i64>>, masked: Vec<usize>) -> Result<Self> {
        if torus_rank == 0 {
            return Err(MomentError::InvalidModel(
                "torus_rank must be positive".into(),
            ));
        }
        if weights.is_empty() {
            return Err(MomentError::InvalidModel(
                "at least one weight is required".into(),
            ));
        }
        for (j, w) in weights.iter().enumerate() {
            if w.len() != torus_rank {
                return Err(MomentError::DimensionMismatch(format!(
                    "weights[{j}] has length {} but torus_rank is {torus_rank}",
                    w.len()
                )));
            }
        }
        let mut masked = masked;
        masked.sort_unstable();
        masked.dedup();
        if let Some(&j) = masked.iter().find(|&&j| j >= weights.len()) {
            return Err(MomentError::InvalidModel(format!(
                "masked coordinate {j} out of range (m = {})",
                weights.len()
            )));
        }
        Ok(Self {
            torus_rank,
            weights,
            masked,
        })
    }

    /// The standard action of `T^m` on `C^m`.
    pub fn standard(m: usize) -> Self {
        let weights = (0..m)
            .map(|j| (0..m).map(|i| i64::from(i == j)).collect())
            .collect();
        Self {
            torus_rank: m,
            weights,
            masked: Vec::new(),
        }
    }

    pub fn torus_rank(&self) -> usize {
        self.torus_rank
    }

    pub fn n_coords(&self) -> usize {
        self.weights.len()
    }

    pub fn real_dim(&self) -> usize {
        2 * self.weights.len()
    }

    pub fn weights(&self) -> &[Vec<i64>] {
        &self.weights
    }

    pub fn weight(&self, j: usize) -> Vector {
        linalg::from_ints(&self.weights[j])
    }

    pub fn masked(&self) -> &[usize] {
        &self.masked
    }

    pub fn is_masked(&self, j: usize) -> bool {
        self.masked.binary_search(&j).is_ok()
    }

    pub fn unmasked(&self) -> Vec<usize> {
        (0..self.n_coords())
            .filter(|&j| !self.is_masked(j))
            .collect()
    }

    /// `<alpha_j, xi>`
    pub fn pairing(&self, j: usize, xi: &[ExtScalar]) -> ExtScalar {
        self.weights[j]
            .iter()
            .zip(xi)
            .filter(|(&a, _)| a != 0)
            .fold(ExtScalar::zero(), |acc, (&a, x)| {
                acc + x.scale(&crate::scalars::rat(a, 1))
            })
    }

    pub fn form(&self) -> PresympForm {
        let n = self.real_dim();
        let mut m = vec![linalg::zeros(n); n];
        for j in self.unmasked() {
            m[2 * j][2 * j + 1] = -ExtScalar::one();
            m[2 * j + 1][2 * j] = ExtScalar::one();
        }
        PresympForm::new(m).expect("block form is skew")
    }

    /// Matrix of the infinitesimal action of `xi` on R^{2m}.
    pub fn action_matrix(&self, xi: &[ExtScalar]) -> Result<Vec<Vector>> {
        self.check_xi(xi)?;
        let n = self.real_dim();
        let mut m = vec![linalg::zeros(n); n];
        for j in 0..self.n_coords() {
            let a = self.pairing(j, xi);
            m[2 * j][2 * j + 1] = -&a;
            m[2 * j + 1][2 * j] = a;
        }
        Ok(m)
    }

    pub fn check_xi(&self, xi: &[ExtScalar]) -> Result<()> {
        if xi.len() != self.torus_rank {
            return Err(MomentError::DimensionMismatch(format!(
                "Lie algebra element of length {} for a torus of rank {}",
                xi.len(),
                self.torus_rank
            )));
        }
        ensure_field(xi)
    }

    pub fn check_point(&self, e: &[ExtScalar]) -> Result<()> {
        if e.len() != self.real_dim() {
            return Err(MomentError::DimensionMismatch(format!(
                "point with {} real coordinates in C^{}",
                e.len(),
                self.n_coords()
            )));
        }
        ensure_field(e)
    }

    /// Real coordinates of complex coordinates `js`.
    pub fn real_indices(js: &[usize]) -> Vec<usize> {
        js.iter().flat_map(|&j| [2 * j, 2 * j + 1]).collect()
    }
}

/// A point of `C^m` with exact real and imaginary parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelPoint {
    coords: Vec<(ExtScalar, ExtScalar)>,
}

impl ModelPoint {
    pub fn new(coords: Vec<(ExtScalar, ExtScalar)>) -> Self {
        Self { coords }
    }

    pub fn from_real(v: &[ExtScalar]) -> Self {
        Self {
            coords: v.chunks(2).map(|c| (c[0].clone(), c[1].clone())).collect(),
        }
    }

    /// Real point with the given real parts.
    pub fn real_parts(xs: Vec<ExtScalar>) -> Self {
        Self {
            coords: xs.into_iter().map(|x| (x, ExtScalar::zero())).collect(),
        }
    }

    pub fn coords(&self) -> &[(ExtScalar, ExtScalar)] {
        &self.coords
    }

    pub fn real(&self) -> Vector {
        self.coords
            .iter()
            .flat_map(|(a, b)| [a.clone(), b.clone()])
            .collect()
    }

    pub fn support(&self) -> Vec<usize> {
        self.coords
            .iter()
            .enumerate()
            .filter(|(_, (a, b))| !a.is_zero() || !b.is_zero())
            .map(|(j, _)| j)
            .collect()
    }
}

impl fmt::Display for ModelPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (j, (a, b)) in self.coords.iter().enumerate() {
            if j > 0 {
                write!(f, ", ")?;
            }
            if b.is_zero() {
                write!(f, "{a}")?;
            } else {
                write!(f, "{a} + i*({b})")?;
            }
        }
        write!(f, ")")
    }
}
