//! Dense exact matrices over [`ExtScalar`]. Rows are `Vec<ExtScalar>`.
//!
//! Everything here divides, so inputs must be rational or live in a field
//! basis; callers validate with [`crate::scalars::ensure_field`].

use crate::scalars::ExtScalar;

pub type Vector = Vec<ExtScalar>;

pub fn zeros(n: usize) -> Vector {
    vec![ExtScalar::zero(); n]
}

pub fn unit(n: usize, i: usize) -> Vector {
    let mut v = zeros(n);
    v[i] = ExtScalar::one();
    v
}

pub fn from_ints(xs: &[i64]) -> Vector {
    xs.iter().map(|&x| ExtScalar::from_int(x)).collect()
}

pub fn is_zero(v: &[ExtScalar]) -> bool {
    v.iter().all(ExtScalar::is_zero)
}

pub fn dot(a: &[ExtScalar], b: &[ExtScalar]) -> ExtScalar {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(ExtScalar::zero(), |acc, (x, y)| acc + x * y)
}

pub fn add(a: &[ExtScalar], b: &[ExtScalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[ExtScalar], b: &[ExtScalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(c: &ExtScalar, v: &[ExtScalar]) -> Vector {
    v.iter().map(|x| c * x).collect()
}

/// `a + c * b`
pub fn axpy(a: &[ExtScalar], c: &ExtScalar, b: &[ExtScalar]) -> Vector {
    a.iter()
        .zip(b)
        .map(|(x, y)| if y.is_zero() { x.clone() } else { x + c * y })
        .collect()
}

pub fn mat_vec(m: &[Vector], v: &[ExtScalar]) -> Vector {
    m.iter().map(|row| dot(row, v)).collect()
}

pub fn transpose(m: &[Vector], ncols: usize) -> Vec<Vector> {
    (0..ncols)
        .map(|c| m.iter().map(|row| row[c].clone()).collect())
        .collect()
}

pub fn to_f64(v: &[ExtScalar]) -> Vec<f64> {
    v.iter().map(ExtScalar::float_eval).collect()
}

/// Reduced row-echelon form; returns the nonzero rows and their pivot
/// columns. Pivots are the first nonzero entry in column order.
pub fn rref(rows: &[Vector], ncols: usize) -> (Vec<Vector>, Vec<usize>) {
    let mut m: Vec<Vector> = rows.iter().filter(|r| !is_zero(r)).cloned().collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = m[rank][col].checked_inv().expect("nonzero pivot");
        if inv != ExtScalar::one() {
            m[rank] = scale(&inv, &m[rank]);
        }
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_zero() {
                let f = -&m[r][col];
                m[r] = axpy(&m[r], &f, &m[rank]);
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    m.truncate(rank);
    (m, pivots)
}

pub fn rank(rows: &[Vector], ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

/// Basis of `{x : row . x = 0 for every row}`.
pub fn kernel(rows: &[Vector], ncols: usize) -> Vec<Vector> {
    let (r, pivots) = rref(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = zeros(ncols);
            v[f] = ExtScalar::one();
            for (row, &p) in r.iter().zip(&pivots) {
                v[p] = -&row[f];
            }
            v
        })
        .collect()
}

/// Some solution of `rows . x = rhs`, or `None` if inconsistent.
pub fn solve(rows: &[Vector], rhs: &[ExtScalar], ncols: usize) -> Option<Vector> {
    let aug: Vec<Vector> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.clone();
            row.push(b.clone());
            row
        })
        .collect();
    let (r, pivots) = rref(&aug, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = zeros(ncols);
    for (row, &p) in r.iter().zip(&pivots) {
        x[p] = row[ncols].clone();
    }
    Some(x)
}

/// Inverse of a square matrix, `None` if singular.
pub fn inverse(m: &[Vector]) -> Option<Vec<Vector>> {
    let n = m.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let aug: Vec<Vector> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend(unit(n, i));
            row
        })
        .collect();
    let (r, pivots) = rref(&aug, 2 * n);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_and_solve_small() {
        let a = vec![from_ints(&[1, 2, 3]), from_ints(&[2, 4, 6])];
        assert_eq!(rank(&a, 3), 1);
        let k = kernel(&a, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(is_zero(&mat_vec(&a, v)));
        }
        let x = solve(&a, &from_ints(&[6, 12]), 3).unwrap();
        assert_eq!(mat_vec(&a, &x), from_ints(&[6, 12]));
        assert!(solve(&a, &from_ints(&[6, 11]), 3).is_none());
    }

    #[test]
    fn inverse_round_trip() {
        let a = vec![from_ints(&[2, 1]), from_ints(&[1, 1])];
        let inv = inverse(&a).unwrap();
        assert_eq!(
            mat_vec(&inv, &mat_vec(&a, &from_ints(&[3, -5]))),
            from_ints(&[3, -5])
        );
        assert!(inverse(&[from_ints(&[1, 2]), from_ints(&[2, 4])]).is_none());
    }
}
