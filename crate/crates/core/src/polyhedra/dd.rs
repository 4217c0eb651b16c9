//! Double description for cones `{y : E y = 0, A y >= 0}`.
//!
//! Rows of `A` are added one at a time. While the lineality space is not
//! killed by the new row it shrinks by one; afterwards rays are split by the
//! sign of the row and adjacent pairs across the hyperplane are combined.
//! Adjacency uses the combinatorial test on zero sets, stored as bitmasks.

use std::cmp::Ordering;

use crate::presymlin::linalg::{self, Vector};
use crate::scalars::ExtScalar;

pub(crate) const MAX_ROWS: usize = 127;

struct Ray {
    v: Vector,
    zeros: u128,
}

/// Extreme rays and a lineality basis of the cone.
pub(crate) fn cone_generators(
    dim: usize,
    eqs: &[Vector],
    ineqs: &[Vector],
) -> (Vec<Vector>, Vec<Vector>) {
    assert!(
        ineqs.len() <= MAX_ROWS,
        "callers enforce the desk-scale limit"
    );
    let mut lines = linalg::kernel(eqs, dim);
    let mut rays: Vec<Ray> = Vec::new();

    for (k, h) in ineqs.iter().enumerate() {
        let bit = 1u128 << k;
        if let Some(i0) = lines.iter().position(|l| !linalg::dot(h, l).is_zero()) {
            let mut l0 = lines.remove(i0);
            let mut h0 = linalg::dot(h, &l0);
            if h0.sign().expect("field data") == Ordering::Less {
                l0 = linalg::scale(&-ExtScalar::one(), &l0);
                h0 = -h0;
            }
            let inv = h0.checked_inv().expect("nonzero");
            for l in lines.iter_mut() {
                let c = linalg::dot(h, l);
                if !c.is_zero() {
                    *l = linalg::axpy(l, &-(&c * &inv), &l0);
                }
            }
            for r in rays.iter_mut() {
                let c = linalg::dot(h, &r.v);
                if !c.is_zero() {
                    r.v = normalize(&linalg::axpy(&r.v, &-(&c * &inv), &l0));
                }
                r.zeros |= bit;
            }
            // l0 lies in every earlier hyperplane
            let earlier = bit - 1;
            rays.push(Ray {
                v: normalize(&l0),
                zeros: earlier,
            });
            continue;
        }

        let vals: Vec<ExtScalar> = rays.iter().map(|r| linalg::dot(h, &r.v)).collect();
        let signs: Vec<Ordering> = vals.iter().map(|v| v.sign().expect("field data")).collect();
        let pos: Vec<usize> = (0..rays.len())
            .filter(|&i| signs[i] == Ordering::Greater)
            .collect();
        let neg: Vec<usize> = (0..rays.len())
            .filter(|&i| signs[i] == Ordering::Less)
            .collect();
        if neg.is_empty() {
            for (r, s) in rays.iter_mut().zip(&signs) {
                if *s == Ordering::Equal {
                    r.zeros |= bit;
                }
            }
            continue;
        }

        let mut next: Vec<Ray> = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let common = rays[p].zeros & rays[n].zeros;
                let blocked = rays
                    .iter()
                    .enumerate()
                    .any(|(i, r)| i != p && i != n && r.zeros & common == common);
                if blocked {
                    continue;
                }
                // h(p) * n - h(n) * p lies on the hyperplane
                let v = linalg::add(
                    &linalg::scale(&vals[p], &rays[n].v),
                    &linalg::scale(&-&vals[n], &rays[p].v),
                );
                next.push(Ray {
                    v: normalize(&v),
                    zeros: common | bit,
                });
            }
        }
        let mut kept: Vec<Ray> = Vec::new();
        for (i, r) in rays.into_iter().enumerate() {
            match signs[i] {
                Ordering::Greater => kept.push(r),
                Ordering::Equal => kept.push(Ray {
                    v: r.v,
                    zeros: r.zeros | bit,
                }),
                Ordering::Less => {}
            }
        }
        kept.extend(next);
        rays = kept;
    }
    (rays.into_iter().map(|r| r.v).collect(), lines)
}

/// Scales so the first nonzero entry has absolute value one.
pub(crate) fn normalize(v: &[ExtScalar]) -> Vector {
    let Some(lead) = v.iter().find(|x| !x.is_zero()) else {
        return v.to_vec();
    };
    let a = lead.abs().expect("field data");
    if a == ExtScalar::one() {
        return v.to_vec();
    }
    let inv = a.checked_inv().expect("nonzero");
    linalg::scale(&inv, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presymlin::linalg::from_ints;

    #[test]
    fn orthant_cone() {
        let (rays, lines) = cone_generators(2, &[], &[from_ints(&[1, 0]), from_ints(&[0, 1])]);
        assert!(lines.is_empty());
        assert_eq!(rays.len(), 2);
        assert!(rays.contains(&from_ints(&[1, 0])) && rays.contains(&from_ints(&[0, 1])));
    }

    #[test]
    fn square_pyramid_cone() {
        // cone over the square [-1,1]^2 at height 1
        let ineqs = vec![
            from_ints(&[1, 0, 1]),
            from_ints(&[-1, 0, 1]),
            from_ints(&[0, 1, 1]),
            from_ints(&[0, -1, 1]),
        ];
        let (rays, lines) = cone_generators(3, &[], &ineqs);
        assert!(lines.is_empty());
        assert_eq!(rays.len(), 4);
        for r in &rays {
            assert_eq!(r[0].abs().unwrap(), r[2]);
        }
    }

    #[test]
    fn half_plane_keeps_a_line() {
        let (rays, lines) = cone_generators(2, &[], &[from_ints(&[1, 0])]);
        assert_eq!(lines.len(), 1);
        assert_eq!(rays, vec![from_ints(&[1, 0])]);
    }
}
