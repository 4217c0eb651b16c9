//! Random slice generators and a brute-force image oracle shared by the
//! integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use momentlab::models::{build_affine_slice, moment_image, AffineSlice, WeightedModule};
use momentlab::polyhedra::Polyhedron;
use momentlab::presymlin::{linalg, Subspace, Vector};
use momentlab::scalars::{rat, ConstantBasis, ExtScalar};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn sqrt2_basis() -> Arc<ConstantBasis> {
    ConstantBasis::sqrt(2).unwrap()
}

/// `a + b sqrt2`.
pub fn q_sqrt2(basis: &Arc<ConstantBasis>, a: i64, b: i64) -> ExtScalar {
    ExtScalar::from_coeffs(basis, vec![rat(a, 1), rat(b, 1)]).unwrap()
}

fn random_weights(r: &mut ChaCha8Rng, d: usize, m: usize) -> Vec<Vec<i64>> {
    loop {
        let w: Vec<Vec<i64>> = (0..m)
            .map(|_| (0..d).map(|_| r.random_range(-1..=2)).collect())
            .collect();
        let rows: Vec<Vector> = w.iter().map(|x| linalg::from_ints(x)).collect();
        if linalg::rank(&rows, d) == d {
            return w;
        }
    }
}

/// One random slice attempt: `d <= 5`, `d <= m <= min(d + 2, 6)`, lambda in
/// the interior of the weight cone, `W` rational or with entries in
/// `Q + Q sqrt2`. `None` when the attempt is not transverse or unbounded.
pub fn try_random_slice(r: &mut ChaCha8Rng, irrational: bool) -> Option<AffineSlice> {
    let d = r.random_range(1..=5);
    let m = r.random_range(d..=(d + 2).min(6));
    let weights = random_weights(r, d, m);
    let module = WeightedModule::new(d, weights.clone(), Vec::new()).ok()?;
    let mut lambda = linalg::zeros(d);
    for w in &weights {
        let t = ExtScalar::from_int(r.random_range(1..=3));
        lambda = linalg::axpy(&lambda, &t, &linalg::from_ints(w));
    }
    let k = r.random_range(0..d);
    let basis = sqrt2_basis();
    let dirs: Vec<Vector> = (0..k)
        .map(|_| {
            (0..d)
                .map(|_| {
                    let a = r.random_range(-2..=2);
                    if irrational {
                        q_sqrt2(&basis, a, r.random_range(-1..=1))
                    } else {
                        ExtScalar::from_int(a)
                    }
                })
                .collect()
        })
        .collect();
    let w = Subspace::span(d, &dirs).ok()?;
    let slice = build_affine_slice(module, lambda, w).ok()?;
    let (image, _) = moment_image(&slice).ok()?;
    image.is_bounded().then_some(slice)
}

/// `count` bounded slices, alternating rational and irrational `W`.
pub fn random_bounded_slices(seed: u64, count: usize) -> Vec<AffineSlice> {
    let mut r = rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let irrational = out.len() % 2 == 1;
        if let Some(s) = try_random_slice(&mut r, irrational) {
            out.push(s);
        }
    }
    out
}

/// The image of the slice as the hull of the images of all basic feasible
/// solutions of `{t >= 0 : sum t_j alpha_j in lambda + W}`, found by trying
/// every support. Bounded slices only.
pub fn brute_force_image(slice: &AffineSlice) -> Polyhedron {
    let module = slice.module();
    let d = module.torus_rank();
    let m = module.n_coords();
    let ann = slice.direction().annihilator();
    let alpha: Vec<Vector> = (0..m).map(|j| module.weight(j)).collect();
    let rhs: Vec<ExtScalar> = ann
        .basis()
        .iter()
        .map(|a| linalg::dot(a, slice.lambda()))
        .collect();
    let mut points = Vec::new();
    for mask in 0usize..(1 << m) {
        let s: Vec<usize> = (0..m).filter(|j| mask >> j & 1 == 1).collect();
        let rows: Vec<Vector> = ann
            .basis()
            .iter()
            .map(|a| s.iter().map(|&j| linalg::dot(a, &alpha[j])).collect())
            .collect();
        if linalg::rank(&rows, s.len()) != s.len() {
            continue;
        }
        let Some(t) = linalg::solve(&rows, &rhs, s.len()) else {
            continue;
        };
        if t.iter().any(|x| x.is_negative().unwrap()) {
            continue;
        }
        let mut mu = linalg::zeros(d);
        for (tj, &j) in t.iter().zip(&s) {
            mu = linalg::axpy(&mu, tj, &alpha[j]);
        }
        points.push(mu);
    }
    Polyhedron::convex_hull(d, &points).unwrap()
}
