//! Floating-point sampling of moment images of curved slices, where the
//! exact engine does not apply.
//!
//! Every random stream is a ChaCha8 generator seeded with the run seed and
//! a fixed stream number per chunk, so results do not depend on how rayon
//! schedules the chunks.

pub mod curve;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{MomentError, Result};
use crate::models::AffineSlice;
use crate::presymlin::linalg;

pub use curve::{CurveImage, CurveSpec};

const CHUNK: usize = 1024;
const DEFECT_PAIRS: usize = 4096;
/// Hausdorff tolerance for translate equivalence.
pub const TRANSLATE_TOL: f64 = 1e-3;

// stream numbers; chunked sampling uses CHUNK_STREAM + chunk index
const PAIR_STREAM: u64 = 1;
const CONE_STREAM: u64 = 2;
const LIFT_STREAM: u64 = 3;
const NEAR_STREAM: u64 = 4;
const CHUNK_STREAM: u64 = 1 << 32;

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointCloud {
    pub points: Vec<Vec<f64>>,
    /// Curve parameter of each point, when sampled from a curve.
    pub params: Vec<f64>,
    pub seed: u64,
    pub count: usize,
}

impl PointCloud {
    pub fn centroid(&self) -> Vec<f64> {
        let d = self.points.first().map_or(0, |p| p.len());
        let mut c = vec![0.0; d];
        for p in &self.points {
            c.iter_mut().zip(p).for_each(|(a, b)| *a += b);
        }
        c.iter_mut()
            .for_each(|a| *a /= self.points.len().max(1) as f64);
        c
    }
}

/// `n` points of `Y cap orthant`, uniform in the curve parameter.
pub fn sample_image(spec: &CurveSpec, n: usize, seed: u64) -> Result<PointCloud> {
    if n == 0 {
        return Err(MomentError::Sampling("need at least one point".into()));
    }
    let [a, b] = spec.domain()?;
    let max_chunks = (100 * n).div_ceil(CHUNK);
    let mut accepted: Vec<(f64, Vec<f64>)> = Vec::with_capacity(n);
    let mut next = 0;
    while accepted.len() < n && next < max_chunks {
        let batch = (max_chunks - next).min(rayon::current_num_threads().max(1) * 4);
        let found: Vec<Vec<(f64, Vec<f64>)>> = (next..next + batch)
            .into_par_iter()
            .map(|c| {
                let mut r = rng(seed, CHUNK_STREAM + c as u64);
                (0..CHUNK)
                    .filter_map(|_| {
                        let s = a + (b - a) * r.random::<f64>();
                        let y = spec.eval(s);
                        curve::orthant(&y).then_some((s, y))
                    })
                    .collect()
            })
            .collect();
        accepted.extend(found.into_iter().flatten());
        next += batch;
    }
    if accepted.len() < n {
        return Err(MomentError::Sampling(format!(
            "only {} of {n} points landed in the orthant after {} trials",
            accepted.len(),
            100 * n
        )));
    }
    accepted.truncate(n);
    let (params, points) = accepted.into_iter().unzip();
    Ok(PointCloud {
        points,
        params,
        seed,
        count: n,
    })
}

/// A point of `C^d` over `y`: `x_j = sqrt(2 y_j) e^{i theta_j}` with seeded
/// angles, as `(re, im)` pairs.
pub fn lift_to_slice(y: &[f64], seed: u64) -> Result<Vec<[f64; 2]>> {
    if let Some(k) = y.iter().position(|&v| v < 0.0) {
        return Err(MomentError::Sampling(format!(
            "coordinate {k} of the moment value is negative"
        )));
    }
    let mut r = rng(seed, LIFT_STREAM);
    Ok(y.iter()
        .map(|&v| {
            let theta = std::f64::consts::TAU * r.random::<f64>();
            let m = (2.0 * v).sqrt();
            [m * theta.cos(), m * theta.sin()]
        })
        .collect())
}

/// Standard moment map `1/2 |x_j|^2`.
pub fn standard_moment(x: &[[f64; 2]]) -> Vec<f64> {
    x.iter().map(|[a, b]| 0.5 * (a * a + b * b)).collect()
}

/// Largest distance from a midpoint of two sampled points to the image.
/// Uses seeded random pairs plus all pairs of coordinatewise extreme
/// points; small clouds use every pair.
pub fn convexity_defect(cloud: &PointCloud, distance: &(dyn Fn(&[f64]) -> f64 + Sync)) -> f64 {
    let n = cloud.points.len();
    if n < 2 {
        return 0.0;
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    if n * (n - 1) / 2 <= DEFECT_PAIRS {
        for i in 0..n {
            for j in i + 1..n {
                pairs.push((i, j));
            }
        }
    } else {
        let mut r = rng(cloud.seed, PAIR_STREAM);
        for _ in 0..DEFECT_PAIRS {
            pairs.push((r.random_range(0..n), r.random_range(0..n)));
        }
        let d = cloud.points[0].len();
        let mut ext = Vec::new();
        for k in 0..d {
            let key = |i: &usize| cloud.points[*i][k];
            ext.push(
                (0..n)
                    .min_by(|a, b| key(a).total_cmp(&key(b)))
                    .expect("nonempty"),
            );
            ext.push(
                (0..n)
                    .max_by(|a, b| key(a).total_cmp(&key(b)))
                    .expect("nonempty"),
            );
        }
        for (x, &i) in ext.iter().enumerate() {
            for &j in &ext[x + 1..] {
                pairs.push((i, j));
            }
        }
    }
    pairs
        .par_iter()
        .map(|&(i, j)| {
            let m: Vec<f64> = cloud.points[i]
                .iter()
                .zip(&cloud.points[j])
                .map(|(a, b)| 0.5 * (a + b))
                .collect();
            distance(&m)
        })
        .reduce(|| 0.0, f64::max)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ImageSummary {
    pub count: usize,
    pub centroid: Vec<f64>,
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TranslateVerdict {
    pub first: usize,
    pub second: usize,
    /// Centroid difference used as the candidate translation.
    pub shift: Vec<f64>,
    pub hausdorff: f64,
    pub equivalent: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeformationScan {
    pub summaries: Vec<ImageSummary>,
    pub verdicts: Vec<TranslateVerdict>,
    /// Some pair of images is not a translate of the other.
    pub nontrivial: bool,
}

fn summarize(c: &PointCloud) -> ImageSummary {
    let d = c.points[0].len();
    let mut min = vec![f64::INFINITY; d];
    let mut max = vec![f64::NEG_INFINITY; d];
    for p in &c.points {
        for k in 0..d {
            min[k] = min[k].min(p[k]);
            max[k] = max[k].max(p[k]);
        }
    }
    ImageSummary {
        count: c.count,
        centroid: c.centroid(),
        min,
        max,
    }
}

/// Samples each member of a family (same seed for all) and tests every pair
/// for translate equivalence: the candidate translation is the centroid
/// difference, and the test is a two-sided Hausdorff distance against the
/// other member's image.
pub fn deformation_scan(family: &[CurveSpec], n: usize, seed: u64) -> Result<DeformationScan> {
    let clouds: Vec<PointCloud> = family
        .iter()
        .map(|s| sample_image(s, n, seed))
        .collect::<Result<_>>()?;
    let images: Vec<CurveImage> = family.iter().map(CurveImage::new).collect::<Result<_>>()?;
    let summaries: Vec<ImageSummary> = clouds.iter().map(summarize).collect();
    let one_sided = |from: &PointCloud, to: &CurveImage, shift: &[f64]| -> f64 {
        from.points
            .par_iter()
            .map(|p| {
                let q: Vec<f64> = p.iter().zip(shift).map(|(a, b)| a + b).collect();
                to.distance(&q)
            })
            .reduce(|| 0.0, f64::max)
    };
    let mut verdicts = Vec::new();
    for i in 0..family.len() {
        for j in i + 1..family.len() {
            let shift: Vec<f64> = summaries[j]
                .centroid
                .iter()
                .zip(&summaries[i].centroid)
                .map(|(a, b)| a - b)
                .collect();
            let back: Vec<f64> = shift.iter().map(|v| -v).collect();
            let h = one_sided(&clouds[i], &images[j], &shift)
                .max(one_sided(&clouds[j], &images[i], &back));
            verdicts.push(TranslateVerdict {
                first: i,
                second: j,
                shift,
                hausdorff: h,
                equivalent: h <= TRANSLATE_TOL,
            });
        }
    }
    let nontrivial = verdicts.iter().any(|v| !v.equivalent);
    Ok(DeformationScan {
        summaries,
        verdicts,
        nontrivial,
    })
}

/// Points `(t y, t)` of the cone over `Y cap orthant`, `t` uniform in
/// `[0, t_max]`. Fails when the radial field is tangent to `Y` somewhere
/// on the image.
pub fn contact_cone_sample(
    spec: &CurveSpec,
    n: usize,
    t_max: f64,
    seed: u64,
) -> Result<PointCloud> {
    if spec.ambient_dim() != 2 {
        return Err(MomentError::DimensionMismatch(
            "contact cones are sampled over plane curves".into(),
        ));
    }
    if t_max.is_nan() || t_max < 0.0 {
        return Err(MomentError::Sampling("t_max must be nonnegative".into()));
    }
    check_radial_transverse(spec)?;
    let cloud = sample_image(spec, n, seed)?;
    let mut r = rng(seed, CONE_STREAM);
    let points = cloud
        .points
        .iter()
        .map(|y| {
            let t = t_max * r.random::<f64>();
            vec![t * y[0], t * y[1], t]
        })
        .collect();
    Ok(PointCloud {
        points,
        params: cloud.params,
        seed,
        count: n,
    })
}

/// `<y, normal(y)>` must keep one sign, away from zero, along the image.
fn check_radial_transverse(spec: &CurveSpec) -> Result<()> {
    let img = CurveImage::new(spec)?;
    let mut sign = 0.0;
    for [l, r] in &img.arcs {
        let steps = 4096;
        for i in 0..=steps {
            let s = l + (r - l) * i as f64 / steps as f64;
            let y = spec.eval(s);
            let nrm = spec.normal(s)?;
            let ny = (y[0] * y[0] + y[1] * y[1]).sqrt();
            let g = y[0] * nrm[0] + y[1] * nrm[1];
            if ny > 0.0 && g.abs() <= 1e-6 * ny || ny == 0.0 || (sign != 0.0 && g.signum() != sign)
            {
                return Err(MomentError::NotContactType(format!(
                    "radial field tangent to the curve near ({:.6}, {:.6})",
                    y[0], y[1]
                )));
            }
            sign = g.signum();
        }
    }
    Ok(())
}

/// Real points of the slice near `x` (given in real coordinates), found by
/// perturbing `x` by up to `radius` and projecting back onto
/// `phi^{-1}(lambda + W)` with Gauss-Newton steps.
pub fn sample_slice_near(
    slice: &AffineSlice,
    x: &[f64],
    radius: f64,
    n: usize,
    seed: u64,
) -> Result<Vec<Vec<f64>>> {
    let module = slice.module();
    let m = module.n_coords();
    if x.len() != 2 * m {
        return Err(MomentError::DimensionMismatch(format!(
            "point with {} real coordinates in C^{m}",
            x.len()
        )));
    }
    let weights: Vec<Vec<f64>> = module
        .weights()
        .iter()
        .map(|w| w.iter().map(|&a| a as f64).collect())
        .collect();
    let rows: Vec<Vec<f64>> = slice
        .null_ideal()
        .basis()
        .iter()
        .map(|f| linalg::to_f64(f))
        .collect();
    let lambda = linalg::to_f64(slice.lambda());
    let k = rows.len();
    let d = module.torus_rank();
    let phi = |z: &[f64]| -> Vec<f64> {
        let mut mu = vec![0.0; d];
        for j in 0..m {
            let q = 0.5 * (z[2 * j] * z[2 * j] + z[2 * j + 1] * z[2 * j + 1]);
            mu.iter_mut()
                .zip(&weights[j])
                .for_each(|(a, w)| *a += q * w);
        }
        mu
    };
    let residual = |z: &[f64]| -> DVector<f64> {
        let mu = phi(z);
        DVector::from_iterator(
            k,
            rows.iter().map(|f| {
                f.iter()
                    .zip(mu.iter().zip(&lambda))
                    .map(|(a, (b, c))| a * (b - c))
                    .sum()
            }),
        )
    };
    let mut r = rng(seed, NEAR_STREAM);
    let mut out = Vec::with_capacity(n);
    let mut attempts = 0;
    while out.len() < n && attempts < 100 * n {
        attempts += 1;
        let mut z: Vec<f64> = x
            .iter()
            .map(|&v| v + radius * (2.0 * r.random::<f64>() - 1.0))
            .collect();
        let mut ok = k == 0;
        for _ in 0..50 {
            if k == 0 {
                break;
            }
            let g = residual(&z);
            if g.norm() < 1e-13 {
                ok = true;
                break;
            }
            // J = rows * dphi(z)
            let jac = DMatrix::from_fn(k, 2 * m, |i, c| {
                let j = c / 2;
                rows[i]
                    .iter()
                    .zip(&weights[j])
                    .map(|(f, w)| f * w)
                    .sum::<f64>()
                    * z[c]
            });
            let jjt = &jac * jac.transpose();
            let Some(step) = jjt.lu().solve(&g) else {
                break;
            };
            let dz = jac.transpose() * step;
            z.iter_mut().zip(dz.iter()).for_each(|(a, b)| *a -= b);
        }
        let dist = z
            .iter()
            .zip(x)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        if ok && dist <= 3.0 * radius {
            out.push(z);
        }
    }
    if out.len() < n {
        return Err(MomentError::Sampling(format!(
            "projected only {} of {n} points onto the slice",
            out.len()
        )));
    }
    Ok(out)
}

/// Moment value of a real point of a weighted module, in floating point.
pub fn moment_float(weights: &[Vec<i64>], z: &[f64]) -> Vec<f64> {
    let d = weights.first().map_or(0, |w| w.len());
    let mut mu = vec![0.0; d];
    for (j, w) in weights.iter().enumerate() {
        let q = 0.5 * (z[2 * j] * z[2 * j] + z[2 * j + 1] * z[2 * j + 1]);
        mu.iter_mut().zip(w).for_each(|(a, &c)| *a += q * c as f64);
    }
    mu
}
