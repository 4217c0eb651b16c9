use std::cmp::Ordering;
use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{MomentError, Result};

/// A parametrized curve `Y` in `R^d` whose intersection with the closed
/// orthant is the moment image of `phi^{-1}(Y)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CurveSpec {
    /// `point + s * direction` for `s` in `range`, or over the whole
    /// orthant part when `range` is omitted.
    Affine {
        point: Vec<f64>,
        direction: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        range: Option<[f64; 2]>,
    },
    Circle {
        center: [f64; 2],
        radius: f64,
    },
    /// Axis-aligned ellipse.
    Ellipse {
        center: [f64; 2],
        radii: [f64; 2],
    },
    /// Graph of `offset + amplitude * sin(frequency * s + phase)` over `range`.
    TrigGraph {
        amplitude: f64,
        frequency: f64,
        phase: f64,
        offset: f64,
        range: [f64; 2],
    },
}

const CROSSING_GRID: usize = 8192;
const COARSE_GRID: usize = 4096;

fn in_orthant(y: &[f64]) -> bool {
    y.iter().all(|&v| v >= 0.0)
}

fn min_coord(y: &[f64]) -> f64 {
    y.iter().copied().fold(f64::INFINITY, f64::min)
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

impl CurveSpec {
    pub fn ambient_dim(&self) -> usize {
        match self {
            CurveSpec::Affine { point, .. } => point.len(),
            _ => 2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(MomentError::Sampling(m.to_string()));
        match self {
            CurveSpec::Affine {
                point,
                direction,
                range,
            } => {
                if point.len() != direction.len() || point.is_empty() {
                    return bad("affine point and direction must have the same positive length");
                }
                if direction.iter().all(|&u| u == 0.0) {
                    return bad("affine direction is zero");
                }
                if let Some([a, b]) = range {
                    if a.partial_cmp(b) != Some(Ordering::Less) {
                        return bad("range must be increasing");
                    }
                }
            }
            CurveSpec::Circle { radius, .. }
                if radius.partial_cmp(&0.0) != Some(Ordering::Greater) =>
            {
                return bad("radius must be positive")
            }
            CurveSpec::Ellipse { radii, .. }
                if radii
                    .iter()
                    .any(|r| r.partial_cmp(&0.0) != Some(Ordering::Greater)) =>
            {
                return bad("radii must be positive")
            }
            CurveSpec::TrigGraph { range, .. }
                if range[0].partial_cmp(&range[1]) != Some(Ordering::Less) =>
            {
                return bad("range must be increasing")
            }
            _ => {}
        }
        Ok(())
    }

    /// Parameter domain sampled uniformly.
    pub fn domain(&self) -> Result<[f64; 2]> {
        self.validate()?;
        match self {
            CurveSpec::Affine { range: Some(r), .. } => Ok(*r),
            CurveSpec::Affine {
                point,
                direction,
                range: None,
            } => {
                let (lo, hi) = affine_orthant_interval(point, direction);
                if lo.is_finite() && hi.is_finite() && lo <= hi {
                    Ok([lo, hi])
                } else {
                    Err(MomentError::Sampling(
                        "affine curve meets the orthant in an unbounded or empty set".into(),
                    ))
                }
            }
            CurveSpec::Circle { .. } | CurveSpec::Ellipse { .. } => Ok([0.0, TAU]),
            CurveSpec::TrigGraph { range, .. } => Ok(*range),
        }
    }

    pub fn eval(&self, s: f64) -> Vec<f64> {
        match self {
            CurveSpec::Affine {
                point, direction, ..
            } => point
                .iter()
                .zip(direction)
                .map(|(p, u)| p + s * u)
                .collect(),
            CurveSpec::Circle { center, radius } => {
                vec![center[0] + radius * s.cos(), center[1] + radius * s.sin()]
            }
            CurveSpec::Ellipse { center, radii } => vec![
                center[0] + radii[0] * s.cos(),
                center[1] + radii[1] * s.sin(),
            ],
            CurveSpec::TrigGraph {
                amplitude,
                frequency,
                phase,
                offset,
                ..
            } => {
                vec![s, offset + amplitude * (frequency * s + phase).sin()]
            }
        }
    }

    pub fn tangent(&self, s: f64) -> Vec<f64> {
        match self {
            CurveSpec::Affine { direction, .. } => direction.clone(),
            CurveSpec::Circle { radius, .. } => vec![-radius * s.sin(), radius * s.cos()],
            CurveSpec::Ellipse { radii, .. } => vec![-radii[0] * s.sin(), radii[1] * s.cos()],
            CurveSpec::TrigGraph {
                amplitude,
                frequency,
                phase,
                ..
            } => {
                vec![1.0, amplitude * frequency * (frequency * s + phase).cos()]
            }
        }
    }

    /// Unit normal of a plane curve.
    pub fn normal(&self, s: f64) -> Result<[f64; 2]> {
        if self.ambient_dim() != 2 {
            return Err(MomentError::DimensionMismatch(
                "normals are defined for plane curves".into(),
            ));
        }
        let t = self.tangent(s);
        let n = t[0].hypot(t[1]);
        Ok([-t[1] / n, t[0] / n])
    }

    /// The same curve moved by `u`.
    pub fn translated(&self, u: &[f64]) -> CurveSpec {
        let mut c = self.clone();
        match &mut c {
            CurveSpec::Affine { point, .. } => point.iter_mut().zip(u).for_each(|(p, v)| *p += v),
            CurveSpec::Circle { center, .. } | CurveSpec::Ellipse { center, .. } => {
                center[0] += u[0];
                center[1] += u[1];
            }
            CurveSpec::TrigGraph {
                offset,
                range,
                phase,
                frequency,
                ..
            } => {
                // a graph moves by reparametrizing
                *offset += u[1];
                range[0] += u[0];
                range[1] += u[0];
                *phase -= *frequency * u[0];
            }
        }
        c
    }
}

/// `{s : point + s direction >= 0}` as an interval (possibly infinite).
fn affine_orthant_interval(p: &[f64], u: &[f64]) -> (f64, f64) {
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for (&pk, &uk) in p.iter().zip(u) {
        if uk > 0.0 {
            lo = lo.max(-pk / uk);
        } else if uk < 0.0 {
            hi = hi.min(-pk / uk);
        } else if pk < 0.0 {
            return (1.0, 0.0);
        }
    }
    (lo, hi)
}

/// `Y cap orthant` prepared for distance queries: parameter intervals of
/// the arcs inside the orthant and a coarse grid on them.
#[derive(Clone, Debug)]
pub struct CurveImage {
    pub spec: CurveSpec,
    /// Parameter intervals whose points lie in the orthant.
    pub arcs: Vec<[f64; 2]>,
    /// Points where the curve crosses the orthant boundary.
    pub crossings: Vec<Vec<f64>>,
    grid: Vec<(f64, usize)>,
}

impl CurveImage {
    pub fn new(spec: &CurveSpec) -> Result<Self> {
        let [a, b] = spec.domain()?;
        let mut arcs = Vec::new();
        let mut crossings = Vec::new();
        if let CurveSpec::Affine {
            point, direction, ..
        } = spec
        {
            let (lo, hi) = affine_orthant_interval(point, direction);
            let (lo, hi) = (lo.max(a), hi.min(b));
            if lo <= hi {
                arcs.push([lo, hi]);
                for s in [lo, hi] {
                    if min_coord(&spec.eval(s)).abs() < 1e-12 {
                        crossings.push(spec.eval(s));
                    }
                }
            }
        } else {
            let step = (b - a) / CROSSING_GRID as f64;
            let g = |s: f64| min_coord(&spec.eval(s));
            let mut start: Option<f64> = if g(a) >= 0.0 { Some(a) } else { None };
            for i in 0..CROSSING_GRID {
                let (s0, s1) = (a + step * i as f64, a + step * (i + 1) as f64);
                let (g0, g1) = (g(s0), g(s1));
                if (g0 >= 0.0) == (g1 >= 0.0) {
                    continue;
                }
                let (mut l, mut r) = (s0, s1);
                for _ in 0..80 {
                    let m = 0.5 * (l + r);
                    if (g(m) >= 0.0) == (g0 >= 0.0) {
                        l = m;
                    } else {
                        r = m;
                    }
                }
                let root = if g0 >= 0.0 { l } else { r };
                crossings.push(spec.eval(root));
                check_face_transverse(spec, root)?;
                match start.take() {
                    Some(s) => arcs.push([s, root]),
                    None => start = Some(root),
                }
            }
            if let Some(s) = start {
                arcs.push([s, b]);
            }
            // a closed curve may wrap around the start of its domain
            if matches!(spec, CurveSpec::Circle { .. } | CurveSpec::Ellipse { .. })
                && arcs.len() >= 2
            {
                let first = arcs[0];
                let last = *arcs.last().expect("nonempty");
                if first[0] == a && last[1] == b {
                    arcs.pop();
                    arcs[0] = [last[0], first[1] + (b - a)];
                }
            }
        }
        let total: f64 = arcs.iter().map(|[l, r]| r - l).sum();
        let mut grid = Vec::new();
        for (k, [l, r]) in arcs.iter().enumerate() {
            let cnt = ((COARSE_GRID as f64) * (r - l) / total.max(f64::MIN_POSITIVE))
                .ceil()
                .max(2.0) as usize;
            for i in 0..=cnt {
                grid.push((l + (r - l) * i as f64 / cnt as f64, k));
            }
        }
        Ok(CurveImage {
            spec: spec.clone(),
            arcs,
            crossings,
            grid,
        })
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    /// Distance from `p` to `Y cap orthant`.
    pub fn distance(&self, p: &[f64]) -> f64 {
        if self.arcs.is_empty() {
            return f64::INFINITY;
        }
        if let CurveSpec::Affine {
            point, direction, ..
        } = &self.spec
        {
            let [l, r] = self.arcs[0];
            let uu: f64 = direction.iter().map(|u| u * u).sum();
            let s = direction
                .iter()
                .zip(point)
                .zip(p)
                .map(|((u, q), x)| u * (x - q))
                .sum::<f64>()
                / uu;
            return dist2(&self.spec.eval(s.clamp(l, r)), p).sqrt();
        }
        let f = |s: f64| dist2(&self.spec.eval(s), p);
        // three nearest grid points
        let mut best = [(f64::INFINITY, usize::MAX); 3];
        for (i, &(s, _)) in self.grid.iter().enumerate() {
            let v = f(s);
            if v < best[2].0 {
                best[2] = (v, i);
                best.sort_by(|a, b| a.0.total_cmp(&b.0));
            }
        }
        let mut out = f64::INFINITY;
        for (_, i) in best.into_iter().filter(|b| b.1 != usize::MAX) {
            let (s, k) = self.grid[i];
            let [l, r] = self.arcs[k];
            let lo = if i > 0 && self.grid[i - 1].1 == k {
                self.grid[i - 1].0
            } else {
                s
            };
            let hi = if i + 1 < self.grid.len() && self.grid[i + 1].1 == k {
                self.grid[i + 1].0
            } else {
                s
            };
            let m = golden_min(&f, lo.max(l), hi.min(r));
            out = out.min(f(m)).min(f(s));
        }
        out.sqrt()
    }

    /// Extreme points of `Y cap orthant` along each coordinate axis.
    pub fn extremes(&self) -> Vec<Vec<f64>> {
        let mut pts: Vec<Vec<f64>> = self.crossings.clone();
        for [l, r] in &self.arcs {
            pts.push(self.spec.eval(*l));
            pts.push(self.spec.eval(*r));
        }
        pts
    }
}

fn golden_min(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    for _ in 0..100 {
        if (b - a).abs() < 1e-15 {
            break;
        }
        if f(c) < f(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - g * (b - a);
        d = a + g * (b - a);
    }
    0.5 * (a + b)
}

/// At a boundary crossing the curve must leave the face transversally.
fn check_face_transverse(spec: &CurveSpec, s: f64) -> Result<()> {
    let y = spec.eval(s);
    let t = spec.tangent(s);
    let tn = t.iter().map(|v| v * v).sum::<f64>().sqrt();
    for (k, &yk) in y.iter().enumerate() {
        if yk.abs() < 1e-9 && (t[k] / tn).abs() <= 1e-6 {
            return Err(MomentError::Sampling(format!(
                "curve is tangent to the face y_{k} = 0 at s = {s}"
            )));
        }
    }
    Ok(())
}

pub(crate) fn orthant(y: &[f64]) -> bool {
    in_orthant(y)
}
