use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;

use crate::error::{MomentError, Result};
use crate::models::AffineSlice;
use crate::models::{build_affine_slice, ModelPoint, WeightedModule};
use crate::presymlin::linalg::Vector;
use crate::presymlin::Subspace;
use crate::sampler::CurveSpec;
use crate::scalars::{ConstantBasis, ExtScalar};

/// A scalar written as an integer or as text such as `"1/2*sqrt2"`.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum ScalarText {
    Int(i64),
    Text(String),
}

/// A complex coordinate: `[re, im]` or just the real part.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum CoordText {
    Pair([ScalarText; 2]),
    Real(ScalarText),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub torus_rank: usize,
    pub weights: Vec<Vec<i64>>,
    #[serde(default)]
    pub masked: Vec<usize>,
    /// Present for affine slices.
    pub lambda: Option<Vec<ScalarText>>,
    /// Basis of `W`; omitted means `W = 0`.
    #[serde(default)]
    pub direction: Vec<Vec<ScalarText>>,
    #[serde(default)]
    pub constants: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalModelSpec {
    pub lambda: Vec<ScalarText>,
    pub stabilizer: Vec<Vec<ScalarText>>,
    #[serde(default)]
    pub s_weights: Vec<Vec<ScalarText>>,
    #[serde(default)]
    pub v_dim: usize,
    #[serde(default)]
    pub ideal: Vec<Vec<ScalarText>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Analysis {
    SliceReport,
    Morse,
    Quasifold,
    ContactCone,
    Sample,
    Deform,
}

impl Analysis {
    pub fn name(self) -> &'static str {
        match self {
            Analysis::SliceReport => "slice-report",
            Analysis::Morse => "morse",
            Analysis::Quasifold => "quasifold",
            Analysis::ContactCone => "contact-cone",
            Analysis::Sample => "sample",
            Analysis::Deform => "deform",
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub model: ModelSpec,
    #[serde(default)]
    pub analyses: Vec<Analysis>,
    /// Points of the model to analyse, one list of complex coordinates each.
    #[serde(default)]
    pub points: Vec<Vec<CoordText>>,
    /// Lie algebra elements for the Morse analysis.
    #[serde(default)]
    pub xi: Vec<Vec<ScalarText>>,
    pub curve: Option<CurveSpec>,
    pub family: Option<Vec<CurveSpec>>,
    pub samples: Option<usize>,
    pub t_max: Option<f64>,
    pub local_model: Option<LocalModelSpec>,
    pub seed: Option<u64>,
}

/// The model a scenario describes.
#[derive(Clone, Debug)]
pub enum BuiltModel {
    Slice(AffineSlice),
    Module(WeightedModule),
}

/// A parsed scenario with its exact data resolved.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub scenario: Scenario,
    pub basis: Option<Arc<ConstantBasis>>,
    pub model: BuiltModel,
    pub points: Vec<ModelPoint>,
    pub xi: Vec<Vector>,
}

fn field_err(field: &str, e: impl std::fmt::Display) -> MomentError {
    MomentError::Parse(format!("{field}: {e}"))
}

fn scalar(t: &ScalarText, basis: Option<&Arc<ConstantBasis>>, field: &str) -> Result<ExtScalar> {
    match t {
        ScalarText::Int(i) => Ok(ExtScalar::from_int(*i)),
        ScalarText::Text(s) => ExtScalar::parse(s, basis).map_err(|e| field_err(field, e)),
    }
}

fn vector(ts: &[ScalarText], basis: Option<&Arc<ConstantBasis>>, field: &str) -> Result<Vector> {
    ts.iter()
        .enumerate()
        .map(|(i, t)| scalar(t, basis, &format!("{field}[{i}]")))
        .collect()
}

fn rows(
    rs: &[Vec<ScalarText>],
    basis: Option<&Arc<ConstantBasis>>,
    field: &str,
) -> Result<Vec<Vector>> {
    rs.iter()
        .enumerate()
        .map(|(i, r)| vector(r, basis, &format!("{field}[{i}]")))
        .collect()
}

pub fn parse_scenario(text: &str) -> Result<Scenario> {
    serde_json::from_str(text).map_err(|e| MomentError::Parse(format!("scenario: {e}")))
}

pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| MomentError::Parse(format!("{}: {e}", path.display())))?;
    parse_scenario(&text)
}

/// Resolves constants, builds and validates the model and every
/// analysis-specific field.
pub fn prepare(scenario: Scenario) -> Result<Prepared> {
    let spec = &scenario.model;
    let decls: Vec<(String, f64)> = spec
        .constants
        .iter()
        .map(|(k, v)| (k.clone(), *v))
        .collect();
    let basis = if decls.is_empty() {
        None
    } else {
        Some(
            ConstantBasis::from_declarations(&decls)
                .map_err(|e| field_err("model.constants", e))?,
        )
    };
    let b = basis.as_ref();
    let module = WeightedModule::new(spec.torus_rank, spec.weights.clone(), spec.masked.clone())
        .map_err(|e| field_err("model.weights", e))?;
    let d = spec.torus_rank;
    let model = match &spec.lambda {
        Some(l) => {
            let lambda = vector(l, b, "model.lambda")?;
            let dirs = rows(&spec.direction, b, "model.direction")?;
            if dirs.iter().any(|r| r.len() != d) {
                return Err(field_err(
                    "model.direction",
                    format!("rows must have length {d}"),
                ));
            }
            let w = Subspace::span(d, &dirs).map_err(|e| field_err("model.direction", e))?;
            let slice = build_affine_slice(module, lambda, w).map_err(|e| field_err("model", e))?;
            BuiltModel::Slice(slice)
        }
        None => {
            if !spec.direction.is_empty() {
                return Err(field_err("model.direction", "needs model.lambda"));
            }
            BuiltModel::Module(module)
        }
    };
    let m = spec.weights.len();
    let mut points = Vec::new();
    for (i, p) in scenario.points.iter().enumerate() {
        let field = format!("points[{i}]");
        if p.len() != m {
            return Err(field_err(&field, format!("needs {m} complex coordinates")));
        }
        let mut coords = Vec::new();
        for (j, c) in p.iter().enumerate() {
            let f = format!("{field}[{j}]");
            coords.push(match c {
                CoordText::Pair([re, im]) => (scalar(re, b, &f)?, scalar(im, b, &f)?),
                CoordText::Real(re) => (scalar(re, b, &f)?, ExtScalar::zero()),
            });
        }
        let x = ModelPoint::new(coords);
        let check = match &model {
            BuiltModel::Slice(s) => s.check_point(&x).map(|_| ()),
            BuiltModel::Module(md) => md.check_point(&x.real()),
        };
        check.map_err(|e| field_err(&field, e))?;
        points.push(x);
    }
    let xi = rows(&scenario.xi, b, "xi")?;
    if let Some((i, _)) = xi.iter().enumerate().find(|(_, x)| x.len() != d) {
        return Err(field_err(&format!("xi[{i}]"), format!("needs {d} entries")));
    }
    let needs_slice = |a: Analysis| {
        matches!(
            a,
            Analysis::Morse | Analysis::Quasifold | Analysis::ContactCone
        )
    };
    for &a in &scenario.analyses {
        if needs_slice(a) && !matches!(model, BuiltModel::Slice(_)) {
            return Err(field_err(
                "analyses",
                format!("{} needs an affine slice (model.lambda)", a.name()),
            ));
        }
    }
    if scenario.analyses.contains(&Analysis::Morse) && xi.is_empty() {
        return Err(field_err("xi", "morse needs at least one element"));
    }
    let line_slice = matches!(&model, BuiltModel::Slice(s) if s.direction().dim() == 1);
    if scenario.analyses.contains(&Analysis::Sample) && scenario.curve.is_none() && !line_slice {
        return Err(field_err(
            "curve",
            "sample needs a curve or a slice with one-dimensional W",
        ));
    }
    if scenario.analyses.contains(&Analysis::Deform)
        && scenario.family.as_ref().is_none_or(|f| f.len() < 2)
    {
        return Err(field_err("family", "deform needs at least two curves"));
    }
    if let Some(c) = &scenario.curve {
        c.validate().map_err(|e| field_err("curve", e))?;
    }
    for (i, c) in scenario.family.iter().flatten().enumerate() {
        c.validate()
            .map_err(|e| field_err(&format!("family[{i}]"), e))?;
    }
    if let Some(t) = scenario.t_max {
        if t.is_nan() || t < 0.0 {
            return Err(field_err("t_max", "must be nonnegative"));
        }
    }
    if scenario.samples == Some(0) {
        return Err(field_err("samples", "must be positive"));
    }
    Ok(Prepared {
        basis,
        model,
        points,
        xi,
        scenario,
    })
}

/// `(lambda, h basis, S weights, dim V, a)` as taken by
/// [`crate::models::build_local_model`].
pub type LocalModelIngredients = (Vector, Vec<Vector>, Vec<Vector>, usize, Subspace);

impl Prepared {
    pub fn local_model_ingredients(&self) -> Result<Option<LocalModelIngredients>> {
        let Some(lm) = &self.scenario.local_model else {
            return Ok(None);
        };
        let b = self.basis.as_ref();
        let lambda = vector(&lm.lambda, b, "local_model.lambda")?;
        let h = rows(&lm.stabilizer, b, "local_model.stabilizer")?;
        let s = rows(&lm.s_weights, b, "local_model.s_weights")?;
        let a_rows = rows(&lm.ideal, b, "local_model.ideal")?;
        let a =
            Subspace::span(lambda.len(), &a_rows).map_err(|e| field_err("local_model.ideal", e))?;
        Ok(Some((lambda, h, s, lm.v_dim, a)))
    }
}
