use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::cli::report::{csv, float, floats, svg, Report};
use crate::cli::scenario::{load_scenario, prepare, Analysis, BuiltModel, Prepared};
use crate::error::{MomentError, Result};
use crate::lattice::quasilattice;
use crate::models::analysis::{cleanness_on_stratum, dphi_identities, symplectization_check};
use crate::models::{
    build_local_model, cleanness_at, intersect_local_cones, local_cone, local_model_at,
    moment_image, slices_at, stratum_cone, AffineSlice, Model, ModelPoint, SliceData,
};
use crate::morse::{critical_set, full_critical_set, morse_bott_check};
use crate::polyhedra::{homogenize, poly_equal, project, Halfspace};
use crate::presymlin::format_vector;
use crate::presymlin::linalg;
use crate::sampler::{
    contact_cone_sample, convexity_defect, deformation_scan, sample_image, CurveImage, CurveSpec,
};
use crate::scalars::ExtScalar;

const DEFAULT_SAMPLES: usize = 10_000;
const H_REP_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("internal assertion failed: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl From<MomentError> for CliError {
    fn from(e: MomentError) -> Self {
        match e {
            MomentError::Internal(m) => CliError::Internal(m),
            other => CliError::Validation(other.to_string()),
        }
    }
}

/// The report text, the artifact files, and every consistency check that
/// failed.
#[derive(Debug, Default)]
pub struct RunOutput {
    pub report: String,
    pub files: Vec<(String, String)>,
    pub failures: Vec<String>,
}

fn support(s: &[usize]) -> String {
    let parts: Vec<String> = s.iter().map(|j| j.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

fn slice_data_lines(r: &mut Report, d: &SliceData) {
    r.kv("  symplectic slice dim", d.symplectic_dim);
    for l in &d.symplectic_labels {
        let what = l.coordinate.map_or("zero-weight part".to_string(), |j| {
            format!("coordinate {j}")
        });
        r.line(&format!(
            "    {what}: weight {} on g_x as {}, real dim {}",
            format_vector(&l.weight),
            format_vector(&l.restricted),
            l.real_dim
        ));
    }
    r.kv("  null slice dim", d.null_dim);
    for l in &d.null_labels {
        let what = l.coordinate.map_or("zero-weight part".to_string(), |j| {
            format!("coordinate {j}")
        });
        r.line(&format!(
            "    {what}: weight {} on g_x as {}, real dim {}",
            format_vector(&l.weight),
            format_vector(&l.restricted),
            l.real_dim
        ));
    }
}

/// A plane curve for the sampler: the scenario's, or the line `lambda + W`
/// of a planar slice with one-dimensional `W`.
pub fn scenario_curve(p: &Prepared) -> Option<CurveSpec> {
    if let Some(c) = &p.scenario.curve {
        return Some(c.clone());
    }
    match &p.model {
        BuiltModel::Slice(s) if s.direction().dim() == 1 => Some(CurveSpec::Affine {
            point: linalg::to_f64(s.lambda()),
            direction: linalg::to_f64(&s.direction().basis()[0]),
            range: None,
        }),
        _ => None,
    }
}

fn float_slack(h: &Halfspace, x: &[f64]) -> f64 {
    linalg::to_f64(&h.normal)
        .iter()
        .zip(x)
        .map(|(a, b)| a * b)
        .sum::<f64>()
        - h.offset.float_eval()
}

fn points_section<M: Model + ?Sized>(
    r: &mut Report,
    out: &mut RunOutput,
    model: &M,
    points: &[ModelPoint],
) -> Result<()> {
    if points.is_empty() {
        return Ok(());
    }
    r.section("Pointwise data: cleanness criterion, slices, moment differential");
    for (i, x) in points.iter().enumerate() {
        r.line(&format!("point {i}: {x}"));
        let c = cleanness_at(model, x)?;
        r.subspace("  g_x", &c.stabilizer);
        r.subspace("  g_xbar", &c.leaf_stabilizer);
        r.kv("  clean", Report::yes_no(c.clean));
        let d = slices_at(model, x)?;
        slice_data_lines(r, &d);
        let e = x.real();
        let ok = dphi_identities(model, &e)?;
        r.kv(
            "  kernel and image of dPhi match the orbit and leaf stabilizer",
            Report::yes_no(ok),
        );
        if !ok {
            out.failures
                .push(format!("moment differential identities at point {i}"));
        }
        let sc = symplectization_check(model, &e)?;
        r.kv(
            "  symplectized slice dim",
            format!(
                "{} = {} + 2*{}",
                sc.symplectized_slice_dim, sc.slice_dim, sc.null_dim
            ),
        );
        if !sc.holds() {
            out.failures
                .push(format!("symplectization slice identity at point {i}"));
        }
        if let Some(s) = model.slice() {
            let cone = local_cone(s, x)?;
            r.line("  local cone:");
            r.polyhedron(&cone);
        }
        if c.clean {
            let lm = local_model_at(model, x)?;
            r.kv(
                "  local model dim",
                format!("{} (q dim {}, V dim {})", lm.dim(), lm.q_dim, lm.v_dim),
            );
        }
    }
    Ok(())
}

fn slice_report(r: &mut Report, out: &mut RunOutput, p: &Prepared) -> Result<()> {
    match &p.model {
        BuiltModel::Slice(s) => slice_report_slice(r, out, s, p),
        BuiltModel::Module(m) => {
            r.section("Null ideal");
            r.subspace("null ideal", &m.null_ideal_space());
            r.kv("masked coordinates", format!("{:?}", m.masked()));
            points_section(r, out, m, &p.points)?;
            local_model_section(r, out, p, m)
        }
    }
}

fn slice_report_slice(
    r: &mut Report,
    out: &mut RunOutput,
    s: &AffineSlice,
    p: &Prepared,
) -> Result<()> {
    r.section("Null ideal");
    r.kv("lambda", format_vector(s.lambda()));
    r.subspace("W", s.direction());
    r.subspace("null ideal", s.null_ideal());

    r.section("Cleanness criterion on support strata");
    for st in s.strata() {
        let c = cleanness_on_stratum(s, &st.support)?;
        r.line(&format!(
            "support {}: g_x = {}; g_xbar = {}; clean: {}",
            support(&st.support),
            c.stabilizer,
            c.leaf_stabilizer,
            Report::yes_no(c.clean)
        ));
        if !c.clean {
            out.failures
                .push(format!("cleanness on stratum {}", support(&st.support)));
        }
    }

    let (image, rep) = moment_image(s)?;
    r.section("Moment image (orthant cut by the slice)");
    r.kv("bounded", Report::yes_no(image.is_bounded()));
    r.polyhedron(&image);

    r.section("Affine span of the image");
    r.kv(
        "affine span",
        format!(
            "{} + {}",
            format_vector(&rep.affine_span.basepoint),
            rep.affine_span.direction
        ),
    );
    r.kv("equals lambda + W", Report::yes_no(rep.affine_span_matches));
    if !rep.affine_span_matches {
        out.failures.push("affine span of the image".into());
    }

    r.section("Symplectization identity");
    r.kv(
        "image equals the ambient image cut by lambda + W",
        Report::yes_no(rep.symplectization_matches),
    );
    if !rep.symplectization_matches {
        out.failures.push("symplectization identity".into());
    }

    r.section("Rationality theorem");
    r.line(&format!(
        "rational: {}; quasilattice rank {} of expected {}; null subgroup {}",
        Report::yes_no(rep.rational_polyhedral),
        rep.quasilattice.rank,
        rep.quasilattice.quotient_dim,
        if rep.null_subgroup_closed {
            "closed"
        } else {
            "not closed"
        }
    ));
    if !rep.consistent() {
        out.failures.push("rationality verdicts disagree".into());
    }

    r.section("Local convexity theorem: local cones on strata");
    for st in s.strata() {
        let c = stratum_cone(s, st)?;
        r.line(&format!(
            "support {}: apex {}",
            support(&st.support),
            format_vector(&st.apex)
        ));
        r.polyhedron(&c);
    }
    let meet = intersect_local_cones(s)?;
    let eq = poly_equal(&meet, &image)?;
    r.kv(
        "intersection of local cones equals the image",
        Report::yes_no(eq),
    );
    if !eq {
        out.failures.push("intersection of local cones".into());
    }

    r.section("Kernel and image of the moment differential; symplectic and null slices");
    for st in s.strata() {
        let e = s.representative(&st.support);
        let ok = dphi_identities(s, &e)?;
        let sc = symplectization_check(s, &e)?;
        r.line(&format!(
            "support {}: dPhi identities {}; slice dims S = {}, V = {}; symplectized S = {}",
            support(&st.support),
            if ok { "hold" } else { "FAIL" },
            sc.slice_dim,
            sc.null_dim,
            sc.symplectized_slice_dim
        ));
        if !ok || !sc.holds() {
            out.failures.push(format!(
                "linear identities on stratum {}",
                support(&st.support)
            ));
        }
    }
    points_section(r, out, s, &p.points)?;
    local_model_section(r, out, p, s)?;

    if image.dim() == 2 && image.is_bounded() {
        let mut vs: Vec<[f64; 2]> = image
            .vrep()
            .vertices
            .iter()
            .map(|v| [v[0].float_eval(), v[1].float_eval()])
            .collect();
        let closed = image.affine_dim() == Some(2);
        if closed {
            order_polygon(&mut vs);
        }
        out.files
            .push(("image.svg".into(), svg(&[(vs, closed)], &p.scenario.name)));
    }
    Ok(())
}

/// Counterclockwise order around the centroid.
fn order_polygon(vs: &mut [[f64; 2]]) {
    let n = vs.len() as f64;
    let c = [
        vs.iter().map(|v| v[0]).sum::<f64>() / n,
        vs.iter().map(|v| v[1]).sum::<f64>() / n,
    ];
    vs.sort_by(|a, b| {
        (a[1] - c[1])
            .atan2(a[0] - c[0])
            .total_cmp(&(b[1] - c[1]).atan2(b[0] - c[0]))
    });
}

fn local_model_section<M: Model + ?Sized>(
    r: &mut Report,
    out: &mut RunOutput,
    p: &Prepared,
    model: &M,
) -> Result<()> {
    let Some((lambda, h, sw, v, a)) = p.local_model_ingredients()? else {
        return Ok(());
    };
    r.section("Local normal form");
    let lm = match build_local_model(lambda, &h, &sw, v, a) {
        Ok(lm) => lm,
        Err(e) => {
            r.kv("ingredients", e);
            return Ok(());
        }
    };
    r.kv("ingredients", "valid");
    r.subspace("h", &lm.stabilizer);
    r.subspace("a", &lm.ideal);
    r.kv("q dim", lm.q_dim);
    r.kv("model dim", lm.dim());
    let stab_ok = lm.basepoint_stabilizer() == lm.stabilizer;
    r.kv("basepoint stabilizer is h", Report::yes_no(stab_ok));
    if !stab_ok {
        out.failures.push("basepoint stabilizer".into());
    }
    for (i, x) in p.points.iter().enumerate() {
        match local_model_at(model, x) {
            Ok(found) => r.kv(
                &format!("same invariants as point {i}"),
                Report::yes_no(lm.same_invariants(&found)),
            ),
            Err(e) => r.kv(&format!("point {i}"), e),
        }
    }
    Ok(())
}

fn morse_section(r: &mut Report, out: &mut RunOutput, s: &AffineSlice, p: &Prepared) -> Result<()> {
    r.section("Morse-Bott theorem for moment map components");
    for xi in &p.xi {
        r.line(&format!("xi = {}", format_vector(xi)));
        let rep = morse_bott_check(s, xi)?;
        for c in &rep.strata {
            let weights: Vec<String> = c
                .normal_weights
                .iter()
                .map(|(j, w)| format!("{j}:{w}"))
                .collect();
            r.line(&format!(
                "  support {}: dim {}, eta {}, normal pairings [{}], index {}, Bott {}",
                support(&c.support),
                c.dimension,
                format_vector(&c.eta),
                weights.join(", "),
                c.index,
                Report::yes_no(c.bott_nondegenerate)
            ));
            let vs: Vec<String> = c
                .moment_value_set
                .vrep()
                .vertices
                .iter()
                .map(|v| format_vector(v))
                .collect();
            r.line(&format!("    image vertices {}", vs.join(" ")));
            if c.index % 2 != 0 {
                out.failures
                    .push(format!("odd index on {}", support(&c.support)));
            }
        }
        let mut indices: Vec<usize> = rep.strata.iter().map(|c| c.index).collect();
        indices.sort_unstable();
        indices.dedup();
        r.kv("  indices", support(&indices));
        r.kv("  Morse-Bott", Report::yes_no(rep.holds));
        if !rep.holds {
            out.failures
                .push(format!("Morse-Bott check for xi = {}", format_vector(xi)));
        }
        let base: Vec<Vec<usize>> = rep.strata.iter().map(|c| c.support.clone()).collect();
        let mut invariant = true;
        for z in s.null_ideal().basis() {
            let moved: Vec<Vec<usize>> = critical_set(s, &linalg::add(xi, z))?
                .iter()
                .map(|c| c.support.clone())
                .collect();
            invariant &= moved == base;
        }
        r.kv(
            "  critical set unchanged by adding null ideal elements",
            Report::yes_no(invariant),
        );
        if !invariant {
            out.failures.push("critical set invariance".into());
        }
    }

    r.section("Abelian vertex theorem");
    match full_critical_set(s) {
        Ok(v) => {
            for (c, img) in v.strata.iter().zip(&v.images) {
                r.line(&format!(
                    "support {}: fixed leaf image {}",
                    support(&c.support),
                    format_vector(img)
                ));
            }
            r.kv(
                "convex hull of fixed leaf images equals the image",
                Report::yes_no(v.hull_matches),
            );
            r.kv(
                "fixed strata over each vertex form one component",
                Report::yes_no(v.vertex_fibres_connected),
            );
            if !v.holds() {
                out.failures.push("vertex theorem".into());
            }
        }
        Err(MomentError::Unbounded(m)) => r.kv("not applicable", m),
        Err(e) => return Err(e),
    }
    Ok(())
}

fn quasifold_section(r: &mut Report, s: &AffineSlice) {
    r.section("Quasifold leaf space: quasilattice of the null ideal");
    let q = quasilattice(s.null_ideal());
    r.kv("quotient dim", q.quotient_dim);
    for (i, g) in q.generators.iter().enumerate() {
        r.line(&format!("  image of e_{i}: {}", format_vector(g)));
    }
    r.line(&format!(
        "quasilattice rank {} of expected {}; null subgroup {}",
        q.rank,
        q.quotient_dim,
        if q.rank == q.quotient_dim {
            "closed"
        } else {
            "not closed"
        }
    ));
}

fn contact_section(
    r: &mut Report,
    out: &mut RunOutput,
    s: &AffineSlice,
    p: &Prepared,
    seed: u64,
) -> Result<()> {
    r.section("Contact convexity: homogenized moment cone");
    let (image, _) = moment_image(s)?;
    if !image.is_bounded() {
        r.kv("not applicable", "the moment image is unbounded");
        return Ok(());
    }
    let cone = homogenize(&image)?;
    r.polyhedron(&cone);
    let d = image.dim();
    let t1 = cone.with_equality(Halfspace::new(linalg::unit(d + 1, d), ExtScalar::one()))?;
    let keep: Vec<usize> = (0..d).collect();
    let back = project(&t1, &keep)?;
    let eq = poly_equal(&back, &image)?;
    r.kv("slice at t = 1 equals the image", Report::yes_no(eq));
    if !eq {
        out.failures.push("homogenized cone slice".into());
    }
    let Some(curve) = scenario_curve(p) else {
        r.kv("sampling", "skipped (no plane curve)");
        return Ok(());
    };
    if curve.ambient_dim() != 2 || d != 2 {
        r.kv("sampling", "skipped (not planar)");
        return Ok(());
    }
    let n = p.scenario.samples.unwrap_or(DEFAULT_SAMPLES);
    let t_max = p.scenario.t_max.unwrap_or(1.0);
    let cloud = contact_cone_sample(&curve, n, t_max, seed)?;
    let worst = cloud
        .points
        .iter()
        .flat_map(|x| cone.halfspaces().iter().map(move |h| -float_slack(h, x)))
        .chain(cloud.points.iter().flat_map(|x| {
            cone.equalities()
                .iter()
                .map(move |h| float_slack(h, x).abs())
        }))
        .fold(0.0, f64::max);
    r.kv("samples", n);
    r.kv("t_max", float(t_max));
    r.kv("largest constraint violation", float(worst));
    let inside = worst <= H_REP_TOL;
    r.kv(
        "all samples satisfy the cone constraints within 1e-9",
        Report::yes_no(inside),
    );
    if !inside {
        out.failures.push("contact cone samples".into());
    }
    out.files.push(("contact.csv".into(), csv(&cloud.points)));
    Ok(())
}

/// Polylines of a cloud, one per arc of the image, in parameter order.
fn arc_polylines(
    img: &CurveImage,
    params: &[f64],
    points: &[Vec<f64>],
) -> Vec<(Vec<[f64; 2]>, bool)> {
    let period = std::f64::consts::TAU;
    let closed = matches!(
        img.spec,
        CurveSpec::Circle { .. } | CurveSpec::Ellipse { .. }
    );
    img.arcs
        .iter()
        .map(|[l, r]| {
            let mut on: Vec<(f64, [f64; 2])> = params
                .iter()
                .zip(points)
                .filter_map(|(&s, p)| {
                    let s = if closed && s < *l { s + period } else { s };
                    (s >= *l && s <= *r).then_some((s, [p[0], p[1]]))
                })
                .collect();
            on.sort_by(|a, b| a.0.total_cmp(&b.0));
            (on.into_iter().map(|(_, p)| p).collect(), false)
        })
        .collect()
}

fn sample_section(r: &mut Report, out: &mut RunOutput, p: &Prepared, seed: u64) -> Result<()> {
    r.section("Nonconvex images of curved slices");
    let curve = scenario_curve(p)
        .ok_or_else(|| MomentError::Parse("curve: sample needs a curve".into()))?;
    let n = p.scenario.samples.unwrap_or(DEFAULT_SAMPLES);
    let cloud = sample_image(&curve, n, seed)?;
    let img = CurveImage::new(&curve)?;
    let defect = convexity_defect(&cloud, &|x| img.distance(x));
    r.kv(
        "curve",
        serde_json::to_string(&curve).expect("serializable"),
    );
    r.kv("samples", n);
    r.kv("arcs in the orthant", img.arcs.len());
    for c in &img.crossings {
        r.line(&format!("  boundary crossing {}", floats(c)));
    }
    r.kv("convexity defect", float(defect));
    r.kv("convex within 1e-9", Report::yes_no(defect < 1e-9));
    out.files.push(("sample.csv".into(), csv(&cloud.points)));
    if curve.ambient_dim() == 2 {
        out.files.push((
            "sample.svg".into(),
            svg(
                &arc_polylines(&img, &cloud.params, &cloud.points),
                &p.scenario.name,
            ),
        ));
    }
    Ok(())
}

fn deform_section(r: &mut Report, out: &mut RunOutput, p: &Prepared, seed: u64) -> Result<()> {
    r.section("Deformations of slices: translate equivalence of images");
    let family = p.scenario.family.clone().unwrap_or_default();
    let n = p.scenario.samples.unwrap_or(DEFAULT_SAMPLES).min(4000);
    let scan = deformation_scan(&family, n, seed)?;
    for (i, s) in scan.summaries.iter().enumerate() {
        r.line(&format!(
            "member {i}: centroid {}, min {}, max {}",
            floats(&s.centroid),
            floats(&s.min),
            floats(&s.max)
        ));
    }
    for v in &scan.verdicts {
        r.line(&format!(
            "pair ({}, {}): shift {}, Hausdorff {}, translates: {}",
            v.first,
            v.second,
            floats(&v.shift),
            float(v.hausdorff),
            Report::yes_no(v.equivalent)
        ));
    }
    r.kv("deformation nontrivial", Report::yes_no(scan.nontrivial));
    let mut lines = Vec::new();
    for c in &family {
        if c.ambient_dim() == 2 {
            let cloud = sample_image(c, n, seed)?;
            lines.extend(arc_polylines(
                &CurveImage::new(c)?,
                &cloud.params,
                &cloud.points,
            ));
        }
    }
    if !lines.is_empty() {
        out.files
            .push(("deform.svg".into(), svg(&lines, &p.scenario.name)));
    }
    Ok(())
}

/// Runs every requested analysis; no file system access.
pub fn execute(p: &Prepared, seed: u64) -> Result<RunOutput> {
    let mut analyses = p.scenario.analyses.clone();
    analyses.dedup();
    let names: Vec<&str> = analyses.iter().map(|a| a.name()).collect();
    let mut r = Report::new(&p.scenario.name, seed, &names);
    let mut out = RunOutput::default();
    let slice = match &p.model {
        BuiltModel::Slice(s) => Some(s),
        BuiltModel::Module(_) => None,
    };
    for a in analyses {
        match (a, slice) {
            (Analysis::SliceReport, _) => slice_report(&mut r, &mut out, p)?,
            (Analysis::Morse, Some(s)) => morse_section(&mut r, &mut out, s, p)?,
            (Analysis::Quasifold, Some(s)) => quasifold_section(&mut r, s),
            (Analysis::ContactCone, Some(s)) => contact_section(&mut r, &mut out, s, p, seed)?,
            (Analysis::Sample, _) => sample_section(&mut r, &mut out, p, seed)?,
            (Analysis::Deform, _) => deform_section(&mut r, &mut out, p, seed)?,
            (other, None) => {
                return Err(MomentError::NotApplicable(format!(
                    "{} needs an affine slice",
                    other.name()
                )))
            }
        }
    }
    if !out.failures.is_empty() {
        r.section("Failed checks");
        for f in &out.failures {
            r.line(f);
        }
    }
    out.report = r.into_string();
    Ok(out)
}

pub fn validate_scenario(path: &Path) -> Result<Prepared, CliError> {
    let s = load_scenario(path).map_err(|e| CliError::Validation(e.to_string()))?;
    prepare(s).map_err(|e| CliError::Validation(e.to_string()))
}

/// Loads, runs and writes `report.txt` plus artifacts into `out_dir`.
pub fn run_scenario(
    path: &Path,
    out_dir: Option<&Path>,
    seed: Option<u64>,
) -> Result<PathBuf, CliError> {
    let p = validate_scenario(path)?;
    let seed = seed.or(p.scenario.seed).unwrap_or(0);
    let dir = out_dir
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("out").join(&p.scenario.name));
    let out = execute(&p, seed)?;
    std::fs::create_dir_all(&dir)
        .map_err(|e| CliError::Validation(format!("{}: {e}", dir.display())))?;
    let write = |name: &str, body: &str| {
        std::fs::write(dir.join(name), body)
            .map_err(|e| CliError::Validation(format!("{}: {e}", dir.join(name).display())))
    };
    write("report.txt", &out.report)?;
    for (name, body) in &out.files {
        write(name, body)?;
    }
    if !out.failures.is_empty() {
        return Err(CliError::Internal(out.failures.join("; ")));
    }
    Ok(dir)
}
