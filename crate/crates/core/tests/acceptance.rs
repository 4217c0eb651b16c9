//! Acceptance run: one PASS/FAIL line per criterion with its wall time.
mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use momentlab::lattice::null_subgroup_closed;
use momentlab::models::{
    build_affine_slice, cleanness_at, cleanness_on_stratum, dphi_identities, intersect_local_cones,
    moment_image, symplectization_check, AffineSlice, ModelPoint, WeightedModule,
};
use momentlab::morse::{critical_set, full_critical_set, morse_bott_check};
use momentlab::polyhedra::{homogenize, poly_equal, project, Halfspace, Polyhedron};
use momentlab::presymlin::{
    format_vector, linalg, natural_quotient, sigma_orthogonal, PresympForm, Reduction, Subspace,
    Vector,
};
use momentlab::sampler::{
    contact_cone_sample, convexity_defect, deformation_scan, sample_image, CurveImage, CurveSpec,
};
use momentlab::ExtScalar;
use rand::Rng;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn v(xs: &[i64]) -> Vector {
    linalg::from_ints(xs)
}

fn vertex_set(p: &Polyhedron) -> BTreeSet<String> {
    p.vrep().vertices.iter().map(|x| format_vector(x)).collect()
}

fn segment() -> AffineSlice {
    let w = Subspace::span(2, &[v(&[1, -1])]).unwrap();
    build_affine_slice(WeightedModule::standard(2), v(&[1, 0]), w).unwrap()
}

fn irrational_segment() -> AffineSlice {
    let b = common::sqrt2_basis();
    let w = Subspace::kernel_of(2, &[vec![ExtScalar::one(), common::q_sqrt2(&b, 0, 1)]]).unwrap();
    build_affine_slice(WeightedModule::standard(2), v(&[1, 0]), w).unwrap()
}

fn ac1() -> Check {
    let s = segment();
    let (image, rep) = moment_image(&s).map_err(|e| e.to_string())?;
    let oracle = common::brute_force_image(&s);
    let want: BTreeSet<String> = ["(1, 0)", "(0, 1)"].iter().map(|x| x.to_string()).collect();
    ensure(
        vertex_set(&image) == want && vertex_set(&oracle) == want,
        "vertices",
    )?;
    let span = &rep.affine_span;
    let dir = Subspace::span(2, &[v(&[1, -1])]).unwrap();
    ensure(
        span.direction == dir && span.contains(&v(&[1, 0])),
        "affine span",
    )?;
    ensure(rep.rational_polyhedral, "rationality verdict")?;
    ensure(
        *s.null_ideal() == Subspace::span(2, &[v(&[1, 1])]).unwrap(),
        "null ideal",
    )?;
    ensure(s.strata().len() == 3, "stratum count")?;
    for st in s.strata() {
        ensure(
            cleanness_on_stratum(&s, &st.support).unwrap().clean,
            format!("clean on {:?}", st.support),
        )?;
    }
    Ok(
        "vertices (1,0),(0,1); span (1,0)+span{(1,-1)}; null ideal span{(1,1)}; 3 clean strata"
            .into(),
    )
}

fn ac2() -> Check {
    let s = irrational_segment();
    let (image, rep) = moment_image(&s).map_err(|e| e.to_string())?;
    let want: BTreeSet<String> = ["(1, 0)", "(0, 1/2*sqrt2)"]
        .iter()
        .map(|x| x.to_string())
        .collect();
    ensure(
        vertex_set(&image) == want,
        format!("vertices {:?}", vertex_set(&image)),
    )?;
    ensure(
        poly_equal(&image, &common::brute_force_image(&s)).unwrap(),
        "oracle image",
    )?;
    let q = &rep.quasilattice;
    ensure(
        q.rank == 2 && q.quotient_dim == 1,
        format!("quasilattice rank {} of {}", q.rank, q.quotient_dim),
    )?;
    ensure(
        !null_subgroup_closed(&s) && !rep.null_subgroup_closed,
        "null subgroup closed",
    )?;
    ensure(!rep.rational_polyhedral, "rationality verdict")?;
    // the other direction on the rational segment
    let (_, seg) = moment_image(&segment()).unwrap();
    ensure(
        seg.rational_polyhedral && seg.null_subgroup_closed,
        "segment verdicts",
    )?;
    Ok("vertices (1,0),(0,sqrt2/2); rank 2 > 1; not closed; not rational".into())
}

fn ac3(slices: &[AffineSlice]) -> Check {
    let mut irr = 0;
    for (i, s) in slices.iter().enumerate() {
        let oracle = common::brute_force_image(s);
        let rep = full_critical_set(s).map_err(|e| format!("slice {i}: {e}"))?;
        let hull = Polyhedron::convex_hull(s.module().torus_rank(), &rep.images).unwrap();
        ensure(
            poly_equal(&hull, &oracle).unwrap(),
            format!("slice {i}: hull differs"),
        )?;
        ensure(rep.holds(), format!("slice {i}: vertex checks"))?;
        if !null_subgroup_closed(s) {
            irr += 1;
        }
    }
    Ok(format!(
        "{} slices ({irr} with non-closed null subgroup), hull of fixed images = oracle image",
        slices.len()
    ))
}

fn ac4(slices: &[AffineSlice]) -> Check {
    for (i, s) in slices.iter().enumerate() {
        let cones = intersect_local_cones(s).map_err(|e| format!("slice {i}: {e}"))?;
        ensure(
            poly_equal(&cones, &common::brute_force_image(s)).unwrap(),
            format!("slice {i}"),
        )?;
    }
    Ok(format!(
        "{} slices, intersection of local cones = oracle image",
        slices.len()
    ))
}

fn ac5() -> Check {
    let s = segment();
    let xi = v(&[1, 0]);
    let cs = critical_set(&s, &xi).map_err(|e| e.to_string())?;
    let idx: BTreeSet<usize> = cs.iter().map(|c| c.index).collect();
    ensure(idx == BTreeSet::from([0, 2]), format!("indices {idx:?}"))?;
    // indices from the weights agree with a brute-force Hessian count
    for c in &cs {
        ensure(c.hessian_inertia.1 == c.index, "hessian inertia")?;
    }
    ensure(morse_bott_check(&s, &xi).unwrap().holds, "Morse-Bott")?;
    let moved = critical_set(&s, &v(&[2, 1])).unwrap();
    let a: Vec<_> = cs.iter().map(|c| (&c.support, c.index)).collect();
    let b: Vec<_> = moved.iter().map(|c| (&c.support, c.index)).collect();
    ensure(a == b, "invariance under xi + (1,1)")?;
    Ok("indices {0,2}; Bott; invariant under xi+(1,1)".into())
}

fn ac6() -> Check {
    let m = WeightedModule::new(2, vec![vec![1, 0], vec![1, 1], vec![1, -1]], vec![1, 2]).unwrap();
    let n = Subspace::span(2, &[v(&[0, 1])]).unwrap();
    let bad = cleanness_at(
        &m,
        &ModelPoint::real_parts(vec![0, 1, 1].into_iter().map(ExtScalar::from_int).collect()),
    )
    .map_err(|e| e.to_string())?;
    ensure(!bad.clean, "clean at (0;1,1)")?;
    ensure(
        bad.stabilizer == Subspace::zero(2)
            && bad.leaf_stabilizer == Subspace::full(2)
            && bad.null_ideal == n,
        "subspaces at (0;1,1)",
    )?;
    let good = cleanness_at(
        &m,
        &ModelPoint::real_parts(vec![1, 0, 0].into_iter().map(ExtScalar::from_int).collect()),
    )
    .map_err(|e| e.to_string())?;
    ensure(good.clean, "not clean at (1;0,0)")?;
    ensure(
        good.stabilizer == n && good.leaf_stabilizer == n && good.null_ideal == n,
        "subspaces at (1;0,0)",
    )?;
    Ok(
        "(0;1,1): g_x=0, g_xbar=R^2, n=span{(0,1)}, not clean; (1;0,0): all span{(0,1)}, clean"
            .into(),
    )
}

fn ac7() -> Check {
    let mut r = common::rng(7);
    let mut checked = 0;
    for case in 0..500 {
        let n = r.random_range(1..=8);
        let mut m = vec![vec![ExtScalar::zero(); n]; n];
        for _ in 0..r.random_range(0..=n / 2 + 1) {
            let u: Vec<i64> = (0..n).map(|_| r.random_range(-2..=2)).collect();
            let w: Vec<i64> = (0..n).map(|_| r.random_range(-2..=2)).collect();
            for a in 0..n {
                for b in 0..n {
                    m[a][b] = &m[a][b] + &ExtScalar::from_int(u[a] * w[b] - w[a] * u[b]);
                }
            }
        }
        let sigma = PresympForm::new(m).unwrap();
        let rows: Vec<Vector> = (0..r.random_range(0..=n))
            .map(|_| {
                (0..n)
                    .map(|_| ExtScalar::from_int(r.random_range(-2..=2)))
                    .collect()
            })
            .collect();
        let f = Subspace::span(n, &rows).unwrap();
        let fs = sigma_orthogonal(&sigma, &f).unwrap();
        let meet = f.intersection(&sigma.kernel()).unwrap();
        ensure(
            fs.dim() == n - f.dim() + meet.dim(),
            format!("case {case}: dim F^sigma"),
        )?;
        ensure(
            sigma_orthogonal(&sigma, &fs).unwrap() == f.sum(&sigma.kernel()).unwrap(),
            format!("case {case}: double orthogonal"),
        )?;
        for which in [Reduction::Subspace, Reduction::Orthogonal] {
            ensure(
                natural_quotient(&sigma, &f, which)
                    .unwrap()
                    .induced_form
                    .is_nondegenerate(),
                format!("case {case}: reduction"),
            )?;
        }
        // model point identities on a random module
        let d = r.random_range(1..=3);
        let mm = r.random_range(1..=4);
        let weights: Vec<Vec<i64>> = (0..mm)
            .map(|_| (0..d).map(|_| r.random_range(-2..=2)).collect())
            .collect();
        let masked: Vec<usize> = (0..mm).filter(|_| r.random_bool(0.4)).collect();
        let module = WeightedModule::new(d, weights, masked).unwrap();
        let e: Vector = (0..2 * mm)
            .map(|_| ExtScalar::from_int(r.random_range(-2..=2)))
            .collect();
        ensure(
            dphi_identities(&module, &e).unwrap(),
            format!("case {case}: moment differential"),
        )?;
        ensure(
            symplectization_check(&module, &e).unwrap().holds(),
            format!("case {case}: symplectized slice"),
        )?;
        checked += 1;
    }
    Ok(format!("{checked} forms and model points, zero failures"))
}

fn ac8() -> Check {
    let n = 10_000;
    let circle = CurveSpec::Circle {
        center: [1.0, 1.0],
        radius: 1.2,
    };
    let img = CurveImage::new(&circle).map_err(|e| e.to_string())?;
    let d_circle = convexity_defect(&sample_image(&circle, n, 7).unwrap(), &|x| img.distance(x));
    let line = CurveSpec::Affine {
        point: vec![1.0, 0.0],
        direction: vec![-1.0, 1.0],
        range: None,
    };
    let img_l = CurveImage::new(&line).unwrap();
    let d_line = convexity_defect(&sample_image(&line, n, 7).unwrap(), &|x| img_l.distance(x));
    ensure(d_circle > 0.05, format!("circle defect {d_circle:e}"))?;
    ensure(d_line < 1e-9, format!("affine defect {d_line:e}"))?;
    Ok(format!(
        "circle defect {d_circle:.4} > 0.05; affine defect {d_line:.1e} < 1e-9"
    ))
}

fn ac9() -> Check {
    let a = CurveSpec::Circle {
        center: [1.0, 1.0],
        radius: 1.2,
    };
    let b = CurveSpec::Circle {
        center: [1.3, 1.0],
        radius: 1.2,
    };
    let moving = deformation_scan(&[a.clone(), b], 4000, 7).map_err(|e| e.to_string())?;
    ensure(
        moving.nontrivial && !moving.verdicts[0].equivalent,
        "moving family judged trivial",
    )?;
    let constant = deformation_scan(&[a.clone(), a], 4000, 7).unwrap();
    ensure(
        !constant.nontrivial && constant.verdicts[0].equivalent,
        "constant family judged nontrivial",
    )?;
    Ok(format!(
        "moving family Hausdorff {:.3e} (not translates); constant family {:.1e} (translates); tol 1e-3",
        moving.verdicts[0].hausdorff, constant.verdicts[0].hausdorff
    ))
}

fn ac10() -> Check {
    let (image, _) = moment_image(&segment()).unwrap();
    let cone = homogenize(&image).map_err(|e| e.to_string())?;
    let t1 = cone
        .with_equality(Halfspace::new(linalg::unit(3, 2), ExtScalar::one()))
        .unwrap();
    ensure(
        poly_equal(&project(&t1, &[0, 1]).unwrap(), &image).unwrap(),
        "t = 1 slice",
    )?;
    let line = CurveSpec::Affine {
        point: vec![1.0, 0.0],
        direction: vec![-1.0, 1.0],
        range: None,
    };
    let cloud = contact_cone_sample(&line, 10_000, 2.0, 7).unwrap();
    let mut worst: f64 = 0.0;
    for x in &cloud.points {
        for h in cone.halfspaces() {
            let s: f64 = linalg::to_f64(&h.normal)
                .iter()
                .zip(x)
                .map(|(a, b)| a * b)
                .sum::<f64>()
                - h.offset.float_eval();
            worst = worst.max(-s);
        }
        for h in cone.equalities() {
            let s: f64 = linalg::to_f64(&h.normal)
                .iter()
                .zip(x)
                .map(|(a, b)| a * b)
                .sum::<f64>()
                - h.offset.float_eval();
            worst = worst.max(s.abs());
        }
    }
    ensure(worst <= 1e-9, format!("violation {worst:e}"))?;
    Ok(format!(
        "t=1 slice = segment; 10000 samples, worst violation {worst:.1e}"
    ))
}

fn ac11() -> Check {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios");
    let mut names: Vec<_> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    names.sort();
    let tmp = tempfile::tempdir().unwrap();
    for p in &names {
        let stem = p.file_stem().unwrap().to_string_lossy().into_owned();
        let mut outs = Vec::new();
        for k in 0..2 {
            let out = tmp.path().join(format!("{stem}-{k}"));
            let o = Command::new(env!("CARGO_BIN_EXE_momentlab"))
                .args(["run", p.to_str().unwrap(), "--out", out.to_str().unwrap()])
                .output()
                .unwrap();
            ensure(
                o.status.success(),
                format!("{stem}: exit {:?}", o.status.code()),
            )?;
            let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(&out)
                .unwrap()
                .map(|e| {
                    let e = e.unwrap();
                    (
                        e.file_name().to_string_lossy().into_owned(),
                        std::fs::read(e.path()).unwrap(),
                    )
                })
                .collect();
            files.sort();
            outs.push(files);
        }
        ensure(outs[0] == outs[1], format!("{stem}: outputs differ"))?;
    }
    Ok(format!("{} scenarios rerun, byte-identical", names.len()))
}

fn main() {
    let t0 = Instant::now();
    let slices = common::random_bounded_slices(2024, 100);
    let gen_time = t0.elapsed().as_secs_f64();
    type Job<'a> = (&'a str, Option<f64>, Box<dyn FnOnce() -> Check + 'a>);
    let jobs: Vec<Job> = vec![
        (
            "AC1 rational segment slice (exact)",
            Some(1.0),
            Box::new(ac1),
        ),
        ("AC2 irrational slice (exact)", Some(1.0), Box::new(ac2)),
        (
            "AC3 vertex theorem battery (exact)",
            Some(60.0),
            Box::new(|| ac3(&slices)),
        ),
        (
            "AC4 local cone battery (exact)",
            None,
            Box::new(|| ac4(&slices)),
        ),
        ("AC5 Morse suite (exact)", None, Box::new(ac5)),
        ("AC6 cleanness counterexample (exact)", None, Box::new(ac6)),
        (
            "AC7 presymplectic linear algebra properties (exact)",
            Some(30.0),
            Box::new(ac7),
        ),
        ("AC8 nonconvexity reproduction", Some(5.0), Box::new(ac8)),
        (
            "AC9 deformation nontriviality (tol 1e-3)",
            None,
            Box::new(ac9),
        ),
        (
            "AC10 contact cone (exact slice, samples to 1e-9)",
            None,
            Box::new(ac10),
        ),
        (
            "AC11 reproducibility (byte-identical)",
            None,
            Box::new(ac11),
        ),
    ];
    println!("random slice generation for AC3/AC4: {gen_time:.2}s");
    let mut failed = 0;
    for (name, limit, job) in jobs {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(job)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(l)) if secs > l => Err(format!("took {secs:.2}s, limit {l}s")),
            (o, _) => o,
        };
        match outcome {
            Ok(detail) => println!("PASS {name} [{secs:.2}s]: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name} [{secs:.2}s]: {why}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
