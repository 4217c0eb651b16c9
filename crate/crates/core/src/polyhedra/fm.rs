//! Projection onto a coordinate subset by Fourier-Motzkin elimination.

use std::cmp::Ordering;

use crate::error::{MomentError, Result};
use crate::polyhedra::{Halfspace, Polyhedron, VRep};
use crate::presymlin::linalg::{self, Vector};
use crate::scalars::ExtScalar;

/// Projection of `p` onto the coordinates `keep` (in that order).
///
/// Equalities are used first to substitute dropped coordinates away; the
/// remaining ones are eliminated one at a time, pruning after each step to
/// the facets of the intermediate projection (whose generators are the
/// projected generators of `p`).
pub fn project(p: &Polyhedron, keep: &[usize]) -> Result<Polyhedron> {
    let n = p.dim();
    if let Some(&k) = keep.iter().find(|&&k| k >= n) {
        return Err(MomentError::DimensionMismatch(format!(
            "coordinate {k} outside R^{n}"
        )));
    }
    if p.is_empty() {
        return Ok(Polyhedron::empty(keep.len()));
    }
    let mut dropped: Vec<usize> = (0..n).filter(|i| !keep.contains(i)).collect();
    let mut ineqs: Vec<Halfspace> = p.halfspaces().to_vec();
    let mut eqs: Vec<Halfspace> = p.equalities().to_vec();

    // substitute equalities
    let mut kept_eqs = Vec::new();
    while let Some(e) = eqs.pop() {
        let Some(&j) = dropped.iter().find(|&&j| !e.normal[j].is_zero()) else {
            kept_eqs.push(e);
            continue;
        };
        let inv = e.normal[j].checked_inv()?;
        let sub = |h: &Halfspace| -> Halfspace {
            if h.normal[j].is_zero() {
                return h.clone();
            }
            let c = -(&h.normal[j] * &inv);
            Halfspace::new(
                linalg::axpy(&h.normal, &c, &e.normal),
                &h.offset + &c * &e.offset,
            )
        };
        ineqs = ineqs.iter().map(sub).collect();
        eqs = eqs.iter().map(sub).collect();
        kept_eqs = kept_eqs.iter().map(sub).collect();
        dropped.retain(|&d| d != j);
    }

    let mut gens = p.vrep().clone();
    let zero_out = |v: &mut Vector, j: usize| v[j] = ExtScalar::zero();
    let eliminated: Vec<usize> = (0..n)
        .filter(|i| !keep.contains(i) && !dropped.contains(i))
        .collect();
    for &j in &eliminated {
        for v in gens
            .vertices
            .iter_mut()
            .chain(gens.rays.iter_mut())
            .chain(gens.lines.iter_mut())
        {
            zero_out(v, j);
        }
    }
    ineqs = prune(n, &gens, ineqs);

    for j in dropped.clone() {
        let sign = |h: &Halfspace| h.normal[j].sign().expect("field data");
        let pos: Vec<&Halfspace> = ineqs
            .iter()
            .filter(|h| sign(h) == Ordering::Greater)
            .collect();
        let neg: Vec<&Halfspace> = ineqs.iter().filter(|h| sign(h) == Ordering::Less).collect();
        let mut next: Vec<Halfspace> = ineqs
            .iter()
            .filter(|h| sign(h) == Ordering::Equal)
            .cloned()
            .collect();
        for a in &pos {
            for b in &neg {
                let ca = -&b.normal[j];
                let cb = a.normal[j].clone();
                let normal = linalg::add(
                    &linalg::scale(&ca, &a.normal),
                    &linalg::scale(&cb, &b.normal),
                );
                let offset = &ca * &a.offset + &cb * &b.offset;
                next.push(Halfspace::new(normal, offset));
            }
        }
        for v in gens
            .vertices
            .iter_mut()
            .chain(gens.rays.iter_mut())
            .chain(gens.lines.iter_mut())
        {
            zero_out(v, j);
        }
        ineqs = prune(n, &gens, next);
    }

    let restrict = |h: &Halfspace| {
        Halfspace::new(
            keep.iter().map(|&k| h.normal[k].clone()).collect(),
            h.offset.clone(),
        )
    };
    let ineqs: Vec<Halfspace> = ineqs.iter().map(restrict).collect();
    let eqs: Vec<Halfspace> = kept_eqs.iter().map(restrict).collect();
    Polyhedron::from_constraints(keep.len(), &ineqs, &eqs)
}

/// Keeps one constraint per facet of `conv(gens)`; drops the rest.
fn prune(n: usize, gens: &VRep, cands: Vec<Halfspace>) -> Vec<Halfspace> {
    let v0 = &gens.vertices[0];
    let mut dirs: Vec<Vector> = gens.vertices[1..]
        .iter()
        .map(|v| linalg::sub(v, v0))
        .collect();
    dirs.extend(gens.rays.iter().cloned());
    dirs.extend(gens.lines.iter().cloned());
    let pdim = linalg::rank(&dirs, n);

    let mut seen: Vec<(Vec<bool>, Vec<bool>)> = Vec::new();
    let mut out = Vec::new();
    for h in cands {
        if linalg::is_zero(&h.normal) {
            continue;
        }
        let tv: Vec<bool> = gens.vertices.iter().map(|v| h.slack(v).is_zero()).collect();
        let tr: Vec<bool> = gens
            .rays
            .iter()
            .map(|r| linalg::dot(&h.normal, r).is_zero())
            .collect();
        let tight: Vec<&Vector> = gens
            .vertices
            .iter()
            .zip(&tv)
            .filter(|(_, &t)| t)
            .map(|(v, _)| v)
            .collect();
        if tight.is_empty() {
            continue;
        }
        let mut face: Vec<Vector> = tight[1..]
            .iter()
            .map(|v| linalg::sub(v, tight[0]))
            .collect();
        face.extend(
            gens.rays
                .iter()
                .zip(&tr)
                .filter(|(_, &t)| t)
                .map(|(r, _)| r.clone()),
        );
        face.extend(gens.lines.iter().cloned());
        if linalg::rank(&face, n) + 1 != pdim {
            continue;
        }
        let key = (tv, tr);
        if !seen.contains(&key) {
            seen.push(key);
            out.push(h);
        }
    }
    out
}
