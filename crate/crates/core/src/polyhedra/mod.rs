//! Exact convex polyhedra holding both an H- and a V-representation.
//!
//! Every constructor goes through double description and canonicalizes:
//! equalities are the reduced echelon description of the affine hull,
//! inequalities are the facets (reduced modulo the equalities, first nonzero
//! entry scaled to absolute value one, sorted), vertices are reduced modulo
//! the lineality space and sorted. Two polyhedra built from different
//! descriptions of the same set therefore compare equal structurally, and
//! [`poly_equal`] double-checks by mutual containment.

mod dd;
mod fm;

use std::cmp::Ordering;

use serde_json::{json, Value};

use crate::error::{MomentError, Result};
use crate::lattice::is_rational_subspace;
use crate::presymlin::linalg::{self, Vector};
use crate::presymlin::{AffineSubspace, Subspace};
use crate::scalars::{ensure_field, is_rational_direction, ExtScalar};

pub use fm::project;

/// Largest ambient dimension accepted by the exact engine.
pub const MAX_DIM: usize = 8;
/// Largest number of raw constraints (or generators) accepted.
pub const MAX_CONSTRAINTS: usize = 64;

/// `<normal, x> >= offset`, or `= offset` when used as an equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Halfspace {
    pub normal: Vector,
    pub offset: ExtScalar,
}

impl Halfspace {
    pub fn new(normal: Vector, offset: ExtScalar) -> Self {
        Self { normal, offset }
    }

    pub fn from_ints(normal: &[i64], offset: i64) -> Self {
        Self::new(linalg::from_ints(normal), ExtScalar::from_int(offset))
    }

    /// `<normal, x> - offset`
    pub fn slack(&self, x: &[ExtScalar]) -> ExtScalar {
        linalg::dot(&self.normal, x) - &self.offset
    }

    fn homogeneous_row(&self) -> Vector {
        let mut row = self.normal.clone();
        row.push(-&self.offset);
        row
    }
}

/// Generators: `conv(vertices) + cone(rays) + span(lines)`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct VRep {
    pub vertices: Vec<Vector>,
    pub rays: Vec<Vector>,
    pub lines: Vec<Vector>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polyhedron {
    dim: usize,
    halfspaces: Vec<Halfspace>,
    equalities: Vec<Halfspace>,
    vrep: VRep,
    empty: bool,
}

fn check_scale(dim: usize, count: usize, what: &str) -> Result<()> {
    if dim > MAX_DIM {
        return Err(MomentError::DeskScaleExceeded(format!(
            "ambient dimension {dim} exceeds {MAX_DIM}"
        )));
    }
    if count > MAX_CONSTRAINTS {
        return Err(MomentError::DeskScaleExceeded(format!(
            "{count} {what} exceed {MAX_CONSTRAINTS}"
        )));
    }
    Ok(())
}

fn check_len(dim: usize, v: &[ExtScalar], what: &str) -> Result<()> {
    if v.len() == dim {
        Ok(())
    } else {
        Err(MomentError::DimensionMismatch(format!(
            "{what} of length {} in R^{dim}",
            v.len()
        )))
    }
}

pub(crate) fn cmp_vectors(a: &[ExtScalar], b: &[ExtScalar]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.cmp_exact(y).expect("field data") {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

/// Reduces `v` against reduced echelon rows (each row's pivot is its first
/// nonzero entry, equal to one).
fn reduce_mod(v: &[ExtScalar], rows: &[Vector]) -> Vector {
    let mut v = v.to_vec();
    for r in rows {
        let p = r.iter().position(|x| !x.is_zero()).expect("nonzero row");
        if !v[p].is_zero() {
            let c = -&v[p];
            v = linalg::axpy(&v, &c, r);
        }
    }
    v
}

impl Polyhedron {
    pub fn empty(dim: usize) -> Self {
        Self {
            dim,
            halfspaces: Vec::new(),
            equalities: vec![Halfspace::new(linalg::zeros(dim), ExtScalar::one())],
            vrep: VRep::default(),
            empty: true,
        }
    }

    /// `{x : <a_i, x> >= b_i, <c_k, x> = d_k}`.
    pub fn from_constraints(dim: usize, ineqs: &[Halfspace], eqs: &[Halfspace]) -> Result<Self> {
        for h in ineqs.iter().chain(eqs) {
            check_len(dim, &h.normal, "constraint normal")?;
        }
        check_scale(dim, ineqs.len(), "inequalities")?;
        ensure_field(
            ineqs
                .iter()
                .chain(eqs)
                .flat_map(|h| h.normal.iter().chain([&h.offset])),
        )?;

        // homogenize: (x, s) with s >= 0 first
        let n = dim + 1;
        let mut rows = vec![linalg::unit(n, dim)];
        rows.extend(ineqs.iter().map(Halfspace::homogeneous_row));
        let eq_rows: Vec<Vector> = eqs.iter().map(Halfspace::homogeneous_row).collect();
        let (rays, lines) = dd::cone_generators(n, &eq_rows, &rows);

        let mut vrep = VRep::default();
        for r in rays {
            let s = &r[dim];
            if s.is_zero() {
                vrep.rays.push(r[..dim].to_vec());
            } else {
                let inv = s.checked_inv()?;
                vrep.vertices.push(linalg::scale(&inv, &r[..dim]));
            }
        }
        vrep.lines = lines.into_iter().map(|l| l[..dim].to_vec()).collect();
        if vrep.vertices.is_empty() {
            return Ok(Self::empty(dim));
        }
        Ok(Self::assemble(dim, vrep, ineqs))
    }

    /// `conv(vertices) + cone(rays) + span(lines)`.
    pub fn from_generators(dim: usize, gens: &VRep) -> Result<Self> {
        for v in gens.vertices.iter().chain(&gens.rays).chain(&gens.lines) {
            check_len(dim, v, "generator")?;
        }
        let count = gens.vertices.len() + gens.rays.len();
        check_scale(dim, count, "generators")?;
        ensure_field(
            gens.vertices
                .iter()
                .chain(&gens.rays)
                .chain(&gens.lines)
                .flatten(),
        )?;
        if gens.vertices.is_empty() {
            return Ok(Self::empty(dim));
        }
        // polar cone of valid inequalities (a, b): a.v - b >= 0, a.r >= 0, a.l = 0
        let n = dim + 1;
        let mut rows: Vec<Vector> = gens
            .vertices
            .iter()
            .map(|v| {
                let mut row = v.clone();
                row.push(-ExtScalar::one());
                row
            })
            .collect();
        rows.extend(gens.rays.iter().map(|r| {
            let mut row = r.clone();
            row.push(ExtScalar::zero());
            row
        }));
        let eq_rows: Vec<Vector> = gens
            .lines
            .iter()
            .map(|l| {
                let mut row = l.clone();
                row.push(ExtScalar::zero());
                row
            })
            .collect();
        let (rays, lines) = dd::cone_generators(n, &eq_rows, &rows);
        let split = |r: &Vector| Halfspace::new(r[..dim].to_vec(), r[dim].clone());
        let ineqs: Vec<Halfspace> = rays.iter().map(split).collect();
        let eqs: Vec<Halfspace> = lines.iter().map(split).collect();
        Self::from_constraints(dim, &ineqs, &eqs)
    }

    pub fn convex_hull(dim: usize, points: &[Vector]) -> Result<Self> {
        Self::from_generators(
            dim,
            &VRep {
                vertices: points.to_vec(),
                ..VRep::default()
            },
        )
    }

    /// The affine subspace `point + span(directions)`.
    pub fn affine(dim: usize, point: Vector, directions: Vec<Vector>) -> Result<Self> {
        Self::from_generators(
            dim,
            &VRep {
                vertices: vec![point],
                rays: Vec::new(),
                lines: directions,
            },
        )
    }

    pub fn orthant(dim: usize) -> Self {
        let ineqs: Vec<Halfspace> = (0..dim)
            .map(|i| Halfspace::new(linalg::unit(dim, i), ExtScalar::zero()))
            .collect();
        Self::from_constraints(dim, &ineqs, &[]).expect("orthant is within limits")
    }

    /// Canonical H- and V-representation from a minimal V-rep (as produced
    /// by double description) and candidate inequalities.
    fn assemble(dim: usize, gens: VRep, candidates: &[Halfspace]) -> Self {
        let lines = linalg::rref(&gens.lines, dim).0;
        let v0 = gens.vertices[0].clone();
        let mut dirs: Vec<Vector> = gens.vertices[1..]
            .iter()
            .map(|v| linalg::sub(v, &v0))
            .collect();
        dirs.extend(gens.rays.iter().cloned());
        dirs.extend(lines.iter().cloned());
        let direction = Subspace::span_unchecked(dim, &dirs);
        let pdim = direction.dim();

        let equalities: Vec<Halfspace> = direction
            .annihilator()
            .basis()
            .iter()
            .map(|f| Halfspace::new(f.clone(), linalg::dot(f, &v0)))
            .collect();

        let mut vertices: Vec<Vector> = gens
            .vertices
            .iter()
            .map(|v| reduce_mod(v, &lines))
            .collect();
        let mut rays: Vec<Vector> = gens
            .rays
            .iter()
            .map(|r| dd::normalize(&reduce_mod(r, &lines)))
            .collect();
        vertices.sort_by(|a, b| cmp_vectors(a, b));
        vertices.dedup();
        rays.sort_by(|a, b| cmp_vectors(a, b));
        rays.dedup();

        let mut facets: Vec<Halfspace> = Vec::new();
        for h in candidates {
            // reduce modulo the equalities
            let mut a = h.normal.clone();
            let mut b = h.offset.clone();
            for e in &equalities {
                let p = e
                    .normal
                    .iter()
                    .position(|x| !x.is_zero())
                    .expect("nonzero row");
                if !a[p].is_zero() {
                    let c = -&a[p];
                    a = linalg::axpy(&a, &c, &e.normal);
                    b = &b + &c * &e.offset;
                }
            }
            if linalg::is_zero(&a) {
                continue;
            }
            let hs = Halfspace::new(a, b);
            let tight_v: Vec<&Vector> = vertices.iter().filter(|v| hs.slack(v).is_zero()).collect();
            if tight_v.is_empty() {
                continue;
            }
            let mut face_dirs: Vec<Vector> = tight_v[1..]
                .iter()
                .map(|v| linalg::sub(v, tight_v[0]))
                .collect();
            face_dirs.extend(
                rays.iter()
                    .filter(|r| linalg::dot(&hs.normal, r).is_zero())
                    .cloned(),
            );
            face_dirs.extend(lines.iter().cloned());
            if linalg::rank(&face_dirs, dim) + 1 != pdim {
                continue;
            }
            let lead = hs
                .normal
                .iter()
                .find(|x| !x.is_zero())
                .expect("nonzero")
                .abs()
                .expect("field data");
            let inv = lead.checked_inv().expect("nonzero");
            let hs = Halfspace::new(linalg::scale(&inv, &hs.normal), &hs.offset * &inv);
            if !facets.contains(&hs) {
                facets.push(hs);
            }
        }
        facets.sort_by(|a, b| {
            cmp_vectors(&a.normal, &b.normal)
                .then_with(|| a.offset.cmp_exact(&b.offset).expect("field data"))
        });
        Self {
            dim,
            halfspaces: facets,
            equalities,
            vrep: VRep {
                vertices,
                rays,
                lines,
            },
            empty: false,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.empty
    }

    pub fn is_bounded(&self) -> bool {
        self.vrep.rays.is_empty() && self.vrep.lines.is_empty()
    }

    /// Dimension of the affine hull, `None` when empty.
    pub fn affine_dim(&self) -> Option<usize> {
        (!self.empty).then(|| self.dim - self.equalities.len())
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn equalities(&self) -> &[Halfspace] {
        &self.equalities
    }

    pub fn vrep(&self) -> &VRep {
        &self.vrep
    }

    pub fn contains(&self, x: &[ExtScalar]) -> bool {
        !self.empty
            && self.equalities.iter().all(|e| e.slack(x).is_zero())
            && self
                .halfspaces
                .iter()
                .all(|h| !h.slack(x).is_negative().expect("field data"))
    }

    /// Whether the whole of `other` lies in `self`.
    pub fn contains_polyhedron(&self, other: &Self) -> bool {
        if other.empty {
            return true;
        }
        if self.empty {
            return false;
        }
        let dir_ok = |v: &Vector, strict_eq: bool| {
            self.equalities
                .iter()
                .all(|e| linalg::dot(&e.normal, v).is_zero())
                && self.halfspaces.iter().all(|h| {
                    let d = linalg::dot(&h.normal, v);
                    if strict_eq {
                        d.is_zero()
                    } else {
                        !d.is_negative().expect("field data")
                    }
                })
        };
        other.vrep.vertices.iter().all(|v| self.contains(v))
            && other.vrep.rays.iter().all(|r| dir_ok(r, false))
            && other.vrep.lines.iter().all(|l| dir_ok(l, true))
    }

    /// Intersection of H-representations.
    pub fn intersect(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(MomentError::DimensionMismatch(format!(
                "polyhedra in R^{} and R^{}",
                self.dim, other.dim
            )));
        }
        if self.empty || other.empty {
            return Ok(Self::empty(self.dim));
        }
        let ineqs: Vec<Halfspace> = self
            .halfspaces
            .iter()
            .chain(&other.halfspaces)
            .cloned()
            .collect();
        let eqs: Vec<Halfspace> = self
            .equalities
            .iter()
            .chain(&other.equalities)
            .cloned()
            .collect();
        Self::from_constraints(self.dim, &ineqs, &eqs)
    }

    /// Minkowski sum, through generators.
    pub fn minkowski_sum(&self, other: &Self) -> Result<Self> {
        if self.empty || other.empty {
            return Ok(Self::empty(self.dim));
        }
        let mut gens = VRep::default();
        for a in &self.vrep.vertices {
            for b in &other.vrep.vertices {
                gens.vertices.push(linalg::add(a, b));
            }
        }
        gens.rays = self
            .vrep
            .rays
            .iter()
            .chain(&other.vrep.rays)
            .cloned()
            .collect();
        gens.lines = self
            .vrep
            .lines
            .iter()
            .chain(&other.vrep.lines)
            .cloned()
            .collect();
        Self::from_generators(self.dim, &gens)
    }

    /// `{x in P : <normal, x> = offset}`
    pub fn with_equality(&self, eq: Halfspace) -> Result<Self> {
        let mut eqs = self.equalities.clone();
        eqs.push(eq);
        if self.empty {
            return Ok(Self::empty(self.dim));
        }
        Self::from_constraints(self.dim, &self.halfspaces, &eqs)
    }

    /// JSON-compatible H-representation with exact scalars as strings.
    pub fn to_json(&self) -> Value {
        let enc = |hs: &[Halfspace]| -> Vec<Value> {
            hs.iter()
                .map(|h| {
                    json!({
                        "normal": h.normal.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                        "offset": h.offset.to_string(),
                    })
                })
                .collect()
        };
        json!({ "halfspaces": enc(&self.halfspaces), "equalities": enc(&self.equalities) })
    }
}

/// Canonical H-rep of the given constraints.
pub fn intersect_halfspaces(
    dim: usize,
    ineqs: &[Halfspace],
    eqs: &[Halfspace],
) -> Result<Polyhedron> {
    Polyhedron::from_constraints(dim, ineqs, eqs)
}

/// Vertices, extreme rays and lineality of a nonempty polyhedron.
pub fn enumerate_vertices(p: &Polyhedron) -> Result<VRep> {
    if p.empty {
        return Err(MomentError::EmptyPolyhedron("vertex enumeration".into()));
    }
    Ok(p.vrep.clone())
}

pub fn affine_span(p: &Polyhedron) -> Result<AffineSubspace> {
    if p.empty {
        return Err(MomentError::EmptyPolyhedron("affine span".into()));
    }
    let normals: Vec<Vector> = p.equalities.iter().map(|e| e.normal.clone()).collect();
    let direction = Subspace::span_unchecked(p.dim, &linalg::kernel(&normals, p.dim));
    Ok(AffineSubspace::new(p.vrep.vertices[0].clone(), direction))
}

/// Whether the polyhedron is cut out by half-spaces with rational normals.
///
/// The affine hull must be parallel to a rational subspace `D`, and every
/// facet normal restricted to `D` (in its rational echelon basis) must be a
/// rational direction. Offsets may be irrational.
pub fn is_rational_polyhedral(p: &Polyhedron) -> Result<bool> {
    let span = affine_span(p)?;
    if !is_rational_subspace(&span.direction) {
        return Ok(false);
    }
    for h in &p.halfspaces {
        let restricted: Vector = span
            .direction
            .basis()
            .iter()
            .map(|b| linalg::dot(&h.normal, b))
            .collect();
        if !is_rational_direction(&restricted)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The closed cone over `p` at height one: normals `(eta, -a)` and `t >= 0`.
pub fn homogenize(p: &Polyhedron) -> Result<Polyhedron> {
    if p.empty {
        return Err(MomentError::EmptyPolyhedron("homogenization".into()));
    }
    let n = p.dim + 1;
    let lift = |h: &Halfspace| Halfspace::new(h.homogeneous_row(), ExtScalar::zero());
    let mut ineqs: Vec<Halfspace> = p.halfspaces.iter().map(lift).collect();
    ineqs.push(Halfspace::new(linalg::unit(n, p.dim), ExtScalar::zero()));
    let eqs: Vec<Halfspace> = p.equalities.iter().map(lift).collect();
    Polyhedron::from_constraints(n, &ineqs, &eqs)
}

/// Set equality by mutual containment of generators in H-representations.
pub fn poly_equal(p: &Polyhedron, q: &Polyhedron) -> Result<bool> {
    if p.dim != q.dim {
        return Err(MomentError::DimensionMismatch(format!(
            "polyhedra in R^{} and R^{}",
            p.dim, q.dim
        )));
    }
    Ok(p.contains_polyhedron(q) && q.contains_polyhedron(p))
}

#[cfg(test)]
mod tests;
