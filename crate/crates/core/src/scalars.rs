//! Exact scalars in the Q-span of declared real constants.
//!
//! An [`ExtScalar`] is a vector of rational coefficients over a
//! [`ConstantBasis`] whose first element is always the constant `1`. Two
//! algebras are supported:
//!
//! * [`Algebra::Span`]: a bare Q-vector space. Addition, negation and scaling
//!   by rationals are defined; the product of two irrational scalars is not.
//!   Signs are decided from the declared floating-point values and fail
//!   loudly when the value is too close to zero to call.
//! * [`Algebra::Multiquadratic`]: constants `sqrt a`, `sqrt b`, ... together
//!   with all their products. The basis is closed under multiplication and
//!   spans the field Q(sqrt a, sqrt b, ...), so every algorithm that needs to
//!   divide (vertex enumeration, reduced echelon forms) works exactly. Signs
//!   are decided exactly.
//!
//! The constants are *declared* Q-linearly independent. This is trusted
//! input: verifying independence of arbitrary reals is undecidable.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{MomentError, Result};

/// Builds the rational `p/q`.
pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Algebra {
    /// Q-span only; no products between irrational constants.
    Span,
    /// Subset products of square roots of the given positive rationals.
    /// Basis index `i` is the bitmask of the generators in the product.
    Multiquadratic { radicands: Vec<BigRational> },
}

/// Names and floating-point values of the constants spanning the scalars.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantBasis {
    names: Vec<String>,
    float_values: Vec<f64>,
    algebra: Algebra,
}

impl ConstantBasis {
    /// A bare Q-span of `1` and the given constants.
    pub fn span(constants: &[(&str, f64)]) -> Result<Arc<Self>> {
        let mut names = vec!["one".to_string()];
        let mut float_values = vec![1.0];
        for (name, value) in constants {
            validate_name(name)?;
            if names.iter().any(|n| n == name) {
                return Err(MomentError::Parse(format!(
                    "duplicate constant name `{name}`"
                )));
            }
            if !value.is_finite() || *value == 0.0 {
                return Err(MomentError::Parse(format!(
                    "constant `{name}` must have a finite nonzero value"
                )));
            }
            names.push(name.to_string());
            float_values.push(*value);
        }
        Ok(Arc::new(Self {
            names,
            float_values,
            algebra: Algebra::Span,
        }))
    }

    /// The field generated by square roots of the given positive rationals.
    ///
    /// Basis elements are all products of distinct generators; their names
    /// are the generator names joined with `*`.
    pub fn multiquadratic(generators: &[(&str, BigRational)]) -> Result<Arc<Self>> {
        if generators.len() > 3 {
            return Err(MomentError::DeskScaleExceeded(
                "at most three square-root generators are supported".into(),
            ));
        }
        for (i, (name, radicand)) in generators.iter().enumerate() {
            validate_name(name)?;
            if generators[..i].iter().any(|(n, _)| n == name) {
                return Err(MomentError::Parse(format!(
                    "duplicate constant name `{name}`"
                )));
            }
            if !radicand.is_positive() {
                return Err(MomentError::Parse(format!(
                    "radicand of `{name}` must be positive"
                )));
            }
            if is_rational_square(radicand) {
                return Err(MomentError::Parse(format!(
                    "`{name}` is rational; it cannot be a basis constant"
                )));
            }
        }
        let k = generators.len();
        let roots: Vec<f64> = generators
            .iter()
            .map(|(_, r)| r.to_f64().unwrap_or(f64::NAN).sqrt())
            .collect();
        let mut names = Vec::with_capacity(1 << k);
        let mut float_values = Vec::with_capacity(1 << k);
        for mask in 0..(1usize << k) {
            if mask == 0 {
                names.push("one".to_string());
                float_values.push(1.0);
                continue;
            }
            let parts: Vec<&str> = (0..k)
                .filter(|g| mask & (1 << g) != 0)
                .map(|g| generators[g].0)
                .collect();
            names.push(parts.join("*"));
            float_values.push(
                (0..k)
                    .filter(|g| mask & (1 << g) != 0)
                    .map(|g| roots[g])
                    .product(),
            );
        }
        Ok(Arc::new(Self {
            names,
            float_values,
            algebra: Algebra::Multiquadratic {
                radicands: generators.iter().map(|(_, r)| r.clone()).collect(),
            },
        }))
    }

    /// Q(sqrt n) with its generator named `sqrtn`.
    pub fn sqrt(n: i64) -> Result<Arc<Self>> {
        let name = format!("sqrt{n}");
        Self::multiquadratic(&[(name.as_str(), BigRational::from_integer(BigInt::from(n)))])
    }

    /// Builds a basis from scenario declarations.
    ///
    /// When every name has the form `sqrtN`, the result is the
    /// multiquadratic field and each declared value is checked against the
    /// square root to 1e-9; otherwise the constants span a bare Q-space.
    pub fn from_declarations(decls: &[(String, f64)]) -> Result<Arc<Self>> {
        let radicands: Option<Vec<i64>> = decls
            .iter()
            .map(|(name, _)| {
                name.strip_prefix("sqrt")
                    .and_then(|r| r.parse::<i64>().ok())
            })
            .collect();
        match radicands {
            Some(rs) if !rs.is_empty() => {
                for ((name, value), r) in decls.iter().zip(&rs) {
                    let exact = (*r as f64).sqrt();
                    if (exact - value).abs() > 1e-9 * exact.max(1.0) {
                        return Err(MomentError::Parse(format!(
                            "constant `{name}` declared as {value} but sqrt({r}) = {exact}"
                        )));
                    }
                }
                let gens: Vec<(&str, BigRational)> = decls
                    .iter()
                    .zip(&rs)
                    .map(|((n, _), r)| (n.as_str(), BigRational::from_integer(BigInt::from(*r))))
                    .collect();
                Self::multiquadratic(&gens)
            }
            _ => {
                let consts: Vec<(&str, f64)> =
                    decls.iter().map(|(n, v)| (n.as_str(), *v)).collect();
                Self::span(&consts)
            }
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn float_values(&self) -> &[f64] {
        &self.float_values
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    /// True when products of basis constants stay in the span.
    pub fn is_field(&self) -> bool {
        matches!(self.algebra, Algebra::Multiquadratic { .. })
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// The constant with the given name as a scalar.
    pub fn constant(self: &Arc<Self>, name: &str) -> Result<ExtScalar> {
        let idx = self
            .index_of(name)
            .ok_or_else(|| MomentError::Parse(format!("unknown constant `{name}`")))?;
        let mut coeffs = vec![BigRational::zero(); idx + 1];
        coeffs[idx] = BigRational::one();
        ExtScalar::from_coeffs(self, coeffs)
    }
}

fn validate_name(name: &str) -> Result<()> {
    let ok = !name.is_empty()
        && name != "one"
        && name
            .chars()
            .next()
            .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
    if ok {
        Ok(())
    } else {
        Err(MomentError::Parse(format!(
            "invalid constant name `{name}`"
        )))
    }
}

fn is_rational_square(q: &BigRational) -> bool {
    let is_sq = |n: &BigInt| {
        let r = n.sqrt();
        &(&r * &r) == n
    };
    !q.is_negative() && is_sq(q.numer()) && is_sq(q.denom())
}

/// An exact real number: a rational combination of basis constants.
///
/// Canonical form: trailing zero coefficients are dropped and rational
/// values carry no basis, so equality is structural.
#[derive(Clone, Debug)]
pub struct ExtScalar {
    coeffs: Vec<BigRational>,
    basis: Option<Arc<ConstantBasis>>,
}

/// Operations accepted by [`ext_arith`].
#[derive(Debug, Clone, Copy)]
pub enum ArithOp<'a> {
    Add(&'a ExtScalar),
    Sub(&'a ExtScalar),
    Neg,
    Scale(&'a BigRational),
    Mul(&'a ExtScalar),
}

/// Checked arithmetic on scalars sharing a basis.
pub fn ext_arith(a: &ExtScalar, op: ArithOp<'_>) -> Result<ExtScalar> {
    match op {
        ArithOp::Add(b) => a.checked_add(b),
        ArithOp::Sub(b) => a.checked_sub(b),
        ArithOp::Neg => Ok(-a),
        ArithOp::Scale(q) => Ok(a.scale(q)),
        ArithOp::Mul(b) => a.checked_mul(b),
    }
}

impl ExtScalar {
    pub fn zero() -> Self {
        Self {
            coeffs: Vec::new(),
            basis: None,
        }
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        Self::from_rational(rat(p, q))
    }

    pub fn from_rational(q: BigRational) -> Self {
        Self::canonical(vec![q], None)
    }

    /// Coefficients over `basis`; may be shorter than the basis.
    pub fn from_coeffs(basis: &Arc<ConstantBasis>, coeffs: Vec<BigRational>) -> Result<Self> {
        if coeffs.len() > basis.len() {
            return Err(MomentError::DimensionMismatch(format!(
                "{} coefficients for a basis of {} constants",
                coeffs.len(),
                basis.len()
            )));
        }
        Ok(Self::canonical(coeffs, Some(basis.clone())))
    }

    fn canonical(mut coeffs: Vec<BigRational>, basis: Option<Arc<ConstantBasis>>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        let basis = if coeffs.len() > 1 { basis } else { None };
        Self { coeffs, basis }
    }

    /// Coefficients with trailing zeros removed.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient `i`, zero beyond the stored length.
    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// The basis, or `None` for rational values.
    pub fn basis(&self) -> Option<&Arc<ConstantBasis>> {
        self.basis.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self.coeffs.len() {
            0 => Some(BigRational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    /// Sum of coefficient times declared float value.
    pub fn float_eval(&self) -> f64 {
        match &self.basis {
            None => self.coeffs.first().map_or(0.0, rational_to_f64),
            Some(b) => self
                .coeffs
                .iter()
                .zip(b.float_values())
                .map(|(c, v)| rational_to_f64(c) * v)
                .sum(),
        }
    }

    fn joined_basis(&self, other: &Self) -> Result<Option<Arc<ConstantBasis>>> {
        match (&self.basis, &other.basis) {
            (None, b) | (b, None) => Ok(b.clone()),
            (Some(a), Some(b)) => {
                if Arc::ptr_eq(a, b) || a == b {
                    Ok(Some(a.clone()))
                } else {
                    Err(MomentError::BasisMismatch(format!(
                        "{:?} vs {:?}",
                        a.names(),
                        b.names()
                    )))
                }
            }
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let basis = self.joined_basis(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + other.coeff(i)).collect();
        Ok(Self::canonical(coeffs, basis))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other)
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Self::canonical(
            self.coeffs.iter().map(|c| c * q).collect(),
            self.basis.clone(),
        )
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if let Some(q) = self.as_rational() {
            return Ok(other.scale(&q));
        }
        if let Some(q) = other.as_rational() {
            return Ok(self.scale(&q));
        }
        let basis = self
            .joined_basis(other)?
            .expect("irrational scalars carry a basis");
        match basis.algebra() {
            Algebra::Span => Err(MomentError::UnsupportedOperation(format!(
                "product of irrational scalars {self} and {other} in a Q-span basis"
            ))),
            Algebra::Multiquadratic { radicands } => {
                let coeffs = mq_mul(&self.coeffs, &other.coeffs, radicands);
                Ok(Self::canonical(coeffs, Some(basis.clone())))
            }
        }
    }

    pub fn checked_inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(MomentError::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Self::from_rational(q.recip()));
        }
        let basis = self
            .basis
            .clone()
            .expect("irrational scalars carry a basis");
        match basis.algebra() {
            Algebra::Span => Err(MomentError::UnsupportedOperation(format!(
                "inverse of irrational scalar {self} in a Q-span basis"
            ))),
            Algebra::Multiquadratic { radicands } => {
                let coeffs = mq_inv(&self.coeffs, radicands);
                Ok(Self::canonical(coeffs, Some(basis.clone())))
            }
        }
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.checked_mul(&other.checked_inv()?)
    }

    /// Exact sign, or an error when a Q-span value is too close to zero to
    /// be decided from its declared floating-point constants.
    pub fn sign(&self) -> Result<Ordering> {
        if self.is_zero() {
            return Ok(Ordering::Equal);
        }
        match &self.basis {
            None => Ok(self.coeffs[0].cmp(&BigRational::zero())),
            Some(b) => match b.algebra() {
                Algebra::Multiquadratic { radicands } => Ok(mq_sign(&self.coeffs, radicands)),
                Algebra::Span => {
                    let terms: Vec<f64> = self
                        .coeffs
                        .iter()
                        .zip(b.float_values())
                        .map(|(c, v)| rational_to_f64(c) * v)
                        .collect();
                    let value: f64 = terms.iter().sum();
                    let guard: f64 = terms.iter().map(|t| t.abs()).sum::<f64>() * 1e-12;
                    if value.abs() > guard {
                        Ok(value.partial_cmp(&0.0).unwrap_or(Ordering::Equal))
                    } else {
                        Err(MomentError::SignUndecidable(self.to_string()))
                    }
                }
            },
        }
    }

    pub fn cmp_exact(&self, other: &Self) -> Result<Ordering> {
        self.checked_sub(other)?.sign()
    }

    pub fn is_positive(&self) -> Result<bool> {
        Ok(self.sign()? == Ordering::Greater)
    }

    pub fn is_negative(&self) -> Result<bool> {
        Ok(self.sign()? == Ordering::Less)
    }

    pub fn abs(&self) -> Result<Self> {
        Ok(if self.is_negative()? {
            -self
        } else {
            self.clone()
        })
    }

    /// Parses `a0 + a1*c1 + ...`; rationals as integers, `p/q` or decimals.
    pub fn parse(text: &str, basis: Option<&Arc<ConstantBasis>>) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Err(MomentError::Parse("empty scalar".into()));
        }
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut current = String::new();
        let mut negative = false;
        for ch in text.chars() {
            if (ch == '+' || ch == '-') && !current.trim().is_empty() {
                terms.push((negative, std::mem::take(&mut current)));
                negative = ch == '-';
            } else if (ch == '+' || ch == '-') && current.trim().is_empty() {
                if ch == '-' {
                    negative = !negative;
                }
            } else {
                current.push(ch);
            }
        }
        if current.trim().is_empty() {
            return Err(MomentError::Parse(format!("dangling sign in `{text}`")));
        }
        terms.push((negative, current));

        let mut acc = Self::zero();
        for (neg, term) in terms {
            let factors: Vec<&str> = term.split('*').map(str::trim).collect();
            if factors.iter().any(|f| f.is_empty()) {
                return Err(MomentError::Parse(format!(
                    "malformed term `{term}` in `{text}`"
                )));
            }
            let (coef, names) = match parse_rational(factors[0]) {
                Some(q) => (q, &factors[1..]),
                None => (BigRational::one(), &factors[..]),
            };
            let coef = if neg { -coef } else { coef };
            let value = if names.is_empty() {
                Self::from_rational(coef)
            } else {
                let name = names.join("*");
                let b = basis.ok_or_else(|| {
                    MomentError::Parse(format!("constant `{name}` used but no constants declared"))
                })?;
                b.constant(&name)?.scale(&coef)
            };
            acc = acc.checked_add(&value)?;
        }
        Ok(acc)
    }
}

fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        let n = q.numer().to_f64().unwrap_or(f64::NAN);
        let d = q.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Parses an integer, `p/q` or a decimal literal exactly.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if let Some((p, q)) = text.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    if let Some((int, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let negative = int.starts_with('-');
        let int_digits = int.trim_start_matches(['-', '+']);
        if !int_digits.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let digits: BigInt = format!("{int_digits}{frac}").parse().ok()?;
        let denom = num_traits::pow(BigInt::from(10), frac.len());
        let q = BigRational::new(digits, denom);
        return Some(if negative { -q } else { q });
    }
    text.parse::<BigInt>().ok().map(BigRational::from_integer)
}

// Multiquadratic arithmetic on raw coefficient vectors. Index bit g marks
// the generator sqrt(radicands[g]).

fn mq_mul(a: &[BigRational], b: &[BigRational], radicands: &[BigRational]) -> Vec<BigRational> {
    let n = 1usize << radicands.len();
    let mut out = vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            let mut c = x * y;
            let common = i & j;
            for (g, r) in radicands.iter().enumerate() {
                if common & (1 << g) != 0 {
                    c *= r;
                }
            }
            out[i ^ j] += c;
        }
    }
    out
}

fn mq_split(a: &[BigRational], k: usize) -> (Vec<BigRational>, Vec<BigRational>) {
    let half = 1usize << (k - 1);
    let get = |i: usize| a.get(i).cloned().unwrap_or_else(BigRational::zero);
    let p = (0..half).map(get).collect();
    let q = (0..half).map(|i| get(i + half)).collect();
    (p, q)
}

fn mq_sign(a: &[BigRational], radicands: &[BigRational]) -> Ordering {
    let k = radicands.len();
    if k == 0 {
        return a
            .first()
            .map_or(Ordering::Equal, |c| c.cmp(&BigRational::zero()));
    }
    let sub = &radicands[..k - 1];
    let (p, q) = mq_split(a, k);
    let sp = mq_sign(&p, sub);
    let sq = mq_sign(&q, sub);
    if sq == Ordering::Equal {
        return sp;
    }
    if sp == Ordering::Equal || sp == sq {
        return sq;
    }
    // x = p + q sqrt(r) with opposite signs: sign(x) = sign(p) sign(p^2 - r q^2).
    let p2 = mq_mul(&p, &p, sub);
    let q2 = mq_mul(&q, &q, sub);
    let r = &radicands[k - 1];
    let diff: Vec<BigRational> = p2.iter().zip(&q2).map(|(x, y)| x - y * r).collect();
    match mq_sign(&diff, sub) {
        Ordering::Equal => Ordering::Equal,
        Ordering::Greater => sp,
        Ordering::Less => sp.reverse(),
    }
}

fn mq_inv(a: &[BigRational], radicands: &[BigRational]) -> Vec<BigRational> {
    let k = radicands.len();
    if k == 0 {
        return vec![a[0].recip()];
    }
    // 1/(p + q sqrt r) = (p - q sqrt r) / (p^2 - r q^2)
    let sub = &radicands[..k - 1];
    let (p, q) = mq_split(a, k);
    let p2 = mq_mul(&p, &p, sub);
    let q2 = mq_mul(&q, &q, sub);
    let r = &radicands[k - 1];
    let norm: Vec<BigRational> = p2.iter().zip(&q2).map(|(x, y)| x - y * r).collect();
    let norm_inv = mq_inv(&norm, sub);
    let re = mq_mul(&p, &norm_inv, sub);
    let im = mq_mul(&q, &norm_inv, sub);
    let half = 1usize << (k - 1);
    let mut out = vec![BigRational::zero(); 1 << k];
    for i in 0..half {
        out[i] = re[i].clone();
        out[i + half] = -im[i].clone();
    }
    out
}

/// Rank over Q of a rational matrix given by rows.
pub fn rational_rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, piv);
        let pivot = rows[rank][col].clone();
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let f = &rows[r][col] / &pivot;
                for c in col..ncols {
                    let sub = &f * &rows[rank][c];
                    rows[r][c] -= sub;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Common basis of a collection of scalars, `None` if all are rational.
pub fn common_basis<'a>(
    values: impl IntoIterator<Item = &'a ExtScalar>,
) -> Result<Option<Arc<ConstantBasis>>> {
    let mut acc = ExtScalar::zero();
    for v in values {
        if !v.is_rational() {
            acc.basis = acc.joined_basis(v)?;
        }
    }
    Ok(acc.basis)
}

/// Fails unless every scalar is rational or lives in a field basis.
pub fn ensure_field<'a>(values: impl IntoIterator<Item = &'a ExtScalar>) -> Result<()> {
    match common_basis(values)? {
        Some(b) if !b.is_field() => Err(MomentError::UnsupportedOperation(
            "the exact engine needs rational data or square-root constants (sqrtN)".into(),
        )),
        _ => Ok(()),
    }
}

/// Whether some nonzero real multiple of `v` has only rational entries.
///
/// Decided as: the matrix of coefficients (entries by constants) has Q-rank
/// one. Two entries are rational multiples of each other exactly when their
/// coefficient rows are proportional, since the constants are independent.
pub fn is_rational_direction(v: &[ExtScalar]) -> Result<bool> {
    if v.iter().all(ExtScalar::is_zero) {
        return Err(MomentError::ZeroVector("rational direction test".into()));
    }
    let basis = common_basis(v)?;
    let width = basis.as_ref().map_or(1, |b| b.len());
    let rows: Vec<Vec<BigRational>> = v
        .iter()
        .map(|x| (0..width).map(|i| x.coeff(i)).collect())
        .collect();
    Ok(rational_rank(rows) == 1)
}

impl PartialEq for ExtScalar {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
            && match (&self.basis, &other.basis) {
                (None, None) => true,
                (Some(a), Some(b)) => Arc::ptr_eq(a, b) || a == b,
                _ => false,
            }
    }
}

impl Eq for ExtScalar {}

impl Hash for ExtScalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl From<i64> for ExtScalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<BigRational> for ExtScalar {
    fn from(q: BigRational) -> Self {
        Self::from_rational(q)
    }
}

impl fmt::Display for ExtScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let magnitude = c.abs();
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            first = false;
            if i == 0 {
                write!(f, "{magnitude}")?;
            } else {
                let name = &self
                    .basis
                    .as_ref()
                    .expect("irrational scalars carry a basis")
                    .names()[i];
                if magnitude.is_one() {
                    write!(f, "{name}")?;
                } else {
                    write!(f, "{magnitude}*{name}")?;
                }
            }
        }
        Ok(())
    }
}

impl serde::Serialize for ExtScalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl Neg for &ExtScalar {
    type Output = ExtScalar;
    fn neg(self) -> ExtScalar {
        ExtScalar {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            basis: self.basis.clone(),
        }
    }
}

impl Neg for ExtScalar {
    type Output = ExtScalar;
    fn neg(self) -> ExtScalar {
        -&self
    }
}

// Operator forms panic on basis mismatch or unsupported products; public
// entry points validate their inputs with `ensure_field` first.
macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&ExtScalar> for &ExtScalar {
            type Output = ExtScalar;
            fn $method(self, rhs: &ExtScalar) -> ExtScalar {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $trait<ExtScalar> for ExtScalar {
            type Output = ExtScalar;
            fn $method(self, rhs: ExtScalar) -> ExtScalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&ExtScalar> for ExtScalar {
            type Output = ExtScalar;
            fn $method(self, rhs: &ExtScalar) -> ExtScalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<ExtScalar> for &ExtScalar {
            type Output = ExtScalar;
            fn $method(self, rhs: ExtScalar) -> ExtScalar {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);
binop!(Div, div, checked_div);
