//! Finitely supported elements of the noncommutative torus `C^∞(T^N_θ)`.
//!
//! Elements are Laurent polynomials in unitaries `u_1, …, u_N` written in
//! normal order, `u^m := u_1^{m_1} ⋯ u_N^{m_N}`. The product of two basis
//! monomials is
//!
//! ```text
//! u^m ⋆ u^n = φ(m, n) · u^{m+n},   φ(m, n) = exp(2πi Σ_{k>ℓ} θ_{kℓ} m_k n_ℓ)
//! ```
//!
//! so that `u_k ⋆ u_ℓ = e^{2πiθ_{kℓ}} u_ℓ ⋆ u_k`. For `N = 2` with the scalar
//! parameter `θ := θ_{21}` this gives `u_2 ⋆ u_1 = λ u_1 ⋆ u_2`, `λ = e^{2πiθ}`:
//! a component of bidegree `(n_1, n_2)` times one of bidegree `(n_1', n_2')`
//! picks up `λ^{n_1' n_2}`.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficients with modulus at or below this are dropped at construction.
pub const PRUNE_TOL: f64 = 1e-15;

/// `exp(2πi x)`, reducing `x` modulo 1 first.
#[inline]
pub fn turn_phase(x: f64) -> Complex64 {
    Complex64::cis(TAU * (x - x.round()))
}

/// Real skew-symmetric `N × N` deformation matrix. Entries are in units of
/// full turns, i.e. `λ_{kℓ} = exp(2πi θ_{kℓ})`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl ThetaMatrix {
    /// Builds a matrix from rows, checking squareness and exact skew-symmetry.
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::NotSquare);
        }
        let mut entries = Vec::with_capacity(n * n);
        for row in &rows {
            if row.len() != n {
                return Err(Error::NotSquare);
            }
            entries.extend_from_slice(row);
        }
        for k in 0..n {
            for l in 0..n {
                let v = entries[k * n + l];
                if !v.is_finite() {
                    return Err(Error::NonFiniteTheta { row: k, col: l });
                }
                if v != -entries[l * n + k] {
                    return Err(Error::NotSkewSymmetric { row: k, col: l });
                }
            }
        }
        Ok(Self { n, entries })
    }

    pub fn zero(n: usize) -> Self {
        Self {
            n,
            entries: vec![0.0; n * n],
        }
    }

    /// `N = 2` matrix with `θ_{21} = t`, `θ_{12} = -t`.
    pub fn from_scalar(t: f64) -> Self {
        Self {
            n: 2,
            entries: vec![0.0, -t, t, 0.0],
        }
    }

    /// Builds a matrix from its strictly lower triangle, `lower(k, ℓ)` for `k > ℓ`.
    pub fn from_lower(n: usize, lower: impl Fn(usize, usize) -> f64) -> Self {
        let mut entries = vec![0.0; n * n];
        for k in 0..n {
            for l in 0..k {
                let v = lower(k, l);
                entries[k * n + l] = v;
                entries[l * n + k] = -v;
            }
        }
        Self { n, entries }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, k: usize, l: usize) -> f64 {
        self.entries[k * self.n + l]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    /// For `N = 2`, the scalar parameter `θ_{21}`.
    pub fn scalar(&self) -> Option<f64> {
        (self.n == 2).then(|| self.get(1, 0))
    }

    /// Multiplies entry `(k, ℓ)` by `factor(k, ℓ)`. The factor must be symmetric
    /// in `(k, ℓ)` for the result to stay skew.
    pub fn rescaled(&self, factor: impl Fn(usize, usize) -> f64) -> Self {
        Self::from_lower(self.n, |k, l| self.get(k, l) * factor(k, l))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&v| v == 0.0)
    }

    /// `Σ_{k>ℓ} θ_{kℓ} m_k n_ℓ`.
    #[allow(clippy::needless_range_loop)]
    pub fn cocycle_exponent(&self, m: &[i64], n: &[i64]) -> f64 {
        let mut acc = 0.0;
        for k in 1..self.n {
            if m[k] == 0 {
                continue;
            }
            for l in 0..k {
                if n[l] != 0 {
                    acc += self.entries[k * self.n + l] * (m[k] as f64) * (n[l] as f64);
                }
            }
        }
        acc
    }

    /// The normal-ordering cocycle `φ(m, n)`.
    pub fn cocycle(&self, m: &[i64], n: &[i64]) -> Complex64 {
        turn_phase(self.cocycle_exponent(m, n))
    }
}

/// Exponent vector `m ∈ Z^N` of the normal-ordered monomial `u^m`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial(pub Vec<i64>);

impl Monomial {
    pub fn zero(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn unit(n: usize, k: usize) -> Self {
        let mut v = vec![0; n];
        v[k] = 1;
        Monomial(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn exps(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn checked_add(&self, other: &Monomial) -> Result<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::ExponentOverflow))
            .collect::<Result<Vec<_>>>()
            .map(Monomial)
    }

    pub fn checked_neg(&self) -> Result<Monomial> {
        self.0
            .iter()
            .map(|a| a.checked_neg().ok_or(Error::ExponentOverflow))
            .collect::<Result<Vec<_>>>()
            .map(Monomial)
    }
}

impl From<Vec<i64>> for Monomial {
    fn from(v: Vec<i64>) -> Self {
        Monomial(v)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "u^(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// A finitely supported element `Σ c_m u^m` of `C^∞(T^N_θ)`.
///
/// Invariants: every exponent vector has length `N = theta.dim()`, and no
/// stored coefficient has modulus `≤ PRUNE_TOL`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "WireElement", try_from = "WireElement")]
pub struct TorusElement {
    theta: ThetaMatrix,
    terms: BTreeMap<Monomial, Complex64>,
}

impl TorusElement {
    pub fn zero(theta: ThetaMatrix) -> Self {
        Self {
            theta,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(theta: ThetaMatrix) -> Self {
        let n = theta.dim();
        Self::monomial(theta, Monomial::zero(n), Complex64::new(1.0, 0.0))
            .expect("zero monomial has matching dimension")
    }

    /// `c · u^m`.
    pub fn monomial(theta: ThetaMatrix, m: impl Into<Monomial>, c: Complex64) -> Result<Self> {
        let m = m.into();
        if m.dim() != theta.dim() {
            return Err(Error::DimensionMismatch {
                expected: theta.dim(),
                found: m.dim(),
            });
        }
        let mut terms = BTreeMap::new();
        if c.norm() > PRUNE_TOL {
            terms.insert(m, c);
        }
        Ok(Self { theta, terms })
    }

    /// The generator `u_k` (zero-based `k`).
    pub fn generator(theta: ThetaMatrix, k: usize) -> Result<Self> {
        let n = theta.dim();
        if k >= n {
            return Err(Error::IndexOutOfRange { index: k, dim: n });
        }
        Self::monomial(theta, Monomial::unit(n, k), Complex64::new(1.0, 0.0))
    }

    /// Sums duplicate monomials and prunes small coefficients.
    pub fn from_terms<I, M>(theta: ThetaMatrix, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (M, Complex64)>,
        M: Into<Monomial>,
    {
        let mut map: BTreeMap<Monomial, Complex64> = BTreeMap::new();
        for (m, c) in terms {
            let m = m.into();
            if m.dim() != theta.dim() {
                return Err(Error::DimensionMismatch {
                    expected: theta.dim(),
                    found: m.dim(),
                });
            }
            *map.entry(m).or_default() += c;
        }
        Ok(Self::pruned(theta, map))
    }

    fn pruned(theta: ThetaMatrix, mut terms: BTreeMap<Monomial, Complex64>) -> Self {
        terms.retain(|_, c| c.norm() > PRUNE_TOL);
        Self { theta, terms }
    }

    pub fn theta(&self) -> &ThetaMatrix {
        &self.theta
    }

    pub fn dim(&self) -> usize {
        self.theta.dim()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Complex64)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Complex64 {
        self.terms.get(m).copied().unwrap_or_default()
    }

    /// Value of the canonical trace: the coefficient of `u^0`.
    pub fn trace(&self) -> Complex64 {
        self.coefficient(&Monomial::zero(self.dim()))
    }

    fn check_theta(&self, other: &TorusElement) -> Result<()> {
        if self.theta != other.theta {
            return Err(Error::ThetaMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &TorusElement) -> Result<TorusElement> {
        self.check_theta(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            *terms.entry(m.clone()).or_default() += c;
        }
        Ok(Self::pruned(self.theta.clone(), terms))
    }

    pub fn sub(&self, other: &TorusElement) -> Result<TorusElement> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> TorusElement {
        let terms = self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect();
        Self::pruned(self.theta.clone(), terms)
    }

    /// The deformed product `self ⋆ other`.
    pub fn star_product(&self, other: &TorusElement) -> Result<TorusElement> {
        self.check_theta(other)?;
        let mut terms: BTreeMap<Monomial, Complex64> = BTreeMap::new();
        for (m, c) in &self.terms {
            for (n, d) in &other.terms {
                let phase = self.theta.cocycle(m.exps(), n.exps());
                *terms.entry(m.checked_add(n)?).or_default() += c * d * phase;
            }
        }
        Ok(Self::pruned(self.theta.clone(), terms))
    }

    /// The involution, fixed by `(u^m)* ⋆ u^m = 1` and antilinearity:
    /// `(c u^m)* = c̄ · φ(−m, m)^{-1} · u^{−m}`.
    pub fn involution(&self) -> TorusElement {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let neg = m.checked_neg().expect("i64::MIN exponents are never produced");
                let phase = self.theta.cocycle(neg.exps(), m.exps()).conj();
                (neg, c.conj() * phase)
            })
            .collect();
        Self::pruned(self.theta.clone(), terms)
    }

    /// Splits into homogeneous single-monomial components keyed by `Z^N` grade.
    pub fn grade_decompose(&self) -> BTreeMap<Monomial, TorusElement> {
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut t = BTreeMap::new();
                t.insert(m.clone(), *c);
                (
                    m.clone(),
                    TorusElement {
                        theta: self.theta.clone(),
                        terms: t,
                    },
                )
            })
            .collect()
    }

    /// The automorphism `u^k ↦ (Π_i ε_i^{k_i}) u^k` for `ε ∈ {±1}^N`.
    pub fn sign_action(&self, eps: &[i8]) -> Result<TorusElement> {
        if eps.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: eps.len(),
            });
        }
        if let Some(&bad) = eps.iter().find(|&&e| e != 1 && e != -1) {
            return Err(Error::InvalidSign(bad));
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), c * sign_character(eps, m.exps()) as f64))
            .collect();
        Ok(Self::pruned(self.theta.clone(), terms))
    }

    /// Largest coefficient difference over the union of supports.
    pub fn max_abs_diff(&self, other: &TorusElement) -> Result<f64> {
        self.check_theta(other)?;
        let mut worst: f64 = 0.0;
        for (m, c) in &self.terms {
            worst = worst.max((c - other.coefficient(m)).norm());
        }
        for (m, c) in &other.terms {
            if !self.terms.contains_key(m) {
                worst = worst.max(c.norm());
            }
        }
        Ok(worst)
    }

    pub fn approx_eq(&self, other: &TorusElement, tol: f64) -> bool {
        self.max_abs_diff(other).is_ok_and(|d| d <= tol)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("torus elements always serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))
    }
}

/// `Π_i ε_i^{k_i}` as ±1.
pub fn sign_character(eps: &[i8], k: &[i64]) -> i8 {
    let odd_negatives = eps
        .iter()
        .zip(k)
        .filter(|(&e, &ki)| e == -1 && ki.rem_euclid(2) == 1)
        .count();
    if odd_negatives % 2 == 0 {
        1
    } else {
        -1
    }
}

#[derive(Serialize, Deserialize)]
struct WireTerm {
    m: Vec<i64>,
    re: f64,
    im: f64,
}

/// JSON layout: `{"theta": [[..]], "terms": [{"m": [..], "re": x, "im": y}]}`
/// with terms in lexicographic order of `m`.
#[derive(Serialize, Deserialize)]
struct WireElement {
    theta: Vec<Vec<f64>>,
    terms: Vec<WireTerm>,
}

impl From<TorusElement> for WireElement {
    fn from(a: TorusElement) -> Self {
        WireElement {
            theta: a.theta.rows(),
            terms: a
                .terms
                .into_iter()
                .map(|(m, c)| WireTerm {
                    m: m.0,
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
    }
}

impl TryFrom<WireElement> for TorusElement {
    type Error = Error;

    fn try_from(w: WireElement) -> Result<Self> {
        let theta = ThetaMatrix::new(w.theta)?;
        TorusElement::from_terms(
            theta,
            w.terms
                .into_iter()
                .map(|t| (Monomial(t.m), Complex64::new(t.re, t.im))),
        )
    }
}
