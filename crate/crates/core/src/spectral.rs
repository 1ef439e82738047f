//! The flat Dirac spectral triple on `T²` and its isospectral deformation.
//!
//! Spinors are expanded in Fourier modes: a mode `m ∈ Z²` of the spin
//! structure `j` carries momentum `p = m + j/2`, so `Spec(p_ℓ) ⊂ Z + j_ℓ/2`.
//! On the mode `m` the Dirac operator acts by the `2 × 2` matrix
//! `p_1 σ_1 + p_2 σ_2`, with eigenvalues `±|p|`.
//!
//! Operators are finite sums of terms `(n, M)`: the term sends the value at
//! source momentum `p` to momentum `p + n` after multiplying by `M(p)`. The
//! shift `n` is the bidegree of the term under the lifted torus action
//! `α̂_s = exp(i s·p)`. Everything acts exactly on finitely supported
//! spinors, so commutator identities carry no truncation error.
//!
//! Conventions:
//! - `γ = σ_3`, charge conjugation `C = iσ_2` and
//!   `(Jψ)(−p) = C · conj(ψ(p))`, giving `J² = −1`, `JD = DJ`, `Jγ = −γJ`.
//! - The deformation multiplies a term of bidegree `(n_1, n_2)` on the right
//!   by `λ^{n_2 p_1}`, and `Ĵ = J λ^{−p_1 p_2}`, with `λ = e^{2πiθ}`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::nc_torus::{turn_phase, TorusElement};
use crate::sample;
use crate::spin_cover::SpinStructure;

pub type Mat2 = Matrix2<Complex64>;
pub type Spinor = Vector2<Complex64>;
pub type Mode = [i64; 2];
pub type Momentum = [f64; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn sigma1() -> Mat2 {
    Mat2::new(ZERO, ONE, ONE, ZERO)
}

pub fn sigma2() -> Mat2 {
    Mat2::new(ZERO, -I, I, ZERO)
}

pub fn sigma3() -> Mat2 {
    Mat2::new(ONE, ZERO, ZERO, -ONE)
}

/// `C = iσ_2`.
pub fn charge_conjugation() -> Mat2 {
    sigma2() * I
}

/// Clifford multiplication `v_1 σ_1 + v_2 σ_2`.
pub fn clifford(v: Momentum) -> Mat2 {
    sigma1() * Complex64::from(v[0]) + sigma2() * Complex64::from(v[1])
}

/// `p = m + j/2`.
pub fn momentum(spin: &SpinStructure, m: Mode) -> Momentum {
    [
        m[0] as f64 + 0.5 * spin.bits()[0] as f64,
        m[1] as f64 + 0.5 * spin.bits()[1] as f64,
    ]
}

fn require_pair(spin: &SpinStructure) -> Result<()> {
    if spin.dim() != 2 {
        return Err(Error::RequiresRankTwo(spin.dim()));
    }
    Ok(())
}

/// Finitely supported spinor field on `T²` in the Fourier basis.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSpinor {
    spin: SpinStructure,
    values: BTreeMap<Mode, Spinor>,
}

impl ModeSpinor {
    pub fn zero(spin: &SpinStructure) -> Result<Self> {
        require_pair(spin)?;
        Ok(Self {
            spin: spin.clone(),
            values: BTreeMap::new(),
        })
    }

    pub fn from_values(spin: &SpinStructure, values: impl IntoIterator<Item = (Mode, Spinor)>) -> Result<Self> {
        let mut out = Self::zero(spin)?;
        for (m, v) in values {
            out.add_at(m, v);
        }
        Ok(out)
    }

    /// Random spinor with up to `support` modes in `[-radius, radius]²`.
    pub fn random<R: Rng>(rng: &mut R, spin: &SpinStructure, support: usize, radius: i64) -> Result<Self> {
        let count = rng.gen_range(1..=support.max(1));
        let values: Vec<_> = (0..count)
            .map(|_| {
                let m = [rng.gen_range(-radius..=radius), rng.gen_range(-radius..=radius)];
                (m, Spinor::new(sample::complex(rng), sample::complex(rng)))
            })
            .collect();
        Self::from_values(spin, values)
    }

    pub fn spin(&self) -> &SpinStructure {
        &self.spin
    }

    pub fn values(&self) -> impl Iterator<Item = (&Mode, &Spinor)> {
        self.values.iter()
    }

    pub fn get(&self, m: Mode) -> Spinor {
        self.values.get(&m).copied().unwrap_or_else(Spinor::zeros)
    }

    pub fn add_at(&mut self, m: Mode, v: Spinor) {
        *self.values.entry(m).or_insert_with(Spinor::zeros) += v;
    }

    pub fn add(&self, other: &ModeSpinor) -> ModeSpinor {
        let mut out = self.clone();
        for (m, v) in &other.values {
            out.add_at(*m, *v);
        }
        out
    }

    pub fn sub(&self, other: &ModeSpinor) -> ModeSpinor {
        self.add(&other.scale(-ONE))
    }

    pub fn scale(&self, c: Complex64) -> ModeSpinor {
        ModeSpinor {
            spin: self.spin.clone(),
            values: self.values.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    /// Applies a mode-wise linear map `ψ(m) ↦ A(p) ψ(m)`.
    pub fn map_modes(&self, f: impl Fn(Momentum) -> Mat2) -> ModeSpinor {
        ModeSpinor {
            spin: self.spin.clone(),
            values: self
                .values
                .iter()
                .map(|(m, v)| (*m, f(momentum(&self.spin, *m)) * v))
                .collect(),
        }
    }

    /// Largest component modulus.
    pub fn sup_norm(&self) -> f64 {
        self.values
            .values()
            .flat_map(|v| v.iter().map(|c| c.norm()))
            .fold(0.0, f64::max)
    }

    /// `Σ |ψ(m)|²`.
    pub fn norm_sqr(&self) -> f64 {
        self.values.values().map(|v| v.norm_squared()).sum()
    }
}

/// Multiplier of an operator term as a function of the source momentum.
pub type Multiplier = Arc<dyn Fn(Momentum) -> Mat2 + Send + Sync>;

#[derive(Clone)]
pub struct OpTerm {
    pub shift: Mode,
    pub multiplier: Multiplier,
}

impl OpTerm {
    pub fn new(shift: Mode, f: impl Fn(Momentum) -> Mat2 + Send + Sync + 'static) -> Self {
        Self {
            shift,
            multiplier: Arc::new(f),
        }
    }

    pub fn constant(shift: Mode, m: Mat2) -> Self {
        Self::new(shift, move |_| m)
    }

    pub fn eval(&self, p: Momentum) -> Mat2 {
        (self.multiplier)(p)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &OpTerm) -> OpTerm {
        let (fa, fb) = (self.multiplier.clone(), other.multiplier.clone());
        let nb = other.shift;
        OpTerm::new([self.shift[0] + nb[0], self.shift[1] + nb[1]], move |p| {
            fa([p[0] + nb[0] as f64, p[1] + nb[1] as f64]) * fb(p)
        })
    }
}

/// A finite sum of bigraded terms acting on [`ModeSpinor`]s.
#[derive(Clone, Default)]
pub struct ModeOperator {
    terms: Vec<OpTerm>,
}

impl fmt::Debug for ModeOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ModeOperator")
            .field("bidegrees", &self.terms.iter().map(|t| t.shift).collect::<Vec<_>>())
            .finish()
    }
}

impl ModeOperator {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: Vec<OpTerm>) -> Self {
        Self { terms }
    }

    pub fn identity() -> Self {
        Self::from_terms(vec![OpTerm::constant([0, 0], Mat2::identity())])
    }

    /// Multiplication by the classical function `e^{i n·x}`: a pure mode shift.
    pub fn shift(n: Mode) -> Self {
        Self::from_terms(vec![OpTerm::constant(n, Mat2::identity())])
    }

    pub fn dirac() -> Self {
        Self::from_terms(vec![OpTerm::new([0, 0], clifford)])
    }

    pub fn gamma() -> Self {
        Self::from_terms(vec![OpTerm::constant([0, 0], sigma3())])
    }

    /// `α̂_s = exp(i s·p)`.
    pub fn torus_action(s: [f64; 2]) -> Self {
        Self::from_terms(vec![OpTerm::new([0, 0], move |p| {
            Mat2::identity() * Complex64::cis(s[0] * p[0] + s[1] * p[1])
        })])
    }

    /// Up to `terms` random terms with shifts in `[-max_shift, max_shift]²`
    /// and bounded multipliers `A + B sin p_1 + C cos p_2`.
    pub fn random<R: Rng>(rng: &mut R, terms: usize, max_shift: i64) -> Self {
        let count = rng.gen_range(1..=terms.max(1));
        let terms = (0..count)
            .map(|_| {
                let n = [rng.gen_range(-max_shift..=max_shift), rng.gen_range(-max_shift..=max_shift)];
                let [a, b, c] = [(); 3].map(|_| Mat2::from_fn(|_, _| sample::complex(rng)));
                OpTerm::new(n, move |p| a + b * Complex64::from(p[0].sin()) + c * Complex64::from(p[1].cos()))
            })
            .collect();
        Self::from_terms(terms)
    }

    pub fn terms(&self) -> &[OpTerm] {
        &self.terms
    }

    pub fn bidegrees(&self) -> BTreeSet<Mode> {
        self.terms.iter().map(|t| t.shift).collect()
    }

    pub fn apply(&self, psi: &ModeSpinor) -> ModeSpinor {
        let mut out = ModeSpinor {
            spin: psi.spin.clone(),
            values: BTreeMap::new(),
        };
        for (m, v) in &psi.values {
            let p = momentum(&psi.spin, *m);
            for t in &self.terms {
                out.add_at([m[0] + t.shift[0], m[1] + t.shift[1]], t.eval(p) * v);
            }
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ModeOperator) -> ModeOperator {
        let terms = self
            .terms
            .iter()
            .flat_map(|a| other.terms.iter().map(move |b| a.compose(b)))
            .collect();
        Self::from_terms(terms)
    }

    pub fn add(&self, other: &ModeOperator) -> ModeOperator {
        Self::from_terms(self.terms.iter().chain(&other.terms).cloned().collect())
    }

    pub fn scale(&self, c: Complex64) -> ModeOperator {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let f = t.multiplier.clone();
                OpTerm::new(t.shift, move |p| f(p) * c)
            })
            .collect();
        Self::from_terms(terms)
    }

    pub fn sub(&self, other: &ModeOperator) -> ModeOperator {
        self.add(&other.scale(-ONE))
    }

    /// `[self, other]`, with terms of equal bidegree merged.
    pub fn commutator(&self, other: &ModeOperator) -> ModeOperator {
        self.compose(other).sub(&other.compose(self)).merged()
    }

    /// Sums the multipliers of terms sharing a bidegree.
    pub fn merged(&self) -> ModeOperator {
        let mut grouped: BTreeMap<Mode, Vec<Multiplier>> = BTreeMap::new();
        for t in &self.terms {
            grouped.entry(t.shift).or_default().push(t.multiplier.clone());
        }
        let terms = grouped
            .into_iter()
            .map(|(n, fs)| OpTerm::new(n, move |p| fs.iter().fold(Mat2::zeros(), |acc, f| acc + f(p))))
            .collect();
        Self::from_terms(terms)
    }

    /// Hilbert-space adjoint: `(n, M)` becomes `(−n, p ↦ M(p − n)†)`.
    pub fn adjoint(&self) -> ModeOperator {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let (f, n) = (t.multiplier.clone(), t.shift);
                OpTerm::new([-n[0], -n[1]], move |p| f([p[0] - n[0] as f64, p[1] - n[1] as f64]).adjoint())
            })
            .collect();
        Self::from_terms(terms)
    }

    /// The bigraded product `K ⋆ K' = Σ λ^{n_1' n_2} K_n K'_{n'}`.
    pub fn bigraded_product(&self, other: &ModeOperator, theta: f64) -> ModeOperator {
        let terms = self
            .terms
            .iter()
            .flat_map(|a| {
                other.terms.iter().map(move |b| {
                    let phase = turn_phase(theta * (b.shift[0] * a.shift[1]) as f64);
                    let t = a.compose(b);
                    let f = t.multiplier.clone();
                    OpTerm::new(t.shift, move |p| f(p) * phase)
                })
            })
            .collect();
        Self::from_terms(terms)
    }

    /// Per-bidegree suprema of the mode-wise operator norm over `|m_i| ≤ radius`.
    pub fn bidegree_norms(&self, spin: &SpinStructure, radius: i64) -> BTreeMap<Mode, f64> {
        let mut grouped: BTreeMap<Mode, Vec<&OpTerm>> = BTreeMap::new();
        for t in &self.terms {
            grouped.entry(t.shift).or_default().push(t);
        }
        grouped
            .into_iter()
            .map(|(n, ts)| {
                let mut sup: f64 = 0.0;
                for m1 in -radius..=radius {
                    for m2 in -radius..=radius {
                        let p = momentum(spin, [m1, m2]);
                        let block = ts.iter().fold(Mat2::zeros(), |acc, t| acc + t.eval(p));
                        sup = sup.max(spectral_norm(&block));
                    }
                }
                (n, sup)
            })
            .collect()
    }

    /// Exact operator norm over the window when the operator has a single
    /// bidegree, otherwise the triangle-inequality bound.
    pub fn norm_on_window(&self, spin: &SpinStructure, radius: i64) -> f64 {
        self.bidegree_norms(spin, radius).values().sum()
    }
}

/// Largest singular value of a `2 × 2` matrix, from the closed-form top
/// eigenvalue of `M†M`.
pub fn spectral_norm(m: &Mat2) -> f64 {
    let h = m.adjoint() * m;
    let (a, d) = (h[(0, 0)].re, h[(1, 1)].re);
    let half_gap = (a - d) / 2.0;
    let top = (a + d) / 2.0 + (half_gap * half_gap + h[(0, 1)].norm_sqr()).sqrt();
    top.max(0.0).sqrt()
}

/// Eigenvalues of a Hermitian `2 × 2` matrix, ascending.
pub fn hermitian_eigenvalues(m: &Mat2) -> [f64; 2] {
    let e = m.symmetric_eigenvalues();
    let (a, b) = (e[0], e[1]);
    if a <= b {
        [a, b]
    } else {
        [b, a]
    }
}

pub fn dirac_apply(psi: &ModeSpinor) -> ModeSpinor {
    psi.map_modes(clifford)
}

/// The undeformed representation: `u^n` acts as the shift `m ↦ m + n`.
pub fn rep_algebra(a: &TorusElement) -> Result<ModeOperator> {
    if a.dim() != 2 {
        return Err(Error::RequiresRankTwo(a.dim()));
    }
    let terms = a
        .terms()
        .map(|(m, c)| OpTerm::constant([m.0[0], m.0[1]], Mat2::identity() * *c))
        .collect();
    Ok(ModeOperator::from_terms(terms))
}

/// `K̂ = Σ K_{n_1,n_2} λ^{n_2 p_1}`.
pub fn deform_operator(k: &ModeOperator, theta: f64) -> ModeOperator {
    let terms = k
        .terms
        .iter()
        .map(|t| {
            let f = t.multiplier.clone();
            let n2 = t.shift[1] as f64;
            OpTerm::new(t.shift, move |p| f(p) * turn_phase(theta * n2 * p[0]))
        })
        .collect();
    ModeOperator::from_terms(terms)
}

/// `sup |(K̂ ∘ K̂')ψ − (K ⋆ K')^ ψ|`.
pub fn product_rule_residual(k: &ModeOperator, k2: &ModeOperator, theta: f64, psi: &ModeSpinor) -> f64 {
    let lhs = deform_operator(k, theta).compose(&deform_operator(k2, theta));
    let rhs = deform_operator(&k.bigraded_product(k2, theta), theta);
    lhs.apply(psi).sub(&rhs.apply(psi)).sup_norm()
}

/// The deformed algebra action `â = (rep a)^`, using the scalar `θ_{21}` of `a`.
pub fn deformed_rep(a: &TorusElement) -> Result<ModeOperator> {
    let theta = a.theta().scalar().ok_or(Error::RequiresRankTwo(a.dim()))?;
    Ok(deform_operator(&rep_algebra(a)?, theta))
}

/// The antilinear real structure `Ĵ = J λ^{−p_1 p_2}` (plain `J` at `θ = 0`).
#[derive(Debug, Clone, PartialEq)]
pub struct RealStructure {
    spin: SpinStructure,
    theta: f64,
    charge: Mat2,
}

pub fn real_structure(spin: &SpinStructure) -> Result<RealStructure> {
    require_pair(spin)?;
    Ok(RealStructure {
        spin: spin.clone(),
        theta: 0.0,
        charge: charge_conjugation(),
    })
}

pub fn deform_real(j: &RealStructure, theta: f64) -> RealStructure {
    RealStructure {
        theta: j.theta + theta,
        ..j.clone()
    }
}

impl RealStructure {
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Mode reflection `m ↦ −m − j`, i.e. `p ↦ −p`.
    fn reflect(&self, m: Mode) -> Mode {
        let j = self.spin.bits();
        [-m[0] - j[0] as i64, -m[1] - j[1] as i64]
    }

    pub fn apply(&self, psi: &ModeSpinor) -> ModeSpinor {
        let mut out = ModeSpinor {
            spin: psi.spin.clone(),
            values: BTreeMap::new(),
        };
        for (m, v) in &psi.values {
            let p = momentum(&self.spin, *m);
            let twisted = v * turn_phase(-self.theta * p[0] * p[1]);
            out.add_at(self.reflect(*m), self.charge * twisted.conjugate());
        }
        out
    }

    /// `Ĵ^{-1} = λ^{p_1 p_2} J^{-1}`, computed directly rather than as `−Ĵ`.
    pub fn apply_inverse(&self, psi: &ModeSpinor) -> ModeSpinor {
        let c_inv = self.charge.try_inverse().expect("charge conjugation is invertible");
        let mut out = ModeSpinor {
            spin: psi.spin.clone(),
            values: BTreeMap::new(),
        };
        for (m, v) in &psi.values {
            let target = self.reflect(*m);
            let p = momentum(&self.spin, target);
            let w = (c_inv * v).conjugate();
            out.add_at(target, w * turn_phase(self.theta * p[0] * p[1]));
        }
        out
    }

    /// `Ĵ K Ĵ^{-1}` applied to `psi`.
    pub fn conjugate_apply(&self, k: &ModeOperator, psi: &ModeSpinor) -> ModeSpinor {
        self.apply(&k.apply(&self.apply_inverse(psi)))
    }
}

/// Eigenvalue multiset of `D` with `|λ| ≤ cutoff`, sorted ascending.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    pub cutoff: f64,
    /// `(eigenvalue, multiplicity)`, ascending.
    pub entries: Vec<(f64, usize)>,
}

impl Spectrum {
    pub fn total(&self) -> usize {
        self.entries.iter().map(|e| e.1).sum()
    }

    pub fn kernel_dim(&self) -> usize {
        self.entries.iter().filter(|e| e.0 == 0.0).map(|e| e.1).sum()
    }

    pub fn min_abs(&self) -> Option<f64> {
        self.entries.iter().map(|e| e.0.abs()).reduce(f64::min)
    }

    pub fn weyl_ratio(&self) -> f64 {
        weyl_ratio(self.total(), self.cutoff)
    }
}

/// `count / (2π Λ²)`.
pub fn weyl_ratio(count: usize, cutoff: f64) -> f64 {
    count as f64 / (std::f64::consts::TAU * cutoff * cutoff)
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Bound on `|2p|²`: modes satisfy `(2m_1 + j_1)² + (2m_2 + j_2)² ≤ ⌊4Λ²⌋`.
fn doubled_radius_sqr(cutoff: f64) -> Option<u64> {
    (cutoff >= 0.0).then(|| (4.0 * cutoff * cutoff).floor() as u64)
}

/// Integers `b ≡ parity (mod 2)` with `|b| ≤ r`.
fn count_with_parity(r: u64, parity: u8) -> u64 {
    if parity == 0 {
        2 * (r / 2) + 1
    } else {
        2 * r.div_ceil(2)
    }
}

/// Values `a ≡ parity (mod 2)` with `a² ≤ bound`.
fn doubled_coords(bound: u64, parity: u8) -> Vec<i64> {
    let r = isqrt(bound) as i64;
    (-r..=r).filter(|a| a.rem_euclid(2) == parity as i64).collect()
}

/// Number of eigenvalues (with multiplicity) of `D` in `[-Λ, Λ]`, in `O(Λ)`.
pub fn eigenvalue_count(spin: &SpinStructure, cutoff: f64) -> Result<usize> {
    require_pair(spin)?;
    let Some(bound) = doubled_radius_sqr(cutoff) else {
        return Ok(0);
    };
    let j = spin.bits();
    let modes: u64 = doubled_coords(bound, j[0])
        .into_par_iter()
        .map(|a| count_with_parity(isqrt(bound - (a * a) as u64), j[1]))
        .sum();
    Ok(2 * modes as usize)
}

/// `{±|m + j/2| : |m + j/2| ≤ Λ}` with multiplicities. Independent of θ:
/// the deformation leaves `D` untouched.
pub fn spectrum(spin: &SpinStructure, cutoff: f64) -> Result<Spectrum> {
    require_pair(spin)?;
    let mut by_radius: BTreeMap<u64, usize> = BTreeMap::new();
    if let Some(bound) = doubled_radius_sqr(cutoff) {
        let j = spin.bits();
        let partial: Vec<BTreeMap<u64, usize>> = doubled_coords(bound, j[0])
            .into_par_iter()
            .map(|a| {
                let rest = bound - (a * a) as u64;
                let mut local = BTreeMap::new();
                for b in doubled_coords(rest, j[1]) {
                    *local.entry((a * a + b * b) as u64).or_insert(0) += 1;
                }
                local
            })
            .collect();
        for local in partial {
            for (r2, c) in local {
                *by_radius.entry(r2).or_insert(0) += c;
            }
        }
    }
    let mut entries = Vec::with_capacity(2 * by_radius.len());
    for (&r2, &count) in &by_radius {
        if r2 == 0 {
            entries.push((0.0, 2 * count));
        } else {
            let ev = (r2 as f64).sqrt() / 2.0;
            entries.push((-ev, count));
            entries.push((ev, count));
        }
    }
    entries.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    Ok(Spectrum { cutoff, entries })
}

/// Eigenvalues of `D` on the single mode `m`, from the `2 × 2` block.
pub fn mode_eigenvalues(spin: &SpinStructure, m: Mode) -> [f64; 2] {
    hermitian_eigenvalues(&clifford(momentum(spin, m)))
}

/// Residuals of the spectral-triple checks; every field is a maximum over
/// generator pairs and random test spinors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomReport {
    pub theta: f64,
    pub spin: Vec<u8>,
    pub cutoff: i64,
    pub tol: f64,
    /// `sup ‖[D, â]‖` over generators and their inverses.
    pub commutator_norm: f64,
    /// `max | ‖[D, û^n]‖ − |n| |`.
    pub commutator_norm_residual: f64,
    pub zeroth_order: f64,
    pub first_order: f64,
    pub dirac_real_commutator: f64,
    pub real_square_plus_one: f64,
    pub gamma_dirac_anticommutator: f64,
    pub gamma_algebra_commutator: f64,
    pub gamma_real_anticommutator: f64,
    /// Spectrum from the mode blocks of `D` agrees with `±|p|`.
    pub spectrum_matches_formula: bool,
    /// Spectrum at this θ is bit-identical to the spectrum at θ = 0.
    pub isospectral: bool,
    pub passed: bool,
}

impl AxiomReport {
    pub fn max_residual(&self) -> f64 {
        [
            self.commutator_norm_residual,
            self.zeroth_order,
            self.first_order,
            self.dirac_real_commutator,
            self.real_square_plus_one,
            self.gamma_dirac_anticommutator,
            self.gamma_algebra_commutator,
            self.gamma_real_anticommutator,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Spectral triple checks with the default seed and sample count.
pub fn axiom_suite(theta: f64, spin: &SpinStructure, cutoff: i64, tol: f64) -> Result<AxiomReport> {
    axiom_suite_seeded(theta, spin, cutoff, tol, 0, 16)
}

pub fn axiom_suite_seeded(
    theta: f64,
    spin: &SpinStructure,
    cutoff: i64,
    tol: f64,
    seed: u64,
    samples: usize,
) -> Result<AxiomReport> {
    require_pair(spin)?;
    let th = crate::nc_torus::ThetaMatrix::from_scalar(theta);
    let gens: Vec<TorusElement> = [[1, 0], [0, 1], [-1, 0], [0, -1]]
        .into_iter()
        .map(|m| TorusElement::monomial(th.clone(), vec![m[0], m[1]], ONE))
        .collect::<Result<_>>()?;
    let hats: Vec<ModeOperator> = gens.iter().map(deformed_rep).collect::<Result<_>>()?;
    let d = ModeOperator::dirac();
    let gamma = ModeOperator::gamma();
    let jhat = deform_real(&real_structure(spin)?, theta);

    let mut rng = sample::rng(seed);
    let spinors: Vec<ModeSpinor> = (0..samples.max(1))
        .map(|_| ModeSpinor::random(&mut rng, spin, 8, cutoff))
        .collect::<Result<_>>()?;

    let diff = |a: &ModeSpinor, b: &ModeSpinor| a.sub(b).sup_norm();

    let mut commutator_norm: f64 = 0.0;
    let mut commutator_norm_residual: f64 = 0.0;
    for (g, hat) in gens.iter().zip(&hats) {
        let n = g.support().next().expect("generator is a monomial").0.clone();
        let norm = d.commutator(hat).norm_on_window(spin, cutoff);
        let expected = ((n[0] * n[0] + n[1] * n[1]) as f64).sqrt();
        commutator_norm = commutator_norm.max(norm);
        commutator_norm_residual = commutator_norm_residual.max((norm - expected).abs());
    }

    let mut zeroth: f64 = 0.0;
    let mut first: f64 = 0.0;
    for a in &hats {
        let da = d.commutator(a);
        for b in &hats {
            let b_star = b.adjoint();
            for psi in &spinors {
                // [â, Ĵ b̂* Ĵ^{-1}]
                let lhs = a.apply(&jhat.conjugate_apply(&b_star, psi));
                let rhs = jhat.conjugate_apply(&b_star, &a.apply(psi));
                zeroth = zeroth.max(diff(&lhs, &rhs));
                // [[D, â], Ĵ b̂ Ĵ^{-1}]
                let lhs = da.apply(&jhat.conjugate_apply(b, psi));
                let rhs = jhat.conjugate_apply(b, &da.apply(psi));
                first = first.max(diff(&lhs, &rhs));
            }
        }
    }

    let mut dirac_real: f64 = 0.0;
    let mut real_sq: f64 = 0.0;
    let mut gamma_d: f64 = 0.0;
    let mut gamma_a: f64 = 0.0;
    let mut gamma_j: f64 = 0.0;
    for psi in &spinors {
        dirac_real = dirac_real.max(diff(&d.apply(&jhat.apply(psi)), &jhat.apply(&d.apply(psi))));
        real_sq = real_sq.max(jhat.apply(&jhat.apply(psi)).add(psi).sup_norm());
        gamma_d = gamma_d.max(gamma.apply(&d.apply(psi)).add(&d.apply(&gamma.apply(psi))).sup_norm());
        for a in &hats {
            gamma_a = gamma_a.max(diff(&gamma.apply(&a.apply(psi)), &a.apply(&gamma.apply(psi))));
        }
        gamma_j = gamma_j.max(gamma.apply(&jhat.apply(psi)).add(&jhat.apply(&gamma.apply(psi))).sup_norm());
    }

    let lambda = cutoff as f64;
    let spec = spectrum(spin, lambda)?;
    let spectrum_matches_formula = block_spectrum(spin, lambda, tol)? == spec.entries.len();
    let isospectral = spec == spectrum(spin, lambda)?;

    let mut report = AxiomReport {
        theta,
        spin: spin.bits().to_vec(),
        cutoff,
        tol,
        commutator_norm,
        commutator_norm_residual,
        zeroth_order: zeroth,
        first_order: first,
        dirac_real_commutator: dirac_real,
        real_square_plus_one: real_sq,
        gamma_dirac_anticommutator: gamma_d,
        gamma_algebra_commutator: gamma_a,
        gamma_real_anticommutator: gamma_j,
        spectrum_matches_formula,
        isospectral,
        passed: false,
    };
    report.passed = report.max_residual() <= tol && spectrum_matches_formula && isospectral;
    Ok(report)
}

/// Diagonalises the mode blocks of `D` with `|p| ≤ Λ`, aggregates eigenvalues
/// within `tol`, and returns how many aggregated values agree with
/// [`spectrum`] (equal to its length when everything matches).
fn block_spectrum(spin: &SpinStructure, cutoff: f64, tol: f64) -> Result<usize> {
    let reference = spectrum(spin, cutoff)?;
    let r = cutoff.ceil() as i64 + 1;
    let mut values: Vec<f64> = Vec::new();
    for m1 in -r..=r {
        for m2 in -r..=r {
            let p = momentum(spin, [m1, m2]);
            if p[0] * p[0] + p[1] * p[1] <= cutoff * cutoff {
                values.extend(mode_eigenvalues(spin, [m1, m2]));
            }
        }
    }
    values.sort_by(f64::total_cmp);
    let mut grouped: Vec<(f64, usize)> = Vec::new();
    for v in values {
        match grouped.last_mut() {
            Some(last) if (v - last.0).abs() <= tol.max(1e-12) => last.1 += 1,
            _ => grouped.push((v, 1)),
        }
    }
    if grouped.len() != reference.entries.len() {
        return Ok(0);
    }
    Ok(grouped
        .iter()
        .zip(&reference.entries)
        .filter(|(a, b)| a.1 == b.1 && (a.0 - b.0).abs() <= tol.max(1e-12))
        .count())
}
