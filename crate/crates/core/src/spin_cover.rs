//! Spin structures on `T^N` and the double coverings of the acting torus.
//!
//! A spin structure is a bit vector `j ∈ {0,1}^N`; the twist set is
//! `X = {i : j_i = 1}`. The lifted torus action is a double covering
//! `T̃^N_j → T^N` with winding `j_i + 1` along loop `i`:
//!
//! | `X`        | covering space            | covering map                    |
//! |------------|---------------------------|---------------------------------|
//! | `∅`        | `T^N × Z₂` (two sheets)   | `(τ, ±1) ↦ τ`                   |
//! | `{m}`      | `T^N`                     | `τ_m ↦ τ_m²`                    |
//! | `|X| ≥ 2`  | `T^N / G_X`               | `τ_i ↦ τ_i²` for `i ∈ X`        |
//!
//! Dually the θ-deformed covering algebra is `C^∞(T^N_θ) ⊗ C²` for `X = ∅`
//! and `C^∞(T^N_θ̃)^{G_X}` otherwise, where `θ̃_{kℓ} = θ_{kℓ} / 2^{[k∈X]+[ℓ∈X]}`.
//! `C^∞(T^N_θ)` sits inside as the fixed points of the deck group `Z₂′` via
//! `u_i ↦ u_i²` (`i ∈ X`), `u_i ↦ u_i` (`i ∉ X`).
//!
//! Indices are zero-based throughout the API.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::nc_torus::{sign_character, Monomial, ThetaMatrix, TorusElement};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpinStructure {
    bits: Vec<u8>,
}

impl SpinStructure {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if let Some(&bad) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::InvalidSpinBit(bad));
        }
        Ok(Self { bits })
    }

    /// Shorthand for `N = 2`.
    pub fn pair(j1: u8, j2: u8) -> Result<Self> {
        Self::new(vec![j1, j2])
    }

    /// All `2^N` spin structures in lexicographic order.
    pub fn all(n: usize) -> Vec<SpinStructure> {
        (0..1usize << n)
            .map(|mask| SpinStructure {
                bits: (0..n).map(|i| ((mask >> (n - 1 - i)) & 1) as u8).collect(),
            })
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.bits.len()
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn is_twisted(&self, i: usize) -> bool {
        self.bits[i] == 1
    }

    pub fn twist_set(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.is_twisted(i)).collect()
    }

    fn require_rank_two(&self) -> Result<()> {
        if self.dim() != 2 {
            return Err(Error::RequiresRankTwo(self.dim()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum CoveringKind {
    TrivialDouble,
    OneLoopTwist(usize),
    MultiTwist(Vec<usize>),
}

/// Topology of the covering space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CoveringSpace {
    /// `T^N × Z₂`, untwisted.
    TwoSheets,
    /// `T^N`, twisted along one loop.
    Torus,
    /// `T^N / G_X`, twisted along several loops.
    TorusQuotient,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoveringDescriptor {
    pub kind: CoveringKind,
    pub space: CoveringSpace,
    /// Winding number `j_i + 1` of the covering map along loop `i`.
    pub winding: Vec<u8>,
}

/// Descriptor of the covering for any `N`.
pub fn describe_covering(j: &SpinStructure) -> CoveringDescriptor {
    let x = j.twist_set();
    let (kind, space) = match x.len() {
        0 => (CoveringKind::TrivialDouble, CoveringSpace::TwoSheets),
        1 => (CoveringKind::OneLoopTwist(x[0]), CoveringSpace::Torus),
        _ => (CoveringKind::MultiTwist(x), CoveringSpace::TorusQuotient),
    };
    CoveringDescriptor {
        kind,
        space,
        winding: j.bits.iter().map(|b| b + 1).collect(),
    }
}

/// The four double coverings of `T²`.
pub fn classify_covering(j: &SpinStructure) -> Result<CoveringDescriptor> {
    j.require_rank_two()?;
    Ok(describe_covering(j))
}

/// A point of the covering space `T̃^N_j`, as angles plus a sheet label.
/// The sheet is only meaningful for the untwisted cover; quotient covers
/// identify points in the same `G_X` orbit (see [`cover_points_equal`]).
#[derive(Debug, Clone, PartialEq)]
pub struct CoverPoint {
    pub angles: Vec<f64>,
    pub sheet: i8,
}

fn wrap_angle(a: f64) -> f64 {
    a.rem_euclid(TAU)
}

fn angles_close(a: f64, b: f64, tol: f64) -> bool {
    let d = (a - b).rem_euclid(TAU);
    d <= tol || TAU - d <= tol
}

/// The covering map `T̃^N_j → T^N` on angles.
pub fn cover_map(j: &SpinStructure, p: &CoverPoint) -> Vec<f64> {
    p.angles
        .iter()
        .enumerate()
        .map(|(i, &a)| wrap_angle(if j.is_twisted(i) { 2.0 * a } else { a }))
        .collect()
}

/// The generator of the deck group `Z₂′` acting on the covering space:
/// sheet swap when untwisted, otherwise `τ_i ↦ −τ_i` on the first twisted loop.
pub fn kernel_point_action(j: &SpinStructure, p: &CoverPoint) -> CoverPoint {
    match j.twist_set().first() {
        None => CoverPoint {
            angles: p.angles.clone(),
            sheet: -p.sheet,
        },
        Some(&i) => {
            let mut angles = p.angles.clone();
            angles[i] = wrap_angle(angles[i] + PI);
            CoverPoint {
                angles,
                sheet: p.sheet,
            }
        }
    }
}

/// Equality in `T̃^N_j`, identifying `G_X` orbits for multi-twisted covers.
pub fn cover_points_equal(j: &SpinStructure, a: &CoverPoint, b: &CoverPoint, tol: f64) -> bool {
    let x = j.twist_set();
    match x.len() {
        0 => a.sheet == b.sheet && a.angles.iter().zip(&b.angles).all(|(s, t)| angles_close(*s, *t, tol)),
        1 => a.angles.iter().zip(&b.angles).all(|(s, t)| angles_close(*s, *t, tol)),
        _ => group_gx(&x, j.dim()).iter().any(|g| {
            a.angles
                .iter()
                .zip(&b.angles)
                .zip(g)
                .all(|((s, t), &e)| angles_close(if e == -1 { s + PI } else { *s }, *t, tol))
        }),
    }
}

/// Dual description of the `Z₂′` generator on the covering algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum KernelAction {
    /// `a ⊗ (w, z) ↦ a ⊗ (z, w)`.
    FiberSwap,
    /// `u^k ↦ (−1)^{k_i} u^k`.
    SignFlip(usize),
}

pub fn kernel_action(j: &SpinStructure) -> Result<KernelAction> {
    j.require_rank_two()?;
    Ok(kernel_action_any(j))
}

/// The `Z₂′` action for any `N`; for `|X| ≥ 2` it is only well defined on
/// the `G_X`-fixed subalgebra, where all `k_i`, `i ∈ X`, share a parity.
pub fn kernel_action_any(j: &SpinStructure) -> KernelAction {
    match j.twist_set().first() {
        None => KernelAction::FiberSwap,
        Some(&i) => KernelAction::SignFlip(i),
    }
}

impl KernelAction {
    pub fn apply(&self, a: &CoverElement) -> CoverElement {
        match (self, a) {
            (KernelAction::FiberSwap, CoverElement::Double([w, z])) => {
                CoverElement::Double([z.clone(), w.clone()])
            }
            (KernelAction::SignFlip(i), CoverElement::Twisted(t)) => {
                let mut eps = vec![1i8; t.dim()];
                eps[*i] = -1;
                CoverElement::Twisted(t.sign_action(&eps).expect("sign vector matches dimension"))
            }
            _ => panic!("kernel action applied to an element of the wrong covering algebra"),
        }
    }

    /// Image of a basis key together with the sign picked up.
    fn on_basis(&self, key: &CoverKey) -> (CoverKey, i8) {
        match self {
            KernelAction::FiberSwap => (
                CoverKey {
                    k: key.k.clone(),
                    fiber: 1 - key.fiber,
                },
                1,
            ),
            KernelAction::SignFlip(i) => (key.clone(), if key.k[*i].rem_euclid(2) == 0 { 1 } else { -1 }),
        }
    }
}

/// The two lifts `±e^{−i(j·s)/2}` of the translation by angles `s`.
pub fn lift_phases(j: &SpinStructure, s: &[f64]) -> Result<[Complex64; 2]> {
    if s.len() != j.dim() {
        return Err(Error::DimensionMismatch {
            expected: j.dim(),
            found: s.len(),
        });
    }
    let arg: f64 = j.bits.iter().zip(s).map(|(&b, &si)| b as f64 * si).sum();
    let phase = Complex64::cis(-arg / 2.0);
    Ok([phase, -phase])
}

/// All `ε ∈ {±1}^N` with `ε_i = 1` off `X` and `Π ε_i = 1`.
pub fn group_gx(x: &[usize], n: usize) -> Vec<Vec<i8>> {
    let mut out = Vec::with_capacity(1 << x.len().saturating_sub(1));
    for mask in 0..1usize << x.len() {
        if mask.count_ones() % 2 == 1 {
            continue;
        }
        let mut eps = vec![1i8; n];
        for (bit, &i) in x.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                eps[i] = -1;
            }
        }
        out.push(eps);
    }
    out
}

/// `m_i + m_k` even for all `i, k ∈ X`, i.e. the `k_i` over `X` share a parity.
pub fn is_fixed_monomial(m: &[i64], x: &[usize]) -> bool {
    let mut parities = x.iter().map(|&i| m[i].rem_euclid(2));
    match parities.next() {
        None => true,
        Some(p) => parities.all(|q| q == p),
    }
}

/// `θ̃_{kℓ} = θ_{kℓ} / 2^{[k∈X]+[ℓ∈X]}`.
pub fn theta_tilde(theta: &ThetaMatrix, j: &SpinStructure) -> ThetaMatrix {
    let scale = |i: usize| if j.is_twisted(i) { 0.5 } else { 1.0 };
    theta.rescaled(|k, l| scale(k) * scale(l))
}

/// The θ-deformed covering algebra for a spin structure.
#[derive(Debug, Clone, PartialEq)]
pub struct CoveringAlgebra {
    spin: SpinStructure,
    theta: ThetaMatrix,
    theta_tilde: ThetaMatrix,
    group: Vec<Vec<i8>>,
}

pub fn deformed_cover(theta: &ThetaMatrix, j: &SpinStructure) -> Result<CoveringAlgebra> {
    if theta.dim() != j.dim() {
        return Err(Error::DimensionMismatch {
            expected: theta.dim(),
            found: j.dim(),
        });
    }
    Ok(CoveringAlgebra {
        spin: j.clone(),
        theta: theta.clone(),
        theta_tilde: theta_tilde(theta, j),
        group: group_gx(&j.twist_set(), j.dim()),
    })
}

impl CoveringAlgebra {
    pub fn spin(&self) -> &SpinStructure {
        &self.spin
    }

    pub fn is_trivial(&self) -> bool {
        self.spin.twist_set().is_empty()
    }

    pub fn base_theta(&self) -> &ThetaMatrix {
        &self.theta
    }

    /// Deformation matrix of the covering algebra (`θ` itself when untwisted).
    pub fn theta_tilde(&self) -> &ThetaMatrix {
        &self.theta_tilde
    }

    /// `G_X`; the trivial group when `|X| ≤ 1`.
    pub fn group(&self) -> &[Vec<i8>] {
        &self.group
    }

    pub fn kernel_action(&self) -> KernelAction {
        kernel_action_any(&self.spin)
    }

    /// Exponent of the image of `u^m` under [`embed_cover`].
    pub fn embedded_exponent(&self, m: &[i64]) -> Result<Monomial> {
        m.iter()
            .enumerate()
            .map(|(i, &e)| {
                if self.spin.is_twisted(i) {
                    e.checked_mul(2).ok_or(Error::ExponentOverflow)
                } else {
                    Ok(e)
                }
            })
            .collect::<Result<Vec<_>>>()
            .map(Monomial)
    }

    /// Inverse of [`Self::embedded_exponent`] on its image.
    pub fn pullback_exponent(&self, k: &[i64]) -> Option<Monomial> {
        k.iter()
            .enumerate()
            .map(|(i, &e)| {
                if self.spin.is_twisted(i) {
                    (e.rem_euclid(2) == 0).then_some(e / 2)
                } else {
                    Some(e)
                }
            })
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }

    /// Whether `a` belongs to this covering algebra (`G_X`-fixed when twisted).
    pub fn contains(&self, a: &CoverElement) -> bool {
        match a {
            CoverElement::Double([w, z]) => {
                self.is_trivial() && *w.theta() == self.theta && *z.theta() == self.theta
            }
            CoverElement::Twisted(t) => {
                let x = self.spin.twist_set();
                !self.is_trivial()
                    && *t.theta() == self.theta_tilde
                    && t.support().all(|m| is_fixed_monomial(m.exps(), &x))
            }
        }
    }

    pub fn one(&self) -> CoverElement {
        if self.is_trivial() {
            let one = TorusElement::one(self.theta.clone());
            CoverElement::Double([one.clone(), one])
        } else {
            CoverElement::Twisted(TorusElement::one(self.theta_tilde.clone()))
        }
    }
}

/// An element of a covering algebra.
#[derive(Debug, Clone, PartialEq)]
pub enum CoverElement {
    /// `w ⊗ e_1 + z ⊗ e_2` in `C^∞(T^N_θ) ⊗ C²`.
    Double([TorusElement; 2]),
    /// Element of `C^∞(T^N_θ̃)`, expected `G_X`-fixed.
    Twisted(TorusElement),
}

impl CoverElement {
    pub fn star_product(&self, other: &CoverElement) -> Result<CoverElement> {
        match (self, other) {
            (CoverElement::Double([a, b]), CoverElement::Double([c, d])) => {
                Ok(CoverElement::Double([a.star_product(c)?, b.star_product(d)?]))
            }
            (CoverElement::Twisted(a), CoverElement::Twisted(b)) => {
                Ok(CoverElement::Twisted(a.star_product(b)?))
            }
            _ => Err(Error::ThetaMismatch),
        }
    }

    pub fn involution(&self) -> CoverElement {
        match self {
            CoverElement::Double([a, b]) => CoverElement::Double([a.involution(), b.involution()]),
            CoverElement::Twisted(a) => CoverElement::Twisted(a.involution()),
        }
    }

    pub fn add(&self, other: &CoverElement) -> Result<CoverElement> {
        match (self, other) {
            (CoverElement::Double([a, b]), CoverElement::Double([c, d])) => {
                Ok(CoverElement::Double([a.add(c)?, b.add(d)?]))
            }
            (CoverElement::Twisted(a), CoverElement::Twisted(b)) => Ok(CoverElement::Twisted(a.add(b)?)),
            _ => Err(Error::ThetaMismatch),
        }
    }

    pub fn scale(&self, c: Complex64) -> CoverElement {
        match self {
            CoverElement::Double([a, b]) => CoverElement::Double([a.scale(c), b.scale(c)]),
            CoverElement::Twisted(a) => CoverElement::Twisted(a.scale(c)),
        }
    }

    pub fn max_abs_diff(&self, other: &CoverElement) -> Result<f64> {
        match (self, other) {
            (CoverElement::Double([a, b]), CoverElement::Double([c, d])) => {
                Ok(a.max_abs_diff(c)?.max(b.max_abs_diff(d)?))
            }
            (CoverElement::Twisted(a), CoverElement::Twisted(b)) => a.max_abs_diff(b),
            _ => Err(Error::ThetaMismatch),
        }
    }

    pub fn approx_eq(&self, other: &CoverElement, tol: f64) -> bool {
        self.max_abs_diff(other).is_ok_and(|d| d <= tol)
    }

    /// Monomials appearing in any component.
    pub fn support(&self) -> BTreeSet<Monomial> {
        match self {
            CoverElement::Double([a, b]) => a.support().chain(b.support()).cloned().collect(),
            CoverElement::Twisted(a) => a.support().cloned().collect(),
        }
    }
}

/// The index-2 embedding `C^∞(T^N_θ) → C^∞((T̃^N_j)_θ)`.
pub fn embed_cover(alg: &CoveringAlgebra, a: &TorusElement) -> Result<CoverElement> {
    if *a.theta() != alg.theta {
        return Err(Error::ThetaMismatch);
    }
    if alg.is_trivial() {
        return Ok(CoverElement::Double([a.clone(), a.clone()]));
    }
    let terms = a
        .terms()
        .map(|(m, c)| Ok((alg.embedded_exponent(m.exps())?, *c)))
        .collect::<Result<Vec<_>>>()?;
    Ok(CoverElement::Twisted(TorusElement::from_terms(
        alg.theta_tilde.clone(),
        terms,
    )?))
}

/// Basis label of a covering algebra: monomial `u^k` and, for the trivial
/// double, the fiber index (`0` or `1`; always `0` when twisted).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct CoverKey {
    k: Vec<i64>,
    fiber: u8,
}

type SparseVec = BTreeMap<CoverKey, Complex64>;

pub(crate) fn box_points(n: usize, bound: i64) -> Vec<Vec<i64>> {
    let side = (2 * bound + 1) as usize;
    let total = side.pow(n as u32);
    (0..total)
        .map(|mut idx| {
            let mut v = vec![0i64; n];
            for slot in v.iter_mut().rev() {
                *slot = (idx % side) as i64 - bound;
                idx /= side;
            }
            v
        })
        .collect()
}

/// Rank of a set of sparse vectors by Gaussian elimination with partial pivoting.
pub(crate) fn rank<K: Ord>(vectors: &[BTreeMap<K, Complex64>]) -> usize {
    let keys: Vec<&K> = vectors
        .iter()
        .flat_map(|v| v.keys())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut rows: Vec<Vec<Complex64>> = vectors
        .iter()
        .map(|v| keys.iter().map(|k| v.get(*k).copied().unwrap_or_default()).collect())
        .collect();
    let mut r = 0;
    for col in 0..keys.len() {
        let Some(pivot) = (r..rows.len()).max_by(|&a, &b| {
            rows[a][col]
                .norm()
                .partial_cmp(&rows[b][col].norm())
                .expect("finite entries")
        }) else {
            break;
        };
        if rows[pivot][col].norm() < 1e-9 {
            continue;
        }
        rows.swap(r, pivot);
        let p = rows[r][col];
        for i in r + 1..rows.len() {
            let f = rows[i][col] / p;
            if f.norm() == 0.0 {
                continue;
            }
            let (top, bottom) = rows.split_at_mut(i);
            for (x, y) in bottom[0][col..].iter_mut().zip(&top[r][col..]) {
                *x -= y * f;
            }
        }
        r += 1;
    }
    r
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixedPointReport {
    pub cutoff: i64,
    /// Covering-algebra basis elements with all exponents in `[-cutoff, cutoff]`.
    pub total_basis: usize,
    pub fixed_dim: usize,
    pub image_dim: usize,
    /// Number of grades where fixed subspace and embedded image were compared.
    pub grades_checked: usize,
    pub equal: bool,
}

/// Compares the `Z₂′`-fixed subspace of the covering algebra with the image
/// of the embedding, grade by grade, on exponents bounded by `cutoff`.
pub fn z2prime_fixed_check(alg: &CoveringAlgebra, cutoff: i64) -> Result<FixedPointReport> {
    compare_fixed_with_image(alg, alg.kernel_action(), cutoff)
}

fn compare_fixed_with_image(
    alg: &CoveringAlgebra,
    action: KernelAction,
    cutoff: i64,
) -> Result<FixedPointReport> {
    let n = alg.spin.dim();
    let x = alg.spin.twist_set();
    let fibers: &[u8] = if alg.is_trivial() { &[0, 1] } else { &[0] };

    let basis: Vec<CoverKey> = box_points(n, cutoff)
        .into_iter()
        .filter(|k| is_fixed_monomial(k, &x))
        .flat_map(|k| fibers.iter().map(move |&fiber| CoverKey { k: k.clone(), fiber }))
        .collect();

    // Fixed vectors: one per orbit of the involution on the basis.
    let mut fixed: BTreeMap<Vec<i64>, Vec<SparseVec>> = BTreeMap::new();
    let mut seen: BTreeSet<CoverKey> = BTreeSet::new();
    for key in &basis {
        if seen.contains(key) {
            continue;
        }
        let (image, sign) = action.on_basis(key);
        seen.insert(key.clone());
        seen.insert(image.clone());
        let mut v = SparseVec::new();
        if image == *key {
            if sign == 1 {
                v.insert(key.clone(), Complex64::new(1.0, 0.0));
            }
        } else {
            v.insert(key.clone(), Complex64::new(1.0, 0.0));
            v.insert(image, Complex64::new(sign as f64, 0.0));
        }
        if !v.is_empty() {
            fixed.entry(key.k.clone()).or_default().push(v);
        }
    }

    let mut image: BTreeMap<Vec<i64>, Vec<SparseVec>> = BTreeMap::new();
    for m in box_points(n, cutoff) {
        let k = alg.embedded_exponent(&m)?;
        if k.exps().iter().any(|e| e.abs() > cutoff) {
            continue;
        }
        let u = TorusElement::monomial(alg.theta.clone(), m, Complex64::new(1.0, 0.0))?;
        let v: SparseVec = match embed_cover(alg, &u)? {
            CoverElement::Double(parts) => parts
                .iter()
                .enumerate()
                .flat_map(|(f, p)| {
                    p.terms()
                        .map(move |(k, c)| (CoverKey { k: k.0.clone(), fiber: f as u8 }, *c))
                })
                .collect(),
            CoverElement::Twisted(t) => t
                .terms()
                .map(|(k, c)| (CoverKey { k: k.0.clone(), fiber: 0 }, *c))
                .collect(),
        };
        image.entry(k.0).or_default().push(v);
    }

    let grades: BTreeSet<&Vec<i64>> = fixed.keys().chain(image.keys()).collect();
    let mut equal = true;
    for g in &grades {
        let f = fixed.get(*g).map(Vec::as_slice).unwrap_or(&[]);
        let i = image.get(*g).map(Vec::as_slice).unwrap_or(&[]);
        let both: Vec<SparseVec> = f.iter().chain(i).cloned().collect();
        let (rf, ri, rb) = (rank(f), rank(i), rank(&both));
        if !(rf == ri && ri == rb) {
            equal = false;
        }
    }

    Ok(FixedPointReport {
        cutoff,
        total_basis: basis.len(),
        fixed_dim: fixed.values().map(|v| rank(v)).sum(),
        image_dim: image.values().map(|v| rank(v)).sum(),
        grades_checked: grades.len(),
        equal,
    })
}

/// Number of classes into which the covering-algebra basis (exponents in
/// `[-cutoff, cutoff]`) splits relative to the embedded image: parity classes
/// of `(k_i)_{i∈X}` modulo the image lattice when twisted, `Z₂′` eigenspaces
/// of the fiber when untwisted.
pub fn image_coset_count(alg: &CoveringAlgebra, cutoff: i64) -> usize {
    if alg.is_trivial() {
        // Fiber eigenvectors (1, 1) and (1, -1) under the swap.
        let swap_eigenvalues: BTreeSet<i8> = [1i8, -1].into_iter().collect();
        return swap_eigenvalues.len();
    }
    let x = alg.spin.twist_set();
    box_points(alg.spin.dim(), cutoff)
        .into_iter()
        .filter(|k| is_fixed_monomial(k, &x))
        .map(|k| x.iter().map(|&i| k[i].rem_euclid(2)).collect::<Vec<_>>())
        .collect::<BTreeSet<_>>()
        .len()
}

/// Sign of `u^k` under the `Z₂′` generator of the covering algebra.
pub fn kernel_sign(alg: &CoveringAlgebra, k: &[i64]) -> i8 {
    match alg.kernel_action() {
        KernelAction::FiberSwap => 1,
        KernelAction::SignFlip(i) => {
            let mut eps = vec![1i8; k.len()];
            eps[i] = -1;
            sign_character(&eps, k)
        }
    }
}
