//! Splitting realisation `M_θ = (M × T^N_θ)/T^N` for `M = T^N` and the spinor
//! bimodule over `C^∞(T²_θ)` built from the covering algebra of a spin
//! structure.
//!
//! [`WeightedTensorElement`] models `C^∞(T^N) ⊗ C^∞(T^N_θ)`: the left factor
//! `z^a` is commutative and carries weight `a` under `α`, the right factor
//! `u^b` carries weight `b` under `β`. The combined action `α ⊗ β^{-1}` fixes
//! exactly the terms with `a = b`, and `κ(u^m) = z^m ⊗ u^m`.
//!
//! For spinors the right factor is the covering algebra of the spin
//! structure, whose generators carry the lifted weights `β̃`: `1/2` in a
//! twisted slot, `1` otherwise. A spinor mode `m` has weight `p = m + j/2`,
//! and each mode pairs with exactly one covering monomial `t(m)` of the same
//! weight that is odd under `Z₂′` (the nontrivial lift of the identity acts by
//! `−1` on spinors). For the trivial double the fiber of `t(m)` is `(1, −1)`.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::nc_torus::{Monomial, ThetaMatrix, TorusElement, PRUNE_TOL};
use crate::spectral::{self, charge_conjugation, clifford, momentum, Mode, Spinor};
use crate::spin_cover::{
    box_points, deformed_cover, embed_cover, is_fixed_monomial, rank, CoverElement, CoveringAlgebra,
    KernelAction, SpinStructure,
};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Finite sum of `c · z^a ⊗ u^b`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedTensorElement {
    theta: ThetaMatrix,
    terms: BTreeMap<(Monomial, Monomial), Complex64>,
}

impl WeightedTensorElement {
    pub fn zero(theta: ThetaMatrix) -> Self {
        Self {
            theta,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms<I>(theta: ThetaMatrix, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, Monomial, Complex64)>,
    {
        let mut out = Self::zero(theta);
        let n = out.theta.dim();
        for (a, b, c) in terms {
            for m in [&a, &b] {
                if m.dim() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        found: m.dim(),
                    });
                }
            }
            out.add_term(a, b, c);
        }
        Ok(out)
    }

    fn add_term(&mut self, a: Monomial, b: Monomial, c: Complex64) {
        let key = (a, b);
        let v = *self.terms.get(&key).unwrap_or(&Complex64::new(0.0, 0.0)) + c;
        if v.norm() <= PRUNE_TOL {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, v);
        }
    }

    pub fn theta(&self) -> &ThetaMatrix {
        &self.theta
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Monomial, Monomial), &Complex64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.theta != other.theta {
            return Err(Error::ThetaMismatch);
        }
        let mut out = self.clone();
        for ((a, b), c) in &other.terms {
            out.add_term(a.clone(), b.clone(), *c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = Self::zero(self.theta.clone());
        for ((a, b), v) in &self.terms {
            out.add_term(a.clone(), b.clone(), v * c);
        }
        out
    }

    /// `(z^a ⊗ u^b)(z^{a'} ⊗ u^{b'}) = z^{a+a'} ⊗ u^b ⋆ u^{b'}`.
    pub fn product(&self, other: &Self) -> Result<Self> {
        if self.theta != other.theta {
            return Err(Error::ThetaMismatch);
        }
        let mut out = Self::zero(self.theta.clone());
        for ((a, b), c) in &self.terms {
            for ((a2, b2), c2) in &other.terms {
                let phase = self.theta.cocycle(b.exps(), b2.exps());
                out.add_term(a.checked_add(a2)?, b.checked_add(b2)?, c * c2 * phase);
            }
        }
        Ok(out)
    }

    pub fn involution(&self) -> Self {
        let mut out = Self::zero(self.theta.clone());
        for ((a, b), c) in &self.terms {
            let right = TorusElement::monomial(self.theta.clone(), b.clone(), *c)
                .expect("dimension checked on construction")
                .involution();
            let neg_a = a.checked_neg().expect("negation of a stored exponent");
            for (m, v) in right.terms() {
                out.add_term(neg_a.clone(), m.clone(), *v);
            }
        }
        out
    }

    /// Weight `a − b` of a term under `α ⊗ β^{-1}`.
    pub fn weight(a: &Monomial, b: &Monomial) -> Vec<i64> {
        a.exps().iter().zip(b.exps()).map(|(x, y)| x - y).collect()
    }

    /// `(α_s ⊗ β_s^{-1})(x)`: each term picks up `e^{i s·(a − b)}`.
    pub fn torus_action(&self, s: &[f64]) -> Self {
        let mut out = Self::zero(self.theta.clone());
        for ((a, b), c) in &self.terms {
            let w = Self::weight(a, b);
            let arg: f64 = w.iter().zip(s).map(|(&wi, si)| wi as f64 * si).sum();
            out.add_term(a.clone(), b.clone(), c * Complex64::cis(arg));
        }
        out
    }

    pub fn is_invariant(&self) -> bool {
        self.terms.keys().all(|(a, b)| a == b)
    }

    /// Sets every `z_k = 1`, leaving an element of `C^∞(T^N_θ)`.
    pub fn evaluate_at_identity(&self) -> TorusElement {
        TorusElement::from_terms(
            self.theta.clone(),
            self.terms.iter().map(|((_, b), c)| (b.clone(), *c)),
        )
        .expect("dimension checked on construction")
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.theta != other.theta {
            return Err(Error::ThetaMismatch);
        }
        let keys: BTreeSet<_> = self.terms.keys().chain(other.terms.keys()).collect();
        Ok(keys
            .into_iter()
            .map(|k| {
                let x = self.terms.get(k).copied().unwrap_or_default();
                let y = other.terms.get(k).copied().unwrap_or_default();
                (x - y).norm()
            })
            .fold(0.0, f64::max))
    }
}

/// `κ(u^m) = z^m ⊗ u^m`, extended linearly.
pub fn kappa(a: &TorusElement) -> WeightedTensorElement {
    WeightedTensorElement::from_terms(
        a.theta().clone(),
        a.terms().map(|(m, c)| (m.clone(), m.clone(), *c)),
    )
    .expect("exponents share the dimension of theta")
}

/// Inverse of [`kappa`] on the fixed-point subalgebra.
pub fn kappa_inverse(x: &WeightedTensorElement) -> Result<TorusElement> {
    if !x.is_invariant() {
        return Err(Error::NotInvariant);
    }
    Ok(x.evaluate_at_identity())
}

/// All `(a, b)` with entries in `[-cutoff, cutoff]` and zero weight.
pub fn fixed_point_basis(n: usize, cutoff: i64) -> Vec<(Monomial, Monomial)> {
    let points = box_points(n, cutoff);
    let mut out = Vec::new();
    for a in &points {
        for b in &points {
            let (a, b) = (Monomial(a.clone()), Monomial(b.clone()));
            if WeightedTensorElement::weight(&a, &b).iter().all(|&w| w == 0) {
                out.push((a, b));
            }
        }
    }
    out
}

/// One explicit term `ψ e^{i m·x} ⊗ t` of a bimodule element.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorTerm {
    pub mode: Mode,
    pub spinor: Spinor,
    pub cover: CoverElement,
}

/// Invariant element `Σ_m ψ(m) e^{i m·x} ⊗ t(m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinorBimoduleElement {
    spin: SpinStructure,
    theta: f64,
    values: BTreeMap<Mode, Spinor>,
}

impl SpinorBimoduleElement {
    pub fn spin(&self) -> &SpinStructure {
        &self.spin
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Spinor coefficient at each mode.
    pub fn values(&self) -> impl Iterator<Item = (&Mode, &Spinor)> {
        self.values.iter()
    }

    pub fn get(&self, m: Mode) -> Spinor {
        self.values.get(&m).copied().unwrap_or_else(Spinor::zeros)
    }

    fn add_at(&mut self, m: Mode, v: Spinor) {
        *self.values.entry(m).or_insert_with(Spinor::zeros) += v;
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.spin != other.spin {
            return Err(Error::SpinMismatch);
        }
        if self.theta != other.theta {
            return Err(Error::ThetaMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, v) in &other.values {
            out.add_at(*m, *v);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-ONE))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            values: self.values.iter().map(|(m, v)| (*m, v * c)).collect(),
            ..self.clone()
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.values
            .values()
            .flat_map(|v| v.iter().map(|c| c.norm()))
            .fold(0.0, f64::max)
    }
}

/// The bimodule `(C^∞(T², S) ⊗ covering algebra)^{α̂ ⊗ β̃^{-1}}` for one spin
/// structure and deformation parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinorBimodule {
    spin: SpinStructure,
    theta: f64,
    cover: CoveringAlgebra,
}

impl SpinorBimodule {
    pub fn new(spin: &SpinStructure, theta: f64) -> Result<Self> {
        if spin.dim() != 2 {
            return Err(Error::RequiresRankTwo(spin.dim()));
        }
        Ok(Self {
            spin: spin.clone(),
            theta,
            cover: deformed_cover(&ThetaMatrix::from_scalar(theta), spin)?,
        })
    }

    pub fn spin(&self) -> &SpinStructure {
        &self.spin
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn cover(&self) -> &CoveringAlgebra {
        &self.cover
    }

    pub fn base_theta(&self) -> &ThetaMatrix {
        self.cover.base_theta()
    }

    /// Doubled `β̃` weight of `u^k`: `k_i` in a twisted slot, `2k_i` otherwise.
    pub fn doubled_cover_weight(&self, k: &[i64]) -> Mode {
        let w = |i: usize| if self.spin.is_twisted(i) { k[i] } else { 2 * k[i] };
        [w(0), w(1)]
    }

    /// Doubled spinor weight `2p = 2m + j`.
    pub fn doubled_spinor_weight(&self, m: Mode) -> Mode {
        let j = self.spin.bits();
        [2 * m[0] + j[0] as i64, 2 * m[1] + j[1] as i64]
    }

    /// Exponent of `t(m)`: `2m_i + 1` in a twisted slot, `m_i` otherwise.
    pub fn partner_exponent(&self, m: Mode) -> Vec<i64> {
        (0..2)
            .map(|i| if self.spin.is_twisted(i) { 2 * m[i] + 1 } else { m[i] })
            .collect()
    }

    /// The covering monomial paired with the spinor mode `m`.
    pub fn partner(&self, m: Mode) -> CoverElement {
        let k = self.partner_exponent(m);
        if self.cover.is_trivial() {
            let u = TorusElement::monomial(self.base_theta().clone(), k, ONE).expect("rank two");
            CoverElement::Double([u.clone(), u.scale(-ONE)])
        } else {
            CoverElement::Twisted(
                TorusElement::monomial(self.cover.theta_tilde().clone(), k, ONE).expect("rank two"),
            )
        }
    }

    pub fn zero(&self) -> SpinorBimoduleElement {
        SpinorBimoduleElement {
            spin: self.spin.clone(),
            theta: self.theta,
            values: BTreeMap::new(),
        }
    }

    pub fn element(&self, values: impl IntoIterator<Item = (Mode, Spinor)>) -> SpinorBimoduleElement {
        let mut out = self.zero();
        for (m, v) in values {
            out.add_at(m, v);
        }
        out
    }

    /// `e_s ⊗ t(m)` for `s ∈ {0, 1}`.
    pub fn basis_element(&self, m: Mode, s: usize) -> SpinorBimoduleElement {
        let mut v = Spinor::zeros();
        v[s] = ONE;
        self.element([(m, v)])
    }

    pub fn tensor_terms(&self, x: &SpinorBimoduleElement) -> Vec<TensorTerm> {
        x.values
            .iter()
            .map(|(m, v)| TensorTerm {
                mode: *m,
                spinor: *v,
                cover: self.partner(*m),
            })
            .collect()
    }

    /// Coefficient `c` with `e = c · t(m)`, or `NotInvariant` when `e` is not
    /// a multiple of the partner.
    fn partner_coefficient(&self, e: &CoverElement, m: Mode) -> Result<Complex64> {
        let k = Monomial(self.partner_exponent(m));
        let c = match e {
            CoverElement::Double([w, _]) => w.coefficient(&k),
            CoverElement::Twisted(t) => t.coefficient(&k),
        };
        let residual = e.max_abs_diff(&self.partner(m).scale(c))?;
        if residual > 1e-12 * c.norm().max(1.0) {
            return Err(Error::NotInvariant);
        }
        Ok(c)
    }

    /// Rebuilds an element from explicit tensor terms, rejecting any term that
    /// is not invariant under the combined torus and `Z₂′` actions.
    pub fn from_tensor_terms(&self, terms: &[TensorTerm]) -> Result<SpinorBimoduleElement> {
        let mut out = self.zero();
        for t in terms {
            let w = self.doubled_spinor_weight(t.mode);
            if t.cover.support().iter().any(|k| self.doubled_cover_weight(k.exps()) != w) {
                return Err(Error::NotInvariant);
            }
            let c = self.partner_coefficient(&t.cover, t.mode)?;
            out.add_at(t.mode, t.spinor * c);
        }
        Ok(out)
    }

    fn check_element(&self, x: &SpinorBimoduleElement) -> Result<()> {
        if x.spin != self.spin {
            return Err(Error::SpinMismatch);
        }
        if x.theta != self.theta {
            return Err(Error::ThetaMismatch);
        }
        Ok(())
    }

    fn check_algebra(&self, a: &TorusElement) -> Result<()> {
        if a.theta() != self.base_theta() {
            return Err(Error::ThetaMismatch);
        }
        Ok(())
    }

    /// `κ(a) · x`: shifts modes by `n` and star-multiplies `embed(u^n)` on the left.
    pub fn left_action(&self, a: &TorusElement, x: &SpinorBimoduleElement) -> Result<SpinorBimoduleElement> {
        self.check_algebra(a)?;
        self.check_element(x)?;
        let mut out = self.zero();
        for (n, c) in a.terms() {
            let u = TorusElement::monomial(self.base_theta().clone(), n.clone(), ONE)?;
            let e = embed_cover(&self.cover, &u)?;
            for term in self.tensor_terms(x) {
                let target = [term.mode[0] + n.0[0], term.mode[1] + n.0[1]];
                let prod = e.star_product(&term.cover)?;
                out.add_at(target, term.spinor * (c * self.partner_coefficient(&prod, target)?));
            }
        }
        Ok(out)
    }

    /// `x · κ(a)`.
    pub fn right_action(&self, x: &SpinorBimoduleElement, a: &TorusElement) -> Result<SpinorBimoduleElement> {
        self.check_algebra(a)?;
        self.check_element(x)?;
        let mut out = self.zero();
        for (n, c) in a.terms() {
            let u = TorusElement::monomial(self.base_theta().clone(), n.clone(), ONE)?;
            let e = embed_cover(&self.cover, &u)?;
            for term in self.tensor_terms(x) {
                let target = [term.mode[0] + n.0[0], term.mode[1] + n.0[1]];
                let prod = term.cover.star_product(&e)?;
                out.add_at(target, term.spinor * (c * self.partner_coefficient(&prod, target)?));
            }
        }
        Ok(out)
    }

    /// `(ψ ⊗ t, ψ' ⊗ t') = (ψ, ψ') ⊗ t* t'`, pulled back through `κ` and the
    /// covering embedding to an element of `C^∞(T²_θ)`.
    pub fn hermitian_pairing(&self, x: &SpinorBimoduleElement, y: &SpinorBimoduleElement) -> Result<TorusElement> {
        self.check_element(x)?;
        self.check_element(y)?;
        let mut terms: Vec<(Monomial, Complex64)> = Vec::new();
        for s in self.tensor_terms(x) {
            let t_star = s.cover.involution();
            for r in self.tensor_terms(y) {
                let inner = s.spinor.dotc(&r.spinor);
                let n = [r.mode[0] - s.mode[0], r.mode[1] - s.mode[1]];
                let prod = t_star.star_product(&r.cover)?;
                terms.push((Monomial(n.to_vec()), inner * self.pullback_coefficient(&prod, n)?));
            }
        }
        TorusElement::from_terms(self.base_theta().clone(), terms)
    }

    /// Coefficient `c` with `e = c · embed(u^n)`.
    fn pullback_coefficient(&self, e: &CoverElement, n: Mode) -> Result<Complex64> {
        let u = TorusElement::monomial(self.base_theta().clone(), n.to_vec(), ONE)?;
        let image = embed_cover(&self.cover, &u)?;
        let k = Monomial(self.cover.embedded_exponent(&n)?.0);
        let c = match e {
            CoverElement::Double([w, _]) => w.coefficient(&k),
            CoverElement::Twisted(t) => t.coefficient(&k),
        };
        if e.max_abs_diff(&image.scale(c))? > 1e-12 * c.norm().max(1.0) {
            return Err(Error::NotInImage);
        }
        Ok(c)
    }

    /// `D_θ = (D ⊗ I)` restricted: Clifford multiplication on the spinor factor.
    pub fn dirac(&self, x: &SpinorBimoduleElement) -> Result<SpinorBimoduleElement> {
        self.check_element(x)?;
        let terms: Vec<TensorTerm> = self
            .tensor_terms(x)
            .into_iter()
            .map(|t| TensorTerm {
                spinor: clifford(momentum(&self.spin, t.mode)) * t.spinor,
                ..t
            })
            .collect();
        self.from_tensor_terms(&terms)
    }

    /// `J̃(ψ ⊗ t) = Jψ ⊗ t*`.
    pub fn real_structure(&self, x: &SpinorBimoduleElement) -> Result<SpinorBimoduleElement> {
        self.check_element(x)?;
        let j = self.spin.bits();
        let c = charge_conjugation();
        let terms: Vec<TensorTerm> = self
            .tensor_terms(x)
            .into_iter()
            .map(|t| TensorTerm {
                mode: [-t.mode[0] - j[0] as i64, -t.mode[1] - j[1] as i64],
                spinor: c * t.spinor.conjugate(),
                cover: t.cover.involution(),
            })
            .collect();
        self.from_tensor_terms(&terms)
    }

    /// `sup | D(x·u^n) − (Dx)·u^n − (n·σ)(x·u^n) |`.
    pub fn leibniz_residual(&self, x: &SpinorBimoduleElement, n: Mode) -> Result<f64> {
        let u = TorusElement::monomial(self.base_theta().clone(), n.to_vec(), ONE)?;
        let xu = self.right_action(x, &u)?;
        let lhs = self.dirac(&xu)?.sub(&self.right_action(&self.dirac(x)?, &u)?)?;
        let sigma_n = clifford([n[0] as f64, n[1] as f64]);
        let rhs = self.element(xu.values().map(|(m, v)| (*m, sigma_n * v)));
        Ok(lhs.sub(&rhs)?.sup_norm())
    }

    /// Invariant tensors in the grade of spinor mode `m`, computed from the
    /// full candidate space rather than from [`Self::partner`].
    fn invariant_space(&self, m: Mode) -> Vec<BTreeMap<TensorKey, Complex64>> {
        let w = self.doubled_spinor_weight(m);
        let x = self.spin.twist_set();
        let fibers: &[u8] = if self.cover.is_trivial() { &[0, 1] } else { &[0] };
        let reach = m[0].abs().max(m[1].abs()) * 2 + 1;
        let mut candidates = Vec::new();
        for k in box_points(2, reach) {
            if !is_fixed_monomial(&k, &x) || self.doubled_cover_weight(&k) != w {
                continue;
            }
            for s in 0..2u8 {
                for &fiber in fibers {
                    candidates.push(TensorKey {
                        spin_index: s,
                        k: k.clone(),
                        fiber,
                    });
                }
            }
        }
        // Z₂′ acts by −1 on spinors and by the kernel action on the cover.
        let action = self.cover.kernel_action();
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for key in candidates {
            if seen.contains(&key) {
                continue;
            }
            let (image, sign) = match action {
                KernelAction::FiberSwap => (
                    TensorKey {
                        fiber: 1 - key.fiber,
                        ..key.clone()
                    },
                    -1.0,
                ),
                KernelAction::SignFlip(i) => (key.clone(), if key.k[i].rem_euclid(2) == 0 { -1.0 } else { 1.0 }),
            };
            seen.insert(key.clone());
            seen.insert(image.clone());
            let mut v = BTreeMap::new();
            if image == key {
                if sign == 1.0 {
                    v.insert(key, ONE);
                }
            } else {
                v.insert(key, ONE);
                v.insert(image, Complex64::new(sign, 0.0));
            }
            if !v.is_empty() {
                out.push(v);
            }
        }
        out
    }

    fn sparse(&self, x: &SpinorBimoduleElement) -> BTreeMap<TensorKey, Complex64> {
        let mut out = BTreeMap::new();
        for t in self.tensor_terms(x) {
            let parts: Vec<(u8, &TorusElement)> = match &t.cover {
                CoverElement::Double([a, b]) => vec![(0, a), (1, b)],
                CoverElement::Twisted(a) => vec![(0, a)],
            };
            for (fiber, part) in parts {
                for (k, c) in part.terms() {
                    for s in 0..2u8 {
                        let v = t.spinor[s as usize] * c;
                        if v.norm() > 0.0 {
                            *out.entry(TensorKey {
                                spin_index: s,
                                k: k.0.clone(),
                                fiber,
                            })
                            .or_insert(Complex64::new(0.0, 0.0)) += v;
                        }
                    }
                }
            }
        }
        out
    }

    /// Eigenvalues of `D_θ` on the invariant space with `|p| ≤ cutoff`,
    /// aggregated within `tol`, ascending.
    pub fn restricted_spectrum(&self, cutoff: f64, tol: f64) -> Result<Vec<(f64, usize)>> {
        let r = cutoff.ceil() as i64 + 1;
        let mut values = Vec::new();
        for m in box_points(2, r) {
            let m = [m[0], m[1]];
            let p = momentum(&self.spin, m);
            if p[0] * p[0] + p[1] * p[1] > cutoff * cutoff {
                continue;
            }
            let mut block = spectral::Mat2::zeros();
            for s in 0..2 {
                let image = self.dirac(&self.basis_element(m, s))?;
                let col = image.get(m);
                block[(0, s)] = col[0];
                block[(1, s)] = col[1];
            }
            values.extend(spectral::hermitian_eigenvalues(&block));
        }
        values.sort_by(f64::total_cmp);
        let mut grouped: Vec<(f64, usize)> = Vec::new();
        for v in values {
            match grouped.last_mut() {
                Some(last) if (v - last.0).abs() <= tol => last.1 += 1,
                _ => grouped.push((v, 1)),
            }
        }
        Ok(grouped)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct TensorKey {
    spin_index: u8,
    k: Vec<i64>,
    fiber: u8,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BimoduleReport {
    pub spin: Vec<u8>,
    pub theta: f64,
    pub cutoff: i64,
    pub base_mode: Mode,
    pub grades: usize,
    /// Dimension of the invariant space over all grades.
    pub invariant_dim: usize,
    /// Every grade's invariant space is spanned by `e_± ⊗ t(m)`.
    pub partners_span: bool,
    pub left_rank: usize,
    pub right_rank: usize,
    pub free_left: bool,
    pub free_right: bool,
    pub generator_exponent: Vec<i64>,
    pub rank: usize,
}

/// The bimodule, its two generators `e_± ⊗ t(0)` and the freeness report.
#[derive(Debug, Clone)]
pub struct BimoduleBasis {
    pub module: SpinorBimodule,
    pub generators: [SpinorBimoduleElement; 2],
    pub report: BimoduleReport,
}

/// Builds the invariant space grade by grade for `|m_i| ≤ cutoff` and checks
/// that `{e_± ⊗ t(0)}` generates it freely under both module actions.
pub fn spinor_bimodule_basis(spin: &SpinStructure, theta: f64, cutoff: i64) -> Result<BimoduleBasis> {
    let module = SpinorBimodule::new(spin, theta)?;
    let base: Mode = [0, 0];
    let generators = [module.basis_element(base, 0), module.basis_element(base, 1)];

    let mut invariant_dim = 0;
    let mut partners_span = true;
    let (mut left_rank, mut right_rank) = (0, 0);
    let (mut free_left, mut free_right) = (true, true);
    let grades = box_points(2, cutoff);
    for m in &grades {
        let m = [m[0], m[1]];
        let inv = module.invariant_space(m);
        let dim = rank(&inv);
        invariant_dim += dim;

        let partners: Vec<_> = (0..2).map(|s| module.sparse(&module.basis_element(m, s))).collect();
        let both: Vec<_> = inv.iter().chain(&partners).cloned().collect();
        partners_span &= rank(&partners) == dim && rank(&both) == dim;

        let n = vec![m[0] - base[0], m[1] - base[1]];
        let u = TorusElement::monomial(module.base_theta().clone(), n, ONE)?;
        let mut left = Vec::new();
        let mut right = Vec::new();
        for g in &generators {
            left.push(module.sparse(&module.left_action(&u, g)?));
            right.push(module.sparse(&module.right_action(g, &u)?));
        }
        let (rl, rr) = (rank(&left), rank(&right));
        let with_inv = |v: &[BTreeMap<TensorKey, Complex64>]| {
            let all: Vec<_> = inv.iter().chain(v).cloned().collect();
            rank(&all)
        };
        free_left &= rl == 2 && rl == dim && with_inv(&left) == dim;
        free_right &= rr == 2 && rr == dim && with_inv(&right) == dim;
        left_rank += rl;
        right_rank += rr;
    }

    let report = BimoduleReport {
        spin: spin.bits().to_vec(),
        theta,
        cutoff,
        base_mode: base,
        grades: grades.len(),
        invariant_dim,
        partners_span,
        left_rank,
        right_rank,
        free_left,
        free_right,
        generator_exponent: module.partner_exponent(base),
        rank: generators.len(),
    };
    Ok(BimoduleBasis {
        module,
        generators,
        report,
    })
}

/// Compares `D_θ` on the invariant space with [`spectral::spectrum`].
pub fn restricted_spectrum_matches(spin: &SpinStructure, theta: f64, cutoff: f64, tol: f64) -> Result<bool> {
    let module = SpinorBimodule::new(spin, theta)?;
    let restricted = module.restricted_spectrum(cutoff, tol)?;
    let reference = spectral::spectrum(spin, cutoff)?;
    Ok(restricted.len() == reference.entries.len()
        && restricted
            .iter()
            .zip(&reference.entries)
            .all(|(a, b)| a.1 == b.1 && (a.0 - b.0).abs() <= tol))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PuzzleReport {
    pub theta: f64,
    /// Commutation phase of translations for the `T²_{θ/2}` prescription.
    pub prescription_phase: [f64; 2],
    /// Commutation phase for the trivial-double covering algebra.
    pub trivial_double_phase: [f64; 2],
    pub prescription_in_double_group: bool,
    pub double_in_prescription_group: bool,
    pub discrepancy: bool,
}

/// Largest power searched when testing subgroup membership.
const SUBGROUP_SEARCH: i32 = 1000;

/// Whether `c` is within `tol` of some `g^k`, `|k| ≤ SUBGROUP_SEARCH`.
fn in_cyclic_group(c: Complex64, g: Complex64, tol: f64) -> bool {
    (-SUBGROUP_SEARCH..=SUBGROUP_SEARCH).any(|k| (g.powi(k) - c).norm() <= tol)
}

/// `c` with `T_2 T_1 = c T_1 T_2` for right translations by `v_1`, `v_2`,
/// measured on `x`.
fn translation_phase(x: &TorusElement, v1: &TorusElement, v2: &TorusElement) -> Result<Complex64> {
    let t12 = x.star_product(v1)?.star_product(v2)?;
    let t21 = x.star_product(v2)?.star_product(v1)?;
    let (m, c12) = t12.terms().next().map(|(m, c)| (m.clone(), *c)).ok_or(Error::NotInImage)?;
    Ok(t21.coefficient(&m) / c12)
}

/// For `j = (0, 0)`, compares the bimodule built on `T²_{θ/2}` with the one
/// built on the trivial double via the phases by which module translations
/// fail to commute.
pub fn puzzle_report(theta: f64) -> Result<PuzzleReport> {
    let half = ThetaMatrix::from_scalar(theta / 2.0);
    let x = TorusElement::one(half.clone());
    let phase_a = translation_phase(&x, &TorusElement::generator(half.clone(), 0)?, &TorusElement::generator(half, 1)?)?;

    let module = SpinorBimodule::new(&SpinStructure::pair(0, 0)?, theta)?;
    let g = module.basis_element([0, 0], 0);
    let u1 = TorusElement::generator(module.base_theta().clone(), 0)?;
    let u2 = TorusElement::generator(module.base_theta().clone(), 1)?;
    let t12 = module.right_action(&module.right_action(&g, &u1)?, &u2)?;
    let t21 = module.right_action(&module.right_action(&g, &u2)?, &u1)?;
    let phase_b = t21.get([1, 1])[0] / t12.get([1, 1])[0];

    let tol = 1e-9;
    let a_in_b = in_cyclic_group(phase_a, phase_b, tol);
    let b_in_a = in_cyclic_group(phase_b, phase_a, tol);
    Ok(PuzzleReport {
        theta,
        prescription_phase: [phase_a.re, phase_a.im],
        trivial_double_phase: [phase_b.re, phase_b.im],
        prescription_in_double_group: a_in_b,
        double_in_prescription_group: b_in_a,
        discrepancy: !(a_in_b && b_in_a),
    })
}
