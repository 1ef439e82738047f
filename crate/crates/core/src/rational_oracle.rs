//! Clock-and-shift representation of `T²_θ` for rational `θ = p/q`.
//!
//! `U = diag(1, ω, …, ω^{q-1})` and `V e_k = e_{k-1 mod q}` with
//! `ω = e^{2πi p/q}` satisfy `V U = ω U V`, the same relation as
//! `u_2 ⋆ u_1 = λ u_1 ⋆ u_2` in [`crate::nc_torus`]. Matrices for `u^m` are
//! written down entrywise, never through the star product, so the map
//! `u^{(m_1, m_2)} ↦ U^{m_1} V^{m_2}` is an independent check of it.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::nc_torus::{turn_phase, ThetaMatrix, TorusElement};

pub type CMatrix = DMatrix<Complex64>;

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Reduced fraction `p/q`, `q ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RationalTheta {
    p: i64,
    q: u64,
}

impl RationalTheta {
    pub fn new(p: i64, q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::ZeroDenominator);
        }
        let g = gcd(p.unsigned_abs(), q).max(1);
        Ok(Self {
            p: p / g as i64,
            q: q / g,
        })
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn value(&self) -> f64 {
        self.p as f64 / self.q as f64
    }

    /// The `N = 2` deformation matrix with `θ_{21} = p/q`.
    pub fn theta(&self) -> ThetaMatrix {
        ThetaMatrix::from_scalar(self.value())
    }

    /// `ω^k`, reduced modulo `q` before exponentiating.
    fn root_power(&self, k: i64) -> Complex64 {
        let q = self.q as i64;
        let r = (self.p.rem_euclid(q) * k.rem_euclid(q)).rem_euclid(q);
        turn_phase(r as f64 / q as f64)
    }
}

/// The pair `(U, V)` acting on `C^q`.
#[derive(Debug, Clone)]
pub struct FiniteRep {
    theta: RationalTheta,
    pub u: CMatrix,
    pub v: CMatrix,
}

pub fn build_rep(t: RationalTheta) -> FiniteRep {
    FiniteRep {
        theta: t,
        u: clock_shift(t, 1, 0),
        v: clock_shift(t, 0, 1),
    }
}

/// `U^{m1} V^{m2}` entrywise: row `i` has `ω^{i m1}` in column `i + m2 mod q`.
fn clock_shift(t: RationalTheta, m1: i64, m2: i64) -> CMatrix {
    let q = t.q as usize;
    let mut out = CMatrix::zeros(q, q);
    for i in 0..q {
        let col = (i as i64 + m2).rem_euclid(q as i64) as usize;
        out[(i, col)] = t.root_power(i as i64 * m1);
    }
    out
}

impl FiniteRep {
    pub fn dim(&self) -> usize {
        self.theta.q as usize
    }

    pub fn rational(&self) -> RationalTheta {
        self.theta
    }

    /// `u^m ↦ U^{m1} V^{m2}` extended linearly.
    pub fn represent(&self, a: &TorusElement) -> Result<CMatrix> {
        if a.dim() != 2 {
            return Err(Error::RequiresRankTwo(a.dim()));
        }
        if *a.theta() != self.theta.theta() {
            return Err(Error::ThetaMismatch);
        }
        let q = self.dim();
        let mut out = CMatrix::zeros(q, q);
        for (m, c) in a.terms() {
            out += clock_shift(self.theta, m.0[0], m.0[1]) * *c;
        }
        Ok(out)
    }

    /// Normalised trace `tr(X)/q`.
    pub fn normalized_trace(&self, x: &CMatrix) -> Complex64 {
        x.trace() / self.dim() as f64
    }
}

/// Frobenius norm of `a - b`.
pub fn frobenius_residual(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn reduces_fraction() {
        let t = RationalTheta::new(6, 8).unwrap();
        assert_eq!((t.p(), t.q()), (3, 4));
        let t = RationalTheta::new(-2, 4).unwrap();
        assert_eq!((t.p(), t.q()), (-1, 2));
        let t = RationalTheta::new(0, 5).unwrap();
        assert_eq!((t.p(), t.q()), (0, 1));
        assert_eq!(RationalTheta::new(1, 0).unwrap_err(), Error::ZeroDenominator);
    }

    #[test]
    fn trivial_rep() {
        let rep = build_rep(RationalTheta::new(0, 1).unwrap());
        assert_eq!(rep.u, CMatrix::from_element(1, 1, c(1.0, 0.0)));
        assert_eq!(rep.v, CMatrix::from_element(1, 1, c(1.0, 0.0)));
    }

    #[test]
    fn half_rep_matches_hand_computation() {
        let rep = build_rep(RationalTheta::new(1, 2).unwrap());
        let u = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]);
        let v = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        assert!(frobenius_residual(&rep.u, &u) < 1e-15);
        assert!(frobenius_residual(&rep.v, &v) < 1e-15);
        let vu = &rep.v * &rep.u;
        let uv = &rep.u * &rep.v;
        assert!(frobenius_residual(&vu, &(uv * c(-1.0, 0.0))) < 1e-15);
    }

    #[test]
    fn relations_hold_for_several_q() {
        for (p, q) in [(1, 4), (1, 3), (2, 5), (5, 12), (-3, 7)] {
            let t = RationalTheta::new(p, q).unwrap();
            let rep = build_rep(t);
            let omega = turn_phase(t.value());
            let lhs = &rep.v * &rep.u;
            let rhs = &rep.u * &rep.v * omega;
            assert!(frobenius_residual(&lhs, &rhs) < 1e-12, "p/q = {p}/{q}");
            let id = CMatrix::identity(q as usize, q as usize);
            assert!(frobenius_residual(&(&rep.u * rep.u.adjoint()), &id) < 1e-12);
            assert!(frobenius_residual(&(&rep.v * rep.v.adjoint()), &id) < 1e-12);
            let uq = (0..q).fold(id.clone(), |acc, _| acc * &rep.u);
            let vq = (0..q).fold(id.clone(), |acc, _| acc * &rep.v);
            assert!(frobenius_residual(&uq, &id) < 1e-12);
            assert!(frobenius_residual(&vq, &id) < 1e-12);
        }
        let rep = build_rep(RationalTheta::new(1, 4).unwrap());
        let lhs = &rep.v * &rep.u;
        let rhs = &rep.u * &rep.v * c(0.0, 1.0);
        assert!(frobenius_residual(&lhs, &rhs) < 1e-15);
    }

    #[test]
    fn identity_and_mismatch() {
        let t = RationalTheta::new(1, 3).unwrap();
        let rep = build_rep(t);
        let one = TorusElement::one(t.theta());
        assert!(frobenius_residual(&rep.represent(&one).unwrap(), &CMatrix::identity(3, 3)) < 1e-15);
        let other = TorusElement::one(ThetaMatrix::from_scalar(0.3));
        assert_eq!(rep.represent(&other).unwrap_err(), Error::ThetaMismatch);
    }

    #[test]
    fn canonical_trace_matches_normalized_matrix_trace() {
        let t = RationalTheta::new(2, 5).unwrap();
        let rep = build_rep(t);
        for m1 in -9..=9i64 {
            for m2 in -9..=9i64 {
                let a = TorusElement::monomial(t.theta(), vec![m1, m2], c(1.0, 0.0)).unwrap();
                let tr = rep.normalized_trace(&rep.represent(&a).unwrap());
                let expected = if m1 % 5 == 0 && m2 % 5 == 0 { 1.0 } else { 0.0 };
                assert!((tr - c(expected, 0.0)).norm() < 1e-12, "m = ({m1},{m2})");
                if m1.abs() < 5 && m2.abs() < 5 {
                    assert!((tr - a.trace()).norm() < 1e-12);
                }
            }
        }
    }
}
