//! Complex evaluation of symbolic objects.
//!
//! Every symbol is assigned the value of its square root `w_s` (for `QH` and `HH`
//! this is q^(1/4), ħ^(1/4)). A signed monomial then evaluates as
//! (−1)^phase ∏ w_s^(2e_s) and its square root as e^(iπ·phase/2) ∏ w_s^(e_s),
//! which makes x ↦ x^(1/2) multiplicative on monomials.

use super::expr::Expr;
use super::prod::{Factor, Prod};
use super::symbol::{Mono, SignedMono, Sym};
use crate::error::Error;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use std::collections::BTreeMap;
use std::f64::consts::PI;

#[derive(Clone, Debug, Default)]
pub struct Assignment {
    roots: BTreeMap<Sym, Complex64>,
}

impl Assignment {
    pub fn new() -> Self {
        Assignment::default()
    }

    /// Sets q (a principal fourth root is stored).
    pub fn set_q(&mut self, q: Complex64) -> &mut Self {
        self.roots.insert(Sym::QH, q.powf(0.25));
        self
    }
    pub fn set_hbar(&mut self, h: Complex64) -> &mut Self {
        self.roots.insert(Sym::HH, h.powf(0.25));
        self
    }
    /// Sets a natural-unit symbol from its value (principal square root stored).
    pub fn set(&mut self, s: Sym, v: Complex64) -> &mut Self {
        let r = match s {
            Sym::QH | Sym::HH => v.powf(0.5),
            _ => v.sqrt(),
        };
        self.roots.insert(s, r);
        self
    }
    /// Sets the square root of a symbol directly.
    pub fn set_root(&mut self, s: Sym, r: Complex64) -> &mut Self {
        self.roots.insert(s, r);
        self
    }
    pub fn root(&self, s: Sym) -> Result<Complex64, Error> {
        self.roots.get(&s).copied().ok_or_else(|| Error::UnmappedSymbol(s.to_string()))
    }
    pub fn q(&self) -> Result<Complex64, Error> {
        Ok(self.root(Sym::QH)?.powi(4))
    }
    pub fn hbar(&self) -> Result<Complex64, Error> {
        Ok(self.root(Sym::HH)?.powi(4))
    }
    pub fn value(&self, s: Sym) -> Result<Complex64, Error> {
        Ok(self.root(s)?.powi(2))
    }

    /// Defines `s` homomorphically as the image monomial evaluated in this assignment.
    pub fn define(&mut self, s: Sym, img: &SignedMono) -> Result<&mut Self, Error> {
        let r = self.sqrt_signed(img)?;
        self.roots.insert(s, r);
        Ok(self)
    }

    fn root_pow(&self, m: &Mono) -> Result<Complex64, Error> {
        let mut v = Complex64::new(1.0, 0.0);
        for &(s, e) in m.pairs() {
            v *= self.root(s)?.powi(e);
        }
        Ok(v)
    }

    pub fn mono(&self, m: &Mono) -> Result<Complex64, Error> {
        let mut v = Complex64::new(1.0, 0.0);
        for &(s, e) in m.pairs() {
            v *= self.root(s)?.powi(2 * e);
        }
        Ok(v)
    }
    pub fn signed(&self, y: &SignedMono) -> Result<Complex64, Error> {
        let v = self.mono(&y.m)?;
        Ok(if y.sign() < 0 { -v } else { v })
    }
    pub fn sqrt_signed(&self, y: &SignedMono) -> Result<Complex64, Error> {
        Ok(Complex64::from_polar(1.0, PI * y.phase as f64 / 2.0) * self.root_pow(&y.m)?)
    }
    /// e^(iπ·phase4/2) ∏ w_s^(e_s): the value of a half-unit prefactor.
    pub fn half(&self, phase4: i32, m: &Mono) -> Result<Complex64, Error> {
        Ok(Complex64::from_polar(1.0, PI * phase4 as f64 / 2.0) * self.root_pow(m)?)
    }

    pub fn factor(&self, f: &Factor) -> Result<Complex64, Error> {
        let p = f.expand();
        let mut v = Complex64::new(0.0, 0.0);
        for (m, c) in p.terms() {
            v += self.mono(m)? * c.to_f64().unwrap_or(f64::NAN);
        }
        Ok(v)
    }

    pub fn prod(&self, p: &Prod) -> Result<Complex64, Error> {
        if p.is_zero() {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let mut v = self.mono(&p.m)? * p.c.to_f64().unwrap_or(f64::NAN);
        for (k, &e) in &p.f {
            let x = self.factor(k)?;
            if e < 0 && x.norm() < 1e-300 {
                return Err(Error::SingularFactor(format!("factor vanishes at the evaluation point: {:?}", k)));
            }
            v *= x.powi(e);
        }
        Ok(v)
    }

    pub fn expr(&self, e: &Expr) -> Result<Complex64, Error> {
        let mut v = Complex64::new(0.0, 0.0);
        for t in e.terms() {
            v += self.prod(t)?;
        }
        Ok(v)
    }
}

/// φ(x) = ∏_{l<n}(1 − q^l x).
pub fn phi_truncated(x: Complex64, q: Complex64, n: usize) -> Complex64 {
    let mut v = Complex64::new(1.0, 0.0);
    let mut ql = Complex64::new(1.0, 0.0);
    for _ in 0..n {
        v *= Complex64::new(1.0, 0.0) - ql * x;
        ql *= q;
    }
    v
}

/// Bound on the relative truncation error of `phi_truncated`.
pub fn phi_tail(x: Complex64, q: Complex64, n: usize) -> f64 {
    let r = q.norm();
    if r >= 1.0 {
        return f64::INFINITY;
    }
    let t = x.norm() * r.powi(n as i32) / (1.0 - r);
    t.exp_m1().abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_roots_are_multiplicative() {
        let mut a = Assignment::new();
        a.set(Sym::A(0), Complex64::new(-0.3, 0.4)).set_hbar(Complex64::new(0.5, 0.1));
        let x = SignedMono::new(1, Mono::from_pairs([(Sym::A(0), 1), (Sym::HH, -1)]));
        let y = SignedMono::new(0, Mono::from_pairs([(Sym::A(0), -3)]));
        let lhs = a.sqrt_signed(&x.mul(&y)).unwrap();
        let rhs = a.sqrt_signed(&x).unwrap() * a.sqrt_signed(&y).unwrap();
        assert!((lhs - rhs).norm() < 1e-12);
        let s = a.sqrt_signed(&x).unwrap();
        assert!((s * s - a.signed(&x).unwrap()).norm() < 1e-12);
    }
}
