//! Products of theta functions ϑ(x) = x^(1/2) φ(x^-1) φ(qx) and φ-factors,
//! with a half-unit monomial prefactor and a rational factor.

use super::numeric::{phi_tail, phi_truncated, Assignment};
use super::poly::subst_signed;
use super::prod::Prod;
use super::symbol::{Mono, SignedMono, Sym};
use crate::error::Error;
use crate::qseries::pochhammer;
use num_complex::Complex64;
use num_traits::Signed;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum ThetaState {
    Normal,
    Zero,
    Singular,
}

#[derive(Clone, Debug)]
pub struct ThetaExpr {
    pub state: ThetaState,
    /// Prefactor phase in quarter turns: the factor e^(iπ·phase4/2).
    pub phase4: i32,
    /// Prefactor monomial in square-root units: exponent e means w_s^e.
    pub half: Mono,
    pub rat: Prod,
    pub theta: BTreeMap<SignedMono, i32>,
    pub phi: BTreeMap<SignedMono, i32>,
}

impl Default for ThetaExpr {
    fn default() -> Self {
        ThetaExpr::one()
    }
}

fn bump(map: &mut BTreeMap<SignedMono, i32>, k: SignedMono, n: i32) {
    if n == 0 {
        return;
    }
    let e = map.entry(k.clone()).or_insert(0);
    *e += n;
    if *e == 0 {
        map.remove(&k);
    }
}

impl ThetaExpr {
    pub fn one() -> Self {
        ThetaExpr { state: ThetaState::Normal, phase4: 0, half: Mono::one(), rat: Prod::one(), theta: BTreeMap::new(), phi: BTreeMap::new() }
    }
    pub fn zero() -> Self {
        ThetaExpr { state: ThetaState::Zero, rat: Prod::zero(), ..ThetaExpr::one() }
    }
    pub fn theta(y: &SignedMono) -> Self {
        let mut t = ThetaExpr::one();
        t.theta.insert(y.clone(), 1);
        t
    }
    pub fn phi(y: &SignedMono) -> Self {
        let mut t = ThetaExpr::one();
        t.phi.insert(y.clone(), 1);
        t
    }
    pub fn from_prod(p: Prod) -> Self {
        let mut t = ThetaExpr::one();
        if p.is_zero() {
            return ThetaExpr::zero();
        }
        t.rat = p;
        t
    }
    pub fn monomial(y: &SignedMono) -> Self {
        ThetaExpr { phase4: 2 * y.phase, half: y.m.pow(2), ..ThetaExpr::one() }
    }
    /// y^(1/2) with the homomorphic square root.
    pub fn sqrt_monomial(y: &SignedMono) -> Self {
        ThetaExpr { phase4: y.phase, half: y.m.clone(), ..ThetaExpr::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.state == ThetaState::Zero
    }
    pub fn is_singular(&self) -> bool {
        self.state == ThetaState::Singular
    }

    pub fn mul(&self, o: &ThetaExpr) -> ThetaExpr {
        let state = match (self.state, o.state) {
            (ThetaState::Singular, _) | (_, ThetaState::Singular) => ThetaState::Singular,
            (ThetaState::Zero, _) | (_, ThetaState::Zero) => ThetaState::Zero,
            _ => ThetaState::Normal,
        };
        let mut r = ThetaExpr {
            state,
            phase4: self.phase4 + o.phase4,
            half: self.half.mul(&o.half),
            rat: self.rat.mul(&o.rat),
            theta: self.theta.clone(),
            phi: self.phi.clone(),
        };
        for (k, n) in &o.theta {
            bump(&mut r.theta, k.clone(), *n);
        }
        for (k, n) in &o.phi {
            bump(&mut r.phi, k.clone(), *n);
        }
        r
    }

    pub fn pow(&self, e: i32) -> Result<ThetaExpr, Error> {
        let state = match self.state {
            ThetaState::Zero if e < 0 => ThetaState::Singular,
            ThetaState::Singular if e < 0 => ThetaState::Zero,
            s => s,
        };
        let rat = if self.rat.is_zero() { Prod::zero() } else { self.rat.pow(e)? };
        Ok(ThetaExpr {
            state: if e == 0 { ThetaState::Normal } else { state },
            phase4: self.phase4 * e,
            half: self.half.pow(e),
            rat,
            theta: self.theta.iter().map(|(k, n)| (k.clone(), n * e)).filter(|x| x.1 != 0).collect(),
            phi: self.phi.iter().map(|(k, n)| (k.clone(), n * e)).filter(|x| x.1 != 0).collect(),
        })
    }

    pub fn inv(&self) -> Result<ThetaExpr, Error> {
        self.pow(-1)
    }
    pub fn div(&self, o: &ThetaExpr) -> Result<ThetaExpr, Error> {
        // a zero divisor with a zero-free representation is still a division by zero
        if o.state == ThetaState::Zero && o.rat.is_zero() {
            let mut r = self.clone();
            r.state = ThetaState::Singular;
            return Ok(r);
        }
        Ok(self.mul(&o.inv()?))
    }

    /// Applies the functional equations until every argument is in normal form.
    pub fn canonicalize(&self) -> ThetaExpr {
        if self.state == ThetaState::Zero || self.rat.is_zero() {
            return ThetaExpr::zero();
        }
        let mut out = ThetaExpr { state: self.state, phase4: self.phase4, half: self.half.mul(&self.rat.m.pow(2)), rat: self.rat.clone(), theta: BTreeMap::new(), phi: BTreeMap::new() };
        out.rat.m = Mono::one();
        for (y, &n) in &self.theta {
            let (p4, h, arg) = canonical_theta_arg(y);
            out.phase4 += p4 * n;
            out.half = out.half.mul(&h.pow(n));
            bump(&mut out.theta, arg, n);
        }
        for (y, &n) in &self.phi {
            let (r, arg) = canonical_phi_arg(y);
            out.rat = out.rat.mul(&r.pow(n).expect("nonzero shift factor"));
            bump(&mut out.phi, arg, n);
        }
        let one = SignedMono::one();
        let t1 = out.theta.get(&one).copied().unwrap_or(0);
        let p1 = out.phi.get(&one).copied().unwrap_or(0);
        if t1 != 0 && p1 != 0 {
            // ϑ(1) = φ(q)·φ(1)
            out.theta.remove(&one);
            bump(&mut out.phi, one.clone(), t1);
            bump(&mut out.phi, SignedMono::plain(Mono::q(2)), t1);
        }
        let net = t1 + p1;
        if out.state == ThetaState::Normal {
            if net > 0 {
                return ThetaExpr::zero();
            }
            if net < 0 {
                out.state = ThetaState::Singular;
            }
        }
        // rational part: move the sign into the quarter-turn phase when possible
        if out.rat.c.is_negative() {
            out.rat.c = -out.rat.c.clone();
            out.phase4 += 2;
        }
        out.phase4 = out.phase4.rem_euclid(4);
        if out.phase4 >= 2 {
            out.phase4 -= 2;
            out.rat.c = -out.rat.c.clone();
        }
        out
    }

    /// Rewrites each ϑ(y) as y^(1/2) φ(qy) φ(y^-1) and canonicalizes.
    pub fn to_phi_form(&self) -> ThetaExpr {
        let mut out = ThetaExpr { theta: BTreeMap::new(), ..self.clone() };
        for (y, &n) in &self.theta {
            out.phase4 += y.phase * n;
            out.half = out.half.mul(&y.m.pow(n));
            bump(&mut out.phi, y.mul(&SignedMono::plain(Mono::q(2))), n);
            bump(&mut out.phi, y.inv(), n);
        }
        out.canonicalize()
    }

    /// Structural equality of canonical forms (φ-forms when φ-factors are present).
    pub fn same(&self, o: &ThetaExpr) -> bool {
        let (mut a, mut b) = (self.canonicalize(), o.canonicalize());
        if a.state != b.state {
            return false;
        }
        if a.state == ThetaState::Zero {
            return true;
        }
        if !a.phi.is_empty() || !b.phi.is_empty() {
            a = a.to_phi_form();
            b = b.to_phi_form();
        }
        a.phase4 == b.phase4 && a.half == b.half && a.theta == b.theta && a.phi == b.phi && {
            let r = a.rat.div(&b.rat).map(|x| super::Expr::from_prod(x).sub(&super::Expr::one()).is_zero());
            r.unwrap_or(false)
        }
    }

    pub fn subst(&self, f: &dyn Fn(Sym) -> Option<SignedMono>) -> Result<ThetaExpr, Error> {
        if self.state == ThetaState::Zero {
            return Ok(ThetaExpr::zero());
        }
        let mut out = ThetaExpr { state: self.state, phase4: self.phase4, half: Mono::one(), rat: self.rat.subst(f)?, theta: BTreeMap::new(), phi: BTreeMap::new() };
        for &(s, k) in self.half.pairs() {
            match f(s) {
                Some(img) => {
                    out.phase4 += img.phase * k;
                    out.half = out.half.mul(&img.m.pow(k));
                }
                None => out.half = out.half.mul(&Mono::var(s, k)),
            }
        }
        for (y, &n) in &self.theta {
            bump(&mut out.theta, subst_signed(y, f), n);
        }
        for (y, &n) in &self.phi {
            bump(&mut out.phi, subst_signed(y, f), n);
        }
        Ok(out.canonicalize())
    }

    /// Numeric value with products truncated at q^n, together with a relative tail bound.
    pub fn eval(&self, a: &Assignment, n: usize) -> Result<(Complex64, f64), Error> {
        match self.state {
            ThetaState::Zero => return Ok((Complex64::new(0.0, 0.0), 0.0)),
            ThetaState::Singular => return Err(Error::SingularFactor(format!("singular theta expression {}", self))),
            ThetaState::Normal => {}
        }
        let q = a.q()?;
        let mut v = a.half(self.phase4, &self.half)? * a.prod(&self.rat)?;
        let mut tail = 0.0;
        for (y, &k) in &self.theta {
            let x = a.signed(y)?;
            let t = a.sqrt_signed(y)? * phi_truncated(x.inv(), q, n) * phi_truncated(q * x, q, n);
            if t.norm() < 1e-300 {
                if k < 0 {
                    return Err(Error::SingularFactor(format!("theta({}) vanishes", y)));
                }
                return Ok((Complex64::new(0.0, 0.0), 0.0));
            }
            tail += k.unsigned_abs() as f64 * (phi_tail(x.inv(), q, n) + phi_tail(q * x, q, n));
            v *= t.powi(k);
        }
        for (y, &k) in &self.phi {
            let x = a.signed(y)?;
            let t = phi_truncated(x, q, n);
            if t.norm() < 1e-300 {
                if k < 0 {
                    return Err(Error::SingularFactor(format!("phi({}) vanishes", y)));
                }
                return Ok((Complex64::new(0.0, 0.0), 0.0));
            }
            tail += k.unsigned_abs() as f64 * phi_tail(x, q, n);
            v *= t.powi(k);
        }
        Ok((v, tail))
    }

    /// Arguments containing ϑ(1) or φ(1) would be flagged by the state; this lists unit-like arguments.
    pub fn has_unit_argument(&self) -> bool {
        let one = SignedMono::one();
        self.theta.contains_key(&one) || self.phi.contains_key(&one)
    }
}

/// ϑ(y) = e^(iπ·p4/2)·w^h·ϑ(arg) with arg in normal form.
pub fn canonical_theta_arg(y: &SignedMono) -> (i32, Mono, SignedMono) {
    let mut p4 = 0;
    let mut half = Mono::one();
    let mut y = y.clone();
    if y.m.without(Sym::QH).lex_sign() < 0 {
        y = y.inv();
        p4 += 2;
    }
    let e = y.m.exp(Sym::QH);
    let j = e.div_euclid(2);
    let y0 = SignedMono::new(y.phase, y.m.mul(&Mono::q(-2 * j)));
    if j != 0 {
        // ϑ(q^j y0) = (−1)^j q^(−j²/2) y0^(−j) ϑ(y0)
        let pre = SignedMono::new(j, Mono::q(-j * j)).mul(&y0.pow(-j));
        p4 += 2 * pre.phase;
        half = half.mul(&pre.m.pow(2));
    }
    let l = y0.phase.div_euclid(2);
    p4 += 2 * l;
    (p4, half, SignedMono::new(y0.phase.rem_euclid(2), y0.m))
}

/// φ(y) = R·φ(arg) with arg in normal form.
pub fn canonical_phi_arg(y: &SignedMono) -> (Prod, SignedMono) {
    let y = SignedMono::new(y.phase.rem_euclid(2), y.m.clone());
    let e = y.m.exp(Sym::QH);
    let j = e.div_euclid(2);
    let y0 = SignedMono::new(y.phase, y.m.mul(&Mono::q(-2 * j)));
    if y0.is_one() {
        return if j >= 1 {
            let q = SignedMono::plain(Mono::q(2));
            (pochhammer(&q, j - 1).inv().expect("(q)_n is nonzero"), q)
        } else {
            let qj = SignedMono::plain(Mono::q(2 * j));
            (pochhammer(&qj, -j), SignedMono::one())
        };
    }
    (pochhammer(&y0, j).inv().expect("shift factors are nonzero off unit arguments"), y0)
}

impl fmt::Display for ThetaExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.state {
            ThetaState::Zero => return write!(f, "0"),
            ThetaState::Singular => write!(f, "SINGULAR ")?,
            ThetaState::Normal => {}
        }
        let mut num: Vec<String> = Vec::new();
        let mut den: Vec<String> = Vec::new();
        let mut head = String::new();
        let p4 = self.phase4.rem_euclid(4);
        let mut c = self.rat.c.clone();
        if p4 >= 2 {
            c = -c;
        }
        if c.is_negative() {
            head.push('-');
        }
        if p4 % 2 == 1 {
            num.push("i".into());
        }
        let c = c.abs();
        if !num_traits::One::is_one(c.numer()) {
            num.push(c.numer().to_string());
        }
        if !num_traits::One::is_one(c.denom()) {
            den.push(c.denom().to_string());
        }
        let m = self.half.mul(&self.rat.m.pow(2));
        let pos = Mono::from_pairs(m.pairs().iter().copied().filter(|p| p.1 > 0));
        let neg = Mono::from_pairs(m.pairs().iter().filter(|p| p.1 < 0).map(|p| (p.0, -p.1)));
        for (mono, list) in [(pos, &mut num), (neg, &mut den)] {
            if mono.is_one() {
                continue;
            }
            if mono.pairs().iter().all(|p| p.1 % 2 == 0) {
                list.push(mono.root(2).to_string());
            } else {
                list.push(format!("sqrt({})", mono));
            }
        }
        let rf = Prod { c: num_traits::One::one(), m: Mono::one(), f: self.rat.f.clone() };
        if !rf.f.is_empty() {
            let nf = rf.numerator_factors();
            let df = rf.denominator_factors();
            if !nf.f.is_empty() {
                num.push(nf.to_string());
            }
            if !df.f.is_empty() {
                den.push(df.to_string());
            }
        }
        for (name, map) in [("theta", &self.theta), ("phi", &self.phi)] {
            for (y, &n) in map {
                let s = format!("{}({})", name, y);
                let s = if n.abs() == 1 { s } else { format!("{}^{}", s, n.abs()) };
                if n > 0 {
                    num.push(s);
                } else {
                    den.push(s);
                }
            }
        }
        let numer = if num.is_empty() { "1".to_string() } else { num.join("*") };
        match den.len() {
            0 => write!(f, "{}{}", head, numer),
            1 => write!(f, "{}{}/{}", head, numer, den[0]),
            _ => write!(f, "{}{}/({})", head, numer, den.join("*")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a1() -> SignedMono {
        SignedMono::plain(Mono::var(Sym::A(0), 1))
    }

    #[test]
    fn quasi_periodicity() {
        // ϑ(q a) = −q^(−1/2) a^(−1) ϑ(a)
        let lhs = ThetaExpr::theta(&a1().mul(&SignedMono::plain(Mono::q(2)))).canonicalize();
        let rhs = ThetaExpr::monomial(&SignedMono::new(1, Mono::from_pairs([(Sym::QH, -1), (Sym::A(0), -1)]))).mul(&ThetaExpr::theta(&a1()));
        assert!(lhs.same(&rhs));
        let inv = ThetaExpr::theta(&a1().inv()).canonicalize();
        assert!(inv.same(&ThetaExpr::monomial(&SignedMono::minus_one()).mul(&ThetaExpr::theta(&a1()))));
    }

    #[test]
    fn zero_and_singular() {
        let t = ThetaExpr::theta(&SignedMono::one()).canonicalize();
        assert!(t.is_zero());
        let s = ThetaExpr::one().div(&ThetaExpr::theta(&SignedMono::one())).unwrap().canonicalize();
        assert!(s.is_singular());
        let c = ThetaExpr::theta(&a1()).div(&ThetaExpr::theta(&a1())).unwrap().canonicalize();
        assert!(c.theta.is_empty() && c.same(&ThetaExpr::one()));
    }

    #[test]
    fn phi_form_matches_theta() {
        let t = ThetaExpr::theta(&a1());
        assert!(t.same(&t.to_phi_form()));
        let mut asg = Assignment::new();
        asg.set_q(Complex64::new(0.3, 0.0)).set(Sym::A(0), Complex64::new(1.7, 0.2));
        let (v1, _) = t.canonicalize().eval(&asg, 40).unwrap();
        let (v2, _) = t.to_phi_form().eval(&asg, 40).unwrap();
        assert!((v1 - v2).norm() < 1e-12 * v1.norm());
    }
}
