//! Factored rational functions: c · monomial · ∏ factor^e.
//!
//! A binomial 1 ± m is always stored through its cyclotomic factorization, so a
//! product built only from binomials has a unique representation.

use super::poly::{cyclo_int, divisors, moebius, rat, subst_signed, Poly};
use super::symbol::{Mono, SignedMono, Sym};
use crate::error::Error;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Factor {
    /// Φ_d(t) for a primitive, lex-positive monomial t; Φ_1(t) = 1 − t.
    Cyc(Mono, u32),
    /// A normalized polynomial that is not a binomial.
    Gen(Poly),
}

pub fn euler_phi(d: u32) -> i32 {
    (1..=d).filter(|k| num_integer::gcd(*k, d) == 1).count() as i32
}

impl Factor {
    pub fn expand(&self) -> Poly {
        match self {
            Factor::Cyc(t, d) => {
                let mut p = Poly::zero();
                for (k, c) in cyclo_int(*d).into_iter().enumerate() {
                    p = p.add(&Poly::term(rat(c), t.pow(k as i32)));
                }
                p
            }
            Factor::Gen(p) => p.clone(),
        }
    }

    /// (lowest, highest) exponent of QH in the factor.
    pub fn q_range(&self) -> (i32, i32) {
        match self {
            Factor::Cyc(t, d) => {
                let s = t.exp(Sym::QH) * euler_phi(*d);
                (s.min(0), s.max(0))
            }
            Factor::Gen(p) => {
                let (lo, hi) = p.degree_range(Sym::QH);
                (lo, hi)
            }
        }
    }

    pub fn symbols(&self) -> Vec<Sym> {
        match self {
            Factor::Cyc(t, _) => t.symbols().collect(),
            Factor::Gen(p) => p.symbols().into_iter().collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prod {
    pub c: BigRational,
    pub m: Mono,
    pub f: BTreeMap<Factor, i32>,
}

impl Default for Prod {
    fn default() -> Self {
        Prod::one()
    }
}

impl Prod {
    pub fn zero() -> Self {
        Prod { c: BigRational::zero(), m: Mono::one(), f: BTreeMap::new() }
    }
    pub fn one() -> Self {
        Prod::constant(BigRational::one())
    }
    pub fn int(n: i64) -> Self {
        Prod::constant(rat(n))
    }
    pub fn constant(c: BigRational) -> Self {
        Prod::monomial(c, Mono::one())
    }
    pub fn monomial(c: BigRational, m: Mono) -> Self {
        if c.is_zero() {
            return Prod::zero();
        }
        Prod { c, m, f: BTreeMap::new() }
    }
    pub fn mono(m: Mono) -> Self {
        Prod::monomial(BigRational::one(), m)
    }
    pub fn signed(y: &SignedMono) -> Self {
        Prod::monomial(rat(y.sign() as i64), y.m.clone())
    }
    pub fn var(s: Sym) -> Self {
        Prod::mono(Mono::var(s, 1))
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_zero()
    }
    pub fn is_monomial(&self) -> bool {
        self.f.is_empty()
    }

    /// 1 − y.
    pub fn one_minus(y: &SignedMono) -> Self {
        let s = y.sign();
        let mut m = y.m.clone();
        if m.is_one() {
            return Prod::int(1 - s as i64);
        }
        let mut out = Prod::one();
        if m.lex_sign() < 0 {
            // 1 − s m = −s m (1 − s m^{-1})
            out = Prod::monomial(rat(-s as i64), m.clone());
            m = m.inv();
        }
        let g = m.content() as u32;
        let t = m.root(g as i32);
        let ds: Vec<u32> = if s > 0 {
            divisors(g)
        } else {
            divisors(2 * g).into_iter().filter(|d| !g.is_multiple_of(*d)).collect()
        };
        for d in ds {
            *out.f.entry(Factor::Cyc(t.clone(), d)).or_insert(0) += 1;
        }
        out
    }

    /// 1 − c·y for a rational c.
    pub fn one_minus_scaled(c: &BigRational, y: &Mono) -> Self {
        if c.is_zero() {
            return Prod::one();
        }
        if c.abs().is_one() {
            let phase = if c.is_negative() { 1 } else { 0 };
            return Prod::one_minus(&SignedMono::new(phase, y.clone()));
        }
        Prod::from_poly(&Poly::one().sub(&Poly::term(c.clone(), y.clone())))
    }

    pub fn from_poly(p: &Poly) -> Self {
        if p.is_zero() {
            return Prod::zero();
        }
        let low = p.min_mono();
        let q = p.mul_mono(&low.inv());
        let terms: Vec<(Mono, BigRational)> = q.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
        match terms.len() {
            1 => Prod::monomial(terms[0].1.clone(), low.mul(&terms[0].0)),
            2 if terms[0].1.abs() == terms[1].1.abs() => {
                let (m1, c1) = &terms[0];
                let (m2, c2) = &terms[1];
                let phase = if c1 == c2 { 1 } else { 0 };
                let y = SignedMono::new(phase, m2.div(m1));
                Prod::monomial(c1.clone(), low.mul(m1)).mul(&Prod::one_minus(&y))
            }
            _ => {
                let lc = q.leading().unwrap().1.clone();
                let g = q.scale(&lc.recip());
                let mut f = BTreeMap::new();
                f.insert(Factor::Gen(g), 1);
                Prod { c: lc, m: low, f }
            }
        }
    }

    pub fn mul(&self, o: &Prod) -> Prod {
        if self.is_zero() || o.is_zero() {
            return Prod::zero();
        }
        let mut f = self.f.clone();
        for (k, e) in &o.f {
            let x = f.entry(k.clone()).or_insert(0);
            *x += e;
            if *x == 0 {
                f.remove(k);
            }
        }
        Prod { c: &self.c * &o.c, m: self.m.mul(&o.m), f }
    }

    pub fn pow(&self, e: i32) -> Result<Prod, Error> {
        if e == 0 {
            return Ok(Prod::one());
        }
        if self.is_zero() {
            return if e > 0 { Ok(Prod::zero()) } else { Err(Error::SingularFactor("division by zero".into())) };
        }
        let c = if e > 0 {
            num_traits::pow(self.c.clone(), e as usize)
        } else {
            num_traits::pow(self.c.recip(), (-e) as usize)
        };
        Ok(Prod { c, m: self.m.pow(e), f: self.f.iter().map(|(k, x)| (k.clone(), x * e)).collect() })
    }

    pub fn inv(&self) -> Result<Prod, Error> {
        self.pow(-1)
    }

    pub fn div(&self, o: &Prod) -> Result<Prod, Error> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn neg(&self) -> Prod {
        Prod { c: -&self.c, m: self.m.clone(), f: self.f.clone() }
    }

    pub fn scale(&self, c: &BigRational) -> Prod {
        self.mul(&Prod::constant(c.clone()))
    }

    pub fn mul_mono(&self, m: &Mono) -> Prod {
        if self.is_zero() {
            return Prod::zero();
        }
        Prod { c: self.c.clone(), m: self.m.mul(m), f: self.f.clone() }
    }

    /// Expansion of a product whose factor exponents are all nonnegative.
    pub fn expand(&self) -> Poly {
        let mut p = Poly::term(self.c.clone(), self.m.clone());
        for (k, &e) in &self.f {
            assert!(e >= 0, "expand of a denominator factor");
            p = p.mul(&k.expand().pow(e as u32));
        }
        p
    }

    /// Numerator part (factors with positive exponent, no monomial or constant).
    pub fn numerator_factors(&self) -> Prod {
        Prod { c: BigRational::one(), m: Mono::one(), f: self.f.iter().filter(|x| *x.1 > 0).map(|(k, e)| (k.clone(), *e)).collect() }
    }
    pub fn denominator_factors(&self) -> Prod {
        Prod { c: BigRational::one(), m: Mono::one(), f: self.f.iter().filter(|x| *x.1 < 0).map(|(k, e)| (k.clone(), -*e)).collect() }
    }

    /// Substitution of symbols by signed monomials.
    pub fn subst(&self, g: &dyn Fn(Sym) -> Option<SignedMono>) -> Result<Prod, Error> {
        if self.is_zero() {
            return Ok(Prod::zero());
        }
        let img = subst_signed(&SignedMono::plain(self.m.clone()), g);
        let mut out = Prod::monomial(self.c.clone(), Mono::one()).mul(&Prod::signed(&img));
        for (k, &e) in &self.f {
            let fk = match k {
                Factor::Cyc(t, d) => {
                    let y = subst_signed(&SignedMono::plain(t.clone()), g);
                    cyclo_at(&y, *d)
                }
                Factor::Gen(p) => Prod::from_poly(&p.subst(g)),
            };
            if fk.is_zero() {
                if e > 0 {
                    return Ok(Prod::zero());
                }
                return Err(Error::SingularFactor(format!("{} vanishes after substitution", FactorDisplay(k))));
            }
            out = out.mul(&fk.pow(e)?);
        }
        Ok(out)
    }

    /// Renames symbols.
    pub fn map_syms(&self, g: impl Fn(Sym) -> Sym + Copy) -> Prod {
        let sub = move |s: Sym| Some(SignedMono::plain(Mono::var(g(s), 1)));
        self.subst(&sub).expect("renaming cannot create zeros")
    }

    pub fn symbols(&self) -> Vec<Sym> {
        let mut v: Vec<Sym> = self.m.symbols().collect();
        for k in self.f.keys() {
            v.extend(k.symbols());
        }
        v.sort();
        v.dedup();
        v
    }

    /// (order, degree) of the Laurent expansion in q^{1/2}, counted in half units.
    pub fn q_order(&self) -> (i32, i32) {
        let base = self.m.exp(Sym::QH);
        let (mut lo, mut hi) = (base, base);
        for (k, &e) in &self.f {
            let (a, b) = k.q_range();
            lo += e * a;
            hi += e * b;
        }
        (lo, hi)
    }
}

/// Φ_d(y) for a signed monomial y, as a product.
pub fn cyclo_at(y: &SignedMono, d: u32) -> Prod {
    if y.m.is_one() {
        let x: i64 = y.sign() as i64;
        let v: i64 = cyclo_int(d).iter().enumerate().map(|(k, c)| c * x.pow(k as u32)).sum();
        return Prod::int(v);
    }
    if d == 1 {
        return Prod::one_minus(y);
    }
    let mut out = Prod::one();
    for e in divisors(d) {
        let mu = moebius(d / e);
        if mu != 0 {
            out = out.mul(&Prod::one_minus(&y.pow(e as i32)).pow(mu).expect("nonzero binomial"));
        }
    }
    out
}

struct FactorDisplay<'a>(&'a Factor);

impl fmt::Display for FactorDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.expand())
    }
}

fn write_rat(f: &mut fmt::Formatter<'_>, c: &BigRational) -> fmt::Result {
    if c.denom() == &BigInt::one() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Prod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut num: Vec<String> = Vec::new();
        let mut den: Vec<String> = Vec::new();
        let c = self.c.abs();
        if self.c.is_negative() {
            write!(f, "-")?;
        }
        if !c.numer().is_one() {
            num.push(c.numer().to_string());
        }
        if !c.denom().is_one() {
            den.push(c.denom().to_string());
        }
        let pos = Mono::from_pairs(self.m.pairs().iter().copied().filter(|p| p.1 > 0));
        let neg = Mono::from_pairs(self.m.pairs().iter().filter(|p| p.1 < 0).map(|p| (p.0, -p.1)));
        if !pos.is_one() {
            num.push(pos.to_string());
        }
        if !neg.is_one() {
            den.push(neg.to_string());
        }
        for (k, &e) in &self.f {
            let s = FactorDisplay(k).to_string();
            let s = if e.abs() == 1 { s } else { format!("{}^{}", s, e.abs()) };
            if e > 0 {
                num.push(s);
            } else {
                den.push(s);
            }
        }
        let numer = if num.is_empty() { "1".to_string() } else { num.join("*") };
        match den.len() {
            0 => write!(f, "{}", numer),
            1 => write!(f, "{}/{}", numer, den[0]),
            _ => write!(f, "{}/({})", numer, den.join("*")),
        }
    }
}

impl Prod {
    pub fn write_coeff(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_rat(f, &self.c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(i: u16) -> Mono {
        Mono::var(Sym::A(i), 1)
    }

    #[test]
    fn binomials_factor() {
        let t = a(0);
        let p = Prod::one_minus(&SignedMono::plain(t.pow(6)));
        assert_eq!(p.f.len(), 4);
        assert_eq!(p.expand(), Poly::one_minus(&SignedMono::plain(t.pow(6))));
        let m = Prod::one_minus(&SignedMono::new(1, t.pow(-2)));
        assert_eq!(m.expand(), Poly::one_minus(&SignedMono::new(1, t.pow(-2))));
    }

    #[test]
    fn from_poly_recognizes_binomials() {
        let p = Poly::one_minus(&SignedMono::plain(a(0).mul(&a(1)).pow(2))).mul_mono(&a(2));
        let pr = Prod::from_poly(&p);
        assert!(pr.f.keys().all(|k| matches!(k, Factor::Cyc(_, _))));
        assert_eq!(pr.expand(), p);
    }

    #[test]
    fn cyclo_substitution() {
        // Φ_3(a) at a ↦ a^2 is (1 − a^6)(1 − a^2)^{-1} ... expressed in factors of a
        let p = Prod::one_minus(&SignedMono::plain(a(0).pow(3)));
        let s = p.subst(&|s| if s == Sym::A(0) { Some(SignedMono::plain(a(0).pow(2))) } else { None }).unwrap();
        assert_eq!(s.expand(), Poly::one_minus(&SignedMono::plain(a(0).pow(6))));
        let z = p.subst(&|_| Some(SignedMono::one())).unwrap();
        assert!(z.is_zero());
    }
}
