//! Symbol alphabet and Laurent monomials.
//!
//! Exponents are stored in natural units: the symbols `QH` and `HH` stand for
//! q^(1/2) and ħ^(1/2), every other symbol is itself a unit. A signed
//! monomial carries a phase counted in factors of e^{iπ} = −1, kept as an
//! integer so that square roots of signed monomials stay well defined.

use serde::{Serialize, Serializer};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sym {
    QH,
    HH,
    A(u16),
    Z(u16),
    X(u16),
    Ap(u16),
    Zp(u16),
    Xp(u16),
}

impl Sym {
    /// Primed counterpart; used to embed mirror-side expressions next to the original ones.
    pub fn primed(self) -> Sym {
        match self {
            Sym::A(i) => Sym::Ap(i),
            Sym::Z(i) => Sym::Zp(i),
            Sym::X(i) => Sym::Xp(i),
            other => other,
        }
    }

    pub fn unprimed(self) -> Sym {
        match self {
            Sym::Ap(i) => Sym::A(i),
            Sym::Zp(i) => Sym::Z(i),
            Sym::Xp(i) => Sym::X(i),
            other => other,
        }
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sym::QH => write!(f, "q"),
            Sym::HH => write!(f, "hbar"),
            Sym::A(i) => write!(f, "a{}", i + 1),
            Sym::Z(i) => write!(f, "z{}", i + 1),
            Sym::X(i) => write!(f, "x{}", i + 1),
            Sym::Ap(i) => write!(f, "a'{}", i + 1),
            Sym::Zp(i) => write!(f, "z'{}", i + 1),
            Sym::Xp(i) => write!(f, "x'{}", i + 1),
        }
    }
}

/// A Laurent monomial: sorted (symbol, exponent) pairs with no zero exponents.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Mono(Vec<(Sym, i32)>);

impl Mono {
    pub fn one() -> Self {
        Mono(Vec::new())
    }

    pub fn var(s: Sym, e: i32) -> Self {
        if e == 0 {
            Mono::one()
        } else {
            Mono(vec![(s, e)])
        }
    }

    pub fn q(e2: i32) -> Self {
        Mono::var(Sym::QH, e2)
    }
    pub fn hbar(e2: i32) -> Self {
        Mono::var(Sym::HH, e2)
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Sym, i32)>) -> Self {
        let mut v: Vec<(Sym, i32)> = Vec::new();
        let mut all: Vec<(Sym, i32)> = pairs.into_iter().collect();
        all.sort_by_key(|p| p.0);
        for (s, e) in all {
            match v.last_mut() {
                Some(last) if last.0 == s => last.1 += e,
                _ => v.push((s, e)),
            }
        }
        v.retain(|p| p.1 != 0);
        Mono(v)
    }

    pub fn pairs(&self) -> &[(Sym, i32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exp(&self, s: Sym) -> i32 {
        self.0.iter().find(|p| p.0 == s).map_or(0, |p| p.1)
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        let (a, b) = (&self.0, &o.0);
        let mut v = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                v.push(a[i]);
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                v.push(b[j]);
                j += 1;
            } else {
                let e = a[i].1 + b[j].1;
                if e != 0 {
                    v.push((a[i].0, e));
                }
                i += 1;
                j += 1;
            }
        }
        Mono(v)
    }

    pub fn pow(&self, k: i32) -> Mono {
        if k == 0 {
            return Mono::one();
        }
        Mono(self.0.iter().map(|&(s, e)| (s, e * k)).collect())
    }

    pub fn inv(&self) -> Mono {
        self.pow(-1)
    }

    pub fn div(&self, o: &Mono) -> Mono {
        self.mul(&o.inv())
    }

    /// Sign of the first nonzero exponent (0 for the unit monomial).
    pub fn lex_sign(&self) -> i32 {
        self.0.first().map_or(0, |p| p.1.signum())
    }

    /// gcd of all exponents (0 for the unit monomial).
    pub fn content(&self) -> i32 {
        self.0.iter().fold(0, |g, p| gcd(g, p.1.abs()))
    }

    /// Exact division of every exponent by `g`.
    pub fn root(&self, g: i32) -> Mono {
        Mono(self.0.iter().map(|&(s, e)| {
            debug_assert_eq!(e % g, 0);
            (s, e / g)
        }).collect())
    }

    pub fn without(&self, s: Sym) -> Mono {
        Mono(self.0.iter().copied().filter(|p| p.0 != s).collect())
    }

    /// Componentwise minimum of exponents (treating absent as 0).
    pub fn meet(&self, o: &Mono) -> Mono {
        let mut pairs = Vec::new();
        for &(s, e) in &self.0 {
            pairs.push((s, e.min(o.exp(s))));
        }
        for &(s, e) in &o.0 {
            if self.exp(s) == 0 {
                pairs.push((s, e.min(0)));
            }
        }
        Mono::from_pairs(pairs)
    }

    pub fn symbols(&self) -> impl Iterator<Item = Sym> + '_ {
        self.0.iter().map(|p| p.0)
    }

    pub fn map_syms(&self, f: impl Fn(Sym) -> Sym) -> Mono {
        Mono::from_pairs(self.0.iter().map(|&(s, e)| (f(s), e)))
    }
}

pub fn gcd(a: i32, b: i32) -> i32 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn fmt_exp(f: &mut fmt::Formatter<'_>, s: Sym, e: i32) -> fmt::Result {
    let halved = matches!(s, Sym::QH | Sym::HH);
    if halved && e % 2 != 0 {
        write!(f, "{}^({}/2)", s, e)
    } else {
        let e = if halved { e / 2 } else { e };
        if e == 1 {
            write!(f, "{}", s)
        } else {
            write!(f, "{}^{}", s, e)
        }
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, &(s, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            fmt_exp(f, s, e)?;
        }
        Ok(())
    }
}

impl Serialize for Mono {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A monomial times (−1)^phase, the phase kept unreduced.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SignedMono {
    pub phase: i32,
    pub m: Mono,
}

impl SignedMono {
    pub fn new(phase: i32, m: Mono) -> Self {
        SignedMono { phase, m }
    }
    pub fn one() -> Self {
        SignedMono::default()
    }
    pub fn plain(m: Mono) -> Self {
        SignedMono { phase: 0, m }
    }
    pub fn minus_one() -> Self {
        SignedMono { phase: 1, m: Mono::one() }
    }
    pub fn mul(&self, o: &SignedMono) -> SignedMono {
        SignedMono { phase: self.phase + o.phase, m: self.m.mul(&o.m) }
    }
    pub fn pow(&self, k: i32) -> SignedMono {
        SignedMono { phase: self.phase * k, m: self.m.pow(k) }
    }
    pub fn inv(&self) -> SignedMono {
        self.pow(-1)
    }
    pub fn div(&self, o: &SignedMono) -> SignedMono {
        self.mul(&o.inv())
    }
    pub fn sign(&self) -> i32 {
        if self.phase.rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    }
    pub fn is_one(&self) -> bool {
        self.phase == 0 && self.m.is_one()
    }
    /// Equal as values, ignoring how many full turns the phase records.
    pub fn value_eq(&self, o: &SignedMono) -> bool {
        self.sign() == o.sign() && self.m == o.m
    }
}

impl From<Mono> for SignedMono {
    fn from(m: Mono) -> Self {
        SignedMono::plain(m)
    }
}

impl fmt::Display for SignedMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.phase {
            0 => write!(f, "{}", self.m),
            1 => write!(f, "-{}", self.m),
            p => write!(f, "(-1)^{}*{}", p, self.m),
        }
    }
}

impl Serialize for SignedMono {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mul_cancels() {
        let a = Mono::from_pairs([(Sym::A(0), 1), (Sym::A(1), -1)]);
        assert!(a.mul(&a.inv()).is_one());
        assert_eq!(format!("{}", a.mul(&Mono::q(3))), "q^(3/2)*a1*a2^-1");
    }

    #[test]
    fn lex_and_content() {
        let m = Mono::from_pairs([(Sym::QH, -4), (Sym::A(2), 2)]);
        assert_eq!(m.lex_sign(), -1);
        assert_eq!(m.content(), 2);
        assert_eq!(m.root(2), Mono::from_pairs([(Sym::QH, -2), (Sym::A(2), 1)]));
    }
}
