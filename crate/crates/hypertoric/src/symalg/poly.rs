//! Sparse Laurent polynomials over ℚ and cyclotomic helpers.

use super::symbol::{Mono, SignedMono, Sym};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Lexicographic monomial order with `QH` most significant.
pub fn lex_cmp(a: &Mono, b: &Mono) -> Ordering {
    let (x, y) = (a.pairs(), b.pairs());
    let (mut i, mut j) = (0, 0);
    loop {
        let (sa, ea) = x.get(i).copied().map_or((None, 0), |p| (Some(p.0), p.1));
        let (sb, eb) = y.get(j).copied().map_or((None, 0), |p| (Some(p.0), p.1));
        match (sa, sb) {
            (None, None) => return Ordering::Equal,
            (Some(_), None) => return if ea > 0 { Ordering::Greater } else { Ordering::Less },
            (None, Some(_)) => return if eb > 0 { Ordering::Less } else { Ordering::Greater },
            (Some(s), Some(t)) => {
                if s < t {
                    return if ea > 0 { Ordering::Greater } else { Ordering::Less };
                } else if t < s {
                    return if eb > 0 { Ordering::Less } else { Ordering::Greater };
                } else if ea != eb {
                    return ea.cmp(&eb);
                }
                i += 1;
                j += 1;
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Poly(pub(crate) BTreeMap<Mono, BigRational>);

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Poly {
    pub fn zero() -> Self {
        Poly(BTreeMap::new())
    }
    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }
    pub fn constant(c: BigRational) -> Self {
        Poly::term(c, Mono::one())
    }
    pub fn term(c: BigRational, m: Mono) -> Self {
        let mut t = BTreeMap::new();
        if !c.is_zero() {
            t.insert(m, c);
        }
        Poly(t)
    }
    pub fn mono(m: Mono) -> Self {
        Poly::term(BigRational::one(), m)
    }
    /// 1 − y for a signed monomial y.
    pub fn one_minus(y: &SignedMono) -> Self {
        Poly::one().sub(&Poly::term(rat(y.sign() as i64), y.m.clone()))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    pub fn len(&self) -> usize {
        self.0.len()
    }
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &BigRational)> {
        self.0.iter()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        match self.0.len() {
            0 => Some(BigRational::zero()),
            1 => self.0.get(&Mono::one()).cloned(),
            _ => None,
        }
    }

    fn add_term(&mut self, m: Mono, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.0.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (m, c) in &o.0 {
            r.add_term(m.clone(), c.clone());
        }
        r
    }
    pub fn sub(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (m, c) in &o.0 {
            r.add_term(m.clone(), -c);
        }
        r
    }
    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|(m, c)| (m.clone(), -c)).collect())
    }
    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly(self.0.iter().map(|(m, x)| (m.clone(), x * c)).collect())
    }
    pub fn mul_mono(&self, m: &Mono) -> Poly {
        Poly(self.0.iter().map(|(x, c)| (x.mul(m), c.clone())).collect())
    }
    pub fn mul(&self, o: &Poly) -> Poly {
        let mut r = Poly::zero();
        for (m1, c1) in &self.0 {
            for (m2, c2) in &o.0 {
                r.add_term(m1.mul(m2), c1 * c2);
            }
        }
        r
    }
    pub fn pow(&self, e: u32) -> Poly {
        let mut r = Poly::one();
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    pub fn symbols(&self) -> BTreeSet<Sym> {
        self.0.keys().flat_map(|m| m.symbols().collect::<Vec<_>>()).collect()
    }

    /// Componentwise minimum exponent over all terms.
    pub fn min_mono(&self) -> Mono {
        let mut it = self.0.keys();
        let Some(first) = it.next() else { return Mono::one() };
        it.fold(first.clone(), |acc, m| acc.meet(m))
    }

    /// Leading term in the lexicographic order.
    pub fn leading(&self) -> Option<(&Mono, &BigRational)> {
        self.0.iter().max_by(|a, b| lex_cmp(a.0, b.0))
    }

    /// Substitutes symbols by signed monomials (unmapped symbols stay).
    pub fn subst(&self, f: &dyn Fn(Sym) -> Option<SignedMono>) -> Poly {
        let mut r = Poly::zero();
        for (m, c) in &self.0 {
            let (sign, img) = subst_mono(m, f);
            r.add_term(img, if sign < 0 { -c } else { c.clone() });
        }
        r
    }

    /// Degree in `s` (max exponent) and low degree (min exponent).
    pub fn degree_range(&self, s: Sym) -> (i32, i32) {
        let mut lo = i32::MAX;
        let mut hi = i32::MIN;
        for m in self.0.keys() {
            let e = m.exp(s);
            lo = lo.min(e);
            hi = hi.max(e);
        }
        (lo, hi)
    }

    /// Coefficients with respect to `s`: exponent ↦ polynomial in the rest.
    pub fn coeffs_in(&self, s: Sym) -> BTreeMap<i32, Poly> {
        let mut out: BTreeMap<i32, Poly> = BTreeMap::new();
        for (m, c) in &self.0 {
            out.entry(m.exp(s)).or_default().add_term(m.without(s), c.clone());
        }
        out
    }

    /// Exact division by Φ_d(t) (with Φ_1(t) = 1 − t); `None` if not divisible.
    pub fn div_cyclo(&self, t: &Mono, d: u32) -> Option<Poly> {
        let g = cyclo(d);
        let (s0, v0) = t.pairs()[0];
        debug_assert!(v0 > 0);
        let mut groups: BTreeMap<Mono, BTreeMap<i32, BigRational>> = BTreeMap::new();
        for (u, c) in &self.0 {
            let k = u.exp(s0).div_euclid(v0);
            let r = u.div(&t.pow(k));
            groups.entry(r).or_default().insert(k, c.clone());
        }
        let mut out = Poly::zero();
        for (r, line) in groups {
            let kmin = *line.keys().next().unwrap();
            let kmax = *line.keys().last().unwrap();
            let mut coeffs: Vec<BigRational> = (kmin..=kmax).map(|k| line.get(&k).cloned().unwrap_or_else(BigRational::zero)).collect();
            let q = univariate_div_exact(&mut coeffs, &g)?;
            for (i, c) in q.into_iter().enumerate() {
                out.add_term(r.mul(&t.pow(kmin + i as i32)), c);
            }
        }
        Some(out)
    }

    /// Exact division by a multivariate polynomial, `None` if it leaves a remainder.
    pub fn div_exact(&self, b: &Poly) -> Option<Poly> {
        if b.is_zero() {
            return None;
        }
        // shift both to genuine polynomials; the divisor then has no monomial
        // content, so an exact quotient is a polynomial too
        let (sa, sb) = (self.min_mono(), b.min_mono());
        let a = self.mul_mono(&sa.inv());
        let b = b.mul_mono(&sb.inv());
        let (lm, lc) = b.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut rem = a;
        let mut quo = Poly::zero();
        while let Some((m, c)) = rem.leading() {
            let t = m.div(&lm);
            if t.pairs().iter().any(|p| p.1 < 0) {
                return None;
            }
            let qc = c / &lc;
            rem = rem.sub(&b.mul_mono(&t).scale(&qc));
            quo.add_term(t, qc);
        }
        Some(quo.mul_mono(&sa.div(&sb)))
    }

    /// Shifts to nonnegative exponents and scales the leading coefficient to 1.
    pub fn normalized(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some((_, c)) => {
                let inv = c.recip();
                self.mul_mono(&self.min_mono().inv()).scale(&inv)
            }
        }
    }
}

pub(crate) fn subst_mono(m: &Mono, f: &dyn Fn(Sym) -> Option<SignedMono>) -> (i32, Mono) {
    let mut sign = 1;
    let mut out = Mono::one();
    for &(s, e) in m.pairs() {
        match f(s) {
            Some(img) => {
                if img.phase.rem_euclid(2) == 1 && e.rem_euclid(2) == 1 {
                    sign = -sign;
                }
                out = out.mul(&img.m.pow(e));
            }
            None => out = out.mul(&Mono::var(s, e)),
        }
    }
    (sign, out)
}

/// Substitution on a signed monomial keeping the phase ledger.
pub fn subst_signed(m: &SignedMono, f: &dyn Fn(Sym) -> Option<SignedMono>) -> SignedMono {
    let mut out = SignedMono::new(m.phase, Mono::one());
    for &(s, e) in m.m.pairs() {
        match f(s) {
            Some(img) => out = out.mul(&img.pow(e)),
            None => out = out.mul(&SignedMono::plain(Mono::var(s, e))),
        }
    }
    out
}

/// Coefficients (low → high) of Φ_d, with the convention Φ_1(t) = 1 − t.
pub fn cyclo(d: u32) -> Vec<BigRational> {
    cyclo_int(d).into_iter().map(rat).collect()
}

pub fn cyclo_int(d: u32) -> Vec<i64> {
    if d == 1 {
        return vec![1, -1];
    }
    // t^d − 1 divided by Φ_e for proper divisors e (using the standard Φ_1 = t − 1)
    let mut num = vec![0i64; d as usize + 1];
    num[0] = -1;
    num[d as usize] = 1;
    for e in 1..d {
        if d.is_multiple_of(e) {
            let mut den = cyclo_int(e);
            if e == 1 {
                den = vec![-1, 1];
            }
            num = int_div_exact(&num, &den);
        }
    }
    num
}

fn int_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut r = num.to_vec();
    let dn = den.len() - 1;
    let lead = den[dn];
    let mut q = vec![0i64; r.len() - dn];
    for i in (0..q.len()).rev() {
        let c = r[i + dn] / lead;
        q[i] = c;
        for j in 0..=dn {
            r[i + j] -= c * den[j];
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

pub fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

pub fn moebius(n: u32) -> i32 {
    let mut n = n;
    let mut k = 0;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            k += 1;
        }
        p += 1;
    }
    if n > 1 {
        k += 1;
    }
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Exact univariate division; `coeffs` low → high. Returns the quotient.
fn univariate_div_exact(coeffs: &mut Vec<BigRational>, g: &[BigRational]) -> Option<Vec<BigRational>> {
    while coeffs.len() > 1 && coeffs.last().unwrap().is_zero() {
        coeffs.pop();
    }
    let dg = g.len() - 1;
    if coeffs.iter().all(|c| c.is_zero()) {
        return Some(vec![]);
    }
    if coeffs.len() < g.len() {
        return None;
    }
    let lead = &g[dg];
    let mut q = vec![BigRational::zero(); coeffs.len() - dg];
    for i in (0..q.len()).rev() {
        let c = &coeffs[i + dg] / lead;
        if !c.is_zero() {
            for j in 0..=dg {
                let t = &c * &g[j];
                coeffs[i + j] -= t;
            }
        }
        q[i] = c;
    }
    if coeffs.iter().any(|c| !c.is_zero()) {
        return None;
    }
    Some(q)
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<(&Mono, &BigRational)> = self.0.iter().collect();
        terms.sort_by(|a, b| lex_cmp(b.0, a.0));
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{}", a)?;
            } else if a.is_one() {
                write!(f, "{}", m)?;
            } else {
                write!(f, "{}*{}", a, m)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomics() {
        assert_eq!(cyclo_int(1), vec![1, -1]);
        assert_eq!(cyclo_int(2), vec![1, 1]);
        assert_eq!(cyclo_int(3), vec![1, 1, 1]);
        assert_eq!(cyclo_int(4), vec![1, 0, 1]);
        assert_eq!(cyclo_int(6), vec![1, -1, 1]);
        assert_eq!(moebius(6), 1);
        assert_eq!(moebius(4), 0);
        assert_eq!(moebius(3), -1);
    }

    #[test]
    fn coset_division() {
        let a = Mono::var(Sym::A(0), 1);
        let b = Mono::var(Sym::A(1), 1);
        // (1 − a b)(3 + b) / (1 − a b)
        let f = Poly::one_minus(&SignedMono::plain(a.mul(&b)));
        let g = Poly::constant(rat(3)).add(&Poly::mono(b.clone()));
        let p = f.mul(&g);
        assert_eq!(p.div_cyclo(&a.mul(&b), 1), Some(g.clone()));
        assert_eq!(g.div_cyclo(&a, 1), None);
        // 1 + a^2 = Φ_4(a)
        let h = Poly::one().add(&Poly::mono(a.pow(2)));
        assert_eq!(h.div_cyclo(&a, 4), Some(Poly::one()));
    }

    #[test]
    fn lex_is_monomial_order() {
        let a = Mono::var(Sym::A(0), 1);
        let b = Mono::var(Sym::A(1), 1);
        assert_eq!(lex_cmp(&a, &b), Ordering::Greater);
        assert_eq!(lex_cmp(&a.mul(&a), &a.mul(&b)), Ordering::Greater);
        assert_eq!(lex_cmp(&Mono::one(), &b), Ordering::Less);
        assert_eq!(lex_cmp(&b.inv(), &Mono::one()), Ordering::Less);
    }

    #[test]
    fn exact_division() {
        let a = Poly::mono(Mono::var(Sym::A(0), 1));
        let b = Poly::mono(Mono::var(Sym::A(1), 1));
        let f = a.add(&b).add(&Poly::one());
        let g = a.sub(&b.mul(&b));
        assert_eq!(f.mul(&g).div_exact(&g), Some(f.clone()));
        assert_eq!(f.div_exact(&g), None);
    }
}
