//! Sums of factored products, with an exact zero test and a reduced form.

use super::gcd::gcd;
use super::poly::Poly;
use super::prod::{Factor, Prod};
use super::symbol::{Mono, SignedMono, Sym};
use crate::error::Error;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Clone, Debug, Default)]
pub struct Expr {
    terms: Vec<Prod>,
}

impl From<Prod> for Expr {
    fn from(p: Prod) -> Self {
        Expr::from_prod(p)
    }
}

impl Expr {
    pub fn zero() -> Self {
        Expr { terms: vec![] }
    }
    pub fn one() -> Self {
        Expr::from_prod(Prod::one())
    }
    pub fn from_prod(p: Prod) -> Self {
        if p.is_zero() {
            Expr::zero()
        } else {
            Expr { terms: vec![p] }
        }
    }
    pub fn terms(&self) -> &[Prod] {
        &self.terms
    }

    fn normalize(mut self) -> Self {
        let mut map: BTreeMap<(Mono, BTreeMap<Factor, i32>), BigRational> = BTreeMap::new();
        for t in self.terms.drain(..) {
            if t.is_zero() {
                continue;
            }
            *map.entry((t.m, t.f)).or_insert_with(BigRational::zero) += t.c;
        }
        Expr {
            terms: map
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|((m, f), c)| Prod { c, m, f })
                .collect(),
        }
    }

    pub fn add(&self, o: &Expr) -> Expr {
        let mut t = self.terms.clone();
        t.extend(o.terms.iter().cloned());
        Expr { terms: t }.normalize()
    }
    pub fn add_prod(&self, p: &Prod) -> Expr {
        self.add(&Expr::from_prod(p.clone()))
    }
    pub fn neg(&self) -> Expr {
        Expr { terms: self.terms.iter().map(|t| t.neg()).collect() }
    }
    pub fn sub(&self, o: &Expr) -> Expr {
        self.add(&o.neg())
    }
    pub fn mul_prod(&self, p: &Prod) -> Expr {
        Expr { terms: self.terms.iter().map(|t| t.mul(p)).collect() }.normalize()
    }
    pub fn mul(&self, o: &Expr) -> Expr {
        let mut t = Vec::with_capacity(self.terms.len() * o.terms.len());
        for a in &self.terms {
            for b in &o.terms {
                t.push(a.mul(b));
            }
        }
        Expr { terms: t }.normalize()
    }

    pub fn subst(&self, g: &dyn Fn(Sym) -> Option<SignedMono>) -> Result<Expr, Error> {
        let mut t = Vec::with_capacity(self.terms.len());
        for p in &self.terms {
            t.push(p.subst(g)?);
        }
        Ok(Expr { terms: t }.normalize())
    }

    /// Largest common factor of all terms: minimum exponent of every factor and symbol.
    fn common(&self) -> Prod {
        let mut keys: BTreeSet<&Factor> = BTreeSet::new();
        for t in &self.terms {
            keys.extend(t.f.keys());
        }
        let mut f = BTreeMap::new();
        for k in keys {
            let e = self.terms.iter().map(|t| t.f.get(k).copied().unwrap_or(0)).min().unwrap();
            if e != 0 {
                f.insert(k.clone(), e);
            }
        }
        let m = self.terms.iter().skip(1).fold(self.terms[0].m.clone(), |acc, t| acc.meet(&t.m));
        Prod { c: BigRational::one(), m, f }
    }

    /// The numerator after pulling out the common factor; zero iff the sum is zero.
    fn reduced_numerator(&self) -> (Prod, Poly) {
        let common = self.common();
        let inv = common.inv().expect("common factor is nonzero");
        let mut n = Poly::zero();
        for t in &self.terms {
            n = n.add(&t.mul(&inv).expand());
        }
        (common, n)
    }

    pub fn is_zero(&self) -> bool {
        match self.terms.len() {
            0 => true,
            1 => self.terms[0].is_zero(),
            _ => self.reduced_numerator().1.is_zero(),
        }
    }

    pub fn eq_value(&self, o: &Expr) -> bool {
        self.sub(o).is_zero()
    }

    /// Collapses the sum to one product with common factors cancelled.
    pub fn collapse(&self) -> Prod {
        match self.terms.len() {
            0 => return Prod::zero(),
            1 => return self.terms[0].clone(),
            _ => {}
        }
        let (mut common, mut n) = self.reduced_numerator();
        if n.is_zero() {
            return Prod::zero();
        }
        // cancel cyclotomic denominators that divide the numerator
        let dens: Vec<(Factor, i32)> = common.f.iter().filter(|x| *x.1 < 0).map(|(k, e)| (k.clone(), *e)).collect();
        for (k, e) in dens {
            let mut e = e;
            match &k {
                Factor::Cyc(t, d) => {
                    while e < 0 {
                        match n.div_cyclo(t, *d) {
                            Some(q) => {
                                n = q;
                                e += 1;
                            }
                            None => break,
                        }
                    }
                }
                Factor::Gen(g) => {
                    while e < 0 {
                        match n.div_exact(g) {
                            Some(q) => {
                                n = q;
                                e += 1;
                            }
                            None => break,
                        }
                    }
                }
            }
            if e == 0 {
                common.f.remove(&k);
            } else {
                common.f.insert(k, e);
            }
        }
        // split binomial factors off the numerator, using the bases already present
        let mut bases: BTreeSet<(Mono, u32)> = BTreeSet::new();
        for t in &self.terms {
            for k in t.f.keys() {
                if let Factor::Cyc(t, d) = k {
                    bases.insert((t.clone(), *d));
                }
            }
        }
        let mut extracted = Prod::one();
        for (t, d) in bases {
            while n.len() > 1 {
                match n.div_cyclo(&t, d) {
                    Some(q) => {
                        n = q;
                        extracted = extracted.mul(&Prod { c: BigRational::one(), m: Mono::one(), f: [(Factor::Cyc(t.clone(), d), 1)].into() });
                    }
                    None => break,
                }
            }
        }
        let mut out = common.mul(&extracted).mul(&Prod::from_poly(&n));
        // remaining generic denominators: cancel through a gcd with the numerator
        let gen_dens: Vec<(Factor, i32)> = out.f.iter().filter(|x| *x.1 < 0 && matches!(x.0, Factor::Gen(_))).map(|(k, e)| (k.clone(), *e)).collect();
        let gen_nums: Vec<(Factor, i32)> = out.f.iter().filter(|x| *x.1 > 0 && matches!(x.0, Factor::Gen(_))).map(|(k, e)| (k.clone(), *e)).collect();
        if !gen_dens.is_empty() && !gen_nums.is_empty() {
            let mut np = Poly::one();
            let mut dp = Poly::one();
            for (k, e) in &gen_nums {
                np = np.mul(&k.expand().pow(*e as u32));
                out.f.remove(k);
            }
            for (k, e) in &gen_dens {
                dp = dp.mul(&k.expand().pow((-e) as u32));
                out.f.remove(k);
            }
            let g = gcd(&np, &dp);
            let np = np.div_exact(&g).expect("gcd divides");
            let dp = dp.div_exact(&g).expect("gcd divides");
            out = out.mul(&Prod::from_poly(&np)).mul(&Prod::from_poly(&dp).inv().expect("nonzero"));
        }
        out
    }

    pub fn as_prod(&self) -> Option<&Prod> {
        if self.terms.len() == 1 {
            Some(&self.terms[0])
        } else {
            None
        }
    }

    pub fn inv(&self) -> Result<Expr, Error> {
        let p = self.collapse();
        Ok(Expr::from_prod(p.inv()?))
    }

    pub fn div(&self, o: &Expr) -> Result<Expr, Error> {
        Ok(self.mul(&o.inv()?))
    }

    /// Canonical rendering: a factored product when only binomial factors remain,
    /// otherwise an expanded reduced quotient with a normalized denominator.
    pub fn canonical_string(&self) -> String {
        let p = self.collapse();
        canonical_prod_string(&p)
    }

    pub fn symbols(&self) -> BTreeSet<Sym> {
        self.terms.iter().flat_map(|t| t.symbols()).collect()
    }

    pub fn q_order(&self) -> (i32, i32) {
        self.collapse().q_order()
    }
}

pub fn canonical_prod_string(p: &Prod) -> String {
    if p.is_zero() {
        return "0".into();
    }
    if p.f.keys().all(|k| matches!(k, Factor::Cyc(_, _))) {
        return p.to_string();
    }
    let num = p.numerator_factors().expand().mul(&Poly::term(p.c.clone(), p.m.clone()));
    let den = p.denominator_factors().expand();
    let lc = den.leading().unwrap().1.clone();
    let shift = den.min_mono();
    let den = den.normalized();
    let num = num.mul_mono(&shift.inv()).scale(&lc.recip());
    if den.as_constant().is_some() {
        format!("{}", num)
    } else {
        format!("({})/({})", num, den)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.canonical_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn om(m: Mono) -> Prod {
        Prod::one_minus(&SignedMono::plain(m))
    }

    #[test]
    fn telescoping_zero() {
        let a = Mono::var(Sym::A(0), 1);
        // 1/(1−a) − a/(1−a) − 1 = 0
        let x = Expr::from_prod(om(a.clone()).inv().unwrap());
        let y = Expr::from_prod(Prod::mono(a.clone()).mul(&om(a.clone()).inv().unwrap()));
        assert!(x.sub(&y).sub(&Expr::one()).is_zero());
        // (1 − a^2) = (1 − a)(1 + a)
        let z = Expr::from_prod(om(a.pow(2))).sub(&Expr::from_prod(Prod::from_poly(&Poly::one_minus(&SignedMono::plain(a.pow(2))))));
        assert!(z.is_zero());
    }

    #[test]
    fn collapse_cancels() {
        let a = Mono::var(Sym::A(0), 1);
        let b = Mono::var(Sym::A(1), 1);
        // a/(1−a) + 1 = 1/(1−a)
        let x = Expr::from_prod(Prod::mono(a.clone()).mul(&om(a.clone()).inv().unwrap())).add(&Expr::one());
        assert_eq!(x.collapse(), om(a.clone()).inv().unwrap());
        // (1 − ab) rendered identically whichever route built it
        let y = Expr::from_prod(Prod::one()).sub(&Expr::from_prod(Prod::mono(a.mul(&b))));
        assert_eq!(y.canonical_string(), Expr::from_prod(om(a.mul(&b))).canonical_string());
    }
}
