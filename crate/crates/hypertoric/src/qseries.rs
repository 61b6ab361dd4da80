//! q-Pochhammer symbols, the bracket {a}_d, truncated φ products and the
//! truncated Kähler-series ring over a fixed point.

use crate::arrangement::FixedPoint;
use crate::error::{Error, Result};
use crate::symalg::numeric::{phi_tail, phi_truncated, Assignment};
use crate::symalg::{Expr, Mono, Poly, Prod, SignedMono, Sym};
use num_complex::Complex64;
use serde::Serialize;
use std::collections::BTreeMap;

fn q_pow(l: i32) -> SignedMono {
    SignedMono::plain(Mono::q(2 * l))
}

/// (x)_d = ∏_{l<d}(1 − q^l x) for d ≥ 0 and 1/∏_{l=1}^{−d}(1 − q^{−l}x) for d < 0.
///
/// Panics when x is the constant q^l for some 0 < l ≤ −d.
pub fn pochhammer(x: &SignedMono, d: i32) -> Prod {
    let mut out = Prod::one();
    if d >= 0 {
        for l in 0..d {
            out = out.mul(&Prod::one_minus(&q_pow(l).mul(x)));
        }
    } else {
        for l in 1..=-d {
            let f = Prod::one_minus(&q_pow(-l).mul(x));
            out = out.mul(&f.inv().expect("(x)_d with d < 0 has a pole only at x = q^l, l > 0"));
        }
    }
    out
}

/// The signed monomial −q^{1/2}ħ^{−1/2}.
pub fn bracket_base() -> SignedMono {
    SignedMono::new(1, Mono::from_pairs([(Sym::QH, 1), (Sym::HH, -1)]))
}

/// {a}_d = (−q^{1/2}ħ^{−1/2})^d (ħa)_d/(qa)_d.
pub fn bracket(a: &SignedMono, d: i32) -> Result<Prod> {
    let h = SignedMono::plain(Mono::hbar(2));
    let num = pochhammer(&h.mul(a), d);
    let den = pochhammer(&q_pow(1).mul(a), d);
    Prod::signed(&bracket_base().pow(d)).mul(&num).div(&den)
}

/// The second closed form (−q^{1/2}ħ^{−1/2})^{−d}(a^{−1})_{−d}/(qħ^{−1}a^{−1})_{−d}.
pub fn bracket_second_form(a: &SignedMono, d: i32) -> Result<Prod> {
    let ai = a.inv();
    let num = pochhammer(&ai, -d);
    let den = pochhammer(&SignedMono::plain(Mono::from_pairs([(Sym::QH, 2), (Sym::HH, -2)])).mul(&ai), -d);
    Prod::signed(&bracket_base().pow(-d)).mul(&num).div(&den)
}

/// φ(x) expanded and truncated at q-adic order `n` (requires a nonnegative q-exponent in x).
pub fn phi_exact(x: &SignedMono, n: i32) -> Poly {
    let cut = |p: Poly| -> Poly {
        let mut out = Poly::zero();
        for (m, c) in p.terms() {
            if m.exp(Sym::QH) <= 2 * n {
                out = out.add(&Poly::term(c.clone(), m.clone()));
            }
        }
        out
    };
    let mut acc = Poly::one();
    for l in 0..=n {
        let y = q_pow(l).mul(x);
        if y.m.exp(Sym::QH) > 2 * n {
            break;
        }
        acc = cut(acc.mul(&Poly::one_minus(&y)));
    }
    acc
}

/// φ(x) numerically with `n` factors, with a relative tail bound.
pub fn phi_numeric(x: Complex64, q: Complex64, n: usize) -> Result<(Complex64, f64)> {
    if q.norm() >= 1.0 {
        return Err(Error::ConvergenceFailure(format!("|q| = {} is not below 1", q.norm())));
    }
    Ok((phi_truncated(x, q, n), phi_tail(x, q, n)))
}

/// Coefficients (x)_d/(q)_d of z^d in φ(xz)/φ(z), d = 0..=order, with x a symbol.
pub fn q_binomial_coefficients(x: &SignedMono, order: i32) -> Result<Vec<Prod>> {
    let qq = q_pow(1);
    (0..=order).map(|d| pochhammer(x, d).div(&pochhammer(&qq, d))).collect()
}

/// A truncated series Σ c_d ζ^d over the effective cone at a fixed point.
///
/// Degrees are indexed by the complement of p; entries inside the box and the
/// cone are `Some` when known and `None` when a shift pushed them out of reach.
#[derive(Clone, Debug)]
pub struct KahlerSeries {
    pub fp: FixedPoint,
    pub n: usize,
    pub bound: i64,
    coeffs: BTreeMap<Vec<i64>, Option<Expr>>,
}

#[derive(Serialize)]
pub struct SeriesEntry {
    pub degree: Vec<i64>,
    pub coeff: String,
}

/// All degree vectors in the box |d_j| ≤ bound that satisfy the cone signs.
pub fn cone_box(signs: &[i64], bound: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for s in signs {
        let mut next = Vec::new();
        for v in &out {
            for k in 0..=bound {
                let mut w = v.clone();
                w.push(s * k);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

impl KahlerSeries {
    /// A series with every in-box coefficient computed by `f`.
    pub fn from_fn(fp: &FixedPoint, n: usize, bound: i64, mut f: impl FnMut(&[i64]) -> Result<Expr>) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for d in cone_box(&fp.cone_signs(), bound) {
            let c = f(&d)?;
            coeffs.insert(d, Some(c));
        }
        Ok(KahlerSeries { fp: fp.clone(), n, bound, coeffs })
    }

    pub fn constant(fp: &FixedPoint, n: usize, bound: i64, c: Expr) -> Self {
        KahlerSeries::from_fn(fp, n, bound, |d| Ok(if d.iter().all(|x| *x == 0) { c.clone() } else { Expr::zero() })).expect("infallible")
    }

    pub fn in_box(&self, d: &[i64]) -> bool {
        d.len() == self.fp.complement.len() && d.iter().all(|x| x.abs() <= self.bound)
    }
    pub fn in_cone(&self, d: &[i64]) -> bool {
        d.iter().zip(self.fp.cone_signs()).all(|(x, s)| x * s >= 0)
    }

    /// The coefficient of ζ^d: zero off the cone, an error outside the box or when unknown.
    pub fn get(&self, d: &[i64]) -> Result<Expr> {
        if !self.in_box(d) {
            return Err(Error::UnknownCoefficientAccess(d.to_vec()));
        }
        if !self.in_cone(d) {
            return Ok(Expr::zero());
        }
        match self.coeffs.get(d) {
            Some(Some(c)) => Ok(c.clone()),
            _ => Err(Error::UnknownCoefficientAccess(d.to_vec())),
        }
    }

    pub fn is_known(&self, d: &[i64]) -> bool {
        self.get(d).is_ok()
    }

    pub fn degrees(&self) -> Vec<Vec<i64>> {
        self.coeffs.keys().cloned().collect()
    }
    pub fn known_degrees(&self) -> Vec<Vec<i64>> {
        self.coeffs.iter().filter(|x| x.1.is_some()).map(|x| x.0.clone()).collect()
    }

    /// Degree of L_i for a degree vector.
    pub fn line_degree(&self, i: usize, d: &[i64]) -> i64 {
        self.fp.degrees(d, self.n)[i]
    }

    fn check_compatible(&self, o: &KahlerSeries) -> Result<()> {
        if self.fp.p != o.fp.p || self.n != o.n {
            return Err(Error::BoxMismatch(format!("base points {} and {}", self.fp.label(), o.fp.label())));
        }
        Ok(())
    }

    fn zip(&self, o: &KahlerSeries, f: impl Fn(&Expr, &Expr) -> Expr) -> Result<KahlerSeries> {
        self.check_compatible(o)?;
        let bound = self.bound.min(o.bound);
        let mut coeffs = BTreeMap::new();
        for d in cone_box(&self.fp.cone_signs(), bound) {
            let v = match (self.get(&d), o.get(&d)) {
                (Ok(a), Ok(b)) => Some(f(&a, &b)),
                _ => None,
            };
            coeffs.insert(d, v);
        }
        Ok(KahlerSeries { fp: self.fp.clone(), n: self.n, bound, coeffs })
    }

    pub fn add(&self, o: &KahlerSeries) -> Result<KahlerSeries> {
        self.zip(o, |a, b| a.add(b))
    }
    pub fn sub(&self, o: &KahlerSeries) -> Result<KahlerSeries> {
        self.zip(o, |a, b| a.sub(b))
    }

    /// Cauchy product; a coefficient is known when every contributing pair is.
    pub fn mul(&self, o: &KahlerSeries) -> Result<KahlerSeries> {
        self.check_compatible(o)?;
        let bound = self.bound.min(o.bound);
        let mut coeffs = BTreeMap::new();
        let signs = self.fp.cone_signs();
        for d in cone_box(&signs, bound) {
            let mut acc = Some(Expr::zero());
            for g in cone_box(&signs, bound) {
                if g.iter().zip(&d).any(|(a, b)| a.abs() > b.abs()) {
                    continue;
                }
                let h: Vec<i64> = d.iter().zip(&g).map(|(a, b)| a - b).collect();
                match (self.get(&g), o.get(&h), acc.as_mut()) {
                    (Ok(a), Ok(b), Some(s)) => *s = s.add(&a.mul(&b)),
                    _ => acc = None,
                }
            }
            coeffs.insert(d, acc);
        }
        Ok(KahlerSeries { fp: self.fp.clone(), n: self.n, bound, coeffs })
    }

    pub fn map(&self, f: impl Fn(&[i64], &Expr) -> Result<Expr>) -> Result<KahlerSeries> {
        let mut coeffs = BTreeMap::new();
        for (d, c) in &self.coeffs {
            let v = match c {
                Some(c) => Some(f(d, c)?),
                None => None,
            };
            coeffs.insert(d.clone(), v);
        }
        Ok(KahlerSeries { fp: self.fp.clone(), n: self.n, bound: self.bound, coeffs })
    }

    pub fn scale(&self, c: &Prod) -> KahlerSeries {
        self.map(|_, e| Ok(e.mul_prod(c))).expect("infallible")
    }

    /// Multiplication by ζ^g: the new coefficient at d is the old one at d − g.
    pub fn shift_degree(&self, g: &[i64]) -> KahlerSeries {
        let mut coeffs = BTreeMap::new();
        for d in self.coeffs.keys() {
            let src: Vec<i64> = d.iter().zip(g).map(|(a, b)| a - b).collect();
            let v = if !self.in_box(&src) {
                None
            } else if !self.in_cone(&src) {
                Some(Expr::zero())
            } else {
                self.coeffs.get(&src).cloned().flatten()
            };
            coeffs.insert(d.clone(), v);
        }
        KahlerSeries { fp: self.fp.clone(), n: self.n, bound: self.bound, coeffs }
    }

    /// Coefficientwise substitution a_i → q a_i for i in `set`.
    pub fn shift_equivariant(&self, set: &[usize]) -> Result<KahlerSeries> {
        let f = move |s: Sym| match s {
            Sym::A(i) if set.contains(&(i as usize)) => Some(SignedMono::plain(Mono::from_pairs([(Sym::A(i), 1), (Sym::QH, 2)]))),
            _ => None,
        };
        self.map(|_, e| e.subst(&f))
    }

    /// L̂_i: multiplies the degree-d coefficient by x_i|_p q^{D_i(d)}.
    pub fn line_shift(&self, i: usize) -> KahlerSeries {
        let x = self.fp.restriction(i);
        self.map(|d, e| {
            let y = x.mul(&q_pow(self.line_degree(i, d) as i32));
            Ok(e.mul_prod(&Prod::signed(&y)))
        })
        .expect("infallible")
    }

    /// Replaces a coefficient (used for negative controls).
    pub fn set(&mut self, d: &[i64], c: Expr) -> Result<()> {
        match self.coeffs.get_mut(d) {
            Some(slot) => {
                *slot = Some(c);
                Ok(())
            }
            None => Err(Error::UnknownCoefficientAccess(d.to_vec())),
        }
    }

    /// Numeric value Σ c_d ζ(p)^d; fails on unknown coefficients.
    pub fn eval(&self, asg: &Assignment) -> Result<Complex64> {
        let mut v = Complex64::new(0.0, 0.0);
        for (d, c) in &self.coeffs {
            let c = c.as_ref().ok_or_else(|| Error::UnknownCoefficientAccess(d.clone()))?;
            let mut m = Mono::one();
            for (jj, &j) in self.fp.complement.iter().enumerate() {
                m = m.mul(&self.fp.zeta(j).pow(d[jj] as i32));
            }
            v += asg.expr(c)? * asg.mono(&m)?;
        }
        Ok(v)
    }

    pub fn to_json(&self) -> Vec<SeriesEntry> {
        self.coeffs
            .iter()
            .map(|(d, c)| SeriesEntry { degree: d.clone(), coeff: c.as_ref().map_or("unknown".to_string(), |e| e.canonical_string()) })
            .collect()
    }
}
