//! Multivariate polynomial gcd over ℚ (recursive primitive remainder sequences).
//!
//! Laurent inputs are shifted to polynomials first; the result is normalized
//! (no monomial content, leading coefficient 1), so it is defined up to units.

use super::poly::Poly;
use super::symbol::{Mono, Sym};

pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.normalized();
    }
    if b.is_zero() {
        return a.normalized();
    }
    let a = a.normalized();
    let b = b.normalized();
    if a.as_constant().is_some() || b.as_constant().is_some() {
        return Poly::one();
    }
    let vars: Vec<Sym> = a.symbols().union(&b.symbols()).copied().collect();
    let v = vars[0];
    let (ina, inb) = (a.symbols().contains(&v), b.symbols().contains(&v));
    match (ina, inb) {
        (false, _) => gcd(&a, &content(&b, v)),
        (_, false) => gcd(&content(&a, v), &b),
        _ => {
            let ca = content(&a, v);
            let cb = content(&b, v);
            let c = gcd(&ca, &cb);
            let mut p = a.div_exact(&ca).expect("content divides");
            let mut r = b.div_exact(&cb).expect("content divides");
            if deg(&p, v) < deg(&r, v) {
                std::mem::swap(&mut p, &mut r);
            }
            while !r.is_zero() {
                let rem = prem(&p, &r, v);
                p = r;
                r = if rem.is_zero() { rem } else { primitive(&rem, v) };
                if !r.is_zero() && deg(&r, v) == 0 {
                    // coprime in v after removing contents
                    return c.normalized();
                }
            }
            c.mul(&primitive(&p, v)).normalized()
        }
    }
}

fn deg(p: &Poly, v: Sym) -> i32 {
    p.degree_range(v).1
}

/// gcd of the coefficients of `p` viewed as a polynomial in `v`.
pub fn content(p: &Poly, v: Sym) -> Poly {
    let mut g = Poly::zero();
    for c in p.coeffs_in(v).values() {
        g = gcd(&g, c);
        if g.as_constant().is_some() {
            return Poly::one();
        }
    }
    g
}

fn primitive(p: &Poly, v: Sym) -> Poly {
    let c = content(p, v);
    p.div_exact(&c).expect("content divides").normalized()
}

/// Pseudo-remainder of `a` by `b` in the variable `v` (both polynomials in `v`).
fn prem(a: &Poly, b: &Poly, v: Sym) -> Poly {
    let db = deg(b, v);
    let lb = b.coeffs_in(v).remove(&db).unwrap();
    let mut r = a.clone();
    while !r.is_zero() && deg(&r, v) >= db {
        let dr = deg(&r, v);
        let lr = r.coeffs_in(v).remove(&dr).unwrap();
        let shift = Mono::var(v, dr - db);
        r = r.mul(&lb).sub(&b.mul(&lr).mul_mono(&shift));
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symalg::poly::rat;

    fn var(i: u16) -> Poly {
        Poly::mono(Mono::var(Sym::A(i), 1))
    }

    #[test]
    fn common_factor() {
        let (a, b, c) = (var(0), var(1), var(2));
        let g = a.add(&b).add(&Poly::one());
        let f1 = g.mul(&a.sub(&c));
        let f2 = g.mul(&b.mul(&b).add(&Poly::constant(rat(2))));
        assert_eq!(gcd(&f1, &f2), g.normalized());
        assert_eq!(gcd(&a.sub(&c), &b), Poly::one());
    }

    #[test]
    fn laurent_units_ignored() {
        let (a, b) = (var(0), var(1));
        let g = a.sub(&b);
        let f1 = g.mul(&Poly::mono(Mono::var(Sym::A(0), -3)));
        assert_eq!(gcd(&f1, &g.mul(&b)), g.normalized());
    }
}
