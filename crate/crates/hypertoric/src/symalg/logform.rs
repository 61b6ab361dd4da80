//! Quadratic forms in logarithms of parameters, standing for exp(B / ln q).

use super::poly::rat;
use super::symbol::{Mono, SignedMono, Sym};
use crate::error::Error;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// A logarithmic coordinate: ln q, ln ħ, ln(−1) or ln of a natural-unit symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LSym {
    Q,
    H,
    M1,
    S(Sym),
}

impl fmt::Display for LSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LSym::Q => write!(f, "ln q"),
            LSym::H => write!(f, "ln hbar"),
            LSym::M1 => write!(f, "ln(-1)"),
            LSym::S(s) => write!(f, "ln {}", s),
        }
    }
}

/// A linear form in logarithmic coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LinForm(pub BTreeMap<LSym, BigRational>);

impl LinForm {
    pub fn zero() -> Self {
        LinForm::default()
    }
    pub fn var(s: LSym) -> Self {
        LinForm::var_scaled(s, BigRational::one())
    }
    pub fn var_scaled(s: LSym, c: BigRational) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(s, c);
        }
        LinForm(m)
    }
    /// ln of a signed monomial.
    pub fn log_of(y: &SignedMono) -> Self {
        let mut l = LinForm::var_scaled(LSym::M1, rat(y.phase as i64));
        for &(s, e) in y.m.pairs() {
            let (k, c) = match s {
                Sym::QH => (LSym::Q, BigRational::new(e.into(), 2.into())),
                Sym::HH => (LSym::H, BigRational::new(e.into(), 2.into())),
                other => (LSym::S(other), rat(e as i64)),
            };
            l = l.add(&LinForm::var_scaled(k, c));
        }
        l
    }
    pub fn add(&self, o: &LinForm) -> LinForm {
        let mut m = self.0.clone();
        for (k, c) in &o.0 {
            let e = m.entry(*k).or_insert_with(BigRational::zero);
            *e += c;
            if e.is_zero() {
                m.remove(k);
            }
        }
        LinForm(m)
    }
    pub fn scale(&self, c: &BigRational) -> LinForm {
        if c.is_zero() {
            return LinForm::zero();
        }
        LinForm(self.0.iter().map(|(k, x)| (*k, x * c)).collect())
    }
    pub fn neg(&self) -> LinForm {
        self.scale(&rat(-1))
    }
    pub fn sub(&self, o: &LinForm) -> LinForm {
        self.add(&o.neg())
    }
    pub fn coeff(&self, s: LSym) -> BigRational {
        self.0.get(&s).cloned().unwrap_or_else(BigRational::zero)
    }

    /// exp of the form as a signed monomial; requires half-integral q, ħ and integral others.
    pub fn to_signed_mono(&self) -> Result<SignedMono, Error> {
        let mut phase = 0;
        let mut pairs = Vec::new();
        for (k, c) in &self.0 {
            let (s, c2) = match k {
                LSym::M1 => {
                    phase = as_int(c).ok_or_else(|| Error::NonMonomialShift(format!("ln(-1) coefficient {}", c)))?;
                    continue;
                }
                LSym::Q => (Sym::QH, c * rat(2)),
                LSym::H => (Sym::HH, c * rat(2)),
                LSym::S(s) => (*s, c.clone()),
            };
            let e = as_int(&c2).ok_or_else(|| Error::NonMonomialShift(format!("exponent {} of {}", c, k)))?;
            pairs.push((s, e));
        }
        Ok(SignedMono::new(phase, Mono::from_pairs(pairs)))
    }
}

fn as_int(c: &BigRational) -> Option<i32> {
    if c.is_integer() {
        c.to_integer().to_i32()
    } else {
        None
    }
}

/// A homogeneous quadratic form B in logarithmic coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LogPrefactor(pub BTreeMap<(LSym, LSym), BigRational>);

impl LogPrefactor {
    pub fn zero() -> Self {
        LogPrefactor::default()
    }

    fn add_term(&mut self, a: LSym, b: LSym, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let key = if a <= b { (a, b) } else { (b, a) };
        let e = self.0.entry(key).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.0.remove(&key);
        }
    }

    /// The product form l1 · l2.
    pub fn product(l1: &LinForm, l2: &LinForm) -> Self {
        let mut b = LogPrefactor::zero();
        for (s, c) in &l1.0 {
            for (t, d) in &l2.0 {
                b.add_term(*s, *t, c * d);
            }
        }
        b
    }

    pub fn add(&self, o: &LogPrefactor) -> LogPrefactor {
        let mut b = self.clone();
        for ((s, t), c) in &o.0 {
            b.add_term(*s, *t, c.clone());
        }
        b
    }
    pub fn neg(&self) -> LogPrefactor {
        LogPrefactor(self.0.iter().map(|(k, c)| (*k, -c)).collect())
    }
    pub fn sub(&self, o: &LogPrefactor) -> LogPrefactor {
        self.add(&o.neg())
    }
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Substitutes each coordinate by a linear form (coordinates without image stay).
    pub fn substitute(&self, f: &dyn Fn(LSym) -> Option<LinForm>) -> LogPrefactor {
        let img = |s: LSym| f(s).unwrap_or_else(|| LinForm::var(s));
        let mut b = LogPrefactor::zero();
        for ((s, t), c) in &self.0 {
            b = b.add(&LogPrefactor::product(&img(*s).scale(c), &img(*t)));
        }
        b
    }

    /// B(ℓ + amount·ln q·e_s).
    pub fn translate(&self, s: Sym, amount: &BigRational) -> LogPrefactor {
        let key = LinForm::log_of(&SignedMono::plain(Mono::var(s, 1)));
        let (ls, unit) = key.0.into_iter().next().expect("symbol has a log coordinate");
        let shift = LinForm::var(ls).add(&LinForm::var_scaled(LSym::Q, amount / unit));
        self.substitute(&|x| if x == ls { Some(shift.clone()) } else { None })
    }

    /// exp((B(ℓ + amount·ln q·e_s) − B(ℓ)) / ln q) as a signed monomial.
    pub fn shift(&self, s: Sym, amount: &BigRational) -> Result<SignedMono, Error> {
        self.shift_many(&[(s, amount.clone())])
    }

    /// The joint shift of several symbols at once.
    pub fn shift_many(&self, shifts: &[(Sym, BigRational)]) -> Result<SignedMono, Error> {
        let moved = shifts.iter().fold(self.clone(), |b, (s, c)| b.translate(*s, c));
        let diff = moved.sub(self);
        let mut lin = LinForm::zero();
        for ((a, b), c) in &diff.0 {
            let other = if *a == LSym::Q {
                *b
            } else if *b == LSym::Q {
                *a
            } else {
                return Err(Error::NonMonomialShift(format!("term {} * {} survives", a, b)));
            };
            lin = lin.add(&LinForm::var_scaled(other, c.clone()));
        }
        lin.to_signed_mono()
    }
}

impl fmt::Display for LogPrefactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.0.iter().map(|((a, b), c)| format!("({})*({})*({})", c, a, b)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}
