//! Bare vertex functions at fixed points, exact checks of the Kähler and
//! equivariant q-difference systems, boundedness, the chamber limit and the
//! residue criterion along invariant curves.

use crate::arrangement::{FixedPoint, InvariantCurve, SignedSet};
use crate::error::{Error, Result};
use crate::qseries::{bracket, bracket_second_form, pochhammer, KahlerSeries};
use crate::symalg::logform::{LinForm, LogPrefactor};
use crate::symalg::numeric::Assignment;
use crate::symalg::poly::{rat, subst_signed};
use crate::symalg::theta::ThetaExpr;
use crate::symalg::{Expr, Mono, Poly, Prod, SignedMono, Sym};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;
use std::collections::BTreeMap;

pub fn q_pow(l: i32) -> SignedMono {
    SignedMono::plain(Mono::q(2 * l))
}
pub fn hbar_pow(l: i32) -> SignedMono {
    SignedMono::plain(Mono::hbar(2 * l))
}
/// q ħ^{-1}.
pub fn q_over_hbar() -> SignedMono {
    SignedMono::plain(Mono::from_pairs([(Sym::QH, 2), (Sym::HH, -2)]))
}

fn var(s: Sym) -> SignedMono {
    SignedMono::plain(Mono::var(s, 1))
}

/// z_♯,i = −ħ^{−1/2} z_i.
pub fn z_sharp(i: usize) -> SignedMono {
    SignedMono::new(1, Mono::from_pairs([(Sym::Z(i as u16), 1), (Sym::HH, -1)]))
}

/// ε(i) at p: 1 on A⁺ and 0 on A⁻ ∪ p.
pub fn epsilon(fp: &FixedPoint, i: usize) -> i32 {
    i32::from(fp.in_a_plus(i))
}

/// z_ε,i(p) = z_♯,i (qħ^{−1})^{−ε(i)}.
pub fn z_eps(fp: &FixedPoint, i: usize) -> SignedMono {
    z_sharp(i).mul(&q_over_hbar().pow(-epsilon(fp, i)))
}

/// ζ_♯,j(p): ζ_j(p) with every z replaced by z_♯.
pub fn zeta_sharp(fp: &FixedPoint, j: usize) -> SignedMono {
    let e = 1 + fp.p.iter().map(|&i| fp.c_ij(i, j) as i32).sum::<i32>();
    SignedMono::plain(fp.zeta(j)).mul(&SignedMono::new(e, Mono::hbar(-e)))
}

/// Σ_i ln z_ε,i(p) · ln x_i|_p.
pub fn kahler_prefactor(fp: &FixedPoint, n: usize) -> LogPrefactor {
    (0..n).fold(LogPrefactor::zero(), |b, i| b.add(&LogPrefactor::product(&LinForm::log_of(&z_eps(fp, i)), &LinForm::log_of(&fp.restriction(i)))))
}

/// Σ_i ln z_♯,i · ln a_i.
pub fn equivariant_prefactor(n: usize) -> LogPrefactor {
    (0..n).fold(LogPrefactor::zero(), |b, i| b.add(&LogPrefactor::product(&LinForm::log_of(&z_sharp(i)), &LinForm::log_of(&var(Sym::A(i as u16))))))
}

/// A formal product ∏ φ(y)^e.
pub type PhiMultiset = BTreeMap<SignedMono, i32>;

pub fn bump_phi(m: &mut PhiMultiset, y: SignedMono, e: i32) {
    let v = m.entry(y.clone()).or_insert(0);
    *v += e;
    if *v == 0 {
        m.remove(&y);
    }
}

/// Φ((q − ħ) T½|_p) for T½ = Σ x_i − k.
pub fn t_half_phi(fp: &FixedPoint, n: usize, k: usize) -> PhiMultiset {
    let mut m = PhiMultiset::new();
    for i in 0..n {
        let x = fp.restriction(i);
        bump_phi(&mut m, q_pow(1).mul(&x), 1);
        bump_phi(&mut m, hbar_pow(1).mul(&x), -1);
    }
    bump_phi(&mut m, q_pow(1), -(k as i32));
    bump_phi(&mut m, hbar_pow(1), k as i32);
    m
}

pub fn phi_multiset_expr(m: &PhiMultiset) -> ThetaExpr {
    let mut t = ThetaExpr::one();
    t.phi = m.clone();
    t
}

/// ∏ φ(f(y))^e / φ(y)^e when every f(y)/y is an integral power of q.
pub fn phi_shift_ratio(m: &PhiMultiset, f: &dyn Fn(Sym) -> Option<SignedMono>) -> Result<Prod> {
    let mut out = Prod::one();
    for (y, &e) in m {
        let y2 = subst_signed(y, f);
        let r = y2.div(y);
        let qe = r.m.exp(Sym::QH);
        if r.m.without(Sym::QH) != Mono::one() || qe % 2 != 0 || r.phase.rem_euclid(2) != 0 {
            return Err(Error::NonMonomialShift(format!("phi({}) shifts to phi({})", y, y2)));
        }
        let j = qe / 2;
        if j == 0 {
            continue;
        }
        if y.m.is_one() && y.sign() > 0 {
            return Err(Error::SingularFactor("a shifted phi(1) factor".into()));
        }
        // φ(q^j y)/φ(y) = 1/(y)_j
        out = out.mul(&pochhammer(y, j).pow(-e)?);
    }
    Ok(out)
}

/// Splits a signed monomial into ζ(p)^d and a z-free constant.
pub fn split_kahler(fp: &FixedPoint, n: usize, m: &SignedMono) -> Result<(Vec<i64>, SignedMono)> {
    let z: Vec<i64> = (0..n).map(|i| m.m.exp(Sym::Z(i as u16)) as i64).collect();
    let d: Vec<i64> = fp.complement.iter().map(|&j| z[j]).collect();
    if fp.degrees(&d, n) != z {
        return Err(Error::NonMonomialShift(format!("{} is not a monomial in zeta({})", m, fp.label())));
    }
    let rest = Mono::from_pairs(m.m.pairs().iter().copied().filter(|p| !matches!(p.0, Sym::Z(_))));
    Ok((d, SignedMono::new(m.phase, rest)))
}

/// Which closed form of the bracket to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BracketForm {
    First,
    Second,
}

/// τ(x|_p q^D) for a Laurent polynomial τ in the x symbols.
fn tau_at(tau: &Poly, fp: &FixedPoint, dd: &[i64]) -> Prod {
    let v = tau.subst(&|s| match s {
        Sym::X(i) => Some(fp.restriction(i as usize).mul(&q_pow(dd[i as usize] as i32))),
        _ => None,
    });
    if v.is_zero() {
        Prod::zero()
    } else {
        Prod::from_poly(&v)
    }
}

/// The coefficient of ζ(p)^d: q^{−½ΣD}·∏{x_i|_p}_{D_i}·τ(x|_p q^D).
pub fn vertex_coefficient(fp: &FixedPoint, n: usize, d: &[i64], tau: Option<&Poly>, form: BracketForm) -> Result<Expr> {
    let dd = fp.degrees(d, n);
    let mut c = Prod::mono(Mono::q(-dd.iter().sum::<i64>() as i32));
    for (i, &di) in dd.iter().enumerate() {
        let x = fp.restriction(i);
        let b = match form {
            BracketForm::First => bracket(&x, di as i32)?,
            BracketForm::Second => bracket_second_form(&x, di as i32)?,
        };
        c = c.mul(&b);
    }
    if let Some(t) = tau {
        c = c.mul(&tau_at(t, fp, &dd));
    }
    Ok(Expr::from_prod(c))
}

/// The bare vertex restricted to p, on the box |d_j| ≤ bound.
pub fn bare_vertex(fp: &FixedPoint, n: usize, tau: Option<&Poly>, bound: i64) -> Result<KahlerSeries> {
    bare_vertex_with(fp, n, tau, bound, BracketForm::First)
}

pub fn bare_vertex_with(fp: &FixedPoint, n: usize, tau: Option<&Poly>, bound: i64, form: BracketForm) -> Result<KahlerSeries> {
    KahlerSeries::from_fn(fp, n, bound, |d| vertex_coefficient(fp, n, d, tau, form))
}

/// ∏_i (ħ x_i|_p)_{D_i}/(q x_i|_p)_{D_i}: the coefficient of z_♯^β.
pub fn sharp_coefficient(fp: &FixedPoint, n: usize, d: &[i64]) -> Result<Prod> {
    let dd = fp.degrees(d, n);
    let mut c = Prod::one();
    for (i, &di) in dd.iter().enumerate() {
        let x = fp.restriction(i);
        c = c.mul(&pochhammer(&hbar_pow(1).mul(&x), di as i32)).div(&pochhammer(&q_pow(1).mul(&x), di as i32))?;
    }
    Ok(c)
}

/// T½ + ħ^{-1}(T½)^∨ = T_X at p, compared as character multisets.
pub fn polarization_check(fp: &FixedPoint, n: usize, k: usize) -> bool {
    let mut lhs: BTreeMap<SignedMono, i64> = BTreeMap::new();
    let add = |m: &mut BTreeMap<SignedMono, i64>, y: SignedMono, e: i64| *m.entry(y).or_insert(0) += e;
    let hinv = hbar_pow(-1);
    for i in 0..n {
        let x = fp.restriction(i);
        add(&mut lhs, x.clone(), 1);
        add(&mut lhs, hinv.mul(&x.inv()), 1);
    }
    add(&mut lhs, SignedMono::one(), -(k as i64));
    add(&mut lhs, hinv.clone(), -(k as i64));
    let mut rhs: BTreeMap<SignedMono, i64> = BTreeMap::new();
    for &i in &fp.p {
        let x = fp.restriction(i);
        add(&mut rhs, x.clone(), 1);
        add(&mut rhs, hinv.mul(&x.inv()), 1);
    }
    lhs.retain(|_, v| *v != 0);
    rhs.retain(|_, v| *v != 0);
    lhs == rhs
}

#[derive(Clone, Debug, Serialize)]
pub struct QdeReport {
    pub kind: String,
    pub fixed_point: String,
    pub relation: String,
    pub checked: usize,
    pub skipped: usize,
    pub max_degree: i64,
}

fn total_degree(d: &[i64]) -> i64 {
    d.iter().map(|x| x.abs()).sum()
}

fn sub_vec(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Verifies ∏_{S⁺}(1−L̂_i)∏_{S⁻}(1−ħL̂_i)V = z_♯^β ∏_{S⁺}(1−ħL̂_i)∏_{S⁻}(1−L̂_i)V
/// coefficientwise; L̂_i comes from shifting z_i in the Kähler prefactor.
pub fn check_circuit_qde(fp: &FixedPoint, n: usize, circuit: &SignedSet, v: &KahlerSeries) -> Result<QdeReport> {
    let zb = circuit.vector.iter().enumerate().fold(SignedMono::one(), |acc, (i, &e)| acc.mul(&z_sharp(i).pow(e as i32)));
    check_circuit_qde_general(fp, n, circuit, v, &kahler_prefactor(fp, n), &zb)
}

/// The circuit identity for an arbitrary Kähler prefactor and right-hand monomial.
pub fn check_circuit_qde_general(fp: &FixedPoint, n: usize, circuit: &SignedSet, v: &KahlerSeries, pre: &LogPrefactor, zb: &SignedMono) -> Result<QdeReport> {
    let one = BigRational::one();
    let lam: Vec<SignedMono> = (0..n).map(|i| pre.shift(Sym::Z(i as u16), &one)).collect::<Result<_>>()?;
    let (g, konst) = split_kahler(fp, n, zb)?;
    let h = hbar_pow(1);
    let factor = |dd: &[i64], hbar_on_plus: bool| -> Prod {
        let mut p = Prod::one();
        for i in circuit.support() {
            let y = lam[i].mul(&q_pow(dd[i] as i32));
            let with_h = (circuit.vector[i] > 0) == hbar_on_plus;
            p = p.mul(&Prod::one_minus(&if with_h { h.mul(&y) } else { y }));
        }
        p
    };
    let mut report = QdeReport { kind: "circuit".into(), fixed_point: fp.label(), relation: circuit.describe(), checked: 0, skipped: 0, max_degree: 0 };
    for d in v.degrees() {
        let src = sub_vec(&d, &g);
        let (c, c2) = match (v.get(&d), v.get(&src)) {
            (Ok(a), Ok(b)) => (a, b),
            _ => {
                report.skipped += 1;
                continue;
            }
        };
        let lhs = c.mul_prod(&factor(&fp.degrees(&d, n), false));
        let rhs = c2.mul_prod(&factor(&fp.degrees(&src, n), true).mul(&Prod::signed(&konst)));
        let res = lhs.sub(&rhs);
        if !res.is_zero() {
            return Err(Error::IdentityFailure { degree: d, residual: res.canonical_string() });
        }
        report.checked += 1;
        report.max_degree = report.max_degree.max(total_degree(&d));
    }
    Ok(report)
}

/// One expanded term c·Â_T of the cocircuit operator.
struct ShiftTerm {
    set: Vec<usize>,
    konst: Prod,
    delta: Vec<i64>,
    series: KahlerSeries,
}

/// The conjugated Â_T: (Â_T V)_β = M_T · R_T · (V with a_T → q a_T)_{β − δ_T}.
fn shift_term(fp: &FixedPoint, n: usize, k: usize, set: &[usize], v: &KahlerSeries) -> Result<ShiftTerm> {
    let b = kahler_prefactor(fp, n).sub(&equivariant_prefactor(n));
    let shifts: Vec<(Sym, BigRational)> = set.iter().map(|&i| (Sym::A(i as u16), BigRational::one())).collect();
    let m = b.shift_many(&shifts)?;
    let (delta, konst) = split_kahler(fp, n, &m)?;
    let sub = |s: Sym| match s {
        Sym::A(i) if set.contains(&(i as usize)) => Some(var(s).mul(&q_pow(1))),
        _ => None,
    };
    let r = phi_shift_ratio(&t_half_phi(fp, n, k), &sub)?;
    Ok(ShiftTerm { set: set.to_vec(), konst: Prod::signed(&konst).mul(&r), delta, series: v.shift_equivariant(set)? })
}

/// (ħa)^α = ∏_{R⁺} ħa_i ∏_{R⁻} (ħa_i)^{-1}.
pub fn root_factor(co: &SignedSet) -> Prod {
    let mut m = SignedMono::one();
    for (i, &e) in co.vector.iter().enumerate() {
        m = m.mul(&hbar_pow(1).mul(&var(Sym::A(i as u16))).pow(e as i32));
    }
    Prod::signed(&m)
}

/// Verifies ∏_{R⁺}(1−Â_i)∏_{R⁻}(1−qħ^{−1}Â_i)V = (ħa)^α ∏_{R⁺}(1−qħ^{−1}Â_i)∏_{R⁻}(1−Â_i)V.
pub fn check_cocircuit_qde(fp: &FixedPoint, n: usize, k: usize, co: &SignedSet, v: &KahlerSeries) -> Result<QdeReport> {
    check_cocircuit_qde_with(fp, n, k, co, v, &root_factor(co))
}

/// As `check_cocircuit_qde` with an explicit right-hand factor in place of (ħa)^α.
pub fn check_cocircuit_qde_with(fp: &FixedPoint, n: usize, k: usize, co: &SignedSet, v: &KahlerSeries, alpha: &Prod) -> Result<QdeReport> {
    let supp = co.support();
    let c = Prod::signed(&q_over_hbar());
    let mut terms = Vec::new();
    for mask in 0u32..(1 << supp.len()) {
        let set: Vec<usize> = supp.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|x| *x.1).collect();
        terms.push(shift_term(fp, n, k, &set, v)?);
    }
    let coef = |set: &[usize], on_plus: bool| -> Prod {
        let hits = set.iter().filter(|&&i| (co.vector[i] > 0) == on_plus).count() as i32;
        let sign = if set.len() % 2 == 1 { Prod::int(-1) } else { Prod::one() };
        sign.mul(&c.pow(hits).expect("nonzero"))
    };
    let mut report = QdeReport { kind: "cocircuit".into(), fixed_point: fp.label(), relation: co.describe(), checked: 0, skipped: 0, max_degree: 0 };
    'deg: for d in v.degrees() {
        let mut lhs = Expr::zero();
        let mut rhs = Expr::zero();
        for t in &terms {
            let src = sub_vec(&d, &t.delta);
            let Ok(val) = t.series.get(&src) else {
                report.skipped += 1;
                continue 'deg;
            };
            let x = val.mul_prod(&t.konst);
            lhs = lhs.add(&x.mul_prod(&coef(&t.set, false)));
            rhs = rhs.add(&x.mul_prod(&coef(&t.set, true)));
        }
        let res = lhs.sub(&rhs.mul_prod(alpha));
        if !res.is_zero() {
            return Err(Error::IdentityFailure { degree: d, residual: res.canonical_string() });
        }
        report.checked += 1;
        report.max_degree = report.max_degree.max(total_degree(&d));
    }
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundednessEntry {
    pub degree: Vec<i64>,
    /// Lowest and highest power of q^{1/2} in the Laurent expansions at 0 and ∞.
    pub order_at_zero: i32,
    pub order_at_infinity: i32,
    pub bounded: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundednessReport {
    pub fixed_point: String,
    pub entries: Vec<BoundednessEntry>,
    pub all_bounded: bool,
}

/// Every coefficient has a finite limit both as q → 0 and as q → ∞.
pub fn q_boundedness(v: &KahlerSeries) -> Result<BoundednessReport> {
    let mut entries = Vec::new();
    for d in v.known_degrees() {
        let c = v.get(&d)?;
        let (lo, hi) = c.q_order();
        entries.push(BoundednessEntry { degree: d, order_at_zero: lo, order_at_infinity: hi, bounded: lo >= 0 && hi <= 0 });
    }
    let all_bounded = entries.iter().all(|e| e.bounded);
    Ok(BoundednessReport { fixed_point: v.fp.label(), entries, all_bounded })
}

/// The closed-form limit of V|_p as α(p) → 0 along σ; `perturb` puts a wrong ħ in the numerators.
pub fn limit_closed_form(fp: &FixedPoint, perturb: bool) -> ThetaExpr {
    let mut m = PhiMultiset::new();
    let h = if perturb { hbar_pow(2) } else { hbar_pow(1) };
    for (jj, &j) in fp.complement.iter().enumerate() {
        let _ = jj;
        let s: i32 = fp.p_plus.iter().map(|&i| fp.c_ij(i, j) as i32).sum();
        let w = zeta_sharp(fp, j).mul(&q_over_hbar().pow(-s));
        if fp.in_a_plus(j) {
            bump_phi(&mut m, h.mul(&w), 1);
            bump_phi(&mut m, w, -1);
        } else {
            let wi = w.inv();
            let num = if perturb { q_pow(1).mul(&hbar_pow(1)) } else { q_pow(1) };
            bump_phi(&mut m, num.mul(&wi), 1);
            bump_phi(&mut m, q_over_hbar().mul(&wi), -1);
        }
    }
    phi_multiset_expr(&m)
}

/// Numeric setup of the limit along α_i(p) = w_i t^{∓1}.
#[derive(Clone, Debug)]
pub struct LimitSetup {
    pub q: Complex64,
    pub hbar: Complex64,
    /// Base values w_i, one per element of p (in order).
    pub w: Vec<Complex64>,
    /// Values of ζ_j(p), one per element of the complement.
    pub zeta: Vec<Complex64>,
    pub ts: Vec<f64>,
    pub trunc: usize,
    pub tol: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitReport {
    pub fixed_point: String,
    pub ts: Vec<f64>,
    pub raw_deviations: Vec<f64>,
    pub extrapolated_deviation: f64,
    pub truncation_tail: f64,
    pub passed: bool,
}

fn limit_assignment(fp: &FixedPoint, n: usize, s: &LimitSetup, t: f64) -> Assignment {
    let mut asg = Assignment::new();
    asg.set_q(s.q).set_hbar(s.hbar);
    for i in 0..n {
        asg.set(Sym::A(i as u16), Complex64::new(1.0, 0.0));
        asg.set(Sym::Z(i as u16), Complex64::new(1.0, 0.0));
    }
    for (r, &i) in fp.p.iter().enumerate() {
        let a = if fp.in_p_plus(i) { s.w[r] / t } else { s.w[r] * t };
        asg.set(Sym::A(i as u16), a);
    }
    for (c, &j) in fp.complement.iter().enumerate() {
        asg.set(Sym::Z(j as u16), s.zeta[c]);
    }
    asg
}

/// Polynomial extrapolation to x = 0 through the given points.
pub fn neville_at_zero(xs: &[f64], ys: &[Complex64]) -> Complex64 {
    let mut p: Vec<Complex64> = ys.to_vec();
    let n = xs.len();
    for m in 1..n {
        for i in 0..n - m {
            p[i] = (p[i] * xs[i + m] - p[i + 1] * xs[i]) / (xs[i + m] - xs[i]);
        }
    }
    p[0]
}

/// Evaluates V|_p along the t-sequence and compares with the closed form.
pub fn vertex_limit(fp: &FixedPoint, n: usize, bound: i64, setup: &LimitSetup, perturb: bool) -> Result<LimitReport> {
    let fine = bare_vertex(fp, n, None, bound)?;
    let coarse = bare_vertex(fp, n, None, (bound - 2).max(0))?;
    let closed = limit_closed_form(fp, perturb);
    let mut values = Vec::new();
    let mut raw = Vec::new();
    let mut tail: f64 = 0.0;
    let mut target = Complex64::new(0.0, 0.0);
    for &t in &setup.ts {
        let asg = limit_assignment(fp, n, setup, t);
        let (lim, ltail) = closed.eval(&asg, setup.trunc)?;
        target = lim;
        let v = fine.eval(&asg)?;
        let vc = coarse.eval(&asg)?;
        tail = tail.max((v - vc).norm() / lim.norm()).max(ltail);
        raw.push((v - lim).norm() / lim.norm());
        values.push(v);
    }
    let ex = neville_at_zero(&setup.ts, &values);
    let dev = (ex - target).norm() / target.norm();
    if tail > setup.tol && !perturb {
        return Err(Error::ConvergenceFailure(format!("truncation tail {:.3e} exceeds tolerance {:.1e}", tail, setup.tol)));
    }
    Ok(LimitReport { fixed_point: fp.label(), ts: setup.ts.clone(), raw_deviations: raw, extrapolated_deviation: dev, truncation_tail: tail, passed: dev < setup.tol })
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidueReport {
    pub curve: String,
    pub m: u32,
    /// Degrees where a simple pole was found and the relation verified.
    pub poles_checked: usize,
    /// Degrees where both sides vanish.
    pub zero_both: usize,
    pub non_simple: Vec<Vec<i64>>,
}

/// Substitution placing q on the locus q^m λ = 1 by solving for the a-symbol of λ with exponent ±1.
fn locus_substitution(lambda: &SignedMono, m: u32) -> Result<(Sym, SignedMono)> {
    let (s, e) = lambda
        .m
        .pairs()
        .iter()
        .copied()
        .find(|p| matches!(p.0, Sym::A(_)) && p.1.abs() == 1)
        .ok_or_else(|| Error::NonMonomialShift(format!("no equivariant symbol to solve for in {}", lambda)))?;
    let rest = SignedMono::new(lambda.phase, lambda.m.without(s));
    // λ = s^e · rest = q^{−m}
    let img = q_pow(-(m as i32)).div(&rest).pow(e);
    Ok((s, img))
}

/// Residue relation at q = λ^{−1/m} between the z_♯-coefficients at the two ends of a curve.
pub fn check_jfunction_residues(p: &FixedPoint, q: &FixedPoint, curve: &InvariantCurve, n: usize, m: u32, bound: i64) -> Result<ResidueReport> {
    let lambda = &curve.tangent;
    let pole = Prod::one_minus(&q_pow(m as i32).mul(lambda));
    let (s, img) = locus_substitution(lambda, m)?;
    let sub = move |x: Sym| if x == s { Some(img.clone()) } else { None };
    let v = &curve.degrees;
    let sign = v[curve.i];
    let mut e_inv = Prod::one();
    for l in 0..n {
        if v[l] == 0 {
            continue;
        }
        let x = p.restriction(l);
        let e = m as i32 * v[l] as i32;
        e_inv = e_inv.mul(&pochhammer(&hbar_pow(1).mul(&x), e)).div(&pochhammer(&q_pow(1).mul(&x), e))?;
    }
    let e_reg = e_inv.mul(&pole);
    let mut report = ResidueReport { curve: format!("{}-{}", p.label(), q.label()), m, poles_checked: 0, zero_both: 0, non_simple: vec![] };
    let minv = Prod::constant(BigRational::new((-1).into(), (m as i64).into()));
    for d in crate::qseries::cone_box(&p.cone_signs(), bound) {
        let dd = p.degrees(&d, n);
        let cp = sharp_coefficient(p, n, &d)?;
        let lhs = match cp.subst(&sub) {
            Ok(_) => Prod::zero(),
            Err(Error::SingularFactor(_)) => match cp.mul(&pole).subst(&sub) {
                Ok(h) => h.mul(&minv),
                Err(Error::SingularFactor(_)) => {
                    report.non_simple.push(d);
                    continue;
                }
                Err(e) => return Err(e),
            },
            Err(e) => return Err(e),
        };
        let rhs = if sign * dd[curve.i] < m as i64 {
            Prod::zero()
        } else {
            let dq: Vec<i64> = (0..n).map(|l| dd[l] - m as i64 * v[l]).collect();
            let dq_c: Vec<i64> = q.complement.iter().map(|&j| dq[j]).collect();
            if q.degrees(&dq_c, n) != dq {
                return Err(Error::IdentityFailure { degree: d, residual: "shifted class is not a curve class at the other end".into() });
            }
            let in_cone = dq_c.iter().zip(q.cone_signs()).all(|(x, s)| x * s >= 0);
            if !in_cone {
                Prod::zero()
            } else {
                let cq = sharp_coefficient(q, n, &dq_c)?;
                match (e_reg.subst(&sub), cq.subst(&sub)) {
                    (Ok(a), Ok(b)) => a.mul(&b).mul(&minv),
                    _ => {
                        report.non_simple.push(d);
                        continue;
                    }
                }
            }
        };
        let res = Expr::from_prod(lhs.clone()).sub(&Expr::from_prod(rhs));
        if !res.is_zero() {
            return Err(Error::IdentityFailure { degree: d, residual: res.canonical_string() });
        }
        if lhs.is_zero() {
            report.zero_both += 1;
        } else {
            report.poles_checked += 1;
        }
    }
    Ok(report)
}

/// Parses a Laurent polynomial such as `x1*x2^-1 - 2*hbar + 1/3*a1`.
pub fn parse_laurent(src: &str) -> Result<Poly> {
    let s: String = src.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    let bytes: Vec<char> = s.chars().collect();
    for (idx, &ch) in bytes.iter().enumerate() {
        let after_caret = idx > 0 && bytes[idx - 1] == '^';
        if (ch == '+' || ch == '-') && !after_caret {
            if !cur.is_empty() {
                terms.push((neg, std::mem::take(&mut cur)));
            } else if idx > 0 {
                return Err(Error::Parse(format!("dangling sign in {}", src)));
            }
            neg = ch == '-';
        } else {
            cur.push(ch);
        }
    }
    if cur.is_empty() {
        return Err(Error::Parse(format!("trailing sign in {}", src)));
    }
    terms.push((neg, cur));
    let mut out = Poly::zero();
    for (neg, t) in terms {
        let mut c = rat(if neg { -1 } else { 1 });
        let mut m = Mono::one();
        for f in t.split('*') {
            let (base, exp) = match f.split_once('^') {
                Some((b, e)) => (b, e.parse::<i32>().map_err(|_| Error::Parse(format!("bad exponent in {}", f)))?),
                None => (f, 1),
            };
            if let Some(first) = base.chars().next() {
                if first.is_ascii_digit() {
                    let v = match base.split_once('/') {
                        Some((a, b)) => {
                            let (a, b): (i64, i64) = (a.parse().map_err(|_| Error::Parse(f.into()))?, b.parse().map_err(|_| Error::Parse(f.into()))?);
                            if b == 0 {
                                return Err(Error::Parse("zero denominator".into()));
                            }
                            BigRational::new(a.into(), b.into())
                        }
                        None => rat(base.parse().map_err(|_| Error::Parse(f.into()))?),
                    };
                    let mut pw = BigRational::one();
                    for _ in 0..exp.unsigned_abs() {
                        pw *= &v;
                    }
                    c *= if exp < 0 { pw.recip() } else { pw };
                    continue;
                }
            }
            let sym = parse_symbol(base)?;
            let e = if matches!(sym, Sym::QH | Sym::HH) { 2 * exp } else { exp };
            m = m.mul(&Mono::var(sym, e));
        }
        out = out.add(&Poly::term(c, m));
    }
    Ok(out)
}

fn parse_symbol(s: &str) -> Result<Sym> {
    match s {
        "q" => return Ok(Sym::QH),
        "hbar" | "h" => return Ok(Sym::HH),
        _ => {}
    }
    let (head, idx) = s.split_at(s.find(|c: char| c.is_ascii_digit()).ok_or_else(|| Error::Parse(format!("unknown symbol {}", s)))?);
    let i: u16 = idx.parse().map_err(|_| Error::Parse(format!("unknown symbol {}", s)))?;
    if i == 0 {
        return Err(Error::Parse(format!("indices start at 1: {}", s)));
    }
    match head {
        "x" => Ok(Sym::X(i - 1)),
        "a" => Ok(Sym::A(i - 1)),
        "z" => Ok(Sym::Z(i - 1)),
        _ => Err(Error::Parse(format!("unknown symbol {}", s))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::fixed_points;
    use crate::hypertoric_data::load_data;

    fn tp1() -> Vec<FixedPoint> {
        let d = load_data(r#"{"iota": [[1],[1]], "beta": [[1,-1]], "theta_lift": [1,0], "sigma_lift": [1,0]}"#).unwrap();
        fixed_points(&d).unwrap()
    }

    #[test]
    fn tp1_degree_one() {
        let fps = tp1();
        let c = vertex_coefficient(&fps[0], 2, &[1], None, BracketForm::First).unwrap();
        // ħ^{-1}(1−ħ)(1−ħa1/a2)/((1−q)(1−q a1/a2)), assembled independently
        let lam = SignedMono::plain(Mono::from_pairs([(Sym::A(0), 1), (Sym::A(1), -1)]));
        let num = Prod::one_minus(&hbar_pow(1)).mul(&Prod::one_minus(&hbar_pow(1).mul(&lam)));
        let den = Prod::one_minus(&q_pow(1)).mul(&Prod::one_minus(&q_pow(1).mul(&lam)));
        let expect = Prod::signed(&hbar_pow(-1)).mul(&num).div(&den).unwrap();
        assert!(c.eq_value(&Expr::from_prod(expect)));
    }

    #[test]
    fn tau_at_degree_zero() {
        let fps = tp1();
        let tau = parse_laurent("x1").unwrap();
        let c = vertex_coefficient(&fps[0], 2, &[0], Some(&tau), BracketForm::First).unwrap();
        assert_eq!(c.canonical_string(), "a1/a2");
    }

    #[test]
    fn conjugation_factor_is_restriction() {
        for fp in tp1() {
            let pre = kahler_prefactor(&fp, 2);
            for i in 0..2 {
                assert_eq!(pre.shift(Sym::Z(i as u16), &BigRational::one()).unwrap(), fp.restriction(i));
            }
        }
    }

    #[test]
    fn parser() {
        let p = parse_laurent("x1*x2^-1 - 2*hbar + 1/3*a1").unwrap();
        assert_eq!(p.len(), 3);
        assert!(parse_laurent("y1").is_err());
        assert!(parse_laurent("x1 +").is_err());
        assert_eq!(parse_laurent("q^2").unwrap(), Poly::mono(Mono::q(4)));
    }

    #[test]
    fn neville_recovers_polynomials() {
        let xs = [0.1, 0.05, 0.02];
        let ys: Vec<Complex64> = xs.iter().map(|x| Complex64::new(3.0 + 2.0 * x - x * x, 0.0)).collect();
        assert!((neville_at_zero(&xs, &ys) - Complex64::new(3.0, 0.0)).norm() < 1e-12);
    }
}
