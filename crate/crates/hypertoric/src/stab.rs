//! Elliptic stable envelopes as theta expressions, their axioms, the
//! normalized envelopes and the duality interface.

use crate::arrangement::{attracting_contains, FixedPoint};
use crate::error::{Error, Result};
use crate::mirror::{kappa_stab, kappa_stab_inverse, MirrorPair};
use crate::symalg::numeric::Assignment;
use crate::symalg::theta::ThetaExpr;
use crate::symalg::{Mono, SignedMono, Sym};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Clone, Debug)]
pub struct StabSection {
    pub owner: FixedPoint,
    pub body: ThetaExpr,
}

fn x(i: usize) -> SignedMono {
    SignedMono::plain(Mono::var(Sym::X(i as u16), 1))
}
fn hbar(e: i32) -> SignedMono {
    SignedMono::plain(Mono::hbar(2 * e))
}

/// −Σ_{i∈p⁺} C_ij.
fn hbar_exponent(fp: &FixedPoint, j: usize) -> i32 {
    -fp.p_plus.iter().map(|&i| fp.c_ij(i, j) as i32).sum::<i32>()
}

/// ∏_{p⁺}ϑ(ħx_i)∏_{p⁻}ϑ(x_i)·∏_{A_p} ϑ(x_j w_j)/ϑ(w_j or ħ^{-1}w_j), w_j = ζ_j ħ^{−ΣC}.
pub fn stab_section(fp: &FixedPoint) -> StabSection {
    stab_section_with(fp, &|j| SignedMono::plain(fp.zeta(j)))
}

/// Stab♯: the envelope with ζ_j replaced by ζ_♯,j^{-1}.
pub fn stab_sharp(fp: &FixedPoint) -> StabSection {
    stab_section_with(fp, &|j| crate::vertex::zeta_sharp(fp, j).inv())
}

pub fn stab_section_with(fp: &FixedPoint, zeta: &dyn Fn(usize) -> SignedMono) -> StabSection {
    let mut body = diagonal_factors(fp, &x);
    for &j in &fp.complement {
        let w = zeta(j).mul(&hbar(hbar_exponent(fp, j)));
        let den = if fp.in_a_plus(j) { w.clone() } else { hbar(-1).mul(&w) };
        body = body.mul(&ThetaExpr::theta(&x(j).mul(&w))).mul(&ThetaExpr::theta(&den).inv().expect("theta power"));
    }
    StabSection { owner: fp.clone(), body: body.canonicalize() }
}

fn diagonal_factors(fp: &FixedPoint, xs: &dyn Fn(usize) -> SignedMono) -> ThetaExpr {
    let mut t = ThetaExpr::one();
    for &i in &fp.p {
        let y = if fp.in_p_plus(i) { hbar(1).mul(&xs(i)) } else { xs(i) };
        t = t.mul(&ThetaExpr::theta(&y));
    }
    t
}

/// (−1)^{|p⁺|}Θ(N_p⁻) = ∏_{p⁺}ϑ(ħx_i|_p)∏_{p⁻}ϑ(x_i|_p).
pub fn diagonal_closed_form(fp: &FixedPoint) -> ThetaExpr {
    diagonal_factors(fp, &|i| fp.restriction(i)).canonicalize()
}

/// Substitutes x_j ↦ x_j|_q.
pub fn stab_restrict(section: &StabSection, q: &FixedPoint) -> Result<ThetaExpr> {
    section.body.subst(&|s| match s {
        Sym::X(j) => Some(q.restriction(j as usize)),
        _ => None,
    })
}

/// The normalized envelope ∏_{p⁺}ϑ(ħx_i)∏_{p⁻}ϑ(x_i)∏_{j∉p}ϑ(x_j ζ_j ħ^{−ΣC}).
pub fn normalized_stab(fp: &FixedPoint) -> ThetaExpr {
    let mut t = diagonal_factors(fp, &x);
    for &j in &fp.complement {
        t = t.mul(&ThetaExpr::theta(&x(j).mul(&SignedMono::plain(fp.zeta(j))).mul(&hbar(hbar_exponent(fp, j)))));
    }
    t.canonicalize()
}

#[derive(Clone, Debug, Serialize)]
pub struct PairCheck {
    pub section: String,
    pub restricted_to: String,
    pub in_closure: bool,
    pub restriction: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct StabAxiomReport {
    pub pairs: Vec<PairCheck>,
    pub pass: bool,
}

/// Support and diagonal axioms for every ordered pair of fixed points.
pub fn check_stab_axioms(fps: &[FixedPoint]) -> Result<StabAxiomReport> {
    check_stab_axioms_with(fps, &|fp| stab_section(fp))
}

/// As `check_stab_axioms`, with the sections supplied by the caller.
pub fn check_stab_axioms_with(fps: &[FixedPoint], build: &dyn Fn(&FixedPoint) -> StabSection) -> Result<StabAxiomReport> {
    let mut pairs = Vec::new();
    for p in fps {
        let sec = build(p);
        for q in fps {
            let r = stab_restrict(&sec, q)?;
            let in_closure = attracting_contains(p, q);
            let pass = if p.p == q.p {
                r.same(&diagonal_closed_form(p))
            } else if in_closure {
                !r.is_zero() && !r.is_singular()
            } else {
                r.is_zero()
            };
            pairs.push(PairCheck { section: p.label(), restricted_to: q.label(), in_closure, restriction: r.to_string(), pass });
        }
    }
    let pass = pairs.iter().all(|c| c.pass);
    Ok(StabAxiomReport { pairs, pass })
}

#[derive(Clone, Debug, Serialize)]
pub struct InterfaceCheck {
    pub fixed_point: String,
    pub side: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DualityReport {
    pub checks: Vec<InterfaceCheck>,
    pub ratio_pairs: usize,
    pub numeric_points: usize,
    pub max_numeric_deviation: f64,
    pub pass: bool,
}

fn primed(s: Sym) -> Sym {
    s.primed()
}

/// 𝔪 = ∏ϑ(x_i x′_i).
pub fn duality_interface(n: usize) -> ThetaExpr {
    (0..n).fold(ThetaExpr::one(), |t, i| t.mul(&ThetaExpr::theta(&x(i).mul(&SignedMono::plain(Mono::var(Sym::Xp(i as u16), 1))))))
}

/// A mirror-side expression in its own alphabet, moved to the primed alphabet.
pub fn to_primed(t: &ThetaExpr) -> Result<ThetaExpr> {
    t.subst(&|s| match s {
        Sym::A(_) | Sym::Z(_) | Sym::X(_) => Some(SignedMono::plain(Mono::var(primed(s), 1))),
        _ => None,
    })
}

/// Restricts 𝔪 on the mirror side and pulls back by κ_Stab; restricts on the
/// original side and pushes forward; compares with the normalized envelopes.
pub fn duality_interface_check(pair: &MirrorPair) -> Result<Vec<InterfaceCheck>> {
    duality_interface_check_with(pair, &|fp| normalized_stab(fp))
}

pub fn duality_interface_check_with(pair: &MirrorPair, normalized: &dyn Fn(&FixedPoint) -> ThetaExpr) -> Result<Vec<InterfaceCheck>> {
    let n = pair.data.n;
    let m = duality_interface(n);
    let mut out = Vec::new();
    for (p, pd) in pair.fps.iter().zip(&pair.dual_fps) {
        let on_x = m.subst(&|s| match s {
            Sym::Xp(j) => {
                let r = pd.restriction(j as usize);
                Some(SignedMono::new(r.phase, r.m.map_syms(primed)))
            }
            _ => None,
        })?;
        let left = kappa_stab_inverse(&on_x)?;
        let right = normalized(p);
        let ok = left.same(&right);
        if !ok {
            return Err(Error::MismatchAt { point: p.label(), left: left.to_string(), right: right.to_string() });
        }
        out.push(InterfaceCheck { fixed_point: p.label(), side: "X".into(), pass: ok });
        // factorization: normalized envelope = Stab(p)·κ(Stab′(p′)|_{p′})
        let diag_dual = kappa_stab_inverse(&to_primed(&diagonal_closed_form(pd))?)?;
        let prod = stab_section(p).body.mul(&diag_dual);
        if !prod.same(&right) {
            return Err(Error::MismatchAt { point: p.label(), left: prod.canonicalize().to_string(), right: right.to_string() });
        }

        let on_xp = m.subst(&|s| match s {
            Sym::X(j) => Some(p.restriction(j as usize)),
            _ => None,
        })?;
        let left = kappa_stab(&on_xp)?;
        let right = to_primed(&normalized(pd))?;
        let ok = left.same(&right);
        if !ok {
            return Err(Error::MismatchAt { point: pd.label(), left: left.to_string(), right: right.to_string() });
        }
        out.push(InterfaceCheck { fixed_point: pd.label(), side: "X'".into(), pass: ok });
    }
    Ok(out)
}

/// Stab(p)|_q / Stab(q)|_q, or Zero.
fn ratio_x(p: &FixedPoint, q: &FixedPoint) -> Result<ThetaExpr> {
    let num = stab_restrict(&stab_section(p), q)?;
    let den = stab_restrict(&stab_section(q), q)?;
    Ok(num.div(&den)?.canonicalize())
}

/// κ_Stab^{-1}(Stab′(q′)|_{p′} / Stab′(p′)|_{p′}).
fn ratio_dual(pd: &FixedPoint, qd: &FixedPoint) -> Result<ThetaExpr> {
    let num = stab_restrict(&stab_section(qd), pd)?;
    let den = stab_restrict(&stab_section(pd), pd)?;
    kappa_stab_inverse(&to_primed(&num.div(&den)?.canonicalize())?)
}

/// Random parameter point with |q| fixed and moderate moduli elsewhere.
pub fn random_assignment(rng: &mut ChaCha8Rng, n: usize, q_abs: f64) -> Assignment {
    let mut a = Assignment::new();
    let arg = |r: &mut ChaCha8Rng| r.gen_range(-3.0..3.0);
    a.set_q(Complex64::from_polar(q_abs, arg(rng)));
    a.set_hbar(Complex64::from_polar(rng.gen_range(0.5..1.5), arg(rng)));
    for i in 0..n as u16 {
        for s in [Sym::A(i), Sym::Z(i), Sym::X(i), Sym::Ap(i), Sym::Zp(i), Sym::Xp(i)] {
            a.set(s, Complex64::from_polar(rng.gen_range(0.6..1.6), arg(rng)));
        }
    }
    a
}

/// Relative difference of two theta expressions at one point; `None` if both vanish.
pub fn numeric_gap(a: &ThetaExpr, b: &ThetaExpr, asg: &Assignment, trunc: usize) -> Result<f64> {
    let (va, _) = a.eval(asg, trunc)?;
    let (vb, _) = b.eval(asg, trunc)?;
    let scale = va.norm().max(vb.norm());
    Ok(if scale == 0.0 { 0.0 } else { (va - vb).norm() / scale })
}

/// Duality interface on both sides, the ratio symmetry for every pair, and
/// numeric spot checks of the ratio symmetry.
pub fn check_duality(pair: &MirrorPair, points: usize, seed: u64, q_abs: f64, trunc: usize, tol: f64) -> Result<DualityReport> {
    let checks = duality_interface_check(pair)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let asgs: Vec<Assignment> = (0..points).map(|_| random_assignment(&mut rng, pair.data.n, q_abs)).collect();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for (p, pd) in pair.fps.iter().zip(&pair.dual_fps) {
        for (q, qd) in pair.fps.iter().zip(&pair.dual_fps) {
            let l = ratio_x(p, q)?;
            let r = ratio_dual(pd, qd)?;
            let exact = l.same(&r);
            for a in &asgs {
                worst = worst.max(numeric_gap(&l, &r, a, trunc)?);
            }
            if !exact && worst > tol {
                return Err(Error::MismatchAt { point: format!("{}->{}", p.label(), q.label()), left: l.to_string(), right: r.to_string() });
            }
            count += 1;
        }
    }
    let pass = checks.iter().all(|c| c.pass) && worst <= tol;
    Ok(DualityReport { checks, ratio_pairs: count, numeric_points: points, max_numeric_deviation: worst, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::fixed_points;
    use crate::hypertoric_data::load_data;

    #[test]
    fn tp1_sections() {
        let d = load_data(r#"{"iota": [[1],[1]], "beta": [[1,-1]], "theta_lift": [1,0], "sigma_lift": [1,0]}"#).unwrap();
        let fps = fixed_points(&d).unwrap();
        let s1 = stab_section(&fps[0]);
        // ϑ(ħx₁)·ϑ(x₂z₁z₂ħ^{−1})/ϑ(z₁z₂ħ^{−1})
        let z = SignedMono::plain(Mono::from_pairs([(Sym::Z(0), 1), (Sym::Z(1), 1)]));
        let expect = ThetaExpr::theta(&hbar(1).mul(&x(0)))
            .mul(&ThetaExpr::theta(&x(1).mul(&z).mul(&hbar(-1))))
            .div(&ThetaExpr::theta(&z.mul(&hbar(-1))))
            .unwrap();
        assert!(s1.body.same(&expect), "{}", s1.body);
        let s2 = stab_section(&fps[1]);
        let expect = ThetaExpr::theta(&x(1)).mul(&ThetaExpr::theta(&x(0).mul(&z))).div(&ThetaExpr::theta(&z)).unwrap();
        assert!(s2.body.same(&expect), "{}", s2.body);
        let r = stab_restrict(&s2, &fps[0]).unwrap();
        assert!(r.is_zero());
        let r = stab_restrict(&s1, &fps[0]).unwrap();
        let lam = SignedMono::plain(Mono::from_pairs([(Sym::A(0), 1), (Sym::A(1), -1)]));
        assert!(r.same(&ThetaExpr::theta(&hbar(1).mul(&lam))));
    }
}
