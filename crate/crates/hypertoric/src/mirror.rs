//! The mirror pair, parameter identifications, combinatorial duality, the
//! logarithmic identities, the matrix 𝔓 and the numeric mirror theorem.

use crate::arrangement::{attracting_contains, bruteforce_minimal_supports, circuits, cocircuits, fixed_point, fixed_points, FixedPoint};
use crate::error::{Error, Result};
use crate::hypertoric_data::{complement, dualize, HypertoricData};
use crate::qseries::{bracket, KahlerSeries};
use crate::stab::stab_sharp;
use crate::symalg::logform::{LSym, LinForm, LogPrefactor};
use crate::symalg::numeric::Assignment;
use crate::symalg::theta::ThetaExpr;
use crate::symalg::{Expr, Mono, Prod, SignedMono, Sym};
use crate::vertex::{bare_vertex, bump_phi, check_circuit_qde_general, hbar_pow, q_over_hbar, q_pow, t_half_phi, z_eps, PhiMultiset, QdeReport};
use num_complex::Complex64;
use num_rational::BigRational;
use serde::Serialize;
use std::collections::BTreeSet;

/// X, its mirror X′ and the bijection p ↦ p′ = complement of p (aligned vectors).
#[derive(Clone, Debug)]
pub struct MirrorPair {
    pub data: HypertoricData,
    pub dual: HypertoricData,
    pub fps: Vec<FixedPoint>,
    pub dual_fps: Vec<FixedPoint>,
}

impl MirrorPair {
    pub fn new(data: &HypertoricData) -> Result<Self> {
        let dual = dualize(data)?;
        let fps = fixed_points(data)?;
        let dual_fps = fps.iter().map(|p| fixed_point(&dual, &complement(data.n, &p.p))).collect::<Result<Vec<_>>>()?;
        if dual_fps.len() != fixed_points(&dual)?.len() {
            return Err(Error::Shape("fixed-point bijection is not onto".into()));
        }
        Ok(MirrorPair { data: data.clone(), dual, fps, dual_fps })
    }
}

fn var(s: Sym, e: i32) -> SignedMono {
    SignedMono::plain(Mono::var(s, e))
}

fn theta_symbols(t: &ThetaExpr) -> BTreeSet<Sym> {
    let mut s: BTreeSet<Sym> = t.half.symbols().collect();
    s.extend(t.rat.symbols());
    for y in t.theta.keys().chain(t.phi.keys()) {
        s.extend(y.m.symbols());
    }
    s
}

fn guard(t: &ThetaExpr, forbidden: impl Fn(Sym) -> bool) -> Result<()> {
    match theta_symbols(t).into_iter().find(|s| forbidden(*s)) {
        Some(s) => Err(Error::UnmappedSymbol(s.to_string())),
        None => Ok(()),
    }
}

/// κ_Stab: (z_i, a_i, ħ) ↦ (a′_i, z′_i, ħ^{-1}), into the primed alphabet.
pub fn kappa_stab(t: &ThetaExpr) -> Result<ThetaExpr> {
    guard(t, |s| matches!(s, Sym::Ap(_) | Sym::Zp(_)))?;
    t.subst(&|s| match s {
        Sym::Z(i) => Some(var(Sym::Ap(i), 1)),
        Sym::A(i) => Some(var(Sym::Zp(i), 1)),
        Sym::HH => Some(var(Sym::HH, -1)),
        _ => None,
    })
}

/// κ_Stab^{-1}, from the primed alphabet.
pub fn kappa_stab_inverse(t: &ThetaExpr) -> Result<ThetaExpr> {
    guard(t, |s| matches!(s, Sym::A(_) | Sym::Z(_)))?;
    t.subst(&|s| match s {
        Sym::Ap(i) => Some(var(Sym::Z(i), 1)),
        Sym::Zp(i) => Some(var(Sym::A(i), 1)),
        Sym::HH => Some(var(Sym::HH, -1)),
        _ => None,
    })
}

/// κ_vtx on a symbol of X, with X′ written in its own (unprimed) alphabet:
/// z_♯,i ↦ (a′_i)^{-1}, a_i ↦ z′_♯,i, ħ ↦ qħ^{-1}.
pub fn kappa_vtx_push(s: Sym) -> Option<SignedMono> {
    match s {
        Sym::HH => Some(SignedMono::plain(Mono::from_pairs([(Sym::QH, 1), (Sym::HH, -1)]))),
        Sym::Z(i) => Some(SignedMono::new(1, Mono::from_pairs([(Sym::QH, 1), (Sym::HH, -1), (Sym::A(i), -1)]))),
        Sym::A(i) => Some(SignedMono::new(1, Mono::from_pairs([(Sym::HH, 1), (Sym::Z(i), 1)]))),
        _ => None,
    }
}

/// The inverse identification: a symbol of X′ as a monomial in the parameters of X.
pub fn kappa_vtx_pull(s: Sym) -> Option<SignedMono> {
    match s {
        Sym::HH => Some(SignedMono::plain(Mono::from_pairs([(Sym::QH, 1), (Sym::HH, -1)]))),
        Sym::A(i) => Some(SignedMono::new(1, Mono::from_pairs([(Sym::HH, 1), (Sym::Z(i), -1)]))),
        Sym::Z(i) => Some(SignedMono::new(1, Mono::from_pairs([(Sym::A(i), 1), (Sym::QH, -1), (Sym::HH, 1)]))),
        _ => None,
    }
}

/// z′_♯,i = −ħ^{1/2} z′_i for the opposite polarization.
pub fn z_sharp_dual(i: usize) -> SignedMono {
    SignedMono::new(1, Mono::from_pairs([(Sym::Z(i as u16), 1), (Sym::HH, 1)]))
}

/// z′_ε,i(p′): z′_♯ on A⁺ ∪ (p′)⁻ and z′_♯·qħ^{-1} on A⁻ ∪ (p′)⁺.
pub fn z_eps_dual(fpd: &FixedPoint, i: usize) -> SignedMono {
    let shifted = fpd.a_minus.contains(&i) || fpd.p_plus.contains(&i);
    if shifted {
        z_sharp_dual(i).mul(&q_over_hbar())
    } else {
        z_sharp_dual(i)
    }
}

/// Σ ln z′_ε,i(p′) ln x′_i|_{p′}.
pub fn kahler_prefactor_dual(fpd: &FixedPoint, n: usize) -> LogPrefactor {
    (0..n).fold(LogPrefactor::zero(), |b, i| b.add(&LogPrefactor::product(&LinForm::log_of(&z_eps_dual(fpd, i)), &LinForm::log_of(&fpd.restriction(i)))))
}

/// Coefficient of ζ(p′)^d in the mirror vertex with the opposite polarization:
/// q^{½ΣD}∏{ħ^{-1}(x_i|_{p′})^{-1}}_{−D_i}.
pub fn dual_vertex_coefficient(fpd: &FixedPoint, n: usize, d: &[i64]) -> Result<Expr> {
    let dd = fpd.degrees(d, n);
    let mut c = Prod::mono(Mono::q(dd.iter().sum::<i64>() as i32));
    for (i, &di) in dd.iter().enumerate() {
        let y = hbar_pow(-1).mul(&fpd.restriction(i).inv());
        c = c.mul(&bracket(&y, -di as i32)?);
    }
    Ok(Expr::from_prod(c))
}

pub fn dual_vertex(fpd: &FixedPoint, n: usize, bound: i64) -> Result<KahlerSeries> {
    KahlerSeries::from_fn(fpd, n, bound, |d| dual_vertex_coefficient(fpd, n, d))
}

/// The circuit equations of X′, whose right-hand side carries (qħ^{-1}z′_♯)^β.
pub fn check_dual_circuit_qde(pair: &MirrorPair, bound: i64) -> Result<Vec<QdeReport>> {
    let n = pair.dual.n;
    let mut out = Vec::new();
    for fpd in &pair.dual_fps {
        let v = dual_vertex(fpd, n, bound)?;
        let pre = kahler_prefactor_dual(fpd, n);
        for c in circuits(&pair.dual)? {
            let zb = c.vector.iter().enumerate().fold(SignedMono::one(), |acc, (i, &e)| acc.mul(&q_over_hbar().mul(&z_sharp_dual(i)).pow(e as i32)));
            let mut r = check_circuit_qde_general(fpd, n, &c, &v, &pre, &zb)?;
            r.kind = "mirror circuit".into();
            out.push(r);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct DualityCheck {
    pub item: String,
    pub pass: bool,
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort();
    v
}

/// Sign sets, circuit/cocircuit exchange and the mirror restriction formula.
pub fn check_combinatorial_duality(pair: &MirrorPair) -> Result<Vec<DualityCheck>> {
    let mut out = Vec::new();
    let mut push = |item: String, pass: bool| out.push(DualityCheck { item, pass });
    for (p, pd) in pair.fps.iter().zip(&pair.dual_fps) {
        let l = p.label();
        push(format!("{l}: A'+ = p-"), sorted(pd.a_plus.clone()) == sorted(p.p_minus.clone()));
        push(format!("{l}: A'- = p+"), sorted(pd.a_minus.clone()) == sorted(p.p_plus.clone()));
        push(format!("{l}: p'+ = A-"), sorted(pd.p_plus.clone()) == sorted(p.a_minus.clone()));
        push(format!("{l}: p'- = A+"), sorted(pd.p_minus.clone()) == sorted(p.a_plus.clone()));
        let mut ok = true;
        for j in 0..pair.data.n {
            ok &= pd.restriction(j).value_eq(&mirror_restriction(p, j));
        }
        push(format!("{l}: mirror restriction"), ok);
        let mut ok = true;
        for &i in &p.p {
            for &j in &p.complement {
                ok &= pd.c_ij(j, i) == -p.c_ij(i, j);
            }
        }
        push(format!("{l}: C' = -C^T"), ok);
    }
    let key = |v: &[i64]| v.to_vec();
    let cx: BTreeSet<Vec<i64>> = circuits(&pair.data)?.iter().map(|c| key(&c.vector)).collect();
    let cox: BTreeSet<Vec<i64>> = cocircuits(&pair.data)?.iter().map(|c| key(&c.vector)).collect();
    let cxd: BTreeSet<Vec<i64>> = circuits(&pair.dual)?.iter().map(|c| key(&c.vector)).collect();
    let coxd: BTreeSet<Vec<i64>> = cocircuits(&pair.dual)?.iter().map(|c| key(&c.vector)).collect();
    let neg = |s: &BTreeSet<Vec<i64>>| -> BTreeSet<Vec<i64>> { s.iter().map(|v| v.iter().map(|x| -x).collect()).collect() };
    push("circuits of X = -cocircuits of X'".into(), cx == neg(&coxd));
    push("cocircuits of X = -circuits of X'".into(), cox == neg(&cxd));
    let unsigned = |s: &BTreeSet<Vec<i64>>| -> BTreeSet<Vec<i64>> { s.iter().flat_map(|v| [v.clone(), v.iter().map(|x| -x).collect()]).collect() };
    let brute_c: BTreeSet<Vec<i64>> = bruteforce_minimal_supports(&pair.data.beta_mat(), pair.data.n).into_iter().collect();
    let brute_co: BTreeSet<Vec<i64>> = bruteforce_minimal_supports(&pair.data.iota_mat().transpose(), pair.data.n).into_iter().collect();
    push("circuits match brute force".into(), unsigned(&cx) == unsigned(&brute_c));
    push("cocircuits match brute force".into(), unsigned(&cox) == unsigned(&brute_co));
    let dd = dualize(&pair.dual)?;
    push("double dual".into(), dd.iota == pair.data.iota && dd.beta == pair.data.beta && dd.theta_lift == pair.data.theta_lift && dd.sigma_lift == pair.data.sigma_lift);
    Ok(out)
}

/// x′_j|_{p′} written through the data at p: 1 on p⁻, ħ^{-1} on p⁺ and
/// a′_j ∏_{i∈p} a′_i^{C_ij} ħ^{Σ_{i∈p⁺}C_ij} off p (in the mirror's own alphabet).
pub fn mirror_restriction(p: &FixedPoint, j: usize) -> SignedMono {
    if p.p_minus.contains(&j) {
        return SignedMono::one();
    }
    if p.p_plus.contains(&j) {
        return hbar_pow(-1);
    }
    let mut m = Mono::var(Sym::A(j as u16), 1);
    let mut h = 0;
    for &i in &p.p {
        let c = p.c_ij(i, j) as i32;
        m = m.mul(&Mono::var(Sym::A(i as u16), c));
        if p.p_plus.contains(&i) {
            h += c;
        }
    }
    SignedMono::plain(m.mul(&Mono::hbar(2 * h)))
}

#[derive(Clone, Debug, Serialize)]
pub struct LogIdentityCheck {
    pub fixed_point: String,
    pub first: bool,
    pub second: bool,
}

fn ln(s: Sym) -> LinForm {
    LinForm::var(LSym::S(s))
}
fn ln_q_over_hbar() -> LinForm {
    LinForm::var(LSym::Q).sub(&LinForm::var(LSym::H))
}

/// Σ ln z_i ln x_i|_p − Σ ln z_i ln a_i + Σ_{A⁺} ln ζ_j ln a_j + Σ_{A⁻} ln ζ_j ln(ħ a_j).
pub fn first_log_residual(p: &FixedPoint, n: usize) -> LogPrefactor {
    let mut b = LogPrefactor::zero();
    for i in 0..n {
        let z = ln(Sym::Z(i as u16));
        b = b.add(&LogPrefactor::product(&z, &LinForm::log_of(&p.restriction(i))));
        b = b.sub(&LogPrefactor::product(&z, &ln(Sym::A(i as u16))));
    }
    for &j in &p.complement {
        let zeta = LinForm::log_of(&SignedMono::plain(p.zeta(j)));
        let a = ln(Sym::A(j as u16));
        let a = if p.in_a_plus(j) { a } else { a.add(&LinForm::var(LSym::H)) };
        b = b.add(&LogPrefactor::product(&zeta, &a));
    }
    b
}

/// Σ ln z′_ε ln x′|_{p′} − Σ ln z_ε ln x|_p + Σ ln z_♯ ln a + Σ_{i∈p⁺} ln(qħ^{-1}) ln(ħ x_i|_p)
/// after κ_vtx, in ln z_♯ coordinates: ln Z(i) stands for ln z_♯,i on X and for ln z′_♯,i on X′,
/// which keeps ln(−1) out of the forms.
pub fn second_log_residual(p: &FixedPoint, pd: &FixedPoint, n: usize) -> LogPrefactor {
    let mut dual = LogPrefactor::zero();
    for i in 0..n {
        let mut z = ln(Sym::Z(i as u16));
        if pd.a_minus.contains(&i) || pd.p_plus.contains(&i) {
            z = z.add(&ln_q_over_hbar());
        }
        dual = dual.add(&LogPrefactor::product(&z, &LinForm::log_of(&pd.restriction(i))));
    }
    // κ_vtx: ln z′_♯ ↦ ln a, ln a′ ↦ −ln z_♯, ln ħ′ ↦ ln q − ln ħ
    let dual = dual.substitute(&|s| match s {
        LSym::S(Sym::Z(i)) => Some(ln(Sym::A(i))),
        LSym::S(Sym::A(i)) => Some(ln(Sym::Z(i)).neg()),
        LSym::H => Some(ln_q_over_hbar()),
        _ => None,
    });
    let mut x = LogPrefactor::zero();
    for i in 0..n {
        let eps = crate::vertex::epsilon(p, i);
        let z = ln(Sym::Z(i as u16)).sub(&ln_q_over_hbar().scale(&BigRational::from_integer(eps.into())));
        x = x.add(&LogPrefactor::product(&z, &LinForm::log_of(&p.restriction(i))));
    }
    let mut rhs = LogPrefactor::zero();
    for i in 0..n {
        rhs = rhs.sub(&LogPrefactor::product(&ln(Sym::Z(i as u16)), &ln(Sym::A(i as u16))));
    }
    for &i in &p.p_plus {
        let hx = LinForm::log_of(&p.restriction(i)).add(&LinForm::var(LSym::H));
        rhs = rhs.sub(&LogPrefactor::product(&ln_q_over_hbar(), &hx));
    }
    dual.sub(&x).sub(&rhs)
}

pub fn check_log_identities(pair: &MirrorPair) -> Result<Vec<LogIdentityCheck>> {
    let n = pair.data.n;
    let mut out = Vec::new();
    for (p, pd) in pair.fps.iter().zip(&pair.dual_fps) {
        let r1 = first_log_residual(p, n);
        if !r1.is_zero() {
            return Err(Error::FormMismatch(format!("{} at {}", r1, p.label())));
        }
        let r2 = second_log_residual(p, pd, n);
        if !r2.is_zero() {
            return Err(Error::FormMismatch(format!("{} at {}", r2, p.label())));
        }
        out.push(LogIdentityCheck { fixed_point: p.label(), first: true, second: true });
    }
    Ok(out)
}

/// Φ((q−ħ)Pol′_{p′}|_{p′}) in the mirror's alphabet.
pub fn dual_pol_phi(pd: &FixedPoint, n: usize, d: usize) -> PhiMultiset {
    let mut m = PhiMultiset::new();
    for i in 0..n {
        let x = pd.restriction(i);
        if pd.a_plus.contains(&i) || pd.p_minus.contains(&i) {
            let y = hbar_pow(-1).mul(&x.inv());
            bump_phi(&mut m, q_pow(1).mul(&y), 1);
            bump_phi(&mut m, hbar_pow(1).mul(&y), -1);
        } else {
            bump_phi(&mut m, q_pow(1).mul(&x), 1);
            bump_phi(&mut m, hbar_pow(1).mul(&x), -1);
        }
    }
    bump_phi(&mut m, q_over_hbar(), -(d as i32));
    bump_phi(&mut m, SignedMono::one(), d as i32);
    m
}

/// κ_vtx(Φ((q−ħ)Pol′_{q′}|_{q′})) in the parameters of X.
pub fn dual_pol_phi_pulled(pd: &FixedPoint, n: usize, d: usize) -> Result<ThetaExpr> {
    let mut t = ThetaExpr::one();
    t.phi = dual_pol_phi(pd, n, d);
    Ok(t.subst(&kappa_vtx_pull)?.canonicalize())
}

/// Options for assembling 𝔓 (the flag drops the monomial prefactor, a negative control).
#[derive(Clone, Copy, Debug, Default)]
pub struct POptions {
    pub drop_prefactor: bool,
}

/// 𝔓_{q,p} as one cancelled theta expression in the parameters of X.
pub fn pmatrix_entry(pair: &MirrorPair, qi: usize, pi: usize, opts: POptions) -> Result<ThetaExpr> {
    let (q, qd, p) = (&pair.fps[qi], &pair.dual_fps[qi], &pair.fps[pi]);
    let n = pair.data.n;
    let k = pair.data.k;
    let stab = crate::stab::stab_restrict(&stab_sharp(q), p)?;
    if stab.is_zero() {
        return Ok(ThetaExpr::zero());
    }
    let mut theta_half = ThetaExpr::one();
    for i in 0..n {
        theta_half = theta_half.mul(&ThetaExpr::theta(&p.restriction(i)));
    }
    theta_half = theta_half.mul(&ThetaExpr::theta(&SignedMono::one()).pow(-(k as i32))?);
    let mut phi_half = ThetaExpr::one();
    phi_half.phi = t_half_phi(p, n, k);
    let mut e = stab.div(&theta_half)?.mul(&phi_half).div(&dual_pol_phi_pulled(qd, n, pair.data.d)?)?;
    if !opts.drop_prefactor {
        let mut pre = SignedMono::new(q.p_plus.len() as i32, Mono::hbar(q.p_plus.len() as i32));
        for &i in &q.p_plus {
            pre = pre.mul(&q.restriction(i));
        }
        e = e.mul(&ThetaExpr::monomial(&pre));
    }
    let e = e.canonicalize();
    if e.is_singular() || e.has_unit_argument() {
        return Err(Error::SingularFactor(format!("entry ({}, {}) keeps a singular factor: {}", q.label(), p.label(), e)));
    }
    Ok(e)
}

/// Numeric parameters for the mirror check, given on X: z_i = w_i s^{θ̃_i}, a_i = u_i t^{−σ̃_i}.
#[derive(Clone, Debug, Serialize, serde::Deserialize)]
pub struct MirrorParams {
    pub q: [f64; 2],
    pub hbar: [f64; 2],
    pub s: f64,
    pub t: f64,
    pub w: Vec<[f64; 2]>,
    pub u: Vec<[f64; 2]>,
    pub q_trunc: usize,
}

impl MirrorParams {
    pub fn standard(n: usize) -> Self {
        MirrorParams {
            q: [0.3, 0.0],
            hbar: [0.55, 0.1],
            s: 0.02,
            t: 0.02,
            w: (0..n).map(|i| [0.9 + 0.05 * i as f64, 0.1]).collect(),
            u: (0..n).map(|i| [1.0 - 0.07 * i as f64, -0.15]).collect(),
            q_trunc: 200,
        }
    }
}

fn c(v: [f64; 2]) -> Complex64 {
    Complex64::new(v[0], v[1])
}

/// Assignments on X and on X′ (the latter pulled back through κ_vtx).
pub fn mirror_assignments(data: &HypertoricData, prm: &MirrorParams) -> Result<(Assignment, Assignment)> {
    let mut ax = Assignment::new();
    ax.set_q(c(prm.q)).set_hbar(c(prm.hbar));
    for i in 0..data.n {
        ax.set(Sym::Z(i as u16), c(prm.w[i]) * prm.s.powi(data.theta_lift[i] as i32));
        ax.set(Sym::A(i as u16), c(prm.u[i]) * prm.t.powi(-data.sigma_lift[i] as i32));
    }
    let mut axp = Assignment::new();
    axp.set_root(Sym::QH, ax.root(Sym::QH)?);
    for s in std::iter::once(Sym::HH).chain((0..data.n as u16).flat_map(|i| [Sym::A(i), Sym::Z(i)])) {
        let img = kappa_vtx_pull(s).expect("parameter symbol");
        let r = ax.sqrt_signed(&img)?;
        axp.set_root(s, r);
    }
    Ok((ax, axp))
}

/// 𝔓_{q,p} evaluated at the numeric parameters; zero off the attracting closure without evaluation.
pub fn pmatrix_value(pair: &MirrorPair, qi: usize, pi: usize, prm: &MirrorParams) -> Result<Complex64> {
    if !attracting_contains(&pair.fps[qi], &pair.fps[pi]) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let (ax, _) = mirror_assignments(&pair.data, prm)?;
    let e = pmatrix_entry(pair, qi, pi, POptions::default())?;
    let (v, tail) = e.eval(&ax, prm.q_trunc)?;
    if tail > 1e-12 * v.norm().max(1e-300) {
        return Err(Error::ConvergenceFailure(format!("entry ({}, {}) tail {:.3e}", pair.fps[qi].label(), pair.fps[pi].label(), tail)));
    }
    Ok(v)
}

#[derive(Clone, Debug, Serialize)]
pub struct MirrorVertexEntry {
    pub fixed_point: String,
    pub lhs: [f64; 2],
    pub rhs: [f64; 2],
    pub deviation: f64,
    pub tail: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct MirrorVertexReport {
    pub entries: Vec<MirrorVertexEntry>,
    pub max_deviation: f64,
    pub pass: bool,
}

/// Σ_p 𝔓_{q,p} V|_p against V′|_{q′} for every q, truncated at degree `bound`;
/// the tolerance is ten times the change between truncations at `bound` and `bound − 2`.
pub fn check_mirror_vertex(pair: &MirrorPair, bound: i64, prm: &MirrorParams, opts: POptions) -> Result<MirrorVertexReport> {
    let n = pair.data.n;
    let (ax, axp) = mirror_assignments(&pair.data, prm)?;
    let coarse = (bound - 2).max(0);
    let mut vx = Vec::new();
    for p in &pair.fps {
        let fine = bare_vertex(p, n, None, bound)?.eval(&ax)?;
        let rough = bare_vertex(p, n, None, coarse)?.eval(&ax)?;
        vx.push((fine, rough));
    }
    let mut entries = Vec::new();
    for (qi, qd) in pair.dual_fps.iter().enumerate() {
        let mut lhs = Complex64::new(0.0, 0.0);
        let mut lhs_rough = Complex64::new(0.0, 0.0);
        let mut ptail: f64 = 0.0;
        for pi in 0..pair.fps.len() {
            let e = pmatrix_entry(pair, qi, pi, opts)?;
            let (v, t) = e.eval(&ax, prm.q_trunc)?;
            ptail = ptail.max(t);
            lhs += v * vx[pi].0;
            lhs_rough += v * vx[pi].1;
        }
        let rhs = dual_vertex(qd, n, bound)?.eval(&axp)?;
        let rhs_rough = dual_vertex(qd, n, coarse)?.eval(&axp)?;
        let scale = rhs.norm();
        let tail = ((lhs - lhs_rough).norm().max((rhs - rhs_rough).norm()) / scale).max(ptail);
        let tolerance = (10.0 * tail).max(1e-12);
        let deviation = (lhs - rhs).norm() / scale;
        entries.push(MirrorVertexEntry {
            fixed_point: pair.fps[qi].label(),
            lhs: [lhs.re, lhs.im],
            rhs: [rhs.re, rhs.im],
            deviation,
            tail,
            tolerance,
            pass: deviation <= tolerance,
        });
    }
    let max_deviation = entries.iter().map(|e| e.deviation).fold(0.0, f64::max);
    let pass = entries.iter().all(|e| e.pass);
    Ok(MirrorVertexReport { entries, max_deviation, pass })
}

/// The diagonal limit κ_vtx(Φ((q−ħ)Pol′_{q′}|_{q′})) against the closed-form chamber limit.
pub fn check_limit_matches_dual_polarization(pair: &MirrorPair) -> Result<bool> {
    let n = pair.data.n;
    for (q, qd) in pair.fps.iter().zip(&pair.dual_fps) {
        let a = dual_pol_phi_pulled(qd, n, pair.data.d)?;
        let b = crate::vertex::limit_closed_form(q, false);
        if !a.same(&b) {
            return Err(Error::MismatchAt { point: q.label(), left: a.to_string(), right: b.canonicalize().to_string() });
        }
    }
    Ok(true)
}

/// Used by the web demo and CLI: z_ε monomials at p, rendered.
pub fn describe_z_eps(p: &FixedPoint, n: usize) -> Vec<String> {
    (0..n).map(|i| z_eps(p, i).to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypertoric_data::load_data;

    fn tp1() -> HypertoricData {
        load_data(r#"{"iota": [[1],[1]], "beta": [[1,-1]], "theta_lift": [1,0], "sigma_lift": [1,0]}"#).unwrap()
    }

    #[test]
    fn kappa_examples() {
        let lam = SignedMono::plain(Mono::from_pairs([(Sym::A(0), 1), (Sym::A(1), -1), (Sym::HH, 2)]));
        let t = kappa_stab(&ThetaExpr::theta(&lam)).unwrap();
        let img = SignedMono::plain(Mono::from_pairs([(Sym::Zp(0), 1), (Sym::Zp(1), -1), (Sym::HH, -2)]));
        assert!(t.same(&ThetaExpr::theta(&img)));
        assert_eq!(kappa_vtx_push(Sym::HH).unwrap().pow(2), q_over_hbar());
        // κ_vtx twice is not the identity on ħ^{1/2}: q^{1/2}(q^{1/2}ħ^{-1/2})^{-1}
        let twice = crate::symalg::poly::subst_signed(&kappa_vtx_push(Sym::HH).unwrap(), &kappa_vtx_push);
        assert_eq!(twice, SignedMono::plain(Mono::hbar(1)));
        let z = crate::symalg::poly::subst_signed(&kappa_vtx_push(Sym::Z(0)).unwrap(), &kappa_vtx_push);
        assert_ne!(z, SignedMono::plain(Mono::var(Sym::Z(0), 1)));
    }

    #[test]
    fn pmatrix_support() {
        let pair = MirrorPair::new(&tp1()).unwrap();
        let prm = MirrorParams::standard(2);
        let (a, b) = if attracting_contains(&pair.fps[0], &pair.fps[1]) { (0, 1) } else { (1, 0) };
        assert_eq!(pmatrix_value(&pair, b, a, &prm).unwrap(), Complex64::new(0.0, 0.0));
        assert!(pmatrix_entry(&pair, b, a, POptions::default()).unwrap().is_zero());
        let diag = pmatrix_value(&pair, a, a, &prm).unwrap();
        assert!(diag.norm() > 1e-6 && diag.norm().is_finite());
        assert!(pmatrix_value(&pair, a, b, &prm).unwrap().norm() > 0.0);
    }

    #[test]
    fn pull_inverts_push() {
        for s in [Sym::HH, Sym::A(0), Sym::Z(1)] {
            let there = kappa_vtx_push(s).unwrap();
            let back = crate::symalg::poly::subst_signed(&there, &kappa_vtx_pull);
            assert!(back.value_eq(&var(s, 1)), "{s}");
        }
    }

    #[test]
    fn tp1_duality_and_logs() {
        let pair = MirrorPair::new(&tp1()).unwrap();
        for c in check_combinatorial_duality(&pair).unwrap() {
            assert!(c.pass, "{}", c.item);
        }
        check_log_identities(&pair).unwrap();
    }

    #[test]
    fn perturbed_c_breaks_second_identity() {
        let pair = MirrorPair::new(&tp1()).unwrap();
        let mut p = pair.fps[0].clone();
        p.c[0][0] += 1;
        assert!(!second_log_residual(&p, &pair.dual_fps[0], 2).is_zero());
    }
}
