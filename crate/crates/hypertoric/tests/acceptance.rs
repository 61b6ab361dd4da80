//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p hypertoric --test acceptance -- --nocapture`.

use hypertoric::arrangement::{attracting_contains, circuits, cocircuits, fixed_points, invariant_curve, FixedPoint};
use hypertoric::error::Error;
use hypertoric::hypertoric_data::HypertoricData;
use hypertoric::instances::{fixture, fixtures, random_instances};
use hypertoric::mirror::*;
use hypertoric::qseries::{pochhammer, q_binomial_coefficients};
use hypertoric::stab::*;
use hypertoric::symalg::theta::ThetaExpr;
use hypertoric::symalg::{Expr, Mono, Prod, SignedMono, Sym};
use hypertoric::vertex::*;
use num_complex::Complex64;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

const SEED: u64 = 20240611;
const RANDOM_COUNT: usize = 20;
const MAX_N: usize = 6;
const MAX_K: usize = 2;

const CIRCUIT_DEGREE: i64 = 8;
const COCIRCUIT_DEGREE: i64 = 6;
const DUALITY_POINTS: usize = 5;
const DUALITY_Q_ABS: f64 = 0.3;
const DUALITY_TRUNC: usize = 40;
const DUALITY_TOL: f64 = 1e-10;
const MIRROR_DEGREE: i64 = 12;
const MIRROR_TAIL_FACTOR: f64 = 10.0;
const QBINOMIAL_ORDER: i32 = 12;
const LIMIT_TOL: f64 = 1e-6;
const BOUNDED_DEGREE: i64 = 4;
const RESIDUE_MAX_M: u32 = 3;
const RESIDUE_DEGREE: i64 = 6;

type Outcome = Result<String, String>;

fn instances() -> Vec<HypertoricData> {
    let mut v = fixtures();
    v.extend(random_instances(SEED, RANDOM_COUNT, MAX_N, MAX_K));
    v
}

fn err(e: Error) -> String {
    e.to_string()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn circuit_qde() -> Outcome {
    let mut checked = 0;
    for data in instances() {
        let cs = circuits(&data).map_err(err)?;
        for fp in fixed_points(&data).map_err(err)? {
            let v = bare_vertex(&fp, data.n, None, CIRCUIT_DEGREE).map_err(err)?;
            for c in &cs {
                let r = check_circuit_qde(&fp, data.n, c, &v).map_err(|e| format!("{} {}: {e}", data.label(), fp.label()))?;
                checked += r.checked;
            }
        }
    }
    ensure(checked > 0, || "nothing checked".into())?;
    Ok(format!("{checked} degree identities, zero residual"))
}

fn cocircuit_qde() -> Outcome {
    let mut checked = 0;
    for data in instances() {
        let cs = cocircuits(&data).map_err(err)?;
        for fp in fixed_points(&data).map_err(err)? {
            let v = bare_vertex(&fp, data.n, None, COCIRCUIT_DEGREE).map_err(err)?;
            for c in &cs {
                let r = check_cocircuit_qde(&fp, data.n, data.k, c, &v).map_err(|e| format!("{} {}: {e}", data.label(), fp.label()))?;
                checked += r.checked;
            }
        }
    }
    ensure(checked > 0, || "nothing checked".into())?;
    Ok(format!("{checked} degree identities, zero residual"))
}

fn stab_axioms() -> Outcome {
    let mut pairs = 0;
    for data in instances() {
        let pair = MirrorPair::new(&data).map_err(err)?;
        for (side, fps) in [("X", &pair.fps), ("X'", &pair.dual_fps)] {
            let r = check_stab_axioms(fps).map_err(err)?;
            ensure(r.pass, || format!("{} {side}", data.label()))?;
            pairs += r.pairs.len();
        }
    }
    Ok(format!("{pairs} fixed-point pairs"))
}

fn duality() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut pairs = 0;
    for data in fixtures() {
        let pair = MirrorPair::new(&data).map_err(err)?;
        let r = check_duality(&pair, DUALITY_POINTS, SEED, DUALITY_Q_ABS, DUALITY_TRUNC, DUALITY_TOL).map_err(err)?;
        ensure(r.pass, || format!("{}: deviation {:.2e}", data.label(), r.max_numeric_deviation))?;
        worst = worst.max(r.max_numeric_deviation);
        pairs += r.ratio_pairs;
    }
    Ok(format!("{pairs} ratio identities exact, max numeric deviation {worst:.1e}"))
}

fn mirror_theorem() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut tol: f64 = 0.0;
    for name in ["tp1", "tp1xtp1"] {
        let pair = MirrorPair::new(&fixture(name).unwrap()).map_err(err)?;
        let prm = MirrorParams::standard(pair.data.n);
        let r = check_mirror_vertex(&pair, MIRROR_DEGREE, &prm, POptions::default()).map_err(err)?;
        for e in &r.entries {
            let bound = (MIRROR_TAIL_FACTOR * e.tail).max(1e-12);
            ensure(e.deviation <= bound, || format!("{name} {}: deviation {:.2e} > {bound:.2e}", e.fixed_point, e.deviation))?;
            tol = tol.max(bound);
        }
        worst = worst.max(r.max_deviation);
    }
    Ok(format!("max relative deviation {worst:.1e}, tolerance {tol:.1e}"))
}

fn log_identities() -> Outcome {
    let mut points = 0;
    for data in instances() {
        let pair = MirrorPair::new(&data).map_err(err)?;
        let r = check_log_identities(&pair).map_err(|e| format!("{}: {e}", data.label()))?;
        ensure(r.iter().all(|c| c.first && c.second), || data.label())?;
        points += r.len();
    }
    Ok(format!("{points} fixed points, both bilinear forms zero"))
}

fn a0() -> SignedMono {
    SignedMono::plain(Mono::var(Sym::A(0), 1))
}

/// z^d coefficient of φ(yz) by Euler's expansion: (−1)^d q^{d(d−1)/2} y^d/(q)_d.
fn euler(y: &SignedMono, d: i32) -> Prod {
    let num = SignedMono::minus_one().pow(d).mul(&q_pow(d * (d - 1) / 2)).mul(&y.pow(d));
    Prod::signed(&num).div(&pochhammer(&q_pow(1), d)).unwrap()
}

/// Compares Σ_j c_j e_{d−j} with the z^d coefficient of φ(xz).
fn q_binomial_mismatch(cs: &[Prod]) -> Option<i32> {
    let x = a0();
    (0..cs.len() as i32).find(|&d| {
        let lhs = (0..=d).fold(Expr::zero(), |acc, j| acc.add(&Expr::from(cs[j as usize].mul(&euler(&SignedMono::one(), d - j)))));
        !lhs.sub(&Expr::from(euler(&x, d))).is_zero()
    })
}

fn limit_setup(fp: &FixedPoint) -> LimitSetup {
    let c = Complex64::new;
    LimitSetup {
        q: c(0.35, 0.12),
        hbar: c(0.55, -0.25),
        w: (0..fp.p.len()).map(|r| c(0.7 + 0.1 * r as f64, 0.2)).collect(),
        zeta: (0..fp.complement.len()).map(|r| c(0.02, 0.005 * (r as f64 + 1.0))).collect(),
        ts: vec![3e-2, 1e-2, 3e-3, 1e-3, 3e-4],
        trunc: 200,
        tol: LIMIT_TOL,
    }
}

fn q_binomial_and_limit() -> Outcome {
    let cs = q_binomial_coefficients(&a0(), QBINOMIAL_ORDER).map_err(err)?;
    if let Some(d) = q_binomial_mismatch(&cs) {
        return Err(format!("q-binomial fails at order {d}"));
    }
    let mut worst: f64 = 0.0;
    for (name, bound) in [("tp1", 10), ("tp2", 8)] {
        let data = fixture(name).unwrap();
        for fp in fixed_points(&data).map_err(err)? {
            let r = vertex_limit(&fp, data.n, bound, &limit_setup(&fp), false).map_err(err)?;
            ensure(r.passed, || format!("{name} {}: {:.2e}", fp.label(), r.extrapolated_deviation))?;
            worst = worst.max(r.extrapolated_deviation);
        }
    }
    Ok(format!("q-binomial exact to order {QBINOMIAL_ORDER}, limit deviation {worst:.1e}"))
}

fn boundedness() -> Outcome {
    let mut count = 0;
    for data in instances() {
        for fp in fixed_points(&data).map_err(err)? {
            let r = q_boundedness(&bare_vertex(&fp, data.n, None, BOUNDED_DEGREE).map_err(err)?).map_err(err)?;
            ensure(r.all_bounded, || format!("{} {}", data.label(), fp.label()))?;
            count += r.entries.len();
        }
    }
    Ok(format!("{count} coefficients bounded at q → 0 and q → ∞"))
}

fn residues() -> Outcome {
    let mut poles = 0;
    let mut curves = 0;
    for name in ["tp1", "tp2"] {
        let data = fixture(name).unwrap();
        let fps = fixed_points(&data).map_err(err)?;
        for p in &fps {
            for q in &fps {
                if p.p == q.p || !attracting_contains(p, q) {
                    continue;
                }
                let Ok(curve) = invariant_curve(p, q, data.n) else { continue };
                curves += 1;
                for m in 1..=RESIDUE_MAX_M {
                    let r = check_jfunction_residues(p, q, &curve, data.n, m, RESIDUE_DEGREE).map_err(|e| format!("{name} {}: {e}", r_label(p, q)))?;
                    ensure(r.non_simple.is_empty(), || format!("{name} {}: higher-order poles", r_label(p, q)))?;
                    poles += r.poles_checked;
                }
            }
        }
    }
    ensure(curves > 0 && poles > 0, || "no residues checked".into())?;
    Ok(format!("{curves} curves, {poles} residues"))
}

fn r_label(p: &FixedPoint, q: &FixedPoint) -> String {
    format!("{}->{}", p.label(), q.label())
}

fn combinatorial_duality() -> Outcome {
    let mut items = 0;
    for data in instances() {
        let pair = MirrorPair::new(&data).map_err(err)?;
        for c in check_combinatorial_duality(&pair).map_err(err)? {
            ensure(c.pass, || format!("{}: {}", data.label(), c.item))?;
            items += 1;
        }
    }
    Ok(format!("{items} checks, including brute-force supports"))
}

/// Each corruption must be rejected; returns the names of those that were not.
fn negative_controls() -> Outcome {
    let mut missed = Vec::new();
    let mut run = |name: &str, detected: bool| {
        if !detected {
            missed.push(name.to_string());
        }
    };
    let tp1 = fixture("tp1").unwrap();
    let tp2 = fixture("tp2").unwrap();
    let fps1 = fixed_points(&tp1).unwrap();
    let fp = &fps1[0];
    let c0 = &circuits(&tp1).unwrap()[0];
    let co0 = &cocircuits(&tp1).unwrap()[0];

    let mut flipped = bare_vertex(fp, 2, None, 6).unwrap();
    let d = vec![fp.cone_signs()[0] * 2];
    let c = flipped.get(&d).unwrap();
    flipped.set(&d, c.neg()).unwrap();
    run("circuit sign flip", check_circuit_qde(fp, 2, c0, &flipped).is_err());
    run("cocircuit sign flip", check_cocircuit_qde(fp, 2, 1, co0, &flipped).is_err());

    let v = bare_vertex(fp, 2, None, 6).unwrap();
    let half = SignedMono::plain(Mono::hbar(1));
    let plain_z = c0.vector.iter().enumerate().fold(SignedMono::one(), |acc, (i, &e)| acc.mul(&z_sharp(i).mul(&half).pow(e as i32)));
    run("circuit dropped ħ-shift", check_circuit_qde_general(fp, 2, c0, &v, &kahler_prefactor(fp, 2), &plain_z).is_err());
    let alpha = root_factor(co0).mul(&Prod::signed(&hbar_pow(1)));
    run("cocircuit extra ħ", check_cocircuit_qde_with(fp, 2, 1, co0, &v, &alpha).is_err());

    let fps2 = fixed_points(&tp2).unwrap();
    let dropped = |p: &FixedPoint| {
        let mut body = stab_section(p).body;
        for &i in &p.p_plus {
            let x = SignedMono::plain(Mono::var(Sym::X(i as u16), 1));
            body = body.mul(&ThetaExpr::theta(&x)).div(&ThetaExpr::theta(&hbar_pow(1).mul(&x))).unwrap();
        }
        StabSection { owner: p.clone(), body }
    };
    let shifted = check_stab_axioms_with(&fps2, &dropped).unwrap();
    run("stab dropped ħ-shift", !shifted.pass);

    let pair2 = MirrorPair::new(&tp2).unwrap();
    let others = pair2.fps.clone();
    let swapped = duality_interface_check_with(&pair2, &|p| {
        let k = others.iter().position(|o| o.p == p.p).unwrap();
        normalized_stab(&others[(k + 1) % others.len()])
    });
    run("duality interface swapped sections", swapped.map_or(true, |cs| cs.iter().any(|c| !c.pass)));

    let pair1 = MirrorPair::new(&tp1).unwrap();
    let prm = MirrorParams::standard(2);
    let bad = check_mirror_vertex(&pair1, MIRROR_DEGREE, &prm, POptions { drop_prefactor: true }).unwrap();
    run("mirror dropped prefactor", !bad.pass);

    let mut perturbed = pair2.fps[0].clone();
    perturbed.c[0][0] += 1;
    run("log identity perturbed C", !second_log_residual(&perturbed, &pair2.dual_fps[0], 3).is_zero());

    let mut pair_c = MirrorPair::new(&tp2).unwrap();
    pair_c.fps[0].c[0][0] += 1;
    run("combinatorial perturbed C", check_combinatorial_duality(&pair_c).map_or(true, |cs| cs.iter().any(|c| !c.pass)));

    let mut cs = q_binomial_coefficients(&a0(), QBINOMIAL_ORDER).unwrap();
    cs[5] = cs[5].neg();
    run("q-binomial sign flip", q_binomial_mismatch(&cs).is_some());

    let lim = vertex_limit(fp, 2, 10, &limit_setup(fp), true).unwrap();
    run("limit wrong ħ", !lim.passed);

    let mut unbounded = bare_vertex(fp, 2, None, 4).unwrap();
    let zero = vec![0];
    let c = unbounded.get(&zero).unwrap();
    unbounded.set(&zero, c.mul_prod(&Prod::signed(&q_pow(1)))).unwrap();
    run("boundedness extra q", !q_boundedness(&unbounded).unwrap().all_bounded);

    ensure(missed.is_empty(), || format!("undetected: {}", missed.join(", ")))?;
    Ok("13 corruptions rejected".into())
}

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

#[test]
fn acceptance() {
    let criteria = [
        Criterion { id: 1, name: "circuit q-difference equations", budget: Duration::from_secs(60), run: circuit_qde },
        Criterion { id: 2, name: "cocircuit q-difference equations", budget: Duration::from_secs(120), run: cocircuit_qde },
        Criterion { id: 3, name: "stable envelope axioms", budget: Duration::from_secs(10), run: stab_axioms },
        Criterion { id: 4, name: "duality interface", budget: Duration::from_secs(30), run: duality },
        Criterion { id: 5, name: "mirror vertex theorem", budget: Duration::from_secs(120), run: mirror_theorem },
        Criterion { id: 6, name: "log identities", budget: Duration::from_secs(5), run: log_identities },
        Criterion { id: 7, name: "q-binomial and vertex limit", budget: Duration::from_secs(30), run: q_binomial_and_limit },
        Criterion { id: 8, name: "boundedness in q", budget: Duration::from_secs(10), run: boundedness },
        Criterion { id: 9, name: "residues along invariant curves", budget: Duration::from_secs(30), run: residues },
        Criterion { id: 10, name: "combinatorial duality", budget: Duration::from_secs(10), run: combinatorial_duality },
        Criterion { id: 11, name: "negative controls", budget: Duration::from_secs(30), run: negative_controls },
    ];
    let mut failed = Vec::new();
    for c in &criteria {
        let start = Instant::now();
        let out = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let out = out.and_then(|m| {
            if elapsed > c.budget {
                Err(format!("{m}; over budget of {:?}", c.budget))
            } else {
                Ok(m)
            }
        });
        match &out {
            Ok(m) => println!("criterion {:>2} PASS  {} ({:.1?}): {m}", c.id, c.name, elapsed),
            Err(m) => {
                println!("criterion {:>2} FAIL  {} ({:.1?}): {m}", c.id, c.name, elapsed);
                failed.push(c.id);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
