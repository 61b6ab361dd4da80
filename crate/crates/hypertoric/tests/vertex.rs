use hypertoric::arrangement::{circuits, cocircuits, fixed_points};
use hypertoric::error::Error;
use hypertoric::hypertoric_data::{load_data, HypertoricData};
use hypertoric::symalg::Expr;
use hypertoric::vertex::*;

fn fixture(name: &str) -> HypertoricData {
    let path = format!("{}/fixtures/{}.json", env!("CARGO_MANIFEST_DIR"), name);
    load_data(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn circuit_qde_holds() {
    for (name, bound) in [("tp1", 8), ("tp2", 5), ("tp1xtp1", 4)] {
        let data = fixture(name);
        for fp in fixed_points(&data).unwrap() {
            let v = bare_vertex(&fp, data.n, None, bound).unwrap();
            for c in circuits(&data).unwrap() {
                let r = check_circuit_qde(&fp, data.n, &c, &v).unwrap();
                assert!(r.checked > 0, "{name} {}", fp.label());
            }
        }
    }
}

#[test]
fn cocircuit_qde_holds() {
    for (name, bound) in [("tp1", 6), ("tp2", 4), ("tp1xtp1", 3)] {
        let data = fixture(name);
        for fp in fixed_points(&data).unwrap() {
            let v = bare_vertex(&fp, data.n, None, bound).unwrap();
            for c in cocircuits(&data).unwrap() {
                let r = check_cocircuit_qde(&fp, data.n, data.k, &c, &v).unwrap();
                assert!(r.checked > 0, "{name} {}", fp.label());
            }
        }
    }
}

#[test]
fn corrupted_coefficient_is_detected() {
    let data = fixture("tp1");
    let fp = &fixed_points(&data).unwrap()[0];
    let mut v = bare_vertex(fp, 2, None, 6).unwrap();
    let d = vec![fp.cone_signs()[0] * 2];
    let c = v.get(&d).unwrap();
    v.set(&d, c.add(&Expr::one())).unwrap();
    let c0 = &circuits(&data).unwrap()[0];
    assert!(matches!(check_circuit_qde(fp, 2, c0, &v), Err(Error::IdentityFailure { .. })));
    let co = &cocircuits(&data).unwrap()[0];
    assert!(matches!(check_cocircuit_qde(fp, 2, 1, co, &v), Err(Error::IdentityFailure { .. })));
}

#[test]
fn second_bracket_form_agrees() {
    let data = fixture("tp2");
    for fp in fixed_points(&data).unwrap() {
        let a = bare_vertex_with(&fp, 3, None, 4, BracketForm::First).unwrap();
        let b = bare_vertex_with(&fp, 3, None, 4, BracketForm::Second).unwrap();
        for d in a.known_degrees() {
            assert!(a.get(&d).unwrap().eq_value(&b.get(&d).unwrap()));
        }
    }
}

#[test]
fn polarization_everywhere() {
    for name in ["tp1", "tp2", "tp1xtp1"] {
        let data = fixture(name);
        for fp in fixed_points(&data).unwrap() {
            assert!(polarization_check(&fp, data.n, data.k));
        }
    }
}

fn c(re: f64, im: f64) -> num_complex::Complex64 {
    num_complex::Complex64::new(re, im)
}

fn limit_setup(fp: &hypertoric::arrangement::FixedPoint) -> LimitSetup {
    LimitSetup {
        q: c(0.35, 0.12),
        hbar: c(0.55, -0.25),
        w: (0..fp.p.len()).map(|r| c(0.7 + 0.1 * r as f64, 0.2)).collect(),
        zeta: (0..fp.complement.len()).map(|r| c(0.02, 0.005 * (r as f64 + 1.0))).collect(),
        ts: vec![3e-2, 1e-2, 3e-3, 1e-3, 3e-4],
        trunc: 200,
        tol: 1e-6,
    }
}

#[test]
fn bounded_in_q() {
    for name in ["tp1", "tp2", "tp1xtp1"] {
        let data = fixture(name);
        for fp in fixed_points(&data).unwrap() {
            let v = bare_vertex(&fp, data.n, None, 4).unwrap();
            assert!(q_boundedness(&v).unwrap().all_bounded, "{name} {}", fp.label());
        }
    }
}

#[test]
fn limit_matches_closed_form() {
    for (name, bound) in [("tp1", 10), ("tp2", 8)] {
        let data = fixture(name);
        for fp in fixed_points(&data).unwrap() {
            let s = limit_setup(&fp);
            let r = vertex_limit(&fp, data.n, bound, &s, false).unwrap();
            assert!(r.passed, "{name} {} {:?}", fp.label(), r);
            let bad = vertex_limit(&fp, data.n, bound, &s, true).unwrap();
            assert!(!bad.passed, "{name} {}", fp.label());
        }
    }
}

#[test]
fn residues_along_curves() {
    for name in ["tp1", "tp2"] {
        let data = fixture(name);
        let fps = fixed_points(&data).unwrap();
        for p in &fps {
            for q in &fps {
                let Ok(curve) = hypertoric::arrangement::invariant_curve(p, q, data.n) else { continue };
                for m in 1..=3 {
                    let r = check_jfunction_residues(p, q, &curve, data.n, m, 6).unwrap();
                    assert!(r.non_simple.is_empty(), "{:?}", r);
                    assert!(r.poles_checked > 0, "{:?}", r);
                }
            }
        }
    }
}
