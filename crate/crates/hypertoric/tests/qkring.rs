use hypertoric::arrangement::fixed_points;
use hypertoric::error::Error;
use hypertoric::hypertoric_data::{load_data, HypertoricData};
use hypertoric::qkring::*;
use hypertoric::symalg::{Mono, Poly, SignedMono, Sym};

fn fixture(name: &str) -> HypertoricData {
    let path = format!("{}/fixtures/{}.json", env!("CARGO_MANIFEST_DIR"), name);
    load_data(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn relations_vanish_at_fixed_points() {
    for name in ["tp1", "tp2", "tp1xtp1"] {
        let r = check_vanishing_at_fixed_points(&fixture(name), 3).unwrap();
        assert!(r.pass && r.qde_checks > 0, "{name}");
    }
}

#[test]
fn corrupted_restriction_fails() {
    let data = fixture("tp2");
    let fps = fixed_points(&data).unwrap();
    let bad = |p: &hypertoric::arrangement::FixedPoint, i: usize| {
        let r = p.restriction(i);
        if r.m.is_one() { SignedMono::plain(Mono::hbar(2)) } else { r }
    };
    assert!(matches!(check_vanishing_with(&data, &fps, &bad), Err(Error::VanishingFailure(..))));
}

#[test]
fn quantum_relations_specialize() {
    for name in ["tp1", "tp2", "tp1xtp1"] {
        let data = fixture(name);
        let c = classical_relations(&data).unwrap();
        let q = quantum_relations(&data).unwrap();
        assert_eq!(c.circuits.len(), q.circuits.len());
        for (a, b) in c.circuits.iter().zip(&q.circuits) {
            // z → 0 keeps exactly the z-free terms
            let z_free = b.poly.terms().filter(|(m, _)| m.pairs().iter().all(|(s, _)| !matches!(s, Sym::Z(_)))).fold(Poly::zero(), |acc, (m, c)| acc.add(&Poly::term(c.clone(), m.clone())));
            assert_eq!(z_free, a.poly, "{name}");
            assert_ne!(b.poly, a.poly, "{name}");
        }
    }
}

#[test]
fn rank_is_number_of_fixed_points() {
    for name in ["tp1", "tp2", "tp1xtp1"] {
        let r = check_rank(&fixture(name), 5, &[2, 3, 4, 5, 6]).unwrap();
        eprintln!("{name} {:?}", r);
        assert!(r.pass, "{name}: {:?}", r);
    }
}
