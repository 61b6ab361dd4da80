use hypertoric::arrangement::{attracting_contains, circuits, cocircuits, fixed_points};
use hypertoric::hypertoric_data::{dualize, standard_frame, unimodular_bruteforce, HypertoricData};
use hypertoric::instances::{fixture, random_instances};
use hypertoric::lattice::IntMat;
use hypertoric::qkring::check_vanishing_at_fixed_points;
use hypertoric::qseries::{bracket, bracket_second_form, pochhammer};
use hypertoric::stab::{check_stab_axioms, numeric_gap, random_assignment};
use hypertoric::symalg::logform::{LinForm, LogPrefactor};
use hypertoric::symalg::theta::ThetaExpr;
use hypertoric::symalg::{Expr, Mono, Prod, SignedMono, Sym};
use hypertoric::vertex::{bare_vertex, polarization_check, q_pow};
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn instance(seed: u64) -> HypertoricData {
    random_instances(seed, 1, 6, 2).remove(0)
}

/// A signed monomial in q^{1/2}, ħ^{1/2}, a_1..a_3, x_1..x_3.
fn mono() -> impl Strategy<Value = SignedMono> {
    (0..2i32, -3..=3i32, -3..=3i32, prop::collection::vec(-2..=2i32, 6)).prop_map(|(ph, q, h, e)| {
        let syms = [Sym::A(0), Sym::A(1), Sym::A(2), Sym::X(0), Sym::X(1), Sym::X(2)];
        let pairs = [(Sym::QH, q), (Sym::HH, h)].into_iter().chain(syms.into_iter().zip(e));
        SignedMono::new(ph, Mono::from_pairs(pairs))
    })
}

/// Products of a monomial with up to three factors 1 − y.
fn prod() -> impl Strategy<Value = Prod> {
    (mono(), prop::collection::vec(mono(), 0..3), -3..=3i64).prop_map(|(m, fs, c)| {
        let c = if c == 0 { 1 } else { c };
        fs.iter().filter(|y| !y.m.is_one()).fold(Prod::signed(&m).mul(&Prod::int(c)), |acc, y| acc.mul(&Prod::one_minus(y)))
    })
}

fn theta_expr() -> impl Strategy<Value = ThetaExpr> {
    prop::collection::vec((mono(), prop::bool::ANY), 1..5).prop_map(|fs| {
        fs.iter().fold(ThetaExpr::one(), |acc, (y, up)| {
            let t = ThetaExpr::theta(y);
            if *up || y.m.is_one() {
                acc.mul(&t)
            } else {
                acc.div(&t).unwrap()
            }
        })
    })
}

#[test]
fn attracting_order_is_partial_on_fixtures() {
    for name in ["tp1", "tp2", "tp1xtp1"] {
        let fps = fixed_points(&fixture(name).unwrap()).unwrap();
        for p in &fps {
            assert!(attracting_contains(p, p));
            for q in &fps {
                if p.p != q.p {
                    assert!(!(attracting_contains(p, q) && attracting_contains(q, p)), "{name}");
                }
                for r in &fps {
                    if attracting_contains(p, q) && attracting_contains(q, r) {
                        assert!(attracting_contains(p, r), "{name}");
                    }
                }
            }
        }
    }
}

fn lin(y: &SignedMono) -> LinForm {
    LinForm::log_of(y)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn data_is_exact_and_dualizes(seed in any::<u64>()) {
        let d = instance(seed);
        prop_assert!(d.beta_mat().mul(&d.iota_mat()).is_zero());
        prop_assert!(unimodular_bruteforce(&d));
        let dd = dualize(&d).unwrap();
        prop_assert!(unimodular_bruteforce(&dd));
        prop_assert_eq!(dualize(&dd).unwrap().iota, d.iota);
    }

    #[test]
    fn standard_frame_inverts(seed in any::<u64>()) {
        let d = instance(seed);
        for fp in fixed_points(&d).unwrap() {
            let f = standard_frame(&d, &fp.p).unwrap();
            let g = IntMat::from_rows(&f.g_k, d.k).inverse_unimodular().unwrap();
            let h = IntMat::from_rows(&f.h_d, d.d).inverse_unimodular().unwrap();
            prop_assert_eq!(f.iota_frame(&d).mul(&g), d.iota_mat());
            prop_assert_eq!(h.mul(&f.beta_frame(&d)), d.beta_mat());
            let on_complement = f.iota_frame(&d).select_rows(&f.complement);
            prop_assert_eq!(on_complement, IntMat::identity(d.k));
        }
    }

    #[test]
    fn circuits_are_dual_cocircuits(seed in any::<u64>()) {
        let d = instance(seed);
        let dd = dualize(&d).unwrap();
        let mut a: Vec<Vec<i64>> = circuits(&d).unwrap().iter().map(|c| c.vector.clone()).collect();
        let mut b: Vec<Vec<i64>> = cocircuits(&dd).unwrap().iter().map(|c| c.negated().vector).collect();
        a.sort();
        b.sort();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn attracting_relation_is_acyclic(seed in any::<u64>()) {
        let fps = fixed_points(&instance(seed)).unwrap();
        prop_assert!(fps.iter().all(|p| attracting_contains(p, p)));
        // Kahn's algorithm on the strict relation
        let n = fps.len();
        let edge = |a: usize, b: usize| a != b && attracting_contains(&fps[a], &fps[b]);
        let mut indeg: Vec<usize> = (0..n).map(|b| (0..n).filter(|&a| edge(a, b)).count()).collect();
        let mut done = vec![false; n];
        for _ in 0..n {
            let Some(a) = (0..n).find(|&a| !done[a] && indeg[a] == 0) else { break };
            done[a] = true;
            for b in 0..n {
                if edge(a, b) {
                    indeg[b] -= 1;
                }
            }
        }
        prop_assert!(done.iter().all(|x| *x));
    }

    #[test]
    fn envelopes_polarizations_and_relations(seed in any::<u64>()) {
        let d = instance(seed);
        let fps = fixed_points(&d).unwrap();
        prop_assert!(check_stab_axioms(&fps).unwrap().pass);
        prop_assert!(fps.iter().all(|p| polarization_check(p, d.n, d.k)));
        prop_assert!(check_vanishing_at_fixed_points(&d, 2).unwrap().pass);
    }

    #[test]
    fn canonicalize_is_idempotent_and_value_preserving(t in theta_expr(), seed in any::<u64>()) {
        let c = t.canonicalize();
        prop_assert!(c.canonicalize().same(&c));
        prop_assume!(!c.is_zero() && !c.is_singular());
        let asg = random_assignment(&mut ChaCha8Rng::seed_from_u64(seed), 3, 0.3);
        prop_assert!(numeric_gap(&t, &c, &asg, 60).unwrap() < 1e-9);
    }

    #[test]
    fn shifts_are_additive(y1 in mono(), y2 in mono(), a in -3..=3i64, b in -3..=3i64) {
        let z = SignedMono::plain(Mono::from_pairs([(Sym::Z(0), 1), (Sym::Z(1), -1)]));
        let pre = LogPrefactor::product(&lin(&z.mul(&y1)), &lin(&y2.mul(&z)));
        let s = Sym::Z(0);
        let (ra, rb) = (BigRational::from_integer(a.into()), BigRational::from_integer(b.into()));
        let joint = pre.shift(s, &(ra.clone() + rb.clone()));
        let first = pre.shift(s, &ra);
        let second = pre.translate(s, &ra).shift(s, &rb);
        prop_assume!(joint.is_ok() && first.is_ok() && second.is_ok());
        prop_assert!(joint.unwrap().value_eq(&first.unwrap().mul(&second.unwrap())));
    }

    #[test]
    fn rational_arithmetic_is_a_field(a in prod(), b in prod(), c in prod()) {
        let (ea, eb, ec) = (Expr::from(a.clone()), Expr::from(b.clone()), Expr::from(c));
        prop_assert!(ea.add(&eb).add(&ec).eq_value(&ea.add(&eb.add(&ec))));
        prop_assert!(ea.mul(&eb.add(&ec)).eq_value(&ea.mul(&eb).add(&ea.mul(&ec))));
        prop_assert!(ea.mul(&eb).eq_value(&eb.mul(&ea)));
        prop_assert!(Expr::from(a.mul(&b).div(&b).unwrap()).eq_value(&ea));
    }

    #[test]
    fn pochhammer_telescopes(x in mono(), d in -5..=5i32, e in -5..=5i32) {
        let x = SignedMono::new(x.phase, x.m.without(Sym::QH));
        prop_assume!(!x.m.is_one());
        let lhs = pochhammer(&x, d + e);
        let rhs = pochhammer(&x, d).mul(&pochhammer(&q_pow(d).mul(&x), e));
        prop_assert!(Expr::from(lhs).eq_value(&Expr::from(rhs)));
    }

    #[test]
    fn bracket_forms_agree(a in mono(), d in -6..=6i32) {
        let a = SignedMono::new(a.phase, a.m.without(Sym::QH).without(Sym::HH));
        prop_assume!(!a.m.is_one());
        let f = bracket(&a, d).unwrap();
        let g = bracket_second_form(&a, d).unwrap();
        prop_assert!(Expr::from(f).eq_value(&Expr::from(g)));
    }

    #[test]
    fn series_product_is_associative(i in 0usize..3, j in 0usize..3, which in 0usize..3) {
        let d = fixture("tp2").unwrap();
        let fp = fixed_points(&d).unwrap().remove(which);
        let v = bare_vertex(&fp, d.n, None, 3).unwrap();
        let (f, g, h) = (v.line_shift(i), v.clone(), v.line_shift(j));
        let l = f.mul(&g).unwrap().mul(&h).unwrap();
        let r = f.mul(&g.mul(&h).unwrap()).unwrap();
        let ij = v.line_shift(i).line_shift(j);
        let ji = v.line_shift(j).line_shift(i);
        for deg in l.known_degrees() {
            prop_assert!(l.get(&deg).unwrap().eq_value(&r.get(&deg).unwrap()));
        }
        for deg in ij.known_degrees() {
            if let (Ok(a), Ok(b)) = (ij.get(&deg), ji.get(&deg)) {
                prop_assert!(a.eq_value(&b));
            }
        }
    }
}
