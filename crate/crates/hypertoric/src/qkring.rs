//! Presentations of the classical and quantum K-theory rings, their vanishing
//! at fixed points and a dimension count over a prime field.

use crate::arrangement::{circuits, fixed_points, Circuit, FixedPoint};
use crate::error::{Error, Result};
use crate::hypertoric_data::HypertoricData;
use crate::symalg::poly::rat;
use crate::symalg::{Mono, Poly, SignedMono, Sym};
use crate::vertex::{bare_vertex, check_circuit_qde, z_sharp};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Clone, Debug, Serialize)]
pub struct CircuitRelation {
    pub circuit: String,
    pub relation: String,
    #[serde(skip)]
    pub poly: Poly,
}

#[derive(Clone, Debug, Serialize)]
pub struct RingPresentation {
    pub generators: Vec<String>,
    pub linear: Vec<String>,
    pub circuits: Vec<CircuitRelation>,
    pub quantum: bool,
}

fn x(i: usize) -> SignedMono {
    SignedMono::plain(Mono::var(Sym::X(i as u16), 1))
}

fn hx(i: usize) -> SignedMono {
    x(i).mul(&SignedMono::plain(Mono::hbar(2)))
}

fn signed_poly(y: &SignedMono) -> Poly {
    Poly::term(rat(y.sign() as i64), y.m.clone())
}

/// ∏_{S⁺}(1 − f(i)) ∏_{S⁻}(1 − g(i)).
fn circuit_product(c: &Circuit, plus: &dyn Fn(usize) -> SignedMono, minus: &dyn Fn(usize) -> SignedMono) -> Poly {
    let mut p = Poly::one();
    for &i in &c.plus {
        p = p.mul(&Poly::one_minus(&plus(i)));
    }
    for &i in &c.minus {
        p = p.mul(&Poly::one_minus(&minus(i)));
    }
    p
}

pub fn classical_relation(c: &Circuit) -> Poly {
    circuit_product(c, &x, &hx)
}

/// z_♯^β = ∏_{S⁺} z_♯,i ∏_{S⁻} z_♯,i^{-1}.
pub fn z_sharp_beta(c: &Circuit) -> SignedMono {
    c.vector.iter().enumerate().fold(SignedMono::one(), |acc, (i, &e)| acc.mul(&z_sharp(i).pow(e as i32)))
}

pub fn quantum_relation(c: &Circuit) -> Poly {
    let lower = circuit_product(c, &hx, &x);
    classical_relation(c).sub(&lower.mul(&signed_poly(&z_sharp_beta(c))))
}

/// ∏_i (x_i/a_i)^{β_{ji}} = 1 for each row j of β.
pub fn linear_relations(data: &HypertoricData) -> Vec<String> {
    data.beta
        .iter()
        .map(|row| {
            let mut lhs = Mono::one();
            let mut rhs = Mono::one();
            for (i, &b) in row.iter().enumerate() {
                lhs = lhs.mul(&Mono::var(Sym::X(i as u16), b as i32));
                rhs = rhs.mul(&Mono::var(Sym::A(i as u16), b as i32));
            }
            format!("{} = {}", lhs, rhs)
        })
        .collect()
}

fn presentation(data: &HypertoricData, quantum: bool) -> Result<RingPresentation> {
    let circuits = circuits(data)?
        .iter()
        .map(|c| {
            let poly = if quantum { quantum_relation(c) } else { classical_relation(c) };
            CircuitRelation { circuit: c.describe(), relation: poly.to_string(), poly }
        })
        .collect();
    Ok(RingPresentation {
        generators: (0..data.n).map(|i| format!("x{}", i + 1)).collect(),
        linear: linear_relations(data),
        circuits,
        quantum,
    })
}

pub fn classical_relations(data: &HypertoricData) -> Result<RingPresentation> {
    presentation(data, false)
}

pub fn quantum_relations(data: &HypertoricData) -> Result<RingPresentation> {
    presentation(data, true)
}

#[derive(Clone, Debug, Serialize)]
pub struct VanishingEntry {
    pub fixed_point: String,
    pub circuit: String,
    /// S⁺ ∩ A_p⁺ ≠ ∅ or S⁻ ∩ A_p⁻ ≠ ∅.
    pub shadow: bool,
    pub vanishes: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct VanishingReport {
    pub entries: Vec<VanishingEntry>,
    pub qde_checks: usize,
    pub pass: bool,
}

/// Every classical relation at every restriction, plus the circuit equations on the vertex up to `bound`.
pub fn check_vanishing_at_fixed_points(data: &HypertoricData, bound: i64) -> Result<VanishingReport> {
    let fps = fixed_points(data)?;
    let mut r = check_vanishing_with(data, &fps, &|p, i| p.restriction(i))?;
    for p in &fps {
        let v = bare_vertex(p, data.n, None, bound)?;
        for c in circuits(data)? {
            check_circuit_qde(p, data.n, &c, &v)?;
            r.qde_checks += 1;
        }
    }
    Ok(r)
}

pub fn check_vanishing_with(data: &HypertoricData, fps: &[FixedPoint], restriction: &dyn Fn(&FixedPoint, usize) -> SignedMono) -> Result<VanishingReport> {
    let mut entries = Vec::new();
    for c in circuits(data)? {
        let rel = classical_relation(&c);
        for p in fps {
            let value = rel.subst(&|s| match s {
                Sym::X(i) => Some(restriction(p, i as usize)),
                _ => None,
            });
            let shadow = c.plus.iter().any(|i| p.in_a_plus(*i)) || c.minus.iter().any(|i| p.in_a_minus(*i));
            let vanishes = value.is_zero();
            if !vanishes {
                return Err(Error::VanishingFailure(p.label(), c.describe()));
            }
            entries.push(VanishingEntry { fixed_point: p.label(), circuit: c.describe(), shadow, vanishes });
        }
    }
    let pass = entries.iter().all(|e| e.shadow && e.vanishes);
    Ok(VanishingReport { entries, qde_checks: 0, pass })
}

const P: u64 = 2_147_483_647;

fn mul(a: u64, b: u64) -> u64 {
    a * b % P
}

fn inv(a: u64) -> u64 {
    let (mut r, mut b, mut e) = (1, a, P - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, b);
        }
        b = mul(b, b);
        e >>= 1;
    }
    r
}

type Laurent = BTreeMap<Vec<i64>, u64>;

fn times(f: &Laurent, g: &Laurent) -> Laurent {
    let mut out = Laurent::new();
    for (m, c) in f {
        for (n, d) in g {
            let k: Vec<i64> = m.iter().zip(n).map(|(a, b)| a + b).collect();
            let e = out.entry(k).or_insert(0);
            *e = (*e + mul(*c, *d)) % P;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// 1 − c·s^ι_i.
fn one_minus(c: u64, e: &[i64]) -> Laurent {
    let mut f = Laurent::new();
    f.insert(vec![0; e.len()], 1);
    let e = e.to_vec();
    if e.iter().all(|x| *x == 0) {
        let v = (1 + P - c) % P;
        f.insert(e, v);
    } else {
        f.insert(e, (P - c) % P);
    }
    f.retain(|_, c| *c != 0);
    f
}

fn rank(mut rows: Vec<Vec<u64>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for col in 0..cols {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][col] != 0) else { continue };
        rows.swap(r, piv);
        let iv = inv(rows[r][col]);
        for x in rows[r].iter_mut() {
            *x = mul(*x, iv);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][col] != 0 {
                let f = rows[i][col];
                for c in col..cols {
                    rows[i][c] = (rows[i][c] + P - mul(f, rows[r][c])) % P;
                }
            }
        }
        r += 1;
    }
    r
}

#[derive(Clone, Debug, Serialize)]
pub struct RankReport {
    pub fixed_points: usize,
    /// (box radius, quotient dimension) for growing monomial boxes in the variables s.
    pub classical: Vec<(i64, usize)>,
    pub quantum: Vec<(i64, usize)>,
    pub pass: bool,
}

/// Dimension of the quotient of the box of Laurent monomials in s by the multiples of the
/// relations that stay inside it, at random parameter values in the prime field.
fn box_dimension(data: &HypertoricData, rels: &[Laurent], radius: i64) -> usize {
    let k = data.k;
    let mut monos: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..k {
        monos = monos.into_iter().flat_map(|m| (-radius..=radius).map(move |e| [m.clone(), vec![e]].concat())).collect();
    }
    let index: BTreeMap<Vec<i64>, usize> = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let mut rows = Vec::new();
    for f in rels {
        for shift in &monos {
            let moved: Vec<(Vec<i64>, u64)> = f.iter().map(|(m, c)| (m.iter().zip(shift).map(|(a, b)| a + b).collect(), *c)).collect();
            if moved.iter().all(|(m, _)| index.contains_key(m)) {
                let mut row = vec![0; monos.len()];
                for (m, c) in moved {
                    row[index[&m]] = c;
                }
                rows.push(row);
            }
        }
    }
    monos.len() - rank(rows)
}

/// Relations as Laurent polynomials in s with x_i = a_i s^{ι_i}, at random a, ħ (and z).
fn numeric_relations(data: &HypertoricData, quantum: bool, rng: &mut ChaCha8Rng) -> Result<Vec<Laurent>> {
    let a: Vec<u64> = (0..data.n).map(|_| rng.gen_range(2..P)).collect();
    let h: u64 = rng.gen_range(2..P);
    let mut out = Vec::new();
    for c in circuits(data)? {
        let factor = |i: usize, shifted: bool| one_minus(if shifted { mul(h, a[i]) } else { a[i] }, &data.iota[i]);
        let build = |upper: bool| {
            let mut f = Laurent::from([(vec![0; data.k], 1)]);
            for &i in &c.plus {
                f = times(&f, &factor(i, !upper));
            }
            for &i in &c.minus {
                f = times(&f, &factor(i, upper));
            }
            f
        };
        let mut f = build(true);
        if quantum {
            let z: u64 = rng.gen_range(2..P);
            for (m, v) in build(false) {
                let e = f.entry(m).or_insert(0);
                *e = (*e + P - mul(z, v)) % P;
            }
            f.retain(|_, c| *c != 0);
        }
        out.push(f);
    }
    Ok(out)
}

/// The quotient dimension stabilizes at the number of fixed points, classically and quantum.
pub fn check_rank(data: &HypertoricData, seed: u64, radii: &[i64]) -> Result<RankReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fixed = fixed_points(data)?.len();
    let classical_rels = numeric_relations(data, false, &mut rng)?;
    let quantum_rels = numeric_relations(data, true, &mut rng)?;
    let classical: Vec<(i64, usize)> = radii.iter().map(|&r| (r, box_dimension(data, &classical_rels, r))).collect();
    let quantum: Vec<(i64, usize)> = radii.iter().map(|&r| (r, box_dimension(data, &quantum_rels, r))).collect();
    let last = |v: &[(i64, usize)]| v.last().map(|x| x.1);
    let pass = last(&classical) == Some(fixed) && last(&quantum) == Some(fixed);
    Ok(RankReport { fixed_points: fixed, classical, quantum, pass })
}
