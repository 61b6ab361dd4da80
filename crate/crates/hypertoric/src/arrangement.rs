//! Combinatorics of the hyperplane arrangement: vertices, sign splittings,
//! circuits, cocircuits, attracting order and invariant curves.

use crate::error::{Error, Result};
use crate::hypertoric_data::{complement, standard_frame, HypertoricData};
use crate::lattice::{solve_rational, subsets, IntMat};
use crate::symalg::{Mono, SignedMono, Sym};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

/// A vertex p of the arrangement with its sign splittings (indices are 0-based).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedPoint {
    pub p: Vec<usize>,
    pub complement: Vec<usize>,
    pub a_plus: Vec<usize>,
    pub a_minus: Vec<usize>,
    pub p_plus: Vec<usize>,
    pub p_minus: Vec<usize>,
    /// C(p): rows follow `p`, columns follow `complement`.
    pub c: Vec<Vec<i64>>,
    #[serde(skip)]
    pub vertex: Vec<BigRational>,
    /// Exponent vectors of s_J(p) = N_J|_p over (a_1..a_n, ħ), one per column of ι.
    #[serde(skip)]
    pub s: Vec<SignedMono>,
}

pub fn label(set: &[usize]) -> String {
    let v: Vec<String> = set.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", v.join(","))
}

impl FixedPoint {
    pub fn label(&self) -> String {
        label(&self.p)
    }
    pub fn contains(&self, i: usize) -> bool {
        self.p.contains(&i)
    }
    pub fn in_a_plus(&self, i: usize) -> bool {
        self.a_plus.contains(&i)
    }
    pub fn in_a_minus(&self, i: usize) -> bool {
        self.a_minus.contains(&i)
    }
    pub fn in_p_plus(&self, i: usize) -> bool {
        self.p_plus.contains(&i)
    }
    pub fn row(&self, i: usize) -> usize {
        self.p.iter().position(|&x| x == i).expect("index in p")
    }
    pub fn col(&self, j: usize) -> usize {
        self.complement.iter().position(|&x| x == j).expect("index outside p")
    }
    /// C_ij for i ∈ p, j ∉ p.
    pub fn c_ij(&self, i: usize, j: usize) -> i64 {
        self.c[self.row(i)][self.col(j)]
    }
    /// Sign constraint of the degree d_j (+1 on A⁺, −1 on A⁻), per complement position.
    pub fn cone_signs(&self) -> Vec<i64> {
        self.complement.iter().map(|j| if self.in_a_plus(*j) { 1 } else { -1 }).collect()
    }

    /// Degrees D_i of all line bundles for a degree vector over the complement.
    pub fn degrees(&self, d: &[i64], n: usize) -> Vec<i64> {
        (0..n)
            .map(|i| {
                if self.contains(i) {
                    let r = self.row(i);
                    self.c[r].iter().zip(d).map(|(c, x)| c * x).sum()
                } else {
                    d[self.col(i)]
                }
            })
            .collect()
    }

    /// x_i|_p computed from the defining system a_m s^{ι_m} ∈ {1, ħ^{-1}} on the complement.
    pub fn restriction_from_s(&self, data: &HypertoricData, i: usize) -> SignedMono {
        let mut out = SignedMono::plain(Mono::var(Sym::A(i as u16), 1));
        for (jj, s) in self.s.iter().enumerate() {
            out = out.mul(&s.pow(data.iota[i][jj] as i32));
        }
        out
    }

    /// x_i|_p from the frame formula.
    pub fn restriction(&self, i: usize) -> SignedMono {
        if self.in_a_plus(i) {
            return SignedMono::one();
        }
        if self.in_a_minus(i) {
            return SignedMono::plain(Mono::hbar(-2));
        }
        let mut pairs = vec![(Sym::A(i as u16), 1)];
        let mut h = 0;
        for &j in &self.complement {
            let c = self.c_ij(i, j) as i32;
            pairs.push((Sym::A(j as u16), -c));
            if self.in_a_minus(j) {
                h -= c;
            }
        }
        pairs.push((Sym::HH, 2 * h));
        SignedMono::plain(Mono::from_pairs(pairs))
    }

    /// α_i(p) = a_i ∏ a_j^{−C_ij} for i ∈ p.
    pub fn alpha(&self, i: usize) -> Mono {
        let mut pairs = vec![(Sym::A(i as u16), 1)];
        for &j in &self.complement {
            pairs.push((Sym::A(j as u16), -(self.c_ij(i, j) as i32)));
        }
        Mono::from_pairs(pairs)
    }

    /// ζ_j(p) = z_j ∏_{i∈p} z_i^{C_ij} for j ∉ p.
    pub fn zeta(&self, j: usize) -> Mono {
        let mut pairs = vec![(Sym::Z(j as u16), 1)];
        for &i in &self.p {
            pairs.push((Sym::Z(i as u16), self.c_ij(i, j) as i32));
        }
        Mono::from_pairs(pairs)
    }
}

fn dot_rat(v: &[BigRational], col: &[i64]) -> BigRational {
    v.iter().zip(col).map(|(a, b)| a * BigRational::from_integer(BigInt::from(*b))).sum()
}

fn build_fixed_point(data: &HypertoricData, p: Vec<usize>) -> Result<FixedPoint> {
    let bm = data.beta_mat();
    let bp = bm.select_cols(&p).transpose();
    let rhs: Vec<BigInt> = p.iter().map(|&i| BigInt::from(-data.theta_lift[i])).collect();
    let vertex = solve_rational(&bp, &rhs).ok_or_else(|| Error::NotAVertex(label(&p)))?;
    let a = complement(data.n, &p);
    let mut a_plus = Vec::new();
    let mut a_minus = Vec::new();
    for &i in &a {
        let s = dot_rat(&vertex, &data.beta_col(i)) + BigRational::from_integer(BigInt::from(data.theta_lift[i]));
        if s.is_zero() {
            return Err(Error::NonGenericTheta(label(&p), i + 1));
        }
        if s.is_positive() {
            a_plus.push(i);
        } else {
            a_minus.push(i);
        }
    }
    let frame = standard_frame(data, &p)?;
    let mut fp = FixedPoint { p, complement: a, a_plus, a_minus, p_plus: vec![], p_minus: vec![], c: frame.c, vertex, s: vec![] };
    // sign splitting of p from ⟨α_i(p), σ̃⟩
    for &i in &fp.p.clone() {
        let pairing: i64 = data.sigma_lift[i] - fp.complement.iter().map(|&j| fp.c_ij(i, j) * data.sigma_lift[j]).sum::<i64>();
        if pairing == 0 {
            return Err(Error::NonGenericLift(format!("sigma lift pairs to zero with alpha_{}({})", i + 1, fp.label())));
        }
        if pairing > 0 {
            fp.p_plus.push(i);
        } else {
            fp.p_minus.push(i);
        }
    }
    // s(p) from ι restricted to the complement rows
    let ia = data.iota_mat().select_rows(&fp.complement);
    let inv = ia.inverse_unimodular().expect("frame exists");
    let b: Vec<SignedMono> = fp
        .complement
        .iter()
        .map(|&m| {
            let h = if fp.in_a_minus(m) { -2 } else { 0 };
            SignedMono::plain(Mono::from_pairs([(Sym::A(m as u16), -1), (Sym::HH, h)]))
        })
        .collect();
    fp.s = (0..data.k)
        .map(|jj| {
            let mut acc = SignedMono::one();
            for (mm, bm) in b.iter().enumerate() {
                acc = acc.mul(&bm.pow(inv.get(jj, mm).to_i32().expect("small entry")));
            }
            acc
        })
        .collect();
    Ok(fp)
}

/// Like `fixed_points` but without the σ̃-genericity requirement (p± left empty when it fails).
pub fn fixed_points(data: &HypertoricData) -> Result<Vec<FixedPoint>> {
    let bm = data.beta_mat();
    let mut out = Vec::new();
    for p in subsets(data.n, data.d) {
        if bm.select_cols(&p).det().is_zero() {
            continue;
        }
        out.push(build_fixed_point(data, p)?);
    }
    Ok(out)
}

pub fn fixed_point(data: &HypertoricData, p: &[usize]) -> Result<FixedPoint> {
    let mut p = p.to_vec();
    p.sort();
    if p.len() != data.d || data.beta_mat().select_cols(&p).det().is_zero() {
        return Err(Error::NotAVertex(label(&p)));
    }
    build_fixed_point(data, p)
}

/// A signed minimal relation: +1 on `plus`, −1 on `minus`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignedSet {
    pub plus: Vec<usize>,
    pub minus: Vec<usize>,
    pub vector: Vec<i64>,
}

impl SignedSet {
    fn from_vector(v: Vec<i64>) -> Self {
        let plus = (0..v.len()).filter(|&i| v[i] > 0).collect();
        let minus = (0..v.len()).filter(|&i| v[i] < 0).collect();
        SignedSet { plus, minus, vector: v }
    }
    pub fn support(&self) -> Vec<usize> {
        (0..self.vector.len()).filter(|&i| self.vector[i] != 0).collect()
    }
    pub fn pairing(&self, lift: &[i64]) -> i64 {
        self.vector.iter().zip(lift).map(|(a, b)| a * b).sum()
    }
    pub fn negated(&self) -> SignedSet {
        SignedSet::from_vector(self.vector.iter().map(|x| -x).collect())
    }
    pub fn describe(&self) -> String {
        format!("+{} -{}", label(&self.plus), label(&self.minus))
    }
}

pub type Circuit = SignedSet;
pub type Cocircuit = SignedSet;

/// Minimal supports of the integer kernel of `m` (columns indexed 0..n), with
/// primitive ±1 representatives; `None` for a support with a non-unit entry.
fn minimal_supports(m: &IntMat, n: usize) -> Result<Vec<Vec<i64>>> {
    let r = m.rank();
    let mut out = Vec::new();
    for size in 1..=(r + 1).min(n) {
        for s in subsets(n, size) {
            let sub = m.select_cols(&s);
            if sub.rank() != size - 1 {
                continue;
            }
            let ker = sub.integer_kernel();
            if ker.rows() != 1 {
                continue;
            }
            let row = ker.row(0);
            if row.iter().any(|x| x.is_zero()) {
                continue;
            }
            let mut v = vec![0i64; n];
            for (pos, &i) in s.iter().enumerate() {
                let x = row[pos].to_i64().expect("small");
                if x.abs() != 1 {
                    return Err(Error::NotUnimodular(format!("relation on {} has coefficient {}", label(&s), x)));
                }
                v[i] = x;
            }
            out.push(v);
        }
    }
    Ok(out)
}

/// Signed circuits before genericity is enforced, each with its pairing against θ̃.
pub fn raw_circuits(data: &HypertoricData) -> Result<Vec<(Circuit, i64)>> {
    let vs = minimal_supports(&data.beta_mat(), data.n)?;
    Ok(vs
        .into_iter()
        .map(|v| {
            let c = SignedSet::from_vector(v);
            let s = c.pairing(&data.theta_lift);
            if s < 0 {
                (c.negated(), -s)
            } else {
                (c, s)
            }
        })
        .collect())
}

pub fn raw_cocircuits(data: &HypertoricData) -> Result<Vec<(Cocircuit, i64)>> {
    let vs = minimal_supports(&data.iota_mat().transpose(), data.n)?;
    Ok(vs
        .into_iter()
        .map(|v| {
            let c = SignedSet::from_vector(v);
            let s = c.pairing(&data.sigma_lift);
            if s < 0 {
                (c.negated(), -s)
            } else {
                (c, s)
            }
        })
        .collect())
}

pub fn circuits(data: &HypertoricData) -> Result<Vec<Circuit>> {
    raw_circuits(data)?
        .into_iter()
        .map(|(c, s)| if s == 0 { Err(Error::NonGenericLift(format!("theta lift pairs to zero with circuit {}", label(&c.support())))) } else { Ok(c) })
        .collect()
}

pub fn cocircuits(data: &HypertoricData) -> Result<Vec<Cocircuit>> {
    raw_cocircuits(data)?
        .into_iter()
        .map(|(c, s)| if s == 0 { Err(Error::NonGenericLift(format!("sigma lift pairs to zero with cocircuit {}", label(&c.support())))) } else { Ok(c) })
        .collect()
}

/// q lies in the closure of the attracting set of p.
pub fn attracting_contains(p: &FixedPoint, q: &FixedPoint) -> bool {
    !q.a_minus.iter().any(|i| p.p_plus.contains(i)) && !q.a_plus.iter().any(|i| p.p_minus.contains(i))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantCurve {
    pub p: Vec<usize>,
    pub q: Vec<usize>,
    /// i ∈ p ∖ q
    pub i: usize,
    /// j ∈ q ∖ p
    pub j: usize,
    pub circuit: Vec<usize>,
    /// deg L_m|_C for m = 1..n
    pub degrees: Vec<i64>,
    /// Degree vector of the curve over the complement of p.
    pub class_p: Vec<i64>,
    pub tangent: SignedMono,
}

pub fn invariant_curve(p: &FixedPoint, q: &FixedPoint, n: usize) -> Result<InvariantCurve> {
    let pi: Vec<usize> = p.p.iter().copied().filter(|x| !q.contains(*x)).collect();
    let qj: Vec<usize> = q.p.iter().copied().filter(|x| !p.contains(*x)).collect();
    if pi.len() != 1 || qj.len() != 1 {
        return Err(Error::NotAdjacent(p.label(), q.label()));
    }
    let (i, j) = (pi[0], qj[0]);
    let cij = p.c_ij(i, j);
    if cij.abs() != 1 {
        return Err(Error::NotAdjacent(p.label(), q.label()));
    }
    // column j of ι in the p-frame: e_j + Σ_{m∈p} C_mj e_m
    let mut v = vec![0i64; n];
    v[j] = 1;
    for &m in &p.p {
        v[m] = p.c_ij(m, j);
    }
    let want = if q.in_a_plus(i) { 1 } else { -1 };
    if v[i] != want {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    let class_p: Vec<i64> = p.complement.iter().map(|&m| v[m]).collect();
    let xi = p.restriction(i);
    let tangent = if q.in_a_plus(i) { xi } else { SignedMono::plain(Mono::hbar(-2)).mul(&xi.inv()) };
    let mut circuit = p.p.clone();
    circuit.push(j);
    circuit.sort();
    Ok(InvariantCurve { p: p.p.clone(), q: q.p.clone(), i, j, circuit, degrees: v, class_p, tangent })
}

#[derive(Clone, Debug, Serialize)]
pub struct GenericityReport {
    pub generic: bool,
    pub circuit_pairings: Vec<(String, i64)>,
    pub cocircuit_pairings: Vec<(String, i64)>,
    pub offending: Vec<String>,
}

pub fn check_generic(data: &HypertoricData) -> Result<GenericityReport> {
    let cs = raw_circuits(data)?;
    let cos = raw_cocircuits(data)?;
    let mut offending = Vec::new();
    for (c, s) in &cs {
        if *s == 0 {
            offending.push(format!("wall of circuit {}", label(&c.support())));
        }
    }
    for (c, s) in &cos {
        if *s == 0 {
            offending.push(format!("root of cocircuit {}", label(&c.support())));
        }
    }
    Ok(GenericityReport {
        generic: offending.is_empty(),
        circuit_pairings: cs.iter().map(|(c, s)| (c.describe(), *s)).collect(),
        cocircuit_pairings: cos.iter().map(|(c, s)| (c.describe(), *s)).collect(),
        offending,
    })
}

/// Brute-force minimal supports of {−1,0,1}-vectors in the kernel of `m` (cross-check oracle).
pub fn bruteforce_minimal_supports(m: &IntMat, n: usize) -> Vec<Vec<i64>> {
    let mut vecs: Vec<Vec<i64>> = Vec::new();
    let total = 3usize.pow(n as u32);
    for code in 1..total {
        let mut v = vec![0i64; n];
        let mut c = code;
        for x in v.iter_mut() {
            *x = (c % 3) as i64 - 1;
            c /= 3;
        }
        let ok = (0..m.rows()).all(|r| (0..n).map(|col| m.get_i64(r, col) * v[col]).sum::<i64>() == 0);
        if ok && v.iter().any(|x| *x != 0) {
            vecs.push(v);
        }
    }
    let supp = |v: &Vec<i64>| -> Vec<bool> { v.iter().map(|x| *x != 0).collect() };
    let mut out: Vec<Vec<i64>> = Vec::new();
    for v in &vecs {
        let sv = supp(v);
        let minimal = !vecs.iter().any(|w| {
            let sw = supp(w);
            sw != sv && sw.iter().zip(&sv).all(|(a, b)| !*a || *b)
        });
        if minimal && !out.iter().any(|w| w.iter().zip(v).all(|(a, b)| *a == -*b)) {
            out.push(v.clone());
        }
    }
    out
}
