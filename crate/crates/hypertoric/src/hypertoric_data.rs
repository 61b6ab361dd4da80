//! Integer lattice data (ι, β, θ̃, σ̃): parsing, validation, frames and duality.

use crate::error::{Error, Result};
use crate::lattice::{subsets, IntMat};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypertoricData {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    /// n×k
    pub iota: Vec<Vec<i64>>,
    /// d×n
    pub beta: Vec<Vec<i64>>,
    pub theta_lift: Vec<i64>,
    pub sigma_lift: Vec<i64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawData {
    iota: Vec<Vec<i64>>,
    #[serde(default)]
    beta: Option<Vec<Vec<i64>>>,
    #[serde(default)]
    theta_lift: Option<Vec<i64>>,
    #[serde(default)]
    sigma_lift: Option<Vec<i64>>,
    #[serde(default)]
    name: Option<String>,
    /// Explicit gauge rank, needed only when every row of iota is empty.
    #[serde(default)]
    k: Option<usize>,
}

/// Parses and validates a JSON document.
pub fn load_data(document: &str) -> Result<HypertoricData> {
    let raw: RawData = serde_json::from_str(document).map_err(|e| Error::Parse(e.to_string()))?;
    let k = raw.k.unwrap_or_else(|| raw.iota.first().map_or(0, |r| r.len()));
    let n = raw.iota.len();
    HypertoricData::new(
        raw.iota,
        k,
        raw.beta,
        raw.theta_lift.unwrap_or_else(|| vec![0; n]),
        raw.sigma_lift.unwrap_or_else(|| vec![0; n]),
        raw.name,
    )
}

impl HypertoricData {
    pub fn new(
        iota: Vec<Vec<i64>>,
        k: usize,
        beta: Option<Vec<Vec<i64>>>,
        theta_lift: Vec<i64>,
        sigma_lift: Vec<i64>,
        name: Option<String>,
    ) -> Result<Self> {
        let n = iota.len();
        if n == 0 {
            return Err(Error::Shape("iota has no rows".into()));
        }
        if iota.iter().any(|r| r.len() != k) {
            return Err(Error::Shape(format!("iota rows must all have length {}", k)));
        }
        if k > n {
            return Err(Error::RankDeficient(format!("k = {} exceeds n = {}", k, n)));
        }
        if theta_lift.len() != n || sigma_lift.len() != n {
            return Err(Error::Shape(format!("lifts must have length {}", n)));
        }
        let d = n - k;
        let im = IntMat::from_rows(&iota, k);
        if im.rank() != k {
            return Err(Error::RankDeficient(format!("iota has rank {} < {}", im.rank(), k)));
        }
        let divisors = im.smith_divisors();
        if divisors.iter().any(|x| !x.is_one()) {
            return Err(Error::NotSaturated(divisors.iter().map(|x| x.to_string()).collect()));
        }
        let beta = match beta {
            Some(b) => {
                if b.len() != d || b.iter().any(|r| r.len() != n) {
                    return Err(Error::Shape(format!("beta must be {}×{}", d, n)));
                }
                b
            }
            None => complement_basis(&im),
        };
        let bm = IntMat::from_rows(&beta, n);
        if !bm.mul(&im).is_zero() {
            return Err(Error::NonExact);
        }
        if bm.rank() != d {
            return Err(Error::RankDeficient(format!("beta has rank {} < {}", bm.rank(), d)));
        }
        for (cols, m) in bm.maximal_minors() {
            if m.abs() > BigInt::one() {
                let cols: Vec<usize> = cols.iter().map(|c| c + 1).collect();
                return Err(Error::NotUnimodular(format!("minor on columns {:?} equals {}", cols, m)));
            }
        }
        // with unimodular minors and full rank, beta is onto; the sequence is exact
        Ok(HypertoricData { name, n, k, d, iota, beta, theta_lift, sigma_lift })
    }

    pub fn iota_mat(&self) -> IntMat {
        IntMat::from_rows(&self.iota, self.k)
    }
    pub fn beta_mat(&self) -> IntMat {
        IntMat::from_rows(&self.beta, self.n)
    }

    /// ⟨v, β(e_i)⟩ for an integer vector v ∈ ℤ^d-dual.
    pub fn beta_col(&self, i: usize) -> Vec<i64> {
        self.beta.iter().map(|r| r[i]).collect()
    }

    pub fn with_lifts(&self, theta: Vec<i64>, sigma: Vec<i64>) -> Result<Self> {
        HypertoricData::new(self.iota.clone(), self.k, Some(self.beta.clone()), theta, sigma, self.name.clone())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| format!("n{}k{}", self.n, self.k))
    }
}

/// A basis of the integer kernel of ι^T, in Hermite form with positive pivots.
fn complement_basis(iota: &IntMat) -> Vec<Vec<i64>> {
    let ker = iota.transpose().integer_kernel();
    ker.hermite_rows().to_i64_rows()
}

/// Data in the standard frame of a vertex p.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FramedData {
    pub p: Vec<usize>,
    pub complement: Vec<usize>,
    /// d×k matrix C(p), rows indexed by p, columns by the complement (sorted).
    pub c: Vec<Vec<i64>>,
    /// k×k unimodular change of basis of ℤ^k: ι·g has the identity on complement rows.
    pub g_k: Vec<Vec<i64>>,
    /// d×d unimodular change of basis of ℤ^d: h·β equals (−C | I) on (complement | p) columns.
    pub h_d: Vec<Vec<i64>>,
}

impl FramedData {
    /// ι in frame coordinates (original row order).
    pub fn iota_frame(&self, data: &HypertoricData) -> IntMat {
        data.iota_mat().mul(&IntMat::from_rows(&self.g_k, data.k))
    }
    pub fn beta_frame(&self, data: &HypertoricData) -> IntMat {
        IntMat::from_rows(&self.h_d, data.d).mul(&data.beta_mat())
    }
}

pub fn complement(n: usize, p: &[usize]) -> Vec<usize> {
    (0..n).filter(|i| !p.contains(i)).collect()
}

pub fn standard_frame(data: &HypertoricData, p: &[usize]) -> Result<FramedData> {
    let label = format!("{:?}", p.iter().map(|i| i + 1).collect::<Vec<_>>());
    if p.len() != data.d || p.iter().any(|&i| i >= data.n) {
        return Err(Error::NotAVertex(label));
    }
    let a = complement(data.n, p);
    let im = data.iota_mat();
    let ia = im.select_rows(&a);
    let g = ia.inverse_unimodular().ok_or_else(|| Error::NotAVertex(label.clone()))?;
    let c = im.select_rows(p).mul(&g);
    let bm = data.beta_mat();
    let h = bm.select_cols(p).inverse_unimodular().ok_or(Error::NotAVertex(label))?;
    Ok(FramedData { p: p.to_vec(), complement: a, c: c.to_i64_rows(), g_k: g.to_i64_rows(), h_d: h.to_i64_rows() })
}

/// The mirror data: ι′ = β^T, β′ = ι^T, θ̃′ = −σ̃, σ̃′ = −θ̃.
pub fn dualize(data: &HypertoricData) -> Result<HypertoricData> {
    let iota: Vec<Vec<i64>> = (0..data.n).map(|i| data.beta.iter().map(|r| r[i]).collect()).collect();
    let beta: Vec<Vec<i64>> = (0..data.k).map(|j| data.iota.iter().map(|r| r[j]).collect()).collect();
    HypertoricData::new(
        iota,
        data.d,
        Some(beta),
        data.sigma_lift.iter().map(|x| -x).collect(),
        data.theta_lift.iter().map(|x| -x).collect(),
        data.name.as_ref().map(|s| format!("{}'", s)),
    )
}

/// Brute-force unimodularity test over all d-subsets of columns (for cross-checks).
pub fn unimodular_bruteforce(data: &HypertoricData) -> bool {
    let bm = data.beta_mat();
    subsets(data.n, data.d).into_iter().all(|cols| {
        let det = bm.select_cols(&cols).det();
        det.is_zero() || det.abs().is_one()
    })
}

pub fn to_i64(x: &BigInt) -> i64 {
    x.to_i64().expect("entry fits in i64")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_from_kernel() {
        let d = load_data(r#"{"iota": [[1],[1]]}"#).unwrap();
        assert_eq!(d.beta, vec![vec![1, -1]]);
        assert_eq!((d.n, d.k, d.d), (2, 1, 1));
    }

    #[test]
    fn validation_errors() {
        assert_eq!(load_data(r#"{"iota": [[1],[1]], "beta": [[1,1]]}"#), Err(Error::NonExact));
        assert!(matches!(load_data(r#"{"iota": [[2]]}"#), Err(Error::NotSaturated(_))));
        assert!(matches!(load_data(r#"{"iota": [[1],[1],[1]], "beta": [[1,-1,0],[1,1,-2]]}"#), Err(Error::NotUnimodular(_)) | Err(Error::NonExact)));
        assert!(matches!(load_data("{"), Err(Error::Parse(_))));
    }

    #[test]
    fn frames_of_tp1() {
        let d = load_data(r#"{"iota": [[1],[1]], "beta": [[1,-1]], "theta_lift": [1,0], "sigma_lift": [1,0]}"#).unwrap();
        let f = standard_frame(&d, &[0]).unwrap();
        assert_eq!(f.c, vec![vec![1]]);
        assert_eq!(f.beta_frame(&d).to_i64_rows(), vec![vec![1, -1]]);
        let f = standard_frame(&d, &[1]).unwrap();
        assert_eq!(f.c, vec![vec![1]]);
        assert_eq!(f.beta_frame(&d).to_i64_rows(), vec![vec![-1, 1]]);
        assert!(matches!(standard_frame(&d, &[0, 1]), Err(Error::NotAVertex(_))));
    }

    #[test]
    fn duality() {
        let d = load_data(r#"{"iota": [[1],[1]], "beta": [[1,-1]], "theta_lift": [1,0], "sigma_lift": [1,0]}"#).unwrap();
        let m = dualize(&d).unwrap();
        assert_eq!(m.iota, vec![vec![1], vec![-1]]);
        assert_eq!(m.beta, vec![vec![1, 1]]);
        assert_eq!(m.theta_lift, vec![-1, 0]);
        assert_eq!(m.sigma_lift, vec![-1, 0]);
        assert_eq!(dualize(&m).unwrap().iota, d.iota);
        assert_eq!(dualize(&m).unwrap().theta_lift, d.theta_lift);
        let t = load_data(r#"{"iota": [[],[]], "k": 0}"#).unwrap();
        let tm = dualize(&t).unwrap();
        assert_eq!((tm.n, tm.k, tm.d), (2, 2, 0));
        assert!(tm.beta.is_empty());
    }
}
