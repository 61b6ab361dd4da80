//! Integer matrices over arbitrary-precision integers: determinants,
//! Smith and Hermite forms, integer kernels.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMat{:?}", self.to_i64_rows())
    }
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMat { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// Builds from rows; `cols` disambiguates the shape when there are no rows.
    pub fn from_rows(rows: &[Vec<i64>], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix");
            for (j, v) in r.iter().enumerate() {
                m.set(i, j, BigInt::from(*v));
            }
        }
        m
    }

    pub fn from_big_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Self {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix");
            data.extend(row);
        }
        IntMat { rows: r, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }
    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn get_i64(&self, i: usize, j: usize) -> i64 {
        self.get(i, j).to_i64().expect("matrix entry exceeds i64")
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn to_i64_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get_i64(i, j)).collect())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut s = BigInt::zero();
                for l in 0..self.cols {
                    s += self.get(i, l) * other.get(l, j);
                }
                out.set(i, j, s);
            }
        }
        out
    }

    pub fn neg(&self) -> IntMat {
        IntMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -x).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> IntMat {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn select_rows(&self, rows: &[usize]) -> IntMat {
        let cols: Vec<usize> = (0..self.cols).collect();
        self.select(rows, &cols)
    }

    pub fn select_cols(&self, cols: &[usize]) -> IntMat {
        let rows: Vec<usize> = (0..self.rows).collect();
        self.select(&rows, cols)
    }

    /// Fraction-free (Bareiss) determinant.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                let Some(r) = (k + 1..n).find(|&r| !a.get(r, k).is_zero()) else {
                    return BigInt::zero();
                };
                a.swap_rows(k, r);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        sign * a.get(n - 1, n - 1)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub fn rank(&self) -> usize {
        let (_, rank) = self.rational_echelon();
        rank
    }

    fn rational_echelon(&self) -> (Vec<Vec<BigRational>>, usize) {
        let mut m: Vec<Vec<BigRational>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| BigRational::from_integer(self.get(i, j).clone())).collect())
            .collect();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(p) = (r..self.rows).find(|&i| !m[i][c].is_zero()) else { continue };
            m.swap(r, p);
            let piv = m[r][c].clone();
            for v in m[r].iter_mut() {
                *v = &*v / &piv;
            }
            for i in 0..self.rows {
                if i != r && !m[i][c].is_zero() {
                    let f = m[i][c].clone();
                    for j in 0..self.cols {
                        let t = &m[r][j] * &f;
                        m[i][j] -= t;
                    }
                }
            }
            r += 1;
        }
        (m, r)
    }

    /// Inverse over the rationals; `None` when singular.
    pub fn inverse_rational(&self) -> Option<Vec<Vec<BigRational>>> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = IntMat::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, BigInt::one());
        }
        let (m, _) = aug.rational_echelon();
        for i in 0..n {
            if m[i][i] != BigRational::one() {
                return None;
            }
        }
        Some(m.into_iter().map(|row| row[n..].to_vec()).collect())
    }

    /// Inverse of a unimodular matrix, `None` unless det = ±1.
    pub fn inverse_unimodular(&self) -> Option<IntMat> {
        let d = self.det();
        if d.abs() != BigInt::one() {
            return None;
        }
        let inv = self.inverse_rational()?;
        let n = self.rows;
        let mut out = IntMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let v = &inv[i][j];
                debug_assert!(v.is_integer());
                out.set(i, j, v.to_integer());
            }
        }
        Some(out)
    }

    /// Diagonal of the Smith normal form (nonzero elementary divisors, ascending).
    pub fn smith_divisors(&self) -> Vec<BigInt> {
        let mut a = self.clone();
        let (m, n) = (a.rows, a.cols);
        let mut divs = Vec::new();
        let mut t = 0;
        while t < m.min(n) {
            // smallest nonzero entry in the trailing block as pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let v = a.get(i, j);
                    if !v.is_zero() && best.is_none_or(|(bi, bj)| v.abs() < a.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            a.swap_rows(t, pi);
            a.swap_cols(t, pj);
            loop {
                let mut changed = false;
                for i in t + 1..m {
                    let q = a.get(i, t).div_floor(a.get(t, t));
                    if !q.is_zero() {
                        for j in t..n {
                            let v = a.get(i, j) - &q * a.get(t, j);
                            a.set(i, j, v);
                        }
                    }
                    if !a.get(i, t).is_zero() {
                        a.swap_rows(t, i);
                        changed = true;
                    }
                }
                for j in t + 1..n {
                    let q = a.get(t, j).div_floor(a.get(t, t));
                    if !q.is_zero() {
                        for i in t..m {
                            let v = a.get(i, j) - &q * a.get(i, t);
                            a.set(i, j, v);
                        }
                    }
                    if !a.get(t, j).is_zero() {
                        a.swap_cols(t, j);
                        changed = true;
                    }
                }
                if changed {
                    continue;
                }
                // divisibility of the trailing block by the pivot
                let piv = a.get(t, t).clone();
                let bad = (t + 1..m)
                    .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                    .find(|&(i, j)| !a.get(i, j).is_multiple_of(&piv));
                match bad {
                    Some((i, _)) => {
                        for j in t..n {
                            let v = a.get(t, j) + a.get(i, j);
                            a.set(t, j, v);
                        }
                    }
                    None => break,
                }
            }
            divs.push(a.get(t, t).abs());
            t += 1;
        }
        divs
    }

    /// Row-style Hermite normal form of the row lattice (zero rows dropped).
    pub fn hermite_rows(&self) -> IntMat {
        let mut a = self.clone();
        let (m, n) = (a.rows, a.cols);
        let mut r = 0;
        for c in 0..n {
            if r == m {
                break;
            }
            loop {
                let piv = (r..m).filter(|&i| !a.get(i, c).is_zero()).min_by(|&x, &y| a.get(x, c).abs().cmp(&a.get(y, c).abs()));
                let Some(p) = piv else { break };
                a.swap_rows(r, p);
                let mut done = true;
                for i in r + 1..m {
                    if a.get(i, c).is_zero() {
                        continue;
                    }
                    let q = a.get(i, c).div_floor(a.get(r, c));
                    for j in 0..n {
                        let v = a.get(i, j) - &q * a.get(r, j);
                        a.set(i, j, v);
                    }
                    if !a.get(i, c).is_zero() {
                        done = false;
                    }
                }
                if done {
                    break;
                }
            }
            if a.get(r, c).is_zero() {
                continue;
            }
            if a.get(r, c).is_negative() {
                for j in 0..n {
                    let v = -a.get(r, j);
                    a.set(r, j, v);
                }
            }
            let piv = a.get(r, c).clone();
            for i in 0..r {
                let q = a.get(i, c).div_floor(&piv);
                if !q.is_zero() {
                    for j in 0..n {
                        let v = a.get(i, j) - &q * a.get(r, j);
                        a.set(i, j, v);
                    }
                }
            }
            r += 1;
        }
        a.select_rows(&(0..r).collect::<Vec<_>>())
    }

    /// Basis of the integer kernel {v : A v = 0}, as the rows of the result.
    pub fn integer_kernel(&self) -> IntMat {
        let (m, n) = (self.rows, self.cols);
        let mut a = self.clone();
        let mut u = IntMat::identity(n);
        let mut c = 0;
        for r in 0..m {
            if c == n {
                break;
            }
            loop {
                let piv = (c..n).filter(|&j| !a.get(r, j).is_zero()).min_by(|&x, &y| a.get(r, x).abs().cmp(&a.get(r, y).abs()));
                let Some(p) = piv else { break };
                a.swap_cols(c, p);
                u.swap_cols(c, p);
                let mut done = true;
                for j in c + 1..n {
                    if a.get(r, j).is_zero() {
                        continue;
                    }
                    let q = a.get(r, j).div_floor(a.get(r, c));
                    for i in 0..m {
                        let v = a.get(i, j) - &q * a.get(i, c);
                        a.set(i, j, v);
                    }
                    for i in 0..n {
                        let v = u.get(i, j) - &q * u.get(i, c);
                        u.set(i, j, v);
                    }
                    if !a.get(r, j).is_zero() {
                        done = false;
                    }
                }
                if done {
                    break;
                }
            }
            if !a.get(r, c).is_zero() {
                c += 1;
            }
        }
        let cols: Vec<usize> = (c..n).collect();
        u.select_cols(&cols).transpose()
    }

    /// All maximal (size = rows) minors, indexed by column subsets in lexicographic order.
    pub fn maximal_minors(&self) -> Vec<(Vec<usize>, BigInt)> {
        subsets(self.cols, self.rows)
            .into_iter()
            .map(|s| {
                let rows: Vec<usize> = (0..self.rows).collect();
                let d = self.select(&rows, &s).det();
                (s, d)
            })
            .collect()
    }
}

/// All k-subsets of {0..n-1} in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - k + i {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Solves M x = b over the rationals for square invertible M.
pub fn solve_rational(m: &IntMat, b: &[BigInt]) -> Option<Vec<BigRational>> {
    let inv = m.inverse_rational()?;
    Some(
        inv.iter()
            .map(|row| row.iter().zip(b).fold(BigRational::zero(), |acc, (x, y)| acc + x * BigRational::from_integer(y.clone())))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_small() {
        let m = IntMat::from_rows(&[vec![2, 1], vec![7, 4]], 2);
        assert_eq!(m.det(), BigInt::from(1));
        let s = IntMat::from_rows(&[vec![0, 1, 2], vec![1, 0, 3], vec![4, -3, 8]], 3);
        assert_eq!(s.det(), BigInt::from(-2));
    }

    #[test]
    fn smith_of_two() {
        assert_eq!(IntMat::from_rows(&[vec![2]], 1).smith_divisors(), vec![BigInt::from(2)]);
        let m = IntMat::from_rows(&[vec![1], vec![1]], 1);
        assert_eq!(m.smith_divisors(), vec![BigInt::from(1)]);
        let m = IntMat::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]], 3);
        let d: Vec<i64> = m.smith_divisors().iter().map(|x| x.to_i64().unwrap()).collect();
        assert_eq!(d, vec![2, 6, 12]);
    }

    #[test]
    fn kernel_of_ones() {
        let k = IntMat::from_rows(&[vec![1, 1]], 2).integer_kernel();
        assert_eq!(k.rows(), 1);
        let h = k.hermite_rows();
        assert_eq!(h.to_i64_rows(), vec![vec![1, -1]]);
    }

    #[test]
    fn subsets_count() {
        assert_eq!(subsets(5, 2).len(), 10);
        assert_eq!(subsets(3, 0), vec![Vec::<usize>::new()]);
    }
}
