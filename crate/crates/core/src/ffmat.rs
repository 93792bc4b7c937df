//! Dense matrices over a finite field: exact rank, nullspace, inverse,
//! characteristic polynomial, and eigenvalue-multiplicity lifting.

use crate::cyclotomic::{cyc_sum, Cyc};
use crate::error::ScalarError;
use crate::ffield::{poly_trim, BrauerLift, Ff, FiniteField};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FfMat {
    rows: usize,
    cols: usize,
    data: Vec<Ff>,
}

impl FfMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        FfMat {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = FfMat::zero(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Ff) -> Self {
        let mut m = FfMat::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Permutation matrix sending basis vector `j` to basis vector
    /// `perm(j)` (columns are images).
    pub fn from_permutation(images: &[usize]) -> Self {
        let n = images.len();
        let mut m = FfMat::zero(n, n);
        for (j, &i) in images.iter().enumerate() {
            m.set(i, j, 1);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Ff {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Ff) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn add(&self, f: &FiniteField, other: &FfMat) -> FfMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        FfMat {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, f: &FiniteField, other: &FfMat) -> FfMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.sub(a, b))
            .collect();
        FfMat {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, f: &FiniteField, s: Ff) -> FfMat {
        let data = self.data.iter().map(|&a| f.mul(a, s)).collect();
        FfMat {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn mul(&self, f: &FiniteField, other: &FfMat) -> FfMat {
        assert_eq!(self.cols, other.rows);
        let mut out = FfMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b != 0 {
                        let cur = out.get(i, j);
                        out.set(i, j, f.add(cur, f.mul(a, b)));
                    }
                }
            }
        }
        out
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, f: &FiniteField, v: &[Ff]) -> Vec<Ff> {
        assert_eq!(self.cols, v.len());
        let mut out = vec![0; self.rows];
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = 0;
            for (j, &x) in v.iter().enumerate() {
                if x != 0 {
                    acc = f.add(acc, f.mul(self.get(i, j), x));
                }
            }
            *o = acc;
        }
        out
    }

    pub fn transpose(&self) -> FfMat {
        FfMat::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn trace(&self, f: &FiniteField) -> Ff {
        assert_eq!(self.rows, self.cols);
        (0..self.rows).fold(0, |acc, i| f.add(acc, self.get(i, i)))
    }

    pub fn pow(&self, f: &FiniteField, mut e: u64) -> FfMat {
        assert_eq!(self.rows, self.cols);
        let mut acc = FfMat::identity(self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &base);
            }
            base = base.mul(f, &base);
            e >>= 1;
        }
        acc
    }

    /// Row echelon form in place; returns pivot columns.
    pub fn rref(&mut self, f: &FiniteField) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            for j in 0..self.cols {
                let tmp = self.get(r, j);
                self.set(r, j, self.get(pr, j));
                self.set(pr, j, tmp);
            }
            let inv = f.inv(self.get(r, c)).unwrap();
            for j in 0..self.cols {
                self.set(r, j, f.mul(self.get(r, j), inv));
            }
            for i in 0..self.rows {
                if i != r && self.get(i, c) != 0 {
                    let factor = self.get(i, c);
                    for j in 0..self.cols {
                        let v = f.sub(self.get(i, j), f.mul(factor, self.get(r, j)));
                        self.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == self.rows {
                break;
            }
        }
        pivots
    }

    pub fn rank(&self, f: &FiniteField) -> usize {
        let mut copy = self.clone();
        copy.rref(f).len()
    }

    pub fn nullity(&self, f: &FiniteField) -> usize {
        self.cols - self.rank(f)
    }

    /// Basis of the right kernel `{v : Av = 0}`, one vector per free
    /// column in column order.
    pub fn nullspace(&self, f: &FiniteField) -> Vec<Vec<Ff>> {
        let mut m = self.clone();
        let pivots = m.rref(f);
        let mut out = Vec::new();
        for free in 0..self.cols {
            if pivots.contains(&free) {
                continue;
            }
            let mut v = vec![0; self.cols];
            v[free] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(m.get(row, free));
            }
            out.push(v);
        }
        out
    }

    pub fn inverse(&self, f: &FiniteField) -> Option<FfMat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = FfMat::zero(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let pivots = aug.rref(f);
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| i != c) {
            return None;
        }
        Some(FfMat::from_fn(n, n, |i, j| aug.get(i, n + j)))
    }

    /// Characteristic polynomial (monic, little-endian) via Hessenberg
    /// reduction.
    pub fn charpoly(&self, f: &FiniteField) -> Vec<Ff> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return vec![1];
        }
        let mut h = self.clone();
        // similarity-reduce to upper Hessenberg form
        for m in 0..n.saturating_sub(2) {
            let Some(pivot) = (m + 1..n).find(|&i| h.get(i, m) != 0) else {
                continue;
            };
            if pivot != m + 1 {
                for j in 0..n {
                    let tmp = h.get(m + 1, j);
                    h.set(m + 1, j, h.get(pivot, j));
                    h.set(pivot, j, tmp);
                }
                for i in 0..n {
                    let tmp = h.get(i, m + 1);
                    h.set(i, m + 1, h.get(i, pivot));
                    h.set(i, pivot, tmp);
                }
            }
            let inv = f.inv(h.get(m + 1, m)).unwrap();
            for i in m + 2..n {
                if h.get(i, m) == 0 {
                    continue;
                }
                let u = f.mul(h.get(i, m), inv);
                for j in 0..n {
                    let v = f.sub(h.get(i, j), f.mul(u, h.get(m + 1, j)));
                    h.set(i, j, v);
                }
                for r in 0..n {
                    let v = f.add(h.get(r, m + 1), f.mul(u, h.get(r, i)));
                    h.set(r, m + 1, v);
                }
            }
        }
        // recurrence over leading principal minors of the Hessenberg form
        let mut polys: Vec<Vec<Ff>> = vec![vec![1]];
        for m in 1..=n {
            // (x - H[m-1][m-1]) * p_{m-1}
            let prev = &polys[m - 1];
            let mut cur = vec![0; prev.len() + 1];
            for (i, &c) in prev.iter().enumerate() {
                cur[i + 1] = f.add(cur[i + 1], c);
                cur[i] = f.sub(cur[i], f.mul(h.get(m - 1, m - 1), c));
            }
            let mut subdiag_prod = 1;
            for i in 1..m {
                subdiag_prod = f.mul(subdiag_prod, h.get(m - i, m - i - 1));
                let coeff = f.mul(h.get(m - 1 - i, m - 1), subdiag_prod);
                if coeff == 0 {
                    continue;
                }
                for (k, &c) in polys[m - 1 - i].iter().enumerate() {
                    cur[k] = f.sub(cur[k], f.mul(coeff, c));
                }
            }
            polys.push(cur);
        }
        let mut out = polys.pop().unwrap();
        poly_trim(&mut out);
        out
    }
}

/// Sum of the lifted nonzero eigenvalues of a matrix of finite
/// multiplicative order dividing `lift.m()`: the exact characteristic-0
/// value carried by a semisimple root-of-unity matrix.
pub fn brauer_value(a: &FfMat, f: &FiniteField, lift: &BrauerLift) -> Result<Cyc, ScalarError> {
    assert_eq!(f, lift.field(), "matrix must live over the lift's field");
    let n = a.rows();
    // multiplicative order of the matrix
    let mut m_a = 0;
    let mut pow = FfMat::identity(n);
    for k in 1..=lift.m() {
        pow = pow.mul(f, a);
        if pow == FfMat::identity(n) {
            m_a = k;
            break;
        }
    }
    if m_a == 0 {
        return Err(ScalarError::NotOfFiniteOrder(lift.m()));
    }
    eigenvalue_lift_of_order(a, f, lift, m_a, true)
}

/// Lift the eigenvalue multiset of `a`, assuming `a` satisfies
/// `Z^(m+1) = Z` (so it is diagonalizable with eigenvalues in
/// `{0} U mu_m`). With `require_invertible`, eigenvalue 0 is forbidden.
pub fn eigenvalue_lift_of_order(
    a: &FfMat,
    f: &FiniteField,
    lift: &BrauerLift,
    m: u64,
    require_invertible: bool,
) -> Result<Cyc, ScalarError> {
    let n = a.rows();
    let omega_m = lift.root_of_order(m);
    let mut total = 0usize;
    let mut terms = Vec::new();
    let mut root = f.one();
    for j in 0..m {
        let shifted = a.sub(f, &FfMat::identity(n).scale(f, root));
        let mult = shifted.nullity(f);
        if mult > 0 {
            terms.push(Cyc::root_of_unity(m, j).scale(&crate::ratmat::qint(mult as i64)));
        }
        total += mult;
        root = f.mul(root, omega_m);
    }
    if require_invertible {
        if total != n {
            return Err(ScalarError::NotOfFiniteOrder(m));
        }
    } else {
        let zero_mult = a.nullity(f);
        if total + zero_mult != n {
            return Err(ScalarError::NotOfFiniteOrder(m));
        }
    }
    Ok(cyc_sum(terms))
}
