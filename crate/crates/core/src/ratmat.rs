//! Dense exact linear algebra over the rationals. Small systems only;
//! everything here is plain Gaussian elimination on `BigRational`s.

use num::rational::BigRational;
use num::{One, Signed, Zero};

pub type Q = BigRational;

pub fn qzero() -> Q {
    Q::zero()
}

pub fn qone() -> Q {
    Q::one()
}

pub fn qint(n: i64) -> Q {
    Q::from_integer(n.into())
}

/// Row-reduce `m` in place; returns the pivot column of each nonzero row.
pub fn rref(m: &mut [Vec<Q>]) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return vec![];
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = m[r][c].clone();
        for x in m[r].iter_mut() {
            *x = &*x / &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                for j in 0..cols {
                    let sub = &m[r][j] * &factor;
                    m[i][j] = &m[i][j] - &sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

pub fn rank(m: &[Vec<Q>]) -> usize {
    let mut copy = m.to_vec();
    rref(&mut copy).len()
}

/// Solve `A x = b`. Returns `None` if inconsistent or underdetermined.
pub fn solve_unique(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let rows = a.len();
    assert_eq!(rows, b.len());
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut aug: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    // inconsistent: pivot in the augmented column
    if pivots.contains(&cols) {
        return None;
    }
    if pivots.len() != cols {
        return None;
    }
    let mut x = vec![qzero(); cols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[row][cols].clone();
    }
    Some(x)
}

/// Solve `A x = b` allowing a non-square consistent system with full
/// column rank; same result as [`solve_unique`] but tolerates redundant
/// rows.
pub fn solve_full_column_rank(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    solve_unique(a, b)
}

pub fn det(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    if n == 0 {
        return qone();
    }
    assert_eq!(n, m[0].len());
    let mut a = m.to_vec();
    let mut sign = false;
    let mut acc = qone();
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return qzero();
        };
        if pr != c {
            a.swap(c, pr);
            sign = !sign;
        }
        acc = &acc * &a[c][c];
        let inv = a[c][c].clone();
        for i in c + 1..n {
            if !a[i][c].is_zero() {
                let factor = &a[i][c] / &inv;
                for j in c..n {
                    let sub = &a[c][j] * &factor;
                    a[i][j] = &a[i][j] - &sub;
                }
            }
        }
    }
    if sign {
        -acc
    } else {
        acc
    }
}

/// Basis of the solution space of `A x = 0`, deterministic (one vector
/// per free column, in column order).
pub fn nullspace(a: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut m = a.to_vec();
    let pivots = rref(&mut m);
    let mut out = Vec::new();
    for free in 0..cols {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![qzero(); cols];
        v[free] = qone();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[row][free].clone();
        }
        out.push(v);
    }
    out
}

pub fn is_integer(q: &Q) -> bool {
    q.denom().abs().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Q>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| qint(x)).collect())
            .collect()
    }

    #[test]
    fn solve_and_det() {
        let a = mat(&[&[2, 1], &[1, 3]]);
        let b = vec![qint(5), qint(10)];
        let x = solve_unique(&a, &b).unwrap();
        assert_eq!(x, vec![qint(1), qint(3)]);
        assert_eq!(det(&a), qint(5));
        assert_eq!(det(&mat(&[&[1, 2], &[2, 4]])), qint(0));
    }

    #[test]
    fn rank_and_nullspace() {
        let a = mat(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&a), 2);
        let ns = nullspace(&a);
        assert_eq!(ns.len(), 1);
        for row in &a {
            let dot: Q = row.iter().zip(&ns[0]).map(|(x, y)| x * y).sum();
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn inconsistent_system() {
        let a = mat(&[&[1, 1], &[1, 1]]);
        let b = vec![qint(1), qint(2)];
        assert!(solve_unique(&a, &b).is_none());
    }
}
