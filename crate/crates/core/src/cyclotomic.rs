//! Exact cyclotomic arithmetic: elements of `Q(zeta_m)` stored on the
//! power basis `1, zeta, ..., zeta^(phi(m)-1)` reduced modulo the m-th
//! cyclotomic polynomial. Algebraic integers are exactly the elements
//! with integer coordinates on this basis.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::RwLock;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::ScalarError;
use crate::perm::{gcd, lcm};
use crate::ratmat::{self, Q};

pub fn euler_phi(m: u64) -> u64 {
    let mut n = m;
    let mut result = m;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Integer-coefficient polynomial division `num / den` with monic `den`;
/// returns (quotient, remainder). Coefficients little-endian.
fn zpoly_divmod(num: &[BigInt], den: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>) {
    assert!(
        den.last().map(|c| c.is_one()).unwrap_or(false),
        "divisor must be monic"
    );
    let mut rem: Vec<BigInt> = num.to_vec();
    let dd = den.len() - 1;
    if rem.len() <= dd {
        return (vec![], rem);
    }
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for i in (dd..rem.len()).rev() {
        let c = rem[i].clone();
        if c.is_zero() {
            continue;
        }
        quot[i - dd] = c.clone();
        for (j, d) in den.iter().enumerate() {
            let sub = d * &c;
            rem[i - dd + j] -= sub;
        }
    }
    while rem.last().map(|c| c.is_zero()).unwrap_or(false) {
        rem.pop();
    }
    (quot, rem)
}

static CYCLOTOMIC_CACHE: RwLock<BTreeMap<u64, Vec<BigInt>>> = RwLock::new(BTreeMap::new());

/// Coefficients of the m-th cyclotomic polynomial, little-endian.
pub fn cyclotomic_polynomial(m: u64) -> Vec<BigInt> {
    if let Some(p) = CYCLOTOMIC_CACHE.read().unwrap().get(&m) {
        return p.clone();
    }
    let poly = if m == 1 {
        vec![BigInt::from(-1), BigInt::from(1)]
    } else {
        // (x^m - 1) / prod_{d | m, d < m} Phi_d
        let mut num = vec![BigInt::zero(); m as usize + 1];
        num[0] = BigInt::from(-1);
        num[m as usize] = BigInt::from(1);
        for d in 1..m {
            if m.is_multiple_of(d) {
                let phi_d = cyclotomic_polynomial(d);
                let (q, r) = zpoly_divmod(&num, &phi_d);
                assert!(r.is_empty(), "cyclotomic division must be exact");
                num = q;
            }
        }
        num
    };
    CYCLOTOMIC_CACHE.write().unwrap().insert(m, poly.clone());
    poly
}

fn qpoly_trim(v: &mut Vec<Q>) {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
}

fn qpoly_divmod(num: &[Q], den: &[Q]) -> (Vec<Q>, Vec<Q>) {
    let mut den = den.to_vec();
    qpoly_trim(&mut den);
    assert!(!den.is_empty());
    let lead = den.last().unwrap().clone();
    let mut rem = num.to_vec();
    qpoly_trim(&mut rem);
    let dd = den.len() - 1;
    if rem.len() <= dd {
        return (vec![], rem);
    }
    let mut quot = vec![Q::zero(); rem.len() - dd];
    for i in (dd..rem.len()).rev() {
        if rem[i].is_zero() {
            continue;
        }
        let c = &rem[i] / &lead;
        quot[i - dd] = c.clone();
        for (j, d) in den.iter().enumerate() {
            let sub = d * &c;
            rem[i - dd + j] = &rem[i - dd + j] - &sub;
        }
    }
    qpoly_trim(&mut rem);
    (quot, rem)
}

/// Element of `Q(zeta_m)`, canonical on the power basis mod `Phi_m`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyc {
    conductor: u64,
    /// length phi(conductor)
    coeffs: Vec<Q>,
}

impl Cyc {
    pub fn zero() -> Self {
        Cyc::from_rational(Q::zero())
    }

    pub fn one() -> Self {
        Cyc::from_rational(Q::one())
    }

    pub fn from_int(n: i64) -> Self {
        Cyc::from_rational(Q::from_integer(n.into()))
    }

    pub fn from_rational(q: Q) -> Self {
        Cyc {
            conductor: 1,
            coeffs: vec![q],
        }
    }

    /// `zeta_m^k`.
    pub fn root_of_unity(m: u64, k: u64) -> Self {
        assert!(m >= 1);
        let mut full = vec![Q::zero(); m as usize];
        full[(k % m) as usize] = Q::one();
        Cyc::reduce_full(m, full)
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    /// Canonicalize a coefficient vector on `1..zeta^(m-1)` (length m or
    /// longer after convolution) into the power basis mod `Phi_m`.
    fn reduce_full(m: u64, full: Vec<Q>) -> Self {
        let phi: Vec<Q> = cyclotomic_polynomial(m)
            .iter()
            .map(|c| Q::from_integer(c.clone()))
            .collect();
        let (_, mut rem) = qpoly_divmod(&full, &phi);
        let deg = euler_phi(m) as usize;
        rem.resize(deg.max(1), Q::zero());
        if m == 1 {
            rem.truncate(1);
        } else {
            rem.truncate(deg);
        }
        Cyc {
            conductor: m,
            coeffs: rem,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Embed into `Q(zeta_target)`; `conductor | target` required.
    pub fn promote(&self, target: u64) -> Result<Cyc, ScalarError> {
        if !target.is_multiple_of(self.conductor) {
            return Err(ScalarError::ConductorMismatch {
                small: self.conductor,
                large: target,
            });
        }
        if target == self.conductor {
            return Ok(self.clone());
        }
        let step = (target / self.conductor) as usize;
        let mut full = vec![Q::zero(); target as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                full[j * step] = &full[j * step] + c;
            }
        }
        Ok(Cyc::reduce_full(target, full))
    }

    /// Express in `Q(zeta_target)` for a divisor `target` of the current
    /// conductor, if the element lies in that subfield.
    pub fn try_demote(&self, target: u64) -> Result<Cyc, ScalarError> {
        if !self.conductor.is_multiple_of(target) {
            return Err(ScalarError::ConductorMismatch {
                small: target,
                large: self.conductor,
            });
        }
        if target == self.conductor {
            return Ok(self.clone());
        }
        let deg_small = euler_phi(target) as usize;
        let deg_big = self.coeffs.len();
        // columns: promoted basis vectors of the small field
        let mut a = vec![vec![Q::zero(); deg_small]; deg_big];
        for j in 0..deg_small {
            let basis = Cyc::root_of_unity(target, j as u64).promote(self.conductor)?;
            for i in 0..deg_big {
                a[i][j] = basis.coeffs[i].clone();
            }
        }
        let x = ratmat::solve_unique(&a, &self.coeffs).ok_or(ScalarError::NotInSubfield(target))?;
        Ok(Cyc {
            conductor: target,
            coeffs: x,
        })
    }

    /// Smallest conductor representation (for display).
    pub fn canonicalize(&self) -> Cyc {
        let m = self.conductor;
        let mut divisors: Vec<u64> = (1..=m).filter(|d| m.is_multiple_of(*d)).collect();
        divisors.sort();
        for d in divisors {
            if d == m {
                break;
            }
            if let Ok(c) = self.try_demote(d) {
                return c;
            }
        }
        self.clone()
    }

    fn common(&self, other: &Cyc) -> (Cyc, Cyc) {
        let m = lcm(self.conductor, other.conductor);
        (self.promote(m).unwrap(), other.promote(m).unwrap())
    }

    pub fn add(&self, other: &Cyc) -> Cyc {
        let (a, b) = self.common(other);
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        Cyc {
            conductor: a.conductor,
            coeffs,
        }
    }

    pub fn sub(&self, other: &Cyc) -> Cyc {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Cyc {
        Cyc {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &Cyc) -> Cyc {
        let (a, b) = self.common(other);
        let mut full = vec![Q::zero(); a.coeffs.len() + b.coeffs.len()];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    full[i + j] = &full[i + j] + &(x * y);
                }
            }
        }
        Cyc::reduce_full(a.conductor, full)
    }

    pub fn scale(&self, q: &Q) -> Cyc {
        Cyc {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    pub fn equals(&self, other: &Cyc) -> bool {
        let (a, b) = self.common(other);
        a.coeffs == b.coeffs
    }

    /// Galois automorphism `zeta_m -> zeta_m^t`, `t` coprime to `m`.
    pub fn galois(&self, t: u64) -> Result<Cyc, ScalarError> {
        let m = self.conductor;
        let t = t % m;
        if gcd(t, m) != 1 {
            return Err(ScalarError::GaloisNotCoprime { t, m });
        }
        let mut full = vec![Q::zero(); m as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let idx = ((j as u64 * t) % m) as usize;
                full[idx] = &full[idx] + c;
            }
        }
        Ok(Cyc::reduce_full(m, full))
    }

    /// Complex conjugation `zeta -> zeta^(-1)`.
    pub fn conjugate(&self) -> Cyc {
        if self.conductor == 1 {
            return self.clone();
        }
        self.galois(self.conductor - 1)
            .expect("m-1 is coprime to m")
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(ratmat::is_integer)
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().skip(1).all(|c| c.is_zero())
    }

    pub fn as_rational(&self) -> Option<Q> {
        if self.is_rational() {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn inv(&self) -> Option<Cyc> {
        if self.is_zero() {
            return None;
        }
        if let Some(q) = self.as_rational() {
            return Some(Cyc::from_rational(Q::one() / q));
        }
        // extended euclid of the coefficient polynomial with Phi_m
        let m = self.conductor;
        let phi: Vec<Q> = cyclotomic_polynomial(m)
            .iter()
            .map(|c| Q::from_integer(c.clone()))
            .collect();
        let mut a = self.coeffs.clone();
        qpoly_trim(&mut a);
        let (g, u) = qpoly_half_ext_gcd(&a, &phi);
        // g must be a nonzero constant
        assert_eq!(
            g.len(),
            1,
            "element polynomial is coprime to the cyclotomic polynomial"
        );
        let ginv = Q::one() / g[0].clone();
        let inv_coeffs: Vec<Q> = u.iter().map(|c| c * &ginv).collect();
        Some(Cyc::reduce_full(m, inv_coeffs))
    }

    /// Deterministic total order for stable sorting of value rows.
    pub fn cmp_key(&self, other: &Cyc) -> std::cmp::Ordering {
        let (a, b) = self.common(other);
        for (x, y) in a.coeffs.iter().zip(&b.coeffs) {
            let ord = x.cmp(y);
            if ord != std::cmp::Ordering::Equal {
                return ord;
            }
        }
        std::cmp::Ordering::Equal
    }
}

/// Returns (gcd, u) with `u*a = gcd (mod b)`.
fn qpoly_half_ext_gcd(a: &[Q], b: &[Q]) -> (Vec<Q>, Vec<Q>) {
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    qpoly_trim(&mut r0);
    qpoly_trim(&mut r1);
    let mut u0 = vec![Q::one()];
    let mut u1: Vec<Q> = vec![];
    while !r1.is_empty() {
        let (q, r) = qpoly_divmod(&r0, &r1);
        let qu1 = qpoly_mul(&q, &u1);
        let new_u = qpoly_sub(&u0, &qu1);
        r0 = r1;
        r1 = r;
        u0 = u1;
        u1 = new_u;
    }
    (r0, u0)
}

fn qpoly_mul(a: &[Q], b: &[Q]) -> Vec<Q> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    qpoly_trim(&mut out);
    out
}

fn qpoly_sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut out = vec![Q::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] = x.clone();
    }
    for (i, y) in b.iter().enumerate() {
        out[i] = &out[i] - y;
    }
    qpoly_trim(&mut out);
    out
}

impl fmt::Display for Cyc {
    /// GAP-style exact form, e.g. `-1`, `E(3)`, `1/2*E(4)^3+2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.canonicalize();
        if c.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, q) in c.coeffs.iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            if first {
                if q.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if q.is_negative() {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            let aq = q.abs();
            if j == 0 {
                write!(f, "{aq}")?;
            } else {
                if !aq.is_one() {
                    write!(f, "{aq}*")?;
                }
                if j == 1 {
                    write!(f, "E({})", c.conductor)?;
                } else {
                    write!(f, "E({})^{}", c.conductor, j)?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Cyc {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// Sum of rational multiples of roots of unity, as a convenience.
pub fn cyc_sum<I: IntoIterator<Item = Cyc>>(items: I) -> Cyc {
    items.into_iter().fold(Cyc::zero(), |acc, x| acc.add(&x))
}

pub fn bigint_to_q(b: BigInt) -> Q {
    BigRational::from_integer(b)
}
