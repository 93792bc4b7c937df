//! Finite fields GF(p^d) for odd p, with deterministic construction:
//! the modulus is the first irreducible monic polynomial in the coefficient
//! enumeration order and the primitive element is the smallest generator.
//! Elements are encoded as a single `u64` holding the base-p digits of the
//! residue polynomial (constant coefficient least significant).

use std::collections::HashMap;

use num::Zero;
use serde::Serialize;

use crate::cyclotomic::Cyc;
use crate::error::ScalarError;
use crate::perm::gcd;
use crate::ratmat::Q;

/// Encoded element of a [`FiniteField`].
pub type Ff = u64;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Multiplicative order of `a` modulo `m` (requires gcd(a, m) = 1).
pub fn mult_order_mod(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 1;
    }
    let mut x = a % m;
    let mut k = 1;
    while x != 1 {
        x = x * (a % m) % m;
        k += 1;
        assert!(k <= m, "element must be invertible mod m");
    }
    k
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct FiniteField {
    p: u64,
    d: u32,
    /// monic modulus, little-endian coefficients, length d+1
    modulus: Vec<u64>,
    size: u64,
    primitive: Ff,
}

impl FiniteField {
    /// Characteristic 2 is rejected globally: the library works under the
    /// standing assumption of odd characteristic.
    pub fn new(p: u64, d: u32) -> Result<Self, ScalarError> {
        if p == 2 {
            return Err(ScalarError::CharacteristicTwo);
        }
        if !is_prime(p) {
            return Err(ScalarError::NotPrime(p));
        }
        assert!(d >= 1);
        let size = p.checked_pow(d).expect("field size must fit in u64");
        assert!((size as u128) * (size as u128) < (1u128 << 126));
        let modulus = if d == 1 {
            vec![0, 1] // x
        } else {
            find_irreducible(p, d)
        };
        let mut field = FiniteField {
            p,
            d,
            modulus,
            size,
            primitive: 0,
        };
        field.primitive = field.find_primitive();
        Ok(field)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn primitive(&self) -> Ff {
        self.primitive
    }

    pub fn zero(&self) -> Ff {
        0
    }

    pub fn one(&self) -> Ff {
        1
    }

    pub fn decode(&self, x: Ff) -> Vec<u64> {
        let mut digits = vec![0u64; self.d as usize];
        let mut x = x;
        for digit in digits.iter_mut() {
            *digit = x % self.p;
            x /= self.p;
        }
        digits
    }

    pub fn encode(&self, digits: &[u64]) -> Ff {
        let mut acc = 0u64;
        for &c in digits.iter().rev() {
            acc = acc * self.p + (c % self.p);
        }
        acc
    }

    pub fn from_int(&self, n: i64) -> Ff {
        let p = self.p as i64;
        (((n % p) + p) % p) as Ff
    }

    pub fn from_rational(&self, q: &Q) -> Result<Ff, ScalarError> {
        use num::ToPrimitive;
        let p = num::BigInt::from(self.p);
        let num = (q.numer() % &p + &p) % &p;
        let den = (q.denom() % &p + &p) % &p;
        let den_u = den.to_u64().unwrap();
        if den_u == 0 {
            return Err(ScalarError::NotIntegral);
        }
        let num_u = num.to_u64().unwrap();
        Ok(self.mul(num_u, self.inv(den_u).unwrap()))
    }

    pub fn add(&self, a: Ff, b: Ff) -> Ff {
        if self.d == 1 {
            return (a + b) % self.p;
        }
        let (da, db) = (self.decode(a), self.decode(b));
        let digits: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.encode(&digits)
    }

    pub fn neg(&self, a: Ff) -> Ff {
        if self.d == 1 {
            return (self.p - a % self.p) % self.p;
        }
        let da = self.decode(a);
        let digits: Vec<u64> = da.iter().map(|x| (self.p - x) % self.p).collect();
        self.encode(&digits)
    }

    pub fn sub(&self, a: Ff, b: Ff) -> Ff {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Ff, b: Ff) -> Ff {
        if self.d == 1 {
            return a * b % self.p;
        }
        if a == 0 || b == 0 {
            return 0;
        }
        let (da, db) = (self.decode(a), self.decode(b));
        let n = self.d as usize;
        let mut prod = vec![0u64; 2 * n - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        // reduce modulo the monic modulus
        for i in (n..prod.len()).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for (j, &m) in self.modulus.iter().enumerate().take(n) {
                let idx = i - n + j;
                prod[idx] = (prod[idx] + c * (self.p - m % self.p)) % self.p;
            }
        }
        self.encode(&prod[..n])
    }

    pub fn pow(&self, a: Ff, mut e: u64) -> Ff {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Ff) -> Option<Ff> {
        if a == 0 {
            return None;
        }
        // a^(size-2); cheap at this scale and branch-free
        Some(self.pow(a, self.size - 2))
    }

    pub fn element_order(&self, a: Ff) -> u64 {
        assert!(a != 0);
        let n = self.size - 1;
        let mut order = n;
        for (q, _) in factorize(n) {
            while order.is_multiple_of(q) && self.pow(a, order / q) == 1 {
                order /= q;
            }
        }
        order
    }

    fn find_primitive(&self) -> Ff {
        let n = self.size - 1;
        let primes: Vec<u64> = factorize(n).into_iter().map(|(q, _)| q).collect();
        for cand in 2..self.size {
            if primes.iter().all(|&q| self.pow(cand, n / q) != 1) {
                return cand;
            }
        }
        unreachable!("a finite field always has a primitive element")
    }
}

/// First monic irreducible of degree `d` over GF(p), enumerating the
/// non-leading coefficient vectors in increasing encoded order.
fn find_irreducible(p: u64, d: u32) -> Vec<u64> {
    let base = FiniteField {
        p,
        d: 1,
        modulus: vec![0, 1],
        size: p,
        primitive: 0,
    };
    let count = p.pow(d);
    for enc in 0..count {
        let mut f: Vec<Ff> = base.decode_wide(enc, d as usize);
        f.push(1);
        if poly_is_irreducible(&base, &f) {
            return f;
        }
    }
    unreachable!("irreducible polynomials of every degree exist")
}

impl FiniteField {
    fn decode_wide(&self, x: u64, len: usize) -> Vec<u64> {
        let mut digits = vec![0u64; len];
        let mut x = x;
        for digit in digits.iter_mut() {
            *digit = x % self.p;
            x /= self.p;
        }
        digits
    }
}

// ----- polynomials over a finite field (coefficients encoded, little-endian)

pub fn poly_trim(v: &mut Vec<Ff>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

pub fn poly_deg(v: &[Ff]) -> Option<usize> {
    if v.is_empty() {
        None
    } else {
        Some(v.len() - 1)
    }
}

pub fn poly_mul(f: &FiniteField, a: &[Ff], b: &[Ff]) -> Vec<Ff> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    poly_trim(&mut out);
    out
}

pub fn poly_add(f: &FiniteField, a: &[Ff], b: &[Ff]) -> Vec<Ff> {
    let mut out = vec![0; a.len().max(b.len())];
    for (i, &x) in a.iter().enumerate() {
        out[i] = x;
    }
    for (i, &y) in b.iter().enumerate() {
        out[i] = f.add(out[i], y);
    }
    poly_trim(&mut out);
    out
}

pub fn poly_sub(f: &FiniteField, a: &[Ff], b: &[Ff]) -> Vec<Ff> {
    let neg_b: Vec<Ff> = b.iter().map(|&y| f.neg(y)).collect();
    poly_add(f, a, &neg_b)
}

pub fn poly_divmod(f: &FiniteField, num: &[Ff], den: &[Ff]) -> (Vec<Ff>, Vec<Ff>) {
    let mut den = den.to_vec();
    poly_trim(&mut den);
    assert!(!den.is_empty(), "division by zero polynomial");
    let lead_inv = f.inv(*den.last().unwrap()).unwrap();
    let mut rem = num.to_vec();
    poly_trim(&mut rem);
    let dd = den.len() - 1;
    if rem.len() <= dd {
        return (vec![], rem);
    }
    let mut quot = vec![0; rem.len() - dd];
    for i in (dd..rem.len()).rev() {
        if rem[i] == 0 {
            continue;
        }
        let c = f.mul(rem[i], lead_inv);
        quot[i - dd] = c;
        for (j, &dc) in den.iter().enumerate() {
            rem[i - dd + j] = f.sub(rem[i - dd + j], f.mul(dc, c));
        }
    }
    poly_trim(&mut rem);
    (quot, rem)
}

pub fn poly_monic(f: &FiniteField, a: &[Ff]) -> Vec<Ff> {
    let mut a = a.to_vec();
    poly_trim(&mut a);
    if a.is_empty() {
        return a;
    }
    let inv = f.inv(*a.last().unwrap()).unwrap();
    for c in a.iter_mut() {
        *c = f.mul(*c, inv);
    }
    a
}

pub fn poly_gcd(f: &FiniteField, a: &[Ff], b: &[Ff]) -> Vec<Ff> {
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    poly_trim(&mut r0);
    poly_trim(&mut r1);
    while !r1.is_empty() {
        let (_, r) = poly_divmod(f, &r0, &r1);
        r0 = r1;
        r1 = r;
    }
    poly_monic(f, &r0)
}

pub fn poly_derivative(f: &FiniteField, a: &[Ff]) -> Vec<Ff> {
    let mut out = Vec::new();
    for (i, &c) in a.iter().enumerate().skip(1) {
        out.push(f.mul(c, f.from_int(i as i64)));
    }
    poly_trim(&mut out);
    out
}

pub fn poly_eval(f: &FiniteField, a: &[Ff], x: Ff) -> Ff {
    let mut acc = 0;
    for &c in a.iter().rev() {
        acc = f.add(f.mul(acc, x), c);
    }
    acc
}

/// `base^e mod m` in the polynomial ring.
pub fn poly_powmod(f: &FiniteField, base: &[Ff], mut e: u64, m: &[Ff]) -> Vec<Ff> {
    let (_, mut b) = poly_divmod(f, base, m);
    let mut acc = vec![1];
    while e > 0 {
        if e & 1 == 1 {
            let prod = poly_mul(f, &acc, &b);
            acc = poly_divmod(f, &prod, m).1;
        }
        let sq = poly_mul(f, &b, &b);
        b = poly_divmod(f, &sq, m).1;
        e >>= 1;
    }
    acc
}

/// Irreducibility over the coefficient field of a monic polynomial.
pub fn poly_is_irreducible(f: &FiniteField, poly: &[Ff]) -> bool {
    let d = poly.len() - 1;
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    let x = vec![0, 1];
    // h_k = x^(q^k) mod poly by iterated q-th powers
    let q = f.size();
    let mut h = x.clone();
    let mut frob_pows: HashMap<u32, Vec<Ff>> = HashMap::new();
    for k in 1..=d as u32 {
        h = poly_powmod(f, &h, q, poly);
        frob_pows.insert(k, h.clone());
    }
    let xd = frob_pows[&(d as u32)].clone();
    if poly_sub(f, &xd, &x) != Vec::<Ff>::new() {
        return false;
    }
    for (r, _) in factorize(d as u64) {
        let k = (d as u64 / r) as u32;
        let diff = poly_sub(f, &frob_pows[&k], &x);
        let g = poly_gcd(f, &diff, poly);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// Distinct roots of `poly` lying in the field: gcd with `x^q - x`
/// isolates the product of distinct linear factors, which is then split
/// by equal-degree factorization.
pub fn poly_roots<R: rand::Rng>(f: &FiniteField, poly: &[Ff], rng: &mut R) -> Vec<Ff> {
    let mut poly = poly.to_vec();
    poly_trim(&mut poly);
    if poly.len() <= 1 {
        return vec![];
    }
    let xq = poly_powmod(f, &[0, 1], f.size(), &poly);
    let diff = poly_sub(f, &xq, &[0, 1]);
    let linear_part = poly_gcd(f, &diff, &poly);
    if linear_part.len() <= 1 {
        return vec![];
    }
    let mut roots: Vec<Ff> = edf(f, &linear_part, 1, rng)
        .iter()
        .map(|fac| f.neg(fac[0]))
        .collect();
    roots.sort();
    roots
}

/// Monic irreducible factors with multiplicities, by squarefree +
/// distinct-degree + equal-degree (Cantor-Zassenhaus) factorization.
/// Deterministic given the RNG state; the characteristic is odd.
pub fn poly_factor<R: rand::Rng>(f: &FiniteField, poly: &[Ff], rng: &mut R) -> Vec<(Vec<Ff>, u32)> {
    let mut poly = poly_monic(f, poly);
    poly_trim(&mut poly);
    assert!(poly.len() >= 2, "constant polynomials have no factors");
    let mut out: Vec<(Vec<Ff>, u32)> = Vec::new();
    // squarefree decomposition by repeated gcd with the derivative
    let mut mult = 1u32;
    let mut current = poly;
    while current.len() > 1 {
        let deriv = poly_derivative(f, &current);
        if deriv.is_empty() {
            // current = g(x^p); take p-th root (works since coefficients
            // lie in GF(p^d) and the Frobenius is surjective)
            let p = f.p() as usize;
            let mut g = Vec::new();
            for (i, &c) in current.iter().enumerate() {
                if i % p == 0 {
                    // c^(q/p) is the p-th root of c
                    g.push(f.pow(c, f.size() / f.p()));
                } else {
                    assert_eq!(c, 0);
                }
            }
            current = g;
            mult *= f.p() as u32;
            continue;
        }
        let g = poly_gcd(f, &current, &deriv);
        let (squarefree_part, _) = poly_divmod(f, &current, &g);
        for (factor, _) in ddf_edf(f, &squarefree_part, rng) {
            // multiplicity: divide current by factor repeatedly
            let mut m = 0u32;
            let mut c = current.clone();
            loop {
                let (q, r) = poly_divmod(f, &c, &factor);
                if !r.is_empty() {
                    break;
                }
                c = q;
                m += 1;
            }
            merge_factor(&mut out, factor, m * mult);
        }
        current = {
            // remove all found squarefree-part factors completely
            let mut c = current;
            for (factor, _) in &out {
                loop {
                    let (q, r) = poly_divmod(f, &c, factor);
                    if !r.is_empty() {
                        break;
                    }
                    c = q;
                }
            }
            c
        };
        if current.len() > 1 {
            continue;
        }
    }
    out.sort();
    out
}

fn merge_factor(out: &mut Vec<(Vec<Ff>, u32)>, factor: Vec<Ff>, mult: u32) {
    for (f0, m0) in out.iter_mut() {
        if *f0 == factor {
            *m0 = (*m0).max(mult);
            return;
        }
    }
    out.push((factor, mult));
}

/// Factor a squarefree monic polynomial into irreducibles (multiplicity 1).
fn ddf_edf<R: rand::Rng>(f: &FiniteField, poly: &[Ff], rng: &mut R) -> Vec<(Vec<Ff>, u32)> {
    let mut out = Vec::new();
    let mut rest = poly.to_vec();
    poly_trim(&mut rest);
    let q = f.size();
    let mut degree = 1u32;
    let mut h = vec![0, 1]; // x^(q^k) mod rest, updated as rest shrinks
    while rest.len() > 1 {
        if (rest.len() - 1) < 2 * degree as usize {
            out.push((poly_monic(f, &rest), 1));
            break;
        }
        h = poly_powmod(f, &h, q, &rest);
        let diff = poly_sub(f, &h, &[0, 1]);
        let g = poly_gcd(f, &diff, &rest);
        if g.len() > 1 {
            for factor in edf(f, &g, degree as usize, rng) {
                out.push((factor, 1));
            }
            let (quot, r) = poly_divmod(f, &rest, &g);
            assert!(r.is_empty());
            rest = quot;
            h = poly_divmod(f, &h, &rest).1;
        }
        degree += 1;
    }
    out
}

/// Cantor-Zassenhaus split of a product of distinct irreducibles of equal
/// degree `d` (odd characteristic).
fn edf<R: rand::Rng>(f: &FiniteField, poly: &[Ff], d: usize, rng: &mut R) -> Vec<Vec<Ff>> {
    let deg = poly.len() - 1;
    if deg == d {
        return vec![poly_monic(f, poly)];
    }
    let q = f.size() as u128;
    let e = (q.pow(d as u32) - 1) / 2;
    loop {
        let a: Vec<Ff> = (0..deg).map(|_| rng.gen_range(0..f.size())).collect();
        let mut a = a;
        poly_trim(&mut a);
        if a.len() <= 1 {
            continue;
        }
        // a^e mod poly with a u128 exponent
        let b = poly_powmod_u128(f, &a, e, poly);
        let bm1 = poly_sub(f, &b, &[1]);
        let g = poly_gcd(f, &bm1, poly);
        if g.len() > 1 && g.len() < poly.len() {
            let (quot, _) = poly_divmod(f, poly, &g);
            let mut out = edf(f, &g, d, rng);
            out.extend(edf(f, &quot, d, rng));
            return out;
        }
    }
}

fn poly_powmod_u128(f: &FiniteField, base: &[Ff], mut e: u128, m: &[Ff]) -> Vec<Ff> {
    let (_, mut b) = poly_divmod(f, base, m);
    let mut acc = vec![1];
    while e > 0 {
        if e & 1 == 1 {
            let prod = poly_mul(f, &acc, &b);
            acc = poly_divmod(f, &prod, m).1;
        }
        let sq = poly_mul(f, &b, &b);
        b = poly_divmod(f, &sq, m).1;
        e >>= 1;
    }
    acc
}

/// Exact correspondence between m-th roots of unity in characteristic 0
/// and in GF(p^d), d = ord_m(p): `omega_bar^j <-> zeta_m^j` for the
/// deterministic primitive element of the field.
#[derive(Clone, Debug)]
pub struct BrauerLift {
    p: u64,
    m: u64,
    field: FiniteField,
    omega: Ff,
    powers: Vec<Ff>,
    dlog: HashMap<Ff, u64>,
}

impl BrauerLift {
    pub fn new(p: u64, m: u64) -> Result<Self, ScalarError> {
        if m == 0 || gcd(m, p) != 1 {
            return Err(ScalarError::OrderNotCoprime { m, p });
        }
        let d = mult_order_mod(p % m.max(2), m.max(1)).max(1);
        let d = if m == 1 { 1 } else { d as u32 };
        let field = FiniteField::new(p, d)?;
        let omega = field.pow(field.primitive(), (field.size() - 1) / m);
        let mut powers = Vec::with_capacity(m as usize);
        let mut dlog = HashMap::new();
        let mut acc = field.one();
        for j in 0..m {
            powers.push(acc);
            dlog.insert(acc, j);
            acc = field.mul(acc, omega);
        }
        assert_eq!(acc, field.one(), "omega must have exact order m");
        assert_eq!(dlog.len(), m as usize, "omega must have exact order m");
        Ok(BrauerLift {
            p,
            m,
            field,
            omega,
            powers,
            dlog,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn omega(&self) -> Ff {
        self.omega
    }

    /// `omega^j` for the compatible system: the root attached to a
    /// divisor order m2 is `omega^(m/m2)`.
    pub fn root_of_order(&self, m2: u64) -> Ff {
        assert!(m2 >= 1 && self.m.is_multiple_of(m2));
        self.powers[(self.m / m2) as usize % self.m as usize]
    }

    /// Lift an m-th root of unity (or zero is rejected) to `Z[zeta_m]`.
    pub fn lift(&self, x: Ff) -> Result<Cyc, ScalarError> {
        match self.dlog.get(&x) {
            Some(&j) => Ok(Cyc::root_of_unity(self.m, j)),
            None => Err(ScalarError::NotARootOfUnity(self.m)),
        }
    }

    /// Reduce a cyclotomic value with conductor dividing m into the field,
    /// sending `zeta_m -> omega`. Denominators prime to p are allowed.
    pub fn reduce(&self, c: &Cyc) -> Result<Ff, ScalarError> {
        if !self.m.is_multiple_of(c.conductor()) {
            return Err(ScalarError::ConductorMismatch {
                small: c.conductor(),
                large: self.m,
            });
        }
        let promoted = c.promote(self.m)?;
        let mut acc = self.field.zero();
        for (j, q) in promoted.coeffs().iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            let scalar = self.field.from_rational(q)?;
            let term = self.field.mul(scalar, self.powers[j % self.m as usize]);
            acc = self.field.add(acc, term);
        }
        Ok(acc)
    }

    pub fn metadata(&self) -> LiftMetadata {
        LiftMetadata {
            p: self.p,
            m: self.m,
            extension_degree: self.field.degree(),
            modulus: self.field.modulus().to_vec(),
            primitive_element: self.field.primitive(),
            omega_bar: self.omega,
        }
    }
}

/// Audit record of the deterministic lift choices, embedded in reports.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct LiftMetadata {
    pub p: u64,
    pub m: u64,
    pub extension_degree: u32,
    pub modulus: Vec<u64>,
    pub primitive_element: Ff,
    pub omega_bar: Ff,
}
