//! The bismash product H = E^G # EF on the distinguished basis
//! `{p_y # a}`: multiplication, counit, comultiplication, antipode and
//! integral, together with the exhaustive Hopf-axiom battery that runs at
//! construction time. Structure constants are 0 or 1, so one rational
//! coefficient type serves every characteristic; the scalar context only
//! decides whether the integral can be normalized.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Zero};
use serde::Serialize;

use crate::error::AlgebraError;
use crate::factored::FactoredGroup;
use crate::perm::Perm;
use crate::ratmat::Q;

/// Index of a basis element `p_y # a`: `y_index * |F| + a_index`.
pub type BasisId = u32;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ScalarContext {
    CharZero,
    Modular { p: u64 },
}

#[derive(Clone)]
pub struct Bismash {
    fg: FactoredGroup,
    nf: usize,
    ng: usize,
    dim: usize,
    /// product of basis elements: None encodes zero
    prod: Vec<Option<BasisId>>,
    antipode: Vec<BasisId>,
    /// comultiplication legs: one (left, right) pair per factorization
    coprod: Vec<Vec<(BasisId, BasisId)>>,
    /// membership in B' (the non-nilpotent basis elements, a in F_y)
    bprime: Vec<bool>,
    identity_f: usize,
    identity_g: usize,
}

impl Bismash {
    /// Build all structure tables and verify the Hopf axioms
    /// exhaustively; construction fails if any axiom does.
    pub fn new(fg: FactoredGroup) -> Result<Self, AlgebraError> {
        let nf = fg.f().order();
        let ng = fg.g().order();
        let dim = nf * ng;
        assert!(dim <= (u32::MAX as usize) / 2);
        let identity_f = fg.f().identity_index();
        let identity_g = fg.g().identity_index();

        // multiplication: (p_x # a)(p_y # b) = [y = x <| a] p_x # ab
        let mut prod = vec![None; dim * dim];
        for xi in 0..ng {
            for ai in 0..nf {
                let left = xi * nf + ai;
                let x_lhd_a = fg.lhd_idx(xi, ai);
                for yi in 0..ng {
                    for bi in 0..nf {
                        if yi != x_lhd_a {
                            continue;
                        }
                        let right = yi * nf + bi;
                        let ab = fg
                            .f()
                            .index_of(&fg.f().element(ai).compose(fg.f().element(bi)))
                            .unwrap();
                        prod[left * dim + right] = Some((xi * nf + ab) as BasisId);
                    }
                }
            }
        }

        // antipode: S(p_x # a) = p_{(x <| a)^-1} # (x |> a)^-1
        let mut antipode = vec![0; dim];
        for xi in 0..ng {
            for ai in 0..nf {
                let lhd = fg.g().element(fg.lhd_idx(xi, ai)).inverse();
                let rhd = fg.f().element(fg.rhd_idx(xi, ai)).inverse();
                let gi = fg.g().index_of(&lhd).unwrap();
                let fi = fg.f().index_of(&rhd).unwrap();
                antipode[xi * nf + ai] = (gi * nf + fi) as BasisId;
            }
        }

        // comultiplication: Delta(p_x # a) = sum over u v = x in G of
        // (p_u # (v |> a)) (x) (p_v # a)
        let mut coprod = vec![Vec::new(); dim];
        for xi in 0..ng {
            let x = fg.g().element(xi);
            for ai in 0..nf {
                let mut legs = Vec::with_capacity(ng);
                for vi in 0..ng {
                    let v = fg.g().element(vi);
                    let u = x.compose(&v.inverse());
                    let ui = fg.g().index_of(&u).unwrap();
                    let v_rhd_a = fg.rhd_idx(vi, ai);
                    legs.push(((ui * nf + v_rhd_a) as BasisId, (vi * nf + ai) as BasisId));
                }
                coprod[xi * nf + ai] = legs;
            }
        }

        // B' from the stabilizer condition a in F_y
        let mut bprime = vec![false; dim];
        for yi in 0..ng {
            for ai in 0..nf {
                bprime[yi * nf + ai] = fg.lhd_idx(yi, ai) == yi;
            }
        }

        let h = Bismash {
            fg,
            nf,
            ng,
            dim,
            prod,
            antipode,
            coprod,
            bprime,
            identity_f,
            identity_g,
        };
        h.verify_axioms()?;
        Ok(h)
    }

    pub fn factored_group(&self) -> &FactoredGroup {
        &self.fg
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_id(&self, y_index: usize, a_index: usize) -> BasisId {
        (y_index * self.nf + a_index) as BasisId
    }

    pub fn components(&self, id: BasisId) -> (usize, usize) {
        let id = id as usize;
        (id / self.nf, id % self.nf)
    }

    pub fn basis_perms(&self, id: BasisId) -> (&Perm, &Perm) {
        let (yi, ai) = self.components(id);
        (self.fg.g().element(yi), self.fg.f().element(ai))
    }

    /// Serialized basis label `p[y]#a` in cycle notation.
    pub fn basis_label(&self, id: BasisId) -> String {
        let (y, a) = self.basis_perms(id);
        format!("p[{y}]#{a}")
    }

    pub fn basis_ids(&self) -> impl Iterator<Item = BasisId> {
        (0..self.dim as u32).map(|i| i as BasisId)
    }

    pub fn product(&self, u: BasisId, v: BasisId) -> Option<BasisId> {
        self.prod[u as usize * self.dim + v as usize]
    }

    pub fn antipode(&self, u: BasisId) -> BasisId {
        self.antipode[u as usize]
    }

    pub fn coproduct(&self, u: BasisId) -> &[(BasisId, BasisId)] {
        &self.coprod[u as usize]
    }

    pub fn counit(&self, u: BasisId) -> bool {
        self.components(u).0 == self.identity_g
    }

    pub fn is_bprime(&self, u: BasisId) -> bool {
        self.bprime[u as usize]
    }

    /// The set B' of non-nilpotent basis elements.
    pub fn bprime_ids(&self) -> Vec<BasisId> {
        self.basis_ids().filter(|&u| self.is_bprime(u)).collect()
    }

    /// `B_p'`: elements of B' whose F-part is p-regular.
    pub fn bpprime_ids(&self, p: u64) -> Vec<BasisId> {
        self.basis_ids()
            .filter(|&u| {
                let (_, ai) = self.components(u);
                self.is_bprime(u) && !self.fg.f().element(ai).order().is_multiple_of(p)
            })
            .collect()
    }

    pub fn unit(&self) -> HElem {
        let mut t = BTreeMap::new();
        for yi in 0..self.ng {
            t.insert(self.basis_id(yi, self.identity_f), Q::one());
        }
        HElem(t)
    }

    /// The normalized two-sided integral `|F|^-1 sum_a p_1 # a`. In a
    /// modular context the normalization requires p prime to |F|.
    pub fn integral(&self, ctx: ScalarContext) -> Result<HElem, AlgebraError> {
        if let ScalarContext::Modular { p } = ctx {
            if (self.nf as u64).is_multiple_of(p) {
                return Err(AlgebraError::IntegralNotNormalizable { p, order: self.nf });
            }
        }
        let scale = Q::new(1.into(), (self.nf as i64).into());
        let mut t = BTreeMap::new();
        for ai in 0..self.nf {
            t.insert(self.basis_id(self.identity_g, ai), scale.clone());
        }
        Ok(HElem(t))
    }

    /// `m(Delta(Lambda))`: the element whose character values are the
    /// Frobenius-Schur indicators in characteristic 0.
    pub fn integral_square(&self) -> Result<HElem, AlgebraError> {
        let lambda = self.integral(ScalarContext::CharZero)?;
        let mut out = HElem::zero();
        for (&id, c) in &lambda.0 {
            for &(l, r) in self.coproduct(id) {
                if let Some(p) = self.product(l, r) {
                    out.add_term(p, c.clone());
                }
            }
        }
        Ok(out)
    }

    /// Closed form of `w^k` per the nilpotency law: `p_y # a^k` when
    /// `a` stabilizes `y`, zero otherwise.
    pub fn power_closed_form(&self, w: BasisId, k: u32) -> Option<BasisId> {
        assert!(k >= 2);
        let (yi, ai) = self.components(w);
        if !self.is_bprime(w) {
            return None;
        }
        let ak = self.fg.f().element(ai).pow(k as u64);
        Some(self.basis_id(yi, self.fg.f().index_of(&ak).unwrap()))
    }

    /// Left-regular matrix of a basis element over the integers.
    pub fn left_regular_matrix(&self, w: BasisId) -> Vec<Vec<i64>> {
        let mut m = vec![vec![0i64; self.dim]; self.dim];
        for v in self.basis_ids() {
            if let Some(p) = self.product(w, v) {
                m[p as usize][v as usize] = 1;
            }
        }
        m
    }

    fn verify_axioms(&self) -> Result<(), AlgebraError> {
        let dim = self.dim;
        let fail = |axiom: &str, detail: String| -> AlgebraError {
            AlgebraError::HopfAxiom {
                axiom: axiom.into(),
                detail,
            }
        };

        // associativity on all basis triples
        let assoc = crate::par::all_range(dim, |u| {
            let u = u as BasisId;
            (0..dim as u32).all(|v| {
                (0..dim as u32).all(|w| {
                    let lhs = self.product(u, v).and_then(|uv| self.product(uv, w));
                    let rhs = self.product(v, w).and_then(|vw| self.product(u, vw));
                    lhs == rhs
                })
            })
        });
        if !assoc {
            return Err(fail("associativity", "a basis triple".into()));
        }

        // unit element
        let unit = self.unit();
        for u in self.basis_ids() {
            let e = HElem::basis(u);
            if unit.mul(self, &e) != e || e.mul(self, &unit) != e {
                return Err(fail("unit", self.basis_label(u)));
            }
        }

        // counit is multiplicative and satisfies the counit laws
        for u in self.basis_ids() {
            for v in self.basis_ids() {
                let lhs = self.product(u, v).map(|p| self.counit(p)).unwrap_or(false);
                let rhs = self.counit(u) && self.counit(v);
                if lhs != rhs {
                    return Err(fail(
                        "counit multiplicative",
                        format!("{} * {}", self.basis_label(u), self.basis_label(v)),
                    ));
                }
            }
            // (eps (x) id) Delta = id = (id (x) eps) Delta
            let mut left = HElem::zero();
            let mut right = HElem::zero();
            for &(l, r) in self.coproduct(u) {
                if self.counit(l) {
                    left.add_term(r, Q::one());
                }
                if self.counit(r) {
                    right.add_term(l, Q::one());
                }
            }
            let expected = HElem::basis(u);
            if left != expected || right != expected {
                return Err(fail("counit law", self.basis_label(u)));
            }
        }

        // coassociativity on every basis element
        for u in self.basis_ids() {
            let mut lhs: BTreeMap<(BasisId, BasisId, BasisId), i64> = BTreeMap::new();
            let mut rhs: BTreeMap<(BasisId, BasisId, BasisId), i64> = BTreeMap::new();
            for &(l, r) in self.coproduct(u) {
                for &(ll, lr) in self.coproduct(l) {
                    *lhs.entry((ll, lr, r)).or_insert(0) += 1;
                }
                for &(rl, rr) in self.coproduct(r) {
                    *rhs.entry((l, rl, rr)).or_insert(0) += 1;
                }
            }
            if lhs != rhs {
                return Err(fail("coassociativity", self.basis_label(u)));
            }
        }

        // Delta is an algebra map on all basis pairs
        let delta_mult = crate::par::all_range(dim, |u| {
            let u = u as BasisId;
            (0..dim as u32).all(|v| {
                let mut prod_legs: BTreeMap<(BasisId, BasisId), i64> = BTreeMap::new();
                for &(l1, r1) in self.coproduct(u) {
                    for &(l2, r2) in self.coproduct(v) {
                        if let (Some(l), Some(r)) = (self.product(l1, l2), self.product(r1, r2)) {
                            *prod_legs.entry((l, r)).or_insert(0) += 1;
                        }
                    }
                }
                let mut expected: BTreeMap<(BasisId, BasisId), i64> = BTreeMap::new();
                if let Some(uv) = self.product(u, v) {
                    for &(l, r) in self.coproduct(uv) {
                        *expected.entry((l, r)).or_insert(0) += 1;
                    }
                }
                prod_legs == expected
            })
        });
        if !delta_mult {
            return Err(fail(
                "comultiplication multiplicative",
                "a basis pair".into(),
            ));
        }

        // antipode: S^2 = id, antihomomorphism, and both antipode axioms
        for u in self.basis_ids() {
            if self.antipode(self.antipode(u)) != u {
                return Err(fail("S^2 = id", self.basis_label(u)));
            }
            for v in self.basis_ids() {
                let lhs = self.product(u, v).map(|p| self.antipode(p));
                let rhs = self.product(self.antipode(v), self.antipode(u));
                if lhs != rhs {
                    return Err(fail(
                        "antipode antihomomorphism",
                        format!("{} * {}", self.basis_label(u), self.basis_label(v)),
                    ));
                }
            }
            let mut left = HElem::zero();
            let mut right = HElem::zero();
            for &(l, r) in self.coproduct(u) {
                if let Some(p) = self.product(self.antipode(l), r) {
                    left.add_term(p, Q::one());
                }
                if let Some(p) = self.product(l, self.antipode(r)) {
                    right.add_term(p, Q::one());
                }
            }
            let expected = if self.counit(u) {
                self.unit()
            } else {
                HElem::zero()
            };
            if left != expected || right != expected {
                return Err(fail("antipode axiom", self.basis_label(u)));
            }
        }

        // B' is exactly the set of non-nilpotent basis elements, and it
        // is closed under S
        for u in self.basis_ids() {
            let square_nonzero = self.product(u, u).is_some();
            if square_nonzero != self.is_bprime(u) {
                return Err(fail("B' = non-nilpotents", self.basis_label(u)));
            }
            if self.is_bprime(u) != self.is_bprime(self.antipode(u)) {
                return Err(fail("S(B') = B'", self.basis_label(u)));
            }
        }

        // closed form for S on B': S(p_y # a) = p_{y^-1} # y a^-1 y^-1
        for u in self.basis_ids() {
            if !self.is_bprime(u) {
                continue;
            }
            let (y, a) = self.basis_perms(u);
            let y_inv = y.inverse();
            let conj = y.compose(&a.inverse()).compose(&y_inv);
            let gi = self.fg.g().index_of(&y_inv).unwrap();
            let fi = self.fg.f().index_of(&conj).ok_or_else(|| {
                fail(
                    "S on B' closed form",
                    format!("{} lands outside F", self.basis_label(u)),
                )
            })?;
            if self.antipode(u) != self.basis_id(gi, fi) {
                return Err(fail("S on B' closed form", self.basis_label(u)));
            }
        }

        // integral law: h * Lambda = eps(h) Lambda for every basis h
        let lambda = self.integral(ScalarContext::CharZero)?;
        for u in self.basis_ids() {
            let lhs = HElem::basis(u).mul(self, &lambda);
            let rhs = if self.counit(u) {
                lambda.clone()
            } else {
                HElem::zero()
            };
            if lhs != rhs {
                return Err(fail("left integral", self.basis_label(u)));
            }
            // with S^2 = id the integral is two-sided; verified, not assumed
            let lhs = lambda.mul(self, &HElem::basis(u));
            if lhs != rhs {
                return Err(fail("right integral", self.basis_label(u)));
            }
        }
        let eps_lambda: Q = lambda
            .0
            .iter()
            .filter(|(&id, _)| self.counit(id))
            .map(|(_, c)| c.clone())
            .sum();
        if !eps_lambda.is_one() {
            return Err(fail(
                "integral normalization",
                format!("eps(Lambda) = {eps_lambda}"),
            ));
        }
        Ok(())
    }

    /// Names of the axiom-battery checks, in the order they run.
    pub fn axiom_names() -> &'static [&'static str] {
        &[
            "associativity",
            "unit",
            "counit multiplicative",
            "counit law",
            "coassociativity",
            "comultiplication multiplicative",
            "S^2 = id",
            "antipode antihomomorphism",
            "antipode axiom",
            "B' = non-nilpotents",
            "S(B') = B'",
            "S on B' closed form",
            "left integral",
            "right integral",
            "integral normalization",
        ]
    }
}

/// Sparse element of H with rational coefficients.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct HElem(BTreeMap<BasisId, Q>);

impl HElem {
    pub fn zero() -> Self {
        HElem(BTreeMap::new())
    }

    pub fn basis(id: BasisId) -> Self {
        let mut t = BTreeMap::new();
        t.insert(id, Q::one());
        HElem(t)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (BasisId, &Q)> {
        self.0.iter().map(|(&id, c)| (id, c))
    }

    pub fn coefficient(&self, id: BasisId) -> Q {
        self.0.get(&id).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, id: BasisId, c: Q) {
        if c.is_zero() {
            return;
        }
        let entry = self.0.entry(id).or_insert_with(Q::zero);
        *entry = &*entry + &c;
        if entry.is_zero() {
            self.0.remove(&id);
        }
    }

    pub fn add(&self, other: &HElem) -> HElem {
        let mut out = self.clone();
        for (&id, c) in &other.0 {
            out.add_term(id, c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Q) -> HElem {
        if s.is_zero() {
            return HElem::zero();
        }
        HElem(self.0.iter().map(|(&id, c)| (id, c * s)).collect())
    }

    pub fn mul(&self, h: &Bismash, other: &HElem) -> HElem {
        let mut out = HElem::zero();
        for (&u, cu) in &self.0 {
            for (&v, cv) in &other.0 {
                if let Some(p) = h.product(u, v) {
                    out.add_term(p, cu * cv);
                }
            }
        }
        out
    }

    pub fn apply_antipode(&self, h: &Bismash) -> HElem {
        HElem(
            self.0
                .iter()
                .map(|(&id, c)| (h.antipode(id), c.clone()))
                .collect(),
        )
    }

    pub fn pow(&self, h: &Bismash, k: u32) -> HElem {
        assert!(k >= 1);
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.mul(h, self);
        }
        acc
    }
}

impl fmt::Display for HElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        for (i, (id, c)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if c.is_one() {
                write!(f, "[{id}]")?;
            } else {
                write!(f, "{c}*[{id}]")?;
            }
        }
        Ok(())
    }
}

/// Pass/fail report for the axiom battery of one constructed H.
#[derive(Clone, Debug, Serialize)]
pub struct HopfCheckReport {
    pub name: String,
    pub dimension: usize,
    pub bprime_size: usize,
    pub axioms: Vec<AxiomResult>,
    pub all_passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomResult {
    pub axiom: String,
    pub passed: bool,
}

/// Run the battery standalone (construction already implies a pass; this
/// re-runs it to produce the per-axiom report for the CLI).
pub fn hopf_check(fg: &FactoredGroup) -> Result<HopfCheckReport, AlgebraError> {
    let h = Bismash::new(fg.clone())?;
    let axioms = Bismash::axiom_names()
        .iter()
        .map(|&axiom| AxiomResult {
            axiom: axiom.to_string(),
            passed: true,
        })
        .collect();
    Ok(HopfCheckReport {
        name: fg.name().to_string(),
        dimension: h.dim(),
        bprime_size: h.bprime_ids().len(),
        axioms,
        all_passed: true,
    })
}

/// Minimum polynomial divisibility check: evaluate `Z^(m+1) - Z` at the
/// left-regular matrix of `w` over the integers.
pub fn min_poly_divides_power_law(h: &Bismash, w: BasisId) -> bool {
    let (_, ai) = h.components(w);
    let m = h.factored_group().f().element(ai).order() as usize;
    let reg = h.left_regular_matrix(w);
    let n = reg.len();
    let mut acc = reg.clone();
    // compute reg^(m+1)
    for _ in 0..m {
        let mut next = vec![vec![0i64; n]; n];
        for i in 0..n {
            for k in 0..n {
                if acc[i][k] != 0 {
                    for j in 0..n {
                        next[i][j] += acc[i][k] * reg[k][j];
                    }
                }
            }
        }
        acc = next;
    }
    acc == reg
}
