//! MeatAxe-style module arithmetic over finite fields: spinning,
//! composition factors (chop) with Norton's irreducibility certificate,
//! and isomorphism testing via intertwiner spaces.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::AlgebraError;
use crate::ffield::{poly_factor, Ff, FiniteField};
use crate::ffmat::FfMat;
use crate::perm::PermGroup;

/// Module over a matrix algebra, given by the action matrices of a
/// generating set (column-vector convention: vectors transform as
/// `v -> M v`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FfModule {
    pub field: FiniteField,
    pub dim: usize,
    pub gens: Vec<FfMat>,
}

impl FfModule {
    pub fn new(field: FiniteField, dim: usize, gens: Vec<FfMat>) -> Self {
        for g in &gens {
            assert_eq!(g.rows(), dim);
            assert_eq!(g.cols(), dim);
        }
        FfModule { field, dim, gens }
    }

    /// Action matrix of group element `i`, via its generator word.
    pub fn action_of(&self, group: &PermGroup, elem_index: usize) -> FfMat {
        let mut acc = FfMat::identity(self.dim);
        for &gi in group.word(elem_index) {
            acc = acc.mul(&self.field, &self.gens[gi]);
        }
        acc
    }

    /// Spot-check that the generator matrices satisfy the group's
    /// multiplication (matrix of a product equals product of matrices).
    pub fn verify_group_relations(&self, group: &PermGroup, samples: usize, seed: u64) -> bool {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = group.order();
        (0..samples).all(|_| {
            let i = rng.gen_range(0..n);
            let j = rng.gen_range(0..n);
            let prod = group.element(i).compose(group.element(j));
            let pk = group.index_of(&prod).unwrap();
            let lhs = self
                .action_of(group, i)
                .mul(&self.field, &self.action_of(group, j));
            lhs == self.action_of(group, pk)
        })
    }
}

/// Left-regular module: columns indexed by group elements, the action of
/// a generator permutes them by left multiplication.
pub fn regular_module(group: &PermGroup, field: &FiniteField) -> FfModule {
    let n = group.order();
    let gens = group
        .generators()
        .iter()
        .map(|g| {
            let images: Vec<usize> = (0..n)
                .map(|j| group.index_of(&g.compose(group.element(j))).unwrap())
                .collect();
            FfMat::from_permutation(&images)
        })
        .collect();
    FfModule::new(field.clone(), n, gens)
}

/// Echelonized basis of an invariant subspace.
#[derive(Clone, Debug)]
pub struct Subspace {
    /// echelon vectors (each with a distinct pivot column)
    pub basis: Vec<Vec<Ff>>,
    pub pivots: Vec<usize>,
}

impl Subspace {
    pub fn empty() -> Self {
        Subspace {
            basis: vec![],
            pivots: vec![],
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Reduce `v` against the basis; returns the remainder and the
    /// coefficients used (aligned with `basis`).
    pub fn reduce(&self, f: &FiniteField, v: &[Ff]) -> (Vec<Ff>, Vec<Ff>) {
        let mut v = v.to_vec();
        let mut coeffs = vec![0; self.basis.len()];
        for (bi, b) in self.basis.iter().enumerate() {
            let p = self.pivots[bi];
            if v[p] != 0 {
                let c = v[p]; // basis vectors are pivot-normalized
                coeffs[bi] = c;
                for (x, y) in v.iter_mut().zip(b) {
                    *x = f.sub(*x, f.mul(c, *y));
                }
            }
        }
        (v, coeffs)
    }

    /// Insert `v` if independent; returns true if the dimension grew.
    pub fn insert(&mut self, f: &FiniteField, v: &[Ff]) -> bool {
        let (mut rem, _) = self.reduce(f, v);
        let Some(p) = rem.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv(rem[p]).unwrap();
        for x in rem.iter_mut() {
            *x = f.mul(*x, inv);
        }
        // keep earlier vectors reduced against the new one
        for (bi, b) in self.basis.iter_mut().enumerate() {
            let _ = bi;
            if b[p] != 0 {
                let c = b[p];
                for (x, y) in b.iter_mut().zip(&rem) {
                    *x = f.sub(*x, f.mul(c, *y));
                }
            }
        }
        let pos = self
            .pivots
            .iter()
            .position(|&q| q > p)
            .unwrap_or(self.pivots.len());
        self.pivots.insert(pos, p);
        self.basis.insert(pos, rem);
        true
    }
}

/// Smallest invariant subspace containing the seed vectors.
pub fn spin(module: &FfModule, seeds: &[Vec<Ff>]) -> Subspace {
    let f = &module.field;
    let mut space = Subspace::empty();
    let mut queue: Vec<Vec<Ff>> = Vec::new();
    for s in seeds {
        if space.insert(f, s) {
            queue.push(s.to_vec());
        }
    }
    while let Some(v) = queue.pop() {
        for g in &module.gens {
            let w = g.mul_vec(f, &v);
            if space.insert(f, &w) {
                queue.push(w);
            }
        }
    }
    space
}

/// Restriction of the module to an invariant subspace, in the subspace
/// basis.
fn restrict(module: &FfModule, space: &Subspace) -> FfModule {
    let f = &module.field;
    let b = space.dim();
    let gens = module
        .gens
        .iter()
        .map(|g| {
            let mut m = FfMat::zero(b, b);
            for (j, v) in space.basis.iter().enumerate() {
                let w = g.mul_vec(f, v);
                let (rem, coeffs) = space.reduce(f, &w);
                assert!(rem.iter().all(|&x| x == 0), "subspace must be invariant");
                for (i, &c) in coeffs.iter().enumerate() {
                    m.set(i, j, c);
                }
            }
            m
        })
        .collect();
    FfModule::new(f.clone(), b, gens)
}

/// Quotient of the module by an invariant subspace, on the complement
/// coordinates (the non-pivot positions).
fn quotient(module: &FfModule, space: &Subspace) -> FfModule {
    let f = &module.field;
    let n = module.dim;
    let free: Vec<usize> = (0..n).filter(|c| !space.pivots.contains(c)).collect();
    let b = free.len();
    let gens = module
        .gens
        .iter()
        .map(|g| {
            let mut m = FfMat::zero(b, b);
            for (j, &col) in free.iter().enumerate() {
                let mut unit = vec![0; n];
                unit[col] = 1;
                let w = g.mul_vec(f, &unit);
                let (rem, _) = space.reduce(f, &w);
                for (i, &row) in free.iter().enumerate() {
                    m.set(i, j, rem[row]);
                }
            }
            m
        })
        .collect();
    FfModule::new(f.clone(), b, gens)
}

/// Random element of the enveloping algebra: a linear combination of a
/// few random words in the generators.
fn random_algebra_element<R: Rng>(module: &FfModule, rng: &mut R) -> FfMat {
    let f = &module.field;
    let n = module.dim;
    let mut acc = FfMat::zero(n, n);
    let words = 2 + rng.gen_range(0..3);
    for _ in 0..words {
        let len = 1 + rng.gen_range(0..3);
        let mut w = FfMat::identity(n);
        for _ in 0..len {
            let gi = rng.gen_range(0..module.gens.len());
            w = w.mul(f, &module.gens[gi]);
        }
        let c = rng.gen_range(1..f.size());
        acc = acc.add(f, &w.scale(f, c));
    }
    acc
}

enum ChopStep {
    Irreducible,
    Split(Subspace),
}

/// One round of the MeatAxe with Norton's test.
fn chop_step(module: &FfModule, rng: &mut ChaCha8Rng) -> Result<ChopStep, AlgebraError> {
    let f = &module.field;
    let n = module.dim;
    if n == 1 {
        return Ok(ChopStep::Irreducible);
    }
    if module.gens.is_empty() {
        // the algebra is the scalars: any coordinate line is a submodule
        let mut seed = vec![0; n];
        seed[0] = 1;
        return Ok(ChopStep::Split(spin(module, &[seed])));
    }
    let budget = 200;
    for _ in 0..budget {
        let theta = random_algebra_element(module, rng);
        let charpoly = theta.charpoly(f);
        let mut factors = poly_factor(f, &charpoly, rng);
        factors.sort_by_key(|(fac, _)| fac.len());
        for (fac, _) in &factors {
            // g(theta) for the irreducible factor g
            let mut g_theta = FfMat::zero(n, n);
            let mut pow = FfMat::identity(n);
            for &c in fac {
                if c != 0 {
                    g_theta = g_theta.add(f, &pow.scale(f, c));
                }
                pow = pow.mul(f, &theta);
            }
            let kernel = g_theta.nullspace(f);
            if kernel.is_empty() {
                continue;
            }
            let sub = spin(module, &[kernel[0].clone()]);
            if sub.dim() < n {
                return Ok(ChopStep::Split(sub));
            }
            if kernel.len() == fac.len() - 1 {
                // minimal nullity: Norton's criterion applies
                let dual = FfModule::new(
                    f.clone(),
                    n,
                    module.gens.iter().map(|g| g.transpose()).collect(),
                );
                let gt = g_theta.transpose();
                let dual_kernel = gt.nullspace(f);
                let dual_sub = spin(&dual, &[dual_kernel[0].clone()]);
                if dual_sub.dim() == n {
                    return Ok(ChopStep::Irreducible);
                }
                // the annihilator of the dual submodule is a proper
                // invariant subspace of the original module
                let mut ann = FfMat::zero(dual_sub.dim(), n);
                for (i, v) in dual_sub.basis.iter().enumerate() {
                    for (j, &x) in v.iter().enumerate() {
                        ann.set(i, j, x);
                    }
                }
                let perp = ann.nullspace(f);
                let sub = spin(module, &perp);
                assert!(sub.dim() < n && sub.dim() > 0);
                return Ok(ChopStep::Split(sub));
            }
        }
    }
    Err(AlgebraError::ChopBudget(n))
}

/// Composition factors with multiplicities, grouped up to isomorphism and
/// sorted by dimension (ties broken by the generator matrices).
pub fn chop(module: &FfModule, seed: u64) -> Result<Vec<(FfModule, usize)>, AlgebraError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(0x9e3779b97f4a7c15));
    let mut factors: Vec<FfModule> = Vec::new();
    let mut stack = vec![module.clone()];
    while let Some(m) = stack.pop() {
        if m.dim == 0 {
            continue;
        }
        match chop_step(&m, &mut rng)? {
            ChopStep::Irreducible => factors.push(m),
            ChopStep::Split(sub) => {
                stack.push(restrict(&m, &sub));
                stack.push(quotient(&m, &sub));
            }
        }
    }
    let total: usize = factors.iter().map(|m| m.dim).sum();
    assert_eq!(
        total, module.dim,
        "factor dimensions must sum to the module dimension"
    );
    // group by isomorphism
    let mut grouped: Vec<(FfModule, usize)> = Vec::new();
    'outer: for fac in factors {
        for (rep, mult) in grouped.iter_mut() {
            if is_isomorphic(rep, &fac)? {
                *mult += 1;
                continue 'outer;
            }
        }
        grouped.push((fac, 1));
    }
    grouped.sort_by(|(a, _), (b, _)| {
        a.dim
            .cmp(&b.dim)
            .then_with(|| format!("{:?}", a.gens).cmp(&format!("{:?}", b.gens)))
    });
    Ok(grouped)
}

/// Isomorphism test by solving for an intertwiner `X B_i = A_i X`; for
/// modules over the same generating sequence. A nonzero solution between
/// irreducibles is invertible by Schur's lemma.
pub fn is_isomorphic(a: &FfModule, b: &FfModule) -> Result<bool, AlgebraError> {
    if a.dim != b.dim || a.gens.len() != b.gens.len() || a.field != b.field {
        return Ok(false);
    }
    let f = &a.field;
    let n = a.dim;
    if n == 0 {
        return Ok(true);
    }
    // traces must agree generator-wise
    if a.gens
        .iter()
        .zip(&b.gens)
        .any(|(x, y)| x.trace(f) != y.trace(f))
    {
        return Ok(false);
    }
    // X A_i = B_i X as a linear system on the n^2 entries of X
    let rows = a.gens.len() * n * n;
    let mut sys = FfMat::zero(rows, n * n);
    let mut r = 0;
    for (ga, gb) in a.gens.iter().zip(&b.gens) {
        for i in 0..n {
            for j in 0..n {
                // (X ga - gb X)[i][j] = sum_k X[i][k] ga[k][j] - gb[i][k] X[k][j]
                for k in 0..n {
                    let cur = sys.get(r, i * n + k);
                    sys.set(r, i * n + k, f.add(cur, ga.get(k, j)));
                    let cur = sys.get(r, k * n + j);
                    sys.set(r, k * n + j, f.sub(cur, gb.get(i, k)));
                }
                r += 1;
            }
        }
    }
    let kernel = sys.nullspace(f);
    if kernel.is_empty() {
        return Ok(false);
    }
    let x = FfMat::from_fn(n, n, |i, j| kernel[0][i * n + j]);
    if x.inverse(f).is_none() {
        // can only happen when the inputs are not irreducible
        return Err(AlgebraError::NotIrreducible);
    }
    Ok(true)
}
