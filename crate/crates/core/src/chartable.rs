//! Ordinary (characteristic 0) irreducible character tables via the
//! Dixon-Schneider class-algebra method: simultaneous eigenvectors of the
//! class-multiplication matrices over a prime field GF(q) with
//! `q = 1 (mod exp G)`, followed by an inverse discrete Fourier lift of
//! the values into `Z[zeta_e]`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cyclotomic::{cyc_sum, Cyc};
use crate::error::AlgebraError;
use crate::ffield::{is_prime, poly_roots, BrauerLift, Ff, FiniteField};
use crate::ffmat::FfMat;
use crate::perm::{ConjClasses, PermGroup};
use crate::ratmat::qint;

#[derive(Clone)]
pub struct CharTable {
    group: PermGroup,
    classes: ConjClasses,
    exponent: u64,
    table_prime: u64,
    rows: Vec<CharRow>,
}

#[derive(Clone, Debug)]
pub struct CharRow {
    pub degree: usize,
    /// one exact value per conjugacy class, in class order
    pub values: Vec<Cyc>,
}

/// Column-filtered view of a table on the p-regular classes.
#[derive(Clone, Debug)]
pub struct PRegularRestriction {
    /// indices into the full class list, in class order
    pub class_ids: Vec<usize>,
    /// rows in table order, one value per retained class
    pub rows: Vec<Vec<Cyc>>,
}

impl CharTable {
    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn classes(&self) -> &ConjClasses {
        &self.classes
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// The auxiliary prime used by the class-algebra computation.
    pub fn table_prime(&self) -> u64 {
        self.table_prime
    }

    pub fn rows(&self) -> &[CharRow] {
        &self.rows
    }

    pub fn value(&self, row: usize, class: usize) -> &Cyc {
        &self.rows[row].values[class]
    }

    /// Value of a character at an arbitrary group element.
    pub fn value_at(&self, row: usize, elem_index: usize) -> &Cyc {
        self.value(row, self.classes.class_of(elem_index))
    }

    pub fn restrict_to_p_regular(&self, p: u64) -> PRegularRestriction {
        let class_ids = self.classes.p_regular_classes(&self.group, p);
        let rows = self
            .rows
            .iter()
            .map(|r| class_ids.iter().map(|&c| r.values[c].clone()).collect())
            .collect();
        PRegularRestriction { class_ids, rows }
    }

    pub fn summary(&self) -> CharTableReport {
        CharTableReport {
            group: self.group.name().to_string(),
            order: self.group.order(),
            exponent: self.exponent,
            table_prime: self.table_prime,
            class_representatives: (0..self.classes.count())
                .map(|c| self.group.element(self.classes.rep_index(c)).to_string())
                .collect(),
            class_sizes: (0..self.classes.count())
                .map(|c| self.classes.size(c))
                .collect(),
            degrees: self.rows.iter().map(|r| r.degree).collect(),
            values: self
                .rows
                .iter()
                .map(|r| r.values.iter().map(|v| v.to_string()).collect())
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CharTableReport {
    pub group: String,
    pub order: usize,
    pub exponent: u64,
    pub table_prime: u64,
    pub class_representatives: Vec<String>,
    pub class_sizes: Vec<usize>,
    pub degrees: Vec<usize>,
    pub values: Vec<Vec<String>>,
}

/// Smallest admissible auxiliary prime: `q = 1 (mod e)`, `q` larger than
/// twice `sqrt(|G|)` times the largest class size, and `q` prime to |G|.
fn table_prime(order: usize, exponent: u64, max_class: usize) -> Result<u64, AlgebraError> {
    let bound = 2.0 * (order as f64).sqrt() * max_class as f64;
    let mut q = exponent + 1;
    loop {
        if q as f64 > bound && is_prime(q) && !(order as u64).is_multiple_of(q) {
            return Ok(q);
        }
        q += exponent.max(1);
        if q > 100_000_000 {
            return Err(AlgebraError::NoTablePrime(order));
        }
    }
}

/// Express each image vector in the given basis (columns). Panics if the
/// images do not lie in the span; callers pass invariant subspaces.
fn coords_in_basis(f: &FiniteField, basis: &[Vec<Ff>], images: &[Vec<Ff>]) -> Vec<Vec<Ff>> {
    let dim = basis[0].len();
    let b = basis.len();
    let m = images.len();
    let mut aug = FfMat::zero(dim, b + m);
    for (j, v) in basis.iter().enumerate() {
        for i in 0..dim {
            aug.set(i, j, v[i]);
        }
    }
    for (j, w) in images.iter().enumerate() {
        for i in 0..dim {
            aug.set(i, b + j, w[i]);
        }
    }
    let pivots = aug.rref(f);
    assert!(
        pivots.len() == b && pivots.iter().enumerate().all(|(i, &c)| i == c),
        "basis must be independent and span the images"
    );
    (0..m)
        .map(|j| (0..b).map(|i| aug.get(i, b + j)).collect())
        .collect()
}

pub fn character_table(group: &PermGroup) -> Result<CharTable, AlgebraError> {
    let classes = group.conjugacy_classes();
    let k = classes.count();
    let n = group.order();
    let e = group.exponent();
    let max_class = (0..k).map(|c| classes.size(c)).max().unwrap();
    let q = table_prime(n, e, max_class)?;
    let fq = FiniteField::new(q, 1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0);

    // class multiplication coefficients: M_i[j][l] = #{(x, y) in C_i x C_j
    // with x y = g_l}; each M_i acts on central-character vectors.
    let reps: Vec<usize> = (0..k).map(|c| classes.rep_index(c)).collect();
    let class_mats: Vec<FfMat> = crate::par::map_range(k, |i| {
        let mut m = FfMat::zero(k, k);
        for (xi, x) in group.elements().iter().enumerate() {
            if classes.class_of(xi) != i {
                continue;
            }
            for (l, &rep) in reps.iter().enumerate() {
                let y = x.inverse().compose(group.element(rep));
                let j = classes.class_of(group.index_of(&y).unwrap());
                let cur = m.get(j, l);
                m.set(j, l, fq.add(cur, 1));
            }
        }
        m
    });

    // split the space into simultaneous eigenlines
    let full: Vec<Vec<Ff>> = (0..k)
        .map(|i| {
            let mut v = vec![0; k];
            v[i] = 1;
            v
        })
        .collect();
    let mut subspaces: Vec<Vec<Vec<Ff>>> = vec![full];
    for mat in &class_mats {
        if subspaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let mut next = Vec::new();
        for basis in subspaces {
            if basis.len() == 1 {
                next.push(basis);
                continue;
            }
            let images: Vec<Vec<Ff>> = basis.iter().map(|v| mat.mul_vec(&fq, v)).collect();
            let coords = coords_in_basis(&fq, &basis, &images);
            let b = basis.len();
            // restricted action: column j = coords of image of basis[j]
            let restricted = FfMat::from_fn(b, b, |i, j| coords[j][i]);
            let charpoly = restricted.charpoly(&fq);
            let roots = poly_roots(&fq, &charpoly, &mut rng);
            for root in roots {
                let shifted = restricted.sub(&fq, &FfMat::identity(b).scale(&fq, root));
                // the whole eigenspace stays together; later matrices
                // split it further
                let eigenspace: Vec<Vec<Ff>> = shifted
                    .nullspace(&fq)
                    .into_iter()
                    .map(|kernel_vec| {
                        let mut v = vec![0; k];
                        for (ci, &c) in kernel_vec.iter().enumerate() {
                            if c != 0 {
                                for (vi, slot) in v.iter_mut().enumerate() {
                                    *slot = fq.add(*slot, fq.mul(c, basis[ci][vi]));
                                }
                            }
                        }
                        v
                    })
                    .collect();
                if !eigenspace.is_empty() {
                    next.push(eigenspace);
                }
            }
        }
        subspaces = next;
    }
    if subspaces.len() != k || subspaces.iter().any(|s| s.len() != 1) {
        return Err(AlgebraError::TableCheck(format!(
            "expected {k} eigenlines, found {}",
            subspaces.len()
        )));
    }

    // central character values per eigenline
    let inv_class: Vec<usize> = (0..k)
        .map(|l| {
            let inv = group.element(reps[l]).inverse();
            classes.class_of(group.index_of(&inv).unwrap())
        })
        .collect();
    let class_sizes_ff: Vec<Ff> = (0..k).map(|c| (classes.size(c) as u64) % q).collect();
    let order_ff = (n as u64) % q;
    let lift = BrauerLift::new(q, e)?;
    let theta_pows: Vec<Ff> = (0..e).map(|j| fq.pow(lift.omega(), j)).collect();

    // power-class map for the Fourier lift
    let pow_class: Vec<Vec<usize>> = (0..k)
        .map(|l| {
            let rep = group.element(reps[l]);
            (0..e)
                .map(|t| classes.class_of(group.index_of(&rep.pow(t)).unwrap()))
                .collect()
        })
        .collect();

    let mut rows: Vec<CharRow> = Vec::with_capacity(k);
    for line in &subspaces {
        let v = &line[0];
        let pivot = v.iter().position(|&x| x != 0).unwrap();
        let pivot_inv = fq.inv(v[pivot]).unwrap();
        let omega: Vec<Ff> = class_mats
            .iter()
            .map(|m| fq.mul(m.mul_vec(&fq, v)[pivot], pivot_inv))
            .collect();
        // degree from the first orthogonality relation
        let mut s = 0;
        for l in 0..k {
            let term = fq.mul(
                fq.mul(omega[l], omega[inv_class[l]]),
                fq.inv(class_sizes_ff[l]).unwrap(),
            );
            s = fq.add(s, term);
        }
        let d_sq = fq.mul(order_ff, fq.inv(s).unwrap());
        let max_deg = (n as f64).sqrt() as u64 + 1;
        let degree = (1..=max_deg)
            .find(|&r| fq.mul(r % q, r % q) == d_sq)
            .ok_or_else(|| AlgebraError::TableCheck("no admissible degree".into()))?;
        // character values mod q
        let x_mod: Vec<Ff> = (0..k)
            .map(|l| {
                fq.mul(
                    fq.mul(degree % q, omega[l]),
                    fq.inv(class_sizes_ff[l]).unwrap(),
                )
            })
            .collect();
        // inverse DFT to eigenvalue multiplicities, then exact values
        let e_inv = fq.inv(e % q).unwrap();
        let values: Vec<Cyc> = (0..k)
            .map(|l| {
                let mut terms = Vec::new();
                for s in 0..e {
                    let mut acc = 0;
                    for t in 0..e {
                        let theta_neg = theta_pows[((e - (s * t) % e) % e) as usize];
                        acc = fq.add(acc, fq.mul(x_mod[pow_class[l][t as usize]], theta_neg));
                    }
                    let mult = fq.mul(acc, e_inv);
                    assert!(mult <= degree % q, "multiplicity bounded by the degree");
                    if mult > 0 {
                        terms.push(Cyc::root_of_unity(e, s).scale(&qint(mult as i64)));
                    }
                }
                cyc_sum(terms)
            })
            .collect();
        rows.push(CharRow {
            degree: degree as usize,
            values,
        });
    }

    rows.sort_by(|a, b| {
        a.degree.cmp(&b.degree).then_with(|| {
            for (x, y) in a.values.iter().zip(&b.values) {
                let ord = x.cmp_key(y);
                if ord != std::cmp::Ordering::Equal {
                    return ord;
                }
            }
            std::cmp::Ordering::Equal
        })
    });

    let table = CharTable {
        group: group.clone(),
        classes,
        exponent: e,
        table_prime: q,
        rows,
    };
    verify_table(&table)?;
    Ok(table)
}

fn verify_table(t: &CharTable) -> Result<(), AlgebraError> {
    let k = t.classes.count();
    let n = t.group.order() as i64;
    // sum of squared degrees
    let total: usize = t.rows.iter().map(|r| r.degree * r.degree).sum();
    if total != t.group.order() {
        return Err(AlgebraError::TableCheck("sum of squared degrees".into()));
    }
    for r in &t.rows {
        if !t.group.order().is_multiple_of(r.degree) {
            return Err(AlgebraError::TableCheck("degree must divide |G|".into()));
        }
        if !r.values.iter().all(|v| v.is_integral()) {
            return Err(AlgebraError::TableCheck(
                "values must be algebraic integers".into(),
            ));
        }
        if !r.values[0].equals(&Cyc::from_int(r.degree as i64)) {
            return Err(AlgebraError::TableCheck(
                "identity column must hold degrees".into(),
            ));
        }
    }
    // row orthogonality with conjugation realized as the Galois map
    for (i, ri) in t.rows.iter().enumerate() {
        for (j, rj) in t.rows.iter().enumerate() {
            let mut acc = Cyc::zero();
            for c in 0..k {
                let term = ri.values[c]
                    .mul(&rj.values[c].conjugate())
                    .scale(&qint(t.classes.size(c) as i64));
                acc = acc.add(&term);
            }
            let expected = if i == j {
                Cyc::from_int(n)
            } else {
                Cyc::zero()
            };
            if !acc.equals(&expected) {
                return Err(AlgebraError::TableCheck(format!(
                    "row orthogonality failed at ({i}, {j})"
                )));
            }
        }
    }
    // second orthogonality against the identity column
    for c in 1..k {
        let mut acc = Cyc::zero();
        for r in &t.rows {
            acc = acc.add(&r.values[c].scale(&qint(r.degree as i64)));
        }
        if !acc.is_zero() {
            return Err(AlgebraError::TableCheck(format!(
                "column orthogonality failed at class {c}"
            )));
        }
    }
    Ok(())
}
