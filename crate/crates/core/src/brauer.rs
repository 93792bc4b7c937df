//! Brauer characters of a finite group at an odd prime p: the irreducible
//! modular representations from chopping the regular module, their lifted
//! character values on p-regular classes, and the decomposition and
//! Cartan matrices against the ordinary table.

use num::{BigInt, One, Signed, Zero};
use serde::Serialize;

use crate::chartable::CharTable;
use crate::cyclotomic::Cyc;
use crate::error::AlgebraError;
use crate::ffield::{BrauerLift, FiniteField};
use crate::meataxe::{chop, regular_module, FfModule};
use crate::perm::{lcm, PermGroup};
use crate::ratmat::{self, Q};

/// Brauer character of one module: exact values on the p-regular classes.
#[derive(Clone, Debug)]
pub struct GroupBrauerChar {
    pub dim: usize,
    /// aligned with `p_regular_classes`
    pub values: Vec<Cyc>,
}

/// The modular side of a group at p: splitting field, lift, and the
/// irreducible Brauer characters in a deterministic order.
pub struct GroupModularData {
    pub p: u64,
    /// lcm of the orders of the p-regular elements (the p'-exponent)
    pub m: u64,
    pub lift: BrauerLift,
    pub p_regular_classes: Vec<usize>,
    /// irreducible modules with their Brauer characters, sorted by
    /// (dimension, value row)
    pub ibr: Vec<(FfModule, GroupBrauerChar)>,
}

/// p'-exponent: lcm of the orders of the p-regular elements.
pub fn p_prime_exponent(group: &PermGroup, p: u64) -> u64 {
    group
        .elements()
        .iter()
        .map(|g| g.order())
        .filter(|o| o % p != 0)
        .fold(1, lcm)
}

/// Brauer character of any module (not necessarily irreducible): lift
/// the eigenvalues of the action of each p-regular class representative.
pub fn brauer_character(
    group: &PermGroup,
    module: &FfModule,
    lift: &BrauerLift,
    p_regular_classes: &[usize],
    classes: &crate::perm::ConjClasses,
) -> Result<GroupBrauerChar, AlgebraError> {
    let values = p_regular_classes
        .iter()
        .map(|&c| {
            let rep = classes.rep_index(c);
            let a = module.action_of(group, rep);
            let m = group.element(rep).order();
            crate::ffmat::eigenvalue_lift_of_order(&a, &module.field, lift, m, true)
                .map_err(AlgebraError::from)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GroupBrauerChar {
        dim: module.dim,
        values,
    })
}

/// Compute IBr by chopping the regular module over GF(p^D), where D is
/// chosen so the field contains all needed roots of unity (and therefore
/// splits the group and its subgroups).
pub fn group_modular_data(
    group: &PermGroup,
    p: u64,
    seed: u64,
) -> Result<GroupModularData, AlgebraError> {
    let m = p_prime_exponent(group, p);
    let lift = BrauerLift::new(p, m)?;
    let field = lift.field().clone();
    let classes = group.conjugacy_classes();
    let p_regular = classes.p_regular_classes(group, p);
    let regular = regular_module(group, &field);
    let factors = chop(&regular, seed)?;
    if factors.len() != p_regular.len() {
        return Err(AlgebraError::TheoremViolation(format!(
            "number of simple modules {} must equal the number of p-regular classes {}",
            factors.len(),
            p_regular.len()
        )));
    }
    let mut ibr: Vec<(FfModule, GroupBrauerChar)> = factors
        .into_iter()
        .map(|(module, _mult)| {
            let bc = brauer_character(group, &module, &lift, &p_regular, &classes)?;
            Ok((module, bc))
        })
        .collect::<Result<Vec<_>, AlgebraError>>()?;
    ibr.sort_by(|(_, a), (_, b)| {
        a.dim.cmp(&b.dim).then_with(|| {
            for (x, y) in a.values.iter().zip(&b.values) {
                let ord = x.cmp_key(y);
                if ord != std::cmp::Ordering::Equal {
                    return ord;
                }
            }
            std::cmp::Ordering::Equal
        })
    });
    Ok(GroupModularData {
        p,
        m,
        lift,
        p_regular_classes: p_regular,
        ibr,
    })
}

pub fn field_of(data: &GroupModularData) -> &FiniteField {
    data.lift.field()
}

/// Integer matrix with explicit shape; rows are ordinary characters,
/// columns Brauer characters for a decomposition matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<i64>>,
}

impl IntMatrix {
    pub fn identity(n: usize) -> Self {
        IntMatrix {
            rows: n,
            cols: n,
            entries: (0..n)
                .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
                .collect(),
        }
    }

    pub fn transpose_mul_self(&self) -> IntMatrix {
        let mut out = vec![vec![0i64; self.cols]; self.cols];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                *slot = (0..self.rows)
                    .map(|r| self.entries[r][i] * self.entries[r][j])
                    .sum();
            }
        }
        IntMatrix {
            rows: self.cols,
            cols: self.cols,
            entries: out,
        }
    }

    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let m: Vec<Vec<Q>> = self
            .entries
            .iter()
            .map(|r| r.iter().map(|&x| ratmat::qint(x)).collect())
            .collect();
        let d = ratmat::det(&m);
        assert!(d.denom().is_one());
        d.numer().clone()
    }

    pub fn column_sums(&self) -> Vec<i64> {
        (0..self.cols)
            .map(|j| self.entries.iter().map(|r| r[j]).sum())
            .collect()
    }
}

/// Convert a list of exact value rows over a common conductor to a
/// rational matrix, one block of phi(m) rational coordinates per value.
pub fn value_rows_to_rational(rows: &[Vec<Cyc>]) -> Vec<Vec<Q>> {
    let conductor = rows
        .iter()
        .flat_map(|r| r.iter().map(|v| v.conductor()))
        .fold(1, lcm);
    rows.iter()
        .map(|r| {
            let mut out = Vec::new();
            for v in r {
                let p = v.promote(conductor).unwrap();
                out.extend(p.coeffs().iter().cloned());
            }
            out
        })
        .collect()
}

/// Solve the restrictions of the ordinary characters against the Brauer
/// characters: `chi_i|p-regular = sum_j d_ij phi_j` with a unique
/// nonnegative-integer solution.
pub fn decomposition_matrix(
    table: &CharTable,
    data: &GroupModularData,
) -> Result<IntMatrix, AlgebraError> {
    let restriction = table.restrict_to_p_regular(data.p);
    if restriction.class_ids != data.p_regular_classes {
        return Err(AlgebraError::DecompositionSolve(
            "class order mismatch between table and modular data".into(),
        ));
    }
    let phi_rows: Vec<Vec<Cyc>> = data.ibr.iter().map(|(_, bc)| bc.values.clone()).collect();
    let chi_rows = restriction.rows;
    solve_decomposition(&chi_rows, &phi_rows)
}

/// Shared solver: express each chi row as an integer combination of the
/// phi rows. Errors on non-integral or negative solutions.
pub fn solve_decomposition(
    chi_rows: &[Vec<Cyc>],
    phi_rows: &[Vec<Cyc>],
) -> Result<IntMatrix, AlgebraError> {
    let mut all_rows: Vec<Vec<Cyc>> = phi_rows.to_vec();
    all_rows.extend(chi_rows.iter().cloned());
    let rational = value_rows_to_rational(&all_rows);
    let (phi_rat, chi_rat) = rational.split_at(phi_rows.len());
    // A d = b with columns = phi vectors
    let coords = if phi_rat.is_empty() {
        0
    } else {
        phi_rat[0].len()
    };
    let a: Vec<Vec<Q>> = (0..coords)
        .map(|i| phi_rat.iter().map(|r| r[i].clone()).collect())
        .collect();
    let mut entries = Vec::with_capacity(chi_rows.len());
    for (ri, chi) in chi_rat.iter().enumerate() {
        let sol = ratmat::solve_full_column_rank(&a, chi).ok_or_else(|| {
            AlgebraError::DecompositionSolve(format!(
                "no unique solution for ordinary character {ri} (incomplete IBr set?)"
            ))
        })?;
        let mut row = Vec::with_capacity(sol.len());
        for d in sol {
            if !ratmat::is_integer(&d) || d.is_negative() {
                return Err(AlgebraError::DecompositionSolve(format!(
                    "non-integral or negative multiplicity {d} in row {ri}"
                )));
            }
            row.push(i64::try_from(d.to_integer()).expect("small multiplicities"));
        }
        entries.push(row);
    }
    Ok(IntMatrix {
        rows: chi_rows.len(),
        cols: phi_rows.len(),
        entries,
    })
}

/// Cartan matrix `C = D^t D` with its exact determinant and the p-power
/// certificate demanded by Brauer's theorem.
#[derive(Clone, Debug, Serialize)]
pub struct CartanData {
    pub cartan: IntMatrix,
    pub det: String,
    pub p: u64,
    /// `Some(e)` iff `det = p^e`
    pub p_power_exponent: Option<u32>,
}

pub fn cartan(d: &IntMatrix, p: u64) -> CartanData {
    let c = d.transpose_mul_self();
    let det = c.det();
    let exponent = p_power_exponent(&det, p);
    CartanData {
        cartan: c,
        det: det.to_string(),
        p,
        p_power_exponent: exponent,
    }
}

pub fn p_power_exponent(det: &BigInt, p: u64) -> Option<u32> {
    if det.is_zero() || det.is_negative() {
        return None;
    }
    let mut d = det.clone();
    let p = BigInt::from(p);
    let mut e = 0;
    while (&d % &p).is_zero() {
        d /= &p;
        e += 1;
    }
    if d.is_one() {
        Some(e)
    } else {
        None
    }
}
