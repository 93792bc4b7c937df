//! Simple H-modules in both characteristics, their characters and Brauer
//! characters, Frobenius-Schur indicators, and the H-level decomposition
//! and Cartan matrices with their orbit-block structure.
//!
//! Every simple arises by inducing a simple stabilizer module: for an
//! orbit representative x with stabilizer F_x and transversal T_x, the
//! space has basis `{t (x) e_j}` and `p_y # b` acts by
//! `t (x) v -> [y <| (b t) = x] (b t (x) v)`.
//!
//! Characteristic 0 is realized concretely over an auxiliary prime field
//! GF(q) with `q = 1 (mod exp F)` and `q` prime to `|F|`: the group
//! algebra is semisimple there and the fixed root-of-unity lift
//! identifies its simple modules with the ordinary ones exactly.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::bismash::{BasisId, Bismash};
use crate::brauer::{
    brauer_character, p_prime_exponent, solve_decomposition, CartanData, GroupBrauerChar, IntMatrix,
};
use crate::chartable::{character_table, CharTable};
use crate::cyclotomic::Cyc;
use crate::error::AlgebraError;
use crate::ffield::{is_prime, BrauerLift, FiniteField};
use crate::ffmat::{eigenvalue_lift_of_order, FfMat};
use crate::meataxe::{chop, regular_module, FfModule};
use crate::perm::{Perm, PermGroup};
use crate::ratmat::{qint, Q};

/// One orbit of the action of F on G, with everything induction needs.
pub struct OrbitBlock {
    /// index of the representative in G's element list
    pub rep: usize,
    /// G-element indices of the orbit members
    pub members: Vec<usize>,
    pub stabilizer: PermGroup,
    /// two-sided coset transversal of the stabilizer in F
    pub transversal: Vec<Perm>,
    /// F element index -> transversal position of its left coset
    coset_pos: Vec<usize>,
}

impl OrbitBlock {
    pub fn index_of_transversal(&self, f: &PermGroup, elem: &Perm) -> usize {
        self.coset_pos[f.index_of(elem).unwrap()]
    }
}

pub fn orbit_blocks(h: &Bismash) -> Vec<OrbitBlock> {
    let fg = h.factored_group();
    let f = fg.f();
    fg.orbits()
        .into_iter()
        .map(|o| {
            let stabilizer = PermGroup::from_elements(
                f.degree(),
                &o.stabilizer,
                &format!("Stab[{}]", o.representative),
            )
            .expect("stabilizers are subgroups");
            let mut coset_pos = vec![usize::MAX; f.order()];
            for (ti, t) in o.transversal.iter().enumerate() {
                for s in stabilizer.elements() {
                    coset_pos[f.index_of(&t.compose(s)).unwrap()] = ti;
                }
            }
            assert!(coset_pos.iter().all(|&p| p != usize::MAX));
            OrbitBlock {
                rep: fg.g().index_of(&o.representative).unwrap(),
                members: o
                    .members
                    .iter()
                    .map(|m| fg.g().index_of(m).unwrap())
                    .collect(),
                stabilizer,
                transversal: o.transversal,
                coset_pos,
            }
        })
        .collect()
}

/// Induce a stabilizer module to an H-module: one action matrix per
/// basis element of H, over the module's own field.
pub fn induce_module(h: &Bismash, block: &OrbitBlock, v: &FfModule) -> Vec<FfMat> {
    let fg = h.factored_group();
    let f = fg.f();
    let t_count = block.transversal.len();
    let dim = t_count * v.dim;
    h.basis_ids()
        .map(|id| {
            let (yi, bi) = h.components(id);
            let b = f.element(bi);
            let mut m = FfMat::zero(dim, dim);
            for (ti, t) in block.transversal.iter().enumerate() {
                let bt = b.compose(t);
                let bt_idx = f.index_of(&bt).unwrap();
                if fg.lhd_idx(yi, bt_idx) != block.rep {
                    continue;
                }
                let target = block.coset_pos[bt_idx];
                let h_elem = block.transversal[target].inverse().compose(&bt);
                let h_idx = block
                    .stabilizer
                    .index_of(&h_elem)
                    .expect("coset rewrite lands in the stabilizer");
                let rho = v.action_of(&block.stabilizer, h_idx);
                for r in 0..v.dim {
                    for c in 0..v.dim {
                        let val = rho.get(r, c);
                        if val != 0 {
                            m.set(target * v.dim + r, ti * v.dim + c, val);
                        }
                    }
                }
            }
            m
        })
        .collect()
}

/// Character value table indexed densely by basis id.
#[derive(Clone, Debug)]
pub struct HCharacter {
    pub orbit: usize,
    pub irr: usize,
    pub dim: usize,
    pub values: Vec<Cyc>,
}

impl HCharacter {
    pub fn dual(&self, h: &Bismash) -> HCharacter {
        let values = h
            .basis_ids()
            .map(|id| self.values[h.antipode(id) as usize].clone())
            .collect();
        HCharacter {
            orbit: self.orbit,
            irr: self.irr,
            dim: self.dim,
            values,
        }
    }

    pub fn equals(&self, other: &HCharacter) -> bool {
        self.values.len() == other.values.len()
            && self
                .values
                .iter()
                .zip(&other.values)
                .all(|(a, b)| a.equals(b))
    }

    pub fn is_self_dual(&self, h: &Bismash) -> bool {
        self.equals(&self.dual(h))
    }
}

/// The induction-formula value of `chi_x` at `p_y # a`: sum over the
/// transversal elements carrying y to x whose twist lands in F_x.
fn induced_value(
    h: &Bismash,
    block: &OrbitBlock,
    class_values: &dyn Fn(usize) -> Option<Cyc>,
    id: BasisId,
) -> Cyc {
    let fg = h.factored_group();
    let f = fg.f();
    let (yi, ai) = h.components(id);
    let a = f.element(ai);
    let mut acc = Cyc::zero();
    for t in &block.transversal {
        let t_idx = f.index_of(t).unwrap();
        if fg.lhd_idx(yi, t_idx) != block.rep {
            continue;
        }
        let conj = t.inverse().compose(a).compose(t);
        if let Some(s_idx) = block.stabilizer.index_of(&conj) {
            if let Some(v) = class_values(s_idx) {
                acc = acc.add(&v);
            }
        }
    }
    acc
}

// ---------------------------------------------------------------------
// characteristic 0
// ---------------------------------------------------------------------

pub struct CharZeroContext {
    /// auxiliary prime realizing characteristic 0 concretely
    pub q: u64,
    pub lift: BrauerLift,
    pub blocks: Vec<OrbitBlock>,
    pub tables: Vec<CharTable>,
    /// per orbit, per table row: an explicit module affording that row
    pub models: Vec<Vec<FfModule>>,
}

/// Smallest prime `q = 1 (mod e)` not dividing `|F|` (and odd).
fn auxiliary_prime(e: u64, f_order: usize) -> u64 {
    let mut q = e + 1;
    loop {
        if q > 2 && is_prime(q) && !(f_order as u64).is_multiple_of(q) {
            return q;
        }
        q += e.max(1);
    }
}

pub fn char_zero_context(h: &Bismash) -> Result<CharZeroContext, AlgebraError> {
    let fg = h.factored_group();
    let exp_f = fg.f().exponent();
    let q = auxiliary_prime(exp_f, fg.f().order());
    let lift = BrauerLift::new(q, exp_f)?;
    let blocks = orbit_blocks(h);
    let tables: Vec<CharTable> = blocks
        .iter()
        .map(|b| character_table(&b.stabilizer))
        .collect::<Result<_, _>>()?;
    // explicit models over GF(q): chop the regular module and match each
    // factor to its table row through the lift
    let models = blocks
        .iter()
        .zip(&tables)
        .map(|(block, table)| {
            let group = &block.stabilizer;
            let regular = regular_module(group, lift.field());
            let factors = chop(&regular, 0)?;
            if factors.len() != table.rows().len() {
                return Err(AlgebraError::TableCheck(format!(
                    "expected {} ordinary simples, chop found {}",
                    table.rows().len(),
                    factors.len()
                )));
            }
            let classes = group.conjugacy_classes();
            let all_classes: Vec<usize> = (0..classes.count()).collect();
            let mut by_row: Vec<Option<FfModule>> = vec![None; table.rows().len()];
            for (module, _) in factors {
                let bc = brauer_character(group, &module, &lift, &all_classes, &classes)?;
                let row = table
                    .rows()
                    .iter()
                    .position(|r| r.values.iter().zip(&bc.values).all(|(x, y)| x.equals(y)))
                    .ok_or_else(|| {
                        AlgebraError::TableCheck(
                            "lifted module character missing from the table".into(),
                        )
                    })?;
                assert!(by_row[row].is_none(), "factors must match rows bijectively");
                by_row[row] = Some(module);
            }
            Ok(by_row.into_iter().map(Option::unwrap).collect())
        })
        .collect::<Result<Vec<_>, AlgebraError>>()?;
    Ok(CharZeroContext {
        q,
        lift,
        blocks,
        tables,
        models,
    })
}

pub struct Char0Simple {
    pub orbit: usize,
    pub irr: usize,
    pub dim: usize,
    /// explicit induced action over GF(q), one matrix per basis id
    pub matrices: Vec<FfMat>,
    pub character: HCharacter,
}

/// All simple H-modules in characteristic 0, with the mandatory dual-path
/// verification: the induction formula must equal the lifted trace of the
/// explicit induced matrices on every basis element.
pub fn char0_simples(h: &Bismash, ctx: &CharZeroContext) -> Result<Vec<Char0Simple>, AlgebraError> {
    let mut out = Vec::new();
    for (oi, block) in ctx.blocks.iter().enumerate() {
        let table = &ctx.tables[oi];
        let classes = table.classes().clone();
        for (irr, row) in table.rows().iter().enumerate() {
            let model = &ctx.models[oi][irr];
            let matrices = induce_module(h, block, model);
            let dim = block.transversal.len() * model.dim;
            let values: Vec<Cyc> = crate::par::map_range(h.dim(), |id| {
                let id = id as BasisId;
                induced_value(
                    h,
                    block,
                    &|s_idx| Some(row.values[classes.class_of(s_idx)].clone()),
                    id,
                )
            });
            // trace oracle, convention independent
            for id in h.basis_ids() {
                let oracle =
                    trace_lift(h, &matrices[id as usize], ctx.lift.field(), &ctx.lift, id)?;
                if !oracle.equals(&values[id as usize]) {
                    return Err(AlgebraError::TheoremViolation(format!(
                        "character formula disagrees with the trace oracle at {}",
                        h.basis_label(id)
                    )));
                }
            }
            let character = HCharacter {
                orbit: oi,
                irr,
                dim,
                values,
            };
            out.push(Char0Simple {
                orbit: oi,
                irr,
                dim,
                matrices,
                character,
            });
        }
    }
    // simples are pairwise non-isomorphic: distinct characters
    for i in 0..out.len() {
        for j in i + 1..out.len() {
            if out[i].character.equals(&out[j].character) {
                return Err(AlgebraError::TheoremViolation(
                    "two simple modules share a character".into(),
                ));
            }
        }
    }
    Ok(out)
}

/// Exact characteristic-0 trace of the action of a basis element, read
/// off the explicit matrix by lifting its eigenvalue multiset.
pub fn trace_lift(
    h: &Bismash,
    mat: &FfMat,
    field: &FiniteField,
    lift: &BrauerLift,
    id: BasisId,
) -> Result<Cyc, AlgebraError> {
    if !h.is_bprime(id) {
        // nilpotent action: the square of the basis element is zero
        let sq = mat.mul(field, mat);
        if !sq.is_zero() {
            return Err(AlgebraError::TheoremViolation(format!(
                "{} is nilpotent in H but acts non-nilpotently",
                h.basis_label(id)
            )));
        }
        return Ok(Cyc::zero());
    }
    let (_, ai) = h.components(id);
    let m = h.factored_group().f().element(ai).order();
    eigenvalue_lift_of_order(mat, field, lift, m, false).map_err(AlgebraError::from)
}

/// Frobenius-Schur indicator in characteristic 0 via the integral:
/// evaluate the character at `m(Delta(Lambda))`.
pub fn indicator_char0(h: &Bismash, chi: &HCharacter) -> Result<i8, AlgebraError> {
    let nu_elem = h.integral_square()?;
    let mut acc = Cyc::zero();
    for (id, c) in nu_elem.terms() {
        acc = acc.add(&chi.values[id as usize].scale(c));
    }
    let value = acc
        .as_rational()
        .ok_or_else(|| AlgebraError::TheoremViolation("indicator is not rational".into()))?;
    let ok = [(-1, qint(-1)), (0, qint(0)), (1, qint(1))]
        .into_iter()
        .find(|(_, q)| *q == value);
    match ok {
        Some((v, _)) => Ok(v),
        None => Err(AlgebraError::TheoremViolation(format!(
            "indicator {value} outside {{-1, 0, 1}}"
        ))),
    }
}

// ---------------------------------------------------------------------
// characteristic p
// ---------------------------------------------------------------------

pub struct ModularContext {
    pub p: u64,
    /// p'-exponent of F; the working field is GF(p^ord_m(p))
    pub m: u64,
    pub lift: BrauerLift,
    pub blocks: Vec<OrbitBlock>,
    /// per orbit: p-regular class ids of the stabilizer
    pub p_regular: Vec<Vec<usize>>,
    /// per orbit: irreducible stabilizer modules with Brauer characters,
    /// sorted by (dimension, value row)
    pub ibr: Vec<Vec<(FfModule, GroupBrauerChar)>>,
}

pub fn modular_context(h: &Bismash, p: u64, seed: u64) -> Result<ModularContext, AlgebraError> {
    assert!(p != 2, "odd characteristic only");
    let fg = h.factored_group();
    let m = p_prime_exponent(fg.f(), p);
    let lift = BrauerLift::new(p, m)?;
    let blocks = orbit_blocks(h);
    let mut p_regular = Vec::new();
    let mut ibr = Vec::new();
    for block in &blocks {
        let group = &block.stabilizer;
        let classes = group.conjugacy_classes();
        let p_reg = classes.p_regular_classes(group, p);
        let regular = regular_module(group, lift.field());
        let factors = chop(&regular, seed)?;
        if factors.len() != p_reg.len() {
            return Err(AlgebraError::TheoremViolation(format!(
                "simple count {} != p-regular class count {} for {}",
                factors.len(),
                p_reg.len(),
                group.name()
            )));
        }
        let mut entries: Vec<(FfModule, GroupBrauerChar)> = factors
            .into_iter()
            .map(|(module, _)| {
                let bc = brauer_character(group, &module, &lift, &p_reg, &classes)?;
                Ok((module, bc))
            })
            .collect::<Result<_, AlgebraError>>()?;
        entries.sort_by(|(_, a), (_, b)| {
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
        p_regular.push(p_reg);
        ibr.push(entries);
    }
    Ok(ModularContext {
        p,
        m,
        lift,
        blocks,
        p_regular,
        ibr,
    })
}

/// Brauer character of an induced module: a value map on `B_p'`.
#[derive(Clone, Debug)]
pub struct BrauerHChar {
    pub orbit: usize,
    pub ibr: usize,
    pub dim: usize,
    pub values: BTreeMap<BasisId, Cyc>,
}

impl BrauerHChar {
    pub fn dual(&self, h: &Bismash) -> BrauerHChar {
        let values = self
            .values
            .iter()
            .map(|(&id, v)| (h.antipode(id), v.clone()))
            .collect();
        BrauerHChar {
            orbit: self.orbit,
            ibr: self.ibr,
            dim: self.dim,
            values,
        }
    }

    pub fn equals(&self, other: &BrauerHChar) -> bool {
        self.values.len() == other.values.len()
            && self
                .values
                .iter()
                .zip(&other.values)
                .all(|((i, a), (j, b))| i == j && a.equals(b))
    }

    pub fn is_self_dual(&self, h: &Bismash) -> bool {
        self.equals(&self.dual(h))
    }

    pub fn value_row(&self, ids: &[BasisId]) -> Vec<Cyc> {
        ids.iter().map(|id| self.values[id].clone()).collect()
    }
}

pub struct ModularSimple {
    pub orbit: usize,
    pub ibr: usize,
    pub dim: usize,
    pub matrices: Vec<FfMat>,
    pub brauer: BrauerHChar,
}

/// All simple H-modules in characteristic p, with the dual-path check:
/// the Brauer-character formula must match the eigenvalue lift of the
/// explicit induced matrices on every element of `B_p'`, and reduction
/// through the lift must reproduce the modular traces.
pub fn modular_simples(
    h: &Bismash,
    ctx: &ModularContext,
) -> Result<Vec<ModularSimple>, AlgebraError> {
    let field = ctx.lift.field().clone();
    let bpprime = h.bpprime_ids(ctx.p);
    let mut out = Vec::new();
    for (oi, block) in ctx.blocks.iter().enumerate() {
        let group = &block.stabilizer;
        let classes = group.conjugacy_classes();
        // p-regular class id -> position in the p-regular list
        let mut pos_of_class: BTreeMap<usize, usize> = BTreeMap::new();
        for (k, &c) in ctx.p_regular[oi].iter().enumerate() {
            pos_of_class.insert(c, k);
        }
        for (ibr_idx, (module, phi)) in ctx.ibr[oi].iter().enumerate() {
            let matrices = induce_module(h, block, module);
            let dim = block.transversal.len() * module.dim;
            let mut values = BTreeMap::new();
            for &id in &bpprime {
                let formula = induced_value(
                    h,
                    block,
                    &|s_idx| {
                        let c = classes.class_of(s_idx);
                        pos_of_class.get(&c).map(|&k| phi.values[k].clone())
                    },
                    id,
                );
                // dual path: lift the nonzero eigenvalues of the explicit
                // matrix
                let oracle = trace_lift(h, &matrices[id as usize], &field, &ctx.lift, id)?;
                if !formula.equals(&oracle) {
                    return Err(AlgebraError::TheoremViolation(format!(
                        "Brauer formula disagrees with the eigenvalue lift at {}",
                        h.basis_label(id)
                    )));
                }
                // reduction consistency: the lifted value reduces to the
                // modular trace
                let reduced = ctx.lift.reduce(&formula)?;
                if reduced != matrices[id as usize].trace(&field) {
                    return Err(AlgebraError::TheoremViolation(format!(
                        "reduced Brauer value differs from the modular trace at {}",
                        h.basis_label(id)
                    )));
                }
                values.insert(id, formula);
            }
            let brauer = BrauerHChar {
                orbit: oi,
                ibr: ibr_idx,
                dim,
                values,
            };
            out.push(ModularSimple {
                orbit: oi,
                ibr: ibr_idx,
                dim,
                matrices,
                brauer,
            });
        }
    }
    Ok(out)
}

/// Eigenvalue-multiset equality between `p_y # a` and `p_y # s` for the
/// p-regular part `s` of `a`, certified by equal characteristic
/// polynomials of the explicit actions.
pub fn hfactor_check(
    h: &Bismash,
    simple_matrices: &[FfMat],
    field: &FiniteField,
    id: BasisId,
    p: u64,
) -> bool {
    let (yi, ai) = h.components(id);
    let fg = h.factored_group();
    let a = fg.f().element(ai);
    let (_, s) = a.p_parts(p);
    let si = fg.f().index_of(&s).unwrap();
    let sid = h.basis_id(yi, si);
    let lhs = simple_matrices[id as usize].charpoly(field);
    let rhs = simple_matrices[sid as usize].charpoly(field);
    lhs == rhs
}

/// Modular Frobenius-Schur indicator: solve for an H-invariant bilinear
/// form and classify it. The invariance contract
/// `sum <h_1 v, h_2 w> = eps(h) <v, w>` is imposed for every basis
/// element of H.
pub fn indicator_modular(
    h: &Bismash,
    simple: &ModularSimple,
    field: &FiniteField,
) -> Result<i8, AlgebraError> {
    let n = simple.dim;
    let rows_per_h = n * n;
    let total_rows = h.dim() * rows_per_h;
    let mut sys = FfMat::zero(total_rows, n * n);
    for id in h.basis_ids() {
        let eps = h.counit(id);
        let base = id as usize * rows_per_h;
        for &(l, r) in h.coproduct(id) {
            let rho_l = &simple.matrices[l as usize];
            let rho_r = &simple.matrices[r as usize];
            // contribution of sum_k,l rho_l[k][i] B[k][l] rho_r[l][j]
            for i in 0..n {
                for j in 0..n {
                    let row = base + i * n + j;
                    for k in 0..n {
                        let lv = rho_l.get(k, i);
                        if lv == 0 {
                            continue;
                        }
                        for l2 in 0..n {
                            let rv = rho_r.get(l2, j);
                            if rv != 0 {
                                let cur = sys.get(row, k * n + l2);
                                sys.set(row, k * n + l2, field.add(cur, field.mul(lv, rv)));
                            }
                        }
                    }
                }
            }
        }
        if eps {
            for i in 0..n {
                for j in 0..n {
                    let row = base + i * n + j;
                    let cur = sys.get(row, i * n + j);
                    sys.set(row, i * n + j, field.sub(cur, 1));
                }
            }
        }
    }
    let kernel = sys.nullspace(field);
    match kernel.len() {
        0 => Ok(0),
        1 => {
            let b = FfMat::from_fn(n, n, |i, j| kernel[0][i * n + j]);
            // a nonzero invariant form on a simple module is non-degenerate
            if b.inverse(field).is_none() {
                return Err(AlgebraError::TheoremViolation(
                    "invariant form on a simple module is degenerate".into(),
                ));
            }
            let bt = b.transpose();
            if bt == b {
                Ok(1)
            } else if bt == b.scale(field, field.neg(1)) {
                Ok(-1)
            } else {
                Err(AlgebraError::TheoremViolation(
                    "invariant form neither symmetric nor skew".into(),
                ))
            }
        }
        d => Err(AlgebraError::FormSpaceDimension(d)),
    }
}

/// Full row rank certificate for a set of Brauer characters.
pub fn h_brauer_independence(
    h: &Bismash,
    chars: &[BrauerHChar],
    p: u64,
) -> Result<usize, AlgebraError> {
    let ids = h.bpprime_ids(p);
    let rows: Vec<Vec<Cyc>> = chars.iter().map(|c| c.value_row(&ids)).collect();
    let rational = crate::brauer::value_rows_to_rational(&rows);
    let rank = crate::ratmat::rank(&rational);
    if rank != chars.len() {
        return Err(AlgebraError::TheoremViolation(format!(
            "Brauer characters have rank {rank}, expected {}",
            chars.len()
        )));
    }
    Ok(rank)
}

/// H-level decomposition data: the block-diagonal matrix relating the
/// ordinary characters to the Brauer characters, computed two ways and
/// cross-checked, with the Cartan determinant certificate.
#[derive(Clone, Debug, Serialize)]
pub struct HDecompData {
    pub p: u64,
    /// row labels: (orbit, ordinary character index)
    pub row_labels: Vec<(usize, usize)>,
    /// column labels: (orbit, Brauer character index)
    pub col_labels: Vec<(usize, usize)>,
    pub dhat: IntMatrix,
    pub cartan: CartanData,
}

pub fn h_decomposition(
    h: &Bismash,
    ctx: &ModularContext,
    ordinary: &[Char0Simple],
    modular: &[ModularSimple],
) -> Result<HDecompData, AlgebraError> {
    let ids = h.bpprime_ids(ctx.p);
    let chi_rows: Vec<Vec<Cyc>> = ordinary
        .iter()
        .map(|s| {
            ids.iter()
                .map(|&id| s.character.values[id as usize].clone())
                .collect()
        })
        .collect();
    let phi_rows: Vec<Vec<Cyc>> = modular.iter().map(|s| s.brauer.value_row(&ids)).collect();
    let dhat = solve_decomposition(&chi_rows, &phi_rows)?;

    let row_labels: Vec<(usize, usize)> = ordinary.iter().map(|s| (s.orbit, s.irr)).collect();
    let col_labels: Vec<(usize, usize)> = modular.iter().map(|s| (s.orbit, s.ibr)).collect();

    // block structure: entries across different orbits must vanish
    for (i, &(ro, _)) in row_labels.iter().enumerate() {
        for (j, &(co, _)) in col_labels.iter().enumerate() {
            if ro != co && dhat.entries[i][j] != 0 {
                return Err(AlgebraError::TheoremViolation(format!(
                    "decomposition matrix is not orbit-block-diagonal at ({i}, {j})"
                )));
            }
        }
    }

    // independent per-orbit path: group-level decomposition of each
    // stabilizer, with the same lift
    for (oi, block) in ctx.blocks.iter().enumerate() {
        let table = character_table(&block.stabilizer)?;
        let restriction = table.restrict_to_p_regular(ctx.p);
        if restriction.class_ids != ctx.p_regular[oi] {
            return Err(AlgebraError::DecompositionSolve(
                "class order mismatch".into(),
            ));
        }
        let phi_group: Vec<Vec<Cyc>> = ctx.ibr[oi]
            .iter()
            .map(|(_, bc)| bc.values.clone())
            .collect();
        let d_group = solve_decomposition(&restriction.rows, &phi_group)?;
        // compare with the corresponding block of dhat
        for (i, &(ro, ri)) in row_labels.iter().enumerate() {
            if ro != oi {
                continue;
            }
            for (j, &(co, cj)) in col_labels.iter().enumerate() {
                if co != oi {
                    continue;
                }
                if dhat.entries[i][j] != d_group.entries[ri][cj] {
                    return Err(AlgebraError::TheoremViolation(format!(
                        "H-level and group-level decomposition numbers differ at orbit {oi} ({ri}, {cj})"
                    )));
                }
            }
        }
    }

    let cartan = crate::brauer::cartan(&dhat, ctx.p);
    if cartan.p_power_exponent.is_none() {
        return Err(AlgebraError::TheoremViolation(format!(
            "det(Cartan) = {} is not a power of {}",
            cartan.det, ctx.p
        )));
    }
    Ok(HDecompData {
        p: ctx.p,
        row_labels,
        col_labels,
        dhat,
        cartan,
    })
}

/// Every Brauer character is a rational-cyclotomic combination of the
/// restricted ordinary characters (solvability certificate).
pub fn h_lincom_check(
    h: &Bismash,
    ctx: &ModularContext,
    ordinary: &[Char0Simple],
    modular: &[ModularSimple],
) -> Result<(), AlgebraError> {
    let ids = h.bpprime_ids(ctx.p);
    let chi_rows: Vec<Vec<Cyc>> = ordinary
        .iter()
        .map(|s| {
            ids.iter()
                .map(|&id| s.character.values[id as usize].clone())
                .collect()
        })
        .collect();
    let chi_rat = crate::brauer::value_rows_to_rational(&chi_rows);
    let coords = if chi_rat.is_empty() {
        0
    } else {
        chi_rat[0].len()
    };
    // transpose: columns are the restricted ordinary characters
    let a: Vec<Vec<Q>> = (0..coords)
        .map(|i| chi_rat.iter().map(|r| r[i].clone()).collect())
        .collect();
    let mut aug_rank_base = crate::ratmat::rank(&a);
    let _ = &mut aug_rank_base;
    for simple in modular {
        let phi_row = vec![simple.brauer.value_row(&ids)];
        let mut all_rows = chi_rows.clone();
        all_rows.extend(phi_row);
        let rat = crate::brauer::value_rows_to_rational(&all_rows);
        let (chi_part, phi_part) = rat.split_at(chi_rows.len());
        let a: Vec<Vec<Q>> = (0..coords)
            .map(|i| chi_part.iter().map(|r| r[i].clone()).collect())
            .collect();
        let b: Vec<Q> = (0..coords).map(|i| phi_part[0][i].clone()).collect();
        // consistency of A y = b (solution need not be unique)
        let mut aug: Vec<Vec<Q>> = a
            .iter()
            .zip(&b)
            .map(|(row, rhs)| {
                let mut r = row.clone();
                r.push(rhs.clone());
                r
            })
            .collect();
        let pivots = crate::ratmat::rref(&mut aug);
        if pivots.contains(&chi_rows.len()) {
            return Err(AlgebraError::TheoremViolation(format!(
                "Brauer character ({}, {}) is not a combination of restricted ordinary characters",
                simple.orbit, simple.ibr
            )));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------
// reports
// ---------------------------------------------------------------------

/// Per-simple record for JSON output.
#[derive(Clone, Debug, Serialize)]
pub struct SimpleReport {
    pub orbit_rep: String,
    pub stabilizer_order: usize,
    pub dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub indicator: Option<i8>,
    pub self_dual: bool,
    /// nonzero character values keyed by basis label
    pub character: BTreeMap<String, String>,
}

pub fn char0_report(
    h: &Bismash,
    ctx: &CharZeroContext,
    simples: &[Char0Simple],
    with_indicators: bool,
) -> Result<Vec<SimpleReport>, AlgebraError> {
    simples
        .iter()
        .map(|s| {
            let indicator = if with_indicators {
                Some(indicator_char0(h, &s.character)?)
            } else {
                None
            };
            Ok(SimpleReport {
                orbit_rep: h
                    .factored_group()
                    .g()
                    .element(ctx.blocks[s.orbit].rep)
                    .to_string(),
                stabilizer_order: ctx.blocks[s.orbit].stabilizer.order(),
                dim: s.dim,
                indicator,
                self_dual: s.character.is_self_dual(h),
                character: h
                    .basis_ids()
                    .filter(|&id| !s.character.values[id as usize].is_zero())
                    .map(|id| {
                        (
                            h.basis_label(id),
                            s.character.values[id as usize].to_string(),
                        )
                    })
                    .collect(),
            })
        })
        .collect()
}

pub fn modular_report(
    h: &Bismash,
    ctx: &ModularContext,
    simples: &[ModularSimple],
    with_indicators: bool,
) -> Result<Vec<SimpleReport>, AlgebraError> {
    let field = ctx.lift.field().clone();
    simples
        .iter()
        .map(|s| {
            let indicator = if with_indicators {
                Some(indicator_modular(h, s, &field)?)
            } else {
                None
            };
            Ok(SimpleReport {
                orbit_rep: h
                    .factored_group()
                    .g()
                    .element(ctx.blocks[s.orbit].rep)
                    .to_string(),
                stabilizer_order: ctx.blocks[s.orbit].stabilizer.order(),
                dim: s.dim,
                indicator,
                self_dual: s.brauer.is_self_dual(h),
                character: s
                    .brauer
                    .values
                    .iter()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(&id, v)| (h.basis_label(id), v.to_string()))
                    .collect(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factored::sn_family;
    use crate::perm::DEFAULT_ELEMENT_CAP;

    fn bismash_n(n: usize) -> Bismash {
        Bismash::new(sn_family(n, DEFAULT_ELEMENT_CAP).unwrap()).unwrap()
    }

    pub(crate) fn f21() -> Bismash {
        let x = Perm::parse_cycles("(1 2 3 4 5 6 7)", 7).unwrap();
        let a = Perm::parse_cycles("(1 2 4)(3 6 5)", 7).unwrap();
        let q = PermGroup::enumerate(vec![x.clone(), a.clone()], 7, "F21", DEFAULT_ELEMENT_CAP)
            .unwrap();
        let f = PermGroup::enumerate(vec![a], 7, "C3", DEFAULT_ELEMENT_CAP).unwrap();
        let g = PermGroup::enumerate(vec![x], 7, "C7", DEFAULT_ELEMENT_CAP).unwrap();
        Bismash::new(crate::factored::FactoredGroup::build(q, f, g).unwrap()).unwrap()
    }

    #[test]
    fn h3_char0_simples() {
        let h = bismash_n(3);
        let ctx = char_zero_context(&h).unwrap();
        let simples = char0_simples(&h, &ctx).unwrap();
        let mut dims: Vec<usize> = simples.iter().map(|s| s.dim).collect();
        dims.sort();
        assert_eq!(dims, vec![1, 1, 2]);
        let total: usize = simples.iter().map(|s| s.dim * s.dim).sum();
        assert_eq!(total, h.dim());
        // the 2-dimensional simple has character value 1 at p_z # e
        let two = simples.iter().find(|s| s.dim == 2).unwrap();
        let z = h
            .factored_group()
            .g()
            .index_of(&Perm::parse_cycles("(1 2 3)", 3).unwrap())
            .unwrap();
        let id = h.basis_id(z, h.factored_group().f().identity_index());
        assert!(two.character.values[id as usize].equals(&Cyc::one()));
    }

    #[test]
    fn h4_dimension_count() {
        let h = bismash_n(4);
        let ctx = char_zero_context(&h).unwrap();
        let simples = char0_simples(&h, &ctx).unwrap();
        let total: usize = simples.iter().map(|s| s.dim * s.dim).sum();
        assert_eq!(total, 24);
        // 3 simples from the fixed point, 2 from the size-3 orbit
        assert_eq!(simples.len(), 5);
    }

    #[test]
    fn character_support_and_projection_values() {
        let h = bismash_n(4);
        let ctx = char_zero_context(&h).unwrap();
        let simples = char0_simples(&h, &ctx).unwrap();
        let fg = h.factored_group();
        for s in &simples {
            let block = &ctx.blocks[s.orbit];
            // support constraint: values vanish off the orbit
            for id in h.basis_ids() {
                let (yi, _) = h.components(id);
                if !block.members.contains(&yi) {
                    assert!(s.character.values[id as usize].is_zero());
                }
            }
            // chi(p_y # 1) counts transversal elements carrying y to x,
            // weighted by the degree; summing over y gives the dimension
            let mut total = Cyc::zero();
            for yi in 0..fg.g().order() {
                let id = h.basis_id(yi, fg.f().identity_index());
                total = total.add(&s.character.values[id as usize]);
            }
            assert!(total.equals(&Cyc::from_int(s.dim as i64)));
        }
    }

    #[test]
    fn dual_is_an_involution_and_permutes_characters() {
        let h = bismash_n(4);
        let ctx = char_zero_context(&h).unwrap();
        let simples = char0_simples(&h, &ctx).unwrap();
        for s in &simples {
            let dual = s.character.dual(&h);
            assert!(dual.dual(&h).equals(&s.character));
            // the dual of a simple character is again in the list
            assert_eq!(
                simples.iter().filter(|t| t.character.equals(&dual)).count(),
                1
            );
        }
    }

    #[test]
    fn indicators_char0_sn_family() {
        for n in [3usize, 4] {
            let h = bismash_n(n);
            let ctx = char_zero_context(&h).unwrap();
            let simples = char0_simples(&h, &ctx).unwrap();
            for s in &simples {
                assert_eq!(indicator_char0(&h, &s.character).unwrap(), 1, "H_{n}");
                assert!(s.character.is_self_dual(&h));
            }
        }
    }

    #[test]
    fn f21_has_indicator_zero_simples() {
        let h = f21();
        let ctx = char_zero_context(&h).unwrap();
        let simples = char0_simples(&h, &ctx).unwrap();
        let mut indicators: Vec<i8> = simples
            .iter()
            .map(|s| indicator_char0(&h, &s.character).unwrap())
            .collect();
        indicators.sort();
        // trivial module has indicator +1; the two linear characters of
        // C3 and the two 3-dimensional simples pair off under duality
        assert_eq!(indicators, vec![0, 0, 0, 0, 1]);
        for s in &simples {
            let nu = indicator_char0(&h, &s.character).unwrap();
            assert_eq!(nu != 0, s.character.is_self_dual(&h));
        }
    }

    #[test]
    fn trivial_module_indicator_is_one() {
        let h = bismash_n(3);
        let ctx = char_zero_context(&h).unwrap();
        let simples = char0_simples(&h, &ctx).unwrap();
        // the trivial module is the 1-dimensional simple from the fixed
        // point with the trivial stabilizer character
        let trivial = simples
            .iter()
            .find(|s| {
                s.dim == 1
                    && h.basis_ids().all(|id| {
                        let (yi, _) = h.components(id);
                        let expected = if yi == h.factored_group().g().identity_index() {
                            Cyc::one()
                        } else {
                            Cyc::zero()
                        };
                        s.character.values[id as usize].equals(&expected)
                    })
            })
            .expect("trivial character exists");
        assert_eq!(indicator_char0(&h, &trivial.character).unwrap(), 1);
        assert!(trivial.character.is_self_dual(&h));
    }

    #[test]
    fn modular_simples_h3() {
        let h = bismash_n(3);
        let ctx = modular_context(&h, 3, 0).unwrap();
        let simples = modular_simples(&h, &ctx).unwrap();
        // F_e = S2 at p = 3 is semisimple (2 simples); F_z is trivial
        assert_eq!(simples.len(), 3);
        let mut dims: Vec<usize> = simples.iter().map(|s| s.dim).collect();
        dims.sort();
        assert_eq!(dims, vec![1, 1, 2]);
        // the 2-dim simple's Brauer character at p_z # e lifts to 1
        let two = simples.iter().find(|s| s.dim == 2).unwrap();
        let z = h
            .factored_group()
            .g()
            .index_of(&Perm::parse_cycles("(1 2 3)", 3).unwrap())
            .unwrap();
        let id = h.basis_id(z, h.factored_group().f().identity_index());
        assert!(two.brauer.values[&id].equals(&Cyc::one()));
    }

    #[test]
    fn modular_indicators_h3_h4() {
        for (n, ps) in [(3usize, vec![3u64, 5, 7]), (4, vec![5, 7])] {
            let h = bismash_n(n);
            for p in ps {
                let ctx = modular_context(&h, p, 0).unwrap();
                let field = ctx.lift.field().clone();
                let simples = modular_simples(&h, &ctx).unwrap();
                for s in &simples {
                    assert_eq!(
                        indicator_modular(&h, s, &field).unwrap(),
                        1,
                        "H_{n} at p = {p}"
                    );
                }
            }
        }
    }

    #[test]
    fn modular_indicator_zero_for_non_self_dual() {
        let h = f21();
        let ctx = modular_context(&h, 5, 0).unwrap();
        let field = ctx.lift.field().clone();
        let simples = modular_simples(&h, &ctx).unwrap();
        let mut indicators: Vec<i8> = simples
            .iter()
            .map(|s| indicator_modular(&h, s, &field).unwrap())
            .collect();
        indicators.sort();
        assert_eq!(indicators, vec![0, 0, 0, 0, 1]);
        for s in &simples {
            let nu = indicator_modular(&h, s, &field).unwrap();
            assert_eq!(nu != 0, s.brauer.is_self_dual(&h));
        }
    }

    #[test]
    fn h_decomposition_h3_identity() {
        let h = bismash_n(3);
        let ctx0 = char_zero_context(&h).unwrap();
        let ordinary = char0_simples(&h, &ctx0).unwrap();
        let ctx = modular_context(&h, 3, 0).unwrap();
        let modular = modular_simples(&h, &ctx).unwrap();
        let data = h_decomposition(&h, &ctx, &ordinary, &modular).unwrap();
        assert_eq!(data.dhat.rows, 3);
        assert_eq!(data.dhat.cols, 3);
        // p = 3 is prime to |F_x| for every stabilizer: identity blocks
        let perm_rows: Vec<i64> = data.dhat.entries.iter().map(|r| r.iter().sum()).collect();
        assert_eq!(perm_rows, vec![1, 1, 1]);
        assert_eq!(data.cartan.p_power_exponent, Some(0));
    }

    #[test]
    fn brauer_independence_and_duplicates() {
        let h = bismash_n(3);
        let ctx = modular_context(&h, 3, 0).unwrap();
        let simples = modular_simples(&h, &ctx).unwrap();
        let chars: Vec<BrauerHChar> = simples.iter().map(|s| s.brauer.clone()).collect();
        assert_eq!(h_brauer_independence(&h, &chars, 3).unwrap(), 3);
        let mut dup = chars.clone();
        dup.push(chars[0].clone());
        assert!(h_brauer_independence(&h, &dup, 3).is_err());
        // a single character has rank 1
        assert_eq!(h_brauer_independence(&h, &chars[..1], 3).unwrap(), 1);
    }

    /// Dihedral factorization Q = C6 * C2 of the 12-element dihedral
    /// group; F = C6 has order-6 elements, giving mixed p-parts at p = 3.
    fn d6() -> Bismash {
        let r = Perm::parse_cycles("(1 2 3 4 5 6)", 6).unwrap();
        let f = Perm::parse_cycles("(2 6)(3 5)", 6).unwrap();
        let q =
            PermGroup::enumerate(vec![r.clone(), f.clone()], 6, "D6", DEFAULT_ELEMENT_CAP).unwrap();
        assert_eq!(q.order(), 12);
        let c6 = PermGroup::enumerate(vec![r], 6, "C6", DEFAULT_ELEMENT_CAP).unwrap();
        let c2 = PermGroup::enumerate(vec![f], 6, "C2", DEFAULT_ELEMENT_CAP).unwrap();
        Bismash::new(crate::factored::FactoredGroup::build(q, c6, c2).unwrap()).unwrap()
    }

    #[test]
    fn hfactor_with_genuinely_mixed_orders() {
        // order-6 elements a = u s with u of order 3 and s of order 2:
        // rho(p_y # a) and rho(p_y # s) must share their characteristic
        // polynomial even though the two factors do not commute in H
        let h = d6();
        let ctx = modular_context(&h, 3, 0).unwrap();
        let field = ctx.lift.field().clone();
        let simples = modular_simples(&h, &ctx).unwrap();
        let fg = h.factored_group();
        let mut mixed_seen = 0;
        for s in &simples {
            for id in h.bprime_ids() {
                let (_, ai) = h.components(id);
                let order = fg.f().element(ai).order();
                if !order.is_multiple_of(3) {
                    continue;
                }
                if order == 6 {
                    mixed_seen += 1;
                }
                assert!(hfactor_check(&h, &s.matrices, &field, id, 3));
            }
        }
        assert!(
            mixed_seen > 0,
            "the corpus member must exercise mixed orders"
        );
    }

    /// The 2-dimensional uniserial module of S3 in characteristic 3
    /// (trivial socle, sign top), transported onto the given stabilizer
    /// group's generator list.
    fn uniserial_s3_module(stab: &PermGroup, field: &crate::ffield::FiniteField) -> FfModule {
        assert_eq!(stab.order(), 6);
        assert_eq!(field.p(), 3);
        let degree = stab.degree();
        let gens = vec![
            Perm::parse_cycles("(1 2)", degree).unwrap(),
            Perm::parse_cycles("(1 2 3)", degree).unwrap(),
        ];
        let std_group = PermGroup::enumerate(gens, degree, "S3std", DEFAULT_ELEMENT_CAP).unwrap();
        // (1 2) -> diag(1, -1), (1 2 3) -> unipotent Jordan block
        let m_s = FfMat::from_fn(2, 2, |i, j| [[1, 0], [0, 2]][i][j]);
        let m_t = FfMat::from_fn(2, 2, |i, j| [[1, 1], [0, 1]][i][j]);
        let std_module = FfModule::new(field.clone(), 2, vec![m_s, m_t]);
        assert!(std_module.verify_group_relations(&std_group, 30, 1));
        let gens = stab
            .generators()
            .iter()
            .map(|g| std_module.action_of(&std_group, std_group.index_of(g).unwrap()))
            .collect();
        let module = FfModule::new(field.clone(), 2, gens);
        assert!(module.verify_group_relations(stab, 30, 2));
        module
    }

    #[test]
    fn inducing_an_indecomposable_gives_an_indecomposable() {
        // H_4 at p = 3: the stabilizer of the fixed point is S3; inducing
        // its 2-dim uniserial module yields a non-simple H-module whose
        // endomorphism ring is the scalars
        let h = bismash_n(4);
        let ctx = modular_context(&h, 3, 0).unwrap();
        let field = ctx.lift.field().clone();
        let block0 = &ctx.blocks[0];
        assert_eq!(block0.stabilizer.order(), 6);
        let w = uniserial_s3_module(&block0.stabilizer, &field);
        let matrices = induce_module(&h, block0, &w);
        let dim = block0.transversal.len() * 2;
        // commutant dimension 1 = indecomposable with End = k
        let as_module = FfModule::new(field.clone(), dim, matrices.clone());
        let commutant = commutant_dimension(&as_module);
        assert_eq!(commutant, 1);
        // and it is not simple: it has two composition factors
        let factors = chop(&as_module, 3).unwrap();
        let total: usize = factors.iter().map(|(_, m)| m).sum();
        assert_eq!(total, 2);
    }

    fn commutant_dimension(m: &FfModule) -> usize {
        let f = &m.field;
        let n = m.dim;
        let rows = m.gens.len() * n * n;
        let mut sys = FfMat::zero(rows, n * n);
        let mut r = 0;
        for g in &m.gens {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let cur = sys.get(r, i * n + k);
                        sys.set(r, i * n + k, f.add(cur, g.get(k, j)));
                        let cur = sys.get(r, k * n + j);
                        sys.set(r, k * n + j, f.sub(cur, g.get(i, k)));
                    }
                    r += 1;
                }
            }
        }
        sys.nullspace(f).len()
    }

    #[test]
    fn brauer_additivity_over_composition_factors() {
        // Brauer character of a non-simple induced module equals the sum
        // over its composition factors
        let h = bismash_n(4);
        let p = 3;
        let ctx = modular_context(&h, p, 0).unwrap();
        let field = ctx.lift.field().clone();
        let simples = modular_simples(&h, &ctx).unwrap();
        let block0 = &ctx.blocks[0];
        let w = uniserial_s3_module(&block0.stabilizer, &field);
        let matrices = induce_module(&h, block0, &w);
        let dim = block0.transversal.len() * 2;

        // formula path: the group Brauer character of W is additive, and
        // the induced value map extends it
        let classes = block0.stabilizer.conjugacy_classes();
        let phi_w = crate::brauer::brauer_character(
            &block0.stabilizer,
            &w,
            &ctx.lift,
            &ctx.p_regular[0],
            &classes,
        )
        .unwrap();
        let mut pos_of_class = BTreeMap::new();
        for (k, &c) in ctx.p_regular[0].iter().enumerate() {
            pos_of_class.insert(c, k);
        }
        let bpprime = h.bpprime_ids(p);
        let formula: BTreeMap<BasisId, Cyc> = bpprime
            .iter()
            .map(|&id| {
                let v = induced_value(
                    &h,
                    block0,
                    &|s_idx| {
                        let c = classes.class_of(s_idx);
                        pos_of_class.get(&c).map(|&k| phi_w.values[k].clone())
                    },
                    id,
                );
                (id, v)
            })
            .collect();

        // factor path: chop the induced module as an H-module and match
        // factors against the known simples
        let as_module = FfModule::new(field.clone(), dim, matrices);
        let factors = chop(&as_module, 11).unwrap();
        let mut acc: BTreeMap<BasisId, Cyc> = bpprime.iter().map(|&id| (id, Cyc::zero())).collect();
        for (factor, mult) in &factors {
            let matched = simples
                .iter()
                .find(|s| {
                    s.dim == factor.dim
                        && crate::meataxe::is_isomorphic(
                            &FfModule::new(field.clone(), s.dim, s.matrices.clone()),
                            factor,
                        )
                        .unwrap_or(false)
                })
                .expect("every composition factor is one of the simples");
            for (&id, slot) in acc.iter_mut() {
                let term = matched.brauer.values[&id].scale(&qint(*mult as i64));
                *slot = slot.add(&term);
            }
        }
        for &id in &bpprime {
            assert!(
                formula[&id].equals(&acc[&id]),
                "additivity fails at {}",
                h.basis_label(id)
            );
        }
    }

    #[test]
    fn hfactor_on_pure_p_elements() {
        // p = 3 on H_4: order-3 elements of F = S3 have trivial p-regular
        // part, so rho(p_y # a) and rho(p_y # 1) share eigenvalues
        let h = bismash_n(4);
        let ctx = modular_context(&h, 3, 0).unwrap();
        let field = ctx.lift.field().clone();
        let simples = modular_simples(&h, &ctx).unwrap();
        for s in &simples {
            for id in h.bprime_ids() {
                let (_, ai) = h.components(id);
                if !h.factored_group().f().element(ai).order().is_multiple_of(3) {
                    continue;
                }
                assert!(hfactor_check(&h, &s.matrices, &field, id, 3));
            }
        }
    }
}
