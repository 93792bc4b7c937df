//! Factorizable groups `Q = FG` with unique factorization `q = ax`
//! (`a` in F, `x` in G) and the induced mutual actions
//! `xa = (x |> a)(x <| a)`. All tables are materialized and every action
//! axiom is checked exhaustively at construction time.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::GroupError;
use crate::perm::{orbits_and_stabilizers, Orbit, Perm, PermGroup, DEFAULT_ELEMENT_CAP};

#[derive(Clone)]
pub struct FactoredGroup {
    q: PermGroup,
    f: PermGroup,
    g: PermGroup,
    /// Q-element index -> (F index, G index) of the unique factorization
    factorization: Vec<(usize, usize)>,
    /// (G index, F index) -> F index of `x |> a`
    rhd_table: Vec<usize>,
    /// (G index, F index) -> G index of `x <| a`
    lhd_table: Vec<usize>,
    name: String,
}

impl FactoredGroup {
    pub fn build(q: PermGroup, f: PermGroup, g: PermGroup) -> Result<Self, GroupError> {
        if !f.is_subgroup_of(&q) {
            return Err(GroupError::NotSubgroup(f.name().to_string()));
        }
        if !g.is_subgroup_of(&q) {
            return Err(GroupError::NotSubgroup(g.name().to_string()));
        }
        if f.order() * g.order() != q.order() {
            return Err(GroupError::NotFactorizable(format!(
                "|F|*|G| = {}*{} != |Q| = {}",
                f.order(),
                g.order(),
                q.order()
            )));
        }
        // exhaustive factorization table; any collision shows the
        // factorization is not unique (equivalently F and G intersect)
        let mut seen: HashMap<Perm, (usize, usize)> = HashMap::new();
        for (ai, a) in f.elements().iter().enumerate() {
            for (xi, x) in g.elements().iter().enumerate() {
                let prod = a.compose(x);
                if seen.insert(prod, (ai, xi)).is_some() {
                    return Err(GroupError::NotFactorizable(
                        "product map F x G -> Q is not injective".into(),
                    ));
                }
            }
        }
        let mut factorization = Vec::with_capacity(q.order());
        for elem in q.elements() {
            match seen.get(elem) {
                Some(&pair) => factorization.push(pair),
                None => {
                    return Err(GroupError::NotFactorizable(
                        "product map F x G -> Q is not surjective".into(),
                    ))
                }
            }
        }
        // mutual action tables from x * a = (x |> a)(x <| a)
        let nf = f.order();
        let ng = g.order();
        let mut rhd_table = vec![0usize; ng * nf];
        let mut lhd_table = vec![0usize; ng * nf];
        for (xi, x) in g.elements().iter().enumerate() {
            for (ai, a) in f.elements().iter().enumerate() {
                let prod = x.compose(a);
                let qi = q.index_of(&prod).ok_or_else(|| GroupError::NotAMember {
                    group: q.name().to_string(),
                })?;
                let (fa, gx) = factorization[qi];
                rhd_table[xi * nf + ai] = fa;
                lhd_table[xi * nf + ai] = gx;
            }
        }
        let name = format!("{} = {}*{}", q.name(), f.name(), g.name());
        let fg = FactoredGroup {
            q,
            f,
            g,
            factorization,
            rhd_table,
            lhd_table,
            name,
        };
        fg.verify_actions()?;
        Ok(fg)
    }

    /// Exhaustive verification of the structure identities.
    fn verify_actions(&self) -> Result<(), GroupError> {
        let f = &self.f;
        let g = &self.g;
        let id_f = f.identity_index();
        let id_g = g.identity_index();
        for xi in 0..g.order() {
            // x <| 1 = x, x |> 1 = 1
            if self.lhd_idx(xi, id_f) != xi || self.rhd_idx(xi, id_f) != id_f {
                return Err(GroupError::ActionAxiom(
                    "identity of F must act trivially".into(),
                ));
            }
        }
        for ai in 0..f.order() {
            // 1 <| a = 1 and 1 |> a = a
            if self.lhd_idx(id_g, ai) != id_g || self.rhd_idx(id_g, ai) != ai {
                return Err(GroupError::ActionAxiom("1 <| a = 1 and 1 |> a = a".into()));
            }
        }
        for (xi, x) in g.elements().iter().enumerate() {
            for (ai, a) in f.elements().iter().enumerate() {
                // defining identity x*a = (x |> a)(x <| a)
                let lhs = x.compose(a);
                let rhs = f
                    .element(self.rhd_idx(xi, ai))
                    .compose(g.element(self.lhd_idx(xi, ai)));
                if lhs != rhs {
                    return Err(GroupError::ActionAxiom("x*a = (x |> a)(x <| a)".into()));
                }
                for (bi, b) in f.elements().iter().enumerate() {
                    let abi = f
                        .index_of(&a.compose(b))
                        .ok_or_else(|| GroupError::NotAMember { group: "F".into() })?;
                    // <| is a right action
                    if self.lhd_idx(self.lhd_idx(xi, ai), bi) != self.lhd_idx(xi, abi) {
                        return Err(GroupError::ActionAxiom("(x <| a) <| b = x <| ab".into()));
                    }
                    // |> cocycle: x |> ab = (x |> a)((x <| a) |> b)
                    let lhs = f.element(self.rhd_idx(xi, abi)).clone();
                    let rhs = f
                        .element(self.rhd_idx(xi, ai))
                        .compose(f.element(self.rhd_idx(self.lhd_idx(xi, ai), bi)));
                    if lhs != rhs {
                        return Err(GroupError::ActionAxiom(
                            "x |> ab = (x |> a)((x <| a) |> b)".into(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn q(&self) -> &PermGroup {
        &self.q
    }

    pub fn f(&self) -> &PermGroup {
        &self.f
    }

    pub fn g(&self) -> &PermGroup {
        &self.g
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn factorize(&self, q: &Perm) -> Result<(Perm, Perm), GroupError> {
        let qi = self.q.index_of(q).ok_or_else(|| GroupError::NotAMember {
            group: self.q.name().to_string(),
        })?;
        let (ai, xi) = self.factorization[qi];
        Ok((self.f.element(ai).clone(), self.g.element(xi).clone()))
    }

    pub fn rhd_idx(&self, xi: usize, ai: usize) -> usize {
        self.rhd_table[xi * self.f.order() + ai]
    }

    pub fn lhd_idx(&self, xi: usize, ai: usize) -> usize {
        self.lhd_table[xi * self.f.order() + ai]
    }

    /// `x |> a`, the F-component of `xa`.
    pub fn rhd(&self, x: &Perm, a: &Perm) -> Result<Perm, GroupError> {
        let xi = self.g.index_of(x).ok_or_else(|| GroupError::NotAMember {
            group: self.g.name().to_string(),
        })?;
        let ai = self.f.index_of(a).ok_or_else(|| GroupError::NotAMember {
            group: self.f.name().to_string(),
        })?;
        Ok(self.f.element(self.rhd_idx(xi, ai)).clone())
    }

    /// `x <| a`, the G-component of `xa`; a right action of F on G.
    pub fn lhd(&self, x: &Perm, a: &Perm) -> Result<Perm, GroupError> {
        let xi = self.g.index_of(x).ok_or_else(|| GroupError::NotAMember {
            group: self.g.name().to_string(),
        })?;
        let ai = self.f.index_of(a).ok_or_else(|| GroupError::NotAMember {
            group: self.f.name().to_string(),
        })?;
        Ok(self.g.element(self.lhd_idx(xi, ai)).clone())
    }

    /// Orbits of the right action `<|` of F on G, with stabilizers and
    /// two-sided coset transversals.
    pub fn orbits(&self) -> Vec<Orbit<Perm>> {
        orbits_and_stabilizers(&self.f, self.g.elements(), |x, a| {
            self.lhd(x, a).expect("table covers G x F")
        })
        .expect("the <| table is a verified right action")
    }

    pub fn summary(&self) -> FactoredGroupReport {
        let orbits = self.orbits();
        FactoredGroupReport {
            name: self.name.clone(),
            degree: self.q.degree(),
            order_q: self.q.order(),
            order_f: self.f.order(),
            order_g: self.g.order(),
            orbits: orbits
                .iter()
                .map(|o| OrbitReport {
                    representative: o.representative.to_string(),
                    size: o.members.len(),
                    stabilizer_order: o.stabilizer.len(),
                    members: o.members.iter().map(|m| m.to_string()).collect(),
                })
                .collect(),
        }
    }
}

/// JSON description consumed by the `group` subcommand.
#[derive(Clone, Debug, Serialize)]
pub struct FactoredGroupReport {
    pub name: String,
    pub degree: usize,
    pub order_q: usize,
    pub order_f: usize,
    pub order_g: usize,
    pub orbits: Vec<OrbitReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitReport {
    pub representative: String,
    pub size: usize,
    pub stabilizer_order: usize,
    pub members: Vec<String>,
}

/// The factorization `S_n = S_{n-1} C_n`: `F = S_{n-1}` fixes the point
/// `n`, `G = C_n` is generated by the n-cycle `(1 2 ... n)`. The bismash
/// product built on it is `H_n = E^{C_n} # E S_{n-1}`.
pub fn sn_family(n: usize, cap: usize) -> Result<FactoredGroup, GroupError> {
    assert!(n >= 2, "the family starts at n = 2");
    let mut q_gens = vec![];
    let mut f_gens = vec![];
    let cycle: Vec<usize> = (1..=n).collect();
    let cycle_str = format!(
        "({})",
        cycle
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    );
    q_gens.push(Perm::parse_cycles("(1 2)", n).unwrap());
    q_gens.push(Perm::parse_cycles(&cycle_str, n).unwrap());
    if n > 2 {
        f_gens.push(Perm::parse_cycles("(1 2)", n).unwrap());
    }
    if n > 3 {
        let sub: Vec<usize> = (1..n).collect();
        let sub_str = format!(
            "({})",
            sub.iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        );
        f_gens.push(Perm::parse_cycles(&sub_str, n).unwrap());
    }
    let q = PermGroup::enumerate(q_gens, n, &format!("S{n}"), cap)?;
    let f = PermGroup::enumerate(f_gens, n, &format!("S{}", n - 1), cap)?;
    let g = PermGroup::enumerate(
        vec![Perm::parse_cycles(&cycle_str, n).unwrap()],
        n,
        &format!("C{n}"),
        cap,
    )?;
    FactoredGroup::build(q, f, g)
}

/// Parse the three-block generator file format: one generator per line in
/// cycle notation, blank lines separating the Q, F, G blocks. The degree
/// is the largest point mentioned anywhere in the file.
pub fn parse_group_file(text: &str) -> Result<FactoredGroup, GroupError> {
    parse_group_file_with_cap(text, DEFAULT_ELEMENT_CAP)
}

pub fn parse_group_file_with_cap(text: &str, cap: usize) -> Result<FactoredGroup, GroupError> {
    let blocks = split_blocks(text);
    if blocks.len() != 3 {
        return Err(GroupError::CycleParse(format!(
            "expected 3 generator blocks (Q, F, G), found {}",
            blocks.len()
        )));
    }
    let degree = max_point(text)?;
    let mut groups = Vec::new();
    for (block, name) in blocks.iter().zip(["Q", "F", "G"]) {
        groups.push(parse_block(block, degree, name, cap)?);
    }
    let g = groups.pop().unwrap();
    let f = groups.pop().unwrap();
    let q = groups.pop().unwrap();
    FactoredGroup::build(q, f, g)
}

/// Parse a single-block generator file as one permutation group.
pub fn parse_single_group_file(text: &str) -> Result<PermGroup, GroupError> {
    parse_single_group_file_with_cap(text, DEFAULT_ELEMENT_CAP)
}

pub fn parse_single_group_file_with_cap(text: &str, cap: usize) -> Result<PermGroup, GroupError> {
    let blocks = split_blocks(text);
    if blocks.len() != 1 {
        return Err(GroupError::CycleParse(format!(
            "expected 1 generator block, found {}",
            blocks.len()
        )));
    }
    let degree = max_point(text)?;
    parse_block(&blocks[0], degree, "G", cap)
}

fn split_blocks(text: &str) -> Vec<Vec<String>> {
    let mut blocks: Vec<Vec<String>> = Vec::new();
    let mut current: Vec<String> = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            if !current.is_empty() {
                blocks.push(std::mem::take(&mut current));
            }
        } else if !line.starts_with('#') {
            current.push(line.to_string());
        }
    }
    if !current.is_empty() {
        blocks.push(current);
    }
    blocks
}

fn max_point(text: &str) -> Result<usize, GroupError> {
    let mut degree = 1;
    for token in text.split(|c: char| !c.is_ascii_digit()) {
        if token.is_empty() {
            continue;
        }
        let p: usize = token
            .parse()
            .map_err(|_| GroupError::CycleParse(format!("bad point `{token}`")))?;
        degree = degree.max(p);
    }
    Ok(degree)
}

fn parse_block(
    lines: &[String],
    degree: usize,
    name: &str,
    cap: usize,
) -> Result<PermGroup, GroupError> {
    let gens: Result<Vec<Perm>, GroupError> = lines
        .iter()
        .map(|l| Perm::parse_cycles(l, degree))
        .collect();
    PermGroup::enumerate(gens?, degree, name, cap)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_family() {
        let fg = sn_family(3, DEFAULT_ELEMENT_CAP).unwrap();
        assert_eq!(fg.q().order(), 6);
        assert_eq!(fg.f().order(), 2);
        assert_eq!(fg.g().order(), 3);
    }

    #[test]
    fn s4_family() {
        let fg = sn_family(4, DEFAULT_ELEMENT_CAP).unwrap();
        assert_eq!((fg.q().order(), fg.f().order(), fg.g().order()), (24, 6, 4));
    }

    #[test]
    fn degenerate_trivial_factorization() {
        let t = PermGroup::enumerate(vec![], 1, "1", DEFAULT_ELEMENT_CAP).unwrap();
        let fg = FactoredGroup::build(t.clone(), t.clone(), t).unwrap();
        assert_eq!(fg.q().order(), 1);
    }

    #[test]
    fn rejects_non_factorizable() {
        // F = G = <(1 2 3)> inside S3: FG has order 3, not 6, and F = G
        let q = sn_family(3, DEFAULT_ELEMENT_CAP).unwrap().q().clone();
        let c3 = PermGroup::enumerate(
            vec![Perm::parse_cycles("(1 2 3)", 3).unwrap()],
            3,
            "C3",
            DEFAULT_ELEMENT_CAP,
        )
        .unwrap();
        assert!(matches!(
            FactoredGroup::build(q.clone(), c3.clone(), c3.clone()),
            Err(GroupError::NotFactorizable(_))
        ));
        // not a subgroup of Q
        let c2deg3 = PermGroup::enumerate(
            vec![Perm::parse_cycles("(1 3)", 3).unwrap()],
            3,
            "C2",
            DEFAULT_ELEMENT_CAP,
        )
        .unwrap();
        let a4 = PermGroup::enumerate(
            vec![Perm::parse_cycles("(1 2 3)", 3).unwrap()],
            3,
            "C3",
            DEFAULT_ELEMENT_CAP,
        )
        .unwrap();
        assert!(FactoredGroup::build(a4, c2deg3, c3).is_err());
    }

    #[test]
    fn factorize_examples() {
        let fg = sn_family(3, DEFAULT_ELEMENT_CAP).unwrap();
        // identity factors trivially
        let id = Perm::identity(3);
        let (a, x) = fg.factorize(&id).unwrap();
        assert!(a.is_identity() && x.is_identity());
        // (1 3) = (1 2) * (1 3 2) under right-to-left composition
        let q = Perm::parse_cycles("(1 3)", 3).unwrap();
        let (a, x) = fg.factorize(&q).unwrap();
        assert_eq!(a, Perm::parse_cycles("(1 2)", 3).unwrap());
        assert_eq!(x, Perm::parse_cycles("(1 3 2)", 3).unwrap());
        assert_eq!(a.compose(&x), q);
        // an element of F factors as (a, 1)
        let s = Perm::parse_cycles("(1 2)", 3).unwrap();
        let (a, x) = fg.factorize(&s).unwrap();
        assert_eq!(a, s);
        assert!(x.is_identity());
        // not in Q
        assert!(fg.factorize(&Perm::identity(4)).is_err());
    }

    /// Round trip against an independent exhaustive search.
    #[test]
    fn factorization_round_trip() {
        let fg = sn_family(4, DEFAULT_ELEMENT_CAP).unwrap();
        for q in fg.q().elements() {
            let (a, x) = fg.factorize(q).unwrap();
            assert!(fg.f().contains(&a));
            assert!(fg.g().contains(&x));
            assert_eq!(a.compose(&x), *q);
            // uniqueness by brute force
            let mut count = 0;
            for a2 in fg.f().elements() {
                for x2 in fg.g().elements() {
                    if a2.compose(x2) == *q {
                        count += 1;
                    }
                }
            }
            assert_eq!(count, 1);
        }
    }

    #[test]
    fn action_examples() {
        let fg = sn_family(3, DEFAULT_ELEMENT_CAP).unwrap();
        let z = Perm::parse_cycles("(1 2 3)", 3).unwrap();
        let z2 = Perm::parse_cycles("(1 3 2)", 3).unwrap();
        let s = Perm::parse_cycles("(1 2)", 3).unwrap();
        let e3 = Perm::identity(3);
        // x = 1: lhd = 1, rhd = a
        assert_eq!(fg.lhd(&e3, &s).unwrap(), e3);
        assert_eq!(fg.rhd(&e3, &s).unwrap(), s);
        // a = 1: lhd = x, rhd = 1
        assert_eq!(fg.lhd(&z, &e3).unwrap(), z);
        assert_eq!(fg.rhd(&z, &e3).unwrap(), e3);
        // z <| (1 2) = z^2 and z |> (1 2) = (1 2), from factorize(z*(1 2))
        assert_eq!(fg.lhd(&z, &s).unwrap(), z2);
        assert_eq!(fg.rhd(&z, &s).unwrap(), s);
        // membership violations
        assert!(fg.lhd(&s, &s).is_err());
        assert!(fg.rhd(&z, &z).is_err());
    }

    #[test]
    fn orbits_of_s3_action() {
        let fg = sn_family(3, DEFAULT_ELEMENT_CAP).unwrap();
        let orbits = fg.orbits();
        assert_eq!(orbits.len(), 2);
        assert!(orbits[0].representative.is_identity());
        assert_eq!(orbits[0].stabilizer.len(), 2);
        assert_eq!(orbits[1].members.len(), 2);
        assert_eq!(orbits[1].stabilizer.len(), 1);
        // orbit-stabilizer in general
        for o in &orbits {
            assert_eq!(o.members.len() * o.stabilizer.len(), fg.f().order());
        }
    }

    #[test]
    fn dual_algebra_action_is_a_left_action() {
        // a . p_x := p_{x <| a^-1} permutes the index set and satisfies
        // (ab) . p = a . (b . p)
        let fg = sn_family(4, DEFAULT_ELEMENT_CAP).unwrap();
        for a in fg.f().elements() {
            for b in fg.f().elements() {
                let ab = a.compose(b);
                for x in fg.g().elements() {
                    let lhs = fg.lhd(x, &ab.inverse()).unwrap();
                    let step = fg.lhd(x, &b.inverse()).unwrap();
                    let rhs = fg.lhd(&step, &a.inverse()).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn parse_three_block_file() {
        let text = "# S3 = S2 * C3\n(1 2)\n(1 2 3)\n\n(1 2)\n\n(1 2 3)\n";
        let fg = parse_group_file(text).unwrap();
        assert_eq!((fg.q().order(), fg.f().order(), fg.g().order()), (6, 2, 3));
        assert!(parse_group_file("(1 2)\n\n(1 2)\n").is_err());
    }
}
