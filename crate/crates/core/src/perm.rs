//! Finite permutation groups on `{1..n}`: element enumeration, conjugacy
//! classes, p-parts, orbits, stabilizers and coset transversals.
//!
//! Composition is right-to-left throughout: `(a * b)(i) = a(b(i))`.
//! All element orderings are lexicographic on the image sequence, so every
//! derived table is reproducible.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::error::GroupError;

pub const DEFAULT_ELEMENT_CAP: usize = 1_000_000;

/// Permutation of `{0..degree-1}`, stored as its image sequence.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm {
            images: (0..degree).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, GroupError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(GroupError::CycleParse(
                    "image sequence is not a bijection".into(),
                ));
            }
            seen[i] = true;
        }
        Ok(Perm { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, point: usize) -> usize {
        self.images[point]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self * other`, applying `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Perm { images }
    }

    pub fn pow(&self, k: u64) -> Perm {
        let mut acc = Perm::identity(self.degree());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            k >>= 1;
        }
        acc
    }

    /// Nontrivial cycles, each starting at its minimal point, sorted by
    /// first point. Points are 0-based here.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.images[start] == start {
                seen[start] = true;
                continue;
            }
            let mut cyc = vec![start];
            seen[start] = true;
            let mut p = self.images[start];
            while p != start {
                seen[p] = true;
                cyc.push(p);
                p = self.images[p];
            }
            out.push(cyc);
        }
        out
    }

    pub fn order(&self) -> u64 {
        self.cycles()
            .iter()
            .fold(1u64, |acc, c| lcm(acc, c.len() as u64))
    }

    /// Parse cycle notation like `"(1 2 3)(4 5)"` with 1-based points.
    /// `"()"` denotes the identity.
    pub fn parse_cycles(s: &str, degree: usize) -> Result<Self, GroupError> {
        let s = s.trim();
        let mut images: Vec<usize> = (0..degree).collect();
        let mut rest = s;
        if !rest.starts_with('(') {
            return Err(GroupError::CycleParse(format!("expected '(' in `{s}`")));
        }
        // Cycles are disjoint in the accepted format, so application order
        // does not matter.
        while !rest.is_empty() {
            let close = rest
                .find(')')
                .ok_or_else(|| GroupError::CycleParse(format!("unclosed cycle in `{s}`")))?;
            let body = &rest[1..close];
            let pts: Result<Vec<usize>, _> = body
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<usize>())
                .collect();
            let pts = pts.map_err(|_| GroupError::CycleParse(format!("bad point in `{s}`")))?;
            for &p in &pts {
                if p == 0 || p > degree {
                    return Err(GroupError::CycleParse(format!(
                        "point {p} out of range 1..{degree}"
                    )));
                }
            }
            let mut seen = vec![false; degree];
            for (i, &p) in pts.iter().enumerate() {
                if seen[p - 1] {
                    return Err(GroupError::CycleParse(format!(
                        "repeated point {p} in `{s}`"
                    )));
                }
                seen[p - 1] = true;
                let q = pts[(i + 1) % pts.len()];
                images[p - 1] = q - 1;
            }
            rest = rest[close + 1..].trim_start();
            if !rest.is_empty() && !rest.starts_with('(') {
                return Err(GroupError::CycleParse(format!("trailing text in `{s}`")));
            }
        }
        Perm::from_images(images)
    }

    /// `g = u * s = s * u` with `u` a p-element and `s` p-regular.
    pub fn p_parts(&self, p: u64) -> (Perm, Perm) {
        let e = self.order();
        let mut pa = 1u64;
        let mut m = e;
        while m.is_multiple_of(p) {
            m /= p;
            pa *= p;
        }
        if pa == 1 {
            return (Perm::identity(self.degree()), self.clone());
        }
        if m == 1 {
            return (self.clone(), Perm::identity(self.degree()));
        }
        let alpha = mod_inverse(m % pa, pa);
        let beta = mod_inverse(pa % m, m);
        let u = self.pow((m * alpha) % e);
        let s = self.pow((pa * beta) % e);
        (u, s)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (i, p) in c.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", p + 1)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

fn mod_inverse(a: u64, n: u64) -> u64 {
    // extended euclid; caller guarantees gcd(a, n) = 1 and n > 1
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (n as i128, (a % n) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1);
    ((t % n as i128 + n as i128) % n as i128) as u64
}

/// Finite permutation group with a fully enumerated, lexicographically
/// sorted element list. Each element also carries one word in the
/// generators, used to evaluate matrix representations.
#[derive(Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
    words: Vec<Vec<usize>>,
    name: String,
}

impl PermGroup {
    pub fn enumerate(
        generators: Vec<Perm>,
        degree: usize,
        name: &str,
        cap: usize,
    ) -> Result<Self, GroupError> {
        for g in &generators {
            if g.degree() != degree {
                return Err(GroupError::DegreeMismatch {
                    expected: degree,
                    found: g.degree(),
                });
            }
        }
        let generators: Vec<Perm> = generators
            .into_iter()
            .filter(|g| !g.is_identity())
            .collect();
        let id = Perm::identity(degree);
        let mut index: HashMap<Perm, usize> = HashMap::new();
        let mut elems: Vec<Perm> = vec![id.clone()];
        let mut words: Vec<Vec<usize>> = vec![vec![]];
        index.insert(id, 0);
        let mut queue: VecDeque<usize> = VecDeque::new();
        queue.push_back(0);
        while let Some(i) = queue.pop_front() {
            for (gi, g) in generators.iter().enumerate() {
                let next = elems[i].compose(g);
                if !index.contains_key(&next) {
                    if elems.len() >= cap {
                        return Err(GroupError::ClosureExceedsCap { cap });
                    }
                    let mut w = words[i].clone();
                    w.push(gi);
                    index.insert(next.clone(), elems.len());
                    elems.push(next);
                    words.push(w);
                    queue.push_back(elems.len() - 1);
                }
            }
        }
        let mut order: Vec<usize> = (0..elems.len()).collect();
        order.sort_by(|&a, &b| elems[a].cmp(&elems[b]));
        let elements: Vec<Perm> = order.iter().map(|&i| elems[i].clone()).collect();
        let words: Vec<Vec<usize>> = order.iter().map(|&i| words[i].clone()).collect();
        Ok(PermGroup {
            degree,
            generators,
            elements,
            words,
            name: name.to_string(),
        })
    }

    /// Group generated by (a greedy minimal subset of) the given elements.
    /// The closure must equal the given element set.
    pub fn from_elements(degree: usize, elems: &[Perm], name: &str) -> Result<Self, GroupError> {
        let mut sorted: Vec<Perm> = elems.to_vec();
        sorted.sort();
        sorted.dedup();
        let mut gens: Vec<Perm> = Vec::new();
        let mut have = PermGroup::enumerate(vec![], degree, name, DEFAULT_ELEMENT_CAP)?;
        for e in &sorted {
            if have.index_of(e).is_none() {
                gens.push(e.clone());
                have = PermGroup::enumerate(gens.clone(), degree, name, DEFAULT_ELEMENT_CAP)?;
            }
        }
        if have.order() != sorted.len() {
            return Err(GroupError::NotSubgroup(name.to_string()));
        }
        Ok(have)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Perm {
        &self.elements[i]
    }

    pub fn identity(&self) -> Perm {
        Perm::identity(self.degree)
    }

    pub fn identity_index(&self) -> usize {
        self.index_of(&Perm::identity(self.degree))
            .expect("identity is always a member")
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.elements.binary_search(p).ok()
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.index_of(p).is_some()
    }

    /// Word of element `i` in the generators; evaluating the generators'
    /// images left-to-right under any homomorphism yields the image of the
    /// element.
    pub fn word(&self, i: usize) -> &[usize] {
        &self.words[i]
    }

    pub fn is_subgroup_of(&self, parent: &PermGroup) -> bool {
        self.degree == parent.degree && self.elements.iter().all(|e| parent.contains(e))
    }

    pub fn exponent(&self) -> u64 {
        self.elements
            .iter()
            .fold(1u64, |acc, g| lcm(acc, g.order()))
    }

    pub fn conjugacy_classes(&self) -> ConjClasses {
        let n = self.order();
        let mut class_of: Vec<Option<usize>> = vec![None; n];
        let mut reps: Vec<usize> = Vec::new();
        let mut sizes: Vec<usize> = Vec::new();
        for start in 0..n {
            if class_of[start].is_some() {
                continue;
            }
            let cid = reps.len();
            reps.push(start);
            // closure of the conjugation orbit under the generators
            let mut members = vec![start];
            class_of[start] = Some(cid);
            let mut queue = VecDeque::from([start]);
            while let Some(i) = queue.pop_front() {
                for g in &self.generators {
                    let conj = g.compose(&self.elements[i]).compose(&g.inverse());
                    let j = self.index_of(&conj).expect("closed under conjugation");
                    if class_of[j].is_none() {
                        class_of[j] = Some(cid);
                        members.push(j);
                        queue.push_back(j);
                    }
                }
            }
            sizes.push(members.len());
        }
        let class_of: Vec<usize> = class_of.into_iter().map(|c| c.unwrap()).collect();
        let centralizer_orders = sizes.iter().map(|s| n / s).collect();
        ConjClasses {
            reps,
            class_of,
            sizes,
            centralizer_orders,
        }
    }
}

/// Conjugacy class data for a [`PermGroup`]. Representatives are the
/// minimal elements of their classes in the group's element order.
#[derive(Clone)]
pub struct ConjClasses {
    reps: Vec<usize>,
    class_of: Vec<usize>,
    sizes: Vec<usize>,
    centralizer_orders: Vec<usize>,
}

impl ConjClasses {
    pub fn count(&self) -> usize {
        self.reps.len()
    }

    pub fn rep_index(&self, class: usize) -> usize {
        self.reps[class]
    }

    pub fn class_of(&self, elem_index: usize) -> usize {
        self.class_of[elem_index]
    }

    pub fn size(&self, class: usize) -> usize {
        self.sizes[class]
    }

    pub fn centralizer_order(&self, class: usize) -> usize {
        self.centralizer_orders[class]
    }

    /// Classes whose representative has order prime to `p`.
    pub fn p_regular_classes(&self, group: &PermGroup, p: u64) -> Vec<usize> {
        (0..self.count())
            .filter(|&c| !group.element(self.reps[c]).order().is_multiple_of(p))
            .collect()
    }
}

/// One orbit of a right action of `F` on a set, together with its
/// stabilizer and a transversal that represents both the left and the
/// right cosets of the stabilizer.
#[derive(Clone)]
pub struct Orbit<T> {
    pub representative: T,
    pub members: Vec<T>,
    pub stabilizer: Vec<Perm>,
    pub transversal: Vec<Perm>,
}

/// Decompose `xs` into orbits under the right action `act` of `f`.
///
/// The action axiom `act(act(x,a),b) = act(x, a*b)` is verified
/// exhaustively; a violation signals an inconsistent action table.
pub fn orbits_and_stabilizers<T, A>(
    f: &PermGroup,
    xs: &[T],
    act: A,
) -> Result<Vec<Orbit<T>>, GroupError>
where
    T: Clone + Ord,
    A: Fn(&T, &Perm) -> T,
{
    for x in xs {
        let id = f.identity();
        if act(x, &id) != *x {
            return Err(GroupError::ActionAxiom("act(x, 1) != x".into()));
        }
        for a in f.elements() {
            for b in f.elements() {
                let lhs = act(&act(x, a), b);
                let rhs = act(x, &a.compose(b));
                if lhs != rhs {
                    return Err(GroupError::ActionAxiom(
                        "act(act(x,a),b) != act(x,ab)".into(),
                    ));
                }
            }
        }
    }
    let mut sorted: Vec<T> = xs.to_vec();
    sorted.sort();
    let mut placed: Vec<bool> = vec![false; sorted.len()];
    let mut orbits = Vec::new();
    for i in 0..sorted.len() {
        if placed[i] {
            continue;
        }
        let rep = sorted[i].clone();
        let mut members: Vec<T> = Vec::new();
        let mut stabilizer: Vec<Perm> = Vec::new();
        for a in f.elements() {
            let y = act(&rep, a);
            if y == rep {
                stabilizer.push(a.clone());
            }
            if let Err(pos) = members.binary_search(&y) {
                members.insert(pos, y);
            }
        }
        for m in &members {
            if let Ok(pos) = sorted.binary_search(m) {
                placed[pos] = true;
            }
        }
        if members.len() * stabilizer.len() != f.order() {
            return Err(GroupError::ActionAxiom(
                "orbit-stabilizer count mismatch".into(),
            ));
        }
        let transversal = common_transversal(f, &stabilizer);
        orbits.push(Orbit {
            representative: rep,
            members,
            stabilizer,
            transversal,
        });
    }
    Ok(orbits)
}

/// A transversal of the subgroup `stab` in `f` whose elements represent
/// the left cosets `tS` and the right cosets `St` simultaneously (one
/// always exists). Returned sorted, with the identity representing the
/// subgroup itself.
pub fn common_transversal(f: &PermGroup, stab: &[Perm]) -> Vec<Perm> {
    let n = f.order();
    let k = n / stab.len();
    // label each group element by its left and right coset
    let mut left_id: HashMap<Perm, usize> = HashMap::new(); // coset tS
    let mut right_id: HashMap<Perm, usize> = HashMap::new(); // coset St
    let mut left_of: Vec<usize> = vec![usize::MAX; n];
    let mut right_of: Vec<usize> = vec![usize::MAX; n];
    for (i, g) in f.elements().iter().enumerate() {
        let lkey = stab.iter().map(|s| g.compose(s)).min().unwrap();
        let rkey = stab.iter().map(|s| s.compose(g)).min().unwrap();
        let nl = left_id.len();
        left_of[i] = *left_id.entry(lkey).or_insert(nl);
        let nr = right_id.len();
        right_of[i] = *right_id.entry(rkey).or_insert(nr);
    }
    // bipartite matching left coset -> right coset, edges where the cosets
    // intersect; by Hall's theorem a perfect matching exists
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); k];
    for i in 0..n {
        if !adj[left_of[i]].contains(&right_of[i]) {
            adj[left_of[i]].push(right_of[i]);
        }
    }
    for a in adj.iter_mut() {
        a.sort();
    }
    let mut match_right: Vec<Option<usize>> = vec![None; k];
    fn augment(
        l: usize,
        adj: &[Vec<usize>],
        match_right: &mut [Option<usize>],
        seen: &mut [bool],
    ) -> bool {
        for &r in &adj[l] {
            if seen[r] {
                continue;
            }
            seen[r] = true;
            if match_right[r].is_none() || augment(match_right[r].unwrap(), adj, match_right, seen)
            {
                match_right[r] = Some(l);
                return true;
            }
        }
        false
    }
    for l in 0..k {
        let mut seen = vec![false; k];
        let ok = augment(l, &adj, &mut match_right, &mut seen);
        assert!(ok, "common transversal matching must succeed");
    }
    let mut pair_of_left: Vec<usize> = vec![usize::MAX; k];
    for (r, l) in match_right.iter().enumerate() {
        pair_of_left[l.unwrap()] = r;
    }
    // minimal element in each matched intersection
    let mut reps: Vec<Perm> = Vec::new();
    for l in 0..k {
        let r = pair_of_left[l];
        let t = f
            .elements()
            .iter()
            .enumerate()
            .filter(|(i, _)| left_of[*i] == l && right_of[*i] == r)
            .map(|(_, g)| g.clone())
            .min()
            .expect("matched cosets intersect");
        reps.push(t);
    }
    reps.sort();
    reps
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> PermGroup {
        let a = Perm::parse_cycles("(1 2)", 3).unwrap();
        let b = Perm::parse_cycles("(1 2 3)", 3).unwrap();
        PermGroup::enumerate(vec![a, b], 3, "S3", DEFAULT_ELEMENT_CAP).unwrap()
    }

    fn s4() -> PermGroup {
        let a = Perm::parse_cycles("(1 2)", 4).unwrap();
        let b = Perm::parse_cycles("(1 2 3 4)", 4).unwrap();
        PermGroup::enumerate(vec![a, b], 4, "S4", DEFAULT_ELEMENT_CAP).unwrap()
    }

    #[test]
    fn enumerate_small_groups() {
        assert_eq!(s3().order(), 6);
        let trivial = PermGroup::enumerate(vec![], 4, "1", DEFAULT_ELEMENT_CAP).unwrap();
        assert_eq!(trivial.order(), 1);
        let c5 = PermGroup::enumerate(
            vec![Perm::parse_cycles("(1 2 3 4 5)", 5).unwrap()],
            5,
            "C5",
            DEFAULT_ELEMENT_CAP,
        )
        .unwrap();
        assert_eq!(c5.order(), 5);
    }

    #[test]
    fn enumerate_rejects_degree_mismatch_and_cap() {
        let g = Perm::parse_cycles("(1 2)", 3).unwrap();
        let err = PermGroup::enumerate(vec![g], 4, "bad", DEFAULT_ELEMENT_CAP);
        assert!(matches!(err, Err(GroupError::DegreeMismatch { .. })));
        let g5 = Perm::parse_cycles("(1 2 3 4 5)", 5).unwrap();
        let err = PermGroup::enumerate(vec![g5], 5, "C5", 3);
        assert!(matches!(err, Err(GroupError::ClosureExceedsCap { cap: 3 })));
    }

    #[test]
    fn element_orders() {
        assert_eq!(Perm::identity(4).order(), 1);
        assert_eq!(Perm::parse_cycles("(1 2 3)", 3).unwrap().order(), 3);
        assert_eq!(Perm::parse_cycles("(1 2)(3 4 5)", 5).unwrap().order(), 6);
    }

    #[test]
    fn composition_is_right_to_left() {
        let s = Perm::parse_cycles("(1 2)", 3).unwrap();
        let z = Perm::parse_cycles("(1 3 2)", 3).unwrap();
        // (1 2)*(1 3 2) applies (1 3 2) first: the product is (1 3)
        let p = s.compose(&z);
        assert_eq!(p, Perm::parse_cycles("(1 3)", 3).unwrap());
    }

    #[test]
    fn cycle_roundtrip_and_parse_errors() {
        for s in ["(1 2 3)(4 5)", "()", "(2 4)"] {
            let p = Perm::parse_cycles(s, 5).unwrap();
            let back = Perm::parse_cycles(&p.to_string(), 5).unwrap();
            assert_eq!(p, back);
        }
        assert!(Perm::parse_cycles("(0 1)", 3).is_err());
        assert!(Perm::parse_cycles("(1 2", 3).is_err());
        assert!(Perm::parse_cycles("(1 1)", 3).is_err());
    }

    /// Brute-force oracle: the unique commuting pair (u, s) of powers of g
    /// with u a p-element, s p-regular and u*s = g.
    fn p_parts_oracle(g: &Perm, p: u64) -> (Perm, Perm) {
        let e = g.order();
        let mut found = None;
        for i in 0..e {
            for j in 0..e {
                let u = g.pow(i);
                let s = g.pow(j);
                let ou = u.order();
                let os = s.order();
                let u_is_p = {
                    let mut o = ou;
                    while o.is_multiple_of(p) {
                        o /= p;
                    }
                    o == 1
                };
                if u_is_p && !os.is_multiple_of(p) && u.compose(&s) == *g {
                    assert!(found.is_none(), "p-part decomposition must be unique");
                    found = Some((u, s));
                }
            }
        }
        found.expect("p-part decomposition exists")
    }

    #[test]
    fn p_parts_examples() {
        let g = Perm::parse_cycles("(1 2)(3 4 5)", 5).unwrap();
        let (u, s) = g.p_parts(2);
        assert_eq!(u, Perm::parse_cycles("(1 2)", 5).unwrap());
        assert_eq!(s, Perm::parse_cycles("(3 4 5)", 5).unwrap());
        assert_eq!((u.clone(), s.clone()), p_parts_oracle(&g, 2));

        // p-regular element: u = 1
        let h = Perm::parse_cycles("(1 2 3)", 5).unwrap();
        let (u, s) = h.p_parts(2);
        assert!(u.is_identity());
        assert_eq!(s, h);

        // order-6 element at p = 3; frozen from the oracle: u = g^4, s = g^3
        let g = Perm::parse_cycles("(1 2 3 4 5 6)", 6).unwrap();
        let (u, s) = g.p_parts(3);
        assert_eq!((u.clone(), s.clone()), p_parts_oracle(&g, 3));
        assert_eq!(u, Perm::parse_cycles("(1 5 3)(2 6 4)", 6).unwrap());
        assert_eq!(s, Perm::parse_cycles("(1 4)(2 5)(3 6)", 6).unwrap());
        assert_eq!(u.compose(&s), g);
        assert_eq!(s.compose(&u), g);
    }

    #[test]
    fn conjugacy_classes_of_symmetric_groups() {
        let cc3 = s3().conjugacy_classes();
        let mut sizes3: Vec<usize> = (0..cc3.count()).map(|c| cc3.size(c)).collect();
        sizes3.sort();
        assert_eq!(sizes3, vec![1, 2, 3]);

        let g4 = s4();
        let cc4 = g4.conjugacy_classes();
        let mut sizes4: Vec<usize> = (0..cc4.count()).map(|c| cc4.size(c)).collect();
        sizes4.sort();
        assert_eq!(sizes4, vec![1, 3, 6, 6, 8]);
        assert_eq!((0..cc4.count()).map(|c| cc4.size(c)).sum::<usize>(), 24);
        for c in 0..cc4.count() {
            assert_eq!(cc4.size(c) * cc4.centralizer_order(c), 24);
        }

        let trivial = PermGroup::enumerate(vec![], 2, "1", DEFAULT_ELEMENT_CAP).unwrap();
        assert_eq!(trivial.conjugacy_classes().count(), 1);
    }

    #[test]
    fn class_map_constant_on_conjugates() {
        let g = s4();
        let cc = g.conjugacy_classes();
        for (i, x) in g.elements().iter().enumerate() {
            for h in g.elements().iter().step_by(5) {
                let conj = h.compose(x).compose(&h.inverse());
                let j = g.index_of(&conj).unwrap();
                assert_eq!(cc.class_of(i), cc.class_of(j));
            }
        }
    }

    #[test]
    fn p_regular_class_counts() {
        let g3 = s3();
        let cc3 = g3.conjugacy_classes();
        assert_eq!(cc3.p_regular_classes(&g3, 3).len(), 2);
        assert_eq!(cc3.p_regular_classes(&g3, 5).len(), 3);
        let g4 = s4();
        let cc4 = g4.conjugacy_classes();
        assert_eq!(cc4.p_regular_classes(&g4, 3).len(), 4);
    }

    #[test]
    fn trivial_action_orbits() {
        let f = s3();
        let xs: Vec<u32> = vec![10, 20, 30];
        let orbits = orbits_and_stabilizers(&f, &xs, |x, _| *x).unwrap();
        assert_eq!(orbits.len(), 3);
        for o in &orbits {
            assert_eq!(o.stabilizer.len(), 6);
            assert_eq!(o.members.len(), 1);
            assert_eq!(o.transversal.len(), 1);
        }
    }

    #[test]
    fn inconsistent_action_is_rejected() {
        let f = s3();
        let xs: Vec<u32> = vec![0, 1];
        // not a right action: applying generators twice disagrees with
        // applying their product
        let bogus =
            orbits_and_stabilizers(
                &f,
                &xs,
                |x, a| {
                    if a.is_identity() {
                        *x
                    } else {
                        (*x + 1) % 2
                    }
                },
            );
        assert!(matches!(bogus, Err(GroupError::ActionAxiom(_))));
    }

    #[test]
    fn orbit_stabilizer_product() {
        // conjugation action of S4 on itself (a right action via a^-1 x a)
        let g = s4();
        let xs: Vec<Perm> = g.elements().to_vec();
        let orbits =
            orbits_and_stabilizers(&g, &xs, |x, a| a.inverse().compose(x).compose(a)).unwrap();
        let total: usize = orbits.iter().map(|o| o.members.len()).sum();
        assert_eq!(total, 24);
        for o in &orbits {
            assert_eq!(o.members.len() * o.stabilizer.len(), 24);
            assert_eq!(o.transversal.len(), o.members.len());
        }
    }

    #[test]
    fn common_transversal_represents_both_sides() {
        let f = s4();
        for stab_gens in [vec!["(1 2)"], vec!["(1 2)", "(1 2 3)"], vec!["(1 2 3 4)"]] {
            let gens: Vec<Perm> = stab_gens
                .iter()
                .map(|s| Perm::parse_cycles(s, 4).unwrap())
                .collect();
            let stab = PermGroup::enumerate(gens, 4, "H", DEFAULT_ELEMENT_CAP).unwrap();
            let t = common_transversal(&f, stab.elements());
            assert_eq!(t.len() * stab.order(), f.order());
            let mut left_seen = std::collections::HashSet::new();
            let mut right_seen = std::collections::HashSet::new();
            for rep in &t {
                let lkey: Vec<Perm> = {
                    let mut v: Vec<Perm> = stab.elements().iter().map(|s| rep.compose(s)).collect();
                    v.sort();
                    v
                };
                let rkey: Vec<Perm> = {
                    let mut v: Vec<Perm> = stab.elements().iter().map(|s| s.compose(rep)).collect();
                    v.sort();
                    v
                };
                assert!(left_seen.insert(lkey));
                assert!(right_seen.insert(rkey));
            }
        }
    }

    #[test]
    fn words_evaluate_to_elements() {
        let g = s4();
        for (i, e) in g.elements().iter().enumerate() {
            let mut acc = Perm::identity(4);
            for &gi in g.word(i) {
                acc = acc.compose(&g.generators()[gi]);
            }
            assert_eq!(&acc, e);
        }
    }

    proptest::proptest! {
        #[test]
        fn compose_inverse_roundtrip(
            images in proptest::strategy::Strategy::prop_shuffle(
                proptest::strategy::Just((0..7usize).collect::<Vec<_>>())
            )
        ) {
            let p = Perm::from_images(images).unwrap();
            proptest::prop_assert!(p.compose(&p.inverse()).is_identity());
            proptest::prop_assert!(p.inverse().compose(&p).is_identity());
            proptest::prop_assert_eq!(p.pow(p.order()), Perm::identity(7));
        }

        #[test]
        fn p_parts_properties(seed in 0u64..5000, p in proptest::sample::select(vec![3u64, 5, 7, 11])) {
            // pseudo-random permutation of degree 8 from the seed
            let mut images: Vec<usize> = (0..8).collect();
            let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
            for i in (1..8usize).rev() {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let j = (state >> 33) as usize % (i + 1);
                images.swap(i, j);
            }
            let g = Perm::from_images(images).unwrap();
            let (u, s) = g.p_parts(p);
            proptest::prop_assert_eq!(u.compose(&s), g.clone());
            proptest::prop_assert_eq!(s.compose(&u), g);
            let mut pu = u.order();
            while pu % p == 0 { pu /= p; }
            proptest::prop_assert_eq!(pu, 1, "u must be a p-element");
            proptest::prop_assert!(s.order() % p != 0, "s must be p-regular");
        }
    }
}
