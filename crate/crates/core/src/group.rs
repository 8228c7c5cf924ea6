//! Finite groups as multiplication tables, their subgroups, right cosets and
//! families of subgroups.

use crate::error::{Error, GroupAxiomViolation, Result};

/// A set of group elements, as a bit mask over element indices (`|G| ≤ 64`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ElemSet(pub u64);

impl ElemSet {
    pub fn singleton(g: usize) -> Self {
        Self(1 << g)
    }

    pub fn contains(self, g: usize) -> bool {
        self.0 >> g & 1 == 1
    }

    pub fn insert(&mut self, g: usize) {
        self.0 |= 1 << g;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersect(self, other: Self) -> Self {
        Self(self.0 & other.0)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut w = self.0;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let t = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(t)
        })
    }
}

impl FromIterator<usize> for ElemSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = ElemSet::default();
        for g in iter {
            s.insert(g);
        }
        s
    }
}

impl std::fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A finite group given by its multiplication table, `mult[a][b] = a·b`.
#[derive(Clone, Debug)]
pub struct FinGroup {
    mult: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
    names: Option<Vec<String>>,
}

impl PartialEq for FinGroup {
    fn eq(&self, other: &Self) -> bool {
        self.mult == other.mult
    }
}

impl Eq for FinGroup {}

impl FinGroup {
    /// Validates the group axioms, reporting a witness on failure.
    pub fn from_table(mult: Vec<Vec<usize>>) -> Result<Self> {
        let n = mult.len();
        if n > 64 {
            return Err(Error::GroupTooLarge(n));
        }
        let axiom = |v| Err(Error::GroupAxiom(v));
        if n == 0 || mult.iter().any(|r| r.len() != n) {
            return axiom(GroupAxiomViolation::NotSquare);
        }
        for (row, r) in mult.iter().enumerate() {
            for (col, &value) in r.iter().enumerate() {
                if value >= n {
                    return axiom(GroupAxiomViolation::EntryOutOfRange { row, col, value });
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mult[mult[a][b]][c] != mult[a][mult[b][c]] {
                        return axiom(GroupAxiomViolation::NotAssociative { a, b, c });
                    }
                }
            }
        }
        let Some(identity) = (0..n).find(|&e| (0..n).all(|a| mult[e][a] == a && mult[a][e] == a))
        else {
            return axiom(GroupAxiomViolation::NoIdentity);
        };
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            match (0..n).find(|&b| mult[a][b] == identity && mult[b][a] == identity) {
                Some(b) => inverse.push(b),
                None => return axiom(GroupAxiomViolation::NoInverse { element: a }),
            }
        }
        Ok(Self {
            mult,
            identity,
            inverse,
            names: None,
        })
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.order());
        self.names = Some(names);
        self
    }

    pub fn name(&self, g: usize) -> String {
        match &self.names {
            Some(n) => n[g].clone(),
            None => g.to_string(),
        }
    }

    pub fn element_named(&self, name: &str) -> Option<usize> {
        self.names.as_ref()?.iter().position(|n| n == name)
    }

    pub fn cyclic(n: usize) -> Self {
        let mult = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(mult).expect("cyclic group")
    }

    /// Symmetric group on `0..k` (`k ≤ 4`), elements in lexicographic order
    /// of one-line notation, named by that notation. The product `a·b`
    /// applies `a` first, matching right actions.
    pub fn symmetric(k: usize) -> Self {
        assert!(k <= 4, "symmetric groups beyond S4 exceed the table cap");
        let mut perms: Vec<Vec<usize>> = vec![(0..k).collect()];
        // lexicographic successor enumeration
        loop {
            let mut p = perms.last().unwrap().clone();
            let Some(i) = (0..k.saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) else {
                break;
            };
            let j = (i + 1..k).rev().find(|&j| p[j] > p[i]).unwrap();
            p.swap(i, j);
            p[i + 1..].reverse();
            perms.push(p);
        }
        let index = |p: &Vec<usize>| perms.iter().position(|q| q == p).unwrap();
        let mult = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| index(&(0..k).map(|x| b[a[x]]).collect()))
                    .collect()
            })
            .collect();
        let names = perms
            .iter()
            .map(|p| p.iter().map(|d| d.to_string()).collect::<String>())
            .collect();
        Self::from_table(mult).expect("symmetric group").with_names(names)
    }

    /// Dihedral group of order `2m`: element `r^i s^j` has index `2i + j`.
    pub fn dihedral(m: usize) -> Self {
        let n = 2 * m;
        let mult = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        let (i, j, k, l) = (a / 2, a % 2, b / 2, b % 2);
                        // r^i s^j r^k s^l = r^(i ± k) s^(j+l)
                        let rot = if j == 0 { (i + k) % m } else { (i + m - k) % m };
                        2 * rot + (j + l) % 2
                    })
                    .collect()
            })
            .collect();
        Self::from_table(mult).expect("dihedral group")
    }

    /// Quaternion group with elements `±1, ±i, ±j, ±k` at indices 0..8.
    pub fn quaternion() -> Self {
        // unit u in {1,i,j,k} as 0..4, sign s; element index = 2u + s
        const UNIT: [[(usize, bool); 4]; 4] = [
            [(0, false), (1, false), (2, false), (3, false)],
            [(1, false), (0, true), (3, false), (2, true)],
            [(2, false), (3, true), (0, true), (1, false)],
            [(3, false), (2, false), (1, true), (0, true)],
        ];
        let mult = (0..8)
            .map(|a| {
                (0..8)
                    .map(|b| {
                        let (u, neg) = UNIT[a / 2][b / 2];
                        2 * u + ((a % 2 + b % 2 + neg as usize) % 2)
                    })
                    .collect()
            })
            .collect();
        let names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"];
        Self::from_table(mult)
            .expect("quaternion group")
            .with_names(names.iter().map(|s| s.to_string()).collect())
    }

    /// Direct product; `(a, b)` has index `a * |H| + b`.
    pub fn product(&self, other: &FinGroup) -> Self {
        let m = other.order();
        let n = self.order() * m;
        let mult = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| self.mul(x / m, y / m) * m + other.mul(x % m, y % m))
                    .collect()
            })
            .collect();
        let names = (0..n)
            .map(|x| format!("({},{})", self.name(x / m), other.name(x % m)))
            .collect();
        Self::from_table(mult).expect("direct product").with_names(names)
    }

    /// Builtin groups by name: `Z<n>` (or `Z/n`), `S3`, `S4`, `D<m>` (order
    /// `2m`), `Q8`, `Z2xZ2` (or `V4`), and `Z<a>xZ<b>`.
    pub fn builtin(name: &str) -> Option<Self> {
        let name = name.trim().replace('/', "").replace('×', "x");
        if let Some((a, b)) = name.split_once('x') {
            return Some(Self::builtin(a)?.product(&Self::builtin(b)?));
        }
        match name.as_str() {
            "S3" => Some(Self::symmetric(3)),
            "S4" => Some(Self::symmetric(4)),
            "Q8" => Some(Self::quaternion()),
            "V4" => Some(Self::cyclic(2).product(&Self::cyclic(2))),
            _ => {
                let (head, num) = name.split_at(1);
                let k: usize = num.parse().ok().filter(|&k| k >= 1)?;
                match head {
                    "Z" | "C" if k <= 64 => Some(Self::cyclic(k)),
                    "D" if 2 * k <= 64 && k >= 2 => Some(Self::dihedral(k)),
                    _ => None,
                }
            }
        }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.mult.len()
    }

    #[inline]
    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a][b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.mult
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    pub fn all(&self) -> ElemSet {
        self.elements().collect()
    }

    /// `g · s · g⁻¹`
    pub fn conjugate(&self, s: usize, g: usize) -> usize {
        self.mul(self.mul(g, s), self.inv(g))
    }

    /// `{g h g⁻¹ | h ∈ set}`
    pub fn conjugate_set(&self, set: ElemSet, g: usize) -> ElemSet {
        set.iter().map(|h| self.conjugate(h, g)).collect()
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup(ElemSet::singleton(self.identity))
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup(self.all())
    }

    /// Subgroup generated by `gens`.
    pub fn generate(&self, gens: &[usize]) -> Subgroup {
        let mut set = ElemSet::singleton(self.identity);
        let mut frontier = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !set.contains(y) {
                    set.insert(y);
                    frontier.push(y);
                }
            }
        }
        Subgroup(set)
    }

    /// Validates that `elements` form a subgroup.
    pub fn subgroup(&self, elements: &[usize]) -> Result<Subgroup> {
        if let Some(&g) = elements.iter().find(|&&g| g >= self.order()) {
            return Err(Error::InvalidSubgroup(format!("element {g} out of range")));
        }
        let set: ElemSet = elements.iter().copied().collect();
        if !set.contains(self.identity) {
            return Err(Error::InvalidSubgroup("identity missing".into()));
        }
        for a in set.iter() {
            if !set.contains(self.inv(a)) {
                return Err(Error::InvalidSubgroup(format!("inverse of {a} missing")));
            }
            for b in set.iter() {
                if !set.contains(self.mul(a, b)) {
                    return Err(Error::InvalidSubgroup(format!("{a}*{b} missing")));
                }
            }
        }
        Ok(Subgroup(set))
    }

    /// All subgroups, sorted by order and then by element mask.
    pub fn all_subgroups(&self) -> Vec<Subgroup> {
        let cyclic: Vec<Subgroup> = {
            let mut c: Vec<Subgroup> = self.elements().map(|g| self.generate(&[g])).collect();
            c.sort();
            c.dedup();
            c
        };
        let mut found = vec![self.trivial_subgroup()];
        let mut i = 0;
        while i < found.len() {
            let h = found[i];
            for c in &cyclic {
                if c.0.is_subset(h.0) {
                    continue;
                }
                let gens: Vec<usize> = h.0.iter().chain(c.0.iter()).collect();
                let j = self.generate(&gens);
                if !found.contains(&j) {
                    found.push(j);
                }
            }
            i += 1;
        }
        found.sort_by_key(|h| (h.order(), h.0));
        found
    }

    /// An element `g` with `g K g⁻¹ = H`, if any.
    pub fn conjugator(&self, h: Subgroup, k: Subgroup) -> Option<usize> {
        if h.order() != k.order() {
            return None;
        }
        self.elements().find(|&g| self.conjugate_set(k.0, g) == h.0)
    }

    /// Some `g` with `g K g⁻¹ ⊆ H`, i.e. `H` contains a conjugate of `K`.
    pub fn subconjugator(&self, h: Subgroup, k: Subgroup) -> Option<usize> {
        self.elements().find(|&g| self.conjugate_set(k.0, g).is_subset(h.0))
    }

    pub fn is_normal(&self, n: Subgroup) -> Result<()> {
        for g in self.elements() {
            for x in n.0.iter() {
                if !n.0.contains(self.conjugate(x, g)) {
                    return Err(Error::NotNormal { element: x, by: g });
                }
            }
        }
        Ok(())
    }

    /// `H` as a group in its own right: elements of `H` in increasing order
    /// are relabeled `0..|H|`; the returned vector maps back into `G`.
    pub fn restrict(&self, h: Subgroup) -> (FinGroup, Vec<usize>) {
        let elems: Vec<usize> = h.0.iter().collect();
        let pos = |g: usize| elems.iter().position(|&e| e == g).unwrap();
        let mult = elems
            .iter()
            .map(|&a| elems.iter().map(|&b| pos(self.mul(a, b))).collect())
            .collect();
        let mut sub = FinGroup::from_table(mult).expect("subgroup of a group");
        if self.names.is_some() {
            sub = sub.with_names(elems.iter().map(|&e| self.name(e)).collect());
        }
        (sub, elems)
    }

    /// Quotient by a normal subgroup; returns the group of cosets `Ng`
    /// (numbered by least representative) and the projection.
    pub fn quotient(&self, n: Subgroup) -> Result<(FinGroup, Vec<usize>)> {
        self.is_normal(n)?;
        let mut proj = vec![usize::MAX; self.order()];
        let mut reps = Vec::new();
        for g in self.elements() {
            if proj[g] != usize::MAX {
                continue;
            }
            for x in n.0.iter() {
                proj[self.mul(x, g)] = reps.len();
            }
            reps.push(g);
        }
        let mult = reps
            .iter()
            .map(|&a| reps.iter().map(|&b| proj[self.mul(a, b)]).collect())
            .collect();
        Ok((FinGroup::from_table(mult).expect("quotient group"), proj))
    }
}

/// A subgroup, as the set of its elements.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Subgroup(pub ElemSet);

impl Subgroup {
    pub fn order(self) -> usize {
        self.0.len()
    }

    pub fn contains(self, g: usize) -> bool {
        self.0.contains(g)
    }

    pub fn elements(self) -> Vec<usize> {
        self.0.iter().collect()
    }

    pub fn intersect(self, other: Subgroup) -> Subgroup {
        Subgroup(self.0.intersect(other.0))
    }
}

/// One representative per conjugacy class of subgroups, ordered as in
/// [`FinGroup::all_subgroups`].
pub fn conjugacy_representatives(g: &FinGroup) -> Vec<Subgroup> {
    let mut reps: Vec<Subgroup> = Vec::new();
    for h in g.all_subgroups() {
        if reps.iter().all(|&r| g.conjugator(r, h).is_none()) {
            reps.push(h);
        }
    }
    reps
}

/// Indices of family members grouped by conjugacy, groups ordered by
/// their first member.
pub fn conjugacy_classes_of(g: &FinGroup, family: &[Subgroup]) -> Vec<Vec<usize>> {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, &h) in family.iter().enumerate() {
        match classes.iter_mut().find(|c| g.conjugator(family[c[0]], h).is_some()) {
            Some(c) => c.push(i),
            None => classes.push(vec![i]),
        }
    }
    classes
}

/// Checks that no two members of a family are conjugate (or equal).
pub fn check_family(g: &FinGroup, family: &[Subgroup]) -> Result<()> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    for (a, &h) in family.iter().enumerate() {
        for (b, &k) in family.iter().enumerate().skip(a + 1) {
            if let Some(c) = g.conjugator(h, k) {
                return Err(Error::ConjugateFamily {
                    first: a,
                    second: b,
                    conjugator: c,
                });
            }
        }
    }
    Ok(())
}

/// Disjoint union of right coset spaces `H\G` over a family, with the right
/// `G`-action `Hg · k = H(gk)`.
///
/// Coset points are numbered block by block; within a block the coset `H`
/// itself comes first and the rest follow by least representative.
#[derive(Clone, Debug)]
pub struct CosetSpace {
    group: FinGroup,
    family: Vec<Subgroup>,
    block: Vec<usize>,
    rep: Vec<usize>,
    block_start: Vec<usize>,
    /// `coset_of[b][g]` = point of `H_b g`
    coset_of: Vec<Vec<usize>>,
    act: Vec<Vec<usize>>,
}

impl CosetSpace {
    pub fn new(group: &FinGroup, family: &[Subgroup]) -> Result<Self> {
        if family.is_empty() {
            return Err(Error::EmptyFamily);
        }
        let n = group.order();
        let mut block = Vec::new();
        let mut rep = Vec::new();
        let mut block_start = Vec::new();
        let mut coset_of = Vec::new();
        for (b, &h) in family.iter().enumerate() {
            block_start.push(rep.len());
            let mut local = vec![usize::MAX; n];
            for g in group.elements() {
                if local[g] != usize::MAX {
                    continue;
                }
                let id = rep.len();
                for x in h.0.iter() {
                    local[group.mul(x, g)] = id;
                }
                rep.push(g);
                block.push(b);
            }
            coset_of.push(local);
        }
        let act = (0..rep.len())
            .map(|p| {
                group
                    .elements()
                    .map(|k| coset_of[block[p]][group.mul(rep[p], k)])
                    .collect()
            })
            .collect();
        Ok(Self {
            group: group.clone(),
            family: family.to_vec(),
            block,
            rep,
            block_start,
            coset_of,
            act,
        })
    }

    pub fn group(&self) -> &FinGroup {
        &self.group
    }

    pub fn family(&self) -> &[Subgroup] {
        &self.family
    }

    pub fn len(&self) -> usize {
        self.rep.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rep.is_empty()
    }

    /// Index in the family of the subgroup whose cosets contain point `p`.
    pub fn block(&self, p: usize) -> usize {
        self.block[p]
    }

    /// A representative `g` of the coset `Hg` at point `p`.
    pub fn representative(&self, p: usize) -> usize {
        self.rep[p]
    }

    /// The point `H_b` itself (the identity coset of block `b`).
    pub fn base_point(&self, b: usize) -> usize {
        self.block_start[b]
    }

    pub fn block_points(&self, b: usize) -> std::ops::Range<usize> {
        let end = self.block_start.get(b + 1).copied().unwrap_or(self.len());
        self.block_start[b]..end
    }

    /// The point `H_b g`.
    pub fn coset(&self, b: usize, g: usize) -> usize {
        self.coset_of[b][g]
    }

    #[inline]
    pub fn act(&self, p: usize, g: usize) -> usize {
        self.act[p][g]
    }

    /// Stabilizer of `Hg`, which is `g⁻¹ H g`.
    pub fn stabilizer(&self, p: usize) -> Subgroup {
        Subgroup(self.group.elements().filter(|&k| self.act(p, k) == p).collect())
    }

    pub fn label(&self, p: usize) -> String {
        format!("H{}·{}", self.block[p], self.group.name(self.rep[p]))
    }
}

/// Conjugacy classes of a family, preordered by `(H) ⩾ (K)` iff `H`
/// contains a conjugate of `K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitTypes {
    pub family: Vec<Subgroup>,
    /// `geq[a][b]`: family member `a` contains a conjugate of member `b`.
    pub geq: Vec<Vec<bool>>,
}

impl OrbitTypes {
    pub fn is_partial_order(&self) -> bool {
        let n = self.family.len();
        (0..n).all(|a| self.geq[a][a])
            && (0..n).all(|a| {
                (0..n).all(|b| {
                    (!self.geq[a][b] || !self.geq[b][a] || a == b)
                        && (0..n).all(|c| !self.geq[a][b] || !self.geq[b][c] || self.geq[a][c])
                })
            })
    }

    /// Index of the family member conjugate to `h`, if any.
    pub fn class_of(&self, g: &FinGroup, h: Subgroup) -> Option<usize> {
        self.family.iter().position(|&k| g.conjugator(k, h).is_some())
    }
}

pub fn orbit_type_preorder(g: &FinGroup, family: &[Subgroup]) -> Result<OrbitTypes> {
    check_family(g, family)?;
    let geq = family
        .iter()
        .map(|&h| family.iter().map(|&k| g.subconjugator(h, k).is_some()).collect())
        .collect();
    Ok(OrbitTypes {
        family: family.to_vec(),
        geq,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> FinGroup {
        FinGroup::symmetric(3)
    }

    #[test]
    fn builtins_have_expected_orders() {
        for (name, order) in [
            ("Z2", 2),
            ("Z/4", 4),
            ("S3", 6),
            ("D4", 8),
            ("Q8", 8),
            ("Z2xZ2", 4),
            ("S4", 24),
            ("Z2xZ3", 6),
        ] {
            assert_eq!(FinGroup::builtin(name).unwrap().order(), order, "{name}");
        }
        assert!(FinGroup::builtin("Y3").is_none());
        assert!(FinGroup::builtin("Z0").is_none());
    }

    #[test]
    fn broken_associativity_reports_witness() {
        // identity 0 and inverses exist, but the table is not associative
        let t = vec![vec![0, 1, 2], vec![1, 0, 0], vec![2, 0, 0]];
        match FinGroup::from_table(t) {
            Err(Error::GroupAxiom(GroupAxiomViolation::NotAssociative { a, b, c })) => {
                assert_eq!((a, b, c), (1, 1, 2));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            FinGroup::from_table(vec![vec![0, 1], vec![1]]),
            Err(Error::GroupAxiom(GroupAxiomViolation::NotSquare))
        ));
        assert!(matches!(
            FinGroup::from_table(vec![vec![0, 0], vec![0, 0]]),
            Err(Error::GroupAxiom(GroupAxiomViolation::NoIdentity))
        ));
    }

    #[test]
    fn subgroups_of_small_groups() {
        let z2 = FinGroup::cyclic(2);
        assert_eq!(z2.all_subgroups(), vec![z2.trivial_subgroup(), z2.whole()]);
        let g = s3();
        let subs = g.all_subgroups();
        assert_eq!(subs.len(), 6);
        let orders: Vec<usize> = subs.iter().map(|h| h.order()).collect();
        assert_eq!(orders, vec![1, 2, 2, 2, 3, 6]);
        for i in 1..4 {
            for j in 1..4 {
                assert!(g.conjugator(subs[i], subs[j]).is_some());
            }
        }
        assert!(g.conjugator(subs[1], subs[4]).is_none());
        assert_eq!(conjugacy_representatives(&g).len(), 4);
        // subgroup counts from the lattice of S4, D4, Q8
        assert_eq!(FinGroup::symmetric(4).all_subgroups().len(), 30);
        assert_eq!(FinGroup::dihedral(4).all_subgroups().len(), 10);
        assert_eq!(FinGroup::quaternion().all_subgroups().len(), 6);
    }

    #[test]
    fn conjugator_maps_k_to_h() {
        let g = s3();
        let subs = g.all_subgroups();
        let c = g.conjugator(subs[1], subs[2]).unwrap();
        assert_eq!(g.conjugate_set(subs[2].0, c), subs[1].0);
    }

    #[test]
    fn coset_space_examples() {
        let z4 = FinGroup::cyclic(4);
        let h = z4.generate(&[2]);
        let cs = CosetSpace::new(&z4, &[h]).unwrap();
        assert_eq!(cs.len(), 2);
        assert_eq!(cs.act(0, 1), 1);
        assert_eq!(cs.act(1, 1), 0);

        let g = s3();
        let t = g.generate(&[g.element_named("102").unwrap()]);
        let cs = CosetSpace::new(&g, &[t]).unwrap();
        assert_eq!(cs.len(), 3);
        for p in 0..3 {
            for k in g.elements() {
                let expected = cs.coset(0, g.mul(cs.representative(p), k));
                assert_eq!(cs.act(p, k), expected);
            }
        }

        let whole = CosetSpace::new(&g, &[g.whole()]).unwrap();
        assert_eq!(whole.len(), 1);
        assert!(g.elements().all(|k| whole.act(0, k) == 0));
    }

    #[test]
    fn stabilizer_law_exhaustive() {
        for name in ["Z2", "Z3", "Z4", "Z2xZ2", "S3", "D4", "Q8", "Z6", "S4"] {
            let g = FinGroup::builtin(name).unwrap();
            let subs = g.all_subgroups();
            let cs = CosetSpace::new(&g, &subs).unwrap();
            for p in 0..cs.len() {
                let r = cs.representative(p);
                let expected = g.conjugate_set(subs[cs.block(p)].0, g.inv(r));
                assert_eq!(cs.stabilizer(p).0, expected, "{name} point {p}");
            }
        }
    }

    #[test]
    fn orbit_type_examples() {
        let z2 = FinGroup::cyclic(2);
        let ot = orbit_type_preorder(&z2, &[z2.trivial_subgroup(), z2.whole()]).unwrap();
        assert!(ot.geq[1][0] && !ot.geq[0][1]);

        let g = s3();
        let ot = orbit_type_preorder(&g, &conjugacy_representatives(&g)).unwrap();
        assert_eq!(ot.family.len(), 4);
        assert!(ot.is_partial_order());
        // C2 and C3 are incomparable, both above 1 and below S3
        assert!(!ot.geq[1][2] && !ot.geq[2][1]);
        assert!(ot.geq[3].iter().all(|&b| b));
        assert!((0..4).all(|a| ot.geq[a][0]));

        let subs = g.all_subgroups();
        assert!(matches!(
            orbit_type_preorder(&g, &subs[1..3]),
            Err(Error::ConjugateFamily { first: 0, second: 1, .. })
        ));
    }

    #[test]
    fn orbit_types_antisymmetric_up_to_24() {
        for name in ["Z2", "Z4", "Z2xZ2", "S3", "D4", "Q8", "S4"] {
            let g = FinGroup::builtin(name).unwrap();
            let ot = orbit_type_preorder(&g, &conjugacy_representatives(&g)).unwrap();
            assert!(ot.is_partial_order(), "{name}");
        }
    }

    #[test]
    fn quotient_and_restriction() {
        let v = FinGroup::builtin("Z2xZ2").unwrap();
        let pi = v.generate(&[2]); // (1,0)
        let (q, proj) = v.quotient(pi).unwrap();
        assert_eq!(q.order(), 2);
        assert_eq!(proj[2], proj[0]);
        let g = s3();
        let t = g.generate(&[1]);
        assert!(matches!(g.quotient(t), Err(Error::NotNormal { .. })));
        let (h, emb) = g.restrict(g.generate(&[3]));
        assert_eq!(h.order(), 3);
        assert_eq!(emb.len(), 3);
    }
}
