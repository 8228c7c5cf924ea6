//! Finite topological spaces stored as their specialization preorder.
//!
//! For a finite space the topology and the preorder `x ⊑ y` ("every open set
//! containing `x` also contains `y`", equivalently `x ∈ cl{y}`) determine each
//! other: the open sets are exactly the up-sets of `⊑`. Everything in this
//! crate works with the preorder; open-set lists are only materialized by
//! [`opens_of`] for verification.

mod bitset;
mod canon;

pub use bitset::BitSet;
pub use canon::{canonical_form, CanonicalForm};

use crate::error::{Error, Result};

/// A finite topological space, as a reflexive transitive relation on `0..n`.
///
/// Equality compares the relation only; point labels are cosmetic.
#[derive(Clone)]
pub struct FinSpace {
    up: Vec<BitSet>,
    down: Vec<BitSet>,
    labels: Option<Vec<String>>,
}

impl PartialEq for FinSpace {
    fn eq(&self, other: &Self) -> bool {
        self.up == other.up
    }
}

impl Eq for FinSpace {}

impl std::fmt::Debug for FinSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FinSpace")
            .field("n", &self.len())
            .field("leq", &self.strict_pairs())
            .finish()
    }
}

impl FinSpace {
    /// Reflexive-transitive closure of `pairs` on `n` points.
    pub fn from_relation(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut up: Vec<BitSet> = (0..n).map(|i| BitSet::from_indices(n, [i])).collect();
        for &(i, j) in pairs {
            for k in [i, j] {
                if k >= n {
                    return Err(Error::IndexOutOfRange { index: k, len: n });
                }
            }
            up[i].insert(j);
        }
        // Warshall on bit rows
        for k in 0..n {
            let row_k = up[k].clone();
            for row in up.iter_mut() {
                if row.contains(k) {
                    row.union_with(&row_k);
                }
            }
        }
        Ok(Self::from_up_rows(up))
    }

    /// Builds a space from a relation the caller guarantees to be a preorder.
    pub(crate) fn from_preorder_fn(n: usize, mut leq: impl FnMut(usize, usize) -> bool) -> Self {
        let up: Vec<BitSet> = (0..n)
            .map(|i| BitSet::from_indices(n, (0..n).filter(|&j| leq(i, j))))
            .collect();
        let space = Self::from_up_rows(up);
        debug_assert!(space.is_preorder(), "relation is not a preorder");
        space
    }

    pub(crate) fn from_up_rows(up: Vec<BitSet>) -> Self {
        let n = up.len();
        let mut down: Vec<BitSet> = (0..n).map(|_| BitSet::new(n)).collect();
        for (i, row) in up.iter().enumerate() {
            for j in row.iter() {
                down[j].insert(i);
            }
        }
        Self {
            up,
            down,
            labels: None,
        }
    }

    fn is_preorder(&self) -> bool {
        (0..self.len()).all(|i| {
            self.up[i].contains(i) && self.up[i].iter().all(|j| self.up[j].is_subset(&self.up[i]))
        })
    }

    pub fn discrete(n: usize) -> Self {
        Self::from_preorder_fn(n, |i, j| i == j)
    }

    pub fn indiscrete(n: usize) -> Self {
        Self::from_preorder_fn(n, |_, _| true)
    }

    pub fn point() -> Self {
        Self::discrete(1)
    }

    /// Sierpiński space on `{0, 1}` with `{1}` open, so `0 ⊑ 1`.
    pub fn sierpinski() -> Self {
        Self::from_preorder_fn(2, |i, j| i <= j).with_labels(vec!["0".into(), "1".into()])
    }

    /// Bi-Sierpiński space on `{-1, 0, +1}` (indices 0, 1, 2) whose only
    /// minimal open set is `{0}`: `-1 ⊑ 0` and `+1 ⊑ 0`.
    pub fn bi_sierpinski() -> Self {
        Self::from_preorder_fn(3, |i, j| i == j || j == 1)
            .with_labels(vec!["-1".into(), "0".into(), "+1".into()])
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.len());
        self.labels = Some(labels);
        self
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => i.to_string(),
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.up.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.up.is_empty()
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    /// The minimal open neighbourhood `U_x = {y | x ⊑ y}`.
    #[inline]
    pub fn up_set(&self, x: usize) -> &BitSet {
        &self.up[x]
    }

    /// The closure of `{x}`.
    #[inline]
    pub fn down_set(&self, x: usize) -> &BitSet {
        &self.down[x]
    }

    /// All pairs `(i, j)` with `i ≠ j` and `i ⊑ j`, in lexicographic order.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|i| self.up[i].iter().filter(move |&j| j != i).map(move |j| (i, j)))
            .collect()
    }

    pub fn is_t0(&self) -> bool {
        (0..self.len()).all(|i| self.up[i].iter().all(|j| j == i || !self.leq(j, i)))
    }

    pub fn is_open(&self, set: &BitSet) -> bool {
        set.iter().all(|x| self.up[x].is_subset(set))
    }

    /// Number of distinct minimal open neighbourhoods, which is the weight
    /// (least cardinality of a base) of a finite space.
    pub fn weight(&self) -> usize {
        let mut rows: Vec<&BitSet> = self.up.iter().collect();
        rows.sort_by(|a, b| a.words().cmp(b.words()));
        rows.dedup();
        rows.len()
    }

    /// Componentwise order on `X × Y`; the point `(a, b)` has index `a * |Y| + b`.
    pub fn product(&self, other: &FinSpace) -> FinSpace {
        let m = other.len();
        let mut p = Self::from_preorder_fn(self.len() * m, |i, j| {
            self.leq(i / m, j / m) && other.leq(i % m, j % m)
        });
        if self.labels.is_some() || other.labels.is_some() {
            let labels = (0..self.len() * m)
                .map(|i| format!("({},{})", self.label(i / m), other.label(i % m)))
                .collect();
            p = p.with_labels(labels);
        }
        p
    }

    /// Subspace on `points` (in the given order).
    pub fn subspace(&self, points: &[usize]) -> Result<FinSpace> {
        let mut seen = BitSet::new(self.len());
        for &p in points {
            if p >= self.len() {
                return Err(Error::IndexOutOfRange {
                    index: p,
                    len: self.len(),
                });
            }
            if seen.contains(p) {
                return Err(Error::InvalidPartition(format!("point {p} listed twice")));
            }
            seen.insert(p);
        }
        let mut s = Self::from_preorder_fn(points.len(), |i, j| self.leq(points[i], points[j]));
        if let Some(l) = &self.labels {
            s = s.with_labels(points.iter().map(|&p| l[p].clone()).collect());
        }
        Ok(s)
    }

    /// Quotient by the partition sending point `i` to block `block_of[i]`;
    /// blocks must be numbered `0..k` with none empty.
    pub fn quotient(&self, block_of: &[usize]) -> Result<FinSpace> {
        if block_of.len() != self.len() {
            return Err(Error::InvalidPartition(format!(
                "{} block labels for {} points",
                block_of.len(),
                self.len()
            )));
        }
        let k = block_of.iter().map(|&b| b + 1).max().unwrap_or(0);
        let mut used = vec![false; k];
        for &b in block_of {
            used[b] = true;
        }
        if let Some(b) = used.iter().position(|u| !u) {
            return Err(Error::InvalidPartition(format!("block {b} is empty")));
        }
        let pairs: Vec<(usize, usize)> = self
            .strict_pairs()
            .into_iter()
            .map(|(i, j)| (block_of[i], block_of[j]))
            .collect();
        Self::from_relation(k, &pairs)
    }

    /// Quotient by a list of blocks covering every point exactly once.
    pub fn quotient_by_blocks(&self, blocks: &[Vec<usize>]) -> Result<FinSpace> {
        let mut block_of = vec![usize::MAX; self.len()];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidPartition(format!("block {b} is empty")));
            }
            for &p in block {
                if p >= self.len() {
                    return Err(Error::IndexOutOfRange {
                        index: p,
                        len: self.len(),
                    });
                }
                if block_of[p] != usize::MAX {
                    return Err(Error::InvalidPartition(format!("point {p} in two blocks")));
                }
                block_of[p] = b;
            }
        }
        if let Some(p) = block_of.iter().position(|&b| b == usize::MAX) {
            return Err(Error::InvalidPartition(format!("point {p} not covered")));
        }
        self.quotient(&block_of)
    }

    /// Indiscrete cone: a new bottom point at index 0 whose only open
    /// neighbourhood is the whole space. Old point `i` becomes `i + 1`.
    pub fn indiscrete_cone(&self) -> FinSpace {
        let mut c = Self::from_preorder_fn(self.len() + 1, |i, j| {
            i == 0 || (j != 0 && self.leq(i - 1, j - 1))
        });
        if let Some(l) = &self.labels {
            let mut labels = vec!["*".to_string()];
            labels.extend(l.iter().cloned());
            c = c.with_labels(labels);
        }
        c
    }

    /// Connected components of the comparability graph, each sorted, ordered
    /// by least element.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![s];
            comp[s] = id;
            let mut members = vec![];
            while let Some(x) = stack.pop() {
                members.push(x);
                for y in self.up[x].iter().chain(self.down[x].iter()) {
                    if comp[y] == usize::MAX {
                        comp[y] = id;
                        stack.push(y);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Every point set in the family, as a bit set, is open.
    pub fn all_open(&self, sets: &[BitSet]) -> bool {
        sets.iter().all(|s| self.is_open(s))
    }
}

/// Open sets and the minimal base of a finite space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Opens {
    /// All up-sets, each sorted, listed in lexicographic order.
    pub sets: Vec<Vec<usize>>,
    /// The distinct minimal neighbourhoods `U_x`.
    pub base: Vec<Vec<usize>>,
}

/// Enumerates the open sets (up-sets) of `x`. The count can be exponential
/// in the number of points.
pub fn opens_of(x: &FinSpace) -> Opens {
    let n = x.len();
    let mut sets = Vec::new();
    let mut current = BitSet::new(n);
    let mut excluded = BitSet::new(n);
    fn rec(
        x: &FinSpace,
        i: usize,
        current: &mut BitSet,
        excluded: &mut BitSet,
        out: &mut Vec<Vec<usize>>,
    ) {
        if i == x.len() {
            out.push(current.iter().collect());
            return;
        }
        // include i: nothing above i may have been excluded
        if x.up_set(i).iter().all(|j| !excluded.contains(j)) {
            current.insert(i);
            rec(x, i + 1, current, excluded, out);
            current.remove(i);
        }
        // exclude i: nothing below i may have been included
        if x.down_set(i).iter().all(|j| !current.contains(j)) {
            excluded.insert(i);
            rec(x, i + 1, current, excluded, out);
            excluded.remove(i);
        }
    }
    rec(x, 0, &mut current, &mut excluded, &mut sets);
    sets.sort();
    let mut base: Vec<Vec<usize>> = (0..n).map(|i| x.up_set(i).iter().collect()).collect();
    base.sort();
    base.dedup();
    Opens { sets, base }
}

/// Recovers the specialization preorder from a list of open sets on `n`
/// points. The list must be a topology: it contains `∅` and the whole set and
/// is closed under pairwise union and intersection.
pub fn specialization_of_topology(n: usize, opens: &[Vec<usize>]) -> Result<FinSpace> {
    let mut sets = Vec::with_capacity(opens.len());
    for o in opens {
        for &p in o {
            if p >= n {
                return Err(Error::IndexOutOfRange { index: p, len: n });
            }
        }
        sets.push(BitSet::from_indices(n, o.iter().copied()));
    }
    if !sets.iter().any(|s| s.is_empty()) {
        return Err(Error::NotATopology("missing the empty set".into()));
    }
    if !sets.iter().any(|s| s.count() == n) {
        return Err(Error::NotATopology("missing the whole space".into()));
    }
    let mut sorted: Vec<&[u64]> = sets.iter().map(|s| s.words()).collect();
    sorted.sort();
    let member = |s: &BitSet| sorted.binary_search(&s.words()).is_ok();
    for (a, sa) in sets.iter().enumerate() {
        for sb in &sets[a + 1..] {
            let mut u = sa.clone();
            u.union_with(sb);
            if !member(&u) {
                return Err(Error::NotATopology(format!("union {u:?} missing")));
            }
            let mut i = sa.clone();
            i.intersect_with(sb);
            if !member(&i) {
                return Err(Error::NotATopology(format!("intersection {i:?} missing")));
            }
        }
    }
    Ok(FinSpace::from_preorder_fn(n, |x, y| {
        sets.iter().all(|s| !s.contains(x) || s.contains(y))
    }))
}

/// All preorders on `n` labelled points (355 for `n = 4`).
pub fn all_preorders(n: usize) -> Vec<FinSpace> {
    let off: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    assert!(off.len() < 32, "too many points to enumerate preorders");
    let mut out = Vec::new();
    for mask in 0u32..(1 << off.len()) {
        let rel = |i: usize, j: usize| -> bool {
            i == j || {
                let k = off.iter().position(|&p| p == (i, j)).unwrap();
                mask >> k & 1 == 1
            }
        };
        let transitive = (0..n).all(|i| {
            (0..n).all(|j| !rel(i, j) || (0..n).all(|k| !rel(j, k) || rel(i, k)))
        });
        if transitive {
            out.push(FinSpace::from_preorder_fn(n, rel));
        }
    }
    out
}

/// A function between finite spaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceMap {
    pub dom: FinSpace,
    pub cod: FinSpace,
    pub values: Vec<usize>,
}

impl SpaceMap {
    pub fn new(dom: FinSpace, cod: FinSpace, values: Vec<usize>) -> Result<Self> {
        if values.len() != dom.len() {
            return Err(Error::InvalidMap(format!(
                "{} values for {} domain points",
                values.len(),
                dom.len()
            )));
        }
        if let Some(&v) = values.iter().find(|&&v| v >= cod.len()) {
            return Err(Error::IndexOutOfRange {
                index: v,
                len: cod.len(),
            });
        }
        Ok(Self { dom, cod, values })
    }

    pub fn identity(x: &FinSpace) -> Self {
        Self {
            dom: x.clone(),
            cod: x.clone(),
            values: (0..x.len()).collect(),
        }
    }

    /// Continuity, tested as monotonicity of the specialization preorders.
    pub fn is_continuous(&self) -> bool {
        self.first_discontinuity().is_none()
    }

    /// A pair `x ⊑ y` whose images are not comparable, if any.
    pub fn first_discontinuity(&self) -> Option<(usize, usize)> {
        (0..self.dom.len()).find_map(|x| {
            self.dom
                .up_set(x)
                .iter()
                .find(|&y| !self.cod.leq(self.values[x], self.values[y]))
                .map(|y| (x, y))
        })
    }

    /// Continuity by the definition: every open set of the codomain has an
    /// open preimage. Exponential; meant as a cross-check.
    pub fn preimages_open(&self) -> bool {
        opens_of(&self.cod).sets.iter().all(|o| {
            let target = BitSet::from_indices(self.cod.len(), o.iter().copied());
            let pre = BitSet::from_indices(
                self.dom.len(),
                (0..self.dom.len()).filter(|&x| target.contains(self.values[x])),
            );
            self.dom.is_open(&pre)
        })
    }

    /// Image of every open set is open. Checking minimal neighbourhoods
    /// suffices since images commute with unions.
    pub fn is_open_map(&self) -> bool {
        (0..self.dom.len()).all(|x| {
            let img = BitSet::from_indices(
                self.cod.len(),
                self.dom.up_set(x).iter().map(|y| self.values[y]),
            );
            self.cod.is_open(&img)
        })
    }

    pub fn is_bijective(&self) -> bool {
        if self.dom.len() != self.cod.len() {
            return false;
        }
        let mut hit = vec![false; self.cod.len()];
        self.values.iter().all(|&v| !std::mem::replace(&mut hit[v], true))
    }

    /// Bijective and an order isomorphism in both directions.
    pub fn is_homeomorphism(&self) -> bool {
        self.is_bijective()
            && (0..self.dom.len()).all(|x| {
                (0..self.dom.len())
                    .all(|y| self.dom.leq(x, y) == self.cod.leq(self.values[x], self.values[y]))
            })
    }

    pub fn compose(&self, then: &SpaceMap) -> Result<SpaceMap> {
        if self.cod != then.dom {
            return Err(Error::InvalidMap("codomain does not match domain".into()));
        }
        SpaceMap::new(
            self.dom.clone(),
            then.cod.clone(),
            self.values.iter().map(|&v| then.values[v]).collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> Vec<usize> {
        v.to_vec()
    }

    #[test]
    fn sierpinski_from_relation() {
        let s = FinSpace::from_relation(2, &[(0, 1)]).unwrap();
        assert_eq!(s, FinSpace::sierpinski());
        assert_eq!(opens_of(&s).sets, vec![set(&[]), set(&[0, 1]), set(&[1])]);
    }

    #[test]
    fn chain_closure_and_discrete() {
        let c = FinSpace::from_relation(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(c.leq(0, 2));
        assert!(!c.leq(2, 0));
        assert_eq!(FinSpace::from_relation(3, &[]).unwrap(), FinSpace::discrete(3));
    }

    #[test]
    fn out_of_range_pair() {
        assert_eq!(
            FinSpace::from_relation(2, &[(0, 2)]),
            Err(Error::IndexOutOfRange { index: 2, len: 2 })
        );
    }

    #[test]
    fn bi_sierpinski_opens() {
        // indices: 0 = -1, 1 = 0, 2 = +1
        let mut expected = vec![set(&[]), set(&[1]), set(&[0, 1]), set(&[1, 2]), set(&[0, 1, 2])];
        expected.sort();
        assert_eq!(opens_of(&FinSpace::bi_sierpinski()).sets, expected);
        assert_eq!(opens_of(&FinSpace::discrete(2)).sets.len(), 4);
    }

    #[test]
    fn duality_examples() {
        let s = specialization_of_topology(2, &[set(&[]), set(&[1]), set(&[0, 1])]).unwrap();
        assert!(s.leq(0, 1) && !s.leq(1, 0));
        let ind = specialization_of_topology(2, &[set(&[]), set(&[0, 1])]).unwrap();
        assert!(ind.leq(0, 1) && ind.leq(1, 0));
        assert!(!ind.is_t0());
        let bi = specialization_of_topology(3, &opens_of(&FinSpace::bi_sierpinski()).sets).unwrap();
        assert!(bi.leq(0, 1) && bi.leq(2, 1));
        assert!(!bi.leq(1, 0) && !bi.leq(0, 2));
    }

    #[test]
    fn not_a_topology() {
        assert!(matches!(
            specialization_of_topology(2, &[set(&[]), set(&[0]), set(&[1]), set(&[0, 1]), set(&[])])
                .map(|_| ()),
            Ok(())
        ));
        assert!(matches!(
            specialization_of_topology(3, &[set(&[]), set(&[0]), set(&[1]), set(&[0, 1, 2])]),
            Err(Error::NotATopology(_))
        ));
        assert!(matches!(
            specialization_of_topology(2, &[set(&[1]), set(&[0, 1])]),
            Err(Error::NotATopology(_))
        ));
    }

    #[test]
    fn continuity_examples() {
        let s = FinSpace::sierpinski();
        assert!(SpaceMap::identity(&s).is_continuous());
        let swap = SpaceMap::new(s.clone(), s.clone(), vec![1, 0]).unwrap();
        assert!(!swap.is_continuous());
        assert!(!swap.preimages_open());
    }

    #[test]
    fn all_functions_bisierpinski_to_sierpinski() {
        let (a, b) = (FinSpace::bi_sierpinski(), FinSpace::sierpinski());
        let mut continuous = 0;
        for code in 0..8usize {
            let values = (0..3).map(|i| code >> i & 1).collect();
            let f = SpaceMap::new(a.clone(), b.clone(), values).unwrap();
            assert_eq!(f.is_continuous(), f.preimages_open());
            continuous += f.is_continuous() as usize;
        }
        // images of -1 and +1 must lie below the image of 0
        assert_eq!(continuous, 5);
    }

    #[test]
    fn products_subspaces_quotients() {
        let s = FinSpace::sierpinski();
        let p = s.product(&s);
        assert_eq!(p.len(), 4);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(p.leq(i, j), s.leq(i / 2, j / 2) && s.leq(i % 2, j % 2));
            }
        }
        let sub = FinSpace::bi_sierpinski().subspace(&[0, 2]).unwrap();
        assert_eq!(sub, FinSpace::discrete(2));
        let q = FinSpace::discrete(2).quotient(&[0, 0]).unwrap();
        assert_eq!(q, FinSpace::point());
        assert!(matches!(
            FinSpace::discrete(2).quotient(&[0, 2, 2][..2]),
            Err(Error::InvalidPartition(_))
        ));
        assert!(matches!(
            FinSpace::discrete(3).quotient_by_blocks(&[vec![0], vec![1]]),
            Err(Error::InvalidPartition(_))
        ));
    }

    #[test]
    fn cones() {
        assert_eq!(FinSpace::point().indiscrete_cone(), FinSpace::sierpinski());
        let c = FinSpace::discrete(2).indiscrete_cone();
        assert_eq!(c.len(), 3);
        assert!(c.leq(0, 1) && c.leq(0, 2) && !c.leq(1, 2));
        assert!(c.is_open(&BitSet::from_indices(3, [1])));
        assert!(!c.is_open(&BitSet::from_indices(3, [0])));
        assert_eq!(FinSpace::discrete(0).indiscrete_cone(), FinSpace::point());
    }

    #[test]
    fn weights() {
        assert_eq!(FinSpace::discrete(5).weight(), 5);
        assert_eq!(FinSpace::sierpinski().weight(), 2);
        // circle: vertices 0,1 below edges 2,3
        let circle = FinSpace::from_relation(4, &[(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        assert_eq!(circle.weight(), 4);
        assert_eq!(FinSpace::indiscrete(3).weight(), 1);
    }

    #[test]
    fn preorder_counts() {
        let counts: Vec<usize> = (0..=4).map(|n| all_preorders(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 4, 29, 355]);
    }
}
