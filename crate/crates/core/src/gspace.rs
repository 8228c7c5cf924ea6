//! Finite spaces with a right action of a finite group.

use crate::error::{Error, Result};
use crate::finspace::{BitSet, FinSpace, SpaceMap};
use crate::group::{orbit_type_preorder, CosetSpace, FinGroup, Subgroup};

/// A finite space with a right `G`-action by order automorphisms;
/// `act[x][g]` is `x·g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GSpace {
    space: FinSpace,
    group: FinGroup,
    act: Vec<Vec<usize>>,
}

impl GSpace {
    pub fn new(space: FinSpace, group: FinGroup, act: Vec<Vec<usize>>) -> Result<Self> {
        let n = space.len();
        let m = group.order();
        if act.len() != n || act.iter().any(|r| r.len() != m) {
            return Err(Error::InvalidAction(format!("action table must be {n}×{m}")));
        }
        if let Some(&v) = act.iter().flatten().find(|&&v| v >= n) {
            return Err(Error::InvalidAction(format!("image {v} out of range")));
        }
        let e = group.identity();
        for x in 0..n {
            if act[x][e] != x {
                return Err(Error::InvalidAction(format!("identity moves point {x}")));
            }
            for g in 0..m {
                for h in 0..m {
                    if act[act[x][g]][h] != act[x][group.mul(g, h)] {
                        return Err(Error::InvalidAction(format!(
                            "(x·{g})·{h} != x·({g}{h}) at x = {x}"
                        )));
                    }
                }
            }
        }
        // each x ↦ x·g is a bijection (its inverse is ·g⁻¹); check it is monotone
        for g in 0..m {
            for x in 0..n {
                for y in space.up_set(x).iter() {
                    if !space.leq(act[x][g], act[y][g]) {
                        return Err(Error::InvalidAction(format!(
                            "element {g} is not continuous: {x} ⊑ {y}"
                        )));
                    }
                }
            }
        }
        Ok(Self { space, group, act })
    }

    pub(crate) fn new_unchecked(space: FinSpace, group: FinGroup, act: Vec<Vec<usize>>) -> Self {
        let x = Self { space, group, act };
        debug_assert!(Self::new(x.space.clone(), x.group.clone(), x.act.clone()).is_ok());
        x
    }

    /// Discrete space `F\G` with right translation.
    pub fn from_cosets(cs: &CosetSpace) -> Self {
        let n = cs.len();
        let act = (0..n)
            .map(|p| cs.group().elements().map(|g| cs.act(p, g)).collect())
            .collect();
        let labels = (0..n).map(|p| cs.label(p)).collect();
        Self::new_unchecked(
            FinSpace::discrete(n).with_labels(labels),
            cs.group().clone(),
            act,
        )
    }

    /// `G` acting on itself by right translation.
    pub fn free_orbit(group: &FinGroup) -> Self {
        let act = group
            .elements()
            .map(|x| group.elements().map(|g| group.mul(x, g)).collect())
            .collect();
        let labels = group.elements().map(|g| group.name(g)).collect();
        Self::new_unchecked(
            FinSpace::discrete(group.order()).with_labels(labels),
            group.clone(),
            act,
        )
    }

    pub fn trivial(space: FinSpace, group: &FinGroup) -> Self {
        let act = (0..space.len())
            .map(|x| vec![x; group.order()])
            .collect();
        Self::new_unchecked(space, group.clone(), act)
    }

    pub fn space(&self) -> &FinSpace {
        &self.space
    }

    pub fn group(&self) -> &FinGroup {
        &self.group
    }

    pub fn action_table(&self) -> &[Vec<usize>] {
        &self.act
    }

    pub fn len(&self) -> usize {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }

    #[inline]
    pub fn act(&self, x: usize, g: usize) -> usize {
        self.act[x][g]
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.space.leq(x, y)
    }

    pub fn isotropy(&self, x: usize) -> Subgroup {
        Subgroup(self.group.elements().filter(|&g| self.act(x, g) == x).collect())
    }

    /// The orbit of `x`, sorted.
    pub fn orbit(&self, x: usize) -> Vec<usize> {
        let mut o: Vec<usize> = self.act[x].clone();
        o.sort_unstable();
        o.dedup();
        o
    }

    pub fn is_free(&self) -> bool {
        (0..self.len()).all(|x| self.isotropy(x).order() == 1)
    }

    pub fn is_invariant(&self, set: &BitSet) -> bool {
        set.iter().all(|x| self.act[x].iter().all(|&y| set.contains(y)))
    }

    /// Orbits numbered by least element; the preorder is
    /// `xG ⊑ yG` iff `x ⊑ y·g` for some `g`.
    pub fn orbit_space(&self) -> OrbitSpace {
        let n = self.len();
        let mut proj = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for x in 0..n {
            if proj[x] == usize::MAX {
                for &y in &self.act[x] {
                    proj[y] = reps.len();
                }
                reps.push(x);
            }
        }
        let k = reps.len();
        let mut up: Vec<BitSet> = (0..k).map(|_| BitSet::new(k)).collect();
        for (a, &x) in reps.iter().enumerate() {
            for y in self.space.up_set(x).iter() {
                up[a].insert(proj[y]);
            }
        }
        let mut space = FinSpace::from_up_rows(up);
        if self.space.labels().is_some() {
            space = space.with_labels(reps.iter().map(|&x| format!("{}G", self.space.label(x))).collect());
        }
        OrbitSpace { space, proj, reps }
    }

    /// `X × Y` with `G` acting on the first factor only; `(x, y)` has index
    /// `x * |Y| + y`.
    pub fn product_trivial(&self, y: &FinSpace) -> GSpace {
        let m = y.len();
        let act = (0..self.len() * m)
            .map(|p| {
                self.group
                    .elements()
                    .map(|g| self.act(p / m, g) * m + p % m)
                    .collect()
            })
            .collect();
        Self::new_unchecked(self.space.product(y), self.group.clone(), act)
    }

    /// Disjoint union; points of `other` follow those of `self`.
    pub fn sum(&self, other: &GSpace) -> Result<GSpace> {
        if self.group != other.group {
            return Err(Error::GroupMismatch);
        }
        let n = self.len();
        let total = n + other.len();
        let space = FinSpace::from_preorder_fn(total, |a, b| match (a < n, b < n) {
            (true, true) => self.leq(a, b),
            (false, false) => other.leq(a - n, b - n),
            _ => false,
        });
        let act = (0..total)
            .map(|p| {
                if p < n {
                    self.act[p].clone()
                } else {
                    other.act[p - n].iter().map(|&q| q + n).collect()
                }
            })
            .collect();
        Ok(Self::new_unchecked(space, self.group.clone(), act))
    }

    /// `X × Y` with the diagonal action; `(x, y)` has index `x * |Y| + y`.
    pub fn product(&self, other: &GSpace) -> Result<GSpace> {
        if self.group != other.group {
            return Err(Error::GroupMismatch);
        }
        let m = other.len();
        let act = (0..self.len() * m)
            .map(|p| {
                self.group
                    .elements()
                    .map(|g| self.act(p / m, g) * m + other.act(p % m, g))
                    .collect()
            })
            .collect();
        Ok(Self::new_unchecked(self.space.product(&other.space), self.group.clone(), act))
    }

    /// The invariant subspace on `points` (in the given order).
    pub fn subspace(&self, points: &[usize]) -> Result<GSpace> {
        let space = self.space.subspace(points)?;
        let mut pos = vec![usize::MAX; self.len()];
        for (i, &p) in points.iter().enumerate() {
            pos[p] = i;
        }
        let mut act = Vec::with_capacity(points.len());
        for &p in points {
            let row: Vec<usize> = self.act[p].iter().map(|&q| pos[q]).collect();
            if row.contains(&usize::MAX) {
                return Err(Error::InvalidAction(format!("subset not invariant at point {p}")));
            }
            act.push(row);
        }
        Ok(Self::new_unchecked(space, self.group.clone(), act))
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        self.space = self.space.with_labels(labels);
        self
    }

    /// The same space with the action restricted to `k`; returns the
    /// embedding of the new group's elements into `G`.
    pub fn restrict(&self, k: Subgroup) -> (GSpace, Vec<usize>) {
        let (sub, emb) = self.group.restrict(k);
        let act = self
            .act
            .iter()
            .map(|row| emb.iter().map(|&g| row[g]).collect())
            .collect();
        (Self::new_unchecked(self.space.clone(), sub, act), emb)
    }
}

/// Orbit space `X/G` with the projection and one representative per orbit.
#[derive(Clone, Debug)]
pub struct OrbitSpace {
    pub space: FinSpace,
    pub proj: Vec<usize>,
    pub reps: Vec<usize>,
}

impl OrbitSpace {
    pub fn projection(&self, x: &GSpace) -> SpaceMap {
        SpaceMap::new(x.space().clone(), self.space.clone(), self.proj.clone())
            .expect("orbit projection is continuous")
    }
}

fn check_same_group(dom: &GSpace, cod: &GSpace, values: &[usize]) -> Result<()> {
    if dom.group != cod.group {
        return Err(Error::GroupMismatch);
    }
    if values.len() != dom.len() || values.iter().any(|&v| v >= cod.len()) {
        return Err(Error::InvalidMap(format!(
            "expected {} values in 0..{}",
            dom.len(),
            cod.len()
        )));
    }
    Ok(())
}

/// `f(x·g) = f(x)·g` for all `x`, `g`.
pub fn is_equivariant(dom: &GSpace, cod: &GSpace, values: &[usize]) -> Result<bool> {
    check_same_group(dom, cod, values)?;
    Ok((0..dom.len())
        .all(|x| dom.group.elements().all(|g| values[dom.act(x, g)] == cod.act(values[x], g))))
}

/// Equivariant with `G_x = G_{f(x)}` for every `x`.
pub fn is_isovariant(dom: &GSpace, cod: &GSpace, values: &[usize]) -> Result<bool> {
    Ok(is_equivariant(dom, cod, values)?
        && (0..dom.len()).all(|x| dom.isotropy(x) == cod.isotropy(values[x])))
}

/// Equivariant, bijective and an order isomorphism.
pub fn is_g_homeomorphism(dom: &GSpace, cod: &GSpace, values: &[usize]) -> Result<bool> {
    if !is_equivariant(dom, cod, values)? {
        return Ok(false);
    }
    let map = SpaceMap::new(dom.space.clone(), cod.space.clone(), values.to_vec());
    Ok(map.map(|m| m.is_homeomorphism()).unwrap_or(false))
}

/// `S ×_H G`: the orbit space of `S × G` (with `G` discrete) under
/// `(s, g)·h = (s·h, h⁻¹g)`, carrying the action `[s, g]·k = [s, gk]`.
#[derive(Clone, Debug)]
pub struct InducedSpace {
    pub space: GSpace,
    pub subgroup: Subgroup,
    /// The slice, as points of the ambient space (or `0..|S|` for an
    /// abstract slice).
    pub slice: Vec<usize>,
    /// `class[i * |G| + g]` is the point `[slice[i], g]`.
    pub class: Vec<usize>,
    /// A pair `(i, g)` representing each point.
    pub reps: Vec<(usize, usize)>,
}

impl InducedSpace {
    /// Builds `S ×_H G` for an `H`-invariant subset `S` of `x`.
    pub fn new(x: &GSpace, slice: &[usize], h: Subgroup) -> Result<Self> {
        let mut pos = vec![usize::MAX; x.len()];
        for (i, &s) in slice.iter().enumerate() {
            pos[s] = i;
        }
        for &s in slice {
            if let Some(k) = h.0.iter().find(|&k| pos[x.act(s, k)] == usize::MAX) {
                return Err(Error::InvalidAction(format!(
                    "slice not invariant: {s}·{k} leaves it"
                )));
            }
        }
        let space = x.space.subspace(slice)?;
        let mut ind = Self::from_h_space(&space, &x.group, h, |i, k| pos[x.act(slice[i], k)]);
        ind.slice = slice.to_vec();
        Ok(ind)
    }

    /// Builds `S ×_H G` from an abstract `H`-space: `h_act(i, k)` is the
    /// point `s_i·k` for `k ∈ H`, given as an element of `G`.
    pub fn from_h_space(
        s: &FinSpace,
        g: &FinGroup,
        h: Subgroup,
        h_act: impl Fn(usize, usize) -> usize,
    ) -> Self {
        let m = g.order();
        let n = s.len() * m;
        let mut class = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for i in 0..s.len() {
            for a in 0..m {
                if class[i * m + a] != usize::MAX {
                    continue;
                }
                for k in h.0.iter() {
                    class[h_act(i, k) * m + g.mul(g.inv(k), a)] = reps.len();
                }
                reps.push((i, a));
            }
        }
        let k = reps.len();
        // [s,a] ⊑ [t,b] iff some h ∈ H has a = h⁻¹b and s ⊑ t·h, i.e. h = b a⁻¹
        let space = FinSpace::from_preorder_fn(k, |p, q| {
            let ((i, a), (j, b)) = (reps[p], reps[q]);
            let hh = g.mul(b, g.inv(a));
            h.contains(hh) && s.leq(i, h_act(j, hh))
        });
        let act = reps
            .iter()
            .map(|&(i, a)| g.elements().map(|c| class[i * m + g.mul(a, c)]).collect())
            .collect();
        Self {
            space: GSpace::new_unchecked(space, g.clone(), act),
            subgroup: h,
            slice: (0..s.len()).collect(),
            class,
            reps,
        }
    }

    pub fn point(&self, slice_index: usize, g: usize) -> usize {
        self.class[slice_index * self.space.group.order() + g]
    }
}

/// A space filtered by a preorder `P`: `below[b][a]` records `b ≼ a`, and
/// `skeleta[a]` is `Y^a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredSpace {
    pub space: FinSpace,
    pub below: Vec<Vec<bool>>,
    pub skeleta: Vec<BitSet>,
}

impl FilteredSpace {
    pub fn new(space: FinSpace, below: Vec<Vec<bool>>, skeleta: Vec<BitSet>) -> Result<Self> {
        let k = below.len();
        if skeleta.len() != k || below.iter().any(|r| r.len() != k) {
            return Err(Error::InvalidPartition("index preorder and skeleta disagree in size".into()));
        }
        for a in 0..k {
            for b in 0..k {
                if below[b][a] && !skeleta[b].is_subset(&skeleta[a]) {
                    return Err(Error::InvalidPartition(format!(
                        "skeleton {b} is not contained in skeleton {a}"
                    )));
                }
            }
        }
        Ok(Self {
            space,
            below,
            skeleta,
        })
    }

    fn strictly_below(&self, b: usize, a: usize) -> bool {
        self.below[b][a] && !self.below[a][b]
    }

    /// `Y_a = Y^a − ⋃_{b ≺ a} Y^b`.
    pub fn stratum(&self, a: usize) -> BitSet {
        let mut s = self.skeleta[a].clone();
        for b in (0..self.below.len()).filter(|&b| self.strictly_below(b, a)) {
            for y in self.skeleta[b].iter() {
                s.remove(y);
            }
        }
        s
    }

    pub fn strata(&self) -> Vec<BitSet> {
        (0..self.below.len()).map(|a| self.stratum(a)).collect()
    }
}

/// Orbit-type filtration of `X/G` indexed by the family: index `b ≼ a` iff
/// `(H_b) ⩾ (H_a)`, and `Y^a = {xG | H_a ⊆ g⁻¹G_x g for some g}`.
pub fn orbit_type_filtration(x: &GSpace, family: &[Subgroup]) -> Result<(OrbitSpace, FilteredSpace)> {
    let g = &x.group;
    let types = orbit_type_preorder(g, family)?;
    let orbits = x.orbit_space();
    let iso: Vec<Subgroup> = orbits.reps.iter().map(|&r| x.isotropy(r)).collect();
    for (o, &h) in iso.iter().enumerate() {
        if types.class_of(g, h).is_none() {
            return Err(Error::IsotropyNotInFamily { point: orbits.reps[o] });
        }
    }
    let k = family.len();
    let below: Vec<Vec<bool>> = (0..k).map(|b| (0..k).map(|a| types.geq[b][a]).collect()).collect();
    let skeleta = family
        .iter()
        .map(|&h| {
            BitSet::from_indices(
                iso.len(),
                (0..iso.len()).filter(|&o| g.subconjugator(iso[o], h).is_some()),
            )
        })
        .collect();
    let filt = FilteredSpace::new(orbits.space.clone(), below, skeleta)?;
    Ok((orbits, filt))
}

fn check_filtered_pair(values: &[usize], y: &FilteredSpace, z: &FilteredSpace) -> Result<()> {
    if y.below != z.below {
        return Err(Error::PreorderMismatch);
    }
    if values.len() != y.space.len() || values.iter().any(|&v| v >= z.space.len()) {
        return Err(Error::InvalidMap("values do not match the filtered spaces".into()));
    }
    Ok(())
}

/// `f(Y^a) ⊆ Z^a` for every index `a`.
pub fn is_filtered_map(values: &[usize], y: &FilteredSpace, z: &FilteredSpace) -> Result<bool> {
    check_filtered_pair(values, y, z)?;
    Ok((0..y.skeleta.len()).all(|a| y.skeleta[a].iter().all(|p| z.skeleta[a].contains(values[p]))))
}

/// `f(Y_a) ⊆ Z_a` for every index `a`.
pub fn is_stratified_map(values: &[usize], y: &FilteredSpace, z: &FilteredSpace) -> Result<bool> {
    check_filtered_pair(values, y, z)?;
    let (sy, sz) = (y.strata(), z.strata());
    Ok(sy.iter().zip(&sz).all(|(a, b)| a.iter().all(|p| b.contains(values[p]))))
}

/// All conjugates of `h` in `g`.
pub fn conjugates(g: &FinGroup, h: Subgroup) -> Vec<Subgroup> {
    let mut out: Vec<Subgroup> = g
        .elements()
        .map(|c| Subgroup(g.conjugate_set(h.0, c)))
        .collect();
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FinGroup;

    fn s3() -> FinGroup {
        FinGroup::symmetric(3)
    }

    #[test]
    fn isotropy_examples() {
        let g = s3();
        let free = GSpace::free_orbit(&g);
        assert!(free.is_free());
        let subs = g.all_subgroups();
        let cs = CosetSpace::new(&g, &[subs[1]]).unwrap();
        let x = GSpace::from_cosets(&cs);
        for p in 0..x.len() {
            assert_eq!(x.isotropy(p), cs.stabilizer(p));
        }
        let pt = GSpace::trivial(FinSpace::point(), &g);
        assert_eq!(pt.isotropy(0), g.whole());
    }

    #[test]
    fn orbit_space_examples() {
        let g = s3();
        assert_eq!(GSpace::free_orbit(&g).orbit_space().space.len(), 1);
        let x = FinSpace::bi_sierpinski();
        let t = GSpace::trivial(x.clone(), &g);
        assert_eq!(t.orbit_space().space, x);
    }

    #[test]
    fn orbit_space_matches_generic_quotient_and_is_open() {
        let z2 = FinGroup::cyclic(2);
        // Z/2 swapping the two ends of a 4-chain ordered 0 ⊑ 1, 3 ⊑ 2 ...
        let space = FinSpace::from_relation(4, &[(0, 1), (3, 2)]).unwrap();
        let x = GSpace::new(space, z2, vec![vec![0, 3], vec![1, 2], vec![2, 1], vec![3, 0]]).unwrap();
        let o = x.orbit_space();
        assert_eq!(o.space, x.space().quotient(&o.proj).unwrap());
        let p = o.projection(&x);
        assert!(p.is_continuous() && p.is_open_map());
    }

    #[test]
    fn rejects_non_actions() {
        let z2 = FinGroup::cyclic(2);
        let s = FinSpace::sierpinski();
        assert!(matches!(
            GSpace::new(s.clone(), z2.clone(), vec![vec![0, 1], vec![1, 0]]),
            Err(Error::InvalidAction(_))
        ));
        assert!(matches!(
            GSpace::new(s, z2, vec![vec![1, 1], vec![1, 1]]),
            Err(Error::InvalidAction(_))
        ));
    }

    #[test]
    fn equivariance_examples() {
        let g = FinGroup::cyclic(3);
        let free = GSpace::free_orbit(&g);
        let id: Vec<usize> = (0..3).collect();
        assert!(is_equivariant(&free, &free, &id).unwrap());
        assert!(is_isovariant(&free, &free, &id).unwrap());
        let pt = GSpace::trivial(FinSpace::point(), &g);
        assert!(is_equivariant(&free, &pt, &[0, 0, 0]).unwrap());
        assert!(!is_isovariant(&free, &pt, &[0, 0, 0]).unwrap());
        let other = GSpace::free_orbit(&FinGroup::cyclic(2));
        assert_eq!(is_equivariant(&free, &other, &[0, 0, 0]), Err(Error::GroupMismatch));
    }

    #[test]
    fn isotropy_conjugates_along_orbits() {
        let g = FinGroup::symmetric(4);
        let subs = g.all_subgroups();
        let x = GSpace::from_cosets(&CosetSpace::new(&g, &subs[..8]).unwrap());
        for p in 0..x.len() {
            for k in g.elements() {
                let expected = g.conjugate_set(x.isotropy(p).0, g.inv(k));
                assert_eq!(x.isotropy(x.act(p, k)).0, expected);
            }
        }
    }

    #[test]
    fn induced_space_of_a_point() {
        // pt ×_H G ≅ H\G
        let g = s3();
        for h in g.all_subgroups() {
            let pt = GSpace::trivial(FinSpace::point(), &g);
            let ind = InducedSpace::new(&pt, &[0], h).unwrap();
            assert_eq!(ind.space.len(), 6 / h.order());
            assert_eq!(ind.space.isotropy(ind.point(0, 0)), h);
        }
    }

    #[test]
    fn orbit_type_filtration_examples() {
        let g = s3();
        let subs = g.all_subgroups();
        let fam = [g.trivial_subgroup(), subs[1]];
        let x = GSpace::from_cosets(&CosetSpace::new(&g, &fam).unwrap());
        let (orb, filt) = orbit_type_filtration(&x, &fam).unwrap();
        assert_eq!(orb.space.len(), 2);
        let strata = filt.strata();
        // orbit 0 is the free block, orbit 1 the three cosets of the order-2 subgroup
        assert_eq!(strata[0].iter().collect::<Vec<_>>(), vec![0]);
        assert_eq!(strata[1].iter().collect::<Vec<_>>(), vec![1]);
        assert_eq!(filt.skeleta[0].count(), 2);

        let free = GSpace::free_orbit(&g);
        let (_, f) = orbit_type_filtration(&free, &[g.trivial_subgroup()]).unwrap();
        assert_eq!(f.skeleta[0].count(), 1);

        let with_fixed = free.sum(&GSpace::trivial(FinSpace::point(), &g)).unwrap();
        let fam = [g.trivial_subgroup(), g.whole()];
        let (orb, f) = orbit_type_filtration(&with_fixed, &fam).unwrap();
        assert!(f.skeleta[1].contains(orb.proj[6]));
        assert!(matches!(
            orbit_type_filtration(&with_fixed, &[g.trivial_subgroup()]),
            Err(Error::IsotropyNotInFamily { point: 6 })
        ));
    }

    #[test]
    fn strata_equal_isotropy_classes() {
        let g = FinGroup::symmetric(4);
        let reps = crate::group::conjugacy_representatives(&g);
        let x = GSpace::from_cosets(&CosetSpace::new(&g, &g.all_subgroups()).unwrap());
        let (orb, filt) = orbit_type_filtration(&x, &reps).unwrap();
        let ot = orbit_type_preorder(&g, &reps).unwrap();
        for (a, stratum) in filt.strata().iter().enumerate() {
            for o in 0..orb.space.len() {
                let direct = ot.class_of(&g, x.isotropy(orb.reps[o])) == Some(a);
                assert_eq!(stratum.contains(o), direct);
            }
        }
        let id: Vec<usize> = (0..orb.space.len()).collect();
        assert!(is_filtered_map(&id, &filt, &filt).unwrap());
        assert!(is_stratified_map(&id, &filt, &filt).unwrap());
    }
}
