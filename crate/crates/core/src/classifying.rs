//! The spaces `E_F^κG = c(F\G)^κ − {0}` and `B_F^κG = E_F^κG / G`.
//!
//! Points are digit vectors of length `κ`: digit `0` is the cone point and
//! digit `d ≥ 1` is coset point `d − 1` of `F\G`. The all-zero vector is
//! excluded, and point `p` is the vector whose mixed-radix value is `p + 1`.
//! Nothing is materialized until asked for, so verification scales with the
//! point budget rather than its square.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::finspace::{BitSet, FinSpace};
use crate::group::{check_family, CosetSpace, FinGroup, Subgroup};
use crate::gspace::{GSpace, OrbitSpace};

pub const DEFAULT_POINT_BUDGET: u64 = 100_000;

#[derive(Clone, Debug)]
pub struct ClassifyingSpace {
    cosets: CosetSpace,
    kappa: usize,
    radix: usize,
    len: usize,
}

impl ClassifyingSpace {
    /// `E_F^κG`, rejecting families with conjugate members.
    pub fn new(group: &FinGroup, family: &[Subgroup], kappa: usize, budget: u64) -> Result<Self> {
        check_family(group, family)?;
        Self::new_allowing_conjugates(group, family, kappa, budget)
    }

    pub fn new_allowing_conjugates(
        group: &FinGroup,
        family: &[Subgroup],
        kappa: usize,
        budget: u64,
    ) -> Result<Self> {
        if kappa == 0 {
            return Err(Error::Hypothesis("kappa must be at least 1".into()));
        }
        let cosets = CosetSpace::new(group, family)?;
        let radix = cosets.len() + 1;
        let total = (radix as u64)
            .checked_pow(kappa as u32)
            .map(|t| t - 1)
            .unwrap_or(u64::MAX);
        if total > budget {
            return Err(Error::BudgetExceeded {
                what: "points",
                limit: budget,
                reached: total,
            });
        }
        Ok(Self {
            cosets,
            kappa,
            radix,
            len: total as usize,
        })
    }

    pub fn group(&self) -> &FinGroup {
        self.cosets.group()
    }

    pub fn family(&self) -> &[Subgroup] {
        self.cosets.family()
    }

    pub fn cosets(&self) -> &CosetSpace {
        &self.cosets
    }

    pub fn kappa(&self) -> usize {
        self.kappa
    }

    pub fn radix(&self) -> usize {
        self.radix
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn digits(&self, p: usize) -> Vec<u16> {
        let mut code = p + 1;
        (0..self.kappa)
            .map(|_| {
                let d = code % self.radix;
                code /= self.radix;
                d as u16
            })
            .collect()
    }

    pub fn point(&self, digits: &[u16]) -> Option<usize> {
        if digits.len() != self.kappa || digits.iter().any(|&d| d as usize >= self.radix) {
            return None;
        }
        let code = digits.iter().rev().fold(0, |acc, &d| acc * self.radix + d as usize);
        code.checked_sub(1)
    }

    /// `e ⊑ e′` iff each `e_i` is the cone point or equals `e′_i`.
    pub fn digits_leq(a: &[u16], b: &[u16]) -> bool {
        a.iter().zip(b).all(|(&x, &y)| x == 0 || x == y)
    }

    pub fn act_digits(&self, e: &[u16], g: usize) -> Vec<u16> {
        e.iter()
            .map(|&d| if d == 0 { 0 } else { self.cosets.act(d as usize - 1, g) as u16 + 1 })
            .collect()
    }

    pub fn leq(&self, p: usize, q: usize) -> bool {
        Self::digits_leq(&self.digits(p), &self.digits(q))
    }

    pub fn act(&self, p: usize, g: usize) -> usize {
        self.point(&self.act_digits(&self.digits(p), g)).expect("action preserves E")
    }

    /// Stabilizer of one digit, `G` for the cone point.
    pub fn digit_isotropy(&self, d: u16) -> Subgroup {
        if d == 0 {
            self.group().whole()
        } else {
            self.cosets.stabilizer(d as usize - 1)
        }
    }

    /// `G_e = ⋂_i G_{e_i}`.
    pub fn isotropy_digits(&self, e: &[u16]) -> Subgroup {
        e.iter()
            .fold(self.group().whole(), |acc, &d| acc.intersect(self.digit_isotropy(d)))
    }

    pub fn isotropy(&self, p: usize) -> Subgroup {
        self.isotropy_digits(&self.digits(p))
    }

    /// Some nonzero coordinate has the same isotropy as the whole point.
    pub fn is_isovariant_digits(&self, e: &[u16]) -> bool {
        let ge = self.isotropy_digits(e);
        e.iter().any(|&d| d != 0 && self.digit_isotropy(d) == ge)
    }

    /// Dense `GSpace` on all points.
    pub fn to_gspace(&self) -> GSpace {
        let all: Vec<Vec<u16>> = (0..self.len).map(|p| self.digits(p)).collect();
        self.gspace_on(&all)
    }

    pub(crate) fn gspace_on(&self, pts: &[Vec<u16>]) -> GSpace {
        let n = pts.len();
        let mut pos = std::collections::HashMap::with_capacity(n);
        for (i, e) in pts.iter().enumerate() {
            pos.insert(e.clone(), i);
        }
        let up = pts
            .iter()
            .map(|a| BitSet::from_indices(n, (0..n).filter(|&j| Self::digits_leq(a, &pts[j]))))
            .collect();
        let act = pts
            .iter()
            .map(|e| {
                self.group()
                    .elements()
                    .map(|g| pos[&self.act_digits(e, g)])
                    .collect()
            })
            .collect();
        let labels = pts.iter().map(|e| self.label(e)).collect();
        GSpace::new_unchecked(FinSpace::from_up_rows(up).with_labels(labels), self.group().clone(), act)
    }

    pub fn label(&self, e: &[u16]) -> String {
        let parts: Vec<String> = e
            .iter()
            .map(|&d| if d == 0 { "0".into() } else { self.cosets.label(d as usize - 1) })
            .collect();
        format!("({})", parts.join(","))
    }

    /// `B_F^κG` with the projection from `E`.
    pub fn orbit_space(&self) -> OrbitSpace {
        self.to_gspace().orbit_space()
    }

    /// The isovariant part, points in increasing order, with their indices in `E`.
    pub fn isovariant_part(&self) -> (GSpace, Vec<usize>) {
        let idx: Vec<usize> = (0..self.len)
            .filter(|&p| self.is_isovariant_digits(&self.digits(p)))
            .collect();
        let pts: Vec<Vec<u16>> = idx.iter().map(|&p| self.digits(p)).collect();
        (self.gspace_on(&pts), idx)
    }

    /// `T(i, H_b) = {e | e_i ∈ H_b\G}`.
    pub fn tube(&self, i: usize, b: usize) -> Vec<usize> {
        let block = self.cosets.block_points(b);
        (0..self.len)
            .filter(|&p| {
                let d = self.digits(p)[i] as usize;
                d != 0 && block.contains(&(d - 1))
            })
            .collect()
    }

    /// `S(i, H_b) = {e | e_i = H_b}`.
    pub fn slice(&self, i: usize, b: usize) -> Vec<usize> {
        let base = self.cosets.base_point(b) as u16 + 1;
        (0..self.len).filter(|&p| self.digits(p)[i] == base).collect()
    }

    /// Checks that `μ: S(i,H) ×_H G → T(i,H)`, `[s, g] ↦ s·g`, is a
    /// `G`-homeomorphism onto an open invariant tube.
    pub fn verify_mu(&self, i: usize, b: usize) -> MuReport {
        let g = self.group();
        let m = g.order();
        let h = self.family()[b];
        let tube = self.tube(i, b);
        let slice = self.slice(i, b);
        let sd: Vec<Vec<u16>> = slice.iter().map(|&s| self.digits(s)).collect();
        let mut report = MuReport {
            coordinate: i,
            subgroup: b,
            tube_size: tube.len(),
            slice_size: slice.len(),
            induced_size: 0,
            tube_open: true,
            tube_invariant: true,
            slice_invariant: true,
            well_defined: true,
            bijective: true,
            equivariant: true,
            order_isomorphism: true,
            witness: None,
        };
        let fail = |report: &mut MuReport, what: &str| {
            if report.witness.is_none() {
                report.witness = Some(what.to_string());
            }
        };

        let mut in_tube = vec![false; self.len];
        for &p in &tube {
            in_tube[p] = true;
        }
        for &p in &tube {
            let e = self.digits(p);
            if g.elements().any(|k| !in_tube[self.act(p, k)]) {
                report.tube_invariant = false;
                fail(&mut report, &format!("tube not invariant at {}", self.label(&e)));
            }
        }
        // up-set: only coordinates at the cone point can change going up, so
        // checking single-digit raises suffices
        for &p in &tube {
            let e = self.digits(p);
            for j in (0..self.kappa).filter(|&j| e[j] == 0) {
                for d in 1..self.radix as u16 {
                    let mut f = e.clone();
                    f[j] = d;
                    if !in_tube[self.point(&f).unwrap()] {
                        report.tube_open = false;
                        fail(&mut report, &format!("tube not open above {}", self.label(&e)));
                    }
                }
            }
        }
        let mut slice_pos = vec![usize::MAX; self.len];
        for (k, &s) in slice.iter().enumerate() {
            slice_pos[s] = k;
        }
        for (k, &s) in slice.iter().enumerate() {
            if h.0.iter().any(|x| slice_pos[self.act(s, x)] == usize::MAX) {
                report.slice_invariant = false;
                fail(&mut report, &format!("slice not H-invariant at {}", self.label(&sd[k])));
            }
        }
        if !report.slice_invariant {
            return report;
        }

        // classes of S × G under (s, a)·h = (s·h, h⁻¹a)
        let mut class = vec![usize::MAX; slice.len() * m];
        let mut reps: Vec<(usize, usize)> = Vec::new();
        for k in 0..slice.len() {
            for a in 0..m {
                if class[k * m + a] != usize::MAX {
                    continue;
                }
                for x in h.0.iter() {
                    let j = slice_pos[self.act(slice[k], x)];
                    class[j * m + g.mul(g.inv(x), a)] = reps.len();
                }
                reps.push((k, a));
            }
        }
        report.induced_size = reps.len();

        let mu_of = |k: usize, a: usize| self.act(slice[k], a);
        for k in 0..slice.len() {
            for a in 0..m {
                let (rk, ra) = reps[class[k * m + a]];
                if mu_of(k, a) != mu_of(rk, ra) {
                    report.well_defined = false;
                    fail(&mut report, "μ differs on one class");
                }
            }
        }
        let mu: Vec<usize> = reps.iter().map(|&(k, a)| mu_of(k, a)).collect();
        let mut hit = vec![false; self.len];
        for &p in &mu {
            if !in_tube[p] || std::mem::replace(&mut hit[p], true) {
                report.bijective = false;
                fail(&mut report, &format!("μ not injective into T at {}", self.label(&self.digits(p))));
            }
        }
        if mu.len() != tube.len() {
            report.bijective = false;
            fail(&mut report, "μ misses part of the tube");
        }
        for (c, &(k, a)) in reps.iter().enumerate() {
            for x in g.elements() {
                if mu[class[k * m + g.mul(a, x)]] != self.act(mu[c], x) {
                    report.equivariant = false;
                    fail(&mut report, "μ not equivariant");
                }
            }
        }
        let md: Vec<Vec<u16>> = mu.iter().map(|&p| self.digits(p)).collect();
        'outer: for (c, &(k, a)) in reps.iter().enumerate() {
            for (d, &(l, bb)) in reps.iter().enumerate() {
                let hh = g.mul(bb, g.inv(a));
                let induced = h.contains(hh) && Self::digits_leq(&sd[k], &self.act_digits(&sd[l], hh));
                if induced != Self::digits_leq(&md[c], &md[d]) {
                    report.order_isomorphism = false;
                    fail(
                        &mut report,
                        &format!("order differs between {} and {}", self.label(&md[c]), self.label(&md[d])),
                    );
                    break 'outer;
                }
            }
        }
        report
    }

    /// Runs [`Self::verify_mu`] on every tube, checks that the tubes cover
    /// `E`, and that their restriction to the isovariant part is an
    /// isovariant cover.
    pub fn verify_tubes(&self) -> TubeReport {
        let pairs: Vec<(usize, usize)> = (0..self.kappa)
            .flat_map(|i| (0..self.family().len()).map(move |b| (i, b)))
            .collect();
        let charts: Vec<MuReport> = pairs.par_iter().map(|&(i, b)| self.verify_mu(i, b)).collect();
        let g = self.group();
        let mut uncovered = Vec::new();
        let mut isovariant_points = 0;
        let mut isovariant_uncovered = Vec::new();
        let mut isotropy_formula_agrees = true;
        for p in 0..self.len {
            let e = self.digits(p);
            if e.iter().all(|&d| d == 0) {
                uncovered.push(p);
            }
            let ge = self.isotropy_digits(&e);
            let scanned = Subgroup(g.elements().filter(|&k| self.act(p, k) == p).collect());
            isotropy_formula_agrees &= ge == scanned;
            if self.is_isovariant_digits(&e) {
                isovariant_points += 1;
                let ok = e.iter().any(|&d| {
                    d != 0 && {
                        let b = self.cosets.block(d as usize - 1);
                        g.conjugator(self.family()[b], ge).is_some()
                    }
                });
                if !ok {
                    isovariant_uncovered.push(p);
                }
            }
        }
        TubeReport {
            points: self.len,
            charts,
            uncovered,
            isovariant_points,
            isovariant_uncovered,
            isotropy_formula_agrees,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MuReport {
    pub coordinate: usize,
    pub subgroup: usize,
    pub tube_size: usize,
    pub slice_size: usize,
    pub induced_size: usize,
    pub tube_open: bool,
    pub tube_invariant: bool,
    pub slice_invariant: bool,
    pub well_defined: bool,
    pub bijective: bool,
    pub equivariant: bool,
    pub order_isomorphism: bool,
    pub witness: Option<String>,
}

impl MuReport {
    pub fn ok(&self) -> bool {
        self.witness.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TubeReport {
    pub points: usize,
    pub charts: Vec<MuReport>,
    pub uncovered: Vec<usize>,
    pub isovariant_points: usize,
    pub isovariant_uncovered: Vec<usize>,
    pub isotropy_formula_agrees: bool,
}

impl TubeReport {
    pub fn ok(&self) -> bool {
        self.charts.iter().all(MuReport::ok)
            && self.uncovered.is_empty()
            && self.isovariant_uncovered.is_empty()
            && self.isotropy_formula_agrees
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gspace::InducedSpace;

    fn e(group: &FinGroup, family: &[Subgroup], kappa: usize) -> ClassifyingSpace {
        ClassifyingSpace::new(group, family, kappa, DEFAULT_POINT_BUDGET).unwrap()
    }

    #[test]
    fn point_counts_and_orbits() {
        let z2 = FinGroup::cyclic(2);
        let one = [z2.trivial_subgroup()];
        let e1 = e(&z2, &one, 1);
        assert_eq!(e1.len(), 2);
        let x = e1.to_gspace();
        assert_eq!(x.space(), &FinSpace::discrete(2));
        assert_eq!(x.act(0, 1), 1);
        assert_eq!(e1.orbit_space().space.len(), 1);

        let e2 = e(&z2, &one, 2);
        assert_eq!(e2.len(), 8);
        assert_eq!(e2.orbit_space().space.len(), 4);

        let z3 = FinGroup::cyclic(3);
        let e3 = e(&z3, &[z3.trivial_subgroup()], 2);
        assert_eq!(e3.len(), 15);
        assert_eq!(e3.orbit_space().space.len(), 5);

        let s3 = FinGroup::symmetric(3);
        let fixed = e(&s3, &[s3.whole()], 1);
        assert_eq!(fixed.len(), 1);
        assert_eq!(fixed.isotropy(0), s3.whole());
    }

    #[test]
    fn budget_and_family_errors() {
        let z2 = FinGroup::cyclic(2);
        let one = [z2.trivial_subgroup()];
        assert!(matches!(
            ClassifyingSpace::new(&z2, &one, 10, 1000),
            Err(Error::BudgetExceeded { reached: 59048, .. })
        ));
        assert_eq!(ClassifyingSpace::new(&z2, &[], 1, 10).unwrap_err(), Error::EmptyFamily);
        assert!(ClassifyingSpace::new(&z2, &one, 0, 10).is_err());
    }

    #[test]
    fn digits_roundtrip_and_order() {
        let s3 = FinGroup::symmetric(3);
        let e2 = e(&s3, &crate::group::conjugacy_representatives(&s3), 2);
        for p in 0..e2.len() {
            assert_eq!(e2.point(&e2.digits(p)), Some(p));
        }
        let x = e2.to_gspace();
        assert!(x.space().is_t0());
        assert_eq!(x.len(), (e2.radix() * e2.radix()) - 1);
    }

    #[test]
    fn isovariant_part_examples() {
        let z2 = FinGroup::cyclic(2);
        let free = e(&z2, &[z2.trivial_subgroup()], 2);
        assert_eq!(free.isovariant_part().0.len(), free.len());
        let both = e(&z2, &[z2.trivial_subgroup(), z2.whole()], 1);
        assert_eq!(both.isovariant_part().0.len(), both.len());

        let s3 = FinGroup::symmetric(3);
        let subs = s3.all_subgroups();
        let (c2, c3) = (subs[1], subs[4]);
        let e = e(&s3, &[c2, c3], 2);
        let bad = e.point(&[1, e.cosets().base_point(1) as u16 + 1]).unwrap();
        assert_eq!(e.isotropy(bad), s3.trivial_subgroup());
        let (iso, idx) = e.isovariant_part();
        assert!(!idx.contains(&bad));
        assert!(idx.len() < e.len());
        assert_eq!(iso.len(), idx.len());
    }

    #[test]
    fn tube_examples() {
        let z2 = FinGroup::cyclic(2);
        let e2 = e(&z2, &[z2.trivial_subgroup()], 2);
        let r = e2.verify_mu(0, 0);
        assert_eq!((r.tube_size, r.slice_size, r.induced_size), (6, 3, 6));
        assert!(r.ok(), "{r:?}");

        let s3 = FinGroup::symmetric(3);
        let fixed = e(&s3, &[s3.whole()], 1);
        let r = fixed.verify_mu(0, 0);
        assert_eq!((r.tube_size, r.slice_size, r.induced_size), (1, 1, 1));
        assert!(r.ok());

        let c3 = s3.all_subgroups()[4];
        let e1 = e(&s3, &[c3], 1);
        let r = e1.verify_mu(0, 0);
        assert_eq!((r.tube_size, r.slice_size, r.induced_size), (2, 1, 2));
        assert!(r.ok());
    }

    #[test]
    fn induced_preorder_is_the_quotient_of_the_product() {
        let s3 = FinGroup::symmetric(3);
        let reps = crate::group::conjugacy_representatives(&s3);
        let e2 = e(&s3, &reps[1..3], 2);
        let x = e2.to_gspace();
        for b in 0..2 {
            let slice = e2.slice(0, b);
            let ind = InducedSpace::new(&x, &slice, reps[1 + b]).unwrap();
            let product = x.space().subspace(&slice).unwrap().product(&FinSpace::discrete(6));
            assert_eq!(&product.quotient(&ind.class).unwrap(), ind.space.space());
        }
    }

    #[test]
    fn verify_tubes_small_cases() {
        for name in ["Z2", "Z3", "S3"] {
            let g = FinGroup::builtin(name).unwrap();
            let reps = crate::group::conjugacy_representatives(&g);
            for kappa in 1..=2 {
                let r = e(&g, &reps, kappa).verify_tubes();
                assert!(r.ok(), "{name} κ={kappa}: {r:?}");
            }
        }
    }
}
