//! Tube covers of finite `G`-spaces and the classifying maps they induce.
//!
//! A chart is determined by an open invariant set `T` and an equivariant
//! map `q: T → H\G` that is constant on comparable points; the slice is
//! `S = q⁻¹(H)` and `φ(x) = [x·c⁻¹, c]` whenever `q(x) = Hc`.

mod classify;
mod factor;
mod homotopy;

pub use classify::{
    check_classifying_map, classifying_map, pullback, verify_psi, Bundle, ClassifyingMap,
    ClassifyingMapReport, PsiReport, PullbackBundle,
};
pub use factor::{equivariant_factorization, FactorReport};
pub use homotopy::{homotopy_phi, Homotopy, PhiReport};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::finspace::BitSet;
use crate::group::{CosetSpace, FinGroup, Subgroup};
use crate::gspace::{is_g_homeomorphism, GSpace, InducedSpace};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TubeChart {
    pub family_index: usize,
    pub subgroup: Subgroup,
    /// Points of the tube, sorted.
    pub tube: Vec<usize>,
    /// Points of the slice `q⁻¹(H)`, sorted.
    pub slice: Vec<usize>,
    /// `q(x)` as a point of `F\G` for `x` in the tube, `usize::MAX` outside.
    pub q: Vec<usize>,
}

impl TubeChart {
    pub fn contains(&self, x: usize) -> bool {
        self.q[x] != usize::MAX
    }

    /// `φ(x) = [x·c⁻¹, c]` as a (slice point, group element) pair.
    pub fn phi(&self, x: &GSpace, cs: &CosetSpace, p: usize) -> (usize, usize) {
        let c = cs.representative(self.q[p]);
        (x.act(p, x.group().inv(c)), c)
    }
}

/// Outcome of a failed search: no chart over the family contains `point`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverFailure {
    pub point: usize,
    pub isotropy: Vec<usize>,
    pub reason: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PointOrder {
    #[default]
    Forward,
    Reverse,
    Shuffled(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct CoverOptions {
    pub order: PointOrder,
    /// Shuffle the candidate values of `q` at each seed point.
    pub coset_seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoverKind {
    Isovariant,
    ApproximateOnly,
    Plain,
}

/// The least open invariant set containing `p`: the union of the up-sets
/// of its orbit. Any chart containing `p` restricts to a chart on it.
pub fn minimal_tube(x: &GSpace, p: usize) -> BitSet {
    let mut t = BitSet::new(x.len());
    for q in x.orbit(p) {
        t.union_with(x.space().up_set(q));
    }
    t
}

/// Propagates `q(seed) = q0` through the action and comparability inside
/// `tube`; `None` on a conflict.
fn propagate(
    x: &GSpace,
    cs: &CosetSpace,
    tube: &BitSet,
    seed: usize,
    q0: usize,
) -> Option<Vec<usize>> {
    let mut q = vec![usize::MAX; x.len()];
    q[seed] = q0;
    let mut stack = vec![seed];
    let assign = |q: &mut Vec<usize>, stack: &mut Vec<usize>, z: usize, v: usize| -> bool {
        if q[z] == usize::MAX {
            q[z] = v;
            stack.push(z);
            true
        } else {
            q[z] == v
        }
    };
    while let Some(y) = stack.pop() {
        let v = q[y];
        for k in x.group().elements() {
            if !assign(&mut q, &mut stack, x.act(y, k), cs.act(v, k)) {
                return None;
            }
        }
        let sp = x.space();
        let near: Vec<usize> = sp
            .up_set(y)
            .iter()
            .chain(sp.down_set(y).iter())
            .filter(|&z| tube.contains(z))
            .collect();
        for z in near {
            if !assign(&mut q, &mut stack, z, v) {
                return None;
            }
        }
    }
    tube.iter().all(|z| q[z] != usize::MAX).then_some(q)
}

fn chart_from_q(cs: &CosetSpace, b: usize, tube: &BitSet, q: Vec<usize>) -> TubeChart {
    let base = cs.base_point(b);
    TubeChart {
        family_index: b,
        subgroup: cs.family()[b],
        tube: tube.iter().collect(),
        slice: tube.iter().filter(|&z| q[z] == base).collect(),
        q,
    }
}

/// Family members in search order for a point with isotropy `gx`: those
/// conjugate to `gx` first, then those containing a conjugate of it.
fn candidate_members(g: &FinGroup, family: &[Subgroup], gx: Subgroup) -> Vec<(usize, bool)> {
    let mut iso: Vec<(usize, bool)> = Vec::new();
    let mut other = Vec::new();
    for (b, &h) in family.iter().enumerate() {
        if g.conjugator(h, gx).is_some() {
            iso.push((b, true));
        } else if g.subconjugator(h, gx).is_some() {
            other.push((b, false));
        }
    }
    iso.extend(other);
    iso
}

/// Searches for a chart containing `p`; the flag says whether its subgroup
/// is conjugate to the isotropy of `p`.
pub fn chart_at(
    x: &GSpace,
    cs: &CosetSpace,
    p: usize,
    coset_seed: Option<u64>,
) -> std::result::Result<(TubeChart, bool), CoverFailure> {
    let g = x.group();
    let gx = x.isotropy(p);
    let tube = minimal_tube(x, p);
    let members = candidate_members(g, cs.family(), gx);
    let failure = |reason: String| CoverFailure {
        point: p,
        isotropy: gx.elements(),
        reason,
    };
    if members.is_empty() {
        return Err(failure("isotropy is not subconjugate to any family member".into()));
    }
    let mut rng = coset_seed.map(|s| ChaCha8Rng::seed_from_u64(s ^ p as u64));
    for (b, iso) in members {
        let mut cands: Vec<usize> = cs
            .block_points(b)
            .filter(|&c| gx.0.is_subset(cs.stabilizer(c).0))
            .collect();
        if let Some(r) = rng.as_mut() {
            cands.shuffle(r);
        }
        for c in cands {
            if let Some(q) = propagate(x, cs, &tube, p, c) {
                return Ok((chart_from_q(cs, b, &tube, q), iso));
            }
        }
    }
    Err(failure(
        "every admissible value of q at this point forces two values on one point".into(),
    ))
}

/// Greedy cover by minimal tubes, preferring subgroups conjugate to the
/// isotropy so that the result is isovariant whenever possible.
pub fn find_tube_cover(
    x: &GSpace,
    family: &[Subgroup],
    options: CoverOptions,
) -> Result<std::result::Result<Vec<TubeChart>, CoverFailure>> {
    let cs = CosetSpace::new(x.group(), family)?;
    let n = x.len();
    let mut order: Vec<usize> = (0..n).collect();
    match options.order {
        PointOrder::Forward => {}
        PointOrder::Reverse => order.reverse(),
        PointOrder::Shuffled(seed) => order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed)),
    }
    let iso_class: Vec<Subgroup> = (0..n).map(|p| x.isotropy(p)).collect();
    let mut covered = vec![false; n];
    let mut iso_covered = vec![false; n];
    let mut charts = Vec::new();
    for p in order {
        if iso_covered[p] {
            continue;
        }
        match chart_at(x, &cs, p, options.coset_seed) {
            Err(f) if !covered[p] => return Ok(Err(f)),
            Err(_) => {}
            Ok((chart, iso)) => {
                if !iso && covered[p] {
                    continue;
                }
                for &y in &chart.tube {
                    covered[y] = true;
                    if x.group().conjugator(chart.subgroup, iso_class[y]).is_some() {
                        iso_covered[y] = true;
                    }
                }
                charts.push(chart);
            }
        }
    }
    Ok(Ok(charts))
}

/// Checks every chart condition independently of how the chart was found,
/// comparing `φ` against an explicitly built `S ×_H G`.
pub fn validate_chart(x: &GSpace, family: &[Subgroup], chart: &TubeChart) -> Result<()> {
    let bad = |m: String| Err(Error::InvalidCover(m));
    let cs = CosetSpace::new(x.group(), family)?;
    let b = chart.family_index;
    if b >= family.len() || family[b] != chart.subgroup {
        return bad("chart subgroup is not the named family member".into());
    }
    if chart.q.len() != x.len() {
        return bad("q has the wrong length".into());
    }
    let tube = BitSet::from_indices(x.len(), chart.tube.iter().copied());
    if !x.space().is_open(&tube) || !x.is_invariant(&tube) {
        return bad("tube is not an open invariant set".into());
    }
    for p in 0..x.len() {
        if tube.contains(p) != chart.contains(p) {
            return bad(format!("q is not defined exactly on the tube at {p}"));
        }
    }
    let block = cs.block_points(b);
    for &p in &chart.tube {
        if !block.contains(&chart.q[p]) {
            return bad(format!("q({p}) lies outside the cosets of H"));
        }
        for k in x.group().elements() {
            if chart.q[x.act(p, k)] != cs.act(chart.q[p], k) {
                return bad(format!("q is not equivariant at {p}"));
            }
        }
    }
    let base = cs.base_point(b);
    let slice: Vec<usize> = chart.tube.iter().copied().filter(|&p| chart.q[p] == base).collect();
    if slice != chart.slice {
        return bad("slice is not q⁻¹(H)".into());
    }
    let ind = InducedSpace::new(x, &slice, chart.subgroup)?;
    let mut slice_pos = vec![usize::MAX; x.len()];
    for (i, &s) in slice.iter().enumerate() {
        slice_pos[s] = i;
    }
    let values: Vec<usize> = chart
        .tube
        .iter()
        .map(|&p| {
            let (s, c) = chart.phi(x, &cs, p);
            ind.point(slice_pos[s], c)
        })
        .collect();
    let t = x.subspace(&chart.tube)?;
    if !is_g_homeomorphism(&t, &ind.space, &values)? {
        return bad("φ is not a G-homeomorphism onto S ×_H G".into());
    }
    Ok(())
}

/// Classifies a cover. With a discrete group the neighbourhood `{G_x}` of
/// `G_x` is open, so approximate covers are isovariant; the check below
/// evaluates the approximate condition against that neighbourhood.
pub fn cover_kind(x: &GSpace, charts: &[TubeChart]) -> Result<CoverKind> {
    let g = x.group();
    let mut approximate = true;
    let mut isovariant = true;
    for p in 0..x.len() {
        let gx = x.isotropy(p);
        let holding: Vec<&TubeChart> = charts.iter().filter(|c| c.contains(p)).collect();
        if holding.is_empty() {
            return Err(Error::InvalidCover(format!("point {p} is not covered")));
        }
        isovariant &= holding.iter().any(|c| g.conjugator(c.subgroup, gx).is_some());
        // conjugates g⁻¹Hg with G_x ≤ g⁻¹Hg ⊂ O for the smallest open O ∋ G_x
        let smallest_neighbourhood = gx;
        approximate &= holding.iter().any(|c| {
            g.elements().any(|k| {
                let conj = g.conjugate_set(c.subgroup.0, g.inv(k));
                gx.0.is_subset(conj) && conj == smallest_neighbourhood.0
            })
        });
    }
    Ok(match (isovariant, approximate) {
        (true, _) => CoverKind::Isovariant,
        (false, true) => CoverKind::ApproximateOnly,
        _ => CoverKind::Plain,
    })
}
