use std::collections::HashMap;

use serde::Serialize;

use super::{cover_kind, validate_chart, CoverKind, TubeChart};
use crate::classifying::ClassifyingSpace;
use crate::error::{Error, Result};
use crate::finspace::{FinSpace, SpaceMap};
use crate::group::{conjugacy_classes_of, FinGroup, Subgroup};
use crate::gspace::{
    is_equivariant, is_filtered_map, is_stratified_map, orbit_type_filtration, GSpace, OrbitSpace,
};

/// A principal-style bundle: a `G`-space with a projection to a base that
/// induces a homeomorphism from its orbit space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bundle {
    pub total: GSpace,
    pub base: FinSpace,
    pub proj: Vec<usize>,
}

impl Bundle {
    pub fn new(total: GSpace, base: FinSpace, proj: Vec<usize>) -> Result<Self> {
        let bad = |m: &str| Err(Error::InvalidBundle(m.into()));
        let map = SpaceMap::new(total.space().clone(), base.clone(), proj.clone())?;
        if !map.is_continuous() {
            return bad("projection is not continuous");
        }
        for x in 0..total.len() {
            if total.group().elements().any(|g| proj[total.act(x, g)] != proj[x]) {
                return bad("projection is not constant on orbits");
            }
        }
        let orb = total.orbit_space();
        let induced: Vec<usize> = orb.reps.iter().map(|&r| proj[r]).collect();
        let iso = SpaceMap::new(orb.space.clone(), base.clone(), induced)?;
        if !iso.is_homeomorphism() {
            return bad("orbit space is not homeomorphic to the base");
        }
        Ok(Self { total, base, proj })
    }

    pub fn group(&self) -> &FinGroup {
        self.total.group()
    }

    pub fn is_free(&self) -> bool {
        self.total.is_free()
    }

    pub fn fiber(&self, b: usize) -> Vec<usize> {
        (0..self.total.len()).filter(|&x| self.proj[x] == b).collect()
    }
}

/// A pullback `f*(E)` together with the `E`-coordinate of each point.
#[derive(Clone, Debug)]
pub struct PullbackBundle {
    pub bundle: Bundle,
    pub points: Vec<(usize, Vec<u16>)>,
}

/// `F: X → E_F^κG` and the induced `f: X/G → B_F^κG`; `f(b)` is stored as
/// the value of `F` at the representative of `b`.
#[derive(Clone, Debug)]
pub struct ClassifyingMap {
    pub space: ClassifyingSpace,
    pub values: Vec<Vec<u16>>,
    pub orbits: OrbitSpace,
    pub f: Vec<Vec<u16>>,
}

fn reverse_key(e: &[u16]) -> Vec<u16> {
    e.iter().rev().copied().collect()
}

/// Coordinates `F_i(x) = q_i(x)` on the tube `T_i` and the cone point off it.
pub fn classifying_map(x: &GSpace, family: &[Subgroup], charts: &[TubeChart]) -> Result<ClassifyingMap> {
    if charts.is_empty() {
        return Err(Error::InvalidCover("no charts".into()));
    }
    for c in charts {
        validate_chart(x, family, c)?;
    }
    if let Some(p) = (0..x.len()).find(|&p| charts.iter().all(|c| !c.contains(p))) {
        return Err(Error::InvalidCover(format!("point {p} is not covered")));
    }
    let space = ClassifyingSpace::new_allowing_conjugates(x.group(), family, charts.len(), u64::MAX)?;
    let values: Vec<Vec<u16>> = (0..x.len())
        .map(|p| {
            charts
                .iter()
                .map(|c| if c.contains(p) { c.q[p] as u16 + 1 } else { 0 })
                .collect()
        })
        .collect();
    let orbits = x.orbit_space();
    let f = orbits.reps.iter().map(|&r| values[r].clone()).collect();
    Ok(ClassifyingMap {
        space,
        values,
        orbits,
        f,
    })
}

impl ClassifyingMap {
    /// All translates of the values, as a dense invariant subspace of `E`,
    /// with the index of each `F(x)` in it.
    pub fn image(&self) -> (GSpace, Vec<Vec<u16>>, Vec<usize>) {
        image_of(&self.space, &self.values)
    }
}

pub(crate) fn image_of(e: &ClassifyingSpace, values: &[Vec<u16>]) -> (GSpace, Vec<Vec<u16>>, Vec<usize>) {
    let mut pts: Vec<Vec<u16>> = values
        .iter()
        .flat_map(|v| e.group().elements().map(move |g| e.act_digits(v, g)))
        .collect();
    pts.sort_by_key(|p| reverse_key(p));
    pts.dedup();
    let pos: HashMap<&Vec<u16>, usize> = pts.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let idx = values.iter().map(|v| pos[v]).collect();
    (e.gspace_on(&pts), pts.clone(), idx)
}

/// One representative per conjugacy class of the family, in family order.
pub(crate) fn class_representatives(g: &FinGroup, family: &[Subgroup]) -> Vec<Subgroup> {
    conjugacy_classes_of(g, family).into_iter().map(|c| family[c[0]]).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassifyingMapReport {
    pub kappa: usize,
    pub cover_kind: CoverKind,
    pub equivariant: bool,
    pub continuous: bool,
    pub f_continuous: bool,
    pub lands_in_isovariant_part: bool,
    pub isovariant: bool,
    /// Only evaluated for isovariant covers.
    pub stratified: Option<bool>,
}

impl ClassifyingMapReport {
    /// The properties the construction guarantees for this kind of cover.
    pub fn ok(&self) -> bool {
        let base = self.equivariant && self.continuous && self.f_continuous;
        match self.cover_kind {
            CoverKind::Isovariant => {
                base && self.lands_in_isovariant_part && self.isovariant && self.stratified == Some(true)
            }
            _ => base,
        }
    }
}

pub fn check_classifying_map(x: &GSpace, family: &[Subgroup], charts: &[TubeChart]) -> Result<ClassifyingMapReport> {
    let cm = classifying_map(x, family, charts)?;
    let kind = cover_kind(x, charts)?;
    let e = &cm.space;
    let g = x.group();
    let n = x.len();
    let equivariant = (0..n).all(|p| {
        g.elements()
            .all(|k| cm.values[x.act(p, k)] == e.act_digits(&cm.values[p], k))
    });
    let continuous = (0..n).all(|p| {
        x.space()
            .up_set(p)
            .iter()
            .all(|q| ClassifyingSpace::digits_leq(&cm.values[p], &cm.values[q]))
    });
    let ob = &cm.orbits.space;
    let f_continuous = (0..ob.len()).all(|a| {
        ob.up_set(a).iter().all(|b| {
            g.elements()
                .any(|k| ClassifyingSpace::digits_leq(&cm.f[a], &e.act_digits(&cm.f[b], k)))
        })
    });
    let lands = cm.values.iter().all(|v| e.is_isovariant_digits(v));
    let isovariant = (0..n).all(|p| x.isotropy(p) == e.isotropy_digits(&cm.values[p]));
    let stratified = if kind == CoverKind::Isovariant && lands {
        let reps = class_representatives(g, family);
        let (img, _, idx) = cm.image();
        let (_, fx) = orbit_type_filtration(x, &reps)?;
        let (io, fi) = orbit_type_filtration(&img, &reps)?;
        let values: Vec<usize> = cm.orbits.reps.iter().map(|&r| io.proj[idx[r]]).collect();
        Some(is_stratified_map(&values, &fx, &fi)? && is_filtered_map(&values, &fx, &fi)?)
    } else {
        None
    };
    Ok(ClassifyingMapReport {
        kappa: charts.len(),
        cover_kind: kind,
        equivariant,
        continuous,
        f_continuous,
        lands_in_isovariant_part: lands,
        isovariant,
        stratified,
    })
}

/// `f*(E) = {(b, e) | f(b) = eG}` with the order of `B × E` and `G` acting
/// on the second factor. `f(b)` is given by any point of its orbit.
pub fn pullback(base: &FinSpace, f: &[Vec<u16>], e: &ClassifyingSpace) -> Result<PullbackBundle> {
    if f.len() != base.len() {
        return Err(Error::InvalidMap(format!("{} values for {} base points", f.len(), base.len())));
    }
    for (b, v) in f.iter().enumerate() {
        if v.len() != e.kappa() || v.iter().all(|&d| d == 0) || v.iter().any(|&d| d as usize >= e.radix()) {
            return Err(Error::InvalidMap(format!("value at {b} is not a point of E")));
        }
    }
    let g = e.group();
    for a in 0..base.len() {
        for b in base.up_set(a).iter() {
            if !g.elements().any(|k| ClassifyingSpace::digits_leq(&f[a], &e.act_digits(&f[b], k))) {
                return Err(Error::NotContinuous { lo: a, hi: b });
            }
        }
    }
    let mut points: Vec<(usize, Vec<u16>)> = Vec::new();
    for (b, v) in f.iter().enumerate() {
        let mut orbit: Vec<Vec<u16>> = g.elements().map(|k| e.act_digits(v, k)).collect();
        orbit.sort_by_key(|p| reverse_key(p));
        orbit.dedup();
        points.extend(orbit.into_iter().map(|o| (b, o)));
    }
    let pos: HashMap<&(usize, Vec<u16>), usize> = points.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let n = points.len();
    let space = FinSpace::from_preorder_fn(n, |i, j| {
        base.leq(points[i].0, points[j].0) && ClassifyingSpace::digits_leq(&points[i].1, &points[j].1)
    })
    .with_labels(
        points
            .iter()
            .map(|(b, v)| format!("({},{})", base.label(*b), e.label(v)))
            .collect(),
    );
    let act = points
        .iter()
        .map(|(b, v)| g.elements().map(|k| pos[&(*b, e.act_digits(v, k))]).collect())
        .collect();
    let proj = points.iter().map(|p| p.0).collect();
    let total = GSpace::new(space, g.clone(), act)?;
    let bundle = Bundle::new(total, base.clone(), proj)?;
    Ok(PullbackBundle { bundle, points })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PsiReport {
    pub points: usize,
    pub total_points: usize,
    pub bijective: bool,
    pub equivariant: bool,
    pub order_isomorphism: bool,
    pub over_base: bool,
    pub witness: Option<String>,
}

impl PsiReport {
    pub fn ok(&self) -> bool {
        self.bijective && self.equivariant && self.order_isomorphism && self.over_base
    }
}

/// Checks that `Ψ(x) = (xG, F(x))` is a `G`-homeomorphism `X → f*(E)` over
/// `X/G`.
pub fn verify_psi(x: &GSpace, family: &[Subgroup], charts: &[TubeChart]) -> Result<PsiReport> {
    let cm = classifying_map(x, family, charts)?;
    let pb = pullback(&cm.orbits.space, &cm.f, &cm.space)?;
    let pos: HashMap<&(usize, Vec<u16>), usize> = pb.points.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut report = PsiReport {
        points: x.len(),
        total_points: pb.points.len(),
        bijective: true,
        equivariant: true,
        order_isomorphism: true,
        over_base: true,
        witness: None,
    };
    let mut psi = Vec::with_capacity(x.len());
    for p in 0..x.len() {
        match pos.get(&(cm.orbits.proj[p], cm.values[p].clone())) {
            Some(&i) => psi.push(i),
            None => {
                report.bijective = false;
                report.witness = Some(format!("Ψ({p}) is not a point of the pullback"));
                return Ok(report);
            }
        }
    }
    let map = SpaceMap::new(x.space().clone(), pb.bundle.total.space().clone(), psi.clone())?;
    if !map.is_bijective() {
        report.bijective = false;
        report.witness = Some("Ψ is not a bijection".into());
    }
    report.equivariant = is_equivariant(x, &pb.bundle.total, &psi)?;
    report.order_isomorphism = report.bijective && map.is_homeomorphism();
    report.over_base = (0..x.len()).all(|p| pb.bundle.proj[psi[p]] == cm.orbits.proj[p]);
    if report.witness.is_none() && !report.ok() {
        report.witness = Some(format!("{report:?}"));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pullback::{find_tube_cover, CoverOptions};

    fn cover(x: &GSpace, fam: &[Subgroup]) -> Vec<TubeChart> {
        find_tube_cover(x, fam, CoverOptions::default()).unwrap().unwrap()
    }

    #[test]
    fn free_orbit_maps_to_a_coset() {
        let g = FinGroup::symmetric(3);
        let x = GSpace::free_orbit(&g);
        let fam = [g.trivial_subgroup()];
        let charts = cover(&x, &fam);
        let cm = classifying_map(&x, &fam, &charts).unwrap();
        assert_eq!(cm.f.len(), 1);
        let digits: Vec<u16> = cm.values.iter().map(|v| v[0]).collect();
        assert_eq!(digits, vec![1, 2, 3, 4, 5, 6]);
        assert!(check_classifying_map(&x, &fam, &charts).unwrap().ok());
        assert!(verify_psi(&x, &fam, &charts).unwrap().ok());
    }

    #[test]
    fn self_cover_of_e2_is_identity() {
        let z2 = FinGroup::cyclic(2);
        let fam = [z2.trivial_subgroup()];
        let e = ClassifyingSpace::new(&z2, &fam, 2, 100).unwrap();
        let x = e.to_gspace();
        let charts = cover(&x, &fam);
        let cm = classifying_map(&x, &fam, &charts).unwrap();
        for p in 0..x.len() {
            assert_eq!(cm.values[p], e.digits(p));
        }
        let r = verify_psi(&x, &fam, &charts).unwrap();
        assert!(r.ok(), "{r:?}");
    }

    #[test]
    fn fixed_point_lands_in_the_point_coset() {
        let g = FinGroup::cyclic(4);
        let x = GSpace::trivial(FinSpace::sierpinski(), &g);
        let fam = [g.whole()];
        let charts = cover(&x, &fam);
        let cm = classifying_map(&x, &fam, &charts).unwrap();
        assert!(cm.values.iter().flatten().all(|&d| d <= 1));
        assert!(check_classifying_map(&x, &fam, &charts).unwrap().ok());
        assert!(verify_psi(&x, &fam, &charts).unwrap().ok());
    }

    #[test]
    fn pullback_examples() {
        let z2 = FinGroup::cyclic(2);
        let fam = [z2.trivial_subgroup()];
        let e = ClassifyingSpace::new(&z2, &fam, 2, 100).unwrap();
        // constant at a free point over one point
        let pb = pullback(&FinSpace::point(), &[vec![1, 0]], &e).unwrap();
        assert_eq!(pb.bundle.total.len(), 2);
        assert!(pb.bundle.is_free());
        // 𝕀₁ → B: 0 ↦ (1,0)G ⊑ 1 ↦ (1,1)G
        let pb = pullback(&FinSpace::sierpinski(), &[vec![1, 0], vec![1, 1]], &e).unwrap();
        assert_eq!(pb.bundle.total.len(), 4);
        assert!(pb.bundle.is_free());
        assert!(matches!(
            pullback(&FinSpace::sierpinski(), &[vec![1, 1], vec![1, 0]], &e),
            Err(Error::NotContinuous { lo: 0, hi: 1 })
        ));
        // along the identity of B
        let b = e.orbit_space();
        let f: Vec<Vec<u16>> = b.reps.iter().map(|&r| e.digits(r)).collect();
        let pb = pullback(&b.space, &f, &e).unwrap();
        let total = e.to_gspace();
        let iso: Vec<usize> = pb.points.iter().map(|(_, v)| e.point(v).unwrap()).collect();
        assert!(crate::gspace::is_g_homeomorphism(&pb.bundle.total, &total, &iso).unwrap());
    }
}
