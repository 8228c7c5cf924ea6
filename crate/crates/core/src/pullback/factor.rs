use std::collections::HashMap;

use serde::Serialize;

use super::classify::classifying_map;
use super::{cover_kind, find_tube_cover, CoverKind, CoverOptions, TubeChart};
use crate::classifying::ClassifyingSpace;
use crate::error::{Error, Result};
use crate::finspace::{FinSpace, SpaceMap};
use crate::group::Subgroup;
use crate::gspace::{GSpace, InducedSpace};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorReport {
    /// `Π` acts freely on `X`.
    pub pi_free: bool,
    /// `X → X/Π` admits a cover by `{1}`-tubes for `Π`.
    pub pi_trivial_tubes: bool,
    /// `c(xΠ) = F(x)Π` does not depend on the representative.
    pub c_well_defined: bool,
    /// `c` commutes with the action of `𝔾/Π`.
    pub c_equivariant: bool,
    /// Number of points of the computed pullback `X/Π ×_{𝓔/Π} 𝓔`.
    pub pullback_points: usize,
    /// The comparison `X → X/Π ×_{𝓔/Π} 𝓔` is a `𝔾`-homeomorphism.
    pub square_is_pullback: bool,
    /// `(S ×_H 𝔾)/Π ≅ S ×_{H_Π} (𝔾/Π)` for each chart.
    pub charts_descend: Vec<bool>,
    pub witness: Option<String>,
}

impl FactorReport {
    pub fn ok(&self) -> bool {
        self.pi_free
            && self.pi_trivial_tubes
            && self.c_well_defined
            && self.c_equivariant
            && self.square_is_pullback
            && self.charts_descend.iter().all(|&b| b)
    }
}

/// Checks the factorization of the classifying map of an isovariant cover
/// through `X/Π → 𝓔/Π` for a normal subgroup `Π` meeting every family
/// member trivially.
pub fn equivariant_factorization(
    x: &GSpace,
    pi: Subgroup,
    family: &[Subgroup],
    charts: &[TubeChart],
) -> Result<FactorReport> {
    let big = x.group();
    big.is_normal(pi)?;
    for (b, h) in family.iter().enumerate() {
        let meet = h.intersect(pi);
        if let Some(w) = meet.0.iter().find(|&w| w != big.identity()) {
            return Err(Error::Hypothesis(format!(
                "family member {b} meets the normal subgroup in element {}",
                big.name(w)
            )));
        }
    }
    if cover_kind(x, charts)? != CoverKind::Isovariant {
        return Err(Error::Hypothesis("the cover is not isovariant".into()));
    }
    let cm = classifying_map(x, family, charts)?;
    let e = &cm.space;
    let (quot, proj_g) = big.quotient(pi)?;
    let mut witness: Option<String> = None;
    let note = |w: &mut Option<String>, m: String| {
        if w.is_none() {
            *w = Some(m);
        }
    };

    // (a) X → X/Π
    let (x_pi, _) = x.restrict(pi);
    let pi_free = x_pi.is_free();
    let pi_trivial_tubes =
        find_tube_cover(&x_pi, &[x_pi.group().trivial_subgroup()], CoverOptions::default())?.is_ok();
    if !pi_free {
        note(&mut witness, "Π does not act freely".into());
    }
    let orb_pi = x_pi.orbit_space();
    let u = &orb_pi.space;

    // Π-orbits in E, keyed by their least member in mixed-radix order
    let pi_orbit = |v: &[u16]| -> Vec<Vec<u16>> {
        let mut o: Vec<Vec<u16>> = pi.0.iter().map(|k| e.act_digits(v, k)).collect();
        o.sort_by_key(|p| p.iter().rev().copied().collect::<Vec<u16>>());
        o.dedup();
        o
    };
    let c: Vec<Vec<u16>> = orb_pi.reps.iter().map(|&r| pi_orbit(&cm.values[r])[0].clone()).collect();
    let c_well_defined = (0..x.len()).all(|p| pi_orbit(&cm.values[p])[0] == c[orb_pi.proj[p]]);
    if !c_well_defined {
        note(&mut witness, "c depends on the representative".into());
    }
    // X/Π carries the action of 𝔾/Π through any lift
    let lift: Vec<usize> = (0..quot.order())
        .map(|q| big.elements().find(|&g| proj_g[g] == q).unwrap())
        .collect();
    let c_equivariant = (0..u.len()).all(|a| {
        (0..quot.order()).all(|q| {
            let moved = orb_pi.proj[x.act(orb_pi.reps[a], lift[q])];
            c[moved] == pi_orbit(&e.act_digits(&c[a], lift[q]))[0]
        })
    });
    if !c_equivariant {
        note(&mut witness, "c is not equivariant".into());
    }

    // (b) the pullback X/Π ×_{𝓔/Π} 𝓔 and the comparison map
    let mut points: Vec<(usize, Vec<u16>)> = Vec::new();
    for (a, ca) in c.iter().enumerate() {
        points.extend(pi_orbit(ca).into_iter().map(|v| (a, v)));
    }
    let pos: HashMap<&(usize, Vec<u16>), usize> = points.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let pb_space = FinSpace::from_preorder_fn(points.len(), |i, j| {
        u.leq(points[i].0, points[j].0) && ClassifyingSpace::digits_leq(&points[i].1, &points[j].1)
    });
    let comparison: Vec<Option<usize>> = (0..x.len())
        .map(|p| pos.get(&(orb_pi.proj[p], cm.values[p].clone())).copied())
        .collect();
    let square_is_pullback = if comparison.iter().any(Option::is_none) {
        note(&mut witness, "comparison leaves the pullback".into());
        false
    } else {
        let values: Vec<usize> = comparison.iter().map(|v| v.unwrap()).collect();
        let map = SpaceMap::new(x.space().clone(), pb_space, values.clone())?;
        // 𝔾 acts on the pullback by (u, e)·g = (u·ḡ, e·g)
        let equivariant = (0..x.len()).all(|p| {
            big.elements().all(|g| {
                let (a, v) = &points[values[p]];
                let moved_u = orb_pi.proj[x.act(orb_pi.reps[*a], lift[proj_g[g]])];
                let target = (moved_u, e.act_digits(v, g));
                pos.get(&target) == Some(&values[x.act(p, g)])
            })
        });
        let ok = map.is_homeomorphism() && equivariant;
        if !ok {
            note(&mut witness, "comparison map is not a 𝔾-homeomorphism".into());
        }
        ok
    };

    // (c) each chart descends
    let charts_descend = charts
        .iter()
        .map(|ch| chart_descends(x, ch, pi, &quot, &proj_g))
        .collect::<Result<Vec<bool>>>()?;
    if charts_descend.iter().any(|&b| !b) {
        note(&mut witness, "a chart does not descend to 𝔾/Π".into());
    }

    Ok(FactorReport {
        pi_free,
        pi_trivial_tubes,
        c_well_defined,
        c_equivariant,
        pullback_points: points.len(),
        square_is_pullback,
        charts_descend,
        witness,
    })
}

fn chart_descends(
    x: &GSpace,
    chart: &TubeChart,
    pi: Subgroup,
    quot: &crate::group::FinGroup,
    proj_g: &[usize],
) -> Result<bool> {
    let big = x.group();
    let h = chart.subgroup;
    let left = InducedSpace::new(x, &chart.slice, h)?;
    let (left_pi, _) = left.space.restrict(pi);
    let lo = left_pi.orbit_space();

    let s = x.space().subspace(&chart.slice)?;
    let mut slice_pos = vec![usize::MAX; x.len()];
    for (i, &p) in chart.slice.iter().enumerate() {
        slice_pos[p] = i;
    }
    let h_pi = Subgroup(h.0.iter().map(|k| proj_g[k]).collect());
    if h_pi.order() != h.order() {
        return Ok(false);
    }
    let lift_h = |q: usize| h.0.iter().find(|&k| proj_g[k] == q).unwrap();
    let right = InducedSpace::from_h_space(&s, quot, h_pi, |i, q| {
        slice_pos[x.act(chart.slice[i], lift_h(q))]
    });

    // [s, g]Π ↦ [s, gΠ], checked on every member of each Π-orbit
    let mut map = vec![usize::MAX; lo.space.len()];
    for (p, &(i, a)) in left.reps.iter().enumerate() {
        let target = right.point(i, proj_g[a]);
        let o = lo.proj[p];
        if map[o] != usize::MAX && map[o] != target {
            return Ok(false);
        }
        map[o] = target;
    }
    let sm = SpaceMap::new(lo.space.clone(), right.space.space().clone(), map.clone())?;
    if !sm.is_homeomorphism() {
        return Ok(false);
    }
    let equivariant = (0..left.reps.len()).all(|p| {
        big.elements()
            .all(|g| map[lo.proj[left.space.act(p, g)]] == right.space.act(map[lo.proj[p]], proj_g[g]))
    });
    Ok(equivariant)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FinGroup;

    fn klein() -> (FinGroup, Subgroup, Subgroup) {
        let v = FinGroup::builtin("Z2xZ2").unwrap();
        // (a, b) has index 2a + b
        (v.clone(), v.generate(&[2]), v.generate(&[1]))
    }

    #[test]
    fn coset_space_factorizes() {
        let (v, pi, k) = klein();
        let fam = [k];
        let cs = crate::group::CosetSpace::new(&v, &fam).unwrap();
        let x = GSpace::from_cosets(&cs).product_trivial(&FinSpace::bi_sierpinski());
        let charts = find_tube_cover(&x, &fam, CoverOptions::default()).unwrap().unwrap();
        let r = equivariant_factorization(&x, pi, &fam, &charts).unwrap();
        assert!(r.ok(), "{r:?}");
        assert_eq!(r.pullback_points, x.len());
    }

    #[test]
    fn whole_group_is_not_isovariantly_covered() {
        let (v, pi, k) = klein();
        let x = GSpace::free_orbit(&v);
        let fam = [k];
        let charts = find_tube_cover(&x, &fam, CoverOptions::default()).unwrap().unwrap();
        assert!(matches!(
            equivariant_factorization(&x, pi, &fam, &charts),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn trivial_normal_subgroup() {
        let g = FinGroup::symmetric(3);
        let reps = crate::group::conjugacy_representatives(&g);
        let fam = reps.clone();
        let e = ClassifyingSpace::new(&g, &fam, 1, 100).unwrap();
        let x = e.to_gspace();
        let charts = find_tube_cover(&x, &fam, CoverOptions::default()).unwrap().unwrap();
        let r = equivariant_factorization(&x, g.trivial_subgroup(), &fam, &charts).unwrap();
        assert!(r.ok(), "{r:?}");
    }

    #[test]
    fn meeting_the_normal_subgroup_is_rejected() {
        let (v, pi, _) = klein();
        let x = GSpace::free_orbit(&v);
        let fam = [pi];
        let charts = vec![];
        match equivariant_factorization(&x, pi, &fam, &charts) {
            Err(Error::Hypothesis(m)) => assert!(m.contains("element")),
            other => panic!("{other:?}"),
        }
    }
}
