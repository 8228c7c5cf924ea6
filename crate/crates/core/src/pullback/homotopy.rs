use serde::Serialize;

use super::classify::{class_representatives, classifying_map, image_of};
use super::{cover_kind, CoverKind, TubeChart};
use crate::classifying::ClassifyingSpace;
use crate::error::{Error, Result};
use crate::finspace::FinSpace;
use crate::group::Subgroup;
use crate::gspace::{is_filtered_map, orbit_type_filtration, GSpace};

/// `Φ: X × 𝕀₂ → E_F^{I⊔J}G` joining the classifying maps of two covers.
/// The point `(x, t)` of the domain has index `3x + t`, with `t = 0, 1, 2`
/// standing for `−1, 0, +1`.
#[derive(Clone, Debug)]
pub struct Homotopy {
    pub space: ClassifyingSpace,
    pub domain: GSpace,
    pub values: Vec<Vec<u16>>,
    kappa_i: usize,
    expected_minus: Vec<Vec<u16>>,
    expected_plus: Vec<Vec<u16>>,
    expected_middle: Vec<Vec<u16>>,
    family: Vec<Subgroup>,
}

pub fn homotopy_phi(
    x: &GSpace,
    family: &[Subgroup],
    charts_i: &[TubeChart],
    charts_j: &[TubeChart],
) -> Result<Homotopy> {
    for charts in [charts_i, charts_j] {
        if cover_kind(x, charts)? != CoverKind::Isovariant {
            return Err(Error::Hypothesis("both covers must be isovariant".into()));
        }
    }
    let fi = classifying_map(x, family, charts_i)?;
    let fj = classifying_map(x, family, charts_j)?;
    let (ki, kj) = (charts_i.len(), charts_j.len());
    let space = ClassifyingSpace::new_allowing_conjugates(x.group(), family, ki + kj, u64::MAX)?;
    let domain = x.product_trivial(&FinSpace::bi_sierpinski());
    let zeros = |k: usize| vec![0u16; k];
    let values = (0..domain.len())
        .map(|p| {
            let (a, t) = (p / 3, p % 3);
            let (left, right) = match t {
                0 => (fi.values[a].clone(), zeros(kj)),
                1 => (fi.values[a].clone(), fj.values[a].clone()),
                _ => (zeros(ki), fj.values[a].clone()),
            };
            [left, right].concat()
        })
        .collect();
    let combined: Vec<TubeChart> = charts_i.iter().chain(charts_j).cloned().collect();
    let middle = classifying_map(x, family, &combined)?;
    let extend = |v: &[Vec<u16>], left: bool| -> Vec<Vec<u16>> {
        v.iter()
            .map(|d| if left { [d.clone(), zeros(kj)].concat() } else { [zeros(ki), d.clone()].concat() })
            .collect()
    };
    Ok(Homotopy {
        space,
        domain,
        values,
        kappa_i: ki,
        expected_minus: extend(&fi.values, true),
        expected_plus: extend(&fj.values, false),
        expected_middle: middle.values,
        family: family.to_vec(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhiReport {
    pub kappa_i: usize,
    pub kappa_j: usize,
    pub continuous: bool,
    pub equivariant: bool,
    pub lands_in_isovariant_part: bool,
    pub restricts_at_minus: bool,
    pub restricts_at_plus: bool,
    pub middle_is_combined_cover: bool,
    pub orbit_map_filtered: bool,
}

impl PhiReport {
    pub fn ok(&self) -> bool {
        self.continuous
            && self.equivariant
            && self.lands_in_isovariant_part
            && self.restricts_at_minus
            && self.restricts_at_plus
            && self.middle_is_combined_cover
            && self.orbit_map_filtered
    }
}

impl Homotopy {
    pub fn report(&self) -> Result<PhiReport> {
        let d = &self.domain;
        let e = &self.space;
        let g = d.group();
        let n = d.len();
        let continuous = (0..n).all(|p| {
            d.space()
                .up_set(p)
                .iter()
                .all(|q| ClassifyingSpace::digits_leq(&self.values[p], &self.values[q]))
        });
        let equivariant = (0..n).all(|p| {
            g.elements()
                .all(|k| self.values[d.act(p, k)] == e.act_digits(&self.values[p], k))
        });
        let lands = self.values.iter().all(|v| e.is_isovariant_digits(v));
        let at = |t: usize| -> Vec<Vec<u16>> { (0..n / 3).map(|a| self.values[3 * a + t].clone()).collect() };
        let orbit_map_filtered = if lands {
            let reps = class_representatives(g, &self.family);
            let (img, _, idx) = image_of(e, &self.values);
            let (dorb, fd) = orbit_type_filtration(d, &reps)?;
            let (io, fi) = orbit_type_filtration(&img, &reps)?;
            let values: Vec<usize> = dorb.reps.iter().map(|&r| io.proj[idx[r]]).collect();
            is_filtered_map(&values, &fd, &fi)?
        } else {
            false
        };
        Ok(PhiReport {
            kappa_i: self.kappa_i,
            kappa_j: e.kappa() - self.kappa_i,
            continuous,
            equivariant,
            lands_in_isovariant_part: lands,
            restricts_at_minus: at(0) == self.expected_minus,
            restricts_at_plus: at(2) == self.expected_plus,
            middle_is_combined_cover: at(1) == self.expected_middle,
            orbit_map_filtered,
        })
    }
}
