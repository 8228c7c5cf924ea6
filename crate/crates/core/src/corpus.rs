//! A fixed collection of finite `G`-spaces with isovariant tube covers,
//! used by the test suites and `selftest`.

use crate::classifying::ClassifyingSpace;
use crate::enumeration::{enumerate_bundles, CellComplex, EnumerateOptions};
use crate::error::Result;
use crate::finspace::FinSpace;
use crate::group::{conjugacy_representatives, CosetSpace, FinGroup, Subgroup};
use crate::gspace::GSpace;

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub space: GSpace,
    /// Conjugacy representatives of subgroups containing every isotropy
    /// group up to conjugacy.
    pub family: Vec<Subgroup>,
}

pub const CORPUS_GROUPS: [&str; 5] = ["Z2", "Z3", "Z4", "V4", "S3"];

fn coset_gspace(g: &FinGroup, h: Subgroup) -> Result<GSpace> {
    Ok(GSpace::from_cosets(&CosetSpace::new(g, &[h])?))
}

/// `H\G ⊔ K\G` for `H ≤ K` with `Kg ⊑ Hg`.
fn cylinder(g: &FinGroup, h: Subgroup, k: Subgroup) -> Result<GSpace> {
    let small = coset_gspace(g, h)?;
    let large = coset_gspace(g, k)?;
    let sum = small.sum(&large)?;
    let n = small.len();
    // the coset of K through the representative of each H-coset
    let cs_h = CosetSpace::new(g, &[h])?;
    let cs_k = CosetSpace::new(g, &[k])?;
    let mut pairs = Vec::new();
    for p in 0..n {
        let c = cs_h.representative(p);
        let q = n + cs_k.act(cs_k.base_point(0), c);
        pairs.push((q, p));
    }
    let space = FinSpace::from_relation(sum.len(), &pairs)?;
    GSpace::new(space, g.clone(), sum.action_table().to_vec())
}

/// The corpus: coset spaces and their products with `𝕀₁`, `𝕀₂`,
/// two-orbit cylinders, isovariant parts of classifying spaces, and
/// enumerated bundles over the circle.
pub fn corpus() -> Result<Vec<CorpusEntry>> {
    let mut out = Vec::new();
    for name in CORPUS_GROUPS {
        let g = FinGroup::builtin(name).expect("builtin group");
        let reps = conjugacy_representatives(&g);
        let mut push = |label: String, space: GSpace| {
            out.push(CorpusEntry { name: format!("{name}/{label}"), space, family: reps.clone() });
        };
        for (i, &h) in reps.iter().enumerate() {
            let x = coset_gspace(&g, h)?;
            push(format!("H{i}\\G"), x.clone());
            push(format!("H{i}\\G×I1"), x.product_trivial(&FinSpace::sierpinski()));
            push(format!("H{i}\\G×I2"), x.product_trivial(&FinSpace::bi_sierpinski()));
        }
        for (i, &h) in reps.iter().enumerate() {
            for (j, &k) in reps.iter().enumerate() {
                if i != j && h.0.is_subset(k.0) {
                    push(format!("cyl(H{j}<H{i})"), cylinder(&g, h, k)?);
                }
            }
        }
        if g.order() <= 4 || name == "S3" {
            for kappa in 1..=2 {
                let e = ClassifyingSpace::new(&g, &reps, kappa, 10_000)?;
                push(format!("iso(E^{kappa})"), e.isovariant_part().0);
            }
        }
    }
    for name in ["Z2", "Z3"] {
        let g = FinGroup::builtin(name).expect("builtin group");
        let report = enumerate_bundles(&CellComplex::circle(), &g, EnumerateOptions::default())?;
        for (i, c) in report.classes.iter().enumerate() {
            out.push(CorpusEntry {
                name: format!("{name}/bundle{i}"),
                space: c.representative.total.clone(),
                family: vec![g.trivial_subgroup()],
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pullback::{cover_kind, find_tube_cover, CoverKind, CoverOptions};

    #[test]
    fn every_entry_is_isovariantly_covered() {
        let c = corpus().unwrap();
        assert!(c.len() >= 30, "{}", c.len());
        for e in &c {
            let charts = find_tube_cover(&e.space, &e.family, CoverOptions::default())
                .unwrap()
                .unwrap_or_else(|f| panic!("{}: {f:?}", e.name));
            assert_eq!(cover_kind(&e.space, &charts).unwrap(), CoverKind::Isovariant, "{}", e.name);
        }
    }
}
