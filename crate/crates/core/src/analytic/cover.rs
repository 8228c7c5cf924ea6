//! Reduction of a partition of unity on `[0,1]` to a cover indexed by the
//! positive integers.

use num_traits::{One, Zero};
use rand::Rng;
use rayon::prelude::*;

use super::pl::{OpenSet, PLFunc};
use super::Q;
use crate::error::{Error, Result};

/// Largest number of functions `reduce_cover` accepts.
pub const MAX_FUNCTIONS: usize = 16;

#[derive(Clone, Debug)]
pub struct CoverSet {
    pub members: Vec<usize>,
    /// `q_F = max{0, min_{U∈F} t_U − max_{U∉F} t_U}`.
    pub q: PLFunc,
    /// `V_F = {q_F > 0}`.
    pub support: OpenSet,
}

#[derive(Clone, Debug)]
pub struct CoverReport {
    pub names: Vec<String>,
    /// Sets `V_F` with nonempty support, by size of `F` and then by `F`.
    pub sets: Vec<CoverSet>,
    /// `V_n` for `n = 1, …, |𝒰|`.
    pub levels: Vec<OpenSet>,
    /// `V_E ∩ V_F = ∅` whenever `E ≠ F` have the same size.
    pub disjoint_levels: bool,
    /// The `V_n` cover `[0,1]`.
    pub covers: bool,
    /// Each `V_F` lies in some `U ∈ F`.
    pub subordinate: bool,
    /// Each `V_F` meets only members of `F`, so only finitely many `V_F`
    /// meet any set that meets finitely many `U`.
    pub locally_finite: bool,
    pub witness: Option<String>,
}

impl CoverReport {
    pub fn ok(&self) -> bool {
        self.disjoint_levels && self.covers && self.subordinate && self.locally_finite
    }
}

/// Runs the reduction on functions `t_U` with optional open sets `U`; when
/// `opens` is `None` each `U` is taken to be `{t_U > 0}`.
pub fn reduce_cover(part: &[(String, PLFunc)], opens: Option<&[OpenSet]>) -> Result<CoverReport> {
    let bad = |m: String| Err(Error::PartitionOfUnity(m));
    let n = part.len();
    if n == 0 {
        return bad("no functions".into());
    }
    if n > MAX_FUNCTIONS {
        return bad(format!("{n} functions exceed the limit of {MAX_FUNCTIONS}"));
    }
    let funcs: Vec<&PLFunc> = part.iter().map(|p| &p.1).collect();
    for (name, f) in part {
        if !f.is_nonnegative() {
            return bad(format!("{name} takes negative values"));
        }
    }
    let sum = funcs[1..].iter().fold(funcs[0].clone(), |acc, f| acc.add(f));
    if !sum.is_constant(&Q::one()) {
        return bad("the functions do not sum to 1".into());
    }
    let supports: Vec<OpenSet> = funcs.iter().map(|f| f.positive_set()).collect();
    let opens: Vec<OpenSet> = match opens {
        Some(o) if o.len() != n => return bad(format!("{} open sets for {n} functions", o.len())),
        Some(o) => o.to_vec(),
        None => supports.clone(),
    };
    for i in 0..n {
        if !supports[i].is_subset(&opens[i]) {
            return bad(format!("{{{} > 0}} is not contained in its open set", part[i].0));
        }
    }

    let zero = PLFunc::constant(Q::zero());
    let mut masks: Vec<u32> = (1u32..1 << n).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    let all: Vec<CoverSet> = masks
        .par_iter()
        .map(|&m| {
            let inside: Vec<usize> = (0..n).filter(|i| m >> i & 1 == 1).collect();
            let lo = inside[1..].iter().fold(funcs[inside[0]].clone(), |acc, &i| acc.min(funcs[i]));
            let hi = (0..n).filter(|i| m >> i & 1 == 0).fold(zero.clone(), |acc, i| acc.max(funcs[i]));
            let q = lo.sub(&hi).max(&zero);
            let support = q.positive_set();
            CoverSet { members: inside, q, support }
        })
        .collect();

    let mut witness = None;
    let mut note = |m: String| {
        if witness.is_none() {
            witness = Some(m);
        }
    };
    let label = |s: &CoverSet| format!("{{{}}}", s.members.iter().map(|&i| part[i].0.as_str()).collect::<Vec<_>>().join(","));

    let mut levels = vec![OpenSet::empty(); n];
    let mut disjoint_levels = true;
    for (i, a) in all.iter().enumerate() {
        let k = a.members.len();
        for b in all[i + 1..].iter().take_while(|b| b.members.len() == k) {
            if !a.support.intersection(&b.support).is_empty() {
                disjoint_levels = false;
                note(format!("V{} meets V{}", label(a), label(b)));
            }
        }
        levels[k - 1] = levels[k - 1].union(&a.support);
    }
    let covers = levels.iter().fold(OpenSet::empty(), |acc, v| acc.union(v)).is_whole();
    if !covers {
        note("the sets V_n do not cover [0,1]".into());
    }
    let mut subordinate = true;
    let mut locally_finite = true;
    for s in &all {
        if s.support.is_empty() {
            continue;
        }
        if !s.members.iter().any(|&i| s.support.is_subset(&opens[i])) {
            subordinate = false;
            note(format!("V{} lies in no member of F", label(s)));
        }
        if !s.members.iter().all(|&i| s.support.is_subset(&supports[i])) {
            locally_finite = false;
            note(format!("V{} leaves the support of a member of F", label(s)));
        }
    }
    Ok(CoverReport {
        names: part.iter().map(|p| p.0.clone()).collect(),
        sets: all.into_iter().filter(|s| !s.support.is_empty()).collect(),
        levels,
        disjoint_levels,
        covers,
        subordinate,
        locally_finite,
        witness,
    })
}

fn named(fs: Vec<(&str, &[&str], &[&str])>) -> Vec<(String, PLFunc)> {
    fs.into_iter()
        .map(|(n, b, v)| (n.to_string(), PLFunc::parse(b, v).unwrap()))
        .collect()
}

/// `t₁ = 1 − x`, `t₂ = x`.
pub fn two_functions() -> Vec<(String, PLFunc)> {
    named(vec![("1", &["0", "1"], &["1", "0"]), ("2", &["0", "1"], &["0", "1"])])
}

/// Three tents on the breakpoints `0, 1/4, 1/2, 3/4, 1`, each overlapping
/// its neighbours.
pub fn three_tents() -> Vec<(String, PLFunc)> {
    let b: &[&str] = &["0", "1/4", "1/2", "3/4", "1"];
    named(vec![
        ("1", b, &["1", "1", "0", "0", "0"]),
        ("2", b, &["0", "0", "1", "0", "0"]),
        ("3", b, &["0", "0", "0", "1", "1"]),
    ])
}

/// `n` piecewise-linear functions sharing random breakpoints with
/// nonnegative values summing to 1 at every breakpoint.
pub fn random_partition(rng: &mut impl Rng, n: usize) -> Vec<(String, PLFunc)> {
    let den = 24i64;
    let interior = rng.random_range(0..=5);
    let mut cuts: Vec<i64> = (0..interior).map(|_| rng.random_range(1..den)).collect();
    cuts.push(0);
    cuts.push(den);
    cuts.sort();
    cuts.dedup();
    let grid: Vec<Q> = cuts.iter().map(|&c| Q::new(c.into(), den.into())).collect();
    let mut values = vec![Vec::with_capacity(grid.len()); n];
    for _ in &grid {
        let mut w: Vec<i64> = (0..n)
            .map(|_| if rng.random_bool(0.4) { 0 } else { rng.random_range(1..=4) })
            .collect();
        if w.iter().all(|&x| x == 0) {
            w[rng.random_range(0..n)] = 1;
        }
        let total: i64 = w.iter().sum();
        for (i, &x) in w.iter().enumerate() {
            values[i].push(Q::new(x.into(), total.into()));
        }
    }
    values
        .into_iter()
        .enumerate()
        .map(|(i, v)| (format!("t{}", i + 1), PLFunc::new(grid.clone(), v).unwrap()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(s: &str) -> Q {
        crate::analytic::parse_rational(s).unwrap()
    }

    fn support_of(r: &CoverReport, members: &[usize]) -> String {
        r.sets
            .iter()
            .find(|s| s.members == members)
            .map_or("∅".to_string(), |s| s.support.to_string())
    }

    #[test]
    fn single_function() {
        let part = vec![("U".to_string(), PLFunc::constant(Q::one()))];
        let r = reduce_cover(&part, None).unwrap();
        assert!(r.ok());
        assert!(r.levels[0].is_whole());
        assert!(r.sets[0].q.is_constant(&Q::one()));
    }

    #[test]
    fn two_functions_example() {
        let r = reduce_cover(&two_functions(), None).unwrap();
        assert!(r.ok(), "{:?}", r.witness);
        assert_eq!(support_of(&r, &[0]), "[0,1/2)");
        assert_eq!(support_of(&r, &[1]), "(1/2,1]");
        assert_eq!(support_of(&r, &[0, 1]), "(0,1)");
    }

    #[test]
    fn three_tents_example() {
        let r = reduce_cover(&three_tents(), None).unwrap();
        assert!(r.ok(), "{:?}", r.witness);
        assert_eq!(support_of(&r, &[0]), "[0,3/8)");
        assert_eq!(support_of(&r, &[1]), "(3/8,5/8)");
        assert_eq!(support_of(&r, &[2]), "(5/8,1]");
        assert_eq!(support_of(&r, &[0, 1]), "(1/4,1/2)");
        assert_eq!(support_of(&r, &[1, 2]), "(1/2,3/4)");
        assert_eq!(support_of(&r, &[0, 2]), "∅");
        assert_eq!(support_of(&r, &[0, 1, 2]), "∅");
        assert_eq!(r.levels[0].pieces().len(), 3);
        assert!(r.levels[2].is_empty());
    }

    #[test]
    fn preconditions() {
        let mut p = two_functions();
        p[1].1 = PLFunc::constant(q("1/2"));
        assert!(matches!(reduce_cover(&p, None), Err(Error::PartitionOfUnity(_))));
        let neg = vec![
            ("a".to_string(), PLFunc::parse(&["0", "1"], &["2", "-1"]).unwrap()),
            ("b".to_string(), PLFunc::parse(&["0", "1"], &["-1", "2"]).unwrap()),
        ];
        assert!(matches!(reduce_cover(&neg, None), Err(Error::PartitionOfUnity(_))));
        let small = [OpenSet::parse("[0,1/4)").unwrap(), OpenSet::whole()];
        assert!(matches!(reduce_cover(&two_functions(), Some(&small)), Err(Error::PartitionOfUnity(_))));
    }

    #[test]
    fn random_partitions() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let n = rng.random_range(1..=6);
            let r = reduce_cover(&random_partition(&mut rng, n), None).unwrap();
            assert!(r.ok(), "{:?}", r.witness);
        }
    }
}
