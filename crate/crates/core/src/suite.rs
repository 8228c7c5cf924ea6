//! Property suites over exhaustive or seeded instance families. Each suite
//! returns the number of checks made and the failures it saw.

use std::time::Instant;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::{
    cone_metric, euclidean, iota, random_partition, reduce_cover, sum_norm, sup_distance, sup_norm,
    urysohn_ratio, ConePoint, SurdSum, Q,
};
use crate::classifying::{ClassifyingSpace, DEFAULT_POINT_BUDGET};
use crate::corpus::{corpus, CorpusEntry};
use crate::enumeration::{enumerate_bundles, oracle_bundles, CellComplex, EnumerateOptions};
use crate::error::{Error, Result};
use crate::finspace::{all_preorders, opens_of, specialization_of_topology, FinSpace, SpaceMap};
use crate::group::{conjugacy_representatives, CosetSpace, FinGroup, Subgroup};
use crate::gspace::GSpace;
use crate::pullback::{
    check_classifying_map, cover_kind, equivariant_factorization, find_tube_cover, homotopy_phi,
    validate_chart, verify_psi, CoverKind, CoverOptions, PointOrder, TubeChart,
};

const KEEP_FAILURES: usize = 10;

#[derive(Clone, Debug, Default, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub checks: u64,
    pub failed: u64,
    /// The first few failures.
    pub failures: Vec<String>,
    pub notes: Vec<String>,
    #[serde(skip)]
    pub seconds: f64,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        Self { name: name.into(), ..Self::default() }
    }

    pub fn ok(&self) -> bool {
        self.failed == 0 && self.checks > 0
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.fail(what());
        }
    }

    fn fail(&mut self, what: String) {
        self.failed += 1;
        if self.failures.len() < KEEP_FAILURES {
            self.failures.push(what);
        }
    }

    fn absorb(&mut self, other: SuiteReport) {
        self.checks += other.checks;
        self.failed += other.failed;
        for f in other.failures {
            if self.failures.len() < KEEP_FAILURES {
                self.failures.push(f);
            }
        }
        self.notes.extend(other.notes);
    }

    fn timed(mut self, start: Instant) -> Self {
        self.seconds = start.elapsed().as_secs_f64();
        self
    }
}

pub const SUITE_GROUPS: [&str; 5] = ["Z2", "Z3", "Z4", "V4", "S3"];

/// Nonempty sets of conjugacy class representatives.
pub fn representative_families(g: &FinGroup) -> Vec<Vec<Subgroup>> {
    let reps = conjugacy_representatives(g);
    (1u32..1 << reps.len())
        .map(|m| (0..reps.len()).filter(|i| m >> i & 1 == 1).map(|i| reps[i]).collect())
        .collect()
}

fn one_classifying_space(g: &FinGroup, name: &str, fam: &[Subgroup], kappa: usize, budget: u64) -> SuiteReport {
    let label = format!("{name} family {:?} κ={kappa}", fam.iter().map(|h| h.elements()).collect::<Vec<_>>());
    let mut r = SuiteReport::default();
    let e = match ClassifyingSpace::new(g, fam, kappa, budget) {
        Ok(e) => e,
        Err(Error::BudgetExceeded { reached, .. }) => {
            r.notes.push(format!("{label}: {reached} points exceed the budget"));
            return r;
        }
        Err(err) => {
            r.fail(format!("{label}: {err}"));
            return r;
        }
    };
    let t = e.verify_tubes();
    for m in &t.charts {
        r.check(m.ok(), || format!("{label}: μ on T({}, H{}) fails: {:?}", m.coordinate, m.subgroup, m.witness));
    }
    r.check(t.uncovered.is_empty(), || format!("{label}: uncovered points {:?}", t.uncovered));
    r.check(t.isovariant_uncovered.is_empty(), || {
        format!("{label}: isovariant points outside isovariant tubes {:?}", t.isovariant_uncovered)
    });
    r.check(t.isotropy_formula_agrees, || format!("{label}: isotropy formula disagrees with the action"));
    // an independent tube search on the isovariant part must find an isovariant cover
    if e.len() <= 2_000 {
        let (iso, _) = e.isovariant_part();
        match find_tube_cover(&iso, fam, CoverOptions::default()) {
            Ok(Ok(charts)) => {
                let kind = cover_kind(&iso, &charts);
                r.check(matches!(kind, Ok(CoverKind::Isovariant)), || {
                    format!("{label}: isovariant part covered as {kind:?}")
                });
            }
            other => r.fail(format!("{label}: no tube cover of the isovariant part: {other:?}")),
        }
    }
    r
}

/// Tube covers of `E_F^κG` for every group in [`SUITE_GROUPS`], every
/// family of conjugacy representatives and `κ ≤ 3`.
pub fn prop_tubes(budget: u64) -> SuiteReport {
    let start = Instant::now();
    let mut jobs = Vec::new();
    for name in SUITE_GROUPS {
        let g = FinGroup::builtin(name).expect("builtin group");
        for fam in representative_families(&g) {
            for kappa in 1..=3 {
                jobs.push((name, g.clone(), fam.clone(), kappa));
            }
        }
    }
    let parts: Vec<SuiteReport> = jobs
        .par_iter()
        .map(|(name, g, fam, kappa)| one_classifying_space(g, name, fam, *kappa, budget))
        .collect();
    let mut r = SuiteReport::new("tube covers of classifying spaces");
    r.notes.push(format!("{} classifying spaces", jobs.len()));
    for p in parts {
        r.absorb(p);
    }
    r.timed(start)
}

fn isovariant_cover(e: &CorpusEntry, options: CoverOptions) -> Result<Option<Vec<TubeChart>>> {
    let Ok(charts) = find_tube_cover(&e.space, &e.family, options)? else {
        return Ok(None);
    };
    Ok((cover_kind(&e.space, &charts)? == CoverKind::Isovariant).then_some(charts))
}

/// `Ψ: X → f*(E)` on every corpus space.
pub fn psi_corpus() -> SuiteReport {
    let start = Instant::now();
    let mut r = SuiteReport::new("classifying maps on the corpus");
    let entries = match corpus() {
        Ok(c) => c,
        Err(e) => {
            r.fail(format!("corpus: {e}"));
            return r;
        }
    };
    r.notes.push(format!("{} spaces", entries.len()));
    for e in &entries {
        let charts = match isovariant_cover(e, CoverOptions::default()) {
            Ok(Some(c)) => c,
            other => {
                r.fail(format!("{}: no isovariant cover ({other:?})", e.name));
                continue;
            }
        };
        for c in &charts {
            let v = validate_chart(&e.space, &e.family, c);
            r.check(v.is_ok(), || format!("{}: chart invalid: {v:?}", e.name));
        }
        match check_classifying_map(&e.space, &e.family, &charts) {
            Ok(c) => r.check(c.ok(), || format!("{}: classifying map {c:?}", e.name)),
            Err(err) => r.fail(format!("{}: {err}", e.name)),
        }
        match verify_psi(&e.space, &e.family, &charts) {
            Ok(p) => r.check(p.ok(), || format!("{}: Ψ {p:?}", e.name)),
            Err(err) => r.fail(format!("{}: {err}", e.name)),
        }
    }
    r.timed(start)
}

/// Bundle counts over the circle and the 1-simplex, each compared with the
/// transition-data oracle.
pub fn bundle_counts() -> SuiteReport {
    let start = Instant::now();
    let mut r = SuiteReport::new("bundle enumeration");
    let circle = CellComplex::circle();
    let interval = CellComplex::simplex(1).expect("1-simplex");
    let mut cases: Vec<(&str, &CellComplex, &str, usize)> = vec![("circle", &circle, "Z2", 2), ("circle", &circle, "Z3", 3)];
    for g in ["Z1", "Z2", "Z3", "Z4", "V4", "Z5", "Z6", "S3"] {
        cases.push(("1-simplex", &interval, g, 1));
    }
    for (kname, k, gname, expected) in cases {
        let g = FinGroup::builtin(gname).expect("builtin group");
        let t = Instant::now();
        let label = format!("{kname}/{gname}");
        match (enumerate_bundles(k, &g, EnumerateOptions::default()), oracle_bundles(k, &g)) {
            (Ok(rep), Ok(oracle)) => {
                let found: Vec<_> = rep.classes.iter().map(|c| &c.certificate).collect();
                let want: Vec<_> = oracle.iter().map(|c| &c.certificate).collect();
                r.check(found.len() == expected, || format!("{label}: {} classes, expected {expected}", found.len()));
                r.check(found == want, || format!("{label}: certificates differ from the oracle"));
                r.notes.push(format!(
                    "{label}: {} class{} from {} maps in {:.2}s",
                    found.len(),
                    if found.len() == 1 { "" } else { "es" },
                    rep.maps,
                    t.elapsed().as_secs_f64()
                ));
            }
            (a, b) => r.fail(format!("{label}: {:?} / {:?}", a.err(), b.err())),
        }
    }
    r.timed(start)
}

/// Homotopies joining the classifying maps of two isovariant covers, for
/// `pairs` cover pairs drawn from the corpus.
pub fn phi_pairs(pairs: usize) -> SuiteReport {
    let start = Instant::now();
    let mut r = SuiteReport::new("homotopies between covers");
    let entries = match corpus() {
        Ok(c) => c,
        Err(e) => {
            r.fail(format!("corpus: {e}"));
            return r;
        }
    };
    let mut chosen: Vec<(String, &CorpusEntry, Vec<TubeChart>, Vec<TubeChart>)> = Vec::new();
    'outer: for seed in 0..4u64 {
        for e in &entries {
            if chosen.len() == pairs {
                break 'outer;
            }
            let other = CoverOptions { order: PointOrder::Shuffled(seed), coset_seed: Some(seed) };
            let (Ok(Some(a)), Ok(Some(b))) =
                (isovariant_cover(e, CoverOptions::default()), isovariant_cover(e, other))
            else {
                continue;
            };
            if a != b && !chosen.iter().any(|c| c.1.name == e.name) {
                chosen.push((format!("{} seed {seed}", e.name), e, a, b));
            }
        }
    }
    r.check(chosen.len() == pairs, || format!("only {} distinct cover pairs", chosen.len()));
    for (label, e, a, b) in &chosen {
        match homotopy_phi(&e.space, &e.family, a, b).and_then(|h| h.report()) {
            Ok(p) => r.check(p.ok(), || format!("{label}: {p:?}")),
            Err(err) => r.fail(format!("{label}: {err}")),
        }
    }
    r.notes.push(format!("{} pairs", chosen.len()));
    r.timed(start)
}

/// The Klein four-group with `Π` the first factor and the family the second
/// factor, on `K\𝔾` times `𝕀₀`, `𝕀₁`, `𝕀₂`.
pub fn klein_factorization() -> SuiteReport {
    let start = Instant::now();
    let mut r = SuiteReport::new("factorization through X/Π");
    let v = FinGroup::builtin("Z2xZ2").expect("builtin group");
    // (a, b) has index 2a + b
    let pi = v.generate(&[2]);
    let k = v.generate(&[1]);
    let fam = [k];
    let base = GSpace::from_cosets(&CosetSpace::new(&v, &fam).expect("cosets"));
    for (label, y) in [
        ("K\\G×I2", FinSpace::bi_sierpinski()),
        ("K\\G×I1", FinSpace::sierpinski()),
        ("K\\G", FinSpace::point()),
    ] {
        let x = base.product_trivial(&y);
        let res = find_tube_cover(&x, &fam, CoverOptions::default())
            .and_then(|c| c.map_err(|f| Error::InvalidCover(f.reason)))
            .and_then(|charts| equivariant_factorization(&x, pi, &fam, &charts));
        match res {
            Ok(rep) => {
                r.check(rep.ok(), || format!("{label}: {rep:?}"));
                r.check(rep.square_is_pullback && rep.pullback_points == x.len(), || {
                    format!("{label}: comparison map to the pullback is not an isomorphism")
                });
            }
            Err(err) => r.fail(format!("{label}: {err}")),
        }
    }
    // the whole group has isotropy 1, which is not conjugate into the family
    let whole = GSpace::free_orbit(&v);
    let res = find_tube_cover(&whole, &fam, CoverOptions::default())
        .and_then(|c| c.map_err(|f| Error::InvalidCover(f.reason)))
        .and_then(|charts| equivariant_factorization(&whole, pi, &fam, &charts));
    r.check(matches!(res, Err(Error::Hypothesis(_))), || format!("free orbit accepted: {res:?}"));
    r.timed(start)
}

fn masks_of_opens(x: &FinSpace) -> Vec<u32> {
    let n = x.len();
    (0u32..1 << n)
        .filter(|&m| (0..n).all(|i| m >> i & 1 == 0 || (0..n).all(|j| !x.leq(i, j) || m >> j & 1 == 1)))
        .collect()
}

/// Every preorder on at most four points: opens and specialization are
/// mutually inverse, and monotone maps are exactly the continuous ones.
pub fn duality(max_points: usize) -> SuiteReport {
    let start = Instant::now();
    let mut r = SuiteReport::new("duality and continuity");
    let spaces: Vec<FinSpace> = (1..=max_points).flat_map(all_preorders).collect();
    let opens: Vec<Vec<u32>> = spaces.iter().map(masks_of_opens).collect();
    for (x, brute) in spaces.iter().zip(&opens) {
        let lib = opens_of(x);
        let lib_masks: Vec<u32> = lib.sets.iter().map(|o| o.iter().map(|&i| 1u32 << i).sum()).collect();
        let mut sorted = lib_masks.clone();
        sorted.sort();
        r.check(&sorted == brute, || format!("opens of {x:?} differ from brute force"));
        let back = specialization_of_topology(x.len(), &lib.sets);
        r.check(back.as_ref() == Ok(x), || format!("duality round trip fails on {x:?}"));
    }
    let parts: Vec<SuiteReport> = (0..spaces.len())
        .into_par_iter()
        .map(|di| {
            let mut r = SuiteReport::default();
            let dom = &spaces[di];
            let n = dom.len();
            let dom_open = &opens[di];
            for (cod, cod_opens) in spaces.iter().zip(&opens) {
                let m = cod.len();
                let mut map = SpaceMap::new(dom.clone(), cod.clone(), vec![0; n]).expect("map");
                let total = m.pow(n as u32);
                let mut checked = 0u64;
                for code in 0..total {
                    let mut c = code;
                    for v in map.values.iter_mut() {
                        *v = c % m;
                        c /= m;
                    }
                    let continuous = cod_opens.iter().all(|&o| {
                        let pre: u32 = (0..n).filter(|&i| o >> map.values[i] & 1 == 1).map(|i| 1u32 << i).sum();
                        dom_open.binary_search(&pre).is_ok()
                    });
                    checked += 1;
                    if map.is_continuous() != continuous {
                        r.fail(format!("{dom:?} → {cod:?} via {:?}", map.values));
                    }
                }
                r.checks += checked;
            }
            r
        })
        .collect();
    for p in parts {
        r.absorb(p);
    }
    r.notes.push(format!("{} preorders", spaces.len()));
    r.timed(start)
}

fn random_q(rng: &mut ChaCha8Rng, range: i64, den: i64) -> Q {
    Q::new(rng.random_range(-range..=range).into(), rng.random_range(1..=den).into())
}

fn random_cone_point(rng: &mut ChaCha8Rng) -> ConePoint<Vec<Q>> {
    let t = if rng.random_bool(0.1) { Q::zero() } else { Q::new(rng.random_range(0..=8).into(), 8.into()) };
    let x = vec![random_q(rng, 6, 4), random_q(rng, 6, 4)];
    ConePoint::new(x, t).expect("level in [0,1]")
}

/// Cone metric axioms on `triples` random triples in the cone on ℚ² with
/// the Euclidean metric, truncated at `cap` when given. Triangle failures
/// are tallied by whether `d(x, z) > 2` for the outer pair, the only way the
/// inequality can fail through a lower middle level.
pub fn cone_metric_axioms(seed: u64, triples: usize, cap: Option<Q>) -> SuiteReport {
    let start = Instant::now();
    let name = match &cap {
        None => "cone metric on Euclidean ℚ²".to_string(),
        Some(c) => format!("cone metric on ℚ² with min(d, {c})"),
    };
    let mut r = SuiteReport::new(&name);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cap = cap.map(SurdSum::rational);
    let d = |a: &Vec<Q>, b: &Vec<Q>| {
        let e = euclidean(a, b);
        match &cap {
            Some(c) if e > *c => c.clone(),
            _ => e,
        }
    };
    let two = SurdSum::rational(Q::from_integer(2.into()));
    let (mut wide, mut narrow) = (0u64, 0u64);
    for _ in 0..triples {
        let p: Vec<_> = (0..3).map(|_| random_cone_point(&mut rng)).collect();
        let dist = |i: usize, j: usize| cone_metric(d, &p[i], &p[j]).expect("levels in range");
        let (ab, bc, ac, ba) = (dist(0, 1), dist(1, 2), dist(0, 2), dist(1, 0));
        r.check(!ab.signum().is_lt(), || format!("negative distance {ab}"));
        r.check(ab == ba, || format!("asymmetric: {ab} vs {ba}"));
        r.check(ab.is_zero() == p[0].same_point(&p[1]), || format!("identity of indiscernibles fails at {p:?}"));
        let triangle = ac <= ab.clone() + bc.clone();
        if !triangle {
            if d(&p[0].x, &p[2].x) > two {
                wide += 1;
            } else {
                narrow += 1;
            }
        }
        r.check(triangle, || format!("triangle fails: {ac} > {ab} + {bc}"));
    }
    r.notes.push(format!("seed {seed}, {triples} triples"));
    if wide + narrow > 0 {
        r.notes.push(format!(
            "{} triangle failures, {wide} with d(x,z) > 2 and {narrow} with d(x,z) ≤ 2",
            wide + narrow
        ));
    }
    r.timed(start)
}

/// The cover reduction on `partitions` random partitions of unity with at
/// most eight functions.
pub fn cover_reduction(seed: u64, partitions: usize) -> SuiteReport {
    let start = Instant::now();
    let mut r = SuiteReport::new("cover reduction");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..partitions {
        let n = rng.random_range(1..=8);
        let part = random_partition(&mut rng, n);
        match reduce_cover(&part, None) {
            Ok(c) => r.check(c.ok(), || format!("partition {i}: {:?}", c.witness)),
            Err(e) => r.fail(format!("partition {i}: {e}")),
        }
    }
    r.notes.push(format!("seed {seed}, {partitions} partitions"));
    r.timed(start)
}

/// `ι` and `η` on random samples.
pub fn iota_eta(seed: u64) -> SuiteReport {
    let start = Instant::now();
    let mut r = SuiteReport::new("ι and η");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // ι is level preserving, injective on positive levels, and its norm is the level
    let samples: Vec<(Vec<Q>, Q)> = (0..200)
        .map(|_| {
            let x = vec![random_q(&mut rng, 4, 3), random_q(&mut rng, 4, 3), random_q(&mut rng, 4, 3)];
            (x, Q::new(rng.random_range(1..=6).into(), 6.into()))
        })
        .collect();
    let images: Vec<(Vec<Q>, Q)> = samples.iter().map(|(x, t)| iota(x, t).expect("level")).collect();
    for ((x, t), (v, s)) in samples.iter().zip(&images) {
        r.check(s == t, || format!("ι changes the level of {x:?}"));
        r.check(&sup_norm(v) < t, || format!("‖ι({x:?}, {t})‖ is not below the level"));
        r.check(&sum_norm(v, s) == t, || format!("‖ι({x:?}, {t})‖ ≠ t"));
    }
    for i in 0..samples.len() {
        for j in i + 1..samples.len() {
            if samples[i] != samples[j] {
                r.check(images[i] != images[j], || format!("ι identifies {:?} and {:?}", samples[i], samples[j]));
            }
        }
    }
    let (v, s) = iota(&samples[0].0, &Q::zero()).expect("level");
    r.check(v.iter().all(Zero::is_zero) && s.is_zero(), || "ι does not collapse level 0".into());
    // η on finite sets in ℚ² with the sup metric
    let dq = |a: &Vec<Q>, b: &Vec<Q>| sup_distance(a, b);
    for _ in 0..200 {
        let pts = |rng: &mut ChaCha8Rng, k| -> Vec<Vec<Q>> {
            (0..k).map(|_| vec![random_q(rng, 5, 3), random_q(rng, 5, 3)]).collect()
        };
        let (kc, kz) = (rng.random_range(1..=3), rng.random_range(1..=3));
        let c = pts(&mut rng, kc);
        let z = pts(&mut rng, kz);
        let delta = c.iter().flat_map(|a| z.iter().map(move |b| dq(a, b))).min().expect("nonempty");
        if !delta.is_positive() {
            continue;
        }
        let eta = |x: &Vec<Q>| urysohn_ratio(x, &c, &z, dq);
        for x in &c {
            r.check(eta(x).ok() == Some(Q::zero()), || format!("η ≠ 0 on C at {x:?}"));
        }
        for x in &z {
            r.check(eta(x).ok().as_ref() == Some(&Q::from_integer(1.into())), || format!("η ≠ 1 on Z at {x:?}"));
        }
        let probes = pts(&mut rng, 4);
        for a in &probes {
            for b in &probes {
                let (Ok(ea), Ok(eb)) = (eta(a), eta(b)) else {
                    r.fail(format!("η undefined near {a:?}"));
                    continue;
                };
                r.check(!ea.is_negative() && ea <= Q::from_integer(1.into()), || format!("η({a:?}) = {ea}"));
                // |η(a) − η(b)| ≤ d(a, b)/δ since d(·,C) + d(·,Z) ≥ δ
                r.check((&ea - &eb).abs() * &delta <= dq(a, b), || format!("η is not 1/δ-Lipschitz at {a:?}, {b:?}"));
            }
        }
    }
    r.notes.push(format!("seed {seed}"));
    r.timed(start)
}

/// All suites with their default sizes, in a fixed order.
pub fn all(seed: u64) -> Vec<SuiteReport> {
    vec![
        prop_tubes(DEFAULT_POINT_BUDGET),
        psi_corpus(),
        bundle_counts(),
        phi_pairs(20),
        klein_factorization(),
        duality(4),
        cone_metric_axioms(seed, 10_000, Some(Q::from_integer(2.into()))),
        cover_reduction(seed, 100),
        iota_eta(seed),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        let r = duality(3);
        assert!(r.ok(), "{r:?}");
        let r = cone_metric_axioms(1, 300, Some(Q::from_integer(2.into())));
        assert!(r.ok(), "{r:?}");
        let r = cover_reduction(1, 10);
        assert!(r.ok(), "{r:?}");
        let r = iota_eta(1);
        assert!(r.ok(), "{r:?}");
        let r = klein_factorization();
        assert!(r.ok(), "{r:?}");
    }

    #[test]
    fn families() {
        assert_eq!(representative_families(&FinGroup::symmetric(3)).len(), 15);
        assert_eq!(representative_families(&FinGroup::cyclic(2)).len(), 3);
    }
}
