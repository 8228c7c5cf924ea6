use std::collections::BTreeMap;
use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use super::maps::MonotoneMaps;
use super::{face_space, CellComplex};
use crate::classifying::{ClassifyingSpace, DEFAULT_POINT_BUDGET};
use crate::error::{Error, Result};
use crate::finspace::FinSpace;
use crate::group::FinGroup;
use crate::gspace::{is_g_homeomorphism, GSpace};
use crate::pullback::{classifying_map, find_tube_cover, pullback, Bundle, CoverOptions};

/// Largest `|cells|·|G|` the oracle accepts.
pub const ORACLE_SIZE_CAP: usize = 24;
/// Largest number of raw candidate assignments the oracle will scan.
pub const ORACLE_CANDIDATE_CAP: u128 = 50_000_000;

/// Gauge-minimal transition data of a free bundle.
///
/// With a section `s_b` in each fiber, `D(b, b′) = {g | s_b ⊑ s_{b′}·g}` for
/// every comparable pair `b ⊑ b′` of the base. Changing the section by
/// `h_b` turns `D(b, b′)` into `h_{b′}⁻¹ D(b, b′) h_b`; the certificate is
/// the least mask sequence over all such changes. Two free bundles over the
/// same base are isomorphic over the identity iff their certificates agree.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Certificate(pub Vec<u64>);

#[derive(Clone, Debug)]
pub struct BundleClass {
    pub representative: Bundle,
    pub certificate: Certificate,
    pub multiplicity: u64,
    pub components: usize,
    /// Classifying map `A → B^κG` of the representative, one digit vector
    /// per base point, for classes found by map enumeration.
    pub map: Option<Vec<Vec<u16>>>,
}

/// Comparable pairs `b ⊑ b′` ordered by their larger index, so that a
/// prefix of the pairs only involves a prefix of the base points.
fn base_pairs(base: &FinSpace) -> Vec<(usize, usize)> {
    let n = base.len();
    let mut pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).filter(move |&b| base.leq(a, b)).map(move |b| (a, b)))
        .collect();
    pairs.sort_by_key(|&(a, b)| (a.max(b), a, b));
    pairs
}

fn transform(g: &FinGroup, mask: u64, left: usize, right: usize) -> u64 {
    let li = g.inv(left);
    let mut out = 0u64;
    let mut m = mask;
    while m != 0 {
        let x = m.trailing_zeros() as usize;
        m &= m - 1;
        out |= 1 << g.mul(g.mul(li, x), right);
    }
    out
}

fn gauge_min(g: &FinGroup, n: usize, pairs: &[(usize, usize)], d: &[u64]) -> Certificate {
    let mut start = vec![0usize; n + 1];
    for &(a, b) in pairs {
        start[a.max(b) + 1] += 1;
    }
    for k in 0..n {
        start[k + 1] += start[k];
    }
    struct Search<'s> {
        g: &'s FinGroup,
        n: usize,
        pairs: &'s [(usize, usize)],
        d: &'s [u64],
        start: Vec<usize>,
        h: Vec<usize>,
        cur: Vec<u64>,
        best: Option<Vec<u64>>,
    }
    impl Search<'_> {
        fn run(&mut self, k: usize) {
            let end = self.start[k + 1];
            for hk in self.g.elements() {
                self.h[k] = hk;
                for i in self.start[k]..end {
                    let (a, b) = self.pairs[i];
                    self.cur[i] = transform(self.g, self.d[i], self.h[b], self.h[a]);
                }
                let cmp = self.best.as_ref().map(|b| self.cur[..end].cmp(&b[..end]));
                if cmp == Some(std::cmp::Ordering::Greater) {
                    continue;
                }
                if k + 1 < self.n {
                    self.run(k + 1);
                } else if cmp != Some(std::cmp::Ordering::Equal) {
                    self.best = Some(self.cur.clone());
                }
            }
        }
    }
    if n == 0 {
        return Certificate(Vec::new());
    }
    let mut s = Search {
        g,
        n,
        pairs,
        d,
        start,
        h: vec![0; n],
        cur: vec![0; pairs.len()],
        best: None,
    };
    s.run(0);
    Certificate(s.best.unwrap())
}

pub fn bundle_certificate(bundle: &Bundle) -> Result<Certificate> {
    if !bundle.is_free() {
        return Err(Error::InvalidBundle("certificates are defined for free bundles".into()));
    }
    let base = &bundle.base;
    let x = &bundle.total;
    let g = x.group();
    let sections: Vec<usize> = (0..base.len()).map(|b| bundle.fiber(b)[0]).collect();
    let pairs = base_pairs(base);
    let d: Vec<u64> = pairs
        .iter()
        .map(|&(a, b)| {
            g.elements()
                .filter(|&k| x.leq(sections[a], x.act(sections[b], k)))
                .fold(0u64, |m, k| m | 1 << k)
        })
        .collect();
    Ok(gauge_min(g, base.len(), &pairs, &d))
}

/// An isomorphism of bundles over the identity of the base, as the image of
/// every point of `e1.total`, or `None` when the search is exhausted.
pub fn bundle_iso_over_base(e1: &Bundle, e2: &Bundle) -> Result<Option<Vec<usize>>> {
    if e1.base != e2.base || e1.group().table() != e2.group().table() {
        return Err(Error::BaseMismatch);
    }
    let (x, y) = (&e1.total, &e2.total);
    if x.len() != y.len() {
        return Ok(None);
    }
    let g = x.group();
    let n = e1.base.len();
    let reps: Vec<usize> = (0..n).map(|b| e1.fiber(b)[0]).collect();
    let level = |s: &GSpace, p: usize| (s.space().up_set(p).count(), s.space().down_set(p).count());
    let cands: Vec<Vec<usize>> = (0..n)
        .map(|b| {
            let f2 = e2.fiber(b);
            if f2.len() != e1.fiber(b).len() {
                return Vec::new();
            }
            let r = reps[b];
            f2.into_iter()
                .filter(|&q| y.isotropy(q) == x.isotropy(r) && level(y, q) == level(x, r))
                .collect()
        })
        .collect();
    let compatible = |img: &[usize], b: usize, c: usize| -> bool {
        (0..=b).all(|a| {
            let ya = if a == b { c } else { img[a] };
            let pairs = [(a, b, reps[a], reps[b], ya, c), (b, a, reps[b], reps[a], c, ya)];
            pairs.iter().all(|&(lo, hi, xl, xh, yl, yh)| {
                !e1.base.leq(lo, hi) || g.elements().all(|k| x.leq(xl, x.act(xh, k)) == y.leq(yl, y.act(yh, k)))
            })
        })
    };
    fn search(
        b: usize,
        img: &mut Vec<usize>,
        cands: &[Vec<usize>],
        ok: &dyn Fn(&[usize], usize, usize) -> bool,
    ) -> bool {
        if b == cands.len() {
            return true;
        }
        for &c in &cands[b] {
            if ok(img, b, c) {
                img.push(c);
                if search(b + 1, img, cands, ok) {
                    return true;
                }
                img.pop();
            }
        }
        false
    }
    let mut img = Vec::with_capacity(n);
    if !search(0, &mut img, &cands, &compatible) {
        return Ok(None);
    }
    let mut map = vec![usize::MAX; x.len()];
    for b in 0..n {
        for k in g.elements() {
            map[x.act(reps[b], k)] = y.act(img[b], k);
        }
    }
    let over_base = (0..x.len()).all(|p| e2.proj[map[p]] == e1.proj[p]);
    if !over_base || !is_g_homeomorphism(x, y, &map)? {
        return Err(Error::InvalidBundle("isomorphism search produced an invalid map".into()));
    }
    Ok(Some(map))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EnumerateOptions {
    /// Number of coordinates of `E^κG`; the weight of the base when `None`.
    pub kappa: Option<usize>,
    pub budget_maps: u64,
    pub budget_points: u64,
    /// Worker threads; 0 uses the global pool.
    pub workers: usize,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        Self {
            kappa: None,
            budget_maps: 10_000_000,
            budget_points: DEFAULT_POINT_BUDGET,
            workers: 0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct EnumerationReport {
    pub kappa: usize,
    pub weight: usize,
    pub base_points: usize,
    pub classifying_points: usize,
    pub orbit_points: usize,
    pub maps: u64,
    /// Sorted by certificate.
    pub classes: Vec<BundleClass>,
}

struct Partition {
    count: u64,
    classes: Vec<(Certificate, Vec<usize>, u64)>,
}

/// Pulls back `E^κG` along every continuous `A → B^κG`, where `A` is the
/// face space of `k`, and groups the resulting free bundles into
/// isomorphism classes over `A`.
pub fn enumerate_bundles(k: &CellComplex, g: &FinGroup, opts: EnumerateOptions) -> Result<EnumerationReport> {
    let a = face_space(k);
    let weight = a.weight();
    let kappa = opts.kappa.unwrap_or(weight);
    let e = ClassifyingSpace::new(g, &[g.trivial_subgroup()], kappa, opts.budget_points)?;
    let orb = e.orbit_space();
    let b_space = &orb.space;
    let rep_digits: Vec<Vec<u16>> = orb.reps.iter().map(|&r| e.digits(r)).collect();
    // D(b, g) masks between orbit representatives, computed once per pair
    let nb = b_space.len();
    let mut d_table: HashMap<(usize, usize), u64> = HashMap::new();
    for p in 0..nb {
        for q in b_space.up_set(p).iter() {
            let m = g
                .elements()
                .filter(|&h| ClassifyingSpace::digits_leq(&rep_digits[p], &e.act_digits(&rep_digits[q], h)))
                .fold(0u64, |m, h| m | 1 << h);
            d_table.insert((p, q), m);
        }
    }
    let pairs = base_pairs(&a);
    let cap = opts.budget_maps;
    let seen = AtomicU64::new(0);
    let first_values: Vec<usize> = (0..nb).collect();
    let run_partition = |v: usize| -> Partition {
        let mut classes: HashMap<Certificate, (usize, Vec<usize>, u64)> = HashMap::new();
        let mut count = 0u64;
        let it = if a.is_empty() {
            MonotoneMaps::new(&a, b_space)
        } else {
            MonotoneMaps::new(&a, b_space).with_first(v)
        };
        for m in it {
            if seen.fetch_add(1, Ordering::Relaxed) >= cap {
                break;
            }
            count += 1;
            let d: Vec<u64> = pairs.iter().map(|&(x, y)| d_table[&(m[x], m[y])]).collect();
            let cert = gauge_min(g, a.len(), &pairs, &d);
            let order = classes.len();
            classes.entry(cert).or_insert((order, m, 0)).2 += 1;
        }
        let mut classes: Vec<(Certificate, (usize, Vec<usize>, u64))> = classes.into_iter().collect();
        classes.sort_by_key(|c| c.1 .0);
        Partition {
            count,
            classes: classes.into_iter().map(|(c, (_, m, n))| (c, m, n)).collect(),
        }
    };
    let parts: Vec<Partition> = if a.is_empty() {
        vec![run_partition(0)]
    } else if opts.workers == 0 {
        first_values.par_iter().map(|&v| run_partition(v)).collect()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(opts.workers)
            .build()
            .expect("thread pool")
            .install(|| first_values.par_iter().map(|&v| run_partition(v)).collect())
    };
    let total: u64 = parts.iter().map(|p| p.count).sum();
    if seen.load(Ordering::Relaxed) > cap {
        return Err(Error::BudgetExceeded {
            what: "classifying maps",
            limit: cap,
            reached: cap + 1,
        });
    }
    let mut merged: BTreeMap<Certificate, (Vec<usize>, u64)> = BTreeMap::new();
    for p in parts {
        for (c, m, n) in p.classes {
            merged.entry(c).or_insert((m, 0)).1 += n;
        }
    }
    let mut classes = Vec::with_capacity(merged.len());
    for (certificate, (m, multiplicity)) in merged {
        let f: Vec<Vec<u16>> = m.iter().map(|&v| rep_digits[v].clone()).collect();
        let pb = pullback(&a, &f, &e)?;
        let bundle = pb.bundle;
        if !bundle.is_free() || bundle_certificate(&bundle)? != certificate {
            return Err(Error::InvalidBundle("pullback disagrees with its transition data".into()));
        }
        let components = bundle.total.space().components().len();
        classes.push(BundleClass {
            representative: bundle,
            certificate,
            multiplicity,
            components,
            map: Some(f),
        });
    }
    Ok(EnumerationReport {
        kappa,
        weight,
        base_points: a.len(),
        classifying_points: e.len(),
        orbit_points: nb,
        maps: total,
        classes,
    })
}

fn compose(g: &FinGroup, left: u64, right: u64) -> u64 {
    let mut out = 0u64;
    for x in (0..g.order()).filter(|&x| left >> x & 1 == 1) {
        for y in (0..g.order()).filter(|&y| right >> y & 1 == 1) {
            out |= 1 << g.mul(x, y);
        }
    }
    out
}

/// Brute force over all `G`-invariant preorders on `cells × G` whose orbit
/// space is the face space of `k` and which are covered by `{1}`-tubes.
///
/// A candidate is given by sets `D(b, b′) ⊆ G` on comparable cells, with
/// `(b, g) ⊑ (b′, g′)` iff `g′g⁻¹ ∈ D(b, b′)`.
pub fn oracle_bundles(k: &CellComplex, g: &FinGroup) -> Result<Vec<BundleClass>> {
    let a = face_space(k);
    let n = a.len();
    let order = g.order();
    if n * order > ORACLE_SIZE_CAP {
        return Err(Error::BudgetExceeded {
            what: "oracle cells times group order",
            limit: ORACLE_SIZE_CAP as u64,
            reached: (n * order) as u64,
        });
    }
    let pairs = base_pairs(&a);
    let subgroup_masks: Vec<u64> = g.all_subgroups().iter().map(|s| s.0 .0).collect();
    let all_masks: Vec<u64> = (1u64..1 << order).collect();
    // diagonal pairs first so that their constraints prune early
    let mut slots: Vec<usize> = (0..pairs.len()).collect();
    slots.sort_by_key(|&i| (pairs[i].0 != pairs[i].1, i));
    let options: Vec<&[u64]> = slots
        .iter()
        .map(|&i| if pairs[i].0 == pairs[i].1 { &subgroup_masks[..] } else { &all_masks[..] })
        .collect();
    let raw: u128 = options.iter().map(|o| o.len() as u128).product();
    if raw > ORACLE_CANDIDATE_CAP {
        return Err(Error::BudgetExceeded {
            what: "oracle candidates",
            limit: ORACLE_CANDIDATE_CAP as u64,
            reached: raw.min(u64::MAX as u128) as u64,
        });
    }
    let slot_of: HashMap<(usize, usize), usize> =
        slots.iter().enumerate().map(|(s, &i)| (pairs[i], s)).collect();
    // D(b′, b″)·D(b, b′) ⊆ D(b, b″), checked once all three are assigned
    let mut triples: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); slots.len()];
    for &(x, y) in &pairs {
        for z in a.up_set(y).iter() {
            let t = (slot_of[&(y, z)], slot_of[&(x, y)], slot_of[&(x, z)]);
            triples[t.0.max(t.1).max(t.2)].push(t);
        }
    }

    let mut found: BTreeMap<Certificate, (Bundle, u64)> = BTreeMap::new();
    let mut assign = vec![0u64; slots.len()];
    let mut accept = |assign: &[u64]| -> Result<()> {
        let mut d = HashMap::new();
        for (s, &i) in slots.iter().enumerate() {
            d.insert(pairs[i], assign[s]);
        }
        let m = n * order;
        let rel: Vec<(usize, usize)> = (0..m)
            .flat_map(|p| (0..m).map(move |q| (p, q)))
            .filter(|&(p, q)| {
                let (b, x) = (p / order, p % order);
                let (c, y) = (q / order, q % order);
                d.get(&(b, c)).is_some_and(|&mask| mask >> g.mul(y, g.inv(x)) & 1 == 1)
            })
            .collect();
        let space = FinSpace::from_relation(m, &rel)?;
        if space.strict_pairs().len() + m != rel.len() {
            return Ok(());
        }
        let act = (0..m)
            .map(|p| g.elements().map(|h| p / order * order + g.mul(p % order, h)).collect())
            .collect();
        let x = GSpace::new(space, g.clone(), act)?;
        if x.orbit_space().space != a {
            return Ok(());
        }
        if find_tube_cover(&x, &[g.trivial_subgroup()], CoverOptions::default())?.is_err() {
            return Ok(());
        }
        let bundle = Bundle::new(x, a.clone(), (0..m).map(|p| p / order).collect())?;
        let cert = bundle_certificate(&bundle)?;
        found.entry(cert).or_insert((bundle, 0)).1 += 1;
        Ok(())
    };
    fn walk(
        s: usize,
        assign: &mut Vec<u64>,
        options: &[&[u64]],
        triples: &[Vec<(usize, usize, usize)>],
        g: &FinGroup,
        accept: &mut dyn FnMut(&[u64]) -> Result<()>,
    ) -> Result<()> {
        if s == options.len() {
            return accept(assign);
        }
        for &mask in options[s] {
            assign[s] = mask;
            let ok = triples[s].iter().all(|&(p2, p1, p3)| {
                let c = compose(g, assign[p2], assign[p1]);
                c & !assign[p3] == 0
            });
            if ok {
                walk(s + 1, assign, options, triples, g, accept)?;
            }
        }
        Ok(())
    }
    walk(0, &mut assign, &options, &triples, g, &mut accept)?;
    Ok(found
        .into_iter()
        .map(|(certificate, (bundle, multiplicity))| BundleClass {
            components: bundle.total.space().components().len(),
            representative: bundle,
            certificate,
            multiplicity,
            map: None,
        })
        .collect())
}

/// Classifies a free bundle by a `{1}`-tube cover, pulls back the
/// classifying space along the induced map and compares the result with
/// the bundle over the identity of the base.
pub fn classify_round_trip(bundle: &Bundle) -> Result<bool> {
    let x = &bundle.total;
    let fam = [x.group().trivial_subgroup()];
    let charts = match find_tube_cover(x, &fam, CoverOptions::default())? {
        Ok(c) => c,
        Err(_) => return Ok(false),
    };
    let cm = classifying_map(x, &fam, &charts)?;
    let pb = pullback(&cm.orbits.space, &cm.f, &cm.space)?;
    // orbit o of X lies over the base point proj(rep o)
    let to_base: Vec<usize> = cm.orbits.reps.iter().map(|&r| bundle.proj[r]).collect();
    let proj: Vec<usize> = pb.bundle.proj.iter().map(|&o| to_base[o]).collect();
    let rebased = Bundle::new(pb.bundle.total, bundle.base.clone(), proj)?;
    Ok(bundle_iso_over_base(bundle, &rebased)?.is_some())
}
