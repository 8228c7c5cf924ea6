use serde_json::{json, Value};

use finclass_core::analytic::reduce_cover;
use finclass_core::classifying::ClassifyingSpace;
use finclass_core::enumeration::{enumerate_bundles, oracle_bundles, EnumerateOptions};
use finclass_core::json::{BundleJson, GSpaceJson, PartitionJson, SpaceJson};
use finclass_core::pullback::{
    check_classifying_map, classifying_map, cover_kind, find_tube_cover, homotopy_phi, pullback,
    verify_psi, CoverKind, CoverOptions, PointOrder, TubeChart,
};
use finclass_core::suite::{self, SuiteReport};
use finclass_core::{Error, FinGroup, GSpace, Result, Subgroup};

use crate::inputs::{self, ClassifyingJson, PullbackMapJson};
use crate::{Cli, Command, Common};

pub struct Outcome {
    pub report: Value,
    pub code: u8,
    pub error: Option<String>,
}

/// What a subcommand produced: its result and whether every check held.
struct Done {
    result: Value,
    ok: bool,
}

pub fn run(cli: &Cli) -> Outcome {
    let config = json!({
        "command": cli.command,
        "budget_points": cli.common.budget_points,
        "budget_maps": cli.common.budget_maps,
        "seed": cli.common.seed,
    });
    let mut report = json!({ "config": config, "seed": cli.common.seed });
    if cli.common.workers > 0 {
        // a second initialisation only fails if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.common.workers).build_global();
    }
    match dispatch(&cli.command, &cli.common) {
        Ok(done) => {
            report["ok"] = json!(done.ok);
            report["result"] = done.result;
            Outcome { report, code: if done.ok { 0 } else { 2 }, error: None }
        }
        Err(e) => {
            report["ok"] = json!(false);
            report["error"] = json!(e.to_string());
            Outcome { report, code: 1, error: Some(e.to_string()) }
        }
    }
}

fn dispatch(cmd: &Command, common: &Common) -> Result<Done> {
    match cmd {
        Command::BuildClassifying { group, family, kappa, emit_space } => {
            build_classifying(group, family, *kappa, *emit_space, common)
        }
        Command::Classify { gspace, family } => {
            let x = inputs::read_json::<GSpaceJson>(gspace)?.to_gspace()?;
            let (fam, _) = inputs::family(family, x.group())?;
            classify(&x, &fam)
        }
        Command::Pullback { map, classifying } => pullback_cmd(map, classifying, common),
        Command::Enumerate { complex, group, kappa, oracle, emit_bundles } => {
            enumerate(complex, group, *kappa, *oracle, *emit_bundles, common)
        }
        Command::Verify { thm, group, family, kappa, gspace } => {
            verify(thm, group.as_deref(), family.as_deref(), *kappa, gspace.as_deref(), common)
        }
        Command::ReduceCover { partition } => {
            let (part, opens) = inputs::read_json::<PartitionJson>(partition)?.to_partition()?;
            let r = reduce_cover(&part, opens.as_deref())?;
            let sets: Vec<Value> = r
                .sets
                .iter()
                .map(|s| {
                    json!({
                        "members": s.members.iter().map(|&i| &r.names[i]).collect::<Vec<_>>(),
                        "q": finclass_core::json::PLFuncJson::from_pl(&s.q.clone().simplified()),
                        "support": s.support.to_string(),
                    })
                })
                .collect();
            let ok = r.ok();
            Ok(Done {
                result: json!({
                    "functions": r.names,
                    "sets": sets,
                    "levels": r.levels.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
                    "disjoint_levels": r.disjoint_levels,
                    "covers": r.covers,
                    "subordinate": r.subordinate,
                    "locally_finite": r.locally_finite,
                    "witness": r.witness,
                }),
                ok,
            })
        }
        Command::Selftest => Ok(selftest(common.seed)),
    }
}

fn classifying_space(g: &FinGroup, fam: &[Subgroup], conjugates: bool, kappa: usize, budget: u64) -> Result<ClassifyingSpace> {
    if conjugates {
        ClassifyingSpace::new_allowing_conjugates(g, fam, kappa, budget)
    } else {
        ClassifyingSpace::new(g, fam, kappa, budget)
    }
}

fn build_classifying(group: &str, family: &str, kappa: usize, emit: bool, common: &Common) -> Result<Done> {
    let g = inputs::group(group)?;
    let (fam, conj) = inputs::family(family, &g)?;
    let e = classifying_space(&g, &fam, conj, kappa, common.budget_points)?;
    let tubes = e.verify_tubes();
    let (iso, _) = e.isovariant_part();
    let orbits = e.orbit_space();
    let mut result = json!({
        "group_order": g.order(),
        "family": fam.iter().map(|h| h.elements()).collect::<Vec<_>>(),
        "kappa": kappa,
        "points": e.len(),
        "orbit_points": orbits.space.len(),
        "isovariant_points": iso.len(),
        "tubes": tubes,
    });
    if emit {
        result["space"] = json!(GSpaceJson::from_gspace(&e.to_gspace()));
    }
    Ok(Done { ok: tubes.ok(), result })
}

fn charts_json(charts: &[TubeChart]) -> Value {
    json!(charts
        .iter()
        .map(|c| json!({ "family_index": c.family_index, "tube": c.tube, "slice": c.slice }))
        .collect::<Vec<_>>())
}

fn classify(x: &GSpace, fam: &[Subgroup]) -> Result<Done> {
    let charts = find_tube_cover(x, fam, CoverOptions::default())?
        .map_err(|f| Error::Hypothesis(format!("no tube cover: point {} ({})", f.point, f.reason)))?;
    let kind = cover_kind(x, &charts)?;
    let cm = classifying_map(x, fam, &charts)?;
    let map_report = check_classifying_map(x, fam, &charts)?;
    let psi = if kind == CoverKind::Isovariant { Some(verify_psi(x, fam, &charts)?) } else { None };
    let ok = map_report.ok() && psi.as_ref().is_none_or(|p| p.ok());
    Ok(Done {
        result: json!({
            "cover_kind": kind,
            "charts": charts_json(&charts),
            "kappa": charts.len(),
            "values": cm.values,
            "orbit_space": SpaceJson::from_space(&cm.orbits.space),
            "orbit_of": cm.orbits.proj,
            "f": cm.f,
            "map": map_report,
            "psi": psi,
        }),
        ok,
    })
}

fn pullback_cmd(map: &std::path::Path, classifying: &std::path::Path, common: &Common) -> Result<Done> {
    let m: PullbackMapJson = inputs::read_json(map)?;
    let c: ClassifyingJson = inputs::read_json(classifying)?;
    let g = c.group.load()?;
    let (fam, conj) = c.family.load(&g)?;
    let e = classifying_space(&g, &fam, conj, c.kappa, common.budget_points)?;
    let base = m.base.to_space()?;
    let pb = pullback(&base, &m.values, &e)?;
    Ok(Done {
        result: json!({
            "bundle": BundleJson::from_bundle(&pb.bundle),
            "points": pb.points,
            "free": pb.bundle.is_free(),
        }),
        ok: true,
    })
}

fn enumerate(complex: &str, group: &str, kappa: Option<usize>, oracle: bool, emit: bool, common: &Common) -> Result<Done> {
    let k = inputs::complex(complex)?;
    let g = inputs::group(group)?;
    let opts = EnumerateOptions {
        kappa,
        budget_maps: common.budget_maps,
        budget_points: common.budget_points,
        workers: common.workers,
    };
    let rep = enumerate_bundles(&k, &g, opts)?;
    let classes: Vec<Value> = rep
        .classes
        .iter()
        .map(|c| {
            let mut v = json!({
                "certificate": c.certificate,
                "multiplicity": c.multiplicity,
                "components": c.components,
                "map": c.map,
            });
            if emit {
                v["bundle"] = json!(BundleJson::from_bundle(&c.representative));
            }
            v
        })
        .collect();
    let mut result = json!({
        "cells": k.len(),
        "base_points": rep.base_points,
        "weight": rep.weight,
        "kappa": rep.kappa,
        "classifying_points": rep.classifying_points,
        "orbit_points": rep.orbit_points,
        "maps": rep.maps,
        "class_count": rep.classes.len(),
        "classes": classes,
    });
    let mut ok = true;
    if oracle {
        let o = oracle_bundles(&k, &g)?;
        let agrees = o.iter().map(|c| &c.certificate).eq(rep.classes.iter().map(|c| &c.certificate));
        result["oracle_class_count"] = json!(o.len());
        result["oracle_agrees"] = json!(agrees);
        ok = agrees;
    }
    Ok(Done { result, ok })
}

fn suite_done(r: SuiteReport) -> Done {
    Done { ok: r.ok(), result: json!(r) }
}

fn verify(
    thm: &str,
    group: Option<&str>,
    family: Option<&str>,
    kappa: Option<usize>,
    gspace: Option<&std::path::Path>,
    common: &Common,
) -> Result<Done> {
    let load_x = |p: &std::path::Path| -> Result<(GSpace, Vec<Subgroup>)> {
        let x = inputs::read_json::<GSpaceJson>(p)?.to_gspace()?;
        let (fam, _) = inputs::family(family.unwrap_or("representatives"), x.group())?;
        Ok((x, fam))
    };
    match thm {
        "1.4" => match group {
            None => Ok(suite_done(suite::prop_tubes(common.budget_points))),
            Some(gname) => {
                let g = inputs::group(gname)?;
                let (fam, conj) = inputs::family(family.unwrap_or("representatives"), &g)?;
                let e = classifying_space(&g, &fam, conj, kappa.unwrap_or(2), common.budget_points)?;
                let t = e.verify_tubes();
                Ok(Done { ok: t.ok(), result: json!(t) })
            }
        },
        "2.1" => match gspace {
            None => Ok(suite_done(suite::psi_corpus())),
            Some(p) => {
                let (x, fam) = load_x(p)?;
                classify(&x, &fam)
            }
        },
        "2.7" => Ok(suite_done(suite::klein_factorization())),
        "3.7" => match gspace {
            None => Ok(suite_done(suite::phi_pairs(20))),
            Some(p) => {
                let (x, fam) = load_x(p)?;
                let cover = |o| {
                    find_tube_cover(&x, &fam, o)?
                        .map_err(|f| Error::Hypothesis(format!("no tube cover: point {} ({})", f.point, f.reason)))
                };
                let a = cover(CoverOptions::default())?;
                let seed = common.seed;
                let b = cover(CoverOptions { order: PointOrder::Shuffled(seed), coset_seed: Some(seed) })?;
                let r = homotopy_phi(&x, &fam, &a, &b)?.report()?;
                Ok(Done {
                    ok: r.ok(),
                    result: json!({ "first": charts_json(&a), "second": charts_json(&b), "phi": r }),
                })
            }
        },
        _ => Err(Error::Parse(format!("unknown theorem {thm:?}; expected 1.4, 2.1, 2.7 or 3.7"))),
    }
}

fn selftest(seed: u64) -> Done {
    let suites = suite::all(seed);
    for s in &suites {
        eprintln!("{:<40} {:>10} checks {:>4} failed {:>7.2}s", s.name, s.checks, s.failed, s.seconds);
    }
    let ok = suites.iter().all(SuiteReport::ok);
    let literal = suite::cone_metric_axioms(seed, 10_000, None);
    Done {
        ok,
        result: json!({
            "suites": suites,
            "findings": [{
                "claim": "the cone formula is a metric for every metric d",
                "holds_when": "d has diameter at most 2",
                "report": literal,
            }],
        }),
    }
}
