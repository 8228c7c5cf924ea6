//! One PASS/FAIL line per acceptance criterion.
//!
//! AC7 is expected to fail: the cone formula `|s−t| + min{s,t}·d` violates the
//! triangle inequality through a lower middle level whenever `d(x,z) > 2`,
//! which unbounded Euclidean samples reach. The harness exits nonzero if any
//! other criterion fails or if AC7 starts passing.

use std::process::Command;
use std::time::Instant;

use finclass_core::analytic::Q;
use finclass_core::classifying::DEFAULT_POINT_BUDGET;
use finclass_core::suite::{self, SuiteReport};

const KNOWN_FAILURES: [&str; 1] = ["AC7"];
const SEED: u64 = 2024;

struct Line {
    id: &'static str,
    pass: bool,
    detail: String,
}

fn summary(r: &SuiteReport) -> String {
    let mut s = format!("{}: {} checks, {} failed", r.name, r.checks, r.failed);
    if let Some(f) = r.failures.first() {
        s.push_str(&format!("; first failure: {f}"));
    }
    s
}

fn from_suite(id: &'static str, r: SuiteReport) -> Line {
    Line { id, pass: r.ok(), detail: summary(&r) }
}

fn ac1() -> Line {
    from_suite("AC1", suite::prop_tubes(DEFAULT_POINT_BUDGET))
}

fn ac2() -> Line {
    let r = suite::psi_corpus();
    let size = r
        .notes
        .iter()
        .find_map(|n| n.strip_suffix(" spaces").and_then(|k| k.parse::<usize>().ok()))
        .unwrap_or(0);
    Line { id: "AC2", pass: r.ok() && size >= 30, detail: format!("{size} spaces; {}", summary(&r)) }
}

fn ac3() -> Line {
    let r = suite::bundle_counts();
    let z3 = r.notes.iter().find(|n| n.starts_with("circle/Z3")).cloned().unwrap_or_default();
    let z3_seconds: f64 = z3
        .rsplit(' ')
        .next()
        .and_then(|s| s.trim_end_matches('s').parse().ok())
        .unwrap_or(f64::INFINITY);
    let counts: Vec<&str> = r.notes.iter().map(|n| n.split(" from").next().unwrap_or(n)).collect();
    Line {
        id: "AC3",
        pass: r.ok() && z3_seconds < 60.0,
        detail: format!("{}; {}", counts.join(", "), summary(&r)),
    }
}

fn ac4() -> Line {
    from_suite("AC4", suite::phi_pairs(20))
}

fn ac5() -> Line {
    from_suite("AC5", suite::klein_factorization())
}

fn ac6() -> Line {
    let start = Instant::now();
    let r = suite::duality(4);
    let secs = start.elapsed().as_secs_f64();
    Line { id: "AC6", pass: r.ok(), detail: format!("{} in {secs:.1}s", summary(&r)) }
}

fn ac7() -> Line {
    let literal = suite::cone_metric_axioms(SEED, 10_000, None);
    let capped = suite::cone_metric_axioms(SEED, 10_000, Some(Q::from_integer(2.into())));
    let cover = suite::cover_reduction(SEED, 100);
    let eta = suite::iota_eta(SEED);
    let pass = literal.ok() && cover.ok() && eta.ok();
    let tally = literal.notes.get(1).cloned().unwrap_or_else(|| "no triangle failures".into());
    Line {
        id: "AC7",
        pass,
        detail: format!(
            "Euclidean d: {tally}; min(d,2): {} failed of {}; {}; {}",
            capped.failed,
            capped.checks,
            summary(&cover),
            summary(&eta)
        ),
    }
}

fn enumerate_with(workers: usize, complex: &str, group: &str) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_finclass"))
        .args(["enumerate", "--complex", complex, "--group", group, "--oracle", "--emit-bundles"])
        .args(["--workers", &workers.to_string(), "--seed", &SEED.to_string()])
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)));
    }
    Ok(out.stdout)
}

fn ac8() -> Line {
    let mut notes = Vec::new();
    let mut pass = true;
    for (k, g) in [("circle", "Z2"), ("circle", "Z3"), ("interval", "S3"), ("interval", "Z6")] {
        match (enumerate_with(1, k, g), enumerate_with(4, k, g)) {
            (Ok(a), Ok(b)) => {
                let same = a == b;
                pass &= same;
                notes.push(format!("{k}/{g} {} bytes {}", a.len(), if same { "identical" } else { "differ" }));
            }
            (a, b) => {
                pass = false;
                notes.push(format!("{k}/{g}: {:?} {:?}", a.err(), b.err()));
            }
        }
    }
    Line { id: "AC8", pass, detail: notes.join(", ") }
}

fn main() {
    let criteria: [fn() -> Line; 8] = [ac1, ac2, ac3, ac4, ac5, ac6, ac7, ac8];
    let mut unexpected = Vec::new();
    for run in criteria {
        let line = run();
        let known = KNOWN_FAILURES.contains(&line.id);
        println!("{} {} {}", line.id, if line.pass { "PASS" } else { "FAIL" }, line.detail);
        if line.pass == known {
            unexpected.push(line.id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected outcome for {unexpected:?}");
        std::process::exit(1);
    }
}
