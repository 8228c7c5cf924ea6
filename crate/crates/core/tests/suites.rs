use finclass_core::analytic::Q;
use finclass_core::classifying::DEFAULT_POINT_BUDGET;
use finclass_core::suite::{self, SuiteReport};

fn show(r: &SuiteReport) {
    eprintln!("{}: {} checks, {} failed, {:.2}s {:?}", r.name, r.checks, r.failed, r.seconds, r.notes);
}

fn assert_ok(r: SuiteReport) {
    show(&r);
    assert!(r.ok(), "{:#?}", r.failures);
}

#[test]
fn tube_covers_of_classifying_spaces() {
    assert_ok(suite::prop_tubes(DEFAULT_POINT_BUDGET));
}

#[test]
fn psi_on_corpus() {
    let r = suite::psi_corpus();
    assert!(r.notes.iter().any(|n| n.ends_with("spaces") && n.split(' ').next().unwrap().parse::<usize>().unwrap() >= 30));
    assert_ok(r);
}

#[test]
fn bundle_counts() {
    assert_ok(suite::bundle_counts());
}

#[test]
fn phi_on_twenty_pairs() {
    assert_ok(suite::phi_pairs(20));
}

#[test]
fn klein_factorization() {
    assert_ok(suite::klein_factorization());
}

#[test]
fn duality_up_to_four_points() {
    assert_ok(suite::duality(4));
}

#[test]
fn cone_metric_needs_diameter_two() {
    let raw = suite::cone_metric_axioms(7, 10_000, None);
    show(&raw);
    // only the triangle inequality fails, and only across pairs farther apart than 2
    assert!(raw.failed > 0);
    assert!(raw.failures.iter().all(|f| f.starts_with("triangle fails")));
    assert!(raw.notes.iter().any(|n| n.ends_with("and 0 with d(x,z) ≤ 2")), "{:?}", raw.notes);
    assert_ok(suite::cone_metric_axioms(7, 10_000, Some(Q::from_integer(2.into()))));
}

#[test]
fn cover_reduction_and_urysohn() {
    assert_ok(suite::cover_reduction(7, 100));
    assert_ok(suite::iota_eta(7));
}
