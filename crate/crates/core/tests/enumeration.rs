use finclass_core::enumeration::{
    bundle_iso_over_base, classify_round_trip, enumerate_bundles, oracle_bundles, Certificate, EnumerateOptions,
};
use finclass_core::{face_space, CellComplex, FinGroup};

fn certs(v: &[finclass_core::BundleClass]) -> Vec<Certificate> {
    v.iter().map(|c| c.certificate.clone()).collect()
}

#[test]
fn circle_over_z3_matches_oracle() {
    let g = FinGroup::cyclic(3);
    let k = CellComplex::circle();
    let r = enumerate_bundles(&k, &g, EnumerateOptions::default()).unwrap();
    assert_eq!(r.classes.len(), 3);
    let o = oracle_bundles(&k, &g).unwrap();
    assert_eq!(certs(&r.classes), certs(&o));
    for c in &r.classes {
        assert!(c.representative.is_free());
        assert!(c.multiplicity >= 1);
        let orb = c.representative.total.orbit_space();
        assert_eq!(orb.space, face_space(&k));
        assert!(classify_round_trip(&c.representative).unwrap());
    }
    // the two connected covers are not isomorphic over the identity
    let connected: Vec<_> = r.classes.iter().filter(|c| c.components == 1).collect();
    assert_eq!(connected.len(), 2);
    assert!(bundle_iso_over_base(&connected[0].representative, &connected[1].representative)
        .unwrap()
        .is_none());
}

#[test]
fn interval_has_a_single_class_for_small_groups() {
    let k = CellComplex::simplex(1).unwrap();
    for name in ["Z2", "Z3", "Z4", "V4", "Z5", "Z6", "S3"] {
        let g = FinGroup::builtin(name).unwrap();
        let r = enumerate_bundles(&k, &g, EnumerateOptions::default()).unwrap();
        assert_eq!(r.classes.len(), 1, "{name}");
        let o = oracle_bundles(&k, &g).unwrap();
        assert_eq!(certs(&r.classes), certs(&o), "{name}");
    }
}

#[test]
fn smaller_kappa_is_reported_per_kappa() {
    let g = FinGroup::cyclic(2);
    let k = CellComplex::circle();
    for kappa in 1..=4 {
        let r = enumerate_bundles(&k, &g, EnumerateOptions { kappa: Some(kappa), ..Default::default() }).unwrap();
        assert!(r.classes.len() <= 2);
        assert_eq!(r.kappa, kappa);
    }
}
