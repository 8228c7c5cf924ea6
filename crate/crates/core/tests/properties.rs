use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use finclass_core::analytic::{random_partition, reduce_cover};
use finclass_core::finspace::{opens_of, specialization_of_topology};
use finclass_core::{canonical_form, FinSpace, SpaceMap};

fn space() -> impl Strategy<Value = FinSpace> {
    (1usize..7).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n), 0..12)
            .prop_map(move |pairs| FinSpace::from_relation(n, &pairs).unwrap())
    })
}

fn relabel(x: &FinSpace, perm: &[usize]) -> FinSpace {
    let pairs: Vec<(usize, usize)> = x.strict_pairs().into_iter().map(|(a, b)| (perm[a], perm[b])).collect();
    FinSpace::from_relation(x.len(), &pairs).unwrap()
}

proptest! {
    #[test]
    fn relation_closure_is_a_preorder(x in space()) {
        for a in 0..x.len() {
            prop_assert!(x.leq(a, a));
            for b in 0..x.len() {
                for c in 0..x.len() {
                    if x.leq(a, b) && x.leq(b, c) {
                        prop_assert!(x.leq(a, c));
                    }
                }
            }
        }
    }

    #[test]
    fn canonical_form_ignores_relabelling(x in space(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut perm: Vec<usize> = (0..x.len()).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let y = relabel(&x, &perm);
        prop_assert_eq!(canonical_form(&x), canonical_form(&y));
        let iso = SpaceMap::new(x.clone(), y, perm).unwrap();
        prop_assert!(iso.is_homeomorphism());
    }

    #[test]
    fn topology_round_trip(x in space()) {
        let opens = opens_of(&x).sets;
        let back = specialization_of_topology(x.len(), &opens).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn product_order_is_componentwise(x in space(), y in space()) {
        let p = x.product(&y);
        let m = y.len();
        for i in 0..p.len() {
            for j in 0..p.len() {
                prop_assert_eq!(p.leq(i, j), x.leq(i / m, j / m) && y.leq(i % m, j % m));
            }
        }
        prop_assert_eq!(p.components().len(), x.components().len() * y.components().len());
    }

    #[test]
    fn random_partitions_reduce(seed in any::<u64>(), n in 1usize..7) {
        let part = random_partition(&mut ChaCha8Rng::seed_from_u64(seed), n);
        prop_assert!(reduce_cover(&part, None).unwrap().ok());
    }
}
