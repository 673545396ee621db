use polymatroid::optimize::{solve, verify_optimal};
use polymatroid::oracle::{self, EnumerationBudget};
use polymatroid::polytope::BasePolytope;
use polymatroid::random;
use proptest::prelude::*;

fn budget() -> EnumerationBudget {
    EnumerationBudget::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn truncation_is_idempotent(seed in any::<u64>(), m in 1usize..=5, cap in 0u64..=6) {
        let f = random::submodular_rank(&mut random::rng(seed), m).unwrap();
        let once = f.truncate(cap);
        prop_assert!(once.truncate(cap).same_values(&once).unwrap());
        prop_assert!(once.is_submodular().unwrap().holds);
    }

    #[test]
    fn scaling_composes(seed in any::<u64>(), m in 1usize..=5, a in 1u64..=3, b in 1u64..=3) {
        let f = random::submodular_rank(&mut random::rng(seed), m).unwrap();
        let twice = f.scale(a).unwrap().scale(b).unwrap();
        prop_assert!(twice.same_values(&f.scale(a * b).unwrap()).unwrap());
    }

    #[test]
    fn enumeration_agrees_with_grid_and_membership(seed in any::<u64>(), m in 1usize..=4, d in 0u64..=4) {
        let f = random::submodular_rank(&mut random::rng(seed), m).unwrap();
        let b = BasePolytope::new(f, d);
        let points = oracle::enumerate_base(&b, &budget()).unwrap();
        prop_assert_eq!(&points, &oracle::grid_scan_base(&b, &budget()).unwrap());
        for x in &points {
            prop_assert!(b.member(x).unwrap());
        }
    }

    #[test]
    fn exchanges_round_trip(seed in any::<u64>(), m in 2usize..=5, d in 1u64..=4) {
        let f = random::submodular_rank(&mut random::rng(seed), m).unwrap();
        let b = BasePolytope::new(f, d);
        for x in oracle::enumerate_base(&b, &budget()).unwrap() {
            for e in 0..m {
                for g in b.exchange_set(&x, e).unwrap().iter() {
                    let y = x.apply_exchange(e, g).unwrap();
                    prop_assert!(b.member(&y).unwrap());
                    prop_assert!(b.exchange_set(&y, g).unwrap().contains(e));
                    prop_assert_eq!(y.apply_exchange(g, e).unwrap(), x.clone());
                }
            }
        }
    }

    #[test]
    fn solve_matches_oracle(seed in any::<u64>()) {
        let p = random::instance(&mut random::rng(seed), 5, 5, 3).unwrap();
        let x = solve(&p).unwrap();
        let (_, best) = oracle::brute_optimum(&p, &budget()).unwrap();
        prop_assert_eq!(p.objective(&x).unwrap(), best);
        prop_assert!(verify_optimal(&p, &x).unwrap().optimal);
    }
}
