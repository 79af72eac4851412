use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use quperf_core::search::{run_search, SearchConfig, SearchMode, SearchRecord};
use quperf_core::{QInt, RingId};

fn ring_at(i: usize) -> RingId {
    RingId::all().nth(i).unwrap()
}

fn arb_triple() -> impl Strategy<Value = (QInt, QInt, QInt)> {
    (0usize..9, prop::array::uniform6(-500i64..500)).prop_map(|(i, c)| {
        let r = ring_at(i);
        (QInt::new(r, c[0], c[1]), QInt::new(r, c[2], c[3]), QInt::new(r, c[4], c[5]))
    })
}

proptest! {
    #[test]
    fn ring_laws((x, y, z) in arb_triple()) {
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
        let xx = &x * &x.conj();
        prop_assert_eq!(xx.b(), &BigInt::from(0));
    }

    #[test]
    fn one_associate_in_sector((x, _, _) in arb_triple()) {
        prop_assume!(!x.is_zero());
        let in_sector: Vec<QInt> = x
            .ring()
            .units()
            .map(|(_, u)| &u * &x)
            .filter(|a| a.in_sector().unwrap())
            .collect();
        prop_assert_eq!(in_sector.len(), 1);
        prop_assert_eq!(&in_sector[0], &x.canonical().unwrap());
    }

    #[test]
    fn exact_division_inverts_product((x, y, _) in arb_triple()) {
        prop_assume!(!y.is_zero());
        prop_assert_eq!((&x * &y).exact_div(&y).unwrap(), x.clone());
        prop_assert!(y.divides(&(&x * &y)).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn modes_agree(i in 0usize..9, n in 1u32..=3, num in 2i64..=5, den in 1i64..=3, bound in 100u64..4000) {
        let t = BigRational::new(num.into(), den.into());
        prop_assume!(t > BigRational::from_integer(1.into()));
        let ring = ring_at(i);
        let run = |mode| -> Vec<SearchRecord> {
            let cfg = SearchConfig::new(ring, n, t.clone(), bound, mode).unwrap();
            run_search(&cfg).unwrap().records.into_iter().filter(|r| r.hit).collect()
        };
        prop_assert_eq!(run(SearchMode::Elements), run(SearchMode::Signatures));
    }

    #[test]
    fn records_round_trip_through_json(i in 0usize..9, bound in 50u64..500) {
        let ring = ring_at(i);
        let mut cfg = SearchConfig::new(ring, 1, BigRational::from_integer(2.into()), bound, SearchMode::Elements).unwrap();
        cfg.verbose = true;
        for r in run_search(&cfg).unwrap().records {
            prop_assert_eq!(SearchRecord::from_json(ring, &r.to_json()).unwrap(), r);
        }
    }
}
