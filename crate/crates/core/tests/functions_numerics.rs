use num_rational::BigRational;
use proptest::prelude::*;
use treehl_core::numerics::{log_sum, parse_rational};
use treehl_core::tree::truncation;
use treehl_core::{Exact, LogScalar, PointFunction, RadialProfile, Scalar, Tail, TreeParams, VertexId, Weight};

fn params(k: u32) -> TreeParams {
    TreeParams::new(k).unwrap()
}

fn rat(n: i64, d: i64) -> Exact {
    BigRational::new(n.into(), d.into())
}

proptest! {
    #[test]
    fn radial_json_round_trip(head in prop::collection::vec((0i64..50, 1i64..9), 0..5), zero in any::<bool>(), a in 0i64..9, b in 0i64..9) {
        let head: Vec<Exact> = head.into_iter().map(|(n, d)| rat(n, d)).collect();
        let tail = if zero { Tail::Zero } else { Tail::Geometric { first: rat(a, 3), ratio: rat(b, 7) } };
        let w: Weight<Exact> = RadialProfile::new(head, tail).unwrap().into();
        prop_assert_eq!(Weight::from_json(&w.to_json(), params(2)).unwrap(), w);
    }

    #[test]
    fn point_json_round_trip(entries in prop::collection::vec((prop::collection::vec(0u32..3, 0..5), 1i64..40, 1i64..9), 0..6)) {
        let f = PointFunction::from_entries(
            params(3),
            entries.into_iter().map(|(p, n, d)| (VertexId::new(p, &params(3)).unwrap(), rat(n, d))),
        ).unwrap();
        let w: Weight<Exact> = f.into();
        prop_assert_eq!(Weight::from_json(&w.to_json(), params(3)).unwrap(), w);
    }

    #[test]
    fn l1_norm_matches_materialized(head in prop::collection::vec(0i64..20, 1..5), k in 2u32..4) {
        let head: Vec<Exact> = head.into_iter().map(|n| rat(n, 1)).collect();
        let h = head.len();
        let p = RadialProfile::new(head, Tail::Zero).unwrap();
        let f = p.materialize(h - 1, params(k)).unwrap();
        prop_assert_eq!(p.l1_norm(&params(k)).unwrap(), f.l1_norm());
    }

    #[test]
    fn log_sum_matches_direct(xs in prop::collection::vec(1e-3f64..1e3, 1..40)) {
        let direct: f64 = xs.iter().sum();
        let logs: Vec<LogScalar> = xs.iter().map(|&x| LogScalar::from_value(x).unwrap()).collect();
        let got = log_sum(&logs).value();
        prop_assert!((got - direct).abs() <= 1e-12 * direct);
    }

    #[test]
    fn rational_decimal_round_trip(n in 0i64..100000, d in 1i64..1000) {
        let x = rat(n, d);
        prop_assert_eq!(parse_rational(&x.to_decimal()).unwrap(), x);
    }
}

#[test]
fn geometric_tail_norm_matches_partial_sums() {
    // c_j = 3^-j on k = 2 sums to 1 / (1 - 2/3) = 3.
    let p = RadialProfile::new(vec![], Tail::Geometric { first: rat(1, 1), ratio: rat(1, 3) }).unwrap();
    assert_eq!(p.l1_norm(&params(2)).unwrap(), rat(3, 1));
    let partial = truncation(10, &params(2)).iter().fold(Exact::from_u64(0), |a, v| a + p.value(v.depth()));
    assert!(partial < rat(3, 1) && partial > rat(29, 10));
}

#[test]
fn backends_agree_on_radial_values() {
    let p = RadialProfile::<Exact>::counterexample(&params(3));
    let pf: RadialProfile<f64> = p.convert().unwrap();
    let pl: RadialProfile<LogScalar> = p.convert().unwrap();
    for j in 0..30 {
        let exact = p.value(j).to_f64();
        assert!((pf.value(j) - exact).abs() <= 1e-14 * exact);
        assert!((pl.value(j).value() - exact).abs() <= 1e-12 * exact);
    }
}
