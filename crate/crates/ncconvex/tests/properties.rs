//! Property tests for the structural invariants: the doubling is an algebra
//! map inverted by the canonical compression, membership survives matrix
//! convex combinations and compressions, and the JSON forms round-trip.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ncconvex::mat::{Field, Mat};
use ncconvex::ncset::{self, NcSetDescr};
use ncconvex::randmat;
use ncconvex::tuple;
use ncconvex::ToleranceConfig;

fn mat_strategy(n: usize, field: Field) -> impl Strategy<Value = Mat> {
    let entries = n * n;
    let re = proptest::collection::vec(-3.0f64..3.0, entries);
    let im = proptest::collection::vec(-3.0f64..3.0, entries);
    (re, im).prop_map(move |(re, im)| {
        Mat::from_fn(n, n, field, |i, j| {
            let k = i * n + j;
            (re[k], if field == Field::Complex { im[k] } else { 0.0 })
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn doubling_roundtrip(m in mat_strategy(3, Field::Complex)) {
        let back = m.real_doubling().undouble_to_complex().unwrap();
        prop_assert!(back.sub(&m).max_abs() < 1e-12);
    }

    #[test]
    fn doubling_multiplicative(
        a in mat_strategy(2, Field::Complex),
        b in mat_strategy(2, Field::Complex),
    ) {
        let lhs = a.matmul(&b).real_doubling();
        let rhs = a.real_doubling().matmul(&b.real_doubling());
        prop_assert!(lhs.sub(&rhs).max_abs() < 1e-10);
        let adj = a.adjoint().real_doubling();
        prop_assert!(adj.sub(&a.real_doubling().transpose()).max_abs() < 1e-12);
    }

    #[test]
    fn mat_json_exact_roundtrip(m in mat_strategy(3, Field::Complex)) {
        let text = serde_json::to_string(&m).unwrap();
        let back: Mat = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(m, back);
    }

    #[test]
    fn interval_membership_survives_convexity_ops(seed in 0u64..1000) {
        let cfg = ToleranceConfig::default();
        let set = NcSetDescr::interval(-1.0, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = ncset::sample(&set, 3, &cfg, &mut rng).unwrap();
        let y = ncset::sample(&set, 2, &cfg, &mut rng).unwrap();
        // matrix convex combination at level 2
        let coeffs = randmat::random_partition_of_unity(&[3, 2], 2, Field::Real, &mut rng);
        let comb = tuple::nc_combination(&[x.clone(), y], &coeffs).unwrap();
        prop_assert!(ncset::member(&set, &comb, &cfg).unwrap().is_inside());
        // compression to level 1
        let beta = randmat::random_isometry(3, 1, Field::Real, &mut rng);
        let compressed = tuple::compress(&x, &beta).unwrap();
        prop_assert!(ncset::member(&set, &compressed, &cfg).unwrap().is_inside());
    }

    #[test]
    fn set_descriptions_print_parse_print(seed in 0u64..50) {
        let set = if seed % 2 == 0 {
            NcSetDescr::interval(-1.0, 1.0).unwrap()
        } else {
            NcSetDescr::min_of(vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![-1.0, -1.0]], Field::Real)
                .unwrap()
        };
        let once = serde_json::to_string(&set).unwrap();
        let back: NcSetDescr = serde_json::from_str(&once).unwrap();
        let twice = serde_json::to_string(&back).unwrap();
        prop_assert_eq!(once, twice);
    }
}
