mod common;

use common::{integer_class, measure, vector};
use proptest::prelude::*;
use shatterkit::class::{affine_image, lp_norm, FunctionClass};

fn finite_class() -> impl Strategy<Value = FunctionClass> {
    (1..6usize, 1..6usize).prop_flat_map(|(m, n)| {
        prop::collection::vec(prop::collection::vec(-1e6..1e6f64, n), m).prop_map(|r| FunctionClass::new(r).unwrap())
    })
}

proptest! {
    #[test]
    fn json_round_trip(f in finite_class()) {
        let back = FunctionClass::from_json_str(&f.to_json_string().unwrap()).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn csv_round_trip(f in finite_class()) {
        let back = FunctionClass::from_csv_str(&f.to_csv_string()).unwrap();
        prop_assert_eq!(back.to_rows(), f.to_rows());
    }

    #[test]
    fn lp_norm_is_homogeneous(
        (x, mu) in (1..8usize).prop_flat_map(|n| (vector(n), measure(n))),
        a in -4.0..4.0f64,
        p in prop_oneof![Just(1.0), Just(2.0), 1.0..6.0f64, Just(f64::INFINITY)],
    ) {
        let ax: Vec<f64> = x.iter().map(|v| a * v).collect();
        let lhs = lp_norm(&ax, &mu, p).unwrap();
        let rhs = a.abs() * lp_norm(&x, &mu, p).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs), "{lhs} vs {rhs}");
    }

    #[test]
    fn affine_image_keeps_shape(f in integer_class(1..=6, 1..=5, -5, 5), a in prop_oneof![-3.0..-0.1f64, 0.1..3.0f64], seed in any::<u64>()) {
        let shift: Vec<f64> = (0..f.domain_size()).map(|i| ((seed >> (i % 60)) & 7) as f64 - 3.0).collect();
        let g = affine_image(&f, a, &shift).unwrap();
        prop_assert_eq!((g.len(), g.domain_size()), (f.len(), f.domain_size()));
        for (r, s) in f.rows().zip(g.rows()) {
            for i in 0..f.domain_size() {
                prop_assert_eq!(s[i], a * r[i] + shift[i]);
            }
        }
    }
}
