mod common;

use common::{half_integer_class, integer_class};
use proptest::prelude::*;
use shatterkit::calibration::Calibration;
use shatterkit::class::{FunctionClass, Measure};
use shatterkit::dimension::fat_dimension;
use shatterkit::packing::{covering_number, entropy, entropy_linfty, packing_number, BodySpec, CoverMode, PackingMode};

fn body(n: usize) -> impl Strategy<Value = BodySpec> {
    prop_oneof![
        Just(BodySpec::lp(1.0, Measure::uniform(n)).unwrap()),
        Just(BodySpec::lp(2.0, Measure::uniform(n)).unwrap()),
        Just(BodySpec::linf(n)),
        Just(BodySpec::cube()),
    ]
}

fn class_and_body() -> impl Strategy<Value = (FunctionClass, BodySpec)> {
    half_integer_class(1..=10, 1..=4, -3, 3).prop_flat_map(|f| {
        let n = f.domain_size();
        (Just(f), body(n))
    })
}

/// Rows scaled into the unit ball of `L_1` of the uniform measure.
fn l1_bounded(f: &FunctionClass) -> FunctionClass {
    let n = f.domain_size() as f64;
    let top = f.rows().map(|r| r.iter().map(|v| v.abs()).sum::<f64>() / n).fold(1.0, f64::max);
    FunctionClass::new(f.rows().map(|r| r.iter().map(|v| v / top).collect()).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// A set separated by more than `2r` has at most one point per `r`-ball.
    #[test]
    fn packing_below_covering((f, b) in class_and_body(), r in 0.1..3.0f64, excess in 0.0..1.0f64) {
        let t = f64::from_bits((2.0 * r).to_bits() + 1) + excess * r;
        let cover = covering_number(&f, &b.clone().with_radius(r).unwrap(), CoverMode::Sandwich).unwrap();
        let pack = entropy(&f, &b, t).unwrap().exp().round() as usize;
        prop_assert!(pack <= cover.upper, "packing {pack} above cover {}", cover.upper);
        prop_assert!(cover.lower <= cover.upper);
    }

    #[test]
    fn packing_certificate_verifies((f, b) in class_and_body(), t in 0.25..4.0f64) {
        let p = packing_number(&f, &b, t, PackingMode::Exact).unwrap();
        prop_assert!(p.certificate.verify(&f, &b, t).unwrap());
        let greedy = packing_number(&f, &b, t, PackingMode::Greedy).unwrap();
        prop_assert!(greedy.number <= p.number);
        prop_assert!(greedy.certificate.verify(&f, &b, t).unwrap());
    }

    #[test]
    fn sup_entropy_by_dimension(f in integer_class(1..=10, 1..=5, -4, 4), t in 0.05..0.5f64) {
        let cal = Calibration::pinned().properties;
        let f = l1_bounded(&f);
        let n = f.domain_size() as f64;
        let d = entropy_linfty(&f, t).unwrap();
        let v = fat_dimension(&f, cal.linfty_scale * t / 2.0).unwrap().v as f64;
        let bound = if v == 0.0 {
            0.0
        } else {
            cal.linfty_entropy * v * (n / (v * t)).ln() * (2.0 * n / v).ln().sqrt()
        };
        prop_assert!(d <= bound + 1e-12, "entropy {d} above {bound} at v = {v}");
    }
}
