mod common;

use common::half_integer_class;
use proptest::prelude::*;
use shatterkit::calibration::Calibration;
use shatterkit::dimension::fat_dimension;
use shatterkit::exec::{with_policy, Policy};
use shatterkit::lattice::{cell_content, CellContentOptions};
use shatterkit::packing::{kp_entropy_lower, packing_number, BodySpec, PackingMode};
use shatterkit::processes::{comb_integral, dudley_integral, process_supremum, Grid, Noise};
use shatterkit::sections::{m_estimate, VPolytope};
use shatterkit::{Measure, Seed};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rademacher_below_gaussian(f in half_integer_class(1..=12, 1..=6, -3, 3), seed in any::<u64>()) {
        let c = Calibration::pinned().properties.rad_over_gauss;
        let r = process_supremum(&f, Noise::Rademacher, 4000, Seed(seed)).unwrap();
        let g = process_supremum(&f, Noise::Gaussian, 4000, Seed(seed).derive(1)).unwrap();
        let slack = 4.0 * (r.stderr + c * g.stderr);
        prop_assert!(r.mean <= c * g.mean + slack, "rad {} gauss {}", r.mean, g.mean);
    }

    #[test]
    fn m_estimate_scales_inversely(pts in prop::collection::vec(prop::collection::vec(-3.0..3.0f64, 3), 3..6), k in -3i32..=3, seed in any::<u64>()) {
        let body = VPolytope::symmetric_hull(pts).unwrap();
        prop_assume!(body.is_full_dimensional().unwrap());
        let s = 2f64.powi(k);
        let a = m_estimate(&body, 200, Seed(seed)).unwrap();
        let b = m_estimate(&body.scaled(s).unwrap(), 200, Seed(seed)).unwrap();
        prop_assert!((b.mean * s - a.mean).abs() <= 1e-9 * a.mean, "{} vs {}", a.mean, b.mean);
    }

    #[test]
    fn policies_agree(f in half_integer_class(1..=10, 1..=5, -2, 2), seed in any::<u64>()) {
        let run = |p: Policy| with_policy(p, || {
            let n = f.domain_size();
            (
                process_supremum(&f, Noise::Gaussian, 300, Seed(seed)).unwrap(),
                fat_dimension(&f, 0.5).unwrap(),
                cell_content(&f, &CellContentOptions::default()).unwrap(),
                packing_number(&f, &BodySpec::lp(2.0, Measure::uniform(n)).unwrap(), 0.5, PackingMode::Exact).unwrap(),
                kp_entropy_lower(&f, 0.5, 40, Seed(seed)).unwrap(),
                dudley_integral(&f, &Measure::uniform(n), &Grid::Auto, Seed(seed)).unwrap(),
                comb_integral(&f, &Grid::Auto).unwrap(),
            )
        });
        prop_assert_eq!(run(Policy::Sequential), run(Policy::Parallel));
    }
}

#[test]
fn m_estimate_is_reproducible() {
    let body = VPolytope::cross_polytope(5, 1.0).unwrap();
    let a = with_policy(Policy::Sequential, || m_estimate(&body, 500, Seed(7)).unwrap());
    let b = with_policy(Policy::Parallel, || m_estimate(&body, 500, Seed(7)).unwrap());
    assert_eq!(a, b);
}
