mod common;

use common::{measure, vector};
use proptest::prelude::*;
use shatterkit::calibration::Calibration;
use shatterkit::class::lp_norm;
use shatterkit::lorentz::{comparison_function, lorentz_norm, tower_norm, GeneratingFunction};

fn generator() -> impl Strategy<Value = GeneratingFunction> {
    prop_oneof![
        (1.0..6.0f64).prop_map(|p| GeneratingFunction::power(p).unwrap()),
        (2.0..5.0f64).prop_map(|a| GeneratingFunction::tower(a).unwrap()),
    ]
}

fn vectors_and_measure() -> impl Strategy<Value = (Vec<f64>, Vec<f64>, shatterkit::Measure)> {
    (1..8usize).prop_flat_map(|n| (vector(n), vector(n), measure(n)))
}

proptest! {
    #[test]
    fn homogeneous((x, _, mu) in vectors_and_measure(), phi in generator(), a in -5.0..5.0f64) {
        let ax: Vec<f64> = x.iter().map(|v| a * v).collect();
        let lhs = lorentz_norm(&ax, &mu, &phi).unwrap();
        let rhs = a.abs() * lorentz_norm(&x, &mu, &phi).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs), "{lhs} vs {rhs}");
    }

    /// `{|x + y| >= (a + b) s} ⊂ {|x| >= a s} ∪ {|y| >= b s}` and
    /// `φ(2s) >= 2 φ(s)` give the triangle inequality up to a factor 2.
    #[test]
    fn quasi_triangle_inequality((x, y, mu) in vectors_and_measure(), phi in generator()) {
        let s: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        let lhs = lorentz_norm(&s, &mu, &phi).unwrap();
        let rhs = lorentz_norm(&x, &mu, &phi).unwrap() + lorentz_norm(&y, &mu, &phi).unwrap();
        prop_assert!(lhs <= 2.0 * rhs + 1e-9 * (1.0 + rhs), "{lhs} > 2 * {rhs}");
    }

    #[test]
    fn l2_is_dominated_by_the_tower_norm((x, _, mu) in vectors_and_measure()) {
        let c = Calibration::pinned().properties.l2_over_tower;
        let l2 = lp_norm(&x, &mu, 2.0).unwrap();
        prop_assert!(l2 <= c * tower_norm(&x, &mu, 2.0).unwrap() + 1e-12);
    }

    #[test]
    fn comparison_is_nonincreasing(phi in generator(), psi in generator(), t in 0.05..20.0f64, factor in 1.0..4.0f64) {
        let a = comparison_function(&phi, &psi, t).unwrap();
        let b = comparison_function(&phi, &psi, t * factor).unwrap();
        prop_assert!(b <= a * (1.0 + 1e-9), "{a} then {b}");
    }
}

/// The weak-type functional is not subadditive: on two equal atoms with
/// `φ(t) = t^2`, `(2, 1)` and `(1, 2)` have norm `√2` each and sum `(3, 3)`.
#[test]
fn triangle_inequality_fails_with_constant_one() {
    let mu = shatterkit::Measure::uniform(2);
    let phi = GeneratingFunction::power(2.0).unwrap();
    let x = lorentz_norm(&[2.0, 1.0], &mu, &phi).unwrap();
    let y = lorentz_norm(&[1.0, 2.0], &mu, &phi).unwrap();
    let s = lorentz_norm(&[3.0, 3.0], &mu, &phi).unwrap();
    assert!((x - 2f64.sqrt()).abs() < 1e-12 && (y - x).abs() < 1e-12);
    assert!((s - 3.0).abs() < 1e-12);
    assert!(s > x + y);
}
