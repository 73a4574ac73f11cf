//! Pinned constants of the property suites.
//!
//! The values ship in `fixtures/calibration.json`. A recalibration that
//! changes any of them must bump `version`; [`Calibration::check`] reports
//! every constant that differs from the pinned file.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const PINNED: &str = include_str!("../fixtures/calibration.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Calibration {
    pub version: u32,
    pub tower_cover: TowerCover,
    pub integral_equivalence: IntegralEquivalence,
    pub no_sudakov: NoSudakov,
    pub discrepancy: Discrepancy,
    pub tolerances: Tolerances,
    pub properties: Properties,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TowerCover {
    pub alpha: f64,
    pub c: f64,
    pub sweep: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegralEquivalence {
    pub c: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoSudakov {
    pub sizes: [usize; 2],
    pub alpha_cap: f64,
    pub summand_cap_log2: u32,
    pub samples: u64,
    pub growth: f64,
    pub sup_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Discrepancy {
    pub c: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub lorentz_relative: f64,
    pub power_law_relative: f64,
    pub section_lp: f64,
}

/// Constants of the property tests.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Properties {
    /// `‖x‖_{L_2(μ)} <= C ‖x‖` in the tower norm with `α = 2`.
    pub l2_over_tower: f64,
    /// `C` in `Σ(A) <= (2 C n / v)^{2v}` for `A` in the unit ball of `L_1^n`.
    pub cell_content_l1: f64,
    /// `C` in `D_∞(F, t) <= C v log(n / vt) log^{1/2}(2n / v)`.
    pub linfty_entropy: f64,
    /// `c` in `v = v(F, c t / 2)` for the bound above.
    pub linfty_scale: f64,
    /// Gap of the separating tree built on a tower-separated set.
    pub large_tree_gap: f64,
    /// `E_rad <= C E_gauss`.
    pub rad_over_gauss: f64,
}

impl Calibration {
    /// The constants compiled into this build.
    pub fn pinned() -> Calibration {
        serde_json::from_str(PINNED).expect("bundled calibration fixture is valid")
    }

    pub fn from_json_str(text: &str) -> Result<Calibration> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Calibration> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Calibration::from_json_str(&text)
    }

    /// Errors with the list of constants that differ from the pinned fixture.
    pub fn check(&self) -> Result<()> {
        let drift = diff(&serde_json::to_value(Calibration::pinned())?, &serde_json::to_value(self)?, "");
        if drift.is_empty() {
            Ok(())
        } else {
            Err(Error::Calibration(drift.join("; ")))
        }
    }
}

fn diff(pinned: &serde_json::Value, other: &serde_json::Value, path: &str) -> Vec<String> {
    use serde_json::Value;
    match (pinned, other) {
        (Value::Object(a), Value::Object(b)) => a
            .iter()
            .flat_map(|(k, v)| {
                let sub = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                match b.get(k) {
                    Some(w) => diff(v, w, &sub),
                    None => vec![format!("{sub} missing")],
                }
            })
            .collect(),
        _ if pinned == other => Vec::new(),
        _ => vec![format!("{path}: pinned {pinned}, found {other}")],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pinned_is_consistent() {
        let c = Calibration::pinned();
        assert!(c.check().is_ok());
        assert_eq!((c.tower_cover.alpha, c.tower_cover.c), (2.0, 8.0));
        assert!(c.tower_cover.sweep.contains(&c.tower_cover.c));
    }

    #[test]
    fn drift_names_the_constant() {
        let mut c = Calibration::pinned();
        c.no_sudakov.sup_bound = 5.0;
        c.tower_cover.c = 4.0;
        match c.check() {
            Err(Error::Calibration(msg)) => {
                assert!(msg.contains("no_sudakov.sup_bound"), "{msg}");
                assert!(msg.contains("tower_cover.c"), "{msg}");
            }
            other => panic!("{other:?}"),
        }
    }
}
