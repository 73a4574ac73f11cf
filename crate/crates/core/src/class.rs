//! Finite function classes, probability measures on `{0..n}` and seeded
//! randomness.
//!
//! A [`FunctionClass`] is a `|F| x n` table: row `f` holds the values of one
//! function at the `n` domain points. Geometrically the rows are points of
//! `R^n`, and most of the crate uses both readings interchangeably.

use std::fmt;
use std::fs;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on the total mass of a [`Measure`].
pub const MASS_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ClassFile", into = "ClassFile")]
pub struct FunctionClass {
    values: Vec<f64>,
    rows: usize,
    cols: usize,
    labels: Option<Vec<String>>,
    measure: Option<Measure>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    /// Guesses the format from a file extension, defaulting to JSON.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => Format::Csv,
            _ => Format::Json,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassFile {
    values: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    measure: Option<Vec<f64>>,
}

impl TryFrom<ClassFile> for FunctionClass {
    type Error = Error;
    fn try_from(file: ClassFile) -> Result<Self> {
        if file.values.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut class = FunctionClass::new(file.values)?;
        if let Some(labels) = file.labels {
            class = class.with_labels(labels)?;
        }
        if let Some(w) = file.measure {
            class = class.with_measure(Measure::new(w)?)?;
        }
        Ok(class)
    }
}

impl From<FunctionClass> for ClassFile {
    fn from(c: FunctionClass) -> Self {
        ClassFile {
            values: c.to_rows(),
            labels: c.labels,
            measure: c.measure.map(|m| m.weights),
        }
    }
}

impl FunctionClass {
    /// Builds a class from rows. Rows must be nonempty, rectangular and finite.
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let first = rows.first().ok_or(Error::EmptyInput)?;
        let cols = first.len();
        if cols == 0 {
            return Err(Error::EmptyInput);
        }
        let mut values = Vec::with_capacity(rows.len() * cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Parse {
                    row: r + 1,
                    col: None,
                    message: format!("expected {cols} values, found {}", row.len()),
                });
            }
            for (c, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::Parse {
                        row: r + 1,
                        col: Some(c + 1),
                        message: format!("non-finite value {v}"),
                    });
                }
            }
            values.extend_from_slice(row);
        }
        Ok(FunctionClass {
            values,
            rows: rows.len(),
            cols,
            labels: None,
            measure: None,
        })
    }

    /// Builds a class from a row-major buffer.
    pub fn from_flat(values: Vec<f64>, rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyInput);
        }
        if values.len() != rows * cols {
            return Err(Error::invalid(format!(
                "buffer of {} values cannot hold {rows}x{cols}",
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Parse {
                row: pos / cols + 1,
                col: Some(pos % cols + 1),
                message: "non-finite value".into(),
            });
        }
        Ok(FunctionClass {
            values,
            rows,
            cols,
            labels: None,
            measure: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.rows {
            return Err(Error::invalid(format!(
                "{} labels for {} functions",
                labels.len(),
                self.rows
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn with_measure(mut self, measure: Measure) -> Result<Self> {
        if measure.len() != self.cols {
            return Err(Error::invalid(format!(
                "measure on {} points for a domain of {}",
                measure.len(),
                self.cols
            )));
        }
        self.measure = Some(measure);
        Ok(self)
    }

    /// Number of functions `|F|`.
    pub fn len(&self) -> usize {
        self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0
    }

    /// Size `n` of the domain.
    pub fn domain_size(&self) -> usize {
        self.cols
    }

    pub fn row(&self, f: usize) -> &[f64] {
        &self.values[f * self.cols..(f + 1) * self.cols]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.values.chunks_exact(self.cols)
    }

    pub fn value(&self, f: usize, i: usize) -> f64 {
        self.values[f * self.cols + i]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// The measure attached at load time, if any.
    pub fn measure(&self) -> Option<&Measure> {
        self.measure.as_ref()
    }

    /// Attached measure or the uniform one.
    pub fn measure_or_uniform(&self) -> Measure {
        self.measure
            .clone()
            .unwrap_or_else(|| Measure::uniform(self.cols))
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.rows().map(<[f64]>::to_vec).collect()
    }

    /// `(min, max)` of coordinate `i` over the class.
    pub fn column_range(&self, i: usize) -> (f64, f64) {
        self.rows().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
            (lo.min(r[i]), hi.max(r[i]))
        })
    }

    /// Sorted distinct values taken by coordinate `i`.
    pub fn column_values(&self, i: usize) -> Vec<f64> {
        let mut v: Vec<f64> = self.rows().map(|r| r[i]).collect();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }

    /// Pairs `(first, later)` of identical rows. Duplicates are kept in the
    /// class; this only reports them.
    pub fn duplicate_rows(&self) -> Vec<(usize, usize)> {
        let mut order: Vec<usize> = (0..self.rows).collect();
        order.sort_by(|&a, &b| {
            self.row(a)
                .iter()
                .zip(self.row(b))
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(a.cmp(&b))
        });
        let mut dups = Vec::new();
        let mut start = 0;
        for k in 1..=order.len() {
            if k == order.len() || self.row(order[k]) != self.row(order[start]) {
                for &later in &order[start + 1..k] {
                    dups.push((order[start], later));
                }
                start = k;
            }
        }
        dups.sort_unstable();
        dups
    }

    /// Number of distinct rows.
    pub fn distinct_len(&self) -> usize {
        self.rows - self.duplicate_rows().len()
    }

    /// Sub-class formed by the given rows, in the given order.
    pub fn select(&self, rows: &[usize]) -> Result<Self> {
        let picked: Vec<Vec<f64>> = rows.iter().map(|&r| self.row(r).to_vec()).collect();
        let mut out = FunctionClass::new(picked)?;
        out.measure = self.measure.clone();
        Ok(out)
    }

    /// Restriction of every function to the listed domain points.
    pub fn restrict(&self, coords: &[usize]) -> Result<Self> {
        let picked: Vec<Vec<f64>> = self
            .rows()
            .map(|r| coords.iter().map(|&i| r[i]).collect())
            .collect();
        FunctionClass::new(picked)
    }

    /// L-infinity diameter over the whole domain.
    pub fn sup_diameter(&self) -> f64 {
        (0..self.cols)
            .map(|i| {
                let (lo, hi) = self.column_range(i);
                hi - lo
            })
            .fold(0.0, f64::max)
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string(&ClassFile::from(self.clone()))?)
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        for r in self.rows() {
            let line: Vec<String> = r.iter().map(|v| format!("{v:?}")).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        if text.trim().is_empty() {
            return Err(Error::EmptyInput);
        }
        let file: ClassFile = serde_json::from_str(text)?;
        FunctionClass::try_from(file)
    }

    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let mut rows = Vec::new();
        for (r, record) in reader.records().enumerate() {
            let record = record.map_err(|e| Error::Parse {
                row: r + 1,
                col: None,
                message: e.to_string(),
            })?;
            if record.iter().all(str::is_empty) {
                continue;
            }
            let row = record
                .iter()
                .enumerate()
                .map(|(c, cell)| {
                    cell.parse::<f64>()
                        .ok()
                        .filter(|v| v.is_finite())
                        .ok_or_else(|| Error::Parse {
                            row: r + 1,
                            col: Some(c + 1),
                            message: format!("not a finite number: {cell:?}"),
                        })
                })
                .collect::<Result<Vec<f64>>>()?;
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(Error::EmptyInput);
        }
        FunctionClass::new(rows)
    }
}

impl fmt::Display for FunctionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FunctionClass({} functions on {} points)", self.rows, self.cols)
    }
}

/// Reads a class from disk.
pub fn load_class(path: impl AsRef<Path>, format: Format) -> Result<FunctionClass> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    match format {
        Format::Csv => FunctionClass::from_csv_str(&text),
        Format::Json => FunctionClass::from_json_str(&text),
    }
}

/// Probability measure on `{0..n}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Measure {
    weights: Vec<f64>,
}

impl TryFrom<Vec<f64>> for Measure {
    type Error = Error;
    fn try_from(w: Vec<f64>) -> Result<Self> {
        Measure::new(w)
    }
}

impl From<Measure> for Vec<f64> {
    fn from(m: Measure) -> Self {
        m.weights
    }
}

impl Measure {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyInput);
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::invalid("measure weights must be finite and nonnegative"));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::invalid(format!("measure has total mass {total}, expected 1")));
        }
        Ok(Measure { weights })
    }

    /// Rescales nonnegative weights to total mass one.
    pub fn normalized(weights: Vec<f64>) -> Result<Self> {
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::invalid("measure weights must be finite and nonnegative"));
        }
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(Error::invalid("weights have no positive mass"));
        }
        Ok(Measure {
            weights: weights.into_iter().map(|w| w / total).collect(),
        })
    }

    pub fn uniform(n: usize) -> Self {
        Measure {
            weights: vec![1.0 / n as f64; n],
        }
    }

    pub fn dirac(n: usize, at: usize) -> Self {
        let mut weights = vec![0.0; n];
        weights[at] = 1.0;
        Measure { weights }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, w)| **w > 0.0)
            .map(|(i, _)| i)
    }

    /// Integer multiplicities `k_i` and common denominator `d` with
    /// `|w_i - k_i/d| <= tol` for every atom, searching `d` up to `max_den`.
    ///
    /// Splitting atom `i` into `k_i` equal atoms turns the measure into the
    /// uniform measure on `d` points.
    pub fn split_atoms(&self, tol: f64, max_den: u64) -> Result<(Vec<u64>, u64)> {
        for d in 1..=max_den {
            let df = d as f64;
            let mult: Vec<u64> = self.weights.iter().map(|w| (w * df).round() as u64).collect();
            if mult.iter().sum::<u64>() != d {
                continue;
            }
            if self
                .weights
                .iter()
                .zip(&mult)
                .all(|(w, &k)| (w - k as f64 / df).abs() <= tol)
            {
                return Ok((mult, d));
            }
        }
        Err(Error::NumericFailure(format!(
            "no rational approximation with denominator <= {max_den} within {tol}"
        )))
    }
}

impl FunctionClass {
    /// Equivalent class under the uniform measure: each domain point is
    /// repeated according to [`Measure::split_atoms`] of `measure`.
    pub fn split_to_uniform(&self, measure: &Measure, tol: f64, max_den: u64) -> Result<Self> {
        if measure.len() != self.cols {
            return Err(Error::invalid("measure length differs from domain size"));
        }
        let (mult, _) = measure.split_atoms(tol, max_den)?;
        let rows: Vec<Vec<f64>> = self
            .rows()
            .map(|r| {
                r.iter()
                    .zip(&mult)
                    .flat_map(|(&v, &k)| std::iter::repeat_n(v, k as usize))
                    .collect()
            })
            .collect();
        FunctionClass::new(rows)
    }
}

/// Seed of every randomized operation. Streams are split per sample index,
/// so parallel and serial runs draw identical numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Seed(pub u64);

impl Seed {
    /// Generator for substream `stream`.
    pub fn rng(self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.0);
        rng.set_stream(stream);
        rng
    }

    /// A seed derived from this one, for independent sub-experiments.
    pub fn derive(self, salt: u64) -> Seed {
        // splitmix64 finalizer
        let mut z = self.0 ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        Seed(z ^ (z >> 31))
    }
}

impl From<u64> for Seed {
    fn from(v: u64) -> Self {
        Seed(v)
    }
}

/// `(sum_i w_i |f_i|^p)^(1/p)`, or the max over the support for `p = inf`.
/// For `p < 1` the value is returned even though it is not a norm.
pub fn lp_norm(f: &[f64], mu: &Measure, p: f64) -> Result<f64> {
    if !(p > 0.0) {
        return Err(Error::invalid(format!("exponent p must be positive, got {p}")));
    }
    if f.len() != mu.len() {
        return Err(Error::invalid(format!(
            "vector of length {} against a measure on {} points",
            f.len(),
            mu.len()
        )));
    }
    Ok(lp_norm_unchecked(f, mu.weights(), p))
}

pub(crate) fn lp_norm_unchecked(f: &[f64], w: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        return f
            .iter()
            .zip(w)
            .filter(|(_, w)| **w > 0.0)
            .map(|(x, _)| x.abs())
            .fold(0.0, f64::max);
    }
    if p == 2.0 {
        return f.iter().zip(w).map(|(x, w)| w * x * x).sum::<f64>().sqrt();
    }
    if p == 1.0 {
        return f.iter().zip(w).map(|(x, w)| w * x.abs()).sum();
    }
    f.iter()
        .zip(w)
        .map(|(x, w)| w * x.abs().powf(p))
        .sum::<f64>()
        .powf(1.0 / p)
}

/// Replaces every row `f` by `scale * f + shift`.
pub fn affine_image(class: &FunctionClass, scale: f64, shift: &[f64]) -> Result<FunctionClass> {
    if scale == 0.0 || !scale.is_finite() {
        return Err(Error::invalid(format!("scale must be finite and nonzero, got {scale}")));
    }
    if shift.len() != class.domain_size() {
        return Err(Error::invalid(format!(
            "shift of length {} for a domain of {}",
            shift.len(),
            class.domain_size()
        )));
    }
    let n = class.domain_size();
    let values: Vec<f64> = class
        .values
        .iter()
        .enumerate()
        .map(|(k, v)| scale * v + shift[k % n])
        .collect();
    let mut out = FunctionClass::from_flat(values, class.len(), n)?;
    out.labels = class.labels.clone();
    out.measure = class.measure.clone();
    Ok(out)
}

/// `scale * F`.
pub fn scaled(class: &FunctionClass, scale: f64) -> Result<FunctionClass> {
    affine_image(class, scale, &vec![0.0; class.domain_size()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn csv_square() {
        let c = FunctionClass::from_csv_str("0,0\n1,1").unwrap();
        assert_eq!(c.to_rows(), vec![vec![0.0, 0.0], vec![1.0, 1.0]]);
    }

    #[test]
    fn json_singleton() {
        let c = FunctionClass::from_json_str(r#"{"values": [[0]]}"#).unwrap();
        assert_eq!((c.len(), c.domain_size()), (1, 1));
    }

    #[test]
    fn ragged_csv_reports_row() {
        match FunctionClass::from_csv_str("1,2\n3,4,5\n") {
            Err(Error::Parse { row: 2, col: None, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn non_numeric_cell_reports_coordinates() {
        match FunctionClass::from_csv_str("1,2\n3,x\n") {
            Err(Error::Parse { row: 2, col: Some(2), .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn empty_inputs() {
        assert!(matches!(FunctionClass::from_csv_str(""), Err(Error::EmptyInput)));
        assert!(matches!(FunctionClass::from_json_str("  "), Err(Error::EmptyInput)));
        assert!(matches!(
            FunctionClass::from_json_str(r#"{"values": []}"#),
            Err(Error::EmptyInput)
        ));
    }

    #[test]
    fn json_measure_and_labels() {
        let c = FunctionClass::from_json_str(
            r#"{"values": [[1,2],[3,4]], "labels": ["a","b"], "measure": [0.25, 0.75]}"#,
        )
        .unwrap();
        assert_eq!(c.labels().unwrap(), ["a", "b"]);
        assert_eq!(c.measure().unwrap().weights(), [0.25, 0.75]);
        assert!(FunctionClass::from_json_str(r#"{"values": [[1,2]], "measure": [0.5, 0.6]}"#).is_err());
    }

    #[test]
    fn duplicates_are_kept_and_reported() {
        let c = FunctionClass::new(vec![vec![1.0], vec![2.0], vec![1.0], vec![1.0]]).unwrap();
        assert_eq!(c.len(), 4);
        assert_eq!(c.duplicate_rows(), vec![(0, 2), (0, 3)]);
        assert_eq!(c.distinct_len(), 2);
    }

    #[test]
    fn lp_norm_examples() {
        let u2 = Measure::uniform(2);
        assert!((lp_norm(&[3.0, 4.0], &u2, 2.0).unwrap() - 12.5f64.sqrt()).abs() < 1e-15);
        let m = Measure::new(vec![0.1, 0.2, 0.7]).unwrap();
        for p in [0.5, 1.0, 3.0, f64::INFINITY] {
            assert!((lp_norm(&[1.0, 1.0, 1.0], &m, p).unwrap() - 1.0).abs() < 1e-15);
        }
        // (1/2 * 2^(1/2) + 1/2 * 0)^2
        let direct = (0.5 * 2f64.sqrt()).powi(2);
        let v = lp_norm(&[2.0, 0.0], &u2, 0.5).unwrap();
        assert!((v - 0.5).abs() < 1e-15 && (v - direct).abs() < 1e-15);
        assert!(lp_norm(&[1.0, 1.0], &u2, 0.0).is_err());
        assert!(lp_norm(&[1.0, 1.0], &u2, -1.0).is_err());
    }

    #[test]
    fn sup_norm_ignores_null_atoms() {
        let m = Measure::new(vec![0.0, 1.0]).unwrap();
        assert_eq!(lp_norm(&[5.0, 1.0], &m, f64::INFINITY).unwrap(), 1.0);
    }

    #[test]
    fn affine_examples() {
        let c = FunctionClass::new(vec![vec![0.0, 2.0]]).unwrap();
        assert_eq!(affine_image(&c, 1.0, &[0.0, 0.0]).unwrap(), c);
        assert_eq!(affine_image(&c, 0.5, &[0.0, 0.0]).unwrap().to_rows(), vec![vec![0.0, 1.0]]);
        assert!(affine_image(&c, 0.0, &[0.0, 0.0]).is_err());
        assert!(affine_image(&c, 1.0, &[0.0]).is_err());
    }

    #[test]
    fn power_of_two_scaling_inverts_exactly() {
        let c = FunctionClass::new(vec![vec![0.3, -1.7], vec![2.2, 9.1]]).unwrap();
        let there = scaled(&c, 4.0).unwrap();
        assert_eq!(scaled(&there, 0.25).unwrap(), c);
    }

    #[test]
    fn atom_splitting() {
        let m = Measure::new(vec![1.0 / 3.0, 2.0 / 3.0]).unwrap();
        let (mult, d) = m.split_atoms(1e-9, 1000).unwrap();
        assert_eq!((mult, d), (vec![1, 2], 3));
        let c = FunctionClass::new(vec![vec![1.0, 5.0]]).unwrap();
        let u = c.split_to_uniform(&m, 1e-9, 1000).unwrap();
        assert_eq!(u.to_rows(), vec![vec![1.0, 5.0, 5.0]]);
        // L1 norm is preserved by the split
        let before = lp_norm(c.row(0), &m, 1.0).unwrap();
        let after = lp_norm(u.row(0), &Measure::uniform(3), 1.0).unwrap();
        assert!((before - after).abs() < 1e-12);
    }

    #[test]
    fn seed_streams_are_reproducible() {
        use rand::Rng;
        let a: u64 = Seed(7).rng(3).random();
        let b: u64 = Seed(7).rng(3).random();
        let c: u64 = Seed(7).rng(4).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    fn class_strategy() -> impl Strategy<Value = Vec<Vec<f64>>> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            prop::collection::vec(prop::collection::vec(-1e6f64..1e6, c), r)
        })
    }

    proptest! {
        #[test]
        fn json_and_csv_round_trip_bit_exactly(rows in class_strategy()) {
            let c = FunctionClass::new(rows).unwrap();
            let j = FunctionClass::from_json_str(&c.to_json_string().unwrap()).unwrap();
            let s = FunctionClass::from_csv_str(&c.to_csv_string()).unwrap();
            prop_assert_eq!(&j, &c);
            prop_assert_eq!(&s, &c);
        }

        #[test]
        fn lp_norm_is_homogeneous(
            f in prop::collection::vec(-100f64..100.0, 1..8),
            c in -50f64..50.0,
            p in prop::sample::select(vec![1.0, 1.5, 2.0, 3.0, 7.0, f64::INFINITY]),
        ) {
            let mu = Measure::uniform(f.len());
            let scaled: Vec<f64> = f.iter().map(|x| c * x).collect();
            let lhs = lp_norm(&scaled, &mu, p).unwrap();
            let rhs = c.abs() * lp_norm(&f, &mu, p).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1e-300));
        }

        #[test]
        fn affine_preserves_shape(rows in class_strategy(), s in 0.1f64..3.0) {
            let c = FunctionClass::new(rows).unwrap();
            let shift = vec![1.5; c.domain_size()];
            let a = affine_image(&c, s, &shift).unwrap();
            prop_assert_eq!((a.len(), a.domain_size()), (c.len(), c.domain_size()));
        }
    }
}
