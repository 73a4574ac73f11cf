use serde::Serialize;
use serde_json::{Map, Value};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Exact,
    MonteCarlo,
    GreedyBound,
}

/// One reported value with how it was obtained.
#[derive(Debug, Clone, Serialize)]
pub struct Quantity {
    pub value: Value,
    pub provenance: Provenance,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stderr: Option<Value>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FixtureInfo {
    pub version: u32,
    /// `pinned` or the path given with `--fixture`.
    pub source: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportProvenance {
    pub seed: u64,
    pub version: &'static str,
    pub fixture: FixtureInfo,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub outputs: Map<String, Value>,
    pub provenance: ReportProvenance,
}

/// Numbers as JSON; non-finite values become `"inf"`, `"-inf"` or `"nan"`.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
    } else if x.is_nan() {
        Value::String("nan".into())
    } else if x > 0.0 {
        Value::String("inf".into())
    } else {
        Value::String("-inf".into())
    }
}

/// Serializes `v`, writing non-finite floats as strings.
pub fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

#[derive(Default)]
pub struct Outputs(Map<String, Value>);

impl Outputs {
    pub fn put(&mut self, name: &str, value: Value, provenance: Provenance) -> &mut Self {
        self.insert(name, Quantity { value, provenance, stderr: None })
    }

    pub fn exact(&mut self, name: &str, value: Value) -> &mut Self {
        self.put(name, value, Provenance::Exact)
    }

    pub fn monte_carlo(&mut self, name: &str, mean: f64, stderr: f64) -> &mut Self {
        self.insert(
            name,
            Quantity {
                value: num(mean),
                provenance: Provenance::MonteCarlo,
                stderr: Some(num(stderr)),
            },
        )
    }

    fn insert(&mut self, name: &str, q: Quantity) -> &mut Self {
        self.0.insert(name.to_string(), to_json(&q));
        self
    }

    pub fn into_map(self) -> Map<String, Value> {
        self.0
    }
}

pub fn render(report: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}
