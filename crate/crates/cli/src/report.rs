//! JSON analysis reports.
//!
//! Every report has the shape
//! `{operation, inputs, verdict, certificate | witness, timing}`. Rationals
//! are written as `"p/q"` strings and points by label.

use std::time::Duration;

use dynlab_core::orbit::LassoPseudoOrbit;
use dynlab_core::{PointId, Rational, SystemMap};
use serde::Serialize;
use serde_json::{json, Map, Value};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Timing {
    pub elapsed_us: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub operation: String,
    pub inputs: Map<String, Value>,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    pub timing: Timing,
}

impl Report {
    pub fn new(operation: &str, verdict: &str) -> Self {
        Report {
            operation: operation.to_string(),
            inputs: Map::new(),
            verdict: verdict.to_string(),
            certificate: None,
            witness: None,
            timing: Timing { elapsed_us: 0 },
        }
    }

    pub fn input(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.inputs.insert(key.to_string(), value.into());
        self
    }

    pub fn certificate(mut self, value: Value) -> Self {
        self.certificate = Some(value);
        self
    }

    pub fn witness(mut self, value: Value) -> Self {
        self.witness = Some(value);
        self
    }

    pub fn timed(mut self, elapsed: Duration) -> Self {
        self.timing.elapsed_us = u64::try_from(elapsed.as_micros()).unwrap_or(u64::MAX);
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

pub fn rational(r: &Rational) -> Value {
    Value::String(r.to_string())
}

pub fn labels(f: &SystemMap, points: &[PointId]) -> Value {
    points
        .iter()
        .map(|&p| Value::String(f.space().label(p).to_string()))
        .collect()
}

/// `{stem: [labels], cycle: [labels], delta: "p/q"}`.
pub fn lasso(f: &SystemMap, l: &LassoPseudoOrbit) -> Value {
    json!({
        "stem": labels(f, l.stem()),
        "cycle": labels(f, l.cycle()),
        "delta": rational(l.delta()),
    })
}

/// A self-map as a `label → label` object.
pub fn map_table(f: &SystemMap, g: &SystemMap) -> Value {
    let mut m = Map::new();
    for x in f.space().points() {
        m.insert(
            f.space().label(x).to_string(),
            Value::String(f.space().label(g.apply(x)).to_string()),
        );
    }
    Value::Object(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use dynlab_core::builders::cantor;
    use dynlab_core::orbit::bad_cantor_pseudo_orbit;
    use dynlab_core::q;

    #[test]
    fn lasso_uses_labels_and_fraction_strings() {
        let t = cantor(2).unwrap();
        let l = bad_cantor_pseudo_orbit(2, &q("2/9")).unwrap();
        assert_eq!(
            lasso(&t, &l),
            json!({"stem": [], "cycle": ["1/9", "1/3", "1"], "delta": "2/9"})
        );
    }

    #[test]
    fn report_shape() {
        let r = Report::new("check", "yes")
            .input("epsilon", "1/2")
            .certificate(json!({"reachable_states": 3}));
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["operation"], "check");
        assert_eq!(v["inputs"]["epsilon"], "1/2");
        assert_eq!(v["certificate"]["reachable_states"], 3);
        assert!(v.get("witness").is_none());
        assert!(v["timing"]["elapsed_us"].is_u64());
    }
}
