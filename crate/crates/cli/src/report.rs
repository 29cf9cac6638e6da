use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `|measured - expected| <= tolerance`
    Within,
    /// `measured < expected`
    Below,
    /// `measured > expected`
    Above,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub relation: Relation,
    pub pass: bool,
}

impl Check {
    pub fn within(name: impl Into<String>, measured: f64, expected: f64, tolerance: f64) -> Self {
        let pass = (measured - expected).abs() <= tolerance;
        Check { name: name.into(), measured, expected, tolerance, relation: Relation::Within, pass }
    }

    /// Relative version of [`Check::within`]: tolerance scaled by `|expected|`.
    pub fn relative(name: impl Into<String>, measured: f64, expected: f64, rel: f64) -> Self {
        let mut c = Self::within(name, measured, expected, rel * expected.abs());
        c.tolerance = rel * expected.abs();
        c
    }

    pub fn below(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Check { name: name.into(), measured, expected: bound, tolerance: 0.0, relation: Relation::Below, pass: measured < bound }
    }

    pub fn above(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Check { name: name.into(), measured, expected: bound, tolerance: 0.0, relation: Relation::Above, pass: measured > bound }
    }

    pub fn flag(name: impl Into<String>, ok: bool) -> Self {
        let v = if ok { 1.0 } else { 0.0 };
        Check { name: name.into(), measured: v, expected: 1.0, tolerance: 0.0, relation: Relation::Within, pass: ok }
    }

    pub fn describe(&self) -> String {
        let rel = match self.relation {
            Relation::Within => format!("{:.6e} vs {:.6e} ± {:.1e}", self.measured, self.expected, self.tolerance),
            Relation::Below => format!("{:.6e} < {:.6e}", self.measured, self.expected),
            Relation::Above => format!("{:.6e} > {:.6e}", self.measured, self.expected),
        };
        format!("{} {}: {}", if self.pass { "ok  " } else { "FAIL" }, self.name, rel)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct RunReport {
    pub scenario: String,
    pub kind: String,
    pub checks: Vec<Check>,
    pub pass: bool,
    pub wall_time_s: f64,
    /// Refinement and run metadata (step sizes, node counts, fitted values).
    pub metadata: BTreeMap<String, serde_json::Value>,
}

impl RunReport {
    pub fn new(scenario: &str, kind: &str) -> Self {
        RunReport { scenario: scenario.into(), kind: kind.into(), pass: true, ..Default::default() }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn meta(&mut self, key: &str, v: impl Serialize) {
        self.metadata.insert(key.into(), serde_json::to_value(v).unwrap_or(serde_json::Value::Null));
    }

    /// Overall pass is the conjunction of the checks.
    pub fn finish(&mut self, wall: f64) {
        self.pass = self.checks.iter().all(|c| c.pass);
        self.wall_time_s = wall;
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
