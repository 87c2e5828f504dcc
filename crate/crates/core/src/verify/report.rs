//! Structured outcome of one theorem check.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Version of the report JSON layout.
pub const REPORT_SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    /// The claim is predicted false and every negative control cleared its
    /// detection floor.
    ExpectedFailConfirmed,
}

impl Verdict {
    /// Whether the verdict matches what the theory predicts.
    pub fn is_success(&self) -> bool {
        !matches!(self, Verdict::Fail)
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::ExpectedFailConfirmed => "expected-fail-confirmed",
        }
    }
}

/// What the theory predicts for the checked claim.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expectation {
    Holds,
    Fails,
}

/// `le`: value must not exceed the bound. `ge`: value must reach the floor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Le,
    Ge,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub value: f64,
    pub bound: f64,
    pub relation: Relation,
    pub ok: bool,
}

impl Residual {
    pub fn new(value: f64, bound: f64, relation: Relation) -> Self {
        // NaN fails either way.
        let ok = match relation {
            Relation::Le => value <= bound,
            Relation::Ge => value >= bound,
        };
        Self { value, bound, relation, ok }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub check_id: String,
    pub space_id: Option<String>,
    pub parameters: BTreeMap<String, String>,
    pub expectation: Expectation,
    pub verdict: Verdict,
    pub residuals: BTreeMap<String, Residual>,
    pub discrepancies: Vec<String>,
}

impl VerificationReport {
    pub fn new(check_id: impl Into<String>, space_id: Option<String>) -> Self {
        Self {
            schema: REPORT_SCHEMA,
            check_id: check_id.into(),
            space_id,
            parameters: BTreeMap::new(),
            expectation: Expectation::Holds,
            verdict: Verdict::Fail,
            residuals: BTreeMap::new(),
            discrepancies: Vec::new(),
        }
    }

    /// Report for a check that could not be evaluated.
    pub fn errored(check_id: impl Into<String>, space_id: Option<String>, message: String) -> Self {
        let mut r = Self::new(check_id, space_id);
        r.discrepancies.push(format!("error: {message}"));
        r
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn expect(&mut self, e: Expectation) -> &mut Self {
        self.expectation = e;
        self
    }

    /// Records `value ≤ bound`, keeping the worst value for repeated names.
    pub fn at_most(&mut self, name: &str, value: f64, bound: f64) -> &mut Self {
        let v = match self.residuals.get(name) {
            Some(old) if !(value > old.value) && !value.is_nan() => old.value,
            _ => value,
        };
        self.residuals.insert(name.to_string(), Residual::new(v, bound, Relation::Le));
        self
    }

    /// Records `value ≥ floor`, keeping the smallest value for repeated names.
    pub fn at_least(&mut self, name: &str, value: f64, floor: f64) -> &mut Self {
        let v = match self.residuals.get(name) {
            Some(old) if !(value < old.value) && !value.is_nan() => old.value,
            _ => value,
        };
        self.residuals.insert(name.to_string(), Residual::new(v, floor, Relation::Ge));
        self
    }

    /// `value ≤ bound` when `holds`, otherwise `value ≥ floor`.
    pub fn decide(&mut self, name: &str, value: f64, holds: bool, bound: f64, floor: f64) -> &mut Self {
        if holds {
            self.at_most(name, value, bound)
        } else {
            self.at_least(name, value, floor)
        }
    }

    pub fn note(&mut self, text: impl Into<String>) -> &mut Self {
        self.discrepancies.push(text.into());
        self
    }

    /// Computes the verdict from the recorded residuals.
    pub fn finish(mut self) -> Self {
        let all_ok = !self.residuals.is_empty() && self.residuals.values().all(|r| r.ok);
        let has_control = self.residuals.values().any(|r| r.relation == Relation::Ge);
        self.verdict = match (all_ok, self.expectation) {
            (false, _) => Verdict::Fail,
            (true, Expectation::Holds) => Verdict::Pass,
            (true, Expectation::Fails) if has_control => Verdict::ExpectedFailConfirmed,
            (true, Expectation::Fails) => Verdict::Fail,
        };
        self
    }

    /// Names of residuals outside their bounds.
    pub fn failures(&self) -> Vec<&str> {
        self.residuals.iter().filter(|(_, r)| !r.ok).map(|(k, _)| k.as_str()).collect()
    }
}
