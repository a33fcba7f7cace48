use serde::{Deserialize, Serialize};

/// Outcome of a single named check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    #[serde(with = "nan_as_null")]
    pub measured: f64,
    #[serde(with = "nan_as_null")]
    pub tolerance: f64,
    pub relation: Relation,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// How `measured` is compared with `tolerance`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
    /// Pass/fail decided elsewhere; the tolerance is informational.
    #[serde(rename = "flag")]
    Flag,
}

impl Relation {
    pub fn holds(self, measured: f64, tolerance: f64) -> bool {
        match self {
            Relation::AtMost => measured <= tolerance,
            Relation::AtLeast => measured >= tolerance,
            Relation::Flag => false,
        }
    }
}

impl CheckResult {
    /// The check's key: its last `/`-separated segment without any `#k` suffix.
    pub fn key(&self) -> &str {
        let last = self.name.rsplit('/').next().unwrap_or(&self.name);
        last.split('#').next().unwrap_or(last)
    }
}

mod nan_as_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
    }
}

/// Ordered collection of uniquely named checks.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct VerificationSummary {
    checks: Vec<CheckResult>,
}

impl VerificationSummary {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records `measured <= tolerance` (NaN fails).
    pub fn check_le(&mut self, name: impl Into<String>, measured: f64, tolerance: f64) {
        self.push(CheckResult {
            name: name.into(),
            passed: Relation::AtMost.holds(measured, tolerance),
            measured,
            tolerance,
            relation: Relation::AtMost,
            detail: None,
        });
    }

    /// Records `measured >= threshold`.
    pub fn check_ge(&mut self, name: impl Into<String>, measured: f64, threshold: f64) {
        self.push(CheckResult {
            name: name.into(),
            passed: Relation::AtLeast.holds(measured, threshold),
            measured,
            tolerance: threshold,
            relation: Relation::AtLeast,
            detail: None,
        });
    }

    /// Records a failure that produced no measurement.
    pub fn fail(&mut self, name: impl Into<String>, detail: impl Into<String>) {
        self.push(CheckResult {
            name: name.into(),
            passed: false,
            measured: f64::NAN,
            tolerance: f64::NAN,
            relation: Relation::Flag,
            detail: Some(detail.into()),
        });
    }

    /// Appends a result; a repeated name gets a numeric suffix.
    pub fn push(&mut self, mut result: CheckResult) {
        if self.get(&result.name).is_some() {
            let base = result.name.clone();
            let mut k = 2;
            while self.get(&format!("{base}#{k}")).is_some() {
                k += 1;
            }
            result.name = format!("{base}#{k}");
        }
        self.checks.push(result);
    }

    /// Appends every check of `other` under `prefix/`.
    pub fn merge(&mut self, prefix: &str, other: VerificationSummary) {
        for mut c in other.checks {
            c.name = format!("{prefix}/{}", c.name);
            self.push(c);
        }
    }

    /// Re-scores every comparable check whose [`key`](CheckResult::key) is
    /// `key` against `tolerance`; returns how many were touched.
    pub fn retolerance(&mut self, key: &str, tolerance: f64) -> usize {
        let mut touched = 0;
        for c in self
            .checks
            .iter_mut()
            .filter(|c| c.key() == key && c.relation != Relation::Flag)
        {
            c.tolerance = tolerance;
            c.passed = c.relation.holds(c.measured, tolerance);
            touched += 1;
        }
        touched
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn checks(&self) -> &[CheckResult] {
        &self.checks
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "{tag} {} measured={:.3e} tol={:.3e}",
                c.name, c.measured, c.tolerance
            ));
            if let Some(d) = &c.detail {
                out.push_str(&format!(" ({d})"));
            }
            out.push('\n');
        }
        let failed = self.failures().count();
        out.push_str(&format!(
            "{} checks, {} failed\n",
            self.checks.len(),
            failed
        ));
        out
    }

    /// One JSON object per check.
    pub fn to_json_lines(&self) -> String {
        self.checks
            .iter()
            .map(|c| serde_json::to_string(c).expect("check serializes") + "\n")
            .collect()
    }
}
