use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIPPED",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub description: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub residual: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub window: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
}

/// Informational value that never affects the outcome of a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub name: String,
    pub value: String,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

impl Counts {
    pub fn add(&mut self, o: Counts) {
        self.pass += o.pass;
        self.fail += o.fail;
        self.skipped += o.skipped;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub parameters: BTreeMap<String, String>,
    pub checks: Vec<Check>,
    #[serde(default)]
    pub diagnostics: Vec<Diagnostic>,
    #[serde(default)]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_time_s: Option<f64>,
}

impl VerificationReport {
    pub fn new(suite: &str) -> Self {
        VerificationReport {
            suite: suite.to_string(),
            parameters: BTreeMap::new(),
            checks: Vec::new(),
            diagnostics: Vec::new(),
            notes: Vec::new(),
            wall_time_s: None,
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn pass(&mut self, description: impl Into<String>) {
        self.push(Check {
            description: description.into(),
            status: Status::Pass,
            residual: Some("0".into()),
            window: None,
            witness: None,
        });
    }

    pub fn fail(&mut self, description: impl Into<String>, residual: impl Into<String>, witness: impl Into<String>) {
        self.push(Check {
            description: description.into(),
            status: Status::Fail,
            residual: Some(residual.into()),
            window: None,
            witness: Some(witness.into()),
        });
    }

    pub fn skip(&mut self, description: impl Into<String>, reason: impl Into<String>) {
        self.push(Check {
            description: description.into(),
            status: Status::Skipped,
            residual: None,
            window: Some(reason.into()),
            witness: None,
        });
    }

    /// Records an exact check: PASS iff `witness` is `None`.
    pub fn exact(&mut self, description: impl Into<String>, witness: Option<(String, String)>) {
        match witness {
            None => self.pass(description),
            Some((residual, at)) => self.fail(description, residual, at),
        }
    }

    /// Records a floating check against a tolerance.
    pub fn numeric(&mut self, description: impl Into<String>, residual: f64, tol: f64) {
        let status = if residual.is_finite() && residual <= tol { Status::Pass } else { Status::Fail };
        self.push(Check {
            description: description.into(),
            status,
            residual: Some(format!("{residual:.3e}")),
            window: Some(format!("tolerance {tol:.0e}")),
            witness: None,
        });
    }

    pub fn diagnostic(&mut self, name: &str, value: impl ToString) {
        self.diagnostics.push(Diagnostic { name: name.to_string(), value: value.to_string() });
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn with_window(mut self, window: &str) -> Self {
        for c in &mut self.checks {
            if c.window.is_none() {
                c.window = Some(window.to_string());
            }
        }
        self
    }

    /// Appends the checks of `other`, prefixing their descriptions.
    pub fn absorb(&mut self, prefix: &str, other: VerificationReport) {
        for mut c in other.checks {
            c.description = format!("{prefix}: {}", c.description);
            self.checks.push(c);
        }
        for mut d in other.diagnostics {
            d.name = format!("{prefix}: {}", d.name);
            self.diagnostics.push(d);
        }
        self.notes.extend(other.notes);
    }

    pub fn counts(&self) -> Counts {
        let mut c = Counts::default();
        for ch in &self.checks {
            match ch.status {
                Status::Pass => c.pass += 1,
                Status::Fail => c.fail += 1,
                Status::Skipped => c.skipped += 1,
            }
        }
        c
    }

    pub fn passed(&self) -> bool {
        self.counts().fail == 0
    }

    /// PASS with at least one check and nothing skipped or failed.
    pub fn fully_passed(&self) -> bool {
        let c = self.counts();
        c.fail == 0 && c.skipped == 0 && c.pass > 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let c = self.counts();
        let _ = writeln!(s, "== {} ({} pass, {} fail, {} skipped)", self.suite, c.pass, c.fail, c.skipped);
        for (k, v) in &self.parameters {
            let _ = writeln!(s, "   {k} = {v}");
        }
        for ch in &self.checks {
            let _ = write!(s, "  [{}] {}", ch.status.label(), ch.description);
            if ch.status != Status::Pass {
                if let Some(r) = &ch.residual {
                    let _ = write!(s, " | residual {r}");
                }
                if let Some(w) = &ch.witness {
                    let _ = write!(s, " | at {w}");
                }
                if let Some(w) = &ch.window {
                    let _ = write!(s, " | {w}");
                }
            }
            s.push('\n');
        }
        for d in &self.diagnostics {
            let _ = writeln!(s, "  (info) {} = {}", d.name, d.value);
        }
        for n in &self.notes {
            let _ = writeln!(s, "  note: {n}");
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_serialization() {
        let mut r = VerificationReport::new("demo");
        r.param("max_degree", 6);
        r.pass("a");
        r.fail("b", "q", "v=|0>");
        r.skip("c", "outside window");
        r.numeric("d", 1e-9, 1e-6);
        assert_eq!(r.counts(), Counts { pass: 2, fail: 1, skipped: 1 });
        assert!(!r.passed());
        let js = serde_json::to_string(&r).unwrap();
        assert!(js.contains("\"FAIL\""));
        let back: VerificationReport = serde_json::from_str(&js).unwrap();
        assert_eq!(back, r);
        assert!(r.to_text().contains("[FAIL] b"));
    }
}
