//! Verification reports and the fixed-precision number format used in every
//! JSON and CSV document.

use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

/// A float written with 17 significant digits (`-1.2345678901234567e-3`).
/// Non-finite values serialize as `null`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Real(pub f64);

pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = RawValue::from_string(format_real(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

impl From<f64> for Real {
    fn from(x: f64) -> Self {
        Real(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    Assert,
    Info,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum CheckValue {
    Scalar(Real),
    List(Vec<Real>),
}

impl From<f64> for CheckValue {
    fn from(x: f64) -> Self {
        CheckValue::Scalar(Real(x))
    }
}

impl From<Vec<f64>> for CheckValue {
    fn from(xs: Vec<f64>) -> Self {
        CheckValue::List(xs.into_iter().map(Real).collect())
    }
}

/// One named entry of a verification report. `pass` is `None` for
/// informational entries.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub kind: CheckKind,
    pub value: CheckValue,
    pub tol: Option<Real>,
    pub pass: Option<bool>,
}

impl CheckOutcome {
    /// Passes when `value <= tol`.
    pub fn at_most(name: impl Into<String>, value: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            kind: CheckKind::Assert,
            value: value.into(),
            tol: Some(Real(tol)),
            pass: Some(value <= tol),
        }
    }

    pub fn info(name: impl Into<String>, value: impl Into<CheckValue>) -> Self {
        Self {
            name: name.into(),
            kind: CheckKind::Info,
            value: value.into(),
            tol: None,
            pass: None,
        }
    }

    pub fn failed(&self) -> bool {
        self.kind == CheckKind::Assert && self.pass != Some(true)
    }

    fn value_text(&self) -> String {
        match &self.value {
            CheckValue::Scalar(r) => format!("{:.6e}", r.0),
            CheckValue::List(xs) => {
                let items: Vec<String> = xs.iter().map(|r| format!("{:.6e}", r.0)).collect();
                format!("[{}]", items.join(", "))
            }
        }
    }
}

/// Renders checks as a fixed-width table.
pub fn checks_table(checks: &[CheckOutcome]) -> String {
    let width = checks
        .iter()
        .map(|c| c.name.len())
        .max()
        .unwrap_or(4)
        .max(4);
    let mut out = format!(
        "{:<width$}  {:<6}  {:<6}  {:<14}  value\n",
        "name", "kind", "status", "tol"
    );
    for c in checks {
        let kind = match c.kind {
            CheckKind::Assert => "assert",
            CheckKind::Info => "info",
        };
        let status = match c.pass {
            Some(true) => "PASS",
            Some(false) => "FAIL",
            None => "-",
        };
        let tol = c
            .tol
            .map(|t| format!("{:.3e}", t.0))
            .unwrap_or_else(|| "-".into());
        out.push_str(&format!(
            "{:<width$}  {:<6}  {:<6}  {:<14}  {}\n",
            c.name,
            kind,
            status,
            tol,
            c.value_text()
        ));
    }
    out
}
