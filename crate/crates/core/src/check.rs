//! Records produced by every verified identity or inequality.

use serde::{Serialize, Serializer};

/// How `abs_discrepancy` is interpreted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    /// `abs_discrepancy = |lhs − rhs|`, pass iff it is at most `tolerance`.
    Equality,
    /// `abs_discrepancy` holds the worst slack (negative means violated),
    /// pass iff `slack ≥ −tolerance`.
    Inequality,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub paper_anchor: String,
    #[serde(serialize_with = "finite_or_null")]
    pub lhs: f64,
    #[serde(serialize_with = "finite_or_null")]
    pub rhs: f64,
    #[serde(serialize_with = "finite_or_null")]
    pub abs_discrepancy: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip)]
    pub kind: CheckKind,
}

impl CheckRecord {
    /// Equality check: passes iff `|lhs − rhs| ≤ tolerance`.
    pub fn equality(
        name: impl Into<String>,
        anchor: impl Into<String>,
        lhs: f64,
        rhs: f64,
        tolerance: f64,
    ) -> Self {
        let diff = (lhs - rhs).abs();
        CheckRecord {
            name: name.into(),
            paper_anchor: anchor.into(),
            lhs,
            rhs,
            abs_discrepancy: diff,
            tolerance,
            // NaN compares false, so a non-finite side fails.
            pass: diff <= tolerance,
            error: None,
            kind: CheckKind::Equality,
        }
    }

    /// Inequality check with a precomputed worst slack.
    pub fn inequality(
        name: impl Into<String>,
        anchor: impl Into<String>,
        lhs: f64,
        rhs: f64,
        worst_slack: f64,
        tolerance: f64,
    ) -> Self {
        CheckRecord {
            name: name.into(),
            paper_anchor: anchor.into(),
            lhs,
            rhs,
            abs_discrepancy: worst_slack,
            tolerance,
            pass: worst_slack >= -tolerance,
            error: None,
            kind: CheckKind::Inequality,
        }
    }

    /// A record for a check that could not be evaluated.
    pub fn failed(
        name: impl Into<String>,
        anchor: impl Into<String>,
        tolerance: f64,
        error: impl ToString,
    ) -> Self {
        CheckRecord {
            name: name.into(),
            paper_anchor: anchor.into(),
            lhs: f64::NAN,
            rhs: f64::NAN,
            abs_discrepancy: f64::NAN,
            tolerance,
            pass: false,
            error: Some(error.to_string()),
            kind: CheckKind::Equality,
        }
    }

    /// Marks the record as failed with an explanation, keeping the values.
    pub fn fail_with(mut self, error: impl ToString) -> Self {
        self.pass = false;
        self.error = Some(error.to_string());
        self
    }
}

fn finite_or_null<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else {
        s.serialize_none()
    }
}
