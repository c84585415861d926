use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Which verifier produced a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    LinearVi,
    Qvi,
    Kakutani,
    LocalMinMax,
    GdaFixedPoint,
    Globalization,
    PolymatrixRegret,
    LinearViPullback,
}

/// How `residual` is compared with `threshold`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sense {
    /// Pass iff `residual ≥ threshold` (VI-type residuals, threshold `−ε`).
    AtLeast,
    /// Pass iff `residual ≤ threshold` (violations, displacements).
    AtMost,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
}

/// Candidate point with its verified residual.
///
/// `passed` combines the residual test with any side conditions (membership,
/// feasibility) recorded in `details`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub method: Method,
    pub point: Vec<f64>,
    pub residual: f64,
    pub threshold: f64,
    pub sense: Sense,
    pub passed: bool,
    pub params: Params,
    /// Resolution error bound of a grid search, when one was used.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_slack: Option<f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Certificate {
    pub fn new(method: Method, point: Vec<f64>, residual: f64, threshold: f64, sense: Sense) -> Self {
        let passed = Self::compare(residual, threshold, sense);
        Certificate {
            method,
            point,
            residual,
            threshold,
            sense,
            passed,
            params: Params::default(),
            grid_slack: None,
            details: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    fn compare(residual: f64, threshold: f64, sense: Sense) -> bool {
        match sense {
            Sense::AtLeast => residual >= threshold,
            Sense::AtMost => residual <= threshold,
        }
    }

    pub fn residual_passes(&self) -> bool {
        Self::compare(self.residual, self.threshold, self.sense)
    }

    pub fn with_params(mut self, params: Params) -> Self {
        self.params = params;
        self
    }

    pub fn with_detail(mut self, key: &str, value: f64) -> Self {
        self.details.insert(key.to_string(), value);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    /// Adds a side condition; a failing one fails the certificate.
    pub fn require(mut self, condition: bool, note: &str) -> Self {
        if !condition {
            self.passed = false;
            self.notes.push(note.to_string());
        }
        self
    }
}
