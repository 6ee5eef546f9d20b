//! Uniform pass/fail reports.
//!
//! Every inequality check in the crate returns a [`CheckReport`]: the named
//! inequality, its two sides, the margin, a pass flag, and the provenance of
//! any estimated quantity (exact vs Monte Carlo ± standard error). Optional
//! concentration fields are populated by the harmonic checks.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

/// Provenance of one estimated quantity inside a report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Estimate {
    pub quantity: String,
    /// "exact" or "monte_carlo".
    pub method: String,
    pub value: f64,
    pub std_error: f64,
}

impl Estimate {
    pub fn from_volume(quantity: &str, v: &crate::volumes::VolumeEstimate) -> Estimate {
        Estimate {
            quantity: quantity.to_string(),
            method: match v.method {
                crate::volumes::Method::Exact => "exact".into(),
                crate::volumes::Method::MonteCarlo => "monte_carlo".into(),
            },
            value: v.value,
            std_error: v.std_error,
        }
    }
}

/// Grid metadata carried by concentration-style checks.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridProvenance {
    pub dim: usize,
    pub samples_per_axis: usize,
    pub half_extent: f64,
    /// Estimated boundary-cell quadrature error (L² mass fraction of the
    /// membership fringe, halved).
    pub quadrature_estimate: f64,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct CheckReport {
    pub inequality: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs − rhs`; the pass flag may be computed with a guard band, so the
    /// margin can be slightly negative on a passing stochastic check.
    pub margin: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon_star: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta_star: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_n: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridProvenance>,
    #[serde(default, skip_serializing_if = "Map::is_empty")]
    pub parameters: Map<String, Value>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub provenance: Vec<Estimate>,
    /// "vacuous", "inapplicable: …", etc.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<String>,
}

impl CheckReport {
    pub fn new(inequality: &str, lhs: f64, rhs: f64, pass: bool) -> CheckReport {
        CheckReport {
            inequality: inequality.to_string(),
            lhs,
            rhs,
            margin: lhs - rhs,
            pass,
            ..CheckReport::default()
        }
    }

    pub fn set_param(&mut self, key: &str, value: impl Serialize) {
        self.parameters.insert(
            key.to_string(),
            serde_json::to_value(value).expect("parameter serializes"),
        );
    }

    pub fn is_inapplicable(&self) -> bool {
        self.flags.iter().any(|f| f.starts_with("inapplicable"))
    }

    /// One-line rendering for check listings.
    pub fn summary_line(&self) -> String {
        format!(
            "{} {}: lhs={:.9} rhs={:.9} margin={:+.3e}{}",
            if self.pass { "PASS" } else { "FAIL" },
            self.inequality,
            self.lhs,
            self.rhs,
            self.margin,
            if self.flags.is_empty() {
                String::new()
            } else {
                format!(" [{}]", self.flags.join(", "))
            }
        )
    }
}
