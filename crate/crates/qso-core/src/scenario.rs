//! Scenario files: a coefficient matrix plus an initial state, as JSON.
//!
//! The on-disk shape is
//!
//! ```json
//! {
//!   "name": "two-locus-diagonal",
//!   "a": [[0.0, 0.5], [0.5, 0.0]],
//!   "x0": [0.5, 0.0, 0.0, 0.5]
//! }
//! ```
//!
//! with `name` optional and `A` accepted as an alias for `a`.  A file may
//! hold either a single scenario object or an array of them; [`load_scenarios`]
//! accepts both.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::coeffs::CoefficientMatrix;
use crate::error::QsoError;
use crate::simplex::SimplexPoint;

/// One scenario as it appears on disk, before numeric validation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    /// Optional label carried through to reports.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    /// The coefficient matrix, row-major.
    #[serde(alias = "A")]
    pub a: Vec<Vec<f64>>,
    /// The initial state on the simplex.
    pub x0: Vec<f64>,
}

impl Scenario {
    /// Validate the raw fields into typed inputs for the dynamics.
    pub fn build(&self) -> Result<(CoefficientMatrix, SimplexPoint), QsoError> {
        let a = CoefficientMatrix::new(self.a.clone())?;
        let x0 = SimplexPoint::new(self.x0.clone())?;
        if x0.m() != a.m() {
            return Err(QsoError::DimensionMismatch { expected: a.m(), got: x0.m() });
        }
        Ok((a, x0))
    }

    /// Parse one scenario from a JSON string.
    pub fn from_json_str(s: &str) -> Result<Self, QsoError> {
        serde_json::from_str(s).map_err(|e| QsoError::InvalidScenario(e.to_string()))
    }

    /// The label used in reports: the `name` field, or `<unnamed>`.
    pub fn label(&self) -> &str {
        self.name.as_deref().unwrap_or("<unnamed>")
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(Box<Scenario>),
    Many(Vec<Scenario>),
}

/// Load a scenario file holding either one scenario or an array of them.
pub fn load_scenarios(path: &Path) -> Result<Vec<Scenario>, QsoError> {
    let text = fs::read_to_string(path)
        .map_err(|e| QsoError::InvalidScenario(format!("{}: {e}", path.display())))?;
    parse_scenarios(&text)
}

/// Parse scenario JSON holding either one scenario or an array of them.
pub fn parse_scenarios(text: &str) -> Result<Vec<Scenario>, QsoError> {
    match serde_json::from_str::<OneOrMany>(text) {
        Ok(OneOrMany::One(s)) => Ok(vec![*s]),
        Ok(OneOrMany::Many(v)) if !v.is_empty() => Ok(v),
        Ok(OneOrMany::Many(_)) => {
            Err(QsoError::InvalidScenario("empty scenario array".into()))
        }
        Err(e) => Err(QsoError::InvalidScenario(e.to_string())),
    }
}
