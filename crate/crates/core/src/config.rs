//! Numerical tolerances shared by every module.

use serde::{Deserialize, Serialize};

/// Tolerance record. Every threshold the library uses to turn a floating
/// point quantity into a decision lives here.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Relative threshold below which a leading coefficient is stripped.
    pub strip: f64,
    /// Positivity witness acceptance (relative to the polynomial scale).
    pub pos: f64,
    /// Distance from the imaginary axis treated as marginal.
    pub stab: f64,
    /// Relative cancellation level under which a computed sign is ambiguous.
    pub sign: f64,
    /// Relative residual accepted for an instability witness.
    pub res: f64,
    /// Allowed disagreement between the two lambda back-solves of a crossing.
    pub lambda: f64,
    /// Tangency residual for the ellipse family.
    pub tan: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            strip: 1e-12,
            pos: 1e-9,
            stab: 1e-9,
            sign: 1e-10,
            res: 1e-8,
            lambda: 1e-8,
            tan: 1e-8,
        }
    }
}

impl Tolerances {
    /// Loads overrides from a JSON file; missing fields keep their defaults.
    pub fn from_json_file(path: &std::path::Path) -> Result<Self, crate::Error> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| crate::Error::Input(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| crate::Error::Input(format!("{}: {e}", path.display())))
    }
}
