use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical thresholds shared by every decision the library makes.
///
/// The three knobs are independent: `rank_tol` is relative to the largest
/// entry of the matrix being factored, `residual_tol` bounds accepted
/// linear-system and relator residuals, and `root_tol` is the polishing
/// target for polynomial roots.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceContext {
    pub rank_tol: f64,
    pub residual_tol: f64,
    pub root_tol: f64,
}

/// Named tolerance presets, selectable from the CLI or the
/// `KNOTTORSION_TOL_PROFILE` environment variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ToleranceProfile {
    Default,
    Strict,
    Loose,
}

impl ToleranceProfile {
    pub fn parse(name: &str) -> Result<Self> {
        match name.trim().to_ascii_lowercase().as_str() {
            "default" | "" => Ok(Self::Default),
            "strict" => Ok(Self::Strict),
            "loose" => Ok(Self::Loose),
            other => Err(Error::InvalidTolerance(format!(
                "unknown tolerance profile `{other}` (expected default, strict or loose)"
            ))),
        }
    }

    pub fn context(self) -> ToleranceContext {
        match self {
            Self::Default => ToleranceContext::default(),
            Self::Strict => ToleranceContext {
                rank_tol: 1e-11,
                residual_tol: 1e-10,
                root_tol: 1e-14,
            },
            Self::Loose => ToleranceContext {
                rank_tol: 1e-7,
                residual_tol: 1e-6,
                root_tol: 1e-10,
            },
        }
    }
}

impl Default for ToleranceContext {
    fn default() -> Self {
        Self {
            rank_tol: 1e-9,
            residual_tol: 1e-8,
            root_tol: 1e-12,
        }
    }
}

impl ToleranceContext {
    pub fn new(rank_tol: f64, residual_tol: f64, root_tol: f64) -> Result<Self> {
        let tol = Self {
            rank_tol,
            residual_tol,
            root_tol,
        };
        tol.validate()?;
        Ok(tol)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("rank_tol", self.rank_tol),
            ("residual_tol", self.residual_tol),
            ("root_tol", self.root_tol),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidTolerance(format!(
                    "{name} must be finite and strictly positive, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// Threshold used for genericity tests such as `tr != +-2` or `Δ(m²) != 0`.
    pub fn genericity_tol(&self) -> f64 {
        self.residual_tol.sqrt().max(self.residual_tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_positive() {
        assert!(ToleranceContext::new(0.0, 1e-8, 1e-12).is_err());
        assert!(ToleranceContext::new(1e-9, -1.0, 1e-12).is_err());
        assert!(ToleranceContext::new(1e-9, 1e-8, f64::NAN).is_err());
        assert!(ToleranceContext::new(1e-9, 1e-8, 1e-12).is_ok());
    }

    #[test]
    fn profiles() {
        assert_eq!(ToleranceProfile::parse("Strict").unwrap(), ToleranceProfile::Strict);
        assert!(ToleranceProfile::parse("fuzzy").is_err());
        ToleranceProfile::Loose.context().validate().unwrap();
    }
}
