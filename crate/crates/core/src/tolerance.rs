//! Numerical tolerances.
//!
//! Every threshold the engine checks against lives here. The constants are
//! the defaults; [`Tolerances`] carries a mutable copy that the command-line
//! front end can override by name (`--tol star=1e-9`).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative skew-Hermitian residual admitted by [`crate::cmat::SkewHermitian`].
pub const SKEW: f64 = 1e-12;
/// ‖U*U − I‖_F admitted by [`crate::cmat::Unitary`].
pub const UNITARY: f64 = 1e-10;
/// Smallest singular value below which a matrix counts as rank deficient.
pub const RANK: f64 = 1e-12;
/// 𝔥-block norm below which a matrix is accepted as an element of 𝔪.
pub const UNHAT: f64 = 1e-10;
/// Scalar-Gram test for X*X = λI, X*Y = μI and Y*Y = ηI.
pub const STAR: f64 = 1e-10;
/// Relative least-squares residual for the J-invariance test.
pub const J_INVARIANT: f64 = 1e-9;
/// ‖F*F − I‖_F admitted by [`crate::grassmann::StiefelFrame`].
pub const FRAME: f64 = 1e-9;
/// Hermiticity, idempotence and trace tolerance for Grassmann projectors.
pub const PROJECTOR: f64 = 1e-9;
/// Unit-norm tolerance for SU(2) quaternion coordinates.
pub const SU2_NORM: f64 = 1e-12;
/// Closure gap admitted for a loop.
pub const CLOSED: f64 = 1e-9;
/// Mismatch between the initial frame and the path start.
pub const INITIAL_FRAME: f64 = 1e-8;
/// Unitarity of the holonomy displacement.
pub const HOLONOMY_UNITARY: f64 = 1e-8;

/// Tolerance set carried through checks that accept configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub star: f64,
    pub j_invariant: f64,
    pub unhat: f64,
    /// Lemma coefficients vs. the double-bracket oracle (relative).
    pub lemma: f64,
    /// SU(2) model identities.
    pub su2: f64,
    /// |θ − ½A| on complex surfaces, modulo 2π.
    pub phase: f64,
    /// |θ/A − ½| on complex surfaces.
    pub ratio: f64,
    /// ‖V − I‖_F on flat surfaces.
    pub flat: f64,
    /// scalar residual per unit of n on complex surfaces.
    pub scalar: f64,
    /// max orthonormality drift along a lift.
    pub drift: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            star: STAR,
            j_invariant: J_INVARIANT,
            unhat: UNHAT,
            lemma: 1e-10,
            su2: 1e-12,
            phase: 1e-5,
            ratio: 1e-4,
            flat: 1e-7,
            scalar: 1e-6,
            drift: 1e-9,
        }
    }
}

impl Tolerances {
    pub const NAMES: [&'static str; 10] = [
        "star",
        "j_invariant",
        "unhat",
        "lemma",
        "su2",
        "phase",
        "ratio",
        "flat",
        "scalar",
        "drift",
    ];

    fn slot(&mut self, name: &str) -> Option<&mut f64> {
        Some(match name {
            "star" => &mut self.star,
            "j_invariant" | "jinv" => &mut self.j_invariant,
            "unhat" => &mut self.unhat,
            "lemma" => &mut self.lemma,
            "su2" => &mut self.su2,
            "phase" => &mut self.phase,
            "ratio" => &mut self.ratio,
            "flat" => &mut self.flat,
            "scalar" => &mut self.scalar,
            "drift" => &mut self.drift,
            _ => return None,
        })
    }

    /// Applies one override of the form `name=value`.
    pub fn apply(&mut self, ov: &ToleranceOverride) -> Result<()> {
        let slot = self.slot(&ov.name).ok_or_else(|| {
            Error::Input(format!(
                "unknown tolerance '{}' (known: {})",
                ov.name,
                Self::NAMES.join(", ")
            ))
        })?;
        *slot = ov.value;
        Ok(())
    }
}

/// A parsed `name=value` tolerance override.
#[derive(Debug, Clone, PartialEq)]
pub struct ToleranceOverride {
    pub name: String,
    pub value: f64,
}

impl FromStr for ToleranceOverride {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let (name, value) = s
            .split_once('=')
            .ok_or_else(|| format!("expected name=value, got '{s}'"))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|e| format!("bad tolerance value in '{s}': {e}"))?;
        if !(value.is_finite() && value > 0.0) {
            return Err(format!("tolerance must be positive and finite, got '{s}'"));
        }
        Ok(Self {
            name: name.trim().to_string(),
            value,
        })
    }
}

impl fmt::Display for ToleranceOverride {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={:e}", self.name, self.value)
    }
}
