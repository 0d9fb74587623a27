use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Particle mass in natural units (ħ = c = 1). Lengths and times are
/// measured in units of 1/m.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    mass: f64,
}

impl ModelParams {
    pub fn new(mass: f64) -> Result<Self> {
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::Domain(format!("mass must be positive, got {mass}")));
        }
        Ok(Self { mass })
    }

    pub const fn unit() -> Self {
        Self { mass: 1.0 }
    }

    #[inline]
    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Energy E = sqrt(p² + m²) for momentum magnitude `p`.
    #[inline]
    pub fn energy(&self, p: f64) -> f64 {
        p.hypot(self.mass)
    }
}

impl Default for ModelParams {
    fn default() -> Self {
        Self::unit()
    }
}

/// Energy sign ξ labelling the two components of a physical state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    #[inline]
    pub fn value(self) -> f64 {
        match self {
            Sign::Positive => 1.0,
            Sign::Negative => -1.0,
        }
    }

    /// Component index: ξ = + is the first component.
    #[inline]
    pub fn index(self) -> usize {
        match self {
            Sign::Positive => 0,
            Sign::Negative => 1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }

    pub const BOTH: [Sign; 2] = [Sign::Positive, Sign::Negative];
}
