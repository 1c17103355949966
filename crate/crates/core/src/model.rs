//! Model parameters for the biased quantum Rabi model.
//!
//! Two equivalent forms are supported. The *biased* form
//!
//! ```text
//! H_B = ω a†a + g σx (a + a†) + Δ σz + ε' σx
//! ```
//!
//! and the *rotated* form obtained by the spin rotation `exp(iπσy/4)`,
//!
//! ```text
//! H = ω a†a − (Ω/2) σx + (ε/2) σz + g σz (a† + a)
//! ```
//!
//! with `Ω = 2Δ` and `ε = 2ε'`. Every solver in this crate works with the
//! rotated form, [`ModelParams`].

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Parameters of the rotated Hamiltonian. Energies carry the unit of `omega`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawModelParams", into = "RawModelParams")]
pub struct ModelParams {
    omega: f64,
    big_omega: f64,
    epsilon: f64,
    g: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModelParams {
    omega: f64,
    #[serde(rename = "Omega")]
    big_omega: f64,
    epsilon: f64,
    g: f64,
}

impl TryFrom<RawModelParams> for ModelParams {
    type Error = crate::Error;

    fn try_from(raw: RawModelParams) -> Result<Self> {
        ModelParams::new(raw.omega, raw.big_omega, raw.epsilon, raw.g)
    }
}

impl From<ModelParams> for RawModelParams {
    fn from(p: ModelParams) -> Self {
        RawModelParams {
            omega: p.omega,
            big_omega: p.big_omega,
            epsilon: p.epsilon,
            g: p.g,
        }
    }
}

fn check_finite(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(invalid(name, format!("must be finite, got {v}")))
    }
}

impl ModelParams {
    /// `omega` must be positive and every field finite. `epsilon` may have
    /// either sign; `big_omega` and `g` must be non-negative.
    pub fn new(omega: f64, big_omega: f64, epsilon: f64, g: f64) -> Result<Self> {
        check_finite("omega", omega)?;
        check_finite("Omega", big_omega)?;
        check_finite("epsilon", epsilon)?;
        check_finite("g", g)?;
        if omega <= 0.0 {
            return Err(invalid("omega", format!("must be > 0, got {omega}")));
        }
        if big_omega < 0.0 {
            return Err(invalid("Omega", format!("must be >= 0, got {big_omega}")));
        }
        if g < 0.0 {
            return Err(invalid("g", format!("must be >= 0, got {g}")));
        }
        Ok(ModelParams {
            omega,
            big_omega,
            epsilon,
            g,
        })
    }

    /// Oscillator frequency ω.
    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Two-level splitting Ω.
    pub fn big_omega(&self) -> f64 {
        self.big_omega
    }

    /// Bias ε.
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Coupling strength g.
    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn with_omega(self, omega: f64) -> Result<Self> {
        Self::new(omega, self.big_omega, self.epsilon, self.g)
    }

    pub fn with_big_omega(self, big_omega: f64) -> Result<Self> {
        Self::new(self.omega, big_omega, self.epsilon, self.g)
    }

    pub fn with_epsilon(self, epsilon: f64) -> Result<Self> {
        Self::new(self.omega, self.big_omega, epsilon, self.g)
    }

    pub fn with_g(self, g: f64) -> Result<Self> {
        Self::new(self.omega, self.big_omega, self.epsilon, g)
    }

    /// Inverse of [`BiasedParams::to_rotated`].
    pub fn to_biased(&self) -> BiasedParams {
        BiasedParams {
            omega: self.omega,
            delta: 0.5 * self.big_omega,
            epsilon_prime: 0.5 * self.epsilon,
            g: self.g,
        }
    }
}

/// Parameters of the untransformed (biased) Hamiltonian.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BiasedParams {
    omega: f64,
    delta: f64,
    epsilon_prime: f64,
    g: f64,
}

impl BiasedParams {
    pub fn new(omega: f64, delta: f64, epsilon_prime: f64, g: f64) -> Result<Self> {
        // Same constraints as the rotated form, expressed through the map.
        ModelParams::new(omega, 2.0 * delta, 2.0 * epsilon_prime, g).map_err(|e| match e {
            crate::Error::InvalidParameter { name, reason } => {
                let name = match name {
                    "Omega" => "Delta",
                    "epsilon" => "epsilon_prime",
                    other => other,
                };
                invalid(name, reason)
            }
            other => other,
        })?;
        Ok(BiasedParams {
            omega,
            delta,
            epsilon_prime,
            g,
        })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Half-splitting Δ.
    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Bias ε'.
    pub fn epsilon_prime(&self) -> f64 {
        self.epsilon_prime
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    /// Maps to the rotated form: `Ω = 2Δ`, `ε = 2ε'`.
    pub fn to_rotated(&self) -> ModelParams {
        ModelParams {
            omega: self.omega,
            big_omega: 2.0 * self.delta,
            epsilon: 2.0 * self.epsilon_prime,
            g: self.g,
        }
    }
}

impl From<BiasedParams> for ModelParams {
    fn from(p: BiasedParams) -> Self {
        p.to_rotated()
    }
}

impl From<ModelParams> for BiasedParams {
    fn from(p: ModelParams) -> Self {
        p.to_biased()
    }
}
