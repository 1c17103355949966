//! Applicability regimes of the single-coherent-state ansatz.
//!
//! When `Ω/ω` is small the spin splitting is perturbative and both the
//! variational and GRWA states are reliable. For `Ω > ω` the relevant
//! coupling scale is `√(ωΩ)`: well above it the displaced oscillator
//! dominates (GRWA works again), well below it the optimized displacement is
//! needed, and in between the true ground state mixes several coherent-state
//! components so neither approximation is reliable.
//!
//! The crossover factors below are heuristics; only the scale is physical.

use serde::Serialize;

use crate::model::ModelParams;

/// `g ≥ CASE_I_FACTOR · √(ωΩ)` is the displaced-oscillator regime.
pub const CASE_I_FACTOR: f64 = 2.0;
/// `g ≤ CASE_II_FACTOR · √(ωΩ)` is the small-coupling regime.
pub const CASE_II_FACTOR: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum RegimeCase {
    /// Large coupling: displaced oscillator dominates.
    #[serde(rename = "I")]
    LargeCoupling,
    /// Small coupling (or weak splitting): optimized displacement is accurate.
    #[serde(rename = "II")]
    SmallCoupling,
    /// Intermediate coupling: the single-coherent-state ansatz is unreliable.
    #[serde(rename = "III")]
    Intermediate,
}

impl RegimeCase {
    pub fn label(self) -> &'static str {
        match self {
            RegimeCase::LargeCoupling => "I",
            RegimeCase::SmallCoupling => "II",
            RegimeCase::Intermediate => "III",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegimeDiagnostic {
    #[serde(rename = "case")]
    pub case_label: RegimeCase,
    /// `Ω/ω`
    pub ratio_omega: f64,
    /// `g/√(ωΩ)`; `None` when `Ω = 0`.
    pub ratio_g_scale: Option<f64>,
    pub advisory: &'static str,
}

pub fn classify_regime(p: &ModelParams) -> RegimeDiagnostic {
    let ratio_omega = p.big_omega() / p.omega();
    let scale = (p.omega() * p.big_omega()).sqrt();
    let ratio_g_scale = (scale > 0.0).then(|| p.g() / scale);

    let case_label = match ratio_g_scale {
        _ if ratio_omega <= 1.0 => RegimeCase::SmallCoupling,
        Some(r) if r >= CASE_I_FACTOR => RegimeCase::LargeCoupling,
        Some(r) if r <= CASE_II_FACTOR => RegimeCase::SmallCoupling,
        _ => RegimeCase::Intermediate,
    };
    let advisory = match case_label {
        RegimeCase::LargeCoupling => {
            "large coupling: displaced oscillator dominates; variational and GRWA both reliable"
        }
        RegimeCase::SmallCoupling if ratio_omega <= 1.0 => {
            "weak splitting: variational and GRWA both reliable, variational lower"
        }
        RegimeCase::SmallCoupling => {
            "small coupling: optimized displacement needed; variational reliable, GRWA is not"
        }
        RegimeCase::Intermediate => {
            "intermediate coupling: single coherent-state ansatz unreliable; \
             multi-coherent-state corrections matter"
        }
    };
    RegimeDiagnostic {
        case_label,
        ratio_omega,
        ratio_g_scale,
        advisory,
    }
}
