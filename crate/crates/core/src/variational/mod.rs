//! Single-coherent-state variational ground state.
//!
//! The trial state is
//!
//! ```text
//! |φ(λ, θ)⟩ = cos(θ/2) |−z, λ⟩ + sin(θ/2) |+z, −λ⟩
//! ```
//!
//! where `|±λ⟩` are coherent states. Optimizing `θ` analytically leaves the
//! energy functional
//!
//! ```text
//! E₀(λ) = ωλ² − 2gλ − ½√(ε² + Ω² e^{−4λ²})
//! ```
//!
//! which is minimized over the displacement `λ`. The same value is the lower
//! eigenvalue of the `n = 0` block in [`crate::subspace`]. Fixing `λ = g/ω`
//! instead of minimizing gives the GRWA ground state.

pub mod minimize;

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::regime::{classify_regime, RegimeDiagnostic};
use crate::subspace::{build_subspace, diagonalize_subspace, SubspaceEigen};
use minimize::{global_minimum, Smooth1D};

/// How the displacement `λ` of a [`VariationalSolution`] was chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Global minimum of `E₀(λ)`.
    NumericMin,
    /// Small-coupling substitution formula.
    FixedPoint,
    /// `λ = g/ω`.
    Grwa,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::NumericMin => "numeric-min",
            Method::FixedPoint => "fixed-point",
            Method::Grwa => "grwa",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Ground-state expectation values.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Observables {
    /// `⟨a†a⟩`
    pub mean_photon: f64,
    /// `⟨σz (a† + a)⟩`
    pub sz_correlation: f64,
    /// `⟨σx⟩`
    pub sigma_x: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VariationalSolution {
    pub params: ModelParams,
    pub method: Method,
    pub lambda: f64,
    /// Spin-mixing angle in `[0, π]`.
    pub theta: f64,
    pub energy: f64,
    /// `cos(θ/2)`, amplitude of `|−z, λ⟩`.
    pub alpha: f64,
    /// `sin(θ/2)`, amplitude of `|+z, −λ⟩`.
    pub beta: f64,
    pub observables: Observables,
    /// `|∂E₀/∂λ|` at the returned `lambda`.
    pub gradient_residual: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MinimizerOptions {
    /// Target for `|∂E₀/∂λ|`, in units of ω.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for MinimizerOptions {
    fn default() -> Self {
        MinimizerOptions {
            tol: 1e-10,
            max_iter: 200,
        }
    }
}

/// `Ω e^{−2λ²}`, the spin-flip amplitude between the two displaced branches.
fn dressed_splitting(p: &ModelParams, lambda: f64) -> f64 {
    p.big_omega() * (-2.0 * lambda * lambda).exp()
}

/// `E₀(λ) = ωλ² − 2gλ − ½√(ε² + Ω² e^{−4λ²})`.
pub fn energy_functional(p: &ModelParams, lambda: f64) -> f64 {
    let oscillator = p.omega() * lambda * lambda - 2.0 * p.g() * lambda;
    oscillator - 0.5 * p.epsilon().hypot(dressed_splitting(p, lambda))
}

/// `∂E₀/∂λ = 2ωλ − 2g + 2λ Ω² e^{−4λ²} / √(ε² + Ω² e^{−4λ²})`.
pub fn energy_gradient(p: &ModelParams, lambda: f64) -> f64 {
    2.0 * p.omega() * lambda - 2.0 * p.g() + 2.0 * lambda * spin_stiffness(p, lambda)
}

/// `∂²E₀/∂λ²`.
pub fn energy_curvature(p: &ModelParams, lambda: f64) -> f64 {
    let w = dressed_splitting(p, lambda);
    let root = p.epsilon().hypot(w);
    if root == 0.0 {
        return 2.0 * p.omega();
    }
    // u = w², S = ε² + u: d/dλ [λ u / √S] = u/√S − 8λ²u/√S + 4λ²u²/S^{3/2}
    let u_over_root = w * (w / root);
    let l2 = lambda * lambda;
    let last = 4.0 * l2 * u_over_root * (w / root) * (w / root);
    2.0 * p.omega() + 2.0 * (u_over_root - 8.0 * l2 * u_over_root + last)
}

/// `Ω² e^{−4λ²} / √(ε² + Ω² e^{−4λ²})`, zero when both terms vanish.
fn spin_stiffness(p: &ModelParams, lambda: f64) -> f64 {
    let w = dressed_splitting(p, lambda);
    let root = p.epsilon().hypot(w);
    if root == 0.0 {
        0.0
    } else {
        w * (w / root)
    }
}

/// Optimal spin angle: `sin θ ∝ Ω e^{−2λ²}`, `cos θ ∝ ε`.
fn optimal_theta(p: &ModelParams, lambda: f64) -> f64 {
    let w = dressed_splitting(p, lambda);
    if w == 0.0 && p.epsilon() == 0.0 {
        // Degenerate spin; take the unbiased value.
        FRAC_PI_2
    } else {
        w.atan2(p.epsilon())
    }
}

fn observables_at(p: &ModelParams, lambda: f64) -> Observables {
    let w = dressed_splitting(p, lambda);
    let root = p.epsilon().hypot(w);
    let sigma_x = if root == 0.0 {
        0.0
    } else {
        (-2.0 * lambda * lambda).exp() * (w / root)
    };
    Observables {
        mean_photon: lambda * lambda,
        sz_correlation: -2.0 * lambda,
        sigma_x,
    }
}

/// Closed-form observables of a solution, recomputed from its `lambda`.
pub fn observables(sol: &VariationalSolution) -> Observables {
    observables_at(&sol.params, sol.lambda)
}

/// Builds the full solution record for a chosen displacement.
pub fn solution_at(p: &ModelParams, lambda: f64, method: Method) -> VariationalSolution {
    let theta = optimal_theta(p, lambda);
    let (alpha, beta) = if theta == FRAC_PI_2 {
        (
            std::f64::consts::FRAC_1_SQRT_2,
            std::f64::consts::FRAC_1_SQRT_2,
        )
    } else {
        ((0.5 * theta).cos(), (0.5 * theta).sin())
    };
    VariationalSolution {
        params: *p,
        method,
        lambda,
        theta,
        energy: energy_functional(p, lambda),
        alpha,
        beta,
        observables: observables_at(p, lambda),
        gradient_residual: energy_gradient(p, lambda).abs(),
    }
}

struct Functional<'a>(&'a ModelParams);

impl Smooth1D for Functional<'_> {
    fn value(&self, x: f64) -> f64 {
        energy_functional(self.0, x)
    }
    fn slope(&self, x: f64) -> f64 {
        energy_gradient(self.0, x)
    }
    fn curvature(&self, x: f64) -> f64 {
        energy_curvature(self.0, x)
    }
}

/// Search interval for the optimal displacement.
///
/// `∂E₀/∂λ = −2g` at `λ = 0` and is non-negative at `λ = g/ω` (positive for
/// `Ω > 0`), so the global minimum over `λ ≥ 0` lies in `[0, g/ω]`. The small
/// margin keeps the `Ω = 0` root, which sits exactly at `g/ω`, interior.
pub fn lambda_bracket(p: &ModelParams) -> (f64, f64) {
    let grwa = p.g() / p.omega();
    (0.0, grwa + 1e-8 * (1.0 + grwa))
}

/// Minimizes `E₀(λ)` numerically.
pub fn solve_numeric(p: &ModelParams, opts: MinimizerOptions) -> Result<VariationalSolution> {
    if !(opts.tol > 0.0) {
        return Err(crate::error::invalid(
            "tol",
            format!("must be > 0, got {}", opts.tol),
        ));
    }
    if p.g() == 0.0 {
        return Ok(solution_at(p, 0.0, Method::NumericMin));
    }
    let (lo, hi) = lambda_bracket(p);
    let min = global_minimum(&Functional(p), lo, hi, opts.tol, opts.max_iter)?;
    let sol = solution_at(p, min.x, Method::NumericMin);
    if sol.gradient_residual > opts.tol {
        return Err(Error::MinimizerNotConverged {
            iterations: min.iterations,
            best_lambda: sol.lambda,
            best_energy: sol.energy,
            gradient_residual: sol.gradient_residual,
        });
    }
    Ok(sol)
}

/// `g / (ω + Ω² e^{−4λ²} / √(Ω² e^{−4λ²} + ε²))`: one substitution step of
/// the stationarity condition `∂E₀/∂λ = 0` rearranged for `λ`.
pub fn fixed_point_step(p: &ModelParams, lambda: f64) -> f64 {
    p.g() / (p.omega() + spin_stiffness(p, lambda))
}

/// Small-coupling displacement `λ₀ = g / (ω + Ω²/√(Ω² + ε²))`.
pub fn lambda_small_coupling(p: &ModelParams) -> f64 {
    fixed_point_step(p, 0.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub enum FixedPointMode {
    /// One substitution starting from `λ₀`.
    #[default]
    Single,
    /// Substitute until successive iterates differ by at most `tol`.
    Iterate { tol: f64, max_iter: usize },
}

impl FixedPointMode {
    pub fn iterate() -> Self {
        FixedPointMode::Iterate {
            tol: 1e-12,
            max_iter: 100,
        }
    }
}

/// Fixed-point approximation with one substitution from `λ₀`.
pub fn solve_fixed_point(p: &ModelParams) -> VariationalSolution {
    let lambda = fixed_point_step(p, lambda_small_coupling(p));
    solution_at(p, lambda, Method::FixedPoint)
}

pub fn solve_fixed_point_with(
    p: &ModelParams,
    mode: FixedPointMode,
) -> Result<VariationalSolution> {
    match mode {
        FixedPointMode::Single => Ok(solve_fixed_point(p)),
        FixedPointMode::Iterate { tol, max_iter } => {
            let mut lambda = lambda_small_coupling(p);
            for _ in 0..max_iter {
                let next = fixed_point_step(p, lambda);
                let done = (next - lambda).abs() <= tol;
                lambda = next;
                if done {
                    return Ok(solution_at(p, lambda, Method::FixedPoint));
                }
            }
            Err(Error::MinimizerNotConverged {
                iterations: max_iter,
                best_lambda: lambda,
                best_energy: energy_functional(p, lambda),
                gradient_residual: energy_gradient(p, lambda).abs(),
            })
        }
    }
}

/// GRWA ground state: the same functional at `λ = g/ω`.
pub fn solve_grwa(p: &ModelParams) -> VariationalSolution {
    solution_at(p, p.g() / p.omega(), Method::Grwa)
}

/// GRWA level ladder `E_n^±` for `n = 0..=n_max`.
pub fn grwa_spectrum(p: &ModelParams, n_max: u64) -> Result<Vec<SubspaceEigen>> {
    let lambda = p.g() / p.omega();
    (0..=n_max)
        .map(|n| build_subspace(p, n, lambda).map(|m| diagonalize_subspace(&m)))
        .collect()
}

/// Regime diagnostic for a solution's parameters.
pub fn regime(sol: &VariationalSolution) -> RegimeDiagnostic {
    classify_regime(&sol.params)
}
