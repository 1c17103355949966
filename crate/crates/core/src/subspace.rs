//! Two-level blocks of the displaced effective Hamiltonian.
//!
//! After the spin-conditioned displacement `exp[λσz(a† − a)]` and dropping
//! terms that change the photon number, the Hamiltonian splits into 2×2
//! blocks on `{|−z⟩⊗|n⟩, |+z⟩⊗|n⟩}`:
//!
//! ```text
//! ⎡ ξ⁻  R ⎤    ξ± = ωn ± ε/2 + ωλ² − 2gλ
//! ⎣ R  ξ⁺ ⎦    R  = −(Ω/2) F_0(n; 2λ)
//! ```
//!
//! Components are always ordered `(−z, +z)`.

use crate::error::Result;
use crate::model::ModelParams;
use crate::special::f_0;

/// One 2×2 block for Fock level `n` at displacement `lambda`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SubspaceMatrix {
    pub n: u64,
    pub lambda: f64,
    pub xi_minus: f64,
    pub xi_plus: f64,
    pub r_n: f64,
}

/// Eigen-decomposition of a [`SubspaceMatrix`].
///
/// `(alpha_minus, beta_minus)` belongs to `e_minus` and
/// `(alpha_plus, beta_plus)` to `e_plus`; `alpha` is the `−z` amplitude.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SubspaceEigen {
    pub e_minus: f64,
    pub e_plus: f64,
    pub alpha_minus: f64,
    pub beta_minus: f64,
    pub alpha_plus: f64,
    pub beta_plus: f64,
}

impl SubspaceEigen {
    pub fn lower_vector(&self) -> [f64; 2] {
        [self.alpha_minus, self.beta_minus]
    }

    pub fn upper_vector(&self) -> [f64; 2] {
        [self.alpha_plus, self.beta_plus]
    }
}

impl SubspaceMatrix {
    pub fn as_array(&self) -> [[f64; 2]; 2] {
        [[self.xi_minus, self.r_n], [self.r_n, self.xi_plus]]
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.xi_minus
            .abs()
            .max(self.xi_plus.abs())
            .max(self.r_n.abs())
    }
}

/// Builds the block for level `n` at displacement `lambda`.
///
/// The spin-flip term is `−(Ω/2) cosh[2λ(a† − a)]`, so `F_0` is evaluated at
/// argument `2λ`.
pub fn build_subspace(p: &ModelParams, n: u64, lambda: f64) -> Result<SubspaceMatrix> {
    let shift = p.omega() * lambda * lambda - 2.0 * p.g() * lambda;
    let base = p.omega() * n as f64 + shift;
    let half_bias = 0.5 * p.epsilon();
    let r_n = -0.5 * p.big_omega() * f_0(n, 2.0 * lambda)?;
    Ok(SubspaceMatrix {
        n,
        lambda,
        xi_minus: base - half_bias,
        xi_plus: base + half_bias,
        r_n,
    })
}

/// Relative gap below which the block is treated as degenerate.
const DEGENERATE_GAP: f64 = 1e-14;

/// Closed-form eigenpairs of a block.
///
/// Eigenvector magnitudes follow `|α∓|² = ½(1 ∓ d/s)`, `|β∓|² = ½(1 ± d/s)`
/// with `d = ξ⁻ − ξ⁺` and `s = √(d² + 4R²)`. Both `β` are non-negative; the
/// sign of `α∓` is fixed by the sign of `R` so that each pair is an actual
/// eigenvector (for `R ≤ 0` the lower eigenvector has `α, β ≥ 0`).
pub fn diagonalize_subspace(m: &SubspaceMatrix) -> SubspaceEigen {
    let d = m.xi_minus - m.xi_plus;
    let mean = 0.5 * (m.xi_minus + m.xi_plus);
    let s = d.hypot(2.0 * m.r_n);
    let scale = 1f64.max(m.xi_minus.abs()).max(m.xi_plus.abs());

    if s <= DEGENERATE_GAP * scale {
        return SubspaceEigen {
            e_minus: mean,
            e_plus: mean,
            alpha_minus: 1.0,
            beta_minus: 0.0,
            alpha_plus: 0.0,
            beta_plus: 1.0,
        };
    }

    // s ± |d| without cancellation: (s − |d|)(s + |d|) = 4R².
    let big = s + d.abs();
    let small = 4.0 * m.r_n * m.r_n / big;
    let (s_minus_d, s_plus_d) = if d >= 0.0 { (small, big) } else { (big, small) };
    let a = (s_minus_d / (2.0 * s)).sqrt(); // √(½(1 − d/s))
    let b = (s_plus_d / (2.0 * s)).sqrt(); // √(½(1 + d/s))

    let half = 0.5 * s;
    let sign = if m.r_n > 0.0 { 1.0 } else { -1.0 };
    SubspaceEigen {
        e_minus: mean - half,
        e_plus: mean + half,
        alpha_minus: -sign * a,
        beta_minus: b,
        alpha_plus: sign * b,
        beta_plus: a,
    }
}
