//! Truncated-basis exact diagonalization of the rotated Hamiltonian
//!
//! ```text
//! H = ω a†a − (Ω/2) σx + (ε/2) σz + g σz (a† + a)
//! ```
//!
//! on `{|±z⟩ ⊗ |n⟩ : n ≤ N}`. Vectors are spin-major: indices `0..=N` hold
//! `|−z⟩⊗|n⟩` and `N+1..=2N+1` hold `|+z⟩⊗|n⟩`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::model::ModelParams;
use crate::variational::Observables;

/// Largest Fock cutoff accepted by [`assemble_hamiltonian`].
pub const MAX_CUTOFF: usize = 4096;

/// Upper bound on the probability carried by the top tenth of the Fock
/// levels for a solution to count as converged.
pub const TAIL_MASS_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TruncationPolicy {
    pub n_start: usize,
    pub n_max: usize,
    pub growth: f64,
    /// Convergence threshold on the ground energy between successive cutoffs.
    pub energy_tol: f64,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            n_start: 32,
            n_max: 2048,
            growth: 2.0,
            energy_tol: 1e-10,
        }
    }
}

impl TruncationPolicy {
    pub fn validate(&self) -> Result<()> {
        if self.n_start < 4 {
            return Err(invalid(
                "n_start",
                format!("must be >= 4, got {}", self.n_start),
            ));
        }
        if self.n_max < self.n_start {
            return Err(invalid(
                "n_max",
                format!("must be >= n_start ({}), got {}", self.n_start, self.n_max),
            ));
        }
        if self.n_max > MAX_CUTOFF {
            return Err(invalid(
                "n_max",
                format!("must be <= {MAX_CUTOFF}, got {}", self.n_max),
            ));
        }
        if !(self.growth >= 1.5) || !self.growth.is_finite() {
            return Err(invalid(
                "growth",
                format!("must be >= 1.5, got {}", self.growth),
            ));
        }
        if !(self.energy_tol > 0.0) {
            return Err(invalid(
                "energy_tol",
                format!("must be > 0, got {}", self.energy_tol),
            ));
        }
        Ok(())
    }

    fn next_cutoff(&self, n: usize) -> usize {
        let grown = (n as f64 * self.growth).ceil() as usize;
        grown.max(n + 1).min(self.n_max)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExactSolution {
    pub params: ModelParams,
    pub energy: f64,
    /// Ground-state amplitudes, length `2(n_used + 1)`, spin-major.
    #[serde(skip)]
    pub vector: Vec<f64>,
    pub n_used: usize,
    pub observables: Observables,
    /// `⟨σz⟩`
    pub sigma_z: f64,
    /// Probability on the top tenth of the Fock levels.
    pub tail_mass: f64,
    /// `(cutoff, ground energy)` for every cutoff tried.
    pub convergence_history: Vec<(usize, f64)>,
}

/// Dense Hamiltonian at Fock cutoff `cutoff` (dimension `2(cutoff + 1)`).
pub fn assemble_hamiltonian(p: &ModelParams, cutoff: usize) -> Result<DMatrix<f64>> {
    if cutoff > MAX_CUTOFF {
        return Err(invalid(
            "cutoff",
            format!("Fock cutoff {cutoff} exceeds the maximum {MAX_CUTOFF}"),
        ));
    }
    let levels = cutoff + 1;
    let dim = 2 * levels;
    let mut h = DMatrix::<f64>::zeros(dim, dim);
    let half_flip = -0.5 * p.big_omega();
    for (spin, sz) in [(0usize, -1.0), (1, 1.0)] {
        let off = spin * levels;
        for n in 0..levels {
            h[(off + n, off + n)] = p.omega() * n as f64 + 0.5 * p.epsilon() * sz;
            if n + 1 < levels {
                let c = sz * p.g() * ((n + 1) as f64).sqrt();
                h[(off + n, off + n + 1)] = c;
                h[(off + n + 1, off + n)] = c;
            }
        }
    }
    for n in 0..levels {
        h[(n, levels + n)] = half_flip;
        h[(levels + n, n)] = half_flip;
    }
    Ok(h)
}

/// Lowest eigenpair of a symmetric matrix. The returned vector is normalized
/// and its largest-magnitude component is positive.
pub fn lowest_eigenpair(h: DMatrix<f64>) -> (f64, DVector<f64>) {
    let eig = SymmetricEigen::new(h);
    let (idx, &energy) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1).then(a.0.cmp(&b.0)))
        .expect("non-empty matrix");
    let mut v = eig.eigenvectors.column(idx).into_owned();
    let norm = v.norm();
    v /= norm;
    let pivot = v
        .iter()
        .copied()
        .fold(0.0f64, |acc, x| if x.abs() > acc.abs() { x } else { acc });
    if pivot < 0.0 {
        v.neg_mut();
    }
    (energy, v)
}

/// Sorted eigenvalues at a fixed cutoff.
pub fn spectrum(p: &ModelParams, cutoff: usize) -> Result<Vec<f64>> {
    let h = assemble_hamiltonian(p, cutoff)?;
    let mut ev: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

fn split(v: &[f64]) -> (&[f64], &[f64]) {
    v.split_at(v.len() / 2)
}

/// `(⟨a†a⟩, ⟨σz(a† + a)⟩, ⟨σx⟩, ⟨σz⟩)` of a spin-major vector.
pub fn expectation_values(v: &[f64]) -> (Observables, f64) {
    let (down, up) = split(v);
    let mut mean_photon = 0.0;
    let mut sz_correlation = 0.0;
    let mut sigma_x = 0.0;
    let mut sigma_z = 0.0;
    for n in 0..down.len() {
        mean_photon += n as f64 * (down[n] * down[n] + up[n] * up[n]);
        sigma_x += 2.0 * down[n] * up[n];
        sigma_z += up[n] * up[n] - down[n] * down[n];
        if n + 1 < down.len() {
            let s = 2.0 * ((n + 1) as f64).sqrt();
            sz_correlation += s * (up[n] * up[n + 1] - down[n] * down[n + 1]);
        }
    }
    (
        Observables {
            mean_photon,
            sz_correlation,
            sigma_x,
        },
        sigma_z,
    )
}

/// Probability carried by the top `⌈(N+1)/10⌉` Fock levels.
pub fn tail_mass(v: &[f64]) -> f64 {
    let (down, up) = split(v);
    let levels = down.len();
    let top = levels.div_ceil(10);
    (levels - top..levels)
        .map(|n| down[n] * down[n] + up[n] * up[n])
        .sum()
}

/// Ground state with adaptive truncation.
///
/// The cutoff grows from `n_start` by `growth` until the ground energy
/// changes by at most `energy_tol` between successive cutoffs and the tail
/// mass is below [`TAIL_MASS_TOL`].
pub fn ground_state(p: &ModelParams, policy: &TruncationPolicy) -> Result<ExactSolution> {
    policy.validate()?;
    let mut history: Vec<(usize, f64)> = Vec::new();
    let mut cutoff = policy.n_start;
    loop {
        let (energy, v) = lowest_eigenpair(assemble_hamiltonian(p, cutoff)?);
        let vector: Vec<f64> = v.iter().copied().collect();
        let tail = tail_mass(&vector);
        let converged = history
            .last()
            .is_some_and(|&(_, prev)| (energy - prev).abs() <= policy.energy_tol)
            && tail <= TAIL_MASS_TOL;
        history.push((cutoff, energy));

        if converged {
            let (observables, sigma_z) = expectation_values(&vector);
            return Ok(ExactSolution {
                params: *p,
                energy,
                vector,
                n_used: cutoff,
                observables,
                sigma_z,
                tail_mass: tail,
                convergence_history: history,
            });
        }
        if cutoff >= policy.n_max {
            let reason = if tail > TAIL_MASS_TOL {
                format!("tail mass {tail:e} above {TAIL_MASS_TOL:e}")
            } else {
                format!("energy change above {:e}", policy.energy_tol)
            };
            return Err(Error::ExactNotConverged {
                n_max: policy.n_max,
                reason,
                history,
            });
        }
        cutoff = policy.next_cutoff(cutoff);
    }
}
