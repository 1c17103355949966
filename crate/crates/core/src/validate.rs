//! Property suite behind the `validate` command.
//!
//! Every check runs over the fixed parameter grid
//! `{ω=1} × Ω∈{0.1, 0.5, 1, 5} × ε∈{0, 0.1, 0.5, 2} × g∈{0, 0.1, …, 2}`
//! or over a seeded set of random points, so a report is reproducible.
//! The variational solver is injectable: [`validate_with`] accepts any
//! function with the signature of [`default_numeric`], which is how a
//! deliberately broken solver is shown to fail.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::exact::{ground_state, ExactSolution, TruncationPolicy};
use crate::model::ModelParams;
use crate::regime::{classify_regime, RegimeCase};
use crate::subspace::{build_subspace, diagonalize_subspace};
use crate::sweep::{sweep_to_string, Axis, Output, Range, SolveMethod, SolverOptions, SweepSpec};
use crate::variational::{
    energy_functional, energy_gradient, solve_fixed_point, solve_grwa, solve_numeric,
    MinimizerOptions, VariationalSolution,
};

pub const GRID_BIG_OMEGA: [f64; 4] = [0.1, 0.5, 1.0, 5.0];
pub const GRID_EPSILON: [f64; 4] = [0.0, 0.1, 0.5, 2.0];
pub const GRID_G: [f64; 9] = [0.0, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9, 1.2, 2.0];

pub const UPPER_BOUND_SLACK: f64 = 1e-9;
pub const DOMINANCE_SLACK: f64 = 1e-12;
/// `|∂E₀/∂λ|` at `λ = g/ω` above which the variational energy must be
/// strictly below GRWA.
pub const STRICT_DOMINANCE_GRADIENT: f64 = 1e-5;
/// Relative energy error allowed in the small-coupling sub-grid.
pub const ACCURACY_TOL: f64 = 0.06;
pub const FIXED_POINT_TOL: f64 = 0.05;
pub const FIXED_POINT_MAX_G: f64 = 0.5;
pub const ROUTE_TOL: f64 = 1e-12;
pub const GRADIENT_TOL: f64 = 1e-6;
pub const FD_STEP: f64 = 1e-6;
pub const CLOSED_FORM_ENERGY_TOL: f64 = 1e-10;
pub const CLOSED_FORM_PHOTON_TOL: f64 = 1e-8;
pub const CONSTANT_TOL: f64 = 1e-15;
pub const MONOTONE_TOL: f64 = 1e-8;
/// Required ratio of the fig4b to fig4a maximum variational error.
pub const DEGRADATION_RATIO: f64 = 3.0;

const SEED: u64 = 0x5EED_0001;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Quick,
    Full,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::Quick => "quick",
            Preset::Full => "full",
        }
    }

    fn sweep_points(self) -> usize {
        match self {
            Preset::Quick => 51,
            Preset::Full => 201,
        }
    }

    fn route_points(self) -> usize {
        match self {
            Preset::Quick => 1000,
            Preset::Full => 10_000,
        }
    }

    fn gradient_points(self) -> usize {
        match self {
            Preset::Quick => 50,
            Preset::Full => 500,
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quick" => Ok(Preset::Quick),
            "full" => Ok(Preset::Full),
            other => Err(invalid(
                "preset",
                format!("unknown preset `{other}` (quick, full)"),
            )),
        }
    }
}

/// Variational solver under test.
pub type NumericSolver = fn(&ModelParams) -> Result<VariationalSolution>;

pub fn default_numeric(p: &ModelParams) -> Result<VariationalSolution> {
    solve_numeric(p, MinimizerOptions::default())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub summary: String,
    /// One line per violating point.
    pub offending: Vec<String>,
}

impl Check {
    fn new(name: &'static str, summary: String, offending: Vec<String>) -> Self {
        Check {
            name,
            passed: offending.is_empty(),
            summary,
            offending,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MarginRow {
    pub params: ModelParams,
    pub exact: f64,
    pub variational: f64,
    pub grwa: f64,
}

impl MarginRow {
    /// `E_var − E_exact`
    pub fn bound_margin(&self) -> f64 {
        self.variational - self.exact
    }

    /// `E_grwa − E_var`
    pub fn dominance_margin(&self) -> f64 {
        self.grwa - self.variational
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub preset: Preset,
    pub checks: Vec<Check>,
    /// Full preset only.
    pub margins: Option<Vec<MarginRow>>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "validate preset={}", self.preset.name())?;
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "[{tag}] {}: {}", c.name, c.summary)?;
            for o in &c.offending {
                writeln!(f, "       at {o}")?;
            }
        }
        if let Some(rows) = &self.margins {
            writeln!(f)?;
            writeln!(
                f,
                "{:>6} {:>6} {:>5} {:>22} {:>22} {:>22} {:>11} {:>11}",
                "Omega", "eps", "g", "E_exact", "E_var", "E_grwa", "var-exact", "grwa-var"
            )?;
            for r in rows {
                writeln!(
                    f,
                    "{:>6} {:>6} {:>5} {:>22.15e} {:>22.15e} {:>22.15e} {:>11.3e} {:>11.3e}",
                    r.params.big_omega(),
                    r.params.epsilon(),
                    r.params.g(),
                    r.exact,
                    r.variational,
                    r.grwa,
                    r.bound_margin(),
                    r.dominance_margin()
                )?;
            }
        }
        let passed = self.checks.iter().filter(|c| c.passed).count();
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "result: {verdict} ({passed}/{} checks)",
            self.checks.len()
        )
    }
}

/// The parameter grid, Ω outermost and g innermost.
pub fn grid() -> Vec<ModelParams> {
    let mut points = Vec::with_capacity(GRID_BIG_OMEGA.len() * GRID_EPSILON.len() * GRID_G.len());
    for big_omega in GRID_BIG_OMEGA {
        for epsilon in GRID_EPSILON {
            for g in GRID_G {
                points.push(ModelParams::new(1.0, big_omega, epsilon, g).expect("grid point"));
            }
        }
    }
    points
}

pub fn describe_point(p: &ModelParams) -> String {
    format!(
        "omega={}, Omega={}, epsilon={}, g={}",
        p.omega(),
        p.big_omega(),
        p.epsilon(),
        p.g()
    )
}

/// Seeded random parameters with `ω ∈ [0.5, 2]`, `Ω ∈ [0, 6]`,
/// `ε ∈ [−3, 3]`, `g ∈ [0, 2]`, and a displacement `λ ∈ [0, 2]`.
pub fn random_points(count: usize, seed: u64) -> Vec<(ModelParams, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let p = ModelParams::new(
                rng.gen_range(0.5..2.0),
                rng.gen_range(0.0..6.0),
                rng.gen_range(-3.0..3.0),
                rng.gen_range(0.0..2.0),
            )
            .expect("random point in range");
            (p, rng.gen_range(0.0..2.0))
        })
        .collect()
}

struct GridPoint {
    params: ModelParams,
    exact: ExactSolution,
    numeric: VariationalSolution,
    grwa: VariationalSolution,
    fixed: VariationalSolution,
}

fn solve_grid(solver: NumericSolver) -> Result<Vec<GridPoint>> {
    let policy = TruncationPolicy::default();
    grid()
        .into_par_iter()
        .map(|p| {
            Ok(GridPoint {
                params: p,
                exact: ground_state(&p, &policy)?,
                numeric: solver(&p)?,
                grwa: solve_grwa(&p),
                fixed: solve_fixed_point(&p),
            })
        })
        .collect()
}

fn upper_bound(points: &[GridPoint]) -> Check {
    let mut offending = Vec::new();
    let mut worst = f64::INFINITY;
    for pt in points {
        let margin = pt.numeric.energy - pt.exact.energy;
        worst = worst.min(margin);
        if pt.exact.energy - UPPER_BOUND_SLACK > pt.numeric.energy {
            offending.push(format!(
                "{}: E_var={:e} < E_exact={:e}",
                describe_point(&pt.params),
                pt.numeric.energy,
                pt.exact.energy
            ));
        }
    }
    Check::new(
        "upper-bound",
        format!(
            "E_exact - {UPPER_BOUND_SLACK:e} <= E_var on {} points, min E_var - E_exact = {worst:.3e}",
            points.len()
        ),
        offending,
    )
}

fn dominance(points: &[GridPoint]) -> Check {
    let mut offending = Vec::new();
    let mut strict = 0;
    for pt in points {
        let p = &pt.params;
        let margin = pt.grwa.energy - pt.numeric.energy;
        let slope = energy_gradient(p, p.g() / p.omega()).abs();
        let must_be_strict =
            p.big_omega() > 0.0 && p.g() > 0.0 && slope > STRICT_DOMINANCE_GRADIENT;
        if must_be_strict {
            strict += 1;
        }
        if margin < -DOMINANCE_SLACK || (must_be_strict && margin <= 0.0) {
            offending.push(format!(
                "{}: E_grwa - E_var = {margin:e}, |dE/dlambda(g/omega)| = {slope:.3e}",
                describe_point(p)
            ));
        }
    }
    Check::new(
        "dominance",
        format!(
            "E_var <= E_grwa + {DOMINANCE_SLACK:e} everywhere, strictly below at the {strict} points with |dE/dlambda(g/omega)| > {STRICT_DOMINANCE_GRADIENT:e}"
        ),
        offending,
    )
}

fn accuracy(points: &[GridPoint]) -> Check {
    let mut offending = Vec::new();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for pt in points {
        let p = &pt.params;
        // Ω ≤ ω is always the small-coupling case.
        if p.big_omega() > p.omega() || p.g() > 1.0 {
            continue;
        }
        debug_assert_eq!(classify_regime(p).case_label, RegimeCase::SmallCoupling);
        count += 1;
        let rel = (pt.numeric.energy - pt.exact.energy).abs() / pt.exact.energy.abs();
        worst = worst.max(rel);
        if rel > ACCURACY_TOL {
            offending.push(format!("{}: relative error {rel:.4e}", describe_point(p)));
        }
    }
    Check::new(
        "small-coupling-accuracy",
        format!(
            "|E_var - E_exact|/|E_exact| <= {ACCURACY_TOL} on {count} points with Omega/omega <= 1, g <= 1; worst {worst:.4e}"
        ),
        offending,
    )
}

fn fixed_point_quality(points: &[GridPoint]) -> Check {
    let mut offending = Vec::new();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for pt in points
        .iter()
        .filter(|pt| pt.params.g() <= FIXED_POINT_MAX_G)
    {
        count += 1;
        let rel = (pt.fixed.lambda - pt.numeric.lambda).abs() / pt.numeric.lambda.max(1e-6);
        worst = worst.max(rel);
        if rel > FIXED_POINT_TOL {
            offending.push(format!(
                "{}: lambda_fixed={:e}, lambda_var={:e}",
                describe_point(&pt.params),
                pt.fixed.lambda,
                pt.numeric.lambda
            ));
        }
    }
    Check::new(
        "fixed-point-quality",
        format!("relative displacement error <= {FIXED_POINT_TOL} on {count} points with g <= {FIXED_POINT_MAX_G}; worst {worst:.4e}"),
        offending,
    )
}

fn exact_closed_forms(policy: &TruncationPolicy) -> Result<Check> {
    let mut offending = Vec::new();
    let mut count = 0;
    for big_omega in GRID_BIG_OMEGA.into_iter().chain([0.0]) {
        for epsilon in GRID_EPSILON {
            let p = ModelParams::new(1.0, big_omega, epsilon, 0.0)?;
            let expected = -0.5 * epsilon.hypot(big_omega);
            let e = ground_state(&p, policy)?.energy;
            count += 1;
            if (e - expected).abs() > CLOSED_FORM_ENERGY_TOL {
                offending.push(format!(
                    "{}: E={e:e}, expected {expected:e}",
                    describe_point(&p)
                ));
            }
        }
    }
    for g in GRID_G {
        let p = ModelParams::new(1.0, 0.0, 0.0, g)?;
        let ex = ground_state(&p, policy)?;
        count += 1;
        let (e, n) = (-g * g, g * g);
        if (ex.energy - e).abs() > CLOSED_FORM_ENERGY_TOL
            || (ex.observables.mean_photon - n).abs() > CLOSED_FORM_PHOTON_TOL
        {
            offending.push(format!(
                "{}: E={:e}, <a+a>={:e}, expected {e:e}, {n:e}",
                describe_point(&p),
                ex.energy,
                ex.observables.mean_photon
            ));
        }
    }
    Ok(Check::new(
        "exact-closed-forms",
        format!(
            "g=0 energy to {CLOSED_FORM_ENERGY_TOL:e}; Omega=epsilon=0 energy to {CLOSED_FORM_ENERGY_TOL:e} and photon number to {CLOSED_FORM_PHOTON_TOL:e}; {count} points"
        ),
        offending,
    ))
}

fn route_equivalence(count: usize) -> Result<Check> {
    let mut worst: f64 = 0.0;
    let mut offending = Vec::new();
    for (p, lambda) in random_points(count, SEED) {
        let block = diagonalize_subspace(&build_subspace(&p, 0, lambda)?);
        let diff = (block.e_minus - energy_functional(&p, lambda)).abs();
        worst = worst.max(diff);
        if diff > ROUTE_TOL {
            offending.push(format!(
                "{}, lambda={lambda}: difference {diff:e}",
                describe_point(&p)
            ));
        }
    }
    Ok(Check::new(
        "route-equivalence",
        format!("closed-form E0(lambda) vs n=0 block eigenvalue at {count} random points, max |diff| {worst:.3e} <= {ROUTE_TOL:e}"),
        offending,
    ))
}

fn gradient_check(count: usize) -> Check {
    let mut worst: f64 = 0.0;
    let mut offending = Vec::new();
    for (p, lambda) in random_points(count, SEED + 1) {
        let fd = (energy_functional(&p, lambda + FD_STEP)
            - energy_functional(&p, lambda - FD_STEP))
            / (2.0 * FD_STEP);
        let diff = (energy_gradient(&p, lambda) - fd).abs();
        worst = worst.max(diff);
        if diff > GRADIENT_TOL {
            offending.push(format!(
                "{}, lambda={lambda}: |analytic - FD| {diff:e}",
                describe_point(&p)
            ));
        }
    }
    Check::new(
        "gradient",
        format!("analytic vs central difference (h={FD_STEP:e}) at {count} random points, max error {worst:.3e} <= {GRADIENT_TOL:e}"),
        offending,
    )
}

/// Axis values of a linear sweep with `points` samples.
fn axis_values(start: f64, stop: f64, points: usize) -> Vec<f64> {
    Range {
        start,
        stop,
        points,
    }
    .values()
}

fn photon_sweep(solver: NumericSolver, points: usize) -> Result<Check> {
    let fixed = ModelParams::new(1.0, 0.1, 0.1, 0.1)?;
    let policy = TruncationPolicy::default();
    let rows: Vec<(f64, f64, f64, f64)> = axis_values(0.1, 6.0, points)
        .into_par_iter()
        .map(|big_omega| {
            let p = fixed.with_big_omega(big_omega)?;
            Ok((
                big_omega,
                solve_grwa(&p).observables.mean_photon,
                solver(&p)?.observables.mean_photon,
                ground_state(&p, &policy)?.observables.mean_photon,
            ))
        })
        .collect::<Result<_>>()?;

    let mut offending = Vec::new();
    let reference = rows[0].1;
    for &(big_omega, grwa, _, _) in &rows {
        if (grwa - reference).abs() > CONSTANT_TOL {
            offending.push(format!(
                "Omega={big_omega}: GRWA <a+a>={grwa:e} differs from {reference:e}"
            ));
        }
    }
    for w in rows.windows(2) {
        let ((o0, _, v0, x0), (o1, _, v1, x1)) = (w[0], w[1]);
        if !(v1 < v0) {
            offending.push(format!(
                "Omega={o0} -> {o1}: variational <a+a> {v0:e} -> {v1:e} not decreasing"
            ));
        }
        if x1 > x0 + MONOTONE_TOL {
            offending.push(format!(
                "Omega={o0} -> {o1}: exact <a+a> {x0:e} -> {x1:e} increases"
            ));
        }
    }
    Ok(Check::new(
        "omega-dependence",
        format!(
            "Omega sweep [0.1, 6] at epsilon=0.1, g=0.1, {points} points: GRWA <a+a> constant to {CONSTANT_TOL:e}, variational strictly decreasing, exact decreasing to {MONOTONE_TOL:e}"
        ),
        offending,
    ))
}

fn max_energy_error(
    solver: NumericSolver,
    big_omega: f64,
    epsilon: f64,
    points: usize,
) -> Result<(f64, f64)> {
    let fixed = ModelParams::new(1.0, big_omega, epsilon, 0.0)?;
    let policy = TruncationPolicy::default();
    let errors: Vec<(f64, f64)> = axis_values(0.0, 1.0, points)
        .into_par_iter()
        .map(|g| {
            let p = fixed.with_g(g)?;
            Ok((
                (solver(&p)?.energy - ground_state(&p, &policy)?.energy).abs(),
                g,
            ))
        })
        .collect::<Result<_>>()?;
    Ok(errors
        .into_iter()
        .fold((0.0, 0.0), |a, b| if b.0 > a.0 { b } else { a }))
}

fn degradation(solver: NumericSolver, points: usize) -> Result<Check> {
    let (err_a, g_a) = max_energy_error(solver, 1.0, 0.1, points)?;
    let (err_b, g_b) = max_energy_error(solver, 2.0, 2.0, points)?;
    let ratio = err_b / err_a;
    let offending = if ratio >= DEGRADATION_RATIO {
        Vec::new()
    } else {
        vec![format!(
            "max |E_var - E_exact|: {err_b:e} (epsilon=2, Omega=2, g={g_b}) vs {err_a:e} (epsilon=0.1, Omega=1, g={g_a}), ratio {ratio:.3}"
        )]
    };
    Ok(Check::new(
        "intermediate-degradation",
        format!(
            "g sweep [0, 1], {points} points: max error {err_b:.4e} at epsilon=2, Omega=2 vs {err_a:.4e} at epsilon=0.1, Omega=1, ratio {ratio:.3} >= {DEGRADATION_RATIO}"
        ),
        offending,
    ))
}

fn determinism() -> Result<Check> {
    let spec = SweepSpec {
        axis: Axis::G,
        range: Range {
            start: 0.0,
            stop: 1.0,
            points: 21,
        },
        fixed: ModelParams::new(1.0, 1.0, 0.1, 0.0)?,
        methods: vec![
            SolveMethod::Variational,
            SolveMethod::FixedPoint,
            SolveMethod::Grwa,
            SolveMethod::Exact,
        ],
        outputs: vec![
            Output::Energy,
            Output::MeanPhoton,
            Output::SzCorrelation,
            Output::SigmaX,
        ],
        solver: SolverOptions::default(),
    };
    let serial = sweep_to_string(&spec, &[], Some(1))?;
    let parallel = sweep_to_string(&spec, &[], None)?;
    let offending = if serial == parallel {
        Vec::new()
    } else {
        vec!["serial and parallel sweeps differ".to_string()]
    };
    Ok(Check::new(
        "determinism",
        format!(
            "21-point sweep, all methods: serial and parallel CSV byte-identical ({} bytes)",
            serial.len()
        ),
        offending,
    ))
}

pub fn validate(preset: Preset) -> Result<Report> {
    validate_with(preset, default_numeric)
}

/// Runs every check with `solver` standing in for the numeric minimizer.
pub fn validate_with(preset: Preset, solver: NumericSolver) -> Result<Report> {
    let points = solve_grid(solver)?;
    let policy = TruncationPolicy::default();
    let checks = vec![
        upper_bound(&points),
        dominance(&points),
        accuracy(&points),
        photon_sweep(solver, preset.sweep_points())?,
        route_equivalence(preset.route_points())?,
        gradient_check(preset.gradient_points()),
        fixed_point_quality(&points),
        exact_closed_forms(&policy)?,
        degradation(solver, preset.sweep_points())?,
        determinism()?,
    ];
    let margins = (preset == Preset::Full).then(|| {
        points
            .iter()
            .map(|pt| MarginRow {
                params: pt.params,
                exact: pt.exact.energy,
                variational: pt.numeric.energy,
                grwa: pt.grwa.energy,
            })
            .collect()
    });
    Ok(Report {
        preset,
        checks,
        margins,
    })
}
