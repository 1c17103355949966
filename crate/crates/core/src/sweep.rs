//! Parameter sweeps and figure datasets.
//!
//! A sweep varies one of `g`, `Omega` or `epsilon` linearly with the other
//! parameters fixed, solves every point with each requested method and
//! writes one CSV row per point. Rows are computed in parallel but always
//! written in axis order; numbers use 17 significant digits so identical
//! inputs give byte-identical files.

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::exact::{ground_state, TruncationPolicy};
use crate::model::ModelParams;
use crate::regime::{classify_regime, RegimeCase};
use crate::variational::{
    solve_fixed_point, solve_grwa, solve_numeric, MinimizerOptions, Observables,
};

/// Environment variable capping the number of sweep worker threads.
pub const THREADS_ENV: &str = "RABI_VAR_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Axis {
    #[serde(rename = "g")]
    G,
    #[serde(rename = "Omega")]
    BigOmega,
    #[serde(rename = "epsilon")]
    Epsilon,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::G => "g",
            Axis::BigOmega => "Omega",
            Axis::Epsilon => "epsilon",
        }
    }

    /// Default range used by figure presets.
    pub fn default_range(self) -> (f64, f64) {
        match self {
            Axis::G => (0.0, 1.0),
            Axis::BigOmega => (0.1, 6.0),
            Axis::Epsilon => (0.0, 3.0),
        }
    }

    pub fn apply(self, p: ModelParams, value: f64) -> Result<ModelParams> {
        match self {
            Axis::G => p.with_g(value),
            Axis::BigOmega => p.with_big_omega(value),
            Axis::Epsilon => p.with_epsilon(value),
        }
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "g" => Ok(Axis::G),
            "Omega" => Ok(Axis::BigOmega),
            "epsilon" => Ok(Axis::Epsilon),
            other => Err(invalid(
                "axis",
                format!("unknown axis `{other}` (g, Omega, epsilon)"),
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveMethod {
    Variational,
    FixedPoint,
    Grwa,
    Exact,
}

impl SolveMethod {
    pub const ALL: [SolveMethod; 4] = [
        SolveMethod::Variational,
        SolveMethod::FixedPoint,
        SolveMethod::Grwa,
        SolveMethod::Exact,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SolveMethod::Variational => "variational",
            SolveMethod::FixedPoint => "fixed-point",
            SolveMethod::Grwa => "grwa",
            SolveMethod::Exact => "exact",
        }
    }
}

impl fmt::Display for SolveMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolveMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SolveMethod::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                invalid(
                    "method",
                    format!("unknown method `{s}` (variational, fixed-point, grwa, exact)"),
                )
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Output {
    Energy,
    MeanPhoton,
    SzCorrelation,
    SigmaX,
    Lambda,
}

impl Output {
    pub const ALL: [Output; 5] = [
        Output::Energy,
        Output::MeanPhoton,
        Output::SzCorrelation,
        Output::SigmaX,
        Output::Lambda,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Output::Energy => "energy",
            Output::MeanPhoton => "mean_photon",
            Output::SzCorrelation => "sz_correlation",
            Output::SigmaX => "sigma_x",
            Output::Lambda => "lambda",
        }
    }
}

impl FromStr for Output {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Output::ALL.into_iter().find(|o| o.name() == s).ok_or_else(|| {
            invalid(
                "output",
                format!("unknown output `{s}` (energy, mean_photon, sz_correlation, sigma_x, lambda)"),
            )
        })
    }
}

/// Solver settings shared by every point of a sweep.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SolverOptions {
    pub minimizer: MinimizerOptions,
    pub truncation: TruncationPolicy,
}

/// One ground-state evaluation, independent of the method that produced it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PointResult {
    pub energy: f64,
    /// Displacement; `None` for the exact solver.
    pub lambda: Option<f64>,
    pub observables: Observables,
    /// `|∂E₀/∂λ|` at `lambda`; `None` for the exact solver.
    pub gradient_residual: Option<f64>,
}

impl PointResult {
    pub fn get(&self, output: Output) -> Option<f64> {
        match output {
            Output::Energy => Some(self.energy),
            Output::MeanPhoton => Some(self.observables.mean_photon),
            Output::SzCorrelation => Some(self.observables.sz_correlation),
            Output::SigmaX => Some(self.observables.sigma_x),
            Output::Lambda => self.lambda,
        }
    }
}

/// Solves a single point with the given method.
pub fn solve_point(
    p: &ModelParams,
    method: SolveMethod,
    opts: &SolverOptions,
) -> Result<PointResult> {
    let sol = match method {
        SolveMethod::Variational => solve_numeric(p, opts.minimizer)?,
        SolveMethod::FixedPoint => solve_fixed_point(p),
        SolveMethod::Grwa => solve_grwa(p),
        SolveMethod::Exact => {
            let ex = ground_state(p, &opts.truncation)?;
            return Ok(PointResult {
                energy: ex.energy,
                lambda: None,
                observables: ex.observables,
                gradient_residual: None,
            });
        }
    };
    Ok(PointResult {
        energy: sol.energy,
        lambda: Some(sol.lambda),
        observables: sol.observables,
        gradient_residual: Some(sol.gradient_residual),
    })
}

/// Linearly spaced axis values.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        let last = self.points - 1;
        (0..self.points)
            .map(|k| {
                if k == last {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * (k as f64 / last as f64)
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub axis: Axis,
    pub range: Range,
    /// Values of the non-swept parameters; the swept one is overwritten.
    pub fixed: ModelParams,
    pub methods: Vec<SolveMethod>,
    pub outputs: Vec<Output>,
    pub solver: SolverOptions,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub axis_value: f64,
    /// One value per `(method, output)` pair in [`SweepSpec::columns`] order.
    pub values: Vec<f64>,
    pub regime: RegimeCase,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        let r = &self.range;
        if !(r.start.is_finite() && r.stop.is_finite()) || !(r.start < r.stop) {
            return Err(invalid(
                "range",
                format!("need finite start < stop, got [{}, {}]", r.start, r.stop),
            ));
        }
        if r.points < 2 {
            return Err(invalid(
                "points",
                format!("need at least 2, got {}", r.points),
            ));
        }
        if self.methods.is_empty() {
            return Err(invalid("method", "at least one method is required"));
        }
        if self.outputs.is_empty() {
            return Err(invalid("outputs", "at least one output is required"));
        }
        if self.methods.contains(&SolveMethod::Exact) && self.outputs.contains(&Output::Lambda) {
            return Err(invalid(
                "outputs",
                "`lambda` is not defined for the exact method",
            ));
        }
        // Linear spacing: the endpoints bound every axis value.
        self.axis.apply(self.fixed, r.start)?;
        self.axis.apply(self.fixed, r.stop)?;
        self.solver.truncation.validate()?;
        Ok(())
    }

    /// Column names `method.output`, methods outermost.
    pub fn columns(&self) -> Vec<String> {
        self.methods
            .iter()
            .flat_map(|m| {
                self.outputs
                    .iter()
                    .map(move |o| format!("{}.{}", m.name(), o.name()))
            })
            .collect()
    }

    fn row(&self, index: usize, value: f64) -> Result<SweepRow> {
        let wrap = |e: Error| Error::SweepRow {
            row: index,
            axis: self.axis.name(),
            value,
            source: Box::new(e),
        };
        let p = self.axis.apply(self.fixed, value).map_err(wrap)?;
        let mut values = Vec::with_capacity(self.methods.len() * self.outputs.len());
        for &m in &self.methods {
            let res = solve_point(&p, m, &self.solver).map_err(wrap)?;
            for &o in &self.outputs {
                values.push(res.get(o).expect("lambda/exact rejected by validate"));
            }
        }
        Ok(SweepRow {
            axis_value: value,
            values,
            regime: classify_regime(&p).case_label,
        })
    }
}

/// Worker cap from [`THREADS_ENV`], if set to a positive integer.
pub fn threads_from_env() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

/// Evaluates every row. On failure the error of the lowest failing row is
/// returned.
pub fn run_sweep(spec: &SweepSpec, threads: Option<usize>) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let values = spec.range.values();
    let compute = || -> Vec<Result<SweepRow>> {
        values
            .par_iter()
            .enumerate()
            .map(|(i, &v)| spec.row(i, v))
            .collect()
    };
    let results = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(compute),
        None => compute(),
    };
    results.into_iter().collect()
}

/// Formats a number with 17 significant digits.
pub fn format_number(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes comment lines (prefixed `# `), the header and all rows.
pub fn write_csv<W: Write>(
    mut out: W,
    spec: &SweepSpec,
    comments: &[String],
    rows: &[SweepRow],
) -> std::io::Result<()> {
    for c in comments {
        writeln!(out, "# {c}")?;
    }
    let mut header = vec![spec.axis.name().to_string()];
    header.extend(spec.columns());
    header.push("regime".to_string());
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        let mut line = format_number(row.axis_value);
        for v in &row.values {
            line.push(',');
            line.push_str(&format_number(*v));
        }
        line.push(',');
        line.push_str(row.regime.label());
        writeln!(out, "{line}")?;
    }
    Ok(())
}

/// Comment line describing the fixed parameters and the swept range.
pub fn describe(spec: &SweepSpec) -> String {
    let p = spec.fixed;
    let fixed: Vec<String> = [
        ("omega", Some(p.omega())),
        (
            "Omega",
            (spec.axis != Axis::BigOmega).then(|| p.big_omega()),
        ),
        ("epsilon", (spec.axis != Axis::Epsilon).then(|| p.epsilon())),
        ("g", (spec.axis != Axis::G).then(|| p.g())),
    ]
    .into_iter()
    .filter_map(|(k, v)| v.map(|v| format!("{k}={v}")))
    .collect();
    format!(
        "{}; sweep {} in [{}, {}], {} points",
        fixed.join(", "),
        spec.axis.name(),
        spec.range.start,
        spec.range.stop,
        spec.range.points
    )
}

/// Runs the sweep and renders the CSV into memory.
pub fn sweep_to_string(
    spec: &SweepSpec,
    comments: &[String],
    threads: Option<usize>,
) -> Result<String> {
    let rows = run_sweep(spec, threads)?;
    let mut buf = Vec::new();
    write_csv(&mut buf, spec, comments, &rows).expect("writing to memory");
    Ok(String::from_utf8(buf).expect("CSV is ASCII"))
}

/// Runs the sweep and writes the CSV to `path`.
pub fn sweep_to_file(
    spec: &SweepSpec,
    comments: &[String],
    path: &Path,
    threads: Option<usize>,
) -> Result<()> {
    let text = sweep_to_string(spec, comments, threads)?;
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Figure datasets: one observable against one swept parameter, `ω = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FigureId {
    Fig1a,
    Fig1b,
    Fig1c,
    Fig1d,
    Fig2a,
    Fig2b,
    Fig2c,
    Fig2d,
    Fig2e,
    Fig2f,
    Fig3a,
    Fig3b,
    Fig3c,
    Fig3d,
    Fig4a,
    Fig4b,
}

/// Methods plotted in every figure.
pub const FIGURE_METHODS: [SolveMethod; 3] = [
    SolveMethod::Variational,
    SolveMethod::Grwa,
    SolveMethod::Exact,
];

pub const FIGURE_POINTS: usize = 201;

impl FigureId {
    pub const ALL: [FigureId; 16] = [
        FigureId::Fig1a,
        FigureId::Fig1b,
        FigureId::Fig1c,
        FigureId::Fig1d,
        FigureId::Fig2a,
        FigureId::Fig2b,
        FigureId::Fig2c,
        FigureId::Fig2d,
        FigureId::Fig2e,
        FigureId::Fig2f,
        FigureId::Fig3a,
        FigureId::Fig3b,
        FigureId::Fig3c,
        FigureId::Fig3d,
        FigureId::Fig4a,
        FigureId::Fig4b,
    ];

    pub fn name(self) -> &'static str {
        use FigureId::*;
        match self {
            Fig1a => "fig1a",
            Fig1b => "fig1b",
            Fig1c => "fig1c",
            Fig1d => "fig1d",
            Fig2a => "fig2a",
            Fig2b => "fig2b",
            Fig2c => "fig2c",
            Fig2d => "fig2d",
            Fig2e => "fig2e",
            Fig2f => "fig2f",
            Fig3a => "fig3a",
            Fig3b => "fig3b",
            Fig3c => "fig3c",
            Fig3d => "fig3d",
            Fig4a => "fig4a",
            Fig4b => "fig4b",
        }
    }

    /// Swept axis, the two fixed values `(name, value)`, and the observable.
    fn layout(self) -> (Axis, [(Axis, f64); 2], Output) {
        use Axis::*;
        use FigureId::*;
        match self {
            Fig1a => (G, [(Epsilon, 0.1), (BigOmega, 0.5)], Output::Energy),
            Fig1b => (G, [(Epsilon, 0.1), (BigOmega, 5.0)], Output::Energy),
            Fig1c => (BigOmega, [(Epsilon, 0.5), (G, 0.5)], Output::Energy),
            Fig1d => (Epsilon, [(G, 0.2), (BigOmega, 5.0)], Output::Energy),
            Fig2a => (G, [(Epsilon, 0.1), (BigOmega, 5.0)], Output::MeanPhoton),
            Fig2b => (G, [(Epsilon, 0.1), (BigOmega, 5.0)], Output::SzCorrelation),
            Fig2c => (BigOmega, [(Epsilon, 0.1), (G, 0.1)], Output::MeanPhoton),
            Fig2d => (BigOmega, [(Epsilon, 0.1), (G, 0.1)], Output::SzCorrelation),
            Fig2e => (Epsilon, [(G, 0.2), (BigOmega, 0.1)], Output::MeanPhoton),
            Fig2f => (Epsilon, [(G, 0.2), (BigOmega, 0.1)], Output::SzCorrelation),
            Fig3a => (G, [(Epsilon, 0.1), (BigOmega, 0.5)], Output::SigmaX),
            Fig3b => (G, [(Epsilon, 0.1), (BigOmega, 5.0)], Output::SigmaX),
            Fig3c => (BigOmega, [(Epsilon, 0.1), (G, 0.2)], Output::SigmaX),
            Fig3d => (Epsilon, [(G, 0.5), (BigOmega, 0.1)], Output::SigmaX),
            Fig4a => (G, [(Epsilon, 0.1), (BigOmega, 1.0)], Output::Energy),
            Fig4b => (G, [(Epsilon, 2.0), (BigOmega, 2.0)], Output::Energy),
        }
    }

    pub fn axis(self) -> Axis {
        self.layout().0
    }

    pub fn output(self) -> Output {
        self.layout().2
    }

    /// Fixed parameters as printed in the CSV header, e.g. `epsilon=0.1, Omega=0.5`.
    pub fn caption(self) -> String {
        let (_, fixed, _) = self.layout();
        fixed
            .iter()
            .map(|(a, v)| format!("{}={v}", a.name()))
            .collect::<Vec<_>>()
            .join(", ")
    }

    /// Sweep specification with default range and point count unless given.
    pub fn spec(
        self,
        range: Option<(f64, f64)>,
        points: Option<usize>,
        solver: SolverOptions,
    ) -> Result<SweepSpec> {
        let (axis, fixed, output) = self.layout();
        let (start, stop) = range.unwrap_or_else(|| axis.default_range());
        let mut p = ModelParams::new(1.0, 0.0, 0.0, 0.0)?;
        for (a, v) in fixed {
            p = a.apply(p, v)?;
        }
        let spec = SweepSpec {
            axis,
            range: Range {
                start,
                stop,
                points: points.unwrap_or(FIGURE_POINTS),
            },
            fixed: p,
            methods: FIGURE_METHODS.to_vec(),
            outputs: vec![output],
            solver,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Comment lines written at the top of the figure CSV.
    pub fn comments(self, spec: &SweepSpec) -> Vec<String> {
        vec![
            format!("{}: {}, omega=1", self.name(), self.caption()),
            describe(spec),
        ]
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FigureId::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| invalid("figure", format!("unknown figure `{s}` (fig1a..fig1d, fig2a..fig2f, fig3a..fig3d, fig4a, fig4b)")))
    }
}

/// Parses a CSV written by [`write_csv`] into its header and numeric columns
/// (the trailing regime column is dropped).
pub fn parse_csv(text: &str) -> Option<(Vec<String>, Vec<Vec<f64>>)> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<String> = lines.next()?.split(',').map(str::to_string).collect();
    let numeric = header.len() - 1;
    let mut columns = vec![Vec::new(); numeric];
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != header.len() {
            return None;
        }
        for (col, f) in columns.iter_mut().zip(&fields[..numeric]) {
            col.push(f.parse().ok()?);
        }
    }
    Some((header[..numeric].to_vec(), columns))
}
