//! Command-line front end.
//!
//! Exit codes: 0 success, 2 input error, 3 numerical failure.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::catalog;
use crate::classical;
use crate::error::{Error, Result};
use crate::moment::{build_problem, MomentProblem};
use crate::realize::{self, QuantumRealization, RealizationMetadata};
use crate::regions;
use crate::scenario::{load_scenario, Scenario};
use crate::sdp::{
    self, has_constant_observable, verify_dual_certificate, AdmmOptions, AsInstance, Backend, CorrelationProblem,
    IpmOptions, SdpSolution,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Largest moment index sent to the interior-point backend by default.
pub const DEFAULT_IPM_INDEX: usize = sdp::DEFAULT_IPM_CAP;
pub const DEFAULT_IPM_TOL: f64 = 1e-8;
pub const DEFAULT_IPM_MAX_ITER: usize = 100;

#[derive(Parser, Debug)]
#[command(name = "tempora", version, about = "Bounds on temporal quantum correlations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve the semidefinite relaxation of a scenario.
    Bound(BoundArgs),
    /// Noncontextual and algebraic (memory) maxima.
    Classical(ClassicalArgs),
    /// Solve, reconstruct a quantum realization and write it as JSON.
    Realize(RealizeArgs),
    /// Re-simulate a realization file against a scenario.
    Verify(VerifyArgs),
    /// Sample the boundary of the quantum Leggett-Garg region as CSV.
    LgRegion(LgRegionArgs),
    /// Closed-form and numerical N-cycle bounds.
    Ncycle(NcycleArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Correlation-matrix program (two-point correlators only).
    Simplified,
    /// Moment-matrix program over projector words.
    Moments,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SolverArg {
    Ipm,
    Admm,
}

impl From<SolverArg> for Backend {
    fn from(s: SolverArg) -> Self {
        match s {
            SolverArg::Ipm => Backend::Ipm,
            SolverArg::Admm => Backend::Admm,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct SolveArgs {
    /// Scenario file or `builtin:NAME`.
    pub scenario: String,
    #[arg(long, value_enum, default_value = "moments")]
    pub method: Method,
    /// Defaults to ipm when the moment index has at most 300 words, else admm.
    #[arg(long, value_enum)]
    pub solver: Option<SolverArg>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
}

#[derive(Args, Debug)]
pub struct BoundArgs {
    #[command(flatten)]
    pub solve: SolveArgs,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct ClassicalArgs {
    pub scenario: String,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct RealizeArgs {
    #[command(flatten)]
    pub solve: SolveArgs,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    pub realization: PathBuf,
    pub scenario: String,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct LgRegionArgs {
    #[arg(long, default_value_t = 101)]
    pub grid: usize,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct NcycleArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub analytic: bool,
    #[arg(long)]
    pub solve: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    pub primal: f64,
    pub dual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReferenceDelta {
    pub value: f64,
    pub delta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub scenario: String,
    pub method: Method,
    pub solver: Backend,
    pub primal: f64,
    /// Certified upper bound.
    pub dual: f64,
    pub gap: f64,
    pub residuals: Residuals,
    pub iterations: usize,
    pub converged: bool,
    pub wall_ms: f64,
    pub references: BTreeMap<String, ReferenceDelta>,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::UnknownSetting(_)
        | Error::OutcomeOutOfRange { .. }
        | Error::DroppedOutcome { .. }
        | Error::InvalidScenario(_)
        | Error::ScenarioFile { .. }
        | Error::SizeCap { .. }
        | Error::EnumerationCap { .. }
        | Error::InvalidArgument(_)
        | Error::Io(_)
        | Error::Json(_) => EXIT_INPUT,
        _ => EXIT_NUMERICAL,
    }
}

/// `builtin:NAME` or a scenario file path.
pub fn resolve_scenario(arg: &str) -> Result<Scenario> {
    match arg.strip_prefix("builtin:") {
        Some(name) => catalog::builtin(name),
        None => load_scenario(Path::new(arg)),
    }
}

/// The program a scenario was lowered to.
#[derive(Clone, Debug)]
pub enum Program {
    Simplified(CorrelationProblem),
    Moments(Box<MomentProblem>),
}

impl Program {
    pub fn build(s: &Scenario, method: Method) -> Result<Self> {
        Ok(match method {
            Method::Simplified => Program::Simplified(CorrelationProblem::from_scenario(s)?),
            Method::Moments => Program::Moments(Box::new(build_problem(s)?)),
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            Program::Simplified(p) => p.dim(),
            Program::Moments(p) => p.dim(),
        }
    }

    fn as_instance(&self) -> &dyn AsInstance {
        match self {
            Program::Simplified(p) => p,
            Program::Moments(p) => p.as_ref(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SolveOptions {
    pub solver: Option<Backend>,
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
}

impl From<&SolveArgs> for SolveOptions {
    fn from(a: &SolveArgs) -> Self {
        Self {
            solver: a.solver.map(Backend::from),
            tol: a.tol,
            max_iter: a.max_iter,
        }
    }
}

pub struct BoundOutcome {
    pub report: RunReport,
    pub program: Program,
    pub solution: SdpSolution,
}

pub fn default_backend(dim: usize) -> Backend {
    if dim <= DEFAULT_IPM_INDEX {
        Backend::Ipm
    } else {
        Backend::Admm
    }
}

/// Builds, solves and certifies.
pub fn run_bound(s: &Scenario, method: Method, opts: SolveOptions) -> Result<BoundOutcome> {
    let start = Instant::now();
    let program = Program::build(s, method)?;
    let backend = opts.solver.unwrap_or_else(|| default_backend(program.dim()));
    let inst = program.as_instance().instance();
    let solution = match backend {
        Backend::Ipm => {
            let o = IpmOptions {
                tol: opts.tol.unwrap_or(DEFAULT_IPM_TOL),
                max_iter: opts.max_iter.unwrap_or(DEFAULT_IPM_MAX_ITER),
                ..IpmOptions::default()
            };
            sdp::solve_ipm(&inst, &o)?
        }
        Backend::Admm => {
            let o = AdmmOptions {
                tol: opts.tol.unwrap_or(sdp::DEFAULT_ADMM_TOL),
                max_iter: opts.max_iter.unwrap_or(sdp::DEFAULT_ADMM_MAX_ITER),
                ..AdmmOptions::default()
            };
            sdp::solve_admm(&inst, &o)?
        }
    };
    let cert = verify_dual_certificate(&inst, &solution, solution.tolerance)?;
    let primal = solution.primal_value;
    let references = s
        .reference_values
        .iter()
        .map(|(k, &v)| {
            (
                k.clone(),
                ReferenceDelta {
                    value: v,
                    delta: primal - v,
                },
            )
        })
        .collect();
    let report = RunReport {
        scenario: s.name.clone(),
        method,
        solver: backend,
        primal,
        dual: cert.bound,
        gap: (cert.bound - primal).max(0.0),
        residuals: Residuals {
            primal: solution.primal_residual,
            dual: solution.dual_residual,
        },
        iterations: solution.iterations,
        converged: solution.converged,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
        references,
    };
    Ok(BoundOutcome {
        report,
        program,
        solution,
    })
}

/// Explicit realization of a solved program: Clifford observables for the
/// correlation-matrix program, GNS reconstruction for the moment program.
pub fn realize_outcome(s: &Scenario, outcome: &BoundOutcome) -> Result<QuantumRealization> {
    let mut r = match &outcome.program {
        Program::Simplified(_) if !has_constant_observable(s) => {
            let v = realize::gram_vectors(&outcome.solution.matrix, crate::numerics::DEFAULT_RANK_TOL)?;
            realize::observables_from_vectors(&v)?
        }
        Program::Simplified(_) => {
            return Err(Error::InvalidArgument(
                "Clifford realizations need an objective without single-setting terms; use --method moments".into(),
            ))
        }
        Program::Moments(p) => realize::gns_from_moments(&outcome.solution, p)?,
    };
    r.metadata = Some(RealizationMetadata {
        scenario: s.name.clone(),
        method: match outcome.report.method {
            Method::Simplified => "clifford".into(),
            Method::Moments => "gns".into(),
        },
        primal: outcome.report.primal,
        tolerance: outcome.solution.tolerance,
    });
    Ok(r)
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub scenario: String,
    pub dimension: usize,
    pub simulated: f64,
    pub recorded_primal: Option<f64>,
    pub deviation: Option<f64>,
    pub allowed: Option<f64>,
    pub invariant_violation: f64,
    pub passed: bool,
}

pub fn verify_realization(r: &QuantumRealization, s: &Scenario) -> Result<VerifyReport> {
    let validity = r.validate(realize::VALIDATION_TOL)?;
    if r.num_settings() != s.num_settings() {
        return Err(Error::InvalidRealization(format!(
            "realization has {} settings, scenario has {}",
            r.num_settings(),
            s.num_settings()
        )));
    }
    for (k, &count) in s.outcomes.iter().enumerate() {
        if r.outcome_count(k)? != count {
            return Err(Error::InvalidRealization(format!("setting {k} outcome count differs from scenario")));
        }
    }
    let simulated = realize::simulate_objective(r, s)?;
    let (recorded, deviation, allowed) = match &r.metadata {
        Some(m) => (Some(m.primal), Some((simulated - m.primal).abs()), Some(10.0 * m.tolerance)),
        None => (None, None, None),
    };
    let passed = match (deviation, allowed) {
        (Some(d), Some(a)) => d <= a,
        _ => true,
    };
    Ok(VerifyReport {
        scenario: s.name.clone(),
        dimension: r.dimension,
        simulated,
        recorded_primal: recorded,
        deviation,
        allowed,
        invariant_violation: validity.worst(),
        passed,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassicalReport {
    pub scenario: String,
    pub nchv: f64,
    pub algebraic: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct NcycleReport {
    pub n: usize,
    pub analytic: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sdp: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub difference: Option<f64>,
}

fn print_json<W: Write, T: Serialize>(out: &mut W, v: &T) -> Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(v)?)?;
    Ok(())
}

fn print_report<W: Write>(out: &mut W, r: &RunReport) -> Result<()> {
    writeln!(out, "scenario    {}", r.scenario)?;
    writeln!(out, "method      {:?}", r.method)?;
    writeln!(out, "solver      {}", r.solver)?;
    writeln!(out, "primal      {:.10}", r.primal)?;
    writeln!(out, "dual        {:.10}", r.dual)?;
    writeln!(out, "gap         {:.3e}", r.gap)?;
    writeln!(out, "residuals   primal {:.3e}  dual {:.3e}", r.residuals.primal, r.residuals.dual)?;
    writeln!(out, "iterations  {}{}", r.iterations, if r.converged { "" } else { " (not converged)" })?;
    writeln!(out, "wall        {:.1} ms", r.wall_ms)?;
    for (k, d) in &r.references {
        writeln!(out, "reference   {k:<18} {:>14.6}  delta {:+.3e}", d.value, d.delta)?;
    }
    Ok(())
}

/// Runs one command, writing its output to `out`, and returns the exit code.
pub fn run<W: Write>(cli: &Cli, out: &mut W) -> Result<i32> {
    match &cli.command {
        Command::Bound(a) => {
            let s = resolve_scenario(&a.solve.scenario)?;
            let o = run_bound(&s, a.solve.method, SolveOptions::from(&a.solve))?;
            if a.json {
                print_json(out, &o.report)?;
            } else {
                print_report(out, &o.report)?;
            }
            Ok(if o.report.converged { EXIT_OK } else { EXIT_NUMERICAL })
        }
        Command::Classical(a) => {
            let s = resolve_scenario(&a.scenario)?;
            let r = ClassicalReport {
                scenario: s.name.clone(),
                nchv: classical::nchv_bound(&s)?,
                algebraic: classical::algebraic_max(&s)?,
            };
            if a.json {
                print_json(out, &r)?;
            } else {
                writeln!(out, "scenario   {}", r.scenario)?;
                writeln!(out, "nchv       {}", r.nchv)?;
                writeln!(out, "algebraic  {}", r.algebraic)?;
            }
            Ok(EXIT_OK)
        }
        Command::Realize(a) => {
            let s = resolve_scenario(&a.solve.scenario)?;
            let o = run_bound(&s, a.solve.method, SolveOptions::from(&a.solve))?;
            if !o.report.converged {
                print_report(out, &o.report)?;
                return Ok(EXIT_NUMERICAL);
            }
            let r = realize_outcome(&s, &o)?;
            r.save(&a.out)?;
            let v = verify_realization(&r, &s)?;
            if a.json {
                print_json(out, &v)?;
            } else {
                writeln!(out, "scenario    {}", s.name)?;
                writeln!(out, "dimension   {} (program size {})", r.dimension, o.program.dim())?;
                writeln!(out, "primal      {:.10}", o.report.primal)?;
                writeln!(out, "simulated   {:.10}", v.simulated)?;
                writeln!(out, "written     {}", a.out.display())?;
            }
            Ok(if v.passed { EXIT_OK } else { EXIT_NUMERICAL })
        }
        Command::Verify(a) => {
            let s = resolve_scenario(&a.scenario)?;
            let r = QuantumRealization::load(&a.realization)?;
            let v = verify_realization(&r, &s)?;
            if a.json {
                print_json(out, &v)?;
            } else {
                writeln!(out, "scenario    {}", v.scenario)?;
                writeln!(out, "dimension   {}", v.dimension)?;
                writeln!(out, "simulated   {:.10}", v.simulated)?;
                if let (Some(p), Some(d), Some(tol)) = (v.recorded_primal, v.deviation, v.allowed) {
                    writeln!(out, "recorded    {p:.10}")?;
                    writeln!(out, "deviation   {d:.3e} (allowed {tol:.1e})")?;
                }
                writeln!(out, "invariants  {:.3e}", v.invariant_violation)?;
                writeln!(out, "{}", if v.passed { "PASS" } else { "FAIL" })?;
            }
            Ok(if v.passed { EXIT_OK } else { EXIT_NUMERICAL })
        }
        Command::LgRegion(a) => {
            let pts = regions::sample_surface(a.grid)?;
            match &a.out {
                Some(path) => {
                    let f = std::io::BufWriter::new(std::fs::File::create(path)?);
                    regions::write_surface_csv(&pts, f)?;
                    writeln!(out, "{} points written to {}", pts.len(), path.display())?;
                }
                None => regions::write_surface_csv(&pts, &mut *out)?,
            }
            Ok(EXIT_OK)
        }
        Command::Ncycle(a) => {
            let analytic = catalog::ncycle_bound(a.n)?;
            let sdp_value = if a.solve {
                let p = catalog::ncycle(&catalog::NCycleSpec::canonical(a.n)?);
                Some(sdp::solve_correlation(&p, 1e-10)?.primal_value)
            } else {
                None
            };
            let r = NcycleReport {
                n: a.n,
                analytic,
                sdp: sdp_value,
                difference: sdp_value.map(|v| v - analytic),
            };
            if a.json {
                print_json(out, &r)?;
            } else {
                writeln!(out, "N           {}", r.n)?;
                writeln!(out, "N cos(pi/N) {:.12}", r.analytic)?;
                if let (Some(v), Some(d)) = (r.sdp, r.difference) {
                    writeln!(out, "sdp         {v:.12}")?;
                    writeln!(out, "difference  {d:.3e}")?;
                }
            }
            Ok(EXIT_OK)
        }
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with_args<I, T, W>(args: I, out: &mut W, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
    W: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match run(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
