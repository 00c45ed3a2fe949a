//! Command-line driver: conditioning sweeps of the RC benchmark and the
//! layered capacitor, and stabilized field solves with CSV and VTK output.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use lowfreq::blocks::TwoBlockSystem;
use lowfreq::circuit::{rc_benchmark, rc_condition_closed_form, MnaOperators, RcVariant};
use lowfreq::fem::{displacement_field, write_vtk, CapacitorConfig, FemSystem};
use lowfreq::numkit::{condition_number, Norm, SolverError, C64};
use lowfreq::stabilize::{
    scale_system_with, scaled_condition_in, BlockSolver, Domain, Scaling, ScalingVariant, SolveMethod,
    StabilizeError, VariantParams,
};
use lowfreq::timestep::{run_transient, InitialState, TransientConfig};

#[derive(Debug, Parser)]
#[command(name = "lowfreq", version, about = "Low-frequency stable scalings for RC circuits and EQS fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Condition numbers of the two-node RC benchmark against frequency.
    CircuitSweep(CircuitSweepArgs),
    /// Condition numbers of the capacitor model against frequency or time step.
    FieldSweep(FieldSweepArgs),
    /// Solves the capacitor model and writes fields and a summary.
    Solve(SolveArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormArg {
    #[value(name = "1")]
    One,
    Inf,
}

impl From<NormArg> for Norm {
    fn from(n: NormArg) -> Self {
        match n {
            NormArg::One => Norm::One,
            NormArg::Inf => Norm::Inf,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolverArg {
    Lu,
    Bicgstab,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Axis {
    /// Frequency in Hz.
    Freq,
    /// Implicit Euler step size in s.
    Dt,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// Smallest grid value (Hz or s).
    #[arg(long)]
    pub min: Option<f64>,
    /// Largest grid value (Hz or s).
    #[arg(long)]
    pub max: Option<f64>,
    /// Number of log-spaced points.
    #[arg(long)]
    pub points: Option<usize>,
    /// Adds the static limit (f = 0 or dt = inf).
    #[arg(long)]
    pub include_static: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Flat key = value configuration file.
    #[arg(long, conflicts_with = "preset")]
    pub config: Option<PathBuf>,
    /// Named preset: toy-capacitor or fine-capacitor.
    #[arg(long)]
    pub preset: Option<String>,
    /// Mesh divisions, N or NxNxN.
    #[arg(long)]
    pub mesh: Option<String>,
    /// Reference angular frequency of variant vi in rad/s.
    #[arg(long, default_value_t = 0.0)]
    pub omega0: f64,
}

#[derive(Debug, Clone, Args)]
pub struct CircuitSweepArgs {
    /// Resistance in ohm.
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
    /// Capacitance of both capacitors in F.
    #[arg(long, default_value_t = 1e12)]
    pub c: f64,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Formulations to report: orig, i, iii.
    #[arg(long = "variant", value_delimiter = ',', default_values_t = ["orig".to_string(), "i".to_string(), "iii".to_string()])]
    pub variants: Vec<String>,
    #[arg(long, value_enum, default_value = "1")]
    pub norm: NormArg,
    /// CSV destination; standard output if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct FieldSweepArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_enum, default_value = "dt")]
    pub axis: Axis,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Comma-separated variants; all if omitted.
    #[arg(long = "variant", value_delimiter = ',')]
    pub variants: Vec<String>,
    #[arg(long, value_enum, default_value = "inf")]
    pub norm: NormArg,
    /// Also solve every point and report residuals (and iterations for bicgstab).
    #[arg(long, value_enum)]
    pub solver: Option<SolverArg>,
    /// ILU(0) instead of exact LU for the block preconditioner and for bicgstab.
    #[arg(long)]
    pub ilu: bool,
    #[arg(long, default_value_t = 1e-15)]
    pub tol: f64,
    #[arg(long, default_value_t = 20_000)]
    pub maxit: usize,
    /// CSV destination; standard output if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value = "iv")]
    pub variant: String,
    /// Frequency in Hz for a time-harmonic solve; the configured frequency if omitted, 0 for the static limit.
    #[arg(long, conflicts_with = "dt")]
    pub freq: Option<f64>,
    /// Step size in s: one implicit Euler step from rest, or the step of a transient run.
    #[arg(long)]
    pub dt: Option<f64>,
    /// Runs implicit Euler steps under a sinusoidal excitation.
    #[arg(long, requires = "dt")]
    pub transient: bool,
    /// End time of a transient run in s; one period if omitted.
    #[arg(long)]
    pub t_end: Option<f64>,
    /// Record every n-th step of a transient run.
    #[arg(long, default_value_t = 1)]
    pub stride: usize,
    /// Mesh nodes whose potential a transient run records.
    #[arg(long = "probe", value_delimiter = ',')]
    pub probes: Vec<usize>,
    #[arg(long, value_enum, default_value = "lu")]
    pub solver: SolverArg,
    /// ILU(0) for bicgstab (or for the block preconditioner of v and vi).
    #[arg(long)]
    pub ilu: bool,
    #[arg(long, default_value_t = 1e-15)]
    pub tol: f64,
    #[arg(long, default_value_t = 20_000)]
    pub maxit: usize,
    #[arg(long, value_enum, default_value = "inf")]
    pub norm: NormArg,
    /// VTK file; transient runs append the sample index to the stem.
    #[arg(long)]
    pub vtk: Option<PathBuf>,
    /// Time-series CSV of a transient run.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// A table in the sweep CSV layout.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn write_csv(&self, out: &mut impl Write) -> io::Result<()> {
        writeln!(out, "{}", self.header.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format_number(*v)).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }
}

/// Scientific notation with `inf` and `nan` spelled out.
pub fn format_number(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v:.9e}")
    }
}

/// Outcome of a sweep: the table plus points that failed.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub table: Table,
    pub failures: Vec<String>,
}

fn log_grid(min: f64, max: f64, points: usize) -> Result<Vec<f64>> {
    if !(min > 0.0 && max >= min && max.is_finite()) {
        bail!("grid needs 0 < min <= max < inf, got min {min}, max {max}");
    }
    if points == 0 {
        bail!("grid needs at least one point");
    }
    if points == 1 {
        return Ok(vec![min]);
    }
    let (lo, hi) = (min.log10(), max.log10());
    Ok((0..points)
        .map(|k| 10f64.powf(lo + (hi - lo) * k as f64 / (points - 1) as f64))
        .collect())
}

impl GridArgs {
    fn values(&self, default: (f64, f64, usize)) -> Result<Vec<f64>> {
        log_grid(
            self.min.unwrap_or(default.0),
            self.max.unwrap_or(default.1),
            self.points.unwrap_or(default.2),
        )
    }
}

pub fn circuit_sweep(args: &CircuitSweepArgs) -> Result<SweepResult> {
    if !(args.r > 0.0 && args.c > 0.0 && args.r.is_finite() && args.c.is_finite()) {
        bail!("R and C must be positive, got R = {}, C = {}", args.r, args.c);
    }
    let variants: Vec<(RcVariant, ScalingVariant)> = args
        .variants
        .iter()
        .map(|name| match name.as_str() {
            "orig" => Ok((RcVariant::Original, ScalingVariant::Original)),
            "i" => Ok((RcVariant::SymI, ScalingVariant::SymI)),
            "iii" => Ok((
                RcVariant::SymMatIII,
                ScalingVariant::SymMatIII {
                    sigma1: 1.0 / args.r,
                    eps1: args.c,
                    eps2: 2.0 * args.c,
                },
            )),
            other => Err(anyhow!("circuit-sweep supports orig, i and iii, got `{other}`")),
        })
        .collect::<Result<_>>()?;
    let mut freqs = args.grid.values((1e-20, 1e40, 61))?;
    if args.grid.include_static {
        freqs.insert(0, 0.0);
    }
    let sys = MnaOperators::new(&rc_benchmark(args.r, args.c)?)?.two_block();
    let norm: Norm = args.norm.into();

    let mut header = vec!["f_Hz".to_string()];
    header.extend(args.variants.iter().map(|v| format!("kappa_{v}")));
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for &f in &freqs {
        let w = 2.0 * std::f64::consts::PI * f;
        let mut row = vec![f];
        for &(closed, variant) in &variants {
            let kappa = rc_condition_closed_form(args.r, args.c, w, closed, norm).kappa;
            let numeric = Scaling::new(&sys, variant, Domain::Frequency(w))
                .map_err(anyhow::Error::from)
                .and_then(|s| Ok(condition_number(&s.matrix(&sys), norm)?));
            match numeric {
                Ok(k) if agrees(k, kappa) => {}
                Ok(k) => failures.push(format!(
                    "f = {f:e} Hz, {}: closed form {kappa:e} but numeric estimate {k:e}",
                    variant.name()
                )),
                Err(e) => failures.push(format!("f = {f:e} Hz, {}: {e}", variant.name())),
            }
            row.push(kappa);
        }
        rows.push(row);
    }
    Ok(SweepResult {
        table: Table { header, rows },
        failures,
    })
}

fn agrees(a: f64, b: f64) -> bool {
    (a.is_infinite() && b.is_infinite()) || (a - b).abs() <= 1e-6 * b.abs()
}

/// Capacitor configuration from `--config`, `--preset` and `--mesh`.
pub fn load_config(model: &ModelArgs) -> Result<CapacitorConfig> {
    let mut cfg = match (&model.config, &model.preset) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            CapacitorConfig::parse(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        (None, Some(name)) => CapacitorConfig::preset(name)
            .ok_or_else(|| anyhow!("unknown preset `{name}` (expected toy-capacitor or fine-capacitor)"))?,
        (None, None) => CapacitorConfig::default(),
    };
    if let Some(mesh) = &model.mesh {
        cfg = CapacitorConfig::parse(&format!("mesh = {mesh}"))
            .map(|m| CapacitorConfig {
                divisions: m.divisions,
                ..cfg
            })
            .map_err(|_| anyhow!("--mesh must be N or NxNxN, got `{mesh}`"))?;
    }
    Ok(cfg)
}

fn variant_params(cfg: &CapacitorConfig, omega0: f64) -> VariantParams {
    let (sigma1, eps1, eps2) = cfg.scaling_materials();
    VariantParams {
        sigma1,
        eps1,
        eps2,
        omega0,
    }
}

fn parse_variants(names: &[String], params: &VariantParams) -> Result<Vec<ScalingVariant>> {
    let names: Vec<&str> = if names.is_empty() {
        ScalingVariant::NAMES.to_vec()
    } else {
        names.iter().map(String::as_str).collect()
    };
    Ok(names
        .iter()
        .map(|n| ScalingVariant::from_name(n, params))
        .collect::<Result<_, _>>()?)
}

fn block_solver(ilu: bool) -> BlockSolver {
    if ilu {
        BlockSolver::Ilu
    } else {
        BlockSolver::Lu
    }
}

fn solve_method(solver: SolverArg, tol: f64, maxit: usize, ilu: bool) -> SolveMethod {
    match solver {
        SolverArg::Lu => SolveMethod::Lu,
        SolverArg::Bicgstab => SolveMethod::Bicgstab { tol, maxit, ilu },
    }
}

pub fn field_sweep(args: &FieldSweepArgs) -> Result<SweepResult> {
    let cfg = load_config(&args.model)?;
    let variants = parse_variants(&args.variants, &variant_params(&cfg, args.model.omega0))?;
    let sys = cfg.build()?.partition();
    let (axis_name, mut grid) = match args.axis {
        Axis::Freq => ("f_Hz", args.grid.values((1e-6, 1e6, 13))?),
        Axis::Dt => ("dt_s", args.grid.values((1e-10, 1e10, 21))?),
    };
    if args.grid.include_static {
        match args.axis {
            Axis::Freq => grid.insert(0, 0.0),
            Axis::Dt => grid.push(f64::INFINITY),
        }
    }
    let domain = |x: f64| match args.axis {
        Axis::Freq if x == 0.0 => Domain::Static,
        Axis::Freq => Domain::Frequency(2.0 * std::f64::consts::PI * x),
        Axis::Dt if x.is_infinite() => Domain::Static,
        Axis::Dt => Domain::TimeStep(x),
    };

    let mut header = vec![axis_name.to_string()];
    header.extend(variants.iter().map(|v| format!("kappa_{}", v.name())));
    if let Some(solver) = args.solver {
        header.extend(variants.iter().map(|v| format!("residual_{}", v.name())));
        if solver == SolverArg::Bicgstab {
            header.extend(variants.iter().map(|v| format!("iters_{}", v.name())));
        }
    }
    let rows_and_failures: Vec<(Vec<f64>, Vec<String>)> = std::thread::scope(|scope| {
        let handles: Vec<_> = grid
            .iter()
            .map(|&x| {
                let (sys, variants) = (&sys, &variants);
                scope.spawn(move || sweep_point(args, sys, variants, x, domain(x)))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("sweep worker panicked")).collect()
    });
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (row, fails) in rows_and_failures {
        rows.push(row);
        failures.extend(fails);
    }
    Ok(SweepResult {
        table: Table { header, rows },
        failures,
    })
}

fn sweep_point(
    args: &FieldSweepArgs,
    sys: &TwoBlockSystem,
    variants: &[ScalingVariant],
    x: f64,
    domain: Domain,
) -> (Vec<f64>, Vec<String>) {
    let mut failures = Vec::new();
    let mut kappas = Vec::new();
    let mut residuals = Vec::new();
    let mut iterations = Vec::new();
    for &v in variants {
        match scaled_condition_in(sys, v, domain, block_solver(args.ilu), args.norm.into()) {
            Ok(k) => kappas.push(k),
            Err(e) => {
                failures.push(format!("{x:e}, {}: {e}", v.name()));
                kappas.push(f64::NAN);
            }
        }
        if let Some(solver) = args.solver {
            let method = solve_method(solver, args.tol, args.maxit, args.ilu);
            match scale_system_with(sys, v, domain, block_solver(args.ilu)).and_then(|s| s.solve(method)) {
                Ok(report) => {
                    residuals.push(report.residual);
                    iterations.push(report.iterations.map_or(f64::NAN, |n| n as f64));
                }
                Err(StabilizeError::Solver(SolverError::SingularMatrix { .. })) => {
                    residuals.push(f64::INFINITY);
                    iterations.push(f64::NAN);
                }
                Err(StabilizeError::Solver(SolverError::NoConvergence { iterations: n, residual, .. })) => {
                    residuals.push(residual);
                    iterations.push(n as f64);
                }
                Err(e) => {
                    failures.push(format!("{x:e}, {} solve: {e}", v.name()));
                    residuals.push(f64::NAN);
                    iterations.push(f64::NAN);
                }
            }
        }
    }
    let mut row = vec![x];
    row.extend(kappas);
    if let Some(solver) = args.solver {
        row.extend(residuals);
        if solver == SolverArg::Bicgstab {
            row.extend(iterations);
        }
    }
    (row, failures)
}

/// Explains the two errors a user can act on.
fn explain(e: StabilizeError, variant: ScalingVariant) -> anyhow::Error {
    match &e {
        StabilizeError::Solver(SolverError::SingularMatrix { .. }) if variant == ScalingVariant::Original => {
            anyhow!(e).context(
                "the unscaled system is singular at zero frequency because the insulator equations vanish; \
                 choose a stabilized variant such as --variant iv",
            )
        }
        StabilizeError::IncompatibleSource { .. } => {
            anyhow!(e).context("use a variant without unknown scaling (ii, iv, v, vi or jacobi-l) or a nonzero frequency")
        }
        _ => anyhow!(e),
    }
}

/// Summary of a solve.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveSummary {
    pub variant: String,
    pub unknowns: usize,
    pub min_d: f64,
    pub max_d: f64,
    pub iterations: Option<usize>,
    pub residual: Option<f64>,
    pub kappa: Option<f64>,
    pub steps: Option<usize>,
}

impl std::fmt::Display for SolveSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "variant {}: {} unknowns, |D| min {:.6e} max {:.6e} As/m^2, iterations {}, residual {}",
            self.variant,
            self.unknowns,
            self.min_d,
            self.max_d,
            self.iterations.map_or("-".to_string(), |n| n.to_string()),
            self.residual.map_or("-".to_string(), |r| format!("{r:.3e}"))
        )?;
        if let Some(k) = self.kappa {
            write!(f, ", kappa {}", format_number(k))?;
        }
        if let Some(n) = self.steps {
            write!(f, ", {n} steps")?;
        }
        Ok(())
    }
}

fn write_field_vtk(path: &Path, title: &str, fem: &FemSystem, phi: &[f64], d: &[f64]) -> Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut out = BufWriter::new(file);
    write_vtk(&mut out, title, &fem.mesh, &[("phi", phi)], &[("D_abs", d)])?;
    out.flush()?;
    Ok(())
}

fn indexed_path(path: &Path, index: usize) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("field");
    let ext = path.extension().and_then(|s| s.to_str()).unwrap_or("vtk");
    path.with_file_name(format!("{stem}_{index:04}.{ext}"))
}

fn min_max(v: &[f64]) -> (f64, f64) {
    v.iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}

pub fn solve(args: &SolveArgs) -> Result<SolveSummary> {
    let cfg = load_config(&args.model)?;
    let variant = ScalingVariant::from_name(&args.variant, &variant_params(&cfg, args.model.omega0))?;
    let fem = cfg.build()?;
    if args.transient {
        return transient(args, &cfg, &fem, variant);
    }
    if args.out.is_some() {
        bail!("--out is only used by transient runs");
    }
    let sys = fem.partition();
    let domain = match (args.dt, args.freq) {
        (Some(dt), _) => Domain::TimeStep(dt),
        (None, Some(f)) if f == 0.0 => Domain::Static,
        (None, Some(f)) => Domain::Frequency(2.0 * std::f64::consts::PI * f),
        (None, None) => Domain::Frequency(cfg.omega()),
    };
    let scaled = scale_system_with(&sys, variant, domain, block_solver(args.ilu)).map_err(|e| explain(e, variant))?;
    let report = scaled
        .solve(solve_method(args.solver, args.tol, args.maxit, args.ilu))
        .map_err(|e| explain(e, variant))?;
    let recovered = scaled.recover(&report.xi);
    let block = recovered.block_ordered().ok_or_else(|| {
        anyhow!(
            "variant {} cannot recover the insulator potentials in the static limit; use ii, iv, v, vi or jacobi-l",
            variant.name()
        )
    })?;
    let free = sys.from_block_order(&block);
    // the excitation phasor is real, so the real part is the field at peak voltage
    let phi: Vec<f64> = fem.node_values(&free, C64::new(1.0, 0.0)).iter().map(|z| z.re).collect();
    let d = displacement_field(&fem.mesh, &fem.materials, &phi)?;
    if let Some(path) = &args.vtk {
        write_field_vtk(path, &format!("potential, variant {}", variant.name()), &fem, &phi, &d)?;
    }
    let (min_d, max_d) = min_max(&d);
    Ok(SolveSummary {
        variant: variant.name().into(),
        unknowns: sys.dim(),
        min_d,
        max_d,
        iterations: report.iterations,
        residual: Some(report.residual),
        kappa: Some(scaled.condition_estimate(args.norm.into())?),
        steps: None,
    })
}

fn transient(args: &SolveArgs, cfg: &CapacitorConfig, fem: &FemSystem, variant: ScalingVariant) -> Result<SolveSummary> {
    if args.solver != SolverArg::Lu {
        bail!("transient runs reuse one LU factorization per step size; use --solver lu");
    }
    let dt = args.dt.expect("clap requires --dt");
    let w = cfg.omega();
    let t_end = args.t_end.unwrap_or(if w > 0.0 { 2.0 * std::f64::consts::PI / w } else { 10.0 * dt });
    let tc = TransientConfig {
        dt,
        t0: 0.0,
        t_end,
        variant,
        initial: InitialState::Static,
        probes: args.probes.clone(),
        stride: args.stride,
    };
    let mut vtk_index = 0;
    let mut step = 0;
    let mut vtk_error = None;
    let run = run_transient(fem, &tc, &|t| (w * t).sin(), |model, state| {
        if step % args.stride == 0 {
            if let Some(path) = &args.vtk {
                let phi = model.node_potential(state);
                let d = displacement_field(&fem.mesh, &fem.materials, &phi)?;
                let title = format!("potential at t = {:e} s", state.t);
                if let Err(e) = write_field_vtk(&indexed_path(path, vtk_index), &title, fem, &phi, &d) {
                    vtk_error.get_or_insert(e);
                }
                vtk_index += 1;
            }
        }
        step += 1;
        Ok(())
    })
    .map_err(|e| match e {
        lowfreq::timestep::TimestepError::Stabilize(s) => explain(s, variant),
        other => anyhow!(other),
    })?;
    if let Some(e) = vtk_error {
        return Err(e);
    }
    if let Some(path) = &args.out {
        let mut header = vec!["t".to_string()];
        header.extend(args.probes.iter().map(|n| format!("phi_{n}")));
        header.push("max_D".into());
        header.push("min_D".into());
        let rows = run
            .history
            .iter()
            .map(|s| {
                let mut row = vec![s.t];
                row.extend(&s.probes);
                row.push(s.max_d);
                row.push(s.min_d);
                row
            })
            .collect();
        write_table(&Table { header, rows }, Some(path))?;
    }
    let last = run.history.last().expect("history holds the initial state");
    Ok(SolveSummary {
        variant: variant.name().into(),
        unknowns: fem.dofs.n_free(),
        min_d: last.min_d,
        max_d: last.max_d,
        iterations: None,
        residual: None,
        kappa: None,
        steps: Some(step - 1),
    })
}

pub fn write_table(table: &Table, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => {
            let file = File::create(p).with_context(|| format!("creating {}", p.display()))?;
            let mut out = BufWriter::new(file);
            table.write_csv(&mut out)?;
            out.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut out = stdout.lock();
            table.write_csv(&mut out)?;
        }
    }
    Ok(())
}

/// Runs one command; `Ok(false)` means some requested points failed.
pub fn run(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::CircuitSweep(args) => finish_sweep(circuit_sweep(args)?, args.out.as_deref()),
        Command::FieldSweep(args) => finish_sweep(field_sweep(args)?, args.out.as_deref()),
        Command::Solve(args) => {
            let summary = solve(args)?;
            println!("{summary}");
            Ok(true)
        }
    }
}

fn finish_sweep(result: SweepResult, out: Option<&Path>) -> Result<bool> {
    write_table(&result.table, out)?;
    for f in &result.failures {
        eprintln!("warning: {f}");
    }
    Ok(result.failures.is_empty())
}
