//! Command-line driver.
//!
//! Exit codes: 0 success; 1 a numerical assertion failed (named on
//! stderr); 2 the level equation could not be solved; 3 the symbolic
//! verification did not give the expected verdicts; 64 bad usage or
//! configuration; 74 output could not be written.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use hdl_core::spectrum::{nonrel_level, solve_level, spectral_fn};
use hdl_core::symalg::{builtin_generators, parse_operator, potential, verify_conditions, Condition, Generator, OperatorExpr, Rational};
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::converge::{decreasing_with_slack, fit_order};
use crate::grid::{
    build_l, commutator_residual, dirac_low_values, level_count, nonrel_low_values, solve_dirac_levels, DiracOp, GridLevels, GridSpec,
};
use crate::higgs::{analyze_level, HiggsError, HiggsOps};
use crate::io::{write_binary, write_csv};
use crate::report::{
    spectrum_table, write_json, write_rows, ConservationRow, ConvergeRow, EigenReport, Format, GeneratorJson, HiggsJson, HiggsRow,
    LimitRow, ReportError, SCHEMA,
};

pub const EXIT_ASSERTION: i32 = 1;
pub const EXIT_ROOT: i32 = 2;
pub const EXIT_SYMBOLIC: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_IO: i32 = 74;

/// Levels whose eigenvectors span the six lowest positive-energy states.
const CONSERVATION_LEVELS: usize = 4;
const CONSERVATION_VECTORS: usize = 6;
/// Small `k` standing in for the limit `k → 0⁺`.
const K_SMALL: f64 = 1e-6;
const LIMIT_TOL: f64 = 1e-4;

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<ReportError> for Failure {
    fn from(e: ReportError) -> Self {
        Failure::new(EXIT_IO, format!("cannot write report: {e}"))
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::new(EXIT_IO, format!("cannot write output: {e}"))
    }
}

#[derive(Parser, Debug)]
#[command(name = "hdl", version, about = "Dirac oscillator with a Smorodinsky-Winternitz potential: spectra and symmetry checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Analytic level table: energies, degeneracies, weights, Casimir values.
    Spectrum(SpectrumArgs),
    /// Exact check of the four block conditions for D1, D2, Q3 and L.
    VerifySymbolic(SymbolicArgs),
    /// Commutators of the realized generators with the grid Hamiltonian.
    VerifyNumeric(NumericArgs),
    /// Higgs-algebra relations on each degenerate eigenspace.
    Higgs(HiggsArgs),
    /// Eigenvalue errors across a sequence of grids, with fitted orders.
    Converge(ConvergeArgs),
    /// Small-k and nonrelativistic limits of the level equation.
    Limits(Common),
}

#[derive(Args, Debug, Default)]
pub struct Common {
    /// Strength of the x2^-2 barrier.
    #[arg(long)]
    pub k: Option<String>,
    /// Interior points per axis: M or M1,M2.
    #[arg(long)]
    pub grid: Option<String>,
    /// Box half-widths: L or L1,L2.
    #[arg(long = "box")]
    pub box_: Option<String>,
    /// Highest total quantum number.
    #[arg(long)]
    pub n_max: Option<String>,
    /// Root-solver tolerance.
    #[arg(long)]
    pub tol: Option<String>,
    /// Eigenvalue clustering tolerance.
    #[arg(long)]
    pub cluster_tol: Option<String>,
    /// Output file (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub format: Option<Format>,
    /// Flat key = value configuration file; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub common: Common,
    /// Add the nonrelativistic level N + 3/2 + sqrt(k + 1/4).
    #[arg(long)]
    pub nonrel: bool,
}

#[derive(Args, Debug)]
pub struct SymbolicArgs {
    #[command(flatten)]
    pub common: Common,
    /// Custom upper-right block Q12 (Q21 = Q12); checks this candidate only.
    #[arg(long, visible_alias = "q12")]
    pub operator: Option<String>,
    /// Custom lower-right block Q22 for --operator (default 0).
    #[arg(long)]
    pub q22: Option<String>,
    /// Substitute a rational value for k before checking.
    #[arg(long)]
    pub k_numeric: Option<String>,
}

#[derive(Args, Debug)]
pub struct NumericArgs {
    #[command(flatten)]
    pub common: Common,
    /// Also write the Hamiltonian matrix (binary, or CSV for a .csv path).
    #[arg(long)]
    pub export: Option<PathBuf>,
    /// Write the clustered eigenvalues as JSON to this path.
    #[arg(long)]
    pub eigen_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct HiggsArgs {
    #[command(flatten)]
    pub common: Common,
    /// Levels to check, e.g. 0..3 (inclusive).
    #[arg(long)]
    pub levels: Option<String>,
}

#[derive(Args, Debug)]
pub struct ConvergeArgs {
    #[command(flatten)]
    pub common: Common,
    /// Comma-separated square grid sizes.
    #[arg(long)]
    pub grids: Option<String>,
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::new(EXIT_USAGE, e.to_string())
}

fn configure(c: &Common, extra: &[(&str, &Option<String>)]) -> Result<RunConfig, Failure> {
    let mut cfg = match &c.config {
        Some(p) => RunConfig::load(p).map_err(usage)?,
        None => RunConfig::default(),
    };
    let flags = [
        ("k", &c.k),
        ("grid", &c.grid),
        ("box", &c.box_),
        ("n_max", &c.n_max),
        ("root_tol", &c.tol),
        ("cluster_tol", &c.cluster_tol),
    ];
    for (key, value) in flags.iter().chain(extra) {
        if let Some(v) = value {
            cfg.set(key, v, &format!("--{}", key.replace('_', "-"))).map_err(usage)?;
        }
    }
    if let Some(f) = c.format {
        cfg.format = f;
    }
    if let Some(o) = &c.out {
        cfg.out = Some(o.clone());
    }
    Ok(cfg)
}

fn output(cfg: &RunConfig) -> Result<Box<dyn Write>, Failure> {
    Ok(match &cfg.out {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", p.display())))?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn check_grid(spec: &GridSpec) -> Result<(), Failure> {
    spec.validate().map_err(usage)
}

fn warn_small_k(k: f64) {
    if k > 0.0 && k < 0.1 {
        eprintln!("warning: k = {k} is below 0.1; grid results near the x2 = 0 axis are not validated there");
    }
}

fn cmd_spectrum(a: &SpectrumArgs) -> Result<(), Failure> {
    let cfg = configure(&a.common, &[])?;
    let rows = spectrum_table(cfg.k, cfg.n_max, cfg.root_tol, a.nonrel)
        .map_err(|e| Failure::new(EXIT_ROOT, format!("level equation: {e}")))?;
    let mut out = output(&cfg)?;
    write_rows(&rows, cfg.format, &mut out)?;
    out.flush()?;
    Ok(())
}

fn parse_rational(s: &str) -> Option<Rational> {
    let e = parse_operator(s).ok()?;
    if e.is_zero_canonical() {
        return Some(Rational::from_integer(0));
    }
    if !e.is_scalar() {
        return None;
    }
    let (_, c) = e.iter().next()?;
    let g = c.as_constant()?;
    (g.im == Rational::from_integer(0)).then_some(g.re)
}

fn cmd_verify_symbolic(a: &SymbolicArgs) -> Result<(), Failure> {
    let cfg = configure(&a.common, &[])?;
    let k_value = match &a.k_numeric {
        Some(s) => Some(parse_rational(s).ok_or_else(|| usage(format!("--k-numeric: '{s}' is not a real rational")))?),
        None => None,
    };
    let specialize_v = |v: OperatorExpr| match &k_value {
        Some(k) => v.substitute_k(k),
        None => v,
    };
    let specialize = |g: Generator| match &k_value {
        Some(k) => g.substitute_k(k),
        None => g,
    };
    let v = specialize_v(potential());

    let custom = a.operator.is_some() || a.q22.is_some();
    let generators: Vec<Generator> = if custom {
        let parse = |label: &str, text: &Option<String>| match text {
            Some(t) => parse_operator(t).map_err(|e| usage(format!("{label}: {e}"))),
            None => Ok(OperatorExpr::zero()),
        };
        let q12 = parse("--operator", &a.operator)?;
        let q22 = parse("--q22", &a.q22)?;
        let g = Generator::from_blocks("custom", q12, q22, &potential()).map_err(|e| Failure::new(EXIT_SYMBOLIC, format!("custom: {e}")))?;
        vec![specialize(g)]
    } else {
        builtin_generators().iter().cloned().map(specialize).collect()
    };

    let mut reports = Vec::new();
    for g in &generators {
        let r = verify_conditions(g, &v).map_err(|e| Failure::new(EXIT_SYMBOLIC, format!("{}: {e}", g.name)))?;
        reports.push(r);
    }

    let mut out = output(&cfg)?;
    if cfg.format == Format::Json {
        let json: Vec<GeneratorJson> = reports.iter().map(GeneratorJson::from).collect();
        write_json(&json, &mut out)?;
    } else {
        for r in &reports {
            write!(out, "{r}")?;
        }
        let summary: Vec<String> = reports.iter().map(|r| format!("{} {}", r.name, r.verdict())).collect();
        writeln!(out, "{}", summary.join(", "))?;
    }
    out.flush()?;

    if custom {
        let r = &reports[0];
        if !r.all_passed() {
            return Err(Failure::new(EXIT_ASSERTION, format!("custom candidate fails condition(s) {}", r.verdict())));
        }
        return Ok(());
    }
    let mut unexpected = Vec::new();
    for r in &reports {
        let ok = if r.name == "L" {
            r.failed() == [Condition::II]
        } else {
            r.all_passed()
        };
        if !ok {
            unexpected.push(format!("{} {}", r.name, r.verdict()));
        }
    }
    if unexpected.is_empty() {
        Ok(())
    } else {
        Err(Failure::new(
            EXIT_SYMBOLIC,
            format!("block conditions: unexpected verdicts {} (expected D1, D2, Q3 PASS and L FAIL(ii))", unexpected.join(", ")),
        ))
    }
}

fn solve_levels(cfg: &RunConfig, n_levels: usize) -> Result<GridLevels, Failure> {
    check_grid(&cfg.grid)?;
    warn_small_k(cfg.k);
    solve_dirac_levels(cfg.k, &cfg.grid, n_levels, cfg.cluster_tol).map_err(|e| Failure::new(EXIT_ASSERTION, format!("grid spectrum: {e}")))
}

fn export_matrix(h: &DiracOp, path: &Path) -> Result<(), Failure> {
    let f = File::create(path).map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", path.display())))?;
    let w = BufWriter::new(f);
    let m = h.dense();
    let res = if path.extension().is_some_and(|e| e == "csv") {
        write_csv(w, &m)
    } else {
        write_binary(w, &m)
    };
    res.map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", path.display())))
}

fn cmd_verify_numeric(a: &NumericArgs) -> Result<(), Failure> {
    let cfg = configure(&a.common, &[])?;
    let lv = solve_levels(&cfg, CONSERVATION_LEVELS)?;
    for n in 0..CONSERVATION_LEVELS as u32 {
        lv.level(n).map_err(|e| Failure::new(EXIT_ASSERTION, format!("degeneracy d = floor(N/2)+1: {e}")))?;
    }
    if let Some(p) = &a.export {
        export_matrix(&lv.h, p)?;
    }
    if let Some(p) = &a.eigen_out {
        let f = File::create(p).map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", p.display())))?;
        write_json(&EigenReport::new(cfg.k, cfg.grid, &lv.spaces), BufWriter::new(f))?;
    }

    let low = lv.low.window_above(1.0, CONSERVATION_VECTORS);
    let ops = HiggsOps::build(cfg.k, &lv.prim);
    let l = build_l(&lv.prim);
    let named: [(&str, &DiracOp); 5] = [("H", &lv.h), ("T1", &ops.t1), ("T2", &ops.t2), ("T3", &ops.t3), ("L", &l)];
    let rows: Vec<ConservationRow> = named
        .iter()
        .map(|(name, op)| {
            let r = commutator_residual(op, &lv.h, Some(&low));
            ConservationRow {
                schema: SCHEMA,
                operator: name.to_string(),
                k: cfg.k,
                M1: cfg.grid.m1,
                M2: cfg.grid.m2,
                full: r.full,
                projected: r.projected.unwrap_or(f64::NAN),
            }
        })
        .collect();
    let mut out = output(&cfg)?;
    write_rows(&rows, cfg.format, &mut out)?;
    out.flush()?;

    // L is only a control when the barrier breaks rotational symmetry.
    if cfg.k >= 0.1 {
        let l_res = rows[4].projected;
        let worst_t = rows[1..4].iter().map(|r| r.projected).fold(0.0, f64::max);
        if !(l_res > 10.0 * worst_t) {
            return Err(Failure::new(
                EXIT_ASSERTION,
                format!("[T,H] = 0 versus the L control: L residual {l_res:.3e} is not well above the generators' {worst_t:.3e}"),
            ));
        }
    }
    Ok(())
}

fn higgs_failure(e: HiggsError) -> Failure {
    match e {
        HiggsError::Spectrum(s) => Failure::new(EXIT_ROOT, format!("level equation: {s}")),
        other => Failure::new(EXIT_ASSERTION, format!("Higgs frame: {other}")),
    }
}

fn cmd_higgs(a: &HiggsArgs) -> Result<(), Failure> {
    let cfg = configure(&a.common, &[("levels", &a.levels)])?;
    let n_levels = *cfg.levels.end() as usize + 1;
    let lv = solve_levels(&cfg, n_levels)?;
    let ops = HiggsOps::build(cfg.k, &lv.prim);
    let reports: Vec<_> = cfg
        .levels
        .clone()
        .into_par_iter()
        .map(|n| analyze_level(&lv, &ops, n, &cfg.higgs))
        .collect::<Result<_, _>>()
        .map_err(higgs_failure)?;

    let mut out = output(&cfg)?;
    match cfg.format {
        Format::Json => write_json(
            &HiggsJson {
                schema: SCHEMA,
                k: cfg.k,
                grid: cfg.grid,
                levels: &reports,
            },
            &mut out,
        )?,
        Format::Csv => {
            let rows: Vec<HiggsRow> = reports.iter().map(|r| HiggsRow::new(cfg.k, &cfg.grid, r)).collect();
            write_rows(&rows, Format::Csv, &mut out)?;
        }
    }
    out.flush()?;

    if let Some(v) = reports.iter().flat_map(|r| cfg.thresholds.violations(r)).next() {
        return Err(Failure::new(EXIT_ASSERTION, format!("Higgs relations: {v}")));
    }
    Ok(())
}

/// Largest error per level against `exact`, pairing the ascending grid
/// eigenvalues with the analytic levels repeated by degeneracy.
fn level_errors(values: &[f64], exact: &[f64]) -> Vec<f64> {
    let mut errs = vec![0.0f64; exact.len()];
    let mut i = 0;
    for (n, &e) in exact.iter().enumerate() {
        for _ in 0..n / 2 + 1 {
            if let Some(v) = values.get(i) {
                errs[n] = errs[n].max((v - e).abs());
            } else {
                errs[n] = f64::NAN;
            }
            i += 1;
        }
    }
    errs
}

fn cmd_converge(a: &ConvergeArgs) -> Result<(), Failure> {
    let cfg = configure(&a.common, &[("grids", &a.grids)])?;
    let n_levels = cfg.n_max as usize + 1;
    let dirac_exact: Vec<f64> = (0..n_levels as u32)
        .map(|n| solve_level(n, cfg.k, cfg.root_tol).map(|l| l.e))
        .collect::<Result<_, _>>()
        .map_err(|e| Failure::new(EXIT_ROOT, format!("level equation: {e}")))?;
    let nonrel_exact: Vec<f64> = (0..n_levels as u32).map(|n| nonrel_level(n, cfg.k)).collect();
    warn_small_k(cfg.k);

    let specs: Vec<GridSpec> = cfg
        .grids
        .iter()
        .map(|&m| GridSpec { m1: m, m2: m, ..cfg.grid })
        .collect();
    for s in &specs {
        check_grid(s)?;
    }
    let per_grid: Vec<(Vec<f64>, Vec<f64>)> = specs
        .par_iter()
        .map(|s| {
            let count = level_count(n_levels);
            let dirac = dirac_low_values(cfg.k, s, count)
                .map_err(|e| Failure::new(EXIT_ASSERTION, format!("grid spectrum M={}: {e}", s.m1)))?;
            let nonrel = nonrel_low_values(cfg.k, s, count)
                .map_err(|e| Failure::new(EXIT_ASSERTION, format!("nonrelativistic spectrum M={}: {e}", s.m1)))?;
            Ok((level_errors(&dirac, &dirac_exact), level_errors(&nonrel, &nonrel_exact)))
        })
        .collect::<Result<_, Failure>>()?;

    let mut rows = Vec::new();
    let mut worst_by_grid = vec![0.0f64; specs.len()];
    for (quantity, pick) in [("dirac", 0usize), ("nonrel", 1)] {
        for level in 0..n_levels {
            let errs: Vec<f64> = per_grid.iter().map(|g| if pick == 0 { g.0[level] } else { g.1[level] }).collect();
            let order = fit_order(&cfg.grids, &errs);
            for (gi, (&m, &e)) in cfg.grids.iter().zip(&errs).enumerate() {
                worst_by_grid[gi] = worst_by_grid[gi].max(e);
                rows.push(ConvergeRow {
                    schema: SCHEMA,
                    quantity: quantity.to_string(),
                    level,
                    M: m,
                    error: e,
                    order,
                });
            }
        }
    }
    let mut out = output(&cfg)?;
    write_rows(&rows, cfg.format, &mut out)?;
    out.flush()?;

    if !decreasing_with_slack(&worst_by_grid, 0.1, 1e-9) {
        return Err(Failure::new(
            EXIT_ASSERTION,
            format!("eigenvalue convergence: largest errors {worst_by_grid:?} do not decrease with refinement"),
        ));
    }
    Ok(())
}

/// Root of `√((E+1)/2)(E−1) = N + 2` by bisection.
pub fn k0_level(n: u32) -> f64 {
    let target = f64::from(n) + 2.0;
    let f = |e: f64| ((e + 1.0) / 2.0).sqrt() * (e - 1.0) - target;
    let (mut lo, mut hi) = (1.0, 2.0);
    while f(hi) < 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn cmd_limits(c: &Common) -> Result<(), Failure> {
    let cfg = configure(c, &[])?;
    let mut rows = Vec::new();
    for n in 0..=cfg.n_max {
        let small = solve_level(n, K_SMALL, cfg.root_tol).map_err(|e| Failure::new(EXIT_ROOT, format!("level equation: {e}")))?;
        let e0 = k0_level(n);
        // Guards against the bisection settling on a non-root.
        debug_assert!(spectral_fn(e0, n, 0.0).map(|v| v.abs() < 1e-9).unwrap_or(false));
        rows.push(LimitRow {
            schema: SCHEMA,
            N: n,
            k_small: K_SMALL,
            E_k_small: small.e,
            E_k0: e0,
            difference: small.e - e0,
            E_nonrel: nonrel_level(n, cfg.k),
        });
    }
    let mut out = output(&cfg)?;
    write_rows(&rows, cfg.format, &mut out)?;
    out.flush()?;
    if let Some(r) = rows.iter().find(|r| !(r.difference.abs() < LIMIT_TOL)) {
        return Err(Failure::new(
            EXIT_ASSERTION,
            format!("k -> 0 limit: N={} differs by {:.3e} from the k = 0 equation", r.N, r.difference),
        ));
    }
    Ok(())
}

pub fn dispatch(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::VerifySymbolic(a) => cmd_verify_symbolic(a),
        Command::VerifyNumeric(a) => cmd_verify_numeric(a),
        Command::Higgs(a) => cmd_higgs(a),
        Command::Converge(a) => cmd_converge(a),
        Command::Limits(c) => cmd_limits(c),
    }
}

/// Parses `args` (including the program name), runs, and returns the exit
/// code. Diagnostics go to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Some(n) = crate::config::thread_cap() {
        // A pool may already exist when called repeatedly in one process.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match dispatch(&cli) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}
