//! Command-line front end joining the closed-form model, the Monte Carlo
//! oracle, the integral checks and the empirical grid index.
//!
//! Exit codes: 0 success or agreement, 1 verification failure, 2 usage or
//! input error.

pub mod render;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use gridlsh::grid::{self, GridConfig, PointSet, RecallReport};
use gridlsh::mc::{mc_estimate_p, McEstimate};
use gridlsh::model::{
    p_at_least, p_union, p_union_printed_last_term, render as render_rational, to_f64,
};
use gridlsh::quad::{check_all, IntegralId, QuadOptions, Verdict};
use gridlsh::{Error, Exec};

pub use render::{Cell, Format, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// z-score above which `mc` and `report` flag a verification failure.
pub const Z_FAIL: f64 = 5.0;

/// Seed used by randomized subcommands in table mode when `--seed` is absent.
pub const DEFAULT_TABLE_SEED: u64 = 42;

pub const NOTE_INCLUSION_EXCLUSION: &str = "union model uses standard inclusion-exclusion; the last term is C(m,m)*p(1,m,d), not the printed C(m,m)*p(1,m-1,d)";

#[derive(Debug, Parser)]
#[command(
    name = "gridlsh",
    version,
    about = "Coverage model for multi-table grid LSH and its verification"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact p(m, ell, d) over a parameter grid
    Model(ModelArgs),
    /// Monte Carlo estimates against the exact model
    Mc(McArgs),
    /// Numeric checks of the helper integrals
    Integrals(IntegralArgs),
    /// Recall of a real shifted-grid index on uniform or CSV data
    Empirical(EmpiricalArgs),
    /// Joined model / Monte Carlo / empirical report
    Report(ReportArgs),
}

/// Inclusive integer range written `a..b` or a single value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub lo: u32,
    pub hi: u32,
}

impl Span {
    pub fn iter(&self) -> impl Iterator<Item = u32> {
        self.lo..=self.hi
    }
}

pub fn parse_span(s: &str) -> Result<Span, String> {
    let num = |t: &str| {
        t.trim()
            .parse::<u32>()
            .map_err(|e| format!("invalid value {t:?}: {e}"))
    };
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
        None => {
            let v = num(s)?;
            (v, v)
        }
    };
    if lo == 0 || lo > hi {
        return Err(format!(
            "range {s:?} must be nonempty and start at 1 or more"
        ));
    }
    Ok(Span { lo, hi })
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long, value_enum, default_value = "table")]
    pub format: Format,
    /// Worker threads (0 = all cores, 1 = sequential)
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long, value_parser = parse_span, default_value = "1")]
    pub m: Span,
    #[arg(long, value_parser = parse_span, default_value = "1")]
    pub ell: Span,
    #[arg(long, value_parser = parse_span, default_value = "1")]
    pub d: Span,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct McArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct IntegralArgs {
    #[arg(long, default_value_t = 6)]
    pub d_max: u32,
    #[arg(long, default_value_t = 6)]
    pub m_max: u32,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Monte Carlo samples per integral
    #[arg(long, default_value_t = 200_000)]
    pub samples: u64,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct IndexArgs {
    /// Number of uniform points (ignored with --input)
    #[arg(long, default_value_t = 100_000)]
    pub n: usize,
    /// Cells per axis; the query cube has side 1/grid
    #[arg(long, default_value_t = 4)]
    pub grid: u32,
    #[arg(long, default_value_t = 1000)]
    pub queries: usize,
    /// Redraw table shifts every K queries (0 = one fixed index)
    #[arg(long, default_value_t = 1)]
    pub rebuild_every: usize,
}

#[derive(Debug, Args)]
pub struct EmpiricalArgs {
    #[command(flatten)]
    pub index: IndexArgs,
    /// Dimensionality of generated points (ignored with --input)
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    #[arg(long, default_value_t = 1)]
    pub ell: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    /// CSV of points; overrides --n and --d
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Also measure recall on a real index for every row
    #[arg(long)]
    pub with_empirical: bool,
    #[command(flatten)]
    pub index: IndexArgs,
    #[command(flatten)]
    pub common: Common,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(msg: impl std::fmt::Display) -> Self {
        Outcome {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        }
    }

    fn from_table(table: &Table, format: Format, code: i32, mut stderr: String) -> Self {
        let r = table.render(format);
        stderr.push_str(&r.stderr);
        Outcome {
            code,
            stdout: r.stdout,
            stderr,
        }
    }
}

fn seed_for(seed: Option<u64>, format: Format) -> Result<u64, Outcome> {
    match (seed, format) {
        (Some(s), _) => Ok(s),
        (None, Format::Table) => Ok(DEFAULT_TABLE_SEED),
        (None, _) => Err(Outcome::usage(
            "--seed is required with --format csv or json",
        )),
    }
}

fn lib_error(e: Error) -> Outcome {
    Outcome::usage(e)
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let result = match cli.command {
        Command::Model(a) => cmd_model(&a),
        Command::Mc(a) => cmd_mc(&a),
        Command::Integrals(a) => cmd_integrals(&a),
        Command::Empirical(a) => cmd_empirical(&a),
        Command::Report(a) => cmd_report(&a),
    };
    result.unwrap_or_else(|o| o)
}

/// Valid `(m, ell, d)` combinations of the grid; `ell > m` is skipped with a
/// notice.
fn combinations(grid: &GridArgs, stderr: &mut String) -> Vec<(u32, u32, u32)> {
    let mut out = Vec::new();
    for m in grid.m.iter() {
        for ell in grid.ell.iter() {
            if ell > m {
                stderr.push_str(&format!("notice: skipping ell={ell} > m={m}\n"));
                continue;
            }
            out.extend(grid.d.iter().map(|d| (m, ell, d)));
        }
    }
    out
}

pub fn cmd_model(a: &ModelArgs) -> Result<Outcome, Outcome> {
    let mut stderr = String::new();
    let mut table = Table::new(&["m", "ell", "d", "model_exact", "model_float"]);
    table.notes.push(NOTE_INCLUSION_EXCLUSION.into());
    for (m, ell, d) in combinations(&a.grid, &mut stderr) {
        let p = p_at_least(m, ell, d).map_err(lib_error)?;
        table.push(vec![
            m.into(),
            ell.into(),
            d.into(),
            render_rational(&p).into(),
            to_f64(&p).into(),
        ]);
    }
    Ok(Outcome::from_table(
        &table,
        a.common.format,
        EXIT_OK,
        stderr,
    ))
}

fn estimate(
    m: u32,
    ell: u32,
    d: u32,
    samples: u64,
    seed: u64,
    exec: Exec,
) -> Result<(String, f64, McEstimate), Outcome> {
    let exact = p_at_least(m, ell, d).map_err(lib_error)?;
    let est = mc_estimate_p(m as usize, ell as usize, d as usize, samples, seed, exec)
        .map_err(lib_error)?;
    Ok((render_rational(&exact), to_f64(&exact), est))
}

pub fn cmd_mc(a: &McArgs) -> Result<Outcome, Outcome> {
    let seed = seed_for(a.seed, a.common.format)?;
    if a.samples == 0 {
        return Err(Outcome::usage("--samples must be positive"));
    }
    let exec = Exec::with_workers(a.common.workers);
    let mut stderr = String::new();
    let mut table = Table::new(&[
        "m",
        "ell",
        "d",
        "model_exact",
        "model_float",
        "mc_mean",
        "mc_stderr",
        "samples",
        "seed",
        "z_model_vs_mc",
    ]);
    table.notes.push(NOTE_INCLUSION_EXCLUSION.into());
    let mut code = EXIT_OK;
    for (m, ell, d) in combinations(&a.grid, &mut stderr) {
        let (exact, float, est) = estimate(m, ell, d, a.samples, seed, exec)?;
        let z = est.z_score(float);
        if z > Z_FAIL {
            code = EXIT_VERIFICATION;
        }
        table.push(vec![
            m.into(),
            ell.into(),
            d.into(),
            exact.into(),
            float.into(),
            est.mean.into(),
            est.stderr.into(),
            Cell::Int(est.samples as i64),
            Cell::Text(est.seed.to_string()),
            z.into(),
        ]);
    }
    Ok(Outcome::from_table(&table, a.common.format, code, stderr))
}

pub fn cmd_integrals(a: &IntegralArgs) -> Result<Outcome, Outcome> {
    let seed = seed_for(a.seed, a.common.format)?;
    let opts = QuadOptions {
        mc_samples: a.samples,
        seed,
        exec: Exec::with_workers(a.common.workers),
    };
    let checks = check_all(a.d_max, a.m_max, a.tol, &opts).map_err(lib_error)?;
    let mut table = Table::new(&[
        "id",
        "d",
        "m",
        "numeric",
        "tensor",
        "mc_mean",
        "mc_stderr",
        "printed_closed_form",
        "printed_float",
        "derived_closed_form",
        "derived_float",
        "literal_min_closed_form",
        "abs_err_numeric_vs_printed",
        "abs_err_numeric_vs_derived",
        "separation_stderr",
        "verdict",
    ]);
    table.notes.push(
        "MIN_* and COMBINED evaluate max(x_1..x_d)+1/2, the integrand behind the printed values; literal_min_closed_form gives the value with a literal min".into(),
    );
    table.notes.push(
        "COMBINED lists the printed form (2m+1)/(8^d (m+1) 2^(m+1)) next to the derived product form; a mismatch is a finding, not a failure".into(),
    );
    let mut code = EXIT_OK;
    for c in &checks {
        if c.id != IntegralId::Combined && c.verdict != Verdict::MatchesPrinted {
            code = EXIT_VERIFICATION;
        }
        table.push(vec![
            c.id.name().into(),
            c.d.map_or(Cell::Empty, Cell::from),
            c.m.map_or(Cell::Empty, Cell::from),
            c.numeric.into(),
            Cell::opt_num(c.tensor),
            c.mc_mean.into(),
            c.mc_stderr.into(),
            render_rational(&c.printed_closed_form).into(),
            to_f64(&c.printed_closed_form).into(),
            render_rational(&c.derived_closed_form).into(),
            to_f64(&c.derived_closed_form).into(),
            c.literal_min_closed_form
                .as_ref()
                .map_or(Cell::Empty, |r| render_rational(r).into()),
            c.abs_err_numeric_vs_printed.into(),
            c.abs_err_numeric_vs_derived.into(),
            c.separation_stderr.into(),
            c.verdict.name().into(),
        ]);
    }
    Ok(Outcome::from_table(
        &table,
        a.common.format,
        code,
        String::new(),
    ))
}

fn run_recall(
    points: &PointSet,
    idx: &IndexArgs,
    m: usize,
    ell: usize,
    seed: u64,
    exec: Exec,
) -> Result<RecallReport, Outcome> {
    let config = GridConfig::new(m, idx.grid, seed).map_err(lib_error)?;
    if idx.rebuild_every == 0 {
        let index = grid::build_index(points, config).map_err(lib_error)?;
        grid::measure_recall(&index, points, idx.queries, ell, seed, exec).map_err(lib_error)
    } else {
        grid::measure_recall_rebuilding(
            points,
            config,
            idx.queries,
            ell,
            seed,
            idx.rebuild_every,
            exec,
        )
        .map_err(lib_error)
    }
}

const NOTE_SELECTIVITY: &str = "mean_recall estimates the model p under uniform data; mean_selectivity is the fraction of the dataset returned, which differs by vol(cells)/query_volume";

pub fn cmd_empirical(a: &EmpiricalArgs) -> Result<Outcome, Outcome> {
    let seed = seed_for(a.seed, a.common.format)?;
    let exec = Exec::with_workers(a.common.workers);
    let mut stderr = String::new();
    let points = match &a.input {
        Some(path) => {
            let loaded = grid::load_csv(path)
                .map_err(|e| Outcome::usage(format!("{}: {e}", path.display())))?;
            if loaded.wrapped_values > 0 {
                stderr.push_str(&format!(
                    "warning: {} values outside [0, 1) were reduced modulo 1\n",
                    loaded.wrapped_values
                ));
            }
            loaded.points
        }
        None => grid::generate_uniform_with(a.index.n, a.d, seed, exec).map_err(lib_error)?,
    };
    let rep = run_recall(&points, &a.index, a.m, a.ell, seed, exec)?;
    let mut table = Table::new(&[
        "m",
        "ell",
        "d",
        "g",
        "n",
        "queries",
        "queries_with_neighbors",
        "index_builds",
        "mean_recall",
        "stderr_recall",
        "predicted_recall",
        "mean_selectivity",
        "query_volume",
    ]);
    table.notes.push(NOTE_SELECTIVITY.into());
    table.push(vec![
        rep.m.into(),
        rep.ell.into(),
        rep.d.into(),
        rep.g.into(),
        rep.n.into(),
        rep.queries.into(),
        rep.queries_with_neighbors.into(),
        rep.index_builds.into(),
        rep.mean_recall.into(),
        rep.stderr_recall.into(),
        rep.predicted_recall.into(),
        rep.mean_selectivity.into(),
        rep.query_volume.into(),
    ]);
    Ok(Outcome::from_table(
        &table,
        a.common.format,
        EXIT_OK,
        stderr,
    ))
}

/// Column contract of `report`.
pub const REPORT_COLUMNS: [&str; 10] = [
    "m",
    "ell",
    "d",
    "model_exact",
    "model_float",
    "mc_mean",
    "mc_stderr",
    "empirical_recall",
    "empirical_stderr",
    "z_model_vs_mc",
];

pub fn cmd_report(a: &ReportArgs) -> Result<Outcome, Outcome> {
    let seed = seed_for(a.seed, a.common.format)?;
    if a.samples == 0 {
        return Err(Outcome::usage("--samples must be positive"));
    }
    let exec = Exec::with_workers(a.common.workers);
    let mut stderr = String::new();
    let mut table = Table::new(&REPORT_COLUMNS);
    table.notes.push(NOTE_INCLUSION_EXCLUSION.into());
    let combos = combinations(&a.grid, &mut stderr);
    let mut code = EXIT_OK;
    let mut points_cache: Option<(u32, PointSet)> = None;
    for &(m, ell, d) in &combos {
        let (exact, float, est) = estimate(m, ell, d, a.samples, seed, exec)?;
        let z = est.z_score(float);
        if z > Z_FAIL {
            code = EXIT_VERIFICATION;
        }
        let empirical = if a.with_empirical {
            if points_cache.as_ref().map(|(cd, _)| *cd) != Some(d) {
                let pts = grid::generate_uniform_with(a.index.n, d as usize, seed, exec)
                    .map_err(lib_error)?;
                points_cache = Some((d, pts));
            }
            let pts = &points_cache.as_ref().expect("filled above").1;
            Some(run_recall(
                pts,
                &a.index,
                m as usize,
                ell as usize,
                seed,
                exec,
            )?)
        } else {
            None
        };
        table.push(vec![
            m.into(),
            ell.into(),
            d.into(),
            exact.into(),
            float.into(),
            est.mean.into(),
            est.stderr.into(),
            Cell::opt_num(empirical.as_ref().map(|r| r.mean_recall)),
            Cell::opt_num(empirical.as_ref().map(|r| r.stderr_recall)),
            z.into(),
        ]);
    }
    if combos.iter().any(|&(m, ell, _)| ell == 1 && m >= 2) {
        let (m, _, d) = combos
            .iter()
            .copied()
            .find(|&(m, ell, _)| ell == 1 && m >= 2)
            .expect("checked");
        let printed = p_union_printed_last_term(m, d).map_err(lib_error)?;
        let corrected = p_union(m, d).map_err(lib_error)?;
        table.notes.push(format!(
            "at m={m}, d={d}: corrected {} vs printed-last-term {}",
            render::fmt_sig(to_f64(&corrected)),
            render::fmt_sig(to_f64(&printed))
        ));
    }
    if a.with_empirical {
        table.notes.push(NOTE_SELECTIVITY.into());
    }
    Ok(Outcome::from_table(&table, a.common.format, code, stderr))
}
