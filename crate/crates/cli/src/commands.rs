//! Subcommand implementations.

use std::f64::consts::PI;
use std::path::PathBuf;

use num_complex::Complex64;
use rayon::prelude::*;

use pulsebeam_core::channel::{gain_scan, symmetric_theta_grid};
use pulsebeam_core::geometry::{complex_distance_or_real, complex_distance_with, spheroidal_coords};
use pulsebeam_core::propagator::{extended_propagator_with, BeamProfile};
use pulsebeam_core::spacetime::{RealEvent, Vec3};
use pulsebeam_core::verify::{self, CheckOutcome};
use pulsebeam_core::wavelet::WaveletField;
use pulsebeam_core::Error;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::grid::Grid;
use crate::output::{fmt_f64, write_csv, Table};

/// Environment override for the worker count.
pub const THREADS_ENV: &str = "PULSEBEAM_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Distance,
    Propagator,
    Wavelet,
    Pattern,
    Channel,
    Verify,
}

/// Result of a sampling subcommand: the CSV table plus `name,value` lines for
/// scalar results.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub table: Table,
    pub summary: Vec<(String, String)>,
}

/// Flag, then environment, then config; `None` lets rayon choose.
pub fn resolve_threads(flag: Option<usize>, env: Option<&str>, config: Option<usize>) -> Result<Option<usize>, CliError> {
    if let Some(n) = flag {
        return positive(n, "--threads").map(Some);
    }
    if let Some(text) = env {
        let n = text
            .trim()
            .parse::<usize>()
            .map_err(|_| CliError::Validation(format!("{THREADS_ENV} must be a positive integer, got {text:?}")))?;
        return positive(n, THREADS_ENV).map(Some);
    }
    Ok(config)
}

fn positive(n: usize, what: &str) -> Result<usize, CliError> {
    if n == 0 {
        Err(CliError::Validation(format!("{what} must be >= 1")))
    } else {
        Ok(n)
    }
}

fn pool(threads: Option<usize>) -> Result<rayon::ThreadPool, CliError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        b = b.num_threads(n);
    }
    b.build().map_err(|e| CliError::Io(format!("thread pool: {e}")))
}

/// Maps `f` over `0..n` in parallel, keeping index order. The first error in
/// index order wins so failures are reproducible.
fn par_map<T: Send, F>(pool: &rayon::ThreadPool, n: usize, f: F) -> Result<Vec<T>, CliError>
where
    F: Fn(usize) -> Result<T, CliError> + Sync + Send,
{
    let results: Vec<Result<T, CliError>> = pool.install(|| (0..n).into_par_iter().map(&f).collect());
    results.into_iter().collect()
}

fn coords(p: [f64; 4]) -> Vec<String> {
    p.iter().map(|&v| fmt_f64(v)).collect()
}

fn complex_cells(v: Complex64) -> [String; 3] {
    [fmt_f64(v.re), fmt_f64(v.im), fmt_f64(v.norm())]
}

const OK: &str = "ok";
const ON_CUT: &str = "on_cut";
const SINGULAR: &str = "singular";

/// Evaluates `cmd` without writing anything.
pub fn compute(cmd: Command, cfg: &RunConfig, threads: Option<usize>) -> Result<Output, CliError> {
    match cmd {
        Command::Distance => distance(cfg, threads),
        Command::Propagator => propagator(cfg, threads),
        Command::Wavelet => wavelet(cfg, threads),
        Command::Pattern => pattern(cfg, threads),
        Command::Channel => channel(cfg, threads),
        Command::Verify => Err(CliError::Validation("verify produces no table".into())),
    }
}

fn distance(cfg: &RunConfig, threads: Option<usize>) -> Result<Output, CliError> {
    let extent = cfg.extent()?;
    let y = extent.space();
    if extent.aperture() == 0.0 {
        return Err(CliError::Validation("distance needs a nonzero spatial extent".into()));
    }
    let grid = Grid::new(&cfg.grid, false, cfg.tolerances.max_points)?;
    let geometry = cfg.geometry();
    let pool = pool(threads)?;
    let rows = par_map(&pool, grid.len(), |k| {
        let pt = grid.point(k);
        let x = Vec3::new(pt[0], pt[1], pt[2]);
        let cd = complex_distance_with(&x, &y, &geometry)?;
        let sc = spheroidal_coords(&x, &y)?;
        let status = if cd.near_circle {
            SINGULAR
        } else if cd.on_cut {
            ON_CUT
        } else {
            OK
        };
        let mut row = coords(pt)[..3].to_vec();
        row.extend([fmt_f64(cd.p), fmt_f64(cd.q), fmt_f64(sc.rho), fmt_f64(sc.phi), status.into()]);
        Ok(row)
    })?;
    let mut table = Table::new(vec!["x1", "x2", "x3", "p", "q", "rho", "phi", "status"]);
    table.rows = rows;
    Ok(Output { table, summary: Vec::new() })
}

/// Shared driver for fields sampled over `(x⃗, t)`. Points near the branch
/// circle get empty value cells and status `singular`.
fn field_table<F>(cfg: &RunConfig, threads: Option<usize>, eval: F) -> Result<Output, CliError>
where
    F: Fn(&Vec3, f64) -> Result<Complex64, Error> + Sync + Send,
{
    let extent = cfg.extent()?;
    let y = extent.space();
    let grid = Grid::new(&cfg.grid, true, cfg.tolerances.max_points)?;
    let geometry = cfg.geometry();
    let pool = pool(threads)?;
    let rows = par_map(&pool, grid.len(), |k| {
        let pt = grid.point(k);
        let x = Vec3::new(pt[0], pt[1], pt[2]);
        let mut row = coords(pt);
        let cd = complex_distance_or_real(&x, &y, &geometry)?;
        if cd.near_circle {
            row.extend([String::new(), String::new(), String::new(), SINGULAR.into()]);
            return Ok(row);
        }
        let v = eval(&x, pt[3])?;
        row.extend(complex_cells(v));
        row.push(if cd.on_cut { ON_CUT } else { OK }.into());
        Ok(row)
    })?;
    let mut table = Table::new(vec!["x1", "x2", "x3", "t", "re", "im", "abs", "status"]);
    table.rows = rows;
    Ok(Output { table, summary: Vec::new() })
}

fn propagator(cfg: &RunConfig, threads: Option<usize>) -> Result<Output, CliError> {
    let extent = cfg.extent()?;
    let (y, s) = (extent.space(), extent.time());
    let geometry = cfg.geometry();
    field_table(cfg, threads, |x, t| extended_propagator_with(x, &y, t, s, &geometry))
}

fn wavelet(cfg: &RunConfig, threads: Option<usize>) -> Result<Output, CliError> {
    let field = WaveletField::new(cfg.signal()?, cfg.extent()?)?
        .with_geometry(cfg.geometry())
        .with_quadrature(cfg.quadrature());
    field_table(cfg, threads, |x, t| field.eval(&RealEvent::new(*x, t)?))
}

/// `count` angles on `[0, π]`, ending exactly at `π`.
pub fn half_turn_grid(count: usize) -> Vec<f64> {
    match count {
        1 => vec![0.0],
        n => (0..n).map(|k| if k + 1 == n { PI } else { PI * k as f64 / (n - 1) as f64 }).collect(),
    }
}

fn pattern(cfg: &RunConfig, threads: Option<usize>) -> Result<Output, CliError> {
    let extent = cfg.extent()?;
    let spec = cfg.pattern.ok_or_else(|| CliError::Validation("pattern: missing \"pattern\" section".into()))?;
    if !(spec.r > 0.0 && spec.r.is_finite()) {
        return Err(CliError::Validation("pattern.r must be finite and > 0".into()));
    }
    if spec.theta_count == 0 || spec.theta_count as u64 > cfg.tolerances.max_points {
        return Err(CliError::Validation("pattern.theta_count must be >= 1 and within the point cap".into()));
    }
    let profile = BeamProfile::new(extent.time(), extent.aperture())?;
    let thetas = half_turn_grid(spec.theta_count);
    let pool = pool(threads)?;
    let rows = par_map(&pool, thetas.len(), |k| {
        let b = profile.sample(spec.r, thetas[k]);
        Ok(vec![fmt_f64(b.theta), fmt_f64(b.duration), fmt_f64(b.pattern), fmt_f64(b.peak)])
    })?;
    let mut table = Table::new(vec!["theta", "duration", "pattern", "peak"]);
    table.rows = rows;
    Ok(Output { table, summary: Vec::new() })
}

fn channel(cfg: &RunConfig, threads: Option<usize>) -> Result<Output, CliError> {
    let ch = cfg.channel()?;
    let signal = cfg.signal()?;
    let gain = cfg.gain.unwrap_or_default();
    if gain.theta_count < 3 || gain.theta_count.is_multiple_of(2) || gain.theta_count as u64 > cfg.tolerances.max_points {
        return Err(CliError::Validation("gain.theta_count must be odd, >= 3 and within the point cap".into()));
    }
    let m = ch.metrics();
    let amplitude = ch.amplitude(&signal)?;
    let (e, r) = (ch.emitter(), ch.receiver());
    let sep = ch.separation().radius();
    let thetas = symmetric_theta_grid(gain.theta_count);
    let pool = pool(threads)?;
    let rows = par_map(&pool, thetas.len(), |k| {
        let g = gain_scan(e.extent.aperture(), e.extent.time(), r.extent.aperture(), r.extent.time(), sep, &thetas[k..=k])?;
        Ok(vec![fmt_f64(g[0].theta), fmt_f64(g[0].far_zone_peak), fmt_f64(g[0].amplitude)])
    })?;
    let mut table = Table::new(vec!["theta", "far_zone_peak", "amplitude"]);
    table.rows = rows;
    let summary = [
        ("emitter_duration", m.emitter_duration),
        ("receiver_duration", m.receiver_duration),
        ("duration", m.duration),
        ("emitter_bandwidth", m.emitter_bandwidth),
        ("receiver_bandwidth", m.receiver_bandwidth),
        ("bandwidth", m.bandwidth),
        ("emitter_aperture", m.emitter_aperture),
        ("receiver_aperture", m.receiver_aperture),
        ("aperture", m.aperture),
        ("amplitude_re", amplitude.re),
        ("amplitude_im", amplitude.im),
        ("amplitude_abs", amplitude.norm()),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), fmt_f64(v)))
    .collect();
    Ok(Output { table, summary })
}

fn summary_text(summary: &[(String, String)]) -> String {
    let mut s = String::from("name,value\n");
    for (k, v) in summary {
        s.push_str(&format!("{k},{v}\n"));
    }
    s
}

/// Runs a sampling subcommand and writes its CSV to `out`, or to stdout.
///
/// Scalar summaries go to stdout when the CSV goes to a file and to stderr
/// otherwise, so stdout always holds a single table.
pub fn run(cmd: Command, cfg: &RunConfig, out: Option<PathBuf>, threads: Option<usize>) -> Result<(), CliError> {
    let output = compute(cmd, cfg, threads)?;
    match out {
        Some(path) => {
            write_csv(&output.table, &path)?;
            if !output.summary.is_empty() {
                print!("{}", summary_text(&output.summary));
            }
        }
        None => {
            use std::io::Write;
            let bytes = output.table.to_bytes()?;
            std::io::stdout().write_all(&bytes)?;
            if !output.summary.is_empty() {
                eprint!("{}", summary_text(&output.summary));
            }
        }
    }
    Ok(())
}

/// Fixed scenarios used by the determinism check.
pub const DETERMINISM_PATTERN: &str = r#"{"scenario": {"extent": [0, 0, 1, 2]}, "pattern": {"r": 100, "theta_count": 181}}"#;
pub const DETERMINISM_CHANNEL: &str = r#"{
    "scenario": {"channel": {
        "emitter": {"center": [0, 0, 0, 0], "extent": [0.3, 0, 1, 2]},
        "receiver": {"center": [1, 0, 10, 10], "extent": [0, 0.5, 1, 2.5]}}},
    "signal": {"kind": "gaussian", "center": 0, "width": 0.5},
    "gain": {"theta_count": 721}
}"#;

/// Byte-compares the `pattern` and `channel` CSVs across two runs and across
/// one and four worker threads.
pub fn check_determinism() -> CheckOutcome {
    let name = "cli determinism";
    let mut detail = Vec::new();
    let mut passed = true;
    for (label, cmd, text) in [("pattern", Command::Pattern, DETERMINISM_PATTERN), ("channel", Command::Channel, DETERMINISM_CHANNEL)] {
        let bytes = RunConfig::parse(text, std::path::Path::new(".")).and_then(|cfg| {
            [Some(1), Some(1), Some(4), Some(4)]
                .into_iter()
                .map(|t| compute(cmd, &cfg, t)?.table.to_bytes())
                .collect::<Result<Vec<_>, _>>()
        });
        match bytes {
            Ok(runs) => {
                let same = runs.windows(2).all(|w| w[0] == w[1]);
                passed &= same;
                detail.push(format!("{label}: {} bytes, identical={same}", runs[0].len()));
            }
            Err(e) => {
                passed = false;
                detail.push(format!("{label}: {e}"));
            }
        }
    }
    CheckOutcome { id: 12, name, passed, detail: detail.join("; ") }
}

/// Runs every check, prints one line each, and reports whether all passed.
pub fn verify_all() -> bool {
    let mut outcomes = verify::run_all();
    outcomes.push(check_determinism());
    for o in &outcomes {
        println!("{o}");
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!("{} checks, {} failed", outcomes.len(), failed);
    failed == 0
}
