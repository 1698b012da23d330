//! The `goldbach` command line: counts, scans, estimates, TRPF curves,
//! α profiles, constants, band reports and SVG plots.
//!
//! [`run`] takes the arguments after the program name and returns the exit
//! code: 0 on success, 1 for usage errors, 2 for numeric or domain failures.

use std::ffi::OsString;
use std::fmt;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use goldbach_core::analysis::{error_report, Window};
use goldbach_core::estimator::{
    alpha_profile, egp, igp, mertens_partial, trpf_curve_factors, GridSpec, PrimeSource,
};
use goldbach_core::format::{read_records, sig6, write_alpha, write_records, write_report, write_trpf};
use goldbach_core::goldbach::{goldbach_pairs, scan};
use goldbach_core::primes::{read_cache, write_cache};
use goldbach_core::{BandSignature, Error, PrimalityTable};

mod plot;

pub use plot::{render_plot, render_svg, PlotKind, PlotSpec};

/// Environment variable that relocates sieve cache files.
pub const CACHE_DIR_ENV: &str = "GOLDBACH_CACHE_DIR";
/// Cache file name used when only the environment variable is set.
pub const DEFAULT_CACHE_FILE: &str = "sieve.gbsv";
pub const DEFAULT_LIMIT: u64 = 1_000_000;

#[derive(Debug, Parser)]
#[command(name = "goldbach", version, about = "Goldbach pair counts, estimators and figures")]
struct Cli {
    /// Largest even (or sieve bound) any subcommand may touch.
    #[arg(long, global = true, default_value_t = DEFAULT_LIMIT)]
    limit: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Count the Goldbach pairs of one even number.
    Count {
        #[arg(long)]
        even: u64,
        /// Print only the pairs, as `p,q` rows.
        #[arg(long)]
        pairs: bool,
    },
    /// Count pairs and evaluate both estimators for every even in a range.
    Scan {
        #[arg(long)]
        lo: u64,
        #[arg(long)]
        hi: u64,
        /// Keep only these bands, e.g. `2,2-3` (aliases `B2`, `B2_3`).
        #[arg(long, value_delimiter = ',', value_parser = parse_band)]
        band: Option<Vec<BandSignature>>,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Evaluate one estimator at one even number.
    Estimate {
        #[arg(long)]
        even: u64,
        #[arg(long, value_enum)]
        method: Method,
    },
    /// Sample the relative probability factors on a `log_p(x)` grid.
    Trpf {
        #[arg(long)]
        p: f64,
        #[arg(long, value_parser = parse_factors, default_value = "2..5")]
        factors: RangeInclusive<u8>,
        /// `lo:hi:steps` in `log_p(x)` units.
        #[arg(long, value_parser = parse_grid)]
        grid: GridSpec,
        /// Use the simulated prime sequence started at `p`.
        #[arg(long)]
        simulated: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// α for every odd Pen prime of one even number.
    Alpha {
        #[arg(long)]
        even: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Finite-cutoff band-[2] constants.
    Constants {
        #[arg(long)]
        cutoff: u64,
    },
    /// Error report for one band over a window of a scan CSV.
    Report {
        #[arg(long, value_parser = parse_band)]
        band: BandSignature,
        #[arg(long)]
        lo: u64,
        #[arg(long)]
        hi: u64,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render a CSV produced by another subcommand as SVG.
    Plot {
        #[arg(long, value_enum)]
        kind: PlotKind,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Method {
    Egp,
    Igp,
}

/// Accepts hyphen-joined primes (`2`, `2-3`) and the aliases `B2`, `B2_3`.
fn parse_band(s: &str) -> Result<BandSignature, String> {
    let s = s.trim();
    let body = s
        .strip_prefix('B')
        .or_else(|| s.strip_prefix('b'))
        .map(|rest| rest.replace('_', "-"))
        .unwrap_or_else(|| s.to_string());
    body.parse().map_err(|e: Error| e.to_string())
}

/// `a..b`, `a..=b` or a single count.
fn parse_factors(s: &str) -> Result<RangeInclusive<u8>, String> {
    let bad = || format!("expected a factor range like 2..5, got {s:?}");
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => (lo, hi.strip_prefix('=').unwrap_or(hi)),
        None => (s, s),
    };
    let lo: u8 = lo.trim().parse().map_err(|_| bad())?;
    let hi: u8 = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi || lo < 2 || hi > 5 {
        return Err(format!("factor range must lie within 2..5, got {s:?}"));
    }
    Ok(lo..=hi)
}

fn parse_grid(s: &str) -> Result<GridSpec, String> {
    let bad = || format!("expected lo:hi:steps, got {s:?}");
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, steps] = parts.as_slice() else {
        return Err(bad());
    };
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    let steps: usize = steps.trim().parse().map_err(|_| bad())?;
    GridSpec::new(lo, hi, steps).map_err(|e| e.to_string())
}

/// Failure of one invocation, carrying its exit code.
#[derive(Debug)]
pub struct CliError(pub Error);

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self.0 {
            Error::InvalidArgument(_) | Error::OutOfRange(_) => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError(Error::Io(e))
    }
}

/// Runs one invocation against the process's stdout and stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// [`run`] with explicit output streams.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = std::iter::once(OsString::from("goldbach")).chain(argv.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    1
                }
            };
        }
    };
    match execute(cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn check_limit(what: &str, value: u64, limit: u64) -> Result<(), CliError> {
    if value > limit {
        return Err(Error::OutOfRange(format!("{what} {value} exceeds --limit {limit}")).into());
    }
    Ok(())
}

/// Writes to `path`, or to `out` when no path is given.
fn emit<F>(path: Option<&Path>, out: &mut dyn Write, body: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> goldbach_core::Result<()>,
{
    match path {
        Some(path) => {
            let mut file = BufWriter::new(File::create(path)?);
            body(&mut file)?;
            file.flush()?;
        }
        None => body(out)?,
    }
    Ok(())
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let limit = cli.limit;
    match cli.command {
        Command::Count { even, pairs } => {
            check_limit("--even", even, limit)?;
            let table = PrimalityTable::build(even.max(2))?;
            let found = goldbach_pairs(even, &table)?;
            if pairs {
                writeln!(out, "p,q")?;
                for (p, q) in &found {
                    writeln!(out, "{p},{q}")?;
                }
            } else {
                writeln!(out, "gp={}", found.len())?;
                for (p, q) in &found {
                    writeln!(out, "{p} + {q}")?;
                }
            }
        }
        Command::Scan { lo, hi, band, workers, out: path, cache } => {
            check_limit("--hi", hi, limit)?;
            let workers = match workers {
                Some(w) => w,
                None => std::thread::available_parallelism().map_or(1, usize::from),
            };
            let cache = cache_path(cache.as_deref(), std::env::var_os(CACHE_DIR_ENV));
            let table = load_table(hi.max(2), cache.as_deref())?;
            let records = scan(lo, hi, &table, band.as_deref(), workers)?;
            emit(path.as_deref(), out, |w| write_records(w, &records))?;
        }
        Command::Estimate { even, method } => {
            check_limit("--even", even, limit)?;
            let value = match method {
                Method::Egp => egp(even)?,
                Method::Igp => igp(even)?,
            };
            writeln!(out, "{value:.6}")?;
        }
        Command::Trpf { p, factors, grid, simulated, out: path } => {
            let source = if simulated { PrimeSource::Simulated } else { PrimeSource::Real };
            let curve = trpf_curve_factors(p, grid, source, factors)?;
            emit(path.as_deref(), out, |w| write_trpf(w, &curve))?;
        }
        Command::Alpha { even, out: path } => {
            check_limit("--even", even, limit)?;
            let profile = alpha_profile(even)?;
            emit(path.as_deref(), out, |w| write_alpha(w, &profile))?;
        }
        Command::Constants { cutoff } => {
            check_limit("--cutoff", cutoff, limit)?;
            let table = PrimalityTable::build(cutoff.max(2))?;
            let c = mertens_partial(cutoff, &table)?;
            writeln!(out, "c_partial={}", sig6(c.c_partial))?;
            writeln!(out, "C_partial={}", sig6(c.big_c_partial))?;
        }
        Command::Report { band, lo, hi, input, out: path } => {
            let records = read_records(BufReader::new(open(&input)?))?;
            let window = Window::new(lo, hi)?;
            let report = error_report(&records, &band, window)?;
            let rows: Vec<_> = report.into_iter().collect();
            emit(path.as_deref(), out, |w| write_report(w, &rows))?;
        }
        Command::Plot { kind, input, out: path } => {
            let svg = render_plot(&PlotSpec::new(kind, input, path.clone()))?;
            std::fs::write(&path, svg)?;
        }
    }
    Ok(())
}

fn open(path: &Path) -> Result<File, CliError> {
    File::open(path).map_err(|e| {
        CliError(Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
    })
}

/// Where the sieve cache lives, if anywhere: a relative `--cache` path is
/// taken inside the cache directory when one is configured, and the
/// directory alone implies [`DEFAULT_CACHE_FILE`].
pub fn cache_path(flag: Option<&Path>, dir: Option<OsString>) -> Option<PathBuf> {
    let dir = dir.filter(|d| !d.is_empty()).map(PathBuf::from);
    match (flag, dir) {
        (Some(f), Some(d)) if f.is_relative() => Some(d.join(f)),
        (Some(f), _) => Some(f.to_path_buf()),
        (None, Some(d)) => Some(d.join(DEFAULT_CACHE_FILE)),
        (None, None) => None,
    }
}

/// Reuses the cached sieve when it reaches `limit`, otherwise sieves afresh
/// and (re)writes the cache.
pub fn load_table(limit: u64, cache: Option<&Path>) -> goldbach_core::Result<PrimalityTable> {
    let Some(path) = cache else {
        return PrimalityTable::build(limit);
    };
    if path.exists() {
        let cached = read_cache(BufReader::new(File::open(path)?))?;
        if cached.limit() >= limit {
            return Ok(cached);
        }
    }
    let table = PrimalityTable::build(limit)?;
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)?;
    }
    let mut file = BufWriter::new(File::create(path)?);
    write_cache(&table, &mut file)?;
    file.flush()?;
    Ok(table)
}
