//! The `cheese` command: build configurations, run certification suites,
//! render SVG pictures and search for regularity witnesses.

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use swiss_cheese::construction::{
    assemble_cheese, CheeseConfig, EmptyWermer, StubWermer, WermerProvider, DEFAULT_DISC_CAP,
};
use swiss_cheese::construction::Caps;
use swiss_cheese::files::{parse_complex, read_config, render_svg, write_config, Environment, RenderOptions, ReportHeader, ReportWriter, Zoom};
use swiss_cheese::ratfunc::LevelParams;
use swiss_cheese::verify::{
    check_budget, check_convergence, check_derivation, check_h_bounds, check_level_family, check_nonvanishing,
    check_residue_oracle, convergence::convergence_samples, regularity_witness, CertReport, Verdict,
};
use swiss_cheese::CheeseError;

/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "CHEESE_WORKERS";

pub mod exit {
    pub const OK: i32 = 0;
    pub const IO: i32 = 1;
    pub const BUDGET: i32 = 2;
    pub const RESOURCE: i32 = 3;
    pub const FAILED: i32 = 4;
    pub const INCONCLUSIVE: i32 = 5;
}

#[derive(Parser, Debug)]
#[command(name = "cheese", version, about = "Regular Swiss cheese sets on the square [-1, 1]^2")]
struct Cli {
    /// Worker threads; defaults to $CHEESE_WORKERS, then the core count.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a configuration and print its budget ledger.
    Build(BuildArgs),
    /// Run a certification suite and write a JSON-lines report.
    Verify(VerifyArgs),
    /// Draw a configuration as SVG.
    Render(RenderArgs),
    /// Find a function of the regular layer separating z0 from B.
    Witness(WitnessArgs),
}

#[derive(Args, Debug)]
struct BuildArgs {
    /// Derivation constant C.
    #[arg(long = "C", default_value_t = 4.0 * std::f64::consts::PI)]
    c: f64,
    /// Number of enumerated discs D_l to fill.
    #[arg(long = "L", default_value_t = 32)]
    l: usize,
    /// Highest level materialized in each unit cheese.
    #[arg(long, default_value_t = 6)]
    n_cap: u64,
    /// Scales n = 1..=levels of the second layer.
    #[arg(long, default_value_t = 0)]
    levels: u32,
    /// Domains per scale of the second layer.
    #[arg(long, default_value_t = 2)]
    per_level: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_DISC_CAP)]
    disc_cap: usize,
    /// Where to write the configuration; omitted, only the ledger is printed.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Suite {
    HBounds,
    LevelFamily,
    Convergence,
    Nonvanishing,
    ResidueOracle,
    Derivation,
    Budget,
}

impl Suite {
    fn id(self) -> &'static str {
        match self {
            Suite::HBounds => "h-bounds",
            Suite::LevelFamily => "level-family",
            Suite::Convergence => "convergence",
            Suite::Nonvanishing => "nonvanishing",
            Suite::ResidueOracle => "residue-oracle",
            Suite::Derivation => "derivation",
            Suite::Budget => "budget",
        }
    }

    fn default_samples(self) -> usize {
        match self {
            Suite::HBounds | Suite::LevelFamily => 4096,
            Suite::Convergence => 1000,
            Suite::Nonvanishing | Suite::ResidueOracle => 100,
            Suite::Derivation => 1 << 14,
            Suite::Budget => 0,
        }
    }
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    /// Configuration, required by the derivation and budget suites.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Levels, inclusive: `3..6` or `5`.
    #[arg(long = "n", value_parser = parse_range, default_value = "3..6")]
    n: RangeInclusive<u64>,
    /// Start index of the products in the convergence suites.
    #[arg(long, default_value_t = 4)]
    m: u64,
    /// Samples per region, pairs, points or maximal density, by suite.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report path; omitted, the report goes to standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum ZoomKind {
    Full,
    Window,
    Annulus,
    Family,
}

#[derive(Args, Debug)]
struct RenderArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "full")]
    zoom: ZoomKind,
    /// Center of a window or annulus zoom.
    #[arg(long, value_parser = parse_literal, default_value = "0", allow_hyphen_values = true)]
    center: Complex64,
    #[arg(long, default_value_t = 0.5)]
    half_width: f64,
    #[arg(long, default_value_t = 0.0)]
    inner: f64,
    #[arg(long, default_value_t = 1.0)]
    outer: f64,
    /// Enumeration index for a family zoom.
    #[arg(long, default_value_t = 1)]
    l: usize,
    /// Restrict a family zoom to one level.
    #[arg(long)]
    level: Option<u64>,
    /// Draw every disc in one color.
    #[arg(long)]
    plain: bool,
    #[arg(long, default_value_t = 800)]
    size: u32,
}

#[derive(Args, Debug)]
struct WitnessArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    z0: String,
    /// Points of B, repeated or comma separated.
    #[arg(long = "b", value_delimiter = ',', required = true, allow_hyphen_values = true)]
    b: Vec<String>,
    /// Enumeration indices to search.
    #[arg(long, default_value_t = 100_000)]
    cap: usize,
    /// Levels past the start index used on B.
    #[arg(long, default_value_t = 2)]
    extra: u64,
}

fn parse_range(s: &str) -> Result<RangeInclusive<u64>, String> {
    let bad = || format!("expected `a..b` or `n`, got `{s}`");
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a, b.strip_prefix('=').unwrap_or(b)),
        None => (s, s),
    };
    let a: u64 = a.trim().parse().map_err(|_| bad())?;
    let b: u64 = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok(a..=b)
}

fn parse_literal(s: &str) -> Result<Complex64, String> {
    parse_complex(s).map_err(|e| e.to_string())
}

/// Exit status for an error.
pub fn exit_code(e: &CheeseError) -> i32 {
    match e {
        CheeseError::Budget(_) | CheeseError::Domain(_) => exit::BUDGET,
        CheeseError::Resource(_) => exit::RESOURCE,
        CheeseError::SearchExhausted(_) => exit::FAILED,
        CheeseError::ToleranceNotMet(_) => exit::INCONCLUSIVE,
        _ => exit::IO,
    }
}

/// Exit status for a finished suite: failures win over inconclusive rows.
pub fn verdict_code(rows: &[CertReport]) -> i32 {
    if rows.iter().any(|r| r.verdict == Verdict::Fail) {
        exit::FAILED
    } else if rows.iter().any(|r| r.verdict == Verdict::Inconclusive) {
        exit::INCONCLUSIVE
    } else {
        exit::OK
    }
}

fn workers(flag: Option<usize>) -> usize {
    flag.or_else(|| std::env::var(WORKERS_ENV).ok()?.parse().ok())
        .filter(|&w| w > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Runs the command line `args` (program name first) and returns the exit
/// status. Output goes to `out`, diagnostics to `err`.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::IO } else { exit::OK };
            let text = e.to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let w = workers(cli.workers);
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(w).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start workers: {e}");
            return exit::RESOURCE;
        }
    };
    let mut buf = Vec::new();
    let result = pool.install(|| match cli.cmd {
        Command::Build(a) => build(a, &mut buf),
        Command::Verify(a) => verify(a, w, &mut buf),
        Command::Render(a) => render(a),
        Command::Witness(a) => witness(a, &mut buf),
    });
    if let Err(e) = out.write_all(&buf).and_then(|_| out.flush()) {
        let _ = writeln!(err, "error: {e}");
        return exit::IO;
    }
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// `run_with` on the process's standard streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_with(args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

type CmdResult = swiss_cheese::Result<i32>;

fn io(e: std::io::Error) -> CheeseError {
    CheeseError::Io(e)
}

fn build(a: BuildArgs, out: &mut dyn Write) -> CmdResult {
    let caps = Caps { n_cap: a.n_cap, disc_cap: a.disc_cap };
    let stub = StubWermer { per_level: a.per_level, seed: a.seed };
    let provider: &dyn WermerProvider = if a.levels > 0 { &stub } else { &EmptyWermer };
    let mut cfg = assemble_cheese(a.c, a.l, a.levels, provider, caps)?;
    cfg.params.seed = a.seed;
    if let Some(path) = &a.out {
        write_config(path, &cfg)?;
    }
    print_ledger(&cfg, out).map_err(io)?;
    Ok(exit::OK)
}

fn print_ledger(cfg: &CheeseConfig, out: &mut dyn Write) -> std::io::Result<()> {
    let led = &cfg.ledger;
    let p = &cfg.params;
    let limit = cfg.budget_c / 2.0 + 2.0 * std::f64::consts::PI * cfg.budget_c0;
    writeln!(out, "C                      {}", cfg.budget_c)?;
    writeln!(out, "C0                     {}", cfg.budget_c0)?;
    writeln!(out, "indices L              {}", p.disc_count)?;
    writeln!(out, "n_cap                  {}", p.n_cap)?;
    writeln!(out, "regular discs          {} retained, {} discarded", led.mckissick_retained, led.mckissick_discarded)?;
    writeln!(out, "regular boundary sum   {:.6e} realized, {:.6e} certified (< C0)", led.mckissick_boundary_realized, led.mckissick_boundary_certified)?;
    let wermer: usize = led.wermer_levels.iter().map(|w| w.count).sum();
    writeln!(out, "second layer           {} domains over {} scales, boundary sum {:.6e}", wermer, p.n_levels, led.wermer_boundary_sum)?;
    writeln!(out, "combined boundary sum  {:.6e} (< {:.6e})", led.combined_boundary_sum, limit)?;
    writeln!(out, "integral bound         {:.6e}", led.integral_bound)?;
    writeln!(out, "deletions              {}", cfg.deletions.len())
}

fn load(path: Option<&Path>, suite: Suite) -> swiss_cheese::Result<CheeseConfig> {
    match path {
        Some(p) => read_config(p),
        None => Err(CheeseError::Precondition(format!("suite {} needs --config", suite.id()))),
    }
}

/// Rows of a suite, in order.
fn suite_rows(a: &VerifyArgs) -> swiss_cheese::Result<Vec<CertReport>> {
    let samples = a.samples.unwrap_or(a.suite.default_samples());
    let mut rows = Vec::new();
    match a.suite {
        Suite::HBounds => {
            for n in a.n.clone() {
                let p = LevelParams::new(n)?;
                let roots = p.roots().ok_or_else(|| CheeseError::Resource(format!("N = n·4^n overflows at n = {n}")))?;
                rows.extend(check_h_bounds(roots, p.delta(), samples, a.seed)?);
            }
        }
        Suite::LevelFamily => {
            for n in a.n.clone() {
                rows.extend(check_level_family(n, samples, a.seed)?);
            }
        }
        Suite::Convergence => {
            for n in a.n.clone() {
                rows.push(check_convergence(a.m, n, samples, a.seed)?);
            }
        }
        Suite::Nonvanishing => {
            let n_max = *a.n.end();
            for z in convergence_samples(a.m, n_max, samples, a.seed)? {
                rows.push(check_nonvanishing(a.m, n_max, z)?);
            }
        }
        Suite::ResidueOracle => rows = check_residue_oracle(samples, a.seed)?,
        Suite::Derivation => rows = check_derivation(&load(a.config.as_deref(), a.suite)?, samples)?,
        Suite::Budget => rows = check_budget(&load(a.config.as_deref(), a.suite)?)?,
    }
    Ok(rows)
}

fn verify(a: VerifyArgs, workers: usize, out: &mut dyn Write) -> CmdResult {
    let rows = suite_rows(&a)?;
    let header = ReportHeader::new(a.suite.id(), a.seed, Environment::current(workers));
    match &a.out {
        Some(path) => {
            let mut w = ReportWriter::create(path, &header)?;
            for r in &rows {
                w.append(r)?;
            }
            w.finish()?;
            for r in &rows {
                writeln!(out, "{:<12} {:<22} measured {:.6e} bound {:.6e} margin {:.3e}", verdict_label(r.verdict), r.check, r.measured, r.bound, r.margin)
                    .map_err(io)?;
            }
        }
        None => {
            let mut w = ReportWriter::new(&mut *out, &header)?;
            for r in &rows {
                w.append(r)?;
            }
            w.finish()?;
        }
    }
    Ok(verdict_code(&rows))
}

fn verdict_label(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "PASS",
        Verdict::Fail => "FAIL",
        Verdict::Inapplicable => "INAPPLICABLE",
        Verdict::Inconclusive => "INCONCLUSIVE",
    }
}

fn render(a: RenderArgs) -> CmdResult {
    let cfg = read_config(&a.config)?;
    let zoom = match a.zoom {
        ZoomKind::Full => Zoom::Full,
        ZoomKind::Window => Zoom::Window { center: a.center, half_width: a.half_width },
        ZoomKind::Annulus => Zoom::Annulus { center: a.center, inner: a.inner, outer: a.outer },
        ZoomKind::Family => Zoom::Family { l: a.l, level: a.level },
    };
    let opts = RenderOptions { zoom, color_by_provenance: !a.plain, size: a.size };
    std::fs::write(&a.out, render_svg(&cfg, &opts))?;
    Ok(exit::OK)
}

fn witness(a: WitnessArgs, out: &mut dyn Write) -> CmdResult {
    let z0 = parse_complex(&a.z0)?;
    let b = a.b.iter().map(|s| parse_complex(s)).collect::<swiss_cheese::Result<Vec<_>>>()?;
    let cfg = read_config(&a.config)?;
    let w = regularity_witness(z0, &b, &cfg, a.cap, a.extra)?;
    writeln!(out, "{}", serde_json::to_string(&w)?).map_err(io)?;
    Ok(if w.separates() { exit::OK } else { exit::FAILED })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("3..6").unwrap(), 3..=6);
        assert_eq!(parse_range("3..=6").unwrap(), 3..=6);
        assert_eq!(parse_range("5").unwrap(), 5..=5);
        assert!(parse_range("6..3").is_err());
        assert!(parse_range("a..3").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&CheeseError::Budget(String::new())), 2);
        assert_eq!(exit_code(&CheeseError::Resource(String::new())), 3);
        assert_eq!(exit_code(&CheeseError::SearchExhausted(3)), 4);
        assert_eq!(exit_code(&CheeseError::Parse(String::new())), 1);
        let fail = CertReport::at_most("x", 2.0, 1.0);
        let soft = fail.clone().soften("why");
        assert_eq!(verdict_code(&[soft.clone()]), 5);
        assert_eq!(verdict_code(&[soft, fail]), 4);
        assert_eq!(verdict_code(&[CertReport::inapplicable("y", "n/a")]), 0);
    }

    #[test]
    fn bad_flags_exit_one() {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        assert_eq!(run_with(["cheese", "build", "--bogus"], &mut o, &mut e), 1);
        assert_eq!(run_with(["cheese", "--help"], &mut o, &mut e), 0);
    }
}
