//! Command-line front end for the checkerboard propagator and arrival-time
//! analysis.
//!
//! Five subcommands, all emitting deterministic CSV (identical flags produce
//! byte-identical output):
//!
//! * `oracle-verify` — checks every closed-form path-count against
//!   exhaustive enumeration and prints a pass/fail table.
//! * `propagator-table` — closed-form propagator components over a grid of
//!   intervals.
//! * `figure` — runs a bundled arrival-time preset (`fig6`/`fig7`) and emits
//!   the distribution CSV, echoing the derived caption constants.
//! * `ratio-scan` — exact vs asymptotic first-to-full amplitude ratios over
//!   a log-spaced range of interval lengths.
//! * `convergence` — finite-N partial sums against the closed form at one
//!   interval.
//!
//! Exit codes: 0 success, 1 verification/runtime failure, 2 usage error.

// Guards of the form `!(x > 0.0)` are deliberate: they reject NaN along with
// the out-of-range values, which the suggested `partial_cmp` form obscures.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};

use checkerboard::arrival::{ratio_first_to_full, QuadratureSpec};
use checkerboard::lattice::{
    enumerate_paths, phi_first, phi_l_restricted, phi_l_wr, phi_r_restricted, phi_r_wr,
    tally_restricted_corners, tally_unrestricted_corners, Component, GridSpec,
};
use checkerboard::numerics::PathCount;
use checkerboard::presets::PresetSpec;
use checkerboard::propagator::{
    interval_from_speed_and_length, k_finite_n, k_first, k_full, k_later,
    make_interval_for_quadrature, FiniteNVariant,
};

// ---------------------------------------------------------------------------
// Argument types
// ---------------------------------------------------------------------------

#[derive(Parser)]
#[command(
    name = "checkerboard",
    version,
    about = "Checkerboard path-sum propagators and arrival-time distributions \
             for the 1+1D Dirac equation"
)]
struct Cli {
    /// Cap the worker thread count (parallelism never changes output bytes).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check closed-form path counts against exhaustive enumeration.
    OracleVerify(OracleVerifyArgs),
    /// Emit closed-form propagator components over an interval grid as CSV.
    PropagatorTable(PropagatorTableArgs),
    /// Run a bundled arrival-time preset and emit the distribution CSV.
    Figure(FigureArgs),
    /// Sweep exact vs asymptotic first-to-full ratios; emit CSV.
    RatioScan(RatioScanArgs),
    /// Compare finite-N partial sums against the closed form; emit CSV.
    Convergence(ConvergenceArgs),
}

#[derive(Args)]
struct OracleVerifyArgs {
    /// Largest lattice size for the exhaustive first-arrival suite
    /// (cost grows as 2^N).
    #[arg(long, default_value_t = 16)]
    max_n: u32,
}

#[derive(Args)]
struct PropagatorTableArgs {
    /// Propagator component to tabulate.
    #[arg(long, value_enum, default_value_t = ComponentChoice::All)]
    component: ComponentChoice,
    /// Interval grid "x_lo:x_hi:nx,t_lo:t_hi:nt" in natural units
    /// (lengths in lambda_c, times in lambda_c/c), e.g. "-2:2:9,0.5:4:8".
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    grid: GridAxes,
    /// Write CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FigureArgs {
    /// Bundled configuration to run.
    #[arg(long, value_enum)]
    preset: PresetChoice,
    /// Write the distribution CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the carrier wave number k0 (1/Angstrom).
    #[arg(long)]
    k0: Option<f64>,
    /// Override the momentum spread dk (1/Angstrom); sets dx = 1/(2 dk).
    #[arg(long)]
    dk: Option<f64>,
    /// Override the packet centre in multiples of dx (negative = left of
    /// the detector); the caption values are -6 (fig6) and -8 (fig7).
    #[arg(long, allow_hyphen_values = true)]
    x0_dx: Option<f64>,
    /// Override the detector position X (Angstrom).
    #[arg(long, allow_hyphen_values = true)]
    x_obs: Option<f64>,
    /// Override the analysis window length in multiples of t0.
    #[arg(long)]
    t_max_t0: Option<f64>,
    /// Override the number of time samples.
    #[arg(long)]
    n_t: Option<usize>,
    /// Override the spatial quadrature node count (odd).
    #[arg(long)]
    quad_points: Option<usize>,
}

#[derive(Args)]
struct RatioScanArgs {
    /// Smallest interval length z = l_BA/lambda_c (> 0).
    #[arg(long)]
    z_min: f64,
    /// Largest interval length.
    #[arg(long)]
    z_max: f64,
    /// Mean interval velocity v_BA/c in [0, 1).
    #[arg(long)]
    v: f64,
    /// Number of log-spaced samples.
    #[arg(long, default_value_t = 1000)]
    points: usize,
    /// Write CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConvergenceArgs {
    /// Interval "x,t" in natural units, e.g. "1.0,2.5".
    #[arg(long, value_parser = parse_interval, allow_hyphen_values = true)]
    interval: (f64, f64),
    /// Comma-separated step counts, e.g. "512,1024,2048,4096".
    #[arg(long, value_parser = parse_n_list)]
    n_list: NList,
    /// Component (++ and +- carry the finite-N sums).
    #[arg(long, value_enum, default_value_t = ComponentChoice::Pp)]
    component: ComponentChoice,
    /// Path family to sum over.
    #[arg(long, value_enum, default_value_t = VariantChoice::First)]
    variant: VariantChoice,
    /// Write CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ComponentChoice {
    /// ++ component.
    Pp,
    /// +- component.
    Pm,
    /// -+ component.
    Mp,
    /// -- component.
    Mm,
    /// All four components.
    All,
}

impl ComponentChoice {
    fn components(self) -> Vec<Component> {
        match self {
            ComponentChoice::Pp => vec![Component::PlusPlus],
            ComponentChoice::Pm => vec![Component::PlusMinus],
            ComponentChoice::Mp => vec![Component::MinusPlus],
            ComponentChoice::Mm => vec![Component::MinusMinus],
            ComponentChoice::All => Component::all().to_vec(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PresetChoice {
    /// Broad packet (dk = 0.02 1/Angstrom).
    Fig6,
    /// Narrow packet (dk = 0.2 1/Angstrom).
    Fig7,
}

impl PresetChoice {
    fn spec(self) -> PresetSpec {
        match self {
            PresetChoice::Fig6 => PresetSpec::fig6(),
            PresetChoice::Fig7 => PresetSpec::fig7(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum VariantChoice {
    /// First-arrival paths only.
    First,
    /// All paths.
    Full,
}

impl VariantChoice {
    fn variant(self) -> FiniteNVariant {
        match self {
            VariantChoice::First => FiniteNVariant::First,
            VariantChoice::Full => FiniteNVariant::Full,
        }
    }
}

#[derive(Clone, Debug)]
struct GridAxes {
    x_lo: f64,
    x_hi: f64,
    nx: usize,
    t_lo: f64,
    t_hi: f64,
    nt: usize,
}

fn parse_axis(s: &str) -> Result<(f64, f64, usize), String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("axis `{s}` must be lo:hi:n"));
    }
    let lo: f64 = parts[0].parse().map_err(|e| format!("bad lo in `{s}`: {e}"))?;
    let hi: f64 = parts[1].parse().map_err(|e| format!("bad hi in `{s}`: {e}"))?;
    let n: usize = parts[2].parse().map_err(|e| format!("bad n in `{s}`: {e}"))?;
    if n == 0 {
        return Err(format!("axis `{s}` needs at least one point"));
    }
    if !(lo <= hi) {
        return Err(format!("axis `{s}` needs lo <= hi"));
    }
    Ok((lo, hi, n))
}

fn parse_grid(s: &str) -> Result<GridAxes, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("grid `{s}` must be x_lo:x_hi:nx,t_lo:t_hi:nt"));
    }
    let (x_lo, x_hi, nx) = parse_axis(parts[0])?;
    let (t_lo, t_hi, nt) = parse_axis(parts[1])?;
    if !(t_lo > 0.0) {
        return Err(format!("grid `{s}` needs t_lo > 0 (retarded propagator)"));
    }
    Ok(GridAxes {
        x_lo,
        x_hi,
        nx,
        t_lo,
        t_hi,
        nt,
    })
}

fn parse_interval(s: &str) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("interval `{s}` must be x,t"));
    }
    let x: f64 = parts[0].parse().map_err(|e| format!("bad x in `{s}`: {e}"))?;
    let t: f64 = parts[1].parse().map_err(|e| format!("bad t in `{s}`: {e}"))?;
    Ok((x, t))
}

#[derive(Clone, Debug)]
struct NList(Vec<u64>);

fn parse_n_list(s: &str) -> Result<NList, String> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let n: u64 = part
            .trim()
            .parse()
            .map_err(|e| format!("bad step count `{part}`: {e}"))?;
        out.push(n);
    }
    if out.is_empty() {
        return Err("empty step-count list".to_string());
    }
    Ok(NList(out))
}

// ---------------------------------------------------------------------------
// Error plumbing: usage errors exit 2, runtime/verification failures exit 1
// ---------------------------------------------------------------------------

enum CmdError {
    Usage(String),
    Failure(anyhow::Error),
}

impl From<anyhow::Error> for CmdError {
    fn from(e: anyhow::Error) -> CmdError {
        CmdError::Failure(e)
    }
}

impl From<checkerboard::Error> for CmdError {
    fn from(e: checkerboard::Error) -> CmdError {
        CmdError::Failure(e.into())
    }
}

impl From<io::Error> for CmdError {
    fn from(e: io::Error) -> CmdError {
        CmdError::Failure(e.into())
    }
}

type CmdResult = Result<(), CmdError>;

fn usage(msg: impl Into<String>) -> CmdError {
    CmdError::Usage(msg.into())
}

/// CSV goes to `--out` when given, else to stdout.
fn open_csv_sink(out: Option<&PathBuf>) -> Result<Box<dyn Write>, CmdError> {
    match out {
        Some(path) => {
            let file = File::create(path)
                .with_context(|| format!("cannot create {}", path.display()))?;
            Ok(Box::new(BufWriter::new(file)))
        }
        None => Ok(Box::new(BufWriter::new(io::stdout()))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        // Ignore failure: the global pool can only be set once, and a pool
        // that is already running is fine (determinism does not depend on
        // thread count).
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    let result = match cli.command {
        Command::OracleVerify(args) => cmd_oracle_verify(&args),
        Command::PropagatorTable(args) => cmd_propagator_table(&args),
        Command::Figure(args) => cmd_figure(&args),
        Command::RatioScan(args) => cmd_ratio_scan(&args),
        Command::Convergence(args) => cmd_convergence(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CmdError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CmdError::Failure(err)) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

// ---------------------------------------------------------------------------
// oracle-verify
// ---------------------------------------------------------------------------

/// A named oracle suite: runs up to max_n, returns the case count or a
/// description of the first mismatch.
type OracleSuite = (&'static str, fn(u32) -> Result<usize, String>);

fn cmd_oracle_verify(args: &OracleVerifyArgs) -> CmdResult {
    if !(2..=22).contains(&args.max_n) {
        return Err(usage("--max-n must lie in 2..=22 (cost grows as 2^N)"));
    }
    let suites: [OracleSuite; 4] = [
        ("unrestricted corner counts", verify_unrestricted),
        ("restricted corner counts", verify_restricted),
        ("first-arrival counts", verify_first_arrival),
        ("corner-tally invariants", verify_tally_invariants),
    ];
    let mut failed = false;
    for (name, suite) in suites {
        match suite(args.max_n) {
            Ok(cases) => println!("{name:<28} ok   ({cases} cases)"),
            Err(detail) => {
                failed = true;
                println!("{name:<28} FAIL {detail}");
            }
        }
    }
    if failed {
        return Err(CmdError::Failure(anyhow::anyhow!(
            "oracle verification failed; see table above"
        )));
    }
    Ok(())
}

/// Closed-form unrestricted corner counts vs the staircase walk, both
/// marginals, all shapes with du, dv <= 6.
fn verify_unrestricted(_max_n: u32) -> Result<usize, String> {
    let mut cases = 0;
    for du in 0..=6u32 {
        for dv in 0..=6u32 {
            let walk = tally_unrestricted_corners(du, dv);
            let r_cap = i64::from(du.max(dv)) + 1;
            for r in 0..=r_cap {
                let l_marginal: PathCount = walk
                    .iter()
                    .filter(|((r_l, _), _)| i64::from(*r_l) == r)
                    .fold(PathCount::zero(), |mut acc, (_, c)| {
                        acc += c;
                        acc
                    });
                let want_l = phi_l_wr(r, i64::from(du), i64::from(dv));
                if l_marginal != want_l {
                    return Err(format!(
                        "l-corner count mismatch at (r={r}, du={du}, dv={dv}): \
                         walk {l_marginal}, formula {want_l}"
                    ));
                }
                let r_marginal: PathCount = walk
                    .iter()
                    .filter(|((_, r_r), _)| i64::from(*r_r) == r)
                    .fold(PathCount::zero(), |mut acc, (_, c)| {
                        acc += c;
                        acc
                    });
                let want_r = phi_r_wr(r, i64::from(du), i64::from(dv));
                if r_marginal != want_r {
                    return Err(format!(
                        "r-corner count mismatch at (r={r}, du={du}, dv={dv}): \
                         walk {r_marginal}, formula {want_r}"
                    ));
                }
                cases += 2;
            }
        }
    }
    Ok(cases)
}

/// Closed-form diagonal-restricted corner counts vs the pruned walk for
/// a in [-6, 0], b in [0, 6].
fn verify_restricted(_max_n: u32) -> Result<usize, String> {
    let mut cases = 0;
    for a in -6..=0i64 {
        for b in 0..=6i64 {
            let walk = tally_restricted_corners(a, b).map_err(|e| e.to_string())?;
            let r_cap = b - a + 1;
            for r in 0..=r_cap {
                let l_marginal: PathCount = walk
                    .iter()
                    .filter(|((r_l, _), _)| i64::from(*r_l) == r)
                    .fold(PathCount::zero(), |mut acc, (_, c)| {
                        acc += c;
                        acc
                    });
                let want_l = phi_l_restricted(r, a, b).map_err(|e| e.to_string())?;
                if l_marginal != want_l {
                    return Err(format!(
                        "restricted l-corner mismatch at (r={r}, a={a}, b={b}): \
                         walk {l_marginal}, formula {want_l}"
                    ));
                }
                let r_marginal: PathCount = walk
                    .iter()
                    .filter(|((_, r_r), _)| i64::from(*r_r) == r)
                    .fold(PathCount::zero(), |mut acc, (_, c)| {
                        acc += c;
                        acc
                    });
                let want_r = phi_r_restricted(r, a, b).map_err(|e| e.to_string())?;
                if r_marginal != want_r {
                    return Err(format!(
                        "restricted r-corner mismatch at (r={r}, a={a}, b={b}): \
                         walk {r_marginal}, formula {want_r}"
                    ));
                }
                cases += 2;
            }
        }
    }
    Ok(cases)
}

/// Closed-form first-arrival counts vs exhaustive path enumeration for all
/// lattices with N <= max_n and M >= 1.
fn verify_first_arrival(max_n: u32) -> Result<usize, String> {
    let mut cases = 0;
    for n in 2..=max_n {
        for m in 1..=i64::from(n) {
            if (i64::from(n) - m) % 2 != 0 {
                continue;
            }
            let grid = GridSpec::from_displacement(n, m).map_err(|e| e.to_string())?;
            let tally = enumerate_paths(&grid, m).map_err(|e| e.to_string())?;
            let p = i64::from(grid.p());
            let q = i64::from(grid.q());
            for r_r in 0..=n {
                let got: PathCount = (0..=n)
                    .map(|r_l| tally.first_arrival_count(Component::PlusPlus, r_r, r_l))
                    .fold(PathCount::zero(), |mut acc, c| {
                        acc += c;
                        acc
                    });
                let r = 2 * i64::from(r_r) - 1;
                let want = if r >= 1 {
                    phi_first(Component::PlusPlus, r, p, q).map_err(|e| e.to_string())?
                } else if q == 0 {
                    // The reversal-free light-cone path.
                    PathCount::one()
                } else {
                    PathCount::zero()
                };
                if got != want {
                    return Err(format!(
                        "++ first-arrival mismatch at (N={n}, M={m}, R={r}): \
                         enumeration {got}, formula {want}"
                    ));
                }
                cases += 1;
            }
            for r_l in 0..=n {
                let got: PathCount = (0..=n)
                    .map(|r_r| tally.first_arrival_count(Component::PlusMinus, r_r, r_l))
                    .fold(PathCount::zero(), |mut acc, c| {
                        acc += c;
                        acc
                    });
                let r = 2 * i64::from(r_l);
                let want = phi_first(Component::PlusMinus, r, p, q).map_err(|e| e.to_string())?;
                if got != want {
                    return Err(format!(
                        "+- first-arrival mismatch at (N={n}, M={m}, R={r}): \
                         enumeration {got}, formula {want}"
                    ));
                }
                cases += 1;
            }
        }
    }
    Ok(cases)
}

/// Structural invariants of every corner tally with N <= min(max_n, 12):
/// per-corner balance |R_r - R_l| <= 1 and 2^(N-1) paths per departure sign.
fn verify_tally_invariants(max_n: u32) -> Result<usize, String> {
    let mut cases = 0;
    for n in 1..=max_n.min(12) {
        for m in -i64::from(n)..=i64::from(n) {
            if (i64::from(n) - m) % 2 != 0 {
                continue;
            }
            let grid = GridSpec::from_displacement(n, m).map_err(|e| e.to_string())?;
            let tally = enumerate_paths(&grid, m).map_err(|e| e.to_string())?;
            tally.check_invariants().map_err(|e| e.to_string())?;
            cases += 1;
        }
    }
    Ok(cases)
}

// ---------------------------------------------------------------------------
// propagator-table
// ---------------------------------------------------------------------------

fn axis_points(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let step = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { hi } else { lo + i as f64 * step })
        .collect()
}

fn cmd_propagator_table(args: &PropagatorTableArgs) -> CmdResult {
    let mut w = open_csv_sink(args.out.as_ref())?;
    writeln!(w, "x_BA_lambda_c,t_BA_lambda_c_over_c,component,variant,re,im")?;
    let components = args.component.components();
    for &t in &axis_points(args.grid.t_lo, args.grid.t_hi, args.grid.nt) {
        for &x in &axis_points(args.grid.x_lo, args.grid.x_hi, args.grid.nx) {
            let Some(iv) = make_interval_for_quadrature(x, t)? else {
                continue; // outside the light cone: no paths, no rows
            };
            for &component in &components {
                let full = k_full(component, &iv)?;
                write_table_row(&mut w, x, t, component, "full", full)?;
                if x < 0.0 {
                    continue; // first/later split defined for arrival from the left
                }
                if component == Component::PlusPlus || component == Component::PlusMinus {
                    let first = k_first(component, &iv)?;
                    write_table_row(&mut w, x, t, component, "first", first)?;
                }
                let later = k_later(component, &iv)?;
                write_table_row(&mut w, x, t, component, "later", later)?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

fn write_table_row(
    w: &mut dyn Write,
    x: f64,
    t: f64,
    component: Component,
    variant: &str,
    value: checkerboard::ComplexAmplitude,
) -> io::Result<()> {
    writeln!(
        w,
        "{x:.11e},{t:.11e},{component},{variant},{re:.11e},{im:.11e}",
        re = value.re,
        im = value.im
    )
}

// ---------------------------------------------------------------------------
// figure
// ---------------------------------------------------------------------------

fn cmd_figure(args: &FigureArgs) -> CmdResult {
    let base = args.preset.spec();
    let mut spec = base;
    if let Some(k0) = args.k0 {
        spec.k0_per_angstrom = k0;
    }
    if let Some(dk) = args.dk {
        if !(dk > 0.0) {
            return Err(usage("--dk must be positive"));
        }
        spec.dx_angstrom = 1.0 / (2.0 * dk);
    }
    // The packet centre is tied to the spread (captions say x0 = -6 dx or
    // -8 dx), so the multiple survives a --dk override.
    let x0_multiple = args
        .x0_dx
        .unwrap_or(base.x0_angstrom / base.dx_angstrom);
    spec.x0_angstrom = x0_multiple * spec.dx_angstrom;
    if let Some(x_obs) = args.x_obs {
        spec.x_obs_angstrom = x_obs;
    }
    if let Some(t_max_t0) = args.t_max_t0 {
        spec.t_max_over_t0 = t_max_t0;
    }
    if let Some(n_t) = args.n_t {
        spec.n_t = n_t;
    }
    if let Some(n_points) = args.quad_points {
        spec.quadrature = QuadratureSpec { n_points };
    }

    // Parameter echo: to stderr when the CSV occupies stdout.
    let mut echo: Box<dyn Write> = if args.out.is_some() {
        Box::new(io::stdout())
    } else {
        Box::new(io::stderr())
    };
    writeln!(echo, "preset = {}", spec.name)?;
    writeln!(echo, "k0_per_angstrom = {}", spec.k0_per_angstrom)?;
    writeln!(echo, "dk_per_angstrom = {}", spec.dk_per_angstrom())?;
    writeln!(echo, "dx_angstrom = {}", spec.dx_angstrom)?;
    writeln!(
        echo,
        "x0_angstrom = {} ({} dx)",
        spec.x0_angstrom, x0_multiple
    )?;
    writeln!(echo, "x_obs_angstrom = {}", spec.x_obs_angstrom)?;
    writeln!(echo, "v_over_c = {:.3e}", spec.v_over_c())?;
    writeln!(echo, "t0_seconds = {:.3e}", spec.t0_seconds())?;
    writeln!(echo, "t_max_over_t0 = {}", spec.t_max_over_t0)?;
    writeln!(echo, "n_t = {}", spec.n_t)?;
    writeln!(echo, "quadrature_points = {}", spec.quadrature.n_points)?;
    echo.flush()?;

    let decomposition = spec.run()?;
    let mut w = open_csv_sink(args.out.as_ref())?;
    decomposition.write_csv(&mut w)?;
    w.flush()?;
    Ok(())
}

// ---------------------------------------------------------------------------
// ratio-scan
// ---------------------------------------------------------------------------

fn cmd_ratio_scan(args: &RatioScanArgs) -> CmdResult {
    if !(args.z_min > 0.0) || !(args.z_max > args.z_min) {
        return Err(usage("need 0 < --z-min < --z-max"));
    }
    if args.points < 2 {
        return Err(usage("--points must be at least 2"));
    }
    if !(0.0..1.0).contains(&args.v) {
        return Err(usage("--v must lie in [0, 1)"));
    }
    let mut w = open_csv_sink(args.out.as_ref())?;
    writeln!(
        w,
        "z,exact_pp,exact_mm,exact_pm,asymptotic_pm,j0_near_zero"
    )?;
    let ln_lo = args.z_min.ln();
    let ln_step = (args.z_max.ln() - ln_lo) / (args.points - 1) as f64;
    for i in 0..args.points {
        let z = if i == args.points - 1 {
            args.z_max
        } else {
            (ln_lo + i as f64 * ln_step).exp()
        };
        let iv = interval_from_speed_and_length(args.v, z)?;
        let r = ratio_first_to_full(&iv)?;
        writeln!(
            w,
            "{z:.11e},{:.11e},{:.11e},{:.11e},{:.11e},{}",
            r.exact_pp,
            r.exact_mm,
            r.exact_pm,
            r.asymptotic_pm,
            u8::from(r.j0_near_zero)
        )?;
    }
    w.flush()?;
    Ok(())
}

// ---------------------------------------------------------------------------
// convergence
// ---------------------------------------------------------------------------

fn cmd_convergence(args: &ConvergenceArgs) -> CmdResult {
    let component = match args.component {
        ComponentChoice::Pp => Component::PlusPlus,
        ComponentChoice::Pm => Component::PlusMinus,
        _ => {
            return Err(usage(
                "--component must be pp or pm (the finite-N sums carry only those)",
            ))
        }
    };
    let (x, t) = args.interval;
    let iv = checkerboard::propagator::make_interval(x, t)?;
    let reference = match args.variant {
        VariantChoice::First => k_first(component, &iv)?,
        VariantChoice::Full => k_full(component, &iv)?,
    };
    let mut w = open_csv_sink(args.out.as_ref())?;
    writeln!(w, "n,re,im,reference_re,reference_im,rel_error")?;
    for &n in &args.n_list.0 {
        let value = k_finite_n(component, &iv, n, args.variant.variant())?;
        let rel = (value - reference).norm() / reference.norm().max(f64::MIN_POSITIVE);
        writeln!(
            w,
            "{n},{:.11e},{:.11e},{:.11e},{:.11e},{rel:.11e}",
            value.re, value.im, reference.re, reference.im
        )?;
    }
    w.flush()?;
    Ok(())
}
