//! Command-line surface for the starlike-sis library.
//!
//! Every computation is a subcommand with machine-readable output (JSON by
//! default, CSV via `--format csv`; `sweep` defaults to CSV). All floating
//! point values are printed with 17 significant digits so round-tripping
//! through text is lossless, and identical invocations produce byte-identical
//! output.
//!
//! Exit codes: 0 success, 1 validation failure (`validate` found a
//! discrepancy above tolerance), 2 usage or parameter error, 3 internal
//! solver failure.

use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use starlike_sis::dynamics::{classify_region, flip_classifier, iterate, LimitKind, RegionTally};
use starlike_sis::multilevel::{
    apply_f_multilevel, empirical_threshold, solve_fixed_point_multilevel_with, threshold_3level,
    NONTRIVIAL_DETECTION_FLOOR,
};
use starlike_sis::reduced::{apply_f, classify_regime, solve_fixed_points, threshold, Regime};
use starlike_sis::scalar::{f_scalar, iterate_scalar, scalar_report};
use starlike_sis::spectral::{eig2, eigen_sweep_line, jacobian};
use starlike_sis::validate::{
    reduction_discrepancy_multilevel, reduction_discrepancy_star, reduction_discrepancy_star_with,
    spread_decay_check,
};
use starlike_sis::{Error, LevelParams, Params, StarParams, State2, StateL};

const SCHEMA: &str = "starlike-sis/1";

// ---------------------------------------------------------------------------
// argument surface

#[derive(Parser)]
#[command(
    name = "starlike-sis",
    version,
    about = "Infection dynamics on stars and starlike trees",
    long_about = "Thresholds, fixed points, trajectories, spectral sweeps and \
                  cross-validation for discrete-time infection dynamics on \
                  starlike graphs. Exit codes: 0 success, 1 validation \
                  failure, 2 usage/parameter error, 3 solver failure."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Epidemic threshold and regime for the given parameters
    #[command(after_help = "CSV columns: threshold,regime\n\
        With --counts of one or two levels the threshold is exact \
        ((1-a)/sqrt(n) resp. (1-a)/sqrt(n1+n2)); for deeper trees it is \
        located numerically by bisection (width 1e-4, takes seconds).")]
    Threshold(CommonArgs),

    /// Fixed points: planar solver, multilevel solver, or scalar closed forms
    #[command(
        name = "fixed-point",
        after_help = "CSV columns: \
        star: regime,residual,x_f,y_f (x_f,y_f empty when no interior point); \
        --counts: regime,residual,s1,...,sL; \
        --scalar: x_f,x_c,f_prime_at_0,f_prime_at_1.\n\
        For --counts the regime is read off the solver outcome (interior \
        fixed point found or not), not from a closed-form threshold."
    )]
    FixedPoint(FixedPointArgs),

    /// Iterate the map from a start state and report the limit
    #[command(after_help = "Default start is the all-ones state (1 for \
        --scalar). --trace replaces the summary with trajectory rows: \
        t,x,y for a star, t,s1,...,sL for --counts, t,x for --scalar. \
        An Unresolved limit is not an error; the exit code stays 0.")]
    Iterate(IterateArgs),

    /// Parameter sweeps: eigenvalue line b = (m-a)/sqrt(2), or an (a,b) grid
    #[command(after_help = "CSV columns: a,b,n,regime,x_f,y_f,lambda1. \
        On subcritical rows x_f, y_f and lambda1 are empty. --line-m m \
        samples the two-spoke fixed-point eigenvalue along b = (m-a)/sqrt(2) \
        at --steps interior points; --grid sweeps an equispaced interior \
        (a,b) grid of --steps x --steps cells for --n spokes. Rows are \
        emitted in a fixed order (line: increasing a; grid: row-major in \
        (a, b)), so output is byte-stable.")]
    Sweep(SweepArgs),

    /// Cross-check the reduced maps against the full per-node recursion
    #[command(after_help = "CSV columns: \
        star: reduction_max_discrepancy,reduction_pass,spread_max_ratio_error,spread_pass,pass; \
        --counts: reduction_max_discrepancy,reduction_pass,pass.\n\
        The start state defaults to a seeded random draw (--seed, default 0). \
        Exit code 1 when any discrepancy exceeds --tol.")]
    Validate(ValidateArgs),

    /// Region of a point, or the region-exchange label of a parameter set
    #[command(after_help = "CSV columns: region (point mode) or \
        label,ii_to_i,ii_to_ii,ii_to_iii,ii_to_iv,ii_to_boundary,\
        iv_to_i,iv_to_ii,iv_to_iii,iv_to_iv,iv_to_boundary,offenders \
        (--flip mode). Flip sampling uses a fixed low-discrepancy sequence, \
        so results are reproducible without a seed.")]
    Classify(ClassifyArgs),
}

#[derive(ValueEnum, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Clone, Debug, Default)]
struct CommonArgs {
    /// Probability an infected node stays infected through one step, in (0,1)
    #[arg(long)]
    a: Option<f64>,
    /// Per-edge transmission probability, in (0,1)
    #[arg(long)]
    b: Option<f64>,
    /// Spoke count of a plain star
    #[arg(long, conflicts_with = "counts")]
    n: Option<u32>,
    /// Branch counts per level of a starlike tree, e.g. --counts 2,2
    #[arg(long, value_delimiter = ',')]
    counts: Option<Vec<u32>>,
    /// Convergence tolerance [default: 1e-10]
    #[arg(long)]
    tol: Option<f64>,
    /// Iteration budget [default: 1000000]
    #[arg(long)]
    max_iters: Option<usize>,
    /// Output format [default: json; sweep defaults to csv]
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write output to this file instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
    /// JSON file whose keys mirror the long flags; explicit flags win
    #[arg(long)]
    config: Option<PathBuf>,
    /// Seed for the randomized starts used by validate [default: 0]
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct FixedPointArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Report the one-variable closed forms instead of solving
    #[arg(long)]
    scalar: bool,
}

#[derive(Args, Debug)]
struct IterateArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Start state: x,y for a star; one value per level for --counts
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    start: Option<Vec<f64>>,
    /// Emit the whole trajectory as CSV rows instead of a summary
    #[arg(long)]
    trace: bool,
    /// Iterate the one-variable map instead
    #[arg(long)]
    scalar: bool,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Sweep the two-spoke eigenvalue line b = (m-a)/sqrt(2) at this m
    #[arg(long, conflicts_with = "grid")]
    line_m: Option<f64>,
    /// Sweep an interior (a,b) grid instead of a line
    #[arg(long)]
    grid: bool,
    /// Line: number of sample points; grid: points per axis
    #[arg(long)]
    steps: Option<u32>,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Number of synchronized steps to compare [default: 1000]
    #[arg(long)]
    steps: Option<u32>,
    /// Start state (hub first); defaults to a seeded random draw
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    start: Option<Vec<f64>>,
    /// Negative control: perturb the reduced map and prove the check bites
    #[arg(long, hide = true)]
    corrupt: bool,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Point to classify against the two curves: x,y
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    start: Option<Vec<f64>>,
    /// Classify the region-exchange behavior of the parameter set instead
    #[arg(long)]
    flip: bool,
    /// Sample points per region for --flip [default: 2000]
    #[arg(long)]
    samples: Option<usize>,
}

// ---------------------------------------------------------------------------
// config file and merged settings

/// Mirror of the long flags for `--config`. Unknown keys are rejected so a
/// typo cannot silently fall back to a default.
#[derive(Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
struct FileConfig {
    a: Option<f64>,
    b: Option<f64>,
    n: Option<u32>,
    counts: Option<Vec<u32>>,
    start: Option<Vec<f64>>,
    tol: Option<f64>,
    max_iters: Option<usize>,
    format: Option<Format>,
    output: Option<PathBuf>,
    seed: Option<u64>,
    steps: Option<u32>,
    line_m: Option<f64>,
    grid: Option<bool>,
    samples: Option<usize>,
    trace: Option<bool>,
    scalar: Option<bool>,
    flip: Option<bool>,
    corrupt: Option<bool>,
}

/// Fully merged settings: flags override the config file, which overrides
/// the defaults.
struct Cfg {
    a: Option<f64>,
    b: Option<f64>,
    n: Option<u32>,
    counts: Option<Vec<u32>>,
    start: Option<Vec<f64>>,
    tol: f64,
    max_iters: usize,
    format: Option<Format>,
    output: Option<PathBuf>,
    seed: u64,
    steps: Option<u32>,
    line_m: Option<f64>,
    grid: bool,
    samples: Option<usize>,
    trace: bool,
    scalar: bool,
    flip: bool,
    corrupt: bool,
}

fn resolve(common: CommonArgs) -> Result<Cfg, Failure> {
    let file = match &common.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str::<FileConfig>(&text)
                .map_err(|e| Failure::Usage(format!("bad config {}: {e}", path.display())))?
        }
        None => FileConfig::default(),
    };
    Ok(Cfg {
        a: common.a.or(file.a),
        b: common.b.or(file.b),
        n: common.n.or(file.n),
        counts: common.counts.or(file.counts),
        start: file.start,
        tol: common.tol.or(file.tol).unwrap_or(starlike_sis::DEFAULT_TOL),
        max_iters: common
            .max_iters
            .or(file.max_iters)
            .unwrap_or(starlike_sis::DEFAULT_MAX_ITERS),
        format: common.format.or(file.format),
        output: common.output.or(file.output),
        seed: common.seed.or(file.seed).unwrap_or(0),
        steps: file.steps,
        line_m: file.line_m,
        grid: file.grid.unwrap_or(false),
        samples: file.samples,
        trace: file.trace.unwrap_or(false),
        scalar: file.scalar.unwrap_or(false),
        flip: file.flip.unwrap_or(false),
        corrupt: file.corrupt.unwrap_or(false),
    })
}

// ---------------------------------------------------------------------------
// failure plumbing

enum Failure {
    Core(Error),
    Usage(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            // a solver giving up is an internal failure; everything else the
            // user can fix by changing inputs
            Failure::Core(Error::SolverFailed { .. }) => 3,
            _ => 2,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Usage(s) => f.write_str(s),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn req<T>(v: Option<T>, flag: &str) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("missing required {flag}")))
}

// ---------------------------------------------------------------------------
// output helpers

/// 17 significant digits: enough to reproduce the double exactly.
fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

fn json_num_opt(v: Option<f64>) -> String {
    v.map(fmt17).unwrap_or_else(|| "null".into())
}

fn json_array(vs: &[f64]) -> String {
    let inner: Vec<String> = vs.iter().map(|&v| fmt17(v)).collect();
    format!("[{}]", inner.join(","))
}

fn csv_cell_opt(v: Option<f64>) -> String {
    v.map(fmt17).unwrap_or_default()
}

fn emit(output: &Option<PathBuf>, content: &str) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, content)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------------
// shared parameter resolution

enum Shape {
    Star(StarParams),
    Tree(LevelParams),
}

fn shape(cfg: &Cfg) -> Result<Shape, Failure> {
    let a = req(cfg.a, "--a")?;
    let b = req(cfg.b, "--b")?;
    match (cfg.n, &cfg.counts) {
        (Some(n), None) => Ok(Shape::Star(StarParams::from_parts(a, b, n)?)),
        (None, Some(counts)) => Ok(Shape::Tree(LevelParams::new(
            Params::new(a, b)?,
            counts.clone(),
        )?)),
        (None, None) => Err(Failure::Usage("one of --n or --counts is required".into())),
        (Some(_), Some(_)) => Err(Failure::Usage(
            "--n and --counts are mutually exclusive".into(),
        )),
    }
}

fn star_only(cfg: &Cfg, what: &str) -> Result<StarParams, Failure> {
    match shape(cfg)? {
        Shape::Star(sp) => Ok(sp),
        Shape::Tree(_) => Err(Failure::Usage(format!("{what} supports --n only"))),
    }
}

fn start_state2(cfg: &Cfg, default: State2) -> Result<State2, Failure> {
    match &cfg.start {
        None => Ok(default),
        Some(v) if v.len() == 2 => Ok(State2::new(v[0], v[1])?),
        Some(v) => Err(Failure::Usage(format!(
            "--start needs exactly two values for a star, got {}",
            v.len()
        ))),
    }
}

// ---------------------------------------------------------------------------

fn main() -> ExitCode {
    let cli = Cli::parse(); // clap exits with code 2 on usage errors
    match run(cli.cmd) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.code())
        }
    }
}

fn run(cmd: Cmd) -> Result<ExitCode, Failure> {
    match cmd {
        Cmd::Threshold(common) => cmd_threshold(resolve(common)?),
        Cmd::FixedPoint(args) => {
            let mut cfg = resolve(args.common)?;
            cfg.scalar |= args.scalar;
            cmd_fixed_point(cfg)
        }
        Cmd::Iterate(args) => {
            let mut cfg = resolve(args.common)?;
            if args.start.is_some() {
                cfg.start = args.start;
            }
            cfg.trace |= args.trace;
            cfg.scalar |= args.scalar;
            cmd_iterate(cfg)
        }
        Cmd::Sweep(args) => {
            let mut cfg = resolve(args.common)?;
            cfg.line_m = args.line_m.or(cfg.line_m);
            cfg.grid |= args.grid;
            cfg.steps = args.steps.or(cfg.steps);
            cmd_sweep(cfg)
        }
        Cmd::Validate(args) => {
            let mut cfg = resolve(args.common)?;
            cfg.steps = args.steps.or(cfg.steps);
            if args.start.is_some() {
                cfg.start = args.start;
            }
            cfg.corrupt |= args.corrupt;
            cmd_validate(cfg)
        }
        Cmd::Classify(args) => {
            let mut cfg = resolve(args.common)?;
            if args.start.is_some() {
                cfg.start = args.start;
            }
            cfg.flip |= args.flip;
            cfg.samples = args.samples.or(cfg.samples);
            cmd_classify(cfg)
        }
    }
}

// ---------------------------------------------------------------------------
// subcommands

fn cmd_threshold(cfg: Cfg) -> Result<ExitCode, Failure> {
    let a = req(cfg.a, "--a")?;
    let b = req(cfg.b, "--b")?;
    Params::new(a, b)?;
    let t = match (cfg.n, &cfg.counts) {
        (Some(n), None) => threshold(a, n),
        (None, Some(counts)) => {
            LevelParams::new(Params::new(a, b)?, counts.clone())?; // validate counts
            match counts.as_slice() {
                [n] => threshold(a, *n),
                [n1, n2] => threshold_3level(a, *n1, *n2),
                _ => empirical_threshold(a, counts)?,
            }
        }
        (None, None) => return Err(Failure::Usage("one of --n or --counts is required".into())),
        (Some(_), Some(_)) => {
            return Err(Failure::Usage(
                "--n and --counts are mutually exclusive".into(),
            ))
        }
    };
    let regime = if b > t {
        Regime::Supercritical
    } else if b == t {
        Regime::Critical
    } else {
        Regime::Subcritical
    };

    let content = match cfg.format.unwrap_or(Format::Json) {
        Format::Json => format!(
            "{{\"schema\":\"{SCHEMA}\",\"threshold\":{},\"regime\":\"{regime}\"}}\n",
            fmt17(t)
        ),
        Format::Csv => format!("threshold,regime\n{},{regime}\n", fmt17(t)),
    };
    emit(&cfg.output, &content)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_fixed_point(cfg: Cfg) -> Result<ExitCode, Failure> {
    let format = cfg.format.unwrap_or(Format::Json);
    let content = if cfg.scalar {
        let a = req(cfg.a, "--a")?;
        let b = req(cfg.b, "--b")?;
        let rep = scalar_report(Params::new(a, b)?);
        match format {
            Format::Json => format!(
                "{{\"schema\":\"{SCHEMA}\",\"x_f\":{},\"x_c\":{},\"f_prime_at_0\":{},\"f_prime_at_1\":{}}}\n",
                json_num_opt(rep.x_f),
                json_num_opt(rep.x_c),
                fmt17(rep.f_prime_at_0),
                fmt17(rep.f_prime_at_1)
            ),
            Format::Csv => format!(
                "x_f,x_c,f_prime_at_0,f_prime_at_1\n{},{},{},{}\n",
                csv_cell_opt(rep.x_f),
                csv_cell_opt(rep.x_c),
                fmt17(rep.f_prime_at_0),
                fmt17(rep.f_prime_at_1)
            ),
        }
    } else {
        match shape(&cfg)? {
            Shape::Star(sp) => {
                let rep = solve_fixed_points(sp)?;
                match format {
                    Format::Json => format!(
                        "{{\"schema\":\"{SCHEMA}\",\"regime\":\"{}\",\"trivial\":{},\"nontrivial\":{},\"residual\":{}}}\n",
                        rep.regime,
                        json_array(&[0.0, 0.0]),
                        rep.nontrivial
                            .map(|s| json_array(&[s.x, s.y]))
                            .unwrap_or_else(|| "null".into()),
                        fmt17(rep.residual)
                    ),
                    Format::Csv => format!(
                        "regime,residual,x_f,y_f\n{},{},{},{}\n",
                        rep.regime,
                        fmt17(rep.residual),
                        csv_cell_opt(rep.nontrivial.map(|s| s.x)),
                        csv_cell_opt(rep.nontrivial.map(|s| s.y))
                    ),
                }
            }
            Shape::Tree(lp) => {
                let fp = solve_fixed_point_multilevel_with(
                    &lp,
                    cfg.tol,
                    NONTRIVIAL_DETECTION_FLOOR,
                    cfg.max_iters,
                )?;
                let (regime, residual) = match &fp {
                    Some(s) => {
                        let residual = apply_f_multilevel(&lp, s)?.sup_dist(s);
                        (Regime::Supercritical, residual)
                    }
                    None => (Regime::Subcritical, 0.0),
                };
                match format {
                    Format::Json => format!(
                        "{{\"schema\":\"{SCHEMA}\",\"regime\":\"{regime}\",\"nontrivial\":{},\"residual\":{}}}\n",
                        fp.as_ref()
                            .map(|s| json_array(&s.levels))
                            .unwrap_or_else(|| "null".into()),
                        fmt17(residual)
                    ),
                    Format::Csv => {
                        let levels = lp.level_count();
                        let mut header = String::from("regime,residual");
                        for k in 1..=levels {
                            header.push_str(&format!(",s{k}"));
                        }
                        let cells = match &fp {
                            Some(s) => s
                                .levels
                                .iter()
                                .map(|&v| fmt17(v))
                                .collect::<Vec<_>>()
                                .join(","),
                            None => vec![""; levels].join(","),
                        };
                        format!("{header}\n{regime},{},{cells}\n", fmt17(residual))
                    }
                }
            }
        }
    };
    emit(&cfg.output, &content)?;
    Ok(ExitCode::SUCCESS)
}

fn limit_kind_name(k: LimitKind) -> &'static str {
    match k {
        LimitKind::Trivial => "Trivial",
        LimitKind::Nontrivial => "Nontrivial",
        LimitKind::Unresolved => "Unresolved",
    }
}

fn cmd_iterate(cfg: Cfg) -> Result<ExitCode, Failure> {
    let format = cfg.format.unwrap_or(Format::Json);
    let content = if cfg.scalar {
        let a = req(cfg.a, "--a")?;
        let b = req(cfg.b, "--b")?;
        let p = Params::new(a, b)?;
        let x0 = match &cfg.start {
            None => 1.0,
            Some(v) if v.len() == 1 => v[0],
            Some(v) => {
                return Err(Failure::Usage(format!(
                    "--start needs exactly one value with --scalar, got {}",
                    v.len()
                )))
            }
        };
        if !(0.0..=1.0).contains(&x0) {
            return Err(Failure::Core(Error::OutOfRange {
                name: "start",
                value: x0,
                range: "[0, 1]",
            }));
        }
        let (limit, iterations, converged) = iterate_scalar(p, x0, cfg.max_iters, cfg.tol);
        let kind = if !converged {
            LimitKind::Unresolved
        } else if scalar_report(p)
            .x_f
            .is_some_and(|xf| (limit - xf).abs() <= 10.0 * cfg.tol)
        {
            LimitKind::Nontrivial
        } else if limit.abs() <= 10.0 * cfg.tol {
            LimitKind::Trivial
        } else {
            LimitKind::Unresolved
        };
        if cfg.trace {
            let mut rows = String::from("t,x\n");
            let mut x = x0;
            rows.push_str(&format!("0,{}\n", fmt17(x)));
            for t in 1..=iterations {
                x = f_scalar(p, x);
                rows.push_str(&format!("{t},{}\n", fmt17(x)));
            }
            rows
        } else {
            match format {
                Format::Json => format!(
                    "{{\"schema\":\"{SCHEMA}\",\"limit_kind\":\"{}\",\"iterations\":{iterations},\"final\":{}}}\n",
                    limit_kind_name(kind),
                    fmt17(limit)
                ),
                Format::Csv => format!(
                    "limit_kind,iterations,x\n{},{iterations},{}\n",
                    limit_kind_name(kind),
                    fmt17(limit)
                ),
            }
        }
    } else {
        match shape(&cfg)? {
            Shape::Star(sp) => {
                let s0 = start_state2(&cfg, State2 { x: 1.0, y: 1.0 })?;
                let traj = iterate(sp, s0, cfg.max_iters, cfg.tol);
                if cfg.trace {
                    let mut rows = String::from("t,x,y\n");
                    for (t, p) in traj.points.iter().enumerate() {
                        rows.push_str(&format!("{t},{},{}\n", fmt17(p.x), fmt17(p.y)));
                    }
                    rows
                } else {
                    let last = *traj.points.last().expect("trajectory has a start");
                    match format {
                        Format::Json => format!(
                            "{{\"schema\":\"{SCHEMA}\",\"limit_kind\":\"{}\",\"iterations\":{},\"final\":{},\"converged_to\":{}}}\n",
                            limit_kind_name(traj.limit_kind),
                            traj.iterations_used,
                            json_array(&[last.x, last.y]),
                            traj.converged_to
                                .map(|s| json_array(&[s.x, s.y]))
                                .unwrap_or_else(|| "null".into())
                        ),
                        Format::Csv => format!(
                            "limit_kind,iterations,x,y\n{},{},{},{}\n",
                            limit_kind_name(traj.limit_kind),
                            traj.iterations_used,
                            fmt17(last.x),
                            fmt17(last.y)
                        ),
                    }
                }
            }
            Shape::Tree(lp) => {
                let levels = lp.level_count();
                let s0 = match &cfg.start {
                    None => StateL::all_ones(levels),
                    Some(v) if v.len() == levels => StateL::new(v.clone())?,
                    Some(v) => {
                        return Err(Failure::Usage(format!(
                            "--start needs one value per level ({levels}), got {}",
                            v.len()
                        )))
                    }
                };
                let mut points = vec![s0.clone()];
                let mut cur = s0;
                let mut converged = false;
                let mut iterations = 0usize;
                for _ in 0..cfg.max_iters {
                    let next = apply_f_multilevel(&lp, &cur)?;
                    let step = next.sup_dist(&cur);
                    cur = next;
                    iterations += 1;
                    if cfg.trace {
                        points.push(cur.clone());
                    }
                    if step < cfg.tol {
                        converged = true;
                        break;
                    }
                }
                let kind = if !converged {
                    LimitKind::Unresolved
                } else if cur.sup_norm() < NONTRIVIAL_DETECTION_FLOOR {
                    LimitKind::Trivial
                } else {
                    LimitKind::Nontrivial
                };
                if cfg.trace {
                    let mut header = String::from("t");
                    for k in 1..=levels {
                        header.push_str(&format!(",s{k}"));
                    }
                    header.push('\n');
                    let mut rows = header;
                    for (t, s) in points.iter().enumerate() {
                        let cells = s
                            .levels
                            .iter()
                            .map(|&v| fmt17(v))
                            .collect::<Vec<_>>()
                            .join(",");
                        rows.push_str(&format!("{t},{cells}\n"));
                    }
                    rows
                } else {
                    match format {
                        Format::Json => format!(
                            "{{\"schema\":\"{SCHEMA}\",\"limit_kind\":\"{}\",\"iterations\":{iterations},\"final\":{}}}\n",
                            limit_kind_name(kind),
                            json_array(&cur.levels)
                        ),
                        Format::Csv => {
                            let mut header = String::from("limit_kind,iterations");
                            for k in 1..=levels {
                                header.push_str(&format!(",s{k}"));
                            }
                            let cells = cur
                                .levels
                                .iter()
                                .map(|&v| fmt17(v))
                                .collect::<Vec<_>>()
                                .join(",");
                            format!(
                                "{header}\n{},{iterations},{cells}\n",
                                limit_kind_name(kind)
                            )
                        }
                    }
                }
            }
        }
    };
    emit(&cfg.output, &content)?;
    Ok(ExitCode::SUCCESS)
}

struct SweepRow {
    a: f64,
    b: f64,
    n: u32,
    regime: Regime,
    x_f: Option<f64>,
    y_f: Option<f64>,
    lambda1: Option<f64>,
}

fn cmd_sweep(cfg: Cfg) -> Result<ExitCode, Failure> {
    let steps = req(cfg.steps, "--steps")?;
    let rows: Vec<SweepRow> = if let Some(m) = cfg.line_m {
        eigen_sweep_line(m, steps)?
            .into_iter()
            .map(|r| SweepRow {
                a: r.a,
                b: r.b,
                n: 2,
                regime: Regime::Supercritical,
                x_f: Some(r.x_f),
                y_f: Some(r.y_f),
                lambda1: Some(r.lambda1),
            })
            .collect()
    } else if cfg.grid {
        if steps < 1 {
            return Err(Failure::Usage(
                "--steps must be at least 1 for --grid".into(),
            ));
        }
        if cfg.counts.is_some() {
            return Err(Failure::Usage("sweep supports --n only".into()));
        }
        let n = cfg.n.unwrap_or(2);
        let denom = (steps + 1) as f64;
        let mut rows = Vec::with_capacity((steps * steps) as usize);
        for i in 0..steps {
            let a = (i + 1) as f64 / denom;
            for j in 0..steps {
                let b = (j + 1) as f64 / denom;
                let sp = StarParams::from_parts(a, b, n)?;
                let regime = classify_regime(sp);
                let row = if regime == Regime::Supercritical {
                    let fp = solve_fixed_points(sp)?
                        .nontrivial
                        .expect("supercritical regime has an interior point");
                    let lambda1 = eig2(jacobian(sp, fp)).lambda1;
                    SweepRow {
                        a,
                        b,
                        n,
                        regime,
                        x_f: Some(fp.x),
                        y_f: Some(fp.y),
                        lambda1: Some(lambda1),
                    }
                } else {
                    SweepRow {
                        a,
                        b,
                        n,
                        regime,
                        x_f: None,
                        y_f: None,
                        lambda1: None,
                    }
                };
                rows.push(row);
            }
        }
        rows
    } else {
        return Err(Failure::Usage(
            "sweep needs --line-m or --grid to define its domain".into(),
        ));
    };

    // sweeps are tabular by nature, so CSV is the default here
    let content = match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut out = String::from("a,b,n,regime,x_f,y_f,lambda1\n");
            for r in &rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    fmt17(r.a),
                    fmt17(r.b),
                    r.n,
                    r.regime,
                    csv_cell_opt(r.x_f),
                    csv_cell_opt(r.y_f),
                    csv_cell_opt(r.lambda1)
                ));
            }
            out
        }
        Format::Json => {
            let records: Vec<String> = rows
                .iter()
                .map(|r| {
                    format!(
                        "{{\"a\":{},\"b\":{},\"n\":{},\"regime\":\"{}\",\"x_f\":{},\"y_f\":{},\"lambda1\":{}}}",
                        fmt17(r.a),
                        fmt17(r.b),
                        r.n,
                        r.regime,
                        json_num_opt(r.x_f),
                        json_num_opt(r.y_f),
                        json_num_opt(r.lambda1)
                    )
                })
                .collect();
            format!(
                "{{\"schema\":\"{SCHEMA}\",\"records\":[{}]}}\n",
                records.join(",")
            )
        }
    };
    emit(&cfg.output, &content)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_validate(cfg: Cfg) -> Result<ExitCode, Failure> {
    let steps = cfg.steps.unwrap_or(1000) as usize;
    let format = cfg.format.unwrap_or(Format::Json);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (content, pass) = match shape(&cfg)? {
        Shape::Star(sp) => {
            let s0 = match &cfg.start {
                Some(_) => start_state2(&cfg, State2 { x: 0.5, y: 0.5 })?,
                None => State2::new(rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0))
                    .expect("draw is inside the unit square"),
            };
            let reduction = if cfg.corrupt {
                reduction_discrepancy_star_with(sp, s0, steps, |sp, s| {
                    let mut next = apply_f(sp, s);
                    next.y = (next.y + 1e-9).min(1.0);
                    next
                })?
            } else {
                reduction_discrepancy_star(sp, s0, steps)?
            };
            let hub0 = rng.gen_range(0.0..1.0);
            let spokes: Vec<f64> = (0..sp.n()).map(|_| rng.gen_range(0.0..1.0)).collect();
            let spread = spread_decay_check(sp, hub0, &spokes, 250, 1e-3)?;

            let reduction_pass = reduction <= cfg.tol;
            let spread_pass = spread.max_ratio_error <= cfg.tol;
            let pass = reduction_pass && spread_pass;
            let content = match format {
                Format::Json => format!(
                    "{{\"schema\":\"{SCHEMA}\",\"reduction_max_discrepancy\":{},\"reduction_pass\":{reduction_pass},\"spread_max_ratio_error\":{},\"spread_pass\":{spread_pass},\"pass\":{pass}}}\n",
                    fmt17(reduction),
                    fmt17(spread.max_ratio_error)
                ),
                Format::Csv => format!(
                    "reduction_max_discrepancy,reduction_pass,spread_max_ratio_error,spread_pass,pass\n{},{reduction_pass},{},{spread_pass},{pass}\n",
                    fmt17(reduction),
                    fmt17(spread.max_ratio_error)
                ),
            };
            (content, pass)
        }
        Shape::Tree(lp) => {
            if cfg.corrupt {
                return Err(Failure::Usage("--corrupt applies to stars only".into()));
            }
            let levels = lp.level_count();
            let s0 = match &cfg.start {
                None => StateL::new((0..levels).map(|_| rng.gen_range(0.0..1.0)).collect())
                    .expect("draw is inside the unit cube"),
                Some(v) if v.len() == levels => StateL::new(v.clone())?,
                Some(v) => {
                    return Err(Failure::Usage(format!(
                        "--start needs one value per level ({levels}), got {}",
                        v.len()
                    )))
                }
            };
            let reduction = reduction_discrepancy_multilevel(&lp, &s0, steps)?;
            let pass = reduction <= cfg.tol;
            let content = match format {
                Format::Json => format!(
                    "{{\"schema\":\"{SCHEMA}\",\"reduction_max_discrepancy\":{},\"reduction_pass\":{pass},\"pass\":{pass}}}\n",
                    fmt17(reduction)
                ),
                Format::Csv => format!(
                    "reduction_max_discrepancy,reduction_pass,pass\n{},{pass},{pass}\n",
                    fmt17(reduction)
                ),
            };
            (content, pass)
        }
    };
    emit(&cfg.output, &content)?;
    Ok(if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn tally_csv(t: &RegionTally) -> String {
    format!(
        "{},{},{},{},{}",
        t.to_i, t.to_ii, t.to_iii, t.to_iv, t.to_boundary
    )
}

fn tally_json(t: &RegionTally) -> String {
    format!(
        "{{\"to_i\":{},\"to_ii\":{},\"to_iii\":{},\"to_iv\":{},\"to_boundary\":{}}}",
        t.to_i, t.to_ii, t.to_iii, t.to_iv, t.to_boundary
    )
}

fn cmd_classify(cfg: Cfg) -> Result<ExitCode, Failure> {
    let format = cfg.format.unwrap_or(Format::Json);
    let sp = star_only(&cfg, "classify")?;
    let content = if cfg.flip {
        let samples = cfg.samples.unwrap_or(2000);
        let rep = flip_classifier(sp, samples)?;
        match format {
            Format::Json => format!(
                "{{\"schema\":\"{SCHEMA}\",\"label\":\"{}\",\"from_ii\":{},\"from_iv\":{},\"offenders\":{}}}\n",
                rep.label,
                tally_json(&rep.from_region_ii),
                tally_json(&rep.from_region_iv),
                rep.offenders.len()
            ),
            Format::Csv => format!(
                "label,ii_to_i,ii_to_ii,ii_to_iii,ii_to_iv,ii_to_boundary,iv_to_i,iv_to_ii,iv_to_iii,iv_to_iv,iv_to_boundary,offenders\n{},{},{},{}\n",
                rep.label,
                tally_csv(&rep.from_region_ii),
                tally_csv(&rep.from_region_iv),
                rep.offenders.len()
            ),
        }
    } else {
        let s = match &cfg.start {
            Some(_) => start_state2(&cfg, State2::ORIGIN)?,
            None => {
                return Err(Failure::Usage(
                    "classify needs --start x,y (or --flip)".into(),
                ))
            }
        };
        let region = classify_region(sp, s);
        match format {
            Format::Json => {
                format!("{{\"schema\":\"{SCHEMA}\",\"region\":\"{region}\"}}\n")
            }
            Format::Csv => format!("region\n{region}\n"),
        }
    };
    emit(&cfg.output, &content)?;
    Ok(ExitCode::SUCCESS)
}
