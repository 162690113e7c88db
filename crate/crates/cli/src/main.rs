use clap::{Args, Parser, Subcommand, ValueEnum};
use fdbt::harness::{
    reproduce_example, run_randomized_experiment, verify_bound, write_bundle, ExampleName,
    LadderParams, RandomModelSpec, VerificationRecord, LADDER_CASE2_BAND, LADDER_SF_EPSILON,
};
use fdbt::io::{read_model, sweep_csv, write_model, write_text};
use fdbt::sysmodel::{error_system, sweep_lossy, FrequencyGrid};
use fdbt::{Bounds, Method, ReductionResult, StateSpace};
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "fdbt", version, about = "Frequency-dependent balanced truncation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce a model and write the reduced model plus a bound report.
    Reduce {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        /// Reduced model file.
        #[arg(long)]
        out: PathBuf,
        /// Report JSON file (also printed to stdout).
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Recompute the bounds of a reduction without writing a model.
    Bounds {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        /// Check every bound against a dense sweep.
        #[arg(long)]
        verify: bool,
    },
    /// σ_max sweep of a model, or of the error system when --reduced is given.
    Sweep {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        reduced: Option<PathBuf>,
        #[arg(long, allow_negative_numbers = true)]
        wmin: f64,
        #[arg(long, allow_negative_numbers = true)]
        wmax: f64,
        #[arg(long, default_value_t = 200)]
        points: usize,
        #[arg(long, conflicts_with = "lin")]
        log: bool,
        #[arg(long)]
        lin: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Experiment and example drivers.
    Bench {
        #[command(subcommand)]
        which: Bench,
    },
    /// Model generators.
    Gen {
        #[command(subcommand)]
        which: Gen,
    },
}

#[derive(Subcommand)]
enum Bench {
    /// Randomized comparison of FDBT, FGBT and FIBT.
    Random {
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.2, 0.4, 0.8, 1.5])]
        wl: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = vec![1, 2, 3])]
        r: Vec<usize>,
        /// Treat the diagonal spread as a standard deviation instead of a variance.
        #[arg(long)]
        spread_is_std: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Reproduce one worked example: sweeps as CSV and report.json.
    Example {
        name: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Reduce a generated ladder with every method and verify the bounds.
    Ladder {
        #[arg(long, default_value_t = 201)]
        order: usize,
        #[arg(long, value_delimiter = ',', default_values_t = vec![51])]
        r: Vec<usize>,
        #[command(flatten)]
        params: LadderArgs,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum Gen {
    /// RLC ladder of odd order.
    Ladder {
        #[arg(long, default_value_t = 201)]
        order: usize,
        #[command(flatten)]
        params: LadderArgs,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct LadderArgs {
    /// Load resistance.
    #[arg(long = "load", default_value_t = 1.0)]
    r: f64,
    /// Series resistance of each inductor.
    #[arg(long, default_value_t = 1e-3)]
    rbar: f64,
    #[arg(long = "cap", default_value_t = 1.0)]
    c: f64,
    #[arg(long = "ind", default_value_t = 1.0)]
    l: f64,
}

impl LadderArgs {
    fn params(&self) -> LadderParams {
        LadderParams { r: self.r, rbar: self.rbar, c: self.c, l: self.l }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodName {
    Fibt,
    Spa,
    Gspa,
    SfFdbt,
    IntFdbt,
    Fgbt,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_enum)]
    method: MethodName,
    #[arg(long)]
    order: usize,
    #[arg(long, allow_negative_numbers = true)]
    epsilon: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    varpi: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    w1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    w2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    rho: Option<f64>,
    /// Widen an asymmetric band to [−max|w|, max|w|] (int-fdbt).
    #[arg(long)]
    symmetrize: bool,
}

/// Failure with its exit code and a machine-readable kind.
struct Failure {
    code: u8,
    kind: String,
    message: String,
}

impl Failure {
    fn usage(kind: &str, message: impl Into<String>) -> Self {
        Failure { code: 2, kind: kind.into(), message: message.into() }
    }
}

impl From<fdbt::Error> for Failure {
    fn from(e: fdbt::Error) -> Self {
        Failure {
            code: if e.is_validation() { 2 } else { 3 },
            kind: e.kind().to_string(),
            message: e.to_string(),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn require(v: Option<f64>, flag: &str, method: &str) -> CliResult<f64> {
    v.ok_or_else(|| Failure::usage("MissingFlag", format!("--{flag} is required for {method}")))
}

impl RunArgs {
    fn method(&self) -> CliResult<Method> {
        let band = |name: &str| -> CliResult<(f64, f64)> {
            let w1 = require(self.w1, "w1", name)?;
            let w2 = require(self.w2, "w2", name)?;
            if !(w1 < w2) {
                return Err(Failure::usage("InvalidParameters", format!("--w1 must be below --w2 ({w1} >= {w2})")));
            }
            Ok((w1, w2))
        };
        Ok(match self.method {
            MethodName::Fibt => Method::Fibt,
            MethodName::Spa => Method::Gspa { rho: 0.0 },
            MethodName::Gspa => Method::Gspa { rho: require(self.rho, "rho", "gspa")? },
            MethodName::SfFdbt => Method::SfFdbt {
                varpi: require(self.varpi, "varpi", "sf-fdbt")?,
                epsilon: require(self.epsilon, "epsilon", "sf-fdbt")?,
            },
            MethodName::IntFdbt => {
                let (w1, w2) = band("int-fdbt")?;
                if self.symmetrize {
                    let w = w1.abs().max(w2.abs());
                    Method::IntervalFdbt { w1: -w, w2: w }
                } else {
                    Method::IntervalFdbt { w1, w2 }
                }
            }
            MethodName::Fgbt => {
                let (w1, w2) = band("fgbt")?;
                Method::Fgbt { w1, w2 }
            }
        })
    }

    fn run(&self, sys: &StateSpace) -> CliResult<ReductionResult> {
        let method = self.method()?;
        let n = sys.n();
        if self.order == 0 || self.order >= n {
            return Err(Failure::usage(
                "OrderOutOfRange",
                format!("--order must satisfy 1 <= r < n = {n}, got {}", self.order),
            ));
        }
        Ok(fdbt::reduce(sys, method, self.order)?)
    }
}

#[derive(Serialize)]
struct Report<'a> {
    method: &'static str,
    config: Method,
    r: usize,
    bounds: &'a Bounds,
    stable: bool,
    warnings: &'a [String],
    sigma: &'a [f64],
    #[serde(skip_serializing_if = "Option::is_none")]
    verification: Option<Vec<VerificationRecord>>,
}

fn report(res: &ReductionResult, verification: Option<Vec<VerificationRecord>>) -> String {
    let rep = Report {
        method: res.method.name(),
        config: res.method,
        r: res.order,
        bounds: &res.bounds,
        stable: res.stable,
        warnings: &res.warnings,
        sigma: &res.sigma,
        verification,
    };
    serde_json::to_string_pretty(&rep).expect("report serializes")
}

fn warn(message: &str, extra: serde_json::Value) {
    let mut obj = serde_json::json!({ "warning": message });
    if let (Some(o), serde_json::Value::Object(e)) = (obj.as_object_mut(), extra) {
        o.extend(e);
    }
    eprintln!("{obj}");
}

fn cmd_reduce(input: &Path, run: &RunArgs, out: &Path, report_path: Option<&Path>) -> CliResult<()> {
    let sys = read_model(input)?;
    let res = run.run(&sys)?;
    write_model(out, &res.reduced, Some(&format!("{}_r{}", res.method.name(), res.order)))?;
    let text = report(&res, None);
    if let Some(p) = report_path {
        write_text(p, &text)?;
    }
    println!("{text}");
    Ok(())
}

fn cmd_bounds(input: &Path, run: &RunArgs, verify: bool) -> CliResult<()> {
    let sys = read_model(input)?;
    let res = run.run(&sys)?;
    let records = if verify { Some(verify_bound(&sys, &res)?) } else { None };
    println!("{}", report(&res, records));
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    model: &Path,
    reduced: Option<&Path>,
    wmin: f64,
    wmax: f64,
    points: usize,
    log: bool,
    out: &Path,
) -> CliResult<()> {
    if !(wmin < wmax) {
        return Err(Failure::usage("InvalidParameters", format!("--wmin must be below --wmax ({wmin} >= {wmax})")));
    }
    if points < 2 {
        return Err(Failure::usage("InvalidParameters", "--points must be at least 2"));
    }
    let sys = read_model(model)?;
    let target = match reduced {
        Some(p) => error_system(&sys, &read_model(p)?)?,
        None => sys,
    };
    let grid = if log {
        FrequencyGrid::logarithmic(wmin, wmax, points)?
    } else {
        FrequencyGrid::linear(wmin, wmax, points)?
    };
    let rep = sweep_lossy(&target, &grid);
    for w in &rep.skipped {
        warn("pole on grid", serde_json::json!({ "omega": w }));
    }
    write_text(out, &sweep_csv(&rep))?;
    Ok(())
}

#[derive(Serialize)]
struct LadderRun {
    method: &'static str,
    config: Method,
    r: usize,
    stable: bool,
    warnings: Vec<String>,
    records: Vec<VerificationRecord>,
}

#[derive(Serialize)]
struct LadderReport {
    order: usize,
    params: LadderParams,
    runs: Vec<LadderRun>,
    failures: Vec<String>,
}

fn cmd_bench_ladder(order: usize, rs: &[usize], params: LadderParams, out: &Path) -> CliResult<()> {
    let sys = fdbt::harness::generate_ladder(order, params)?;
    for &r in rs {
        if r == 0 || r >= order {
            return Err(Failure::usage("OrderOutOfRange", format!("--r must satisfy 1 <= r < {order}, got {r}")));
        }
    }
    write_model(&out.join("ladder.json"), &sys, Some(&format!("ladder_{order}")))?;
    let wl = LADDER_CASE2_BAND;
    let methods = [
        Method::Fibt,
        Method::SfFdbt { varpi: 0.0, epsilon: LADDER_SF_EPSILON },
        Method::IntervalFdbt { w1: -wl, w2: wl },
        Method::Fgbt { w1: -wl, w2: wl },
    ];
    let mut runs = Vec::new();
    let mut failures = Vec::new();
    for &r in rs {
        for m in methods {
            match fdbt::reduce(&sys, m, r).and_then(|res| Ok((verify_bound(&sys, &res)?, res))) {
                Ok((records, res)) => {
                    println!(
                        "{} r={r}: {}",
                        m.name(),
                        if records.iter().filter(|x| x.certified).all(|x| x.pass) { "bounds hold" } else { "BOUND VIOLATED" }
                    );
                    runs.push(LadderRun {
                        method: m.name(),
                        config: m,
                        r,
                        stable: res.stable,
                        warnings: res.warnings,
                        records,
                    });
                }
                Err(e) => failures.push(format!("{} r={r}: {e}", m.name())),
            }
        }
    }
    let rep = LadderReport { order, params, runs, failures };
    write_text(&out.join("report.json"), &serde_json::to_string_pretty(&rep).expect("report serializes"))?;
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Reduce { input, run, out, report } => cmd_reduce(&input, &run, &out, report.as_deref()),
        Command::Bounds { input, run, verify } => cmd_bounds(&input, &run, verify),
        Command::Sweep { model, reduced, wmin, wmax, points, log, lin: _, out } => {
            cmd_sweep(&model, reduced.as_deref(), wmin, wmax, points, log, &out)
        }
        Command::Bench { which } => match which {
            Bench::Random { count, seed, n, wl, r, spread_is_std, out } => {
                println!("seed: {seed}");
                if n < 2 || r.iter().any(|&x| x == 0 || x >= n) {
                    return Err(Failure::usage("OrderOutOfRange", format!("orders must satisfy 1 <= r < n = {n}")));
                }
                if wl.iter().any(|&w| !(w > 0.0 && w.is_finite())) {
                    return Err(Failure::usage("InvalidParameters", "--wl entries must be positive"));
                }
                let mut spec = RandomModelSpec::new(n, count, seed);
                if spread_is_std {
                    spec.spread_is_variance = false;
                }
                let rep = run_randomized_experiment(&spec, &wl, &r);
                for c in &rep.cells {
                    println!(
                        "wl={} r={}: Err(FDBT) {:.4} Err(FGBT) {:.4} Eb(FDBT) {:.4} Eb(FGBT) {:.4}",
                        c.wl, c.r, c.err_fdbt, c.err_fgbt, c.eb_fdbt, c.eb_fgbt
                    );
                }
                write_text(&out.join("report.json"), &serde_json::to_string_pretty(&rep).expect("report serializes"))?;
                Ok(())
            }
            Bench::Example { name, out } => {
                let which: ExampleName = name
                    .parse()
                    .map_err(|_| Failure::usage("InvalidParameters", format!("unknown example {name}")))?;
                let bundle = reproduce_example(which)?;
                for a in &bundle.assertions {
                    println!("{} {}: {}", if a.pass { "ok" } else { "FAILED" }, a.name, a.detail);
                }
                write_bundle(&bundle, &out)?;
                Ok(())
            }
            Bench::Ladder { order, r, params, out } => cmd_bench_ladder(order, &r, params.params(), &out),
        },
        Command::Gen { which: Gen::Ladder { order, params, out } } => {
            let sys = fdbt::harness::generate_ladder(order, params.params())?;
            write_model(&out, &sys, Some(&format!("ladder_{order}")))?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("{}", serde_json::json!({ "error": "Usage", "message": first }));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", serde_json::json!({ "error": f.kind, "message": f.message }));
            ExitCode::from(f.code)
        }
    }
}
