//! Argument handling and dispatch for the `fp2ria` binary.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use fp2ria::bench::{gen_bmc, ra_to_fpa, BmcInstance, BmcSystem, RaToFpaOptions};
use fp2ria::driver::{
    encode_formula, solve, solve_incremental, solve_ladder, solve_once, Answer, BackendConfig,
    Interaction, Provenance, SolveResult, Verdict, BACKEND_ENV,
};
use fp2ria::encode::{EncodeOptions, PrecisionMode, Representation};
use fp2ria::ia::Mode;
use fp2ria::oracle::{sweep_comparisons, sweep_enclosure, sweep_operators};
use fp2ria::scalar::parse_rational;
use fp2ria::smt::{check_sorts, parse_script, FpaFormula};
use fp2ria::{Error, FpFormat};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_BACKEND: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "fp2ria",
    version,
    about = "Decide floating-point SMT formulas with interval arithmetic over the reals"
)]
pub struct Cli {
    /// Print provenance after the verdict and log to standard error.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write the real-arithmetic encoding of a floating-point script.
    Translate(TranslateArgs),
    /// Decide a floating-point script with an external solver.
    Solve(SolveArgs),
    /// Generate benchmark instances.
    #[command(subcommand)]
    Bench(BenchCommand),
    /// Run the exhaustive soundness checks of the interval layer.
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Weak,
    Strong,
    Both,
}

/// A floating-point format written `eb:sb`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FormatArg(pub FpFormat);

impl FromStr for FormatArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (eb, sb) = s
            .split_once(':')
            .ok_or_else(|| format!("expected eb:sb, found `{s}`"))?;
        let eb = eb
            .trim()
            .parse()
            .map_err(|_| format!("bad exponent width in `{s}`"))?;
        let sb = sb
            .trim()
            .parse()
            .map_err(|_| format!("bad significand width in `{s}`"))?;
        FpFormat::new(eb, sb)
            .map(FormatArg)
            .map_err(|e| e.to_string())
    }
}

/// Comma-separated `eb:sb` pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormatList(pub Vec<FpFormat>);

impl FromStr for FormatList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let formats = s
            .split(',')
            .filter(|p| !p.trim().is_empty())
            .map(|p| p.parse::<FormatArg>().map(|f| f.0))
            .collect::<Result<Vec<_>, _>>()?;
        if formats.is_empty() {
            return Err("empty precision list".into());
        }
        Ok(FormatList(formats))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalArg(pub BigRational);

impl FromStr for RationalArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        parse_rational(s)
            .map(RationalArg)
            .ok_or_else(|| format!("not a rational number: `{s}`"))
    }
}

#[derive(Args, Debug)]
pub struct TranslateArgs {
    /// Input script.
    pub input: PathBuf,
    /// Which extension to emit.
    #[arg(long, value_enum, default_value = "weak")]
    pub mode: ModeArg,
    /// Use real-valued bound triples instead of the interval datatype.
    #[arg(long)]
    pub flatten: bool,
    /// Emit guard literals selecting the error parameters of each listed format.
    #[arg(long, value_name = "EB:SB,...")]
    pub precision_list: Option<FormatList>,
    /// Output file; standard output when absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    /// Input script.
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "both")]
    pub mode: ModeArg,
    /// Solver command line; defaults to the RIA_BACKEND variable, then `z3 -in`.
    #[arg(long)]
    pub backend: Option<String>,
    /// Climb the precision ladder from the coarsest format.
    #[arg(long)]
    pub incremental: bool,
    /// Drive one solver process through the ladder with assumptions instead of one process per step.
    #[arg(long, requires = "incremental")]
    pub session: bool,
    /// Use real-valued bound triples instead of the interval datatype.
    #[arg(long)]
    pub flatten: bool,
    /// Wall-clock limit in seconds per mode.
    #[arg(long, value_name = "SECONDS")]
    pub timeout: Option<f64>,
    /// Ladder to use instead of (4,4), (5,11), (8,24), (11,53), (15,113).
    #[arg(long, value_name = "EB:SB,...", requires = "incremental")]
    pub precision_list: Option<FormatList>,
    /// Also write the encoded scripts, suffixed `.weak.smt2` and `.strong.smt2`.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum BenchCommand {
    /// Unrolled transition systems with a threshold on the first output.
    Bmc(BmcArgs),
    /// Convert a real-arithmetic script to floating point.
    Ra(RaArgs),
}

#[derive(Args, Debug)]
pub struct BmcArgs {
    #[arg(long, default_value = "integrator")]
    pub system: String,
    /// Unrolling depths, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    pub k: Vec<usize>,
    /// Thresholds, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "3,2.71,2,1,0")]
    pub th: Vec<RationalArg>,
    #[arg(long, default_value = "11:53")]
    pub format: FormatArg,
    /// Directory for the generated files.
    #[arg(short, long, default_value = ".")]
    pub output: PathBuf,
}

#[derive(Args, Debug)]
pub struct RaArgs {
    pub input: PathBuf,
    #[arg(long, default_value = "11:53")]
    pub format: FormatArg,
    /// Assert that every variable is not NaN.
    #[arg(long)]
    pub assert_not_nan: bool,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Enclosure,
    Operators,
    Comparisons,
    All,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: Suite,
    /// Format to sweep; must be small enough to enumerate.
    #[arg(long, default_value = "4:4")]
    pub format: FormatArg,
    /// Random rationals in [-300, 300] added to the enclosure sweep.
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// A failure with its exit status.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_backend() || matches!(e, Error::SoundnessViolation(_)) {
            EXIT_BACKEND
        } else {
            EXIT_USAGE
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn write_output(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), Failure> {
    match path {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| usage(format!("cannot write {}: {e}", p.display())))
        }
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| usage(e.to_string())),
    }
}

fn load_formula(path: &Path) -> Result<FpaFormula, Failure> {
    Ok(parse_script(&read_input(path)?)?.formula())
}

fn representation(flatten: bool) -> Representation {
    if flatten {
        Representation::Flattened
    } else {
        Representation::Datatype
    }
}

fn translate(args: &TranslateArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let mode = match args.mode {
        ModeArg::Weak => Mode::Weak,
        ModeArg::Strong => Mode::Strong,
        ModeArg::Both => {
            return Err(usage(
                "translate emits one extension; pass --mode weak or --mode strong",
            ))
        }
    };
    let phi = load_formula(&args.input)?;
    let mut opts = EncodeOptions {
        representation: representation(args.flatten),
        ..EncodeOptions::new(mode)
    };
    if let Some(list) = &args.precision_list {
        opts.precision = PrecisionMode::Abstract {
            ladder: list.0.clone(),
        };
    }
    let script = encode_formula(&phi, &opts)?;
    write_output(args.output.as_deref(), &script, out)
}

fn verdict_of(mode: Mode, answer: Answer) -> Verdict {
    match (mode, answer) {
        (Mode::Weak, Answer::Unsat) => Verdict::Unsat,
        (Mode::Strong, Answer::Sat) => Verdict::Sat,
        _ => Verdict::Unknown,
    }
}

fn describe(p: &Provenance) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "decided-by: {}",
        p.mode.map_or("none".to_string(), |m| m.to_string())
    );
    if let Some(step) = p.ladder_step {
        let _ = writeln!(s, "ladder-step: {step}");
    }
    if let Some(path) = p.path {
        let _ = writeln!(s, "incremental: {path:?}");
    }
    let _ = writeln!(s, "weak: {}", p.weak);
    let _ = writeln!(s, "strong: {}", p.strong);
    let _ = writeln!(s, "time: {:.3}s", p.wall_time.as_secs_f64());
    s
}

/// The verdict and, at verbose level, the lines that follow it.
fn decide(
    args: &SolveArgs,
    phi: &FpaFormula,
    cfg: &BackendConfig,
) -> Result<(Verdict, String), Failure> {
    let single = |mode: Mode| -> Result<(Verdict, String), Failure> {
        if args.incremental {
            let bound = check_sorts(phi, true)?.bound();
            let a = solve_incremental(phi, cfg, bound, mode)?;
            let step = a.step.map_or("none".to_string(), |f| f.to_string());
            let detail = format!(
                "{mode}: {}\nladder-step: {step}\nchecks: {}\nincremental: {:?}\n",
                a.answer, a.checks, a.path
            );
            Ok((verdict_of(mode, a.answer), detail))
        } else {
            let a = solve_once(phi, mode, cfg)?;
            Ok((verdict_of(mode, a), format!("{mode}: {a}\n")))
        }
    };
    match args.mode {
        ModeArg::Weak => single(Mode::Weak),
        ModeArg::Strong => single(Mode::Strong),
        ModeArg::Both => {
            let SolveResult {
                verdict,
                provenance,
            } = if args.incremental {
                solve_ladder(phi, cfg, check_sorts(phi, true)?.bound())?
            } else {
                solve(phi, cfg)?
            };
            Ok((verdict, describe(&provenance)))
        }
    }
}

fn backend_config(args: &SolveArgs) -> Result<BackendConfig, Failure> {
    let mut cfg = match &args.backend {
        Some(cmd) => BackendConfig::new(cmd),
        None => BackendConfig::from_env(),
    };
    if cfg.command.is_empty() {
        return Err(usage(format!(
            "empty backend command; set --backend or {BACKEND_ENV}"
        )));
    }
    cfg.representation = representation(args.flatten);
    if let Some(t) = args.timeout {
        if !(t.is_finite() && t > 0.0) {
            return Err(usage(format!(
                "timeout must be a positive number of seconds, got {t}"
            )));
        }
        cfg.time_limit = Some(t);
    }
    if args.session {
        cfg.interaction = Interaction::Session;
    }
    if let Some(list) = &args.precision_list {
        cfg.ladder = list.0.clone();
    }
    Ok(cfg)
}

fn write_encodings(args: &SolveArgs, phi: &FpaFormula, base: &Path) -> Result<(), Failure> {
    for mode in [Mode::Weak, Mode::Strong] {
        let opts = EncodeOptions {
            representation: representation(args.flatten),
            ..EncodeOptions::new(mode)
        };
        let mut path = base.as_os_str().to_owned();
        path.push(format!(".{mode}.smt2"));
        let path = PathBuf::from(path);
        std::fs::write(&path, encode_formula(phi, &opts)?)
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn solve_command(args: &SolveArgs, verbose: bool, out: &mut dyn Write) -> Result<(), Failure> {
    let attempt = || -> Result<(Verdict, String), Failure> {
        let cfg = backend_config(args)?;
        let phi = load_formula(&args.input)?;
        if let Some(base) = &args.output {
            write_encodings(args, &phi, base)?;
        }
        decide(args, &phi, &cfg)
    };
    let result = attempt();
    let verdict = result.as_ref().map_or(Verdict::Unknown, |(v, _)| *v);
    let _ = writeln!(out, "{verdict}");
    let (_, detail) = result?;
    if verbose {
        let _ = out.write_all(detail.as_bytes());
    }
    Ok(())
}

fn bmc(args: &BmcArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let system: BmcSystem = args.system.parse().map_err(usage)?;
    std::fs::create_dir_all(&args.output)
        .map_err(|e| usage(format!("cannot create {}: {e}", args.output.display())))?;
    for &k in &args.k {
        for th in &args.th {
            let inst = BmcInstance::new(system, k, th.0.clone(), args.format.0)?;
            let path = args.output.join(inst.file_name());
            std::fs::write(&path, gen_bmc(&inst))
                .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
            let _ = writeln!(out, "{}", path.display());
        }
    }
    Ok(())
}

fn ra(args: &RaArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let text = read_input(&args.input)?;
    let script = ra_to_fpa(
        &text,
        args.format.0,
        &RaToFpaOptions {
            assert_not_nan: args.assert_not_nan,
        },
    )?;
    write_output(args.output.as_deref(), &script, out)
}

/// Rationals with denominators up to 1000, uniform over the numerators.
fn samples(n: usize, seed: u64) -> Vec<BigRational> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let den: i64 = rng.gen_range(1..=1000);
            let num: i64 = rng.gen_range(-300 * den..=300 * den);
            BigRational::new(BigInt::from(num), BigInt::from(den))
        })
        .collect()
}

fn oracle(args: &OracleArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let fmt = args.format.0;
    let run = |suite: Suite| match suite {
        Suite::Enclosure => sweep_enclosure(fmt, &samples(args.samples, args.seed)),
        Suite::Operators => sweep_operators(fmt),
        _ => sweep_comparisons(fmt),
    };
    let suites = match args.suite {
        Suite::All => vec![Suite::Enclosure, Suite::Operators, Suite::Comparisons],
        s => vec![s],
    };
    let mut failed = 0;
    for s in &suites {
        let report = run(*s)?;
        if !report.passed() {
            failed += 1;
        }
        let _ = writeln!(out, "{report}");
    }
    let _ = writeln!(
        out,
        "{} suites={} failed={failed} format={fmt}",
        if failed == 0 { "PASS" } else { "FAIL" },
        suites.len()
    );
    Ok(())
}

/// Parses `argv` (program name first) and runs the command. Returns the exit
/// status; errors go to `err`.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let verbose = cli.verbose > 0;
    let result = match &cli.command {
        Command::Translate(a) => translate(a, out),
        Command::Solve(a) => solve_command(a, verbose, out),
        Command::Bench(BenchCommand::Bmc(a)) => bmc(a, out),
        Command::Bench(BenchCommand::Ra(a)) => ra(a, out),
        Command::Oracle(a) => oracle(a, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
