//! Runs the weak and strong encodings on an external real-arithmetic
//! solver and combines the answers into a floating-point verdict.
//!
//! Only a weak `unsat` and a strong `sat` are conclusive. [`solve`] runs
//! both modes side by side and stops the slower one once the other
//! concludes; [`solve_incremental`] walks a precision ladder from coarse
//! error parameters to fine ones inside a single solver session.

mod process;

use std::fmt;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::mpsc;
use std::time::{Duration, Instant};

use num_rational::BigRational;

use crate::encode::{
    clamp_ladder, decode_bound, define_precision_assumptions, encode, encode_multi_precision,
    encode_term_probe_with, EncodeOptions, PrecisionMode, ProbeLeaves, Representation,
};
use crate::format::FpFormat;
use crate::ia::{Mode, RInterval};
use crate::smt::sexpr::SExpr;
use crate::smt::{check_sorts, rational_literal, Formats, FpaFormula, FpaTerm};
use crate::Error;
use process::{Backend, Stop};

/// Environment variable naming the default backend command line.
pub const BACKEND_ENV: &str = "RIA_BACKEND";
pub const DEFAULT_BACKEND: &str = "z3 -in";

/// Error parameters tried by [`solve_incremental`], coarsest first.
pub const LADDER: [(u32, u32); 5] = [(4, 4), (5, 11), (8, 24), (11, 53), (15, 113)];

pub fn default_ladder() -> Vec<FpFormat> {
    LADDER
        .iter()
        .map(|&(e, s)| FpFormat::new(e, s).expect("ladder formats are valid"))
        .collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Interaction {
    /// One process per check, fed a complete script.
    #[default]
    Batch,
    /// One process per run, driven command by command.
    Session,
}

#[derive(Clone, Debug)]
pub struct BackendConfig {
    /// Program and arguments.
    pub command: Vec<String>,
    pub interaction: Interaction,
    /// Wall-clock budget in seconds for one mode of one solve call.
    pub time_limit: Option<f64>,
    /// Free-form note on memory limits; reported, never enforced.
    pub memory_note: Option<String>,
    pub representation: Representation,
    /// Precision ladder for incremental runs.
    pub ladder: Vec<FpFormat>,
}

impl BackendConfig {
    /// Splits `command` on whitespace.
    pub fn new(command: &str) -> Self {
        BackendConfig {
            command: command.split_whitespace().map(str::to_string).collect(),
            interaction: Interaction::Batch,
            time_limit: None,
            memory_note: None,
            representation: Representation::Flattened,
            ladder: default_ladder(),
        }
    }

    /// The command named by `RIA_BACKEND`, else `z3 -in`.
    pub fn from_env() -> Self {
        match std::env::var(BACKEND_ENV) {
            Ok(cmd) if !cmd.trim().is_empty() => Self::new(&cmd),
            _ => Self::new(DEFAULT_BACKEND),
        }
    }

    pub fn with_time_limit(mut self, seconds: f64) -> Self {
        self.time_limit = Some(seconds);
        self
    }

    pub fn with_interaction(mut self, interaction: Interaction) -> Self {
        self.interaction = interaction;
        self
    }

    pub fn with_representation(mut self, representation: Representation) -> Self {
        self.representation = representation;
        self
    }

    fn deadline(&self, start: Instant) -> Option<Instant> {
        self.time_limit.map(|s| start + Duration::from_secs_f64(s))
    }
}

/// What the backend said about one encoded script.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Answer {
    Sat,
    Unsat,
    Unknown,
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Answer::Sat => "sat",
            Answer::Unsat => "unsat",
            Answer::Unknown => "unknown",
        })
    }
}

/// Whether `answer` in `mode` decides the floating-point formula.
pub fn is_conclusive(mode: Mode, answer: Answer) -> bool {
    matches!(
        (mode, answer),
        (Mode::Weak, Answer::Unsat) | (Mode::Strong, Answer::Sat)
    )
}

/// Verdict on the floating-point formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Sat,
    Unsat,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Sat => "sat",
            Verdict::Unsat => "unsat",
            Verdict::Unknown => "unknown",
        })
    }
}

/// How an incremental run posed its checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IncrementalPath {
    /// `check-sat-assuming` on guard literals in one session.
    Assumptions,
    /// `push`/`assert`/`check-sat`/`pop` in one session.
    Scopes,
    /// A fresh process per ladder step.
    Restart,
}

/// The end of one mode's run.
#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Answered {
        answer: Answer,
        step: Option<FpFormat>,
    },
    TimedOut,
    Failed(String),
    Cancelled,
    NotRun,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Answered {
                answer,
                step: Some(s),
            } => write!(f, "{answer} at {s}"),
            Outcome::Answered { answer, step: None } => write!(f, "{answer}"),
            Outcome::TimedOut => f.write_str("timeout"),
            Outcome::Failed(e) => write!(f, "failed: {e}"),
            Outcome::Cancelled => f.write_str("cancelled"),
            Outcome::NotRun => f.write_str("not run"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Provenance {
    /// The mode whose answer decided, if any.
    pub mode: Option<Mode>,
    /// Ladder step of the deciding answer, for incremental runs.
    pub ladder_step: Option<FpFormat>,
    pub wall_time: Duration,
    pub weak: Outcome,
    pub strong: Outcome,
    pub path: Option<IncrementalPath>,
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub verdict: Verdict,
    pub provenance: Provenance,
}

/// Answer of an incremental run in one mode. `answer` is conclusive or
/// `Unknown`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncrementalAnswer {
    pub answer: Answer,
    pub step: Option<FpFormat>,
    pub checks: usize,
    pub path: IncrementalPath,
}

/// Encodes with the concrete precision of the formula's format, or the
/// multi-precision table when it uses several.
pub fn encode_formula(phi: &FpaFormula, opts: &EncodeOptions) -> Result<String, Error> {
    match check_sorts(phi, true)? {
        Formats::Single(f) => encode(
            phi,
            &EncodeOptions {
                formats: Some(Formats::Single(f)),
                ..opts.clone()
            },
        ),
        formats => encode_multi_precision(
            phi,
            &EncodeOptions {
                formats: Some(formats),
                ..opts.clone()
            },
        ),
    }
}

fn options(mode: Mode, cfg: &BackendConfig) -> EncodeOptions {
    EncodeOptions {
        representation: cfg.representation,
        ..EncodeOptions::new(mode)
    }
}

fn run_script(
    script: &str,
    cfg: &BackendConfig,
    deadline: Option<Instant>,
    cancel: &AtomicBool,
) -> Result<Answer, Stop> {
    let limit = cfg.time_limit.unwrap_or(f64::INFINITY);
    let mut backend = Backend::spawn(&cfg.command)?;
    backend.send(script)?;
    match cfg.interaction {
        Interaction::Batch => backend.close_input(),
        Interaction::Session => {}
    }
    backend.answer(deadline, limit, cancel)
}

/// Runs one encoding of `phi` to completion.
pub fn solve_once(phi: &FpaFormula, mode: Mode, cfg: &BackendConfig) -> Result<Answer, Error> {
    let script = encode_formula(phi, &options(mode, cfg))?;
    let start = Instant::now();
    match run_script(&script, cfg, cfg.deadline(start), &AtomicBool::new(false)) {
        Ok(a) => Ok(a),
        Err(Stop::Failed(e)) => Err(e),
        Err(Stop::Cancelled) => unreachable!("never cancelled"),
    }
}

type Run<'a> = Box<dyn FnOnce(&AtomicBool) -> Result<(Answer, Option<FpFormat>), Stop> + Send + 'a>;

/// Runs both modes concurrently and combines their answers.
fn combine(
    weak: Run<'_>,
    strong: Run<'_>,
    path: Option<IncrementalPath>,
) -> Result<SolveResult, Error> {
    let start = Instant::now();
    let cancel = AtomicBool::new(false);
    let mut outcomes = [Outcome::NotRun, Outcome::NotRun];
    let mut errors: Vec<Error> = Vec::new();
    let mut decided: Option<(Mode, Answer, Option<FpFormat>)> = None;
    let mut violation = None;
    std::thread::scope(|s| {
        let (tx, rx) = mpsc::channel();
        for (mode, run) in [(Mode::Weak, weak), (Mode::Strong, strong)] {
            let (tx, cancel) = (tx.clone(), &cancel);
            s.spawn(move || {
                let _ = tx.send((mode, run(cancel)));
            });
        }
        drop(tx);
        for (mode, result) in rx {
            let slot = usize::from(mode == Mode::Strong);
            outcomes[slot] = match result {
                Ok((answer, step)) => {
                    if is_conclusive(mode, answer) {
                        match decided {
                            Some((other, a, _)) => {
                                violation = Some(format!("{other:?} mode answered {a} and {mode:?} mode answered {answer}"));
                            }
                            None => {
                                decided = Some((mode, answer, step));
                                cancel.store(true, Ordering::Relaxed);
                            }
                        }
                    }
                    Outcome::Answered { answer, step }
                }
                Err(Stop::Cancelled) => Outcome::Cancelled,
                Err(Stop::Failed(Error::Timeout(_))) => Outcome::TimedOut,
                Err(Stop::Failed(e)) => {
                    let text = e.to_string();
                    log::debug!("{mode:?} run failed: {text}");
                    errors.push(e);
                    Outcome::Failed(text)
                }
            };
        }
    });
    if let Some(v) = violation {
        return Err(Error::SoundnessViolation(v));
    }
    let [weak, strong] = outcomes;
    let verdict = match decided {
        Some((_, Answer::Unsat, _)) => Verdict::Unsat,
        Some(_) => Verdict::Sat,
        None if errors.len() == 2 => return Err(errors.remove(0)),
        None => Verdict::Unknown,
    };
    Ok(SolveResult {
        verdict,
        provenance: Provenance {
            mode: decided.map(|d| d.0),
            ladder_step: decided.and_then(|d| d.2),
            wall_time: start.elapsed(),
            weak,
            strong,
            path,
        },
    })
}

/// Decides `phi` by running the weak and strong encodings side by side.
/// A weak `unsat` gives `Unsat`, a strong `sat` gives `Sat`, anything else
/// `Unknown`. A failure in one mode leaves the other to decide.
pub fn solve(phi: &FpaFormula, cfg: &BackendConfig) -> Result<SolveResult, Error> {
    let weak = encode_formula(phi, &options(Mode::Weak, cfg))?;
    let strong = encode_formula(phi, &options(Mode::Strong, cfg))?;
    let run = |script: String| -> Run<'_> {
        Box::new(move |cancel: &AtomicBool| {
            let deadline = cfg.deadline(Instant::now());
            run_script(&script, cfg, deadline, cancel).map(|a| (a, None))
        })
    };
    combine(run(weak), run(strong), None)
}

struct Ladder {
    preamble: String,
    guards: Vec<(FpFormat, String)>,
}

fn ladder_script(
    phi: &FpaFormula,
    mode: Mode,
    cfg: &BackendConfig,
    bound: FpFormat,
) -> Result<Ladder, Error> {
    let fmt = match check_sorts(phi, false)? {
        Formats::Single(f) => f,
        Formats::Table(_) => {
            return Err(Error::Encode(
                "incremental solving needs a single format".into(),
            ))
        }
    };
    let ladder = clamp_ladder(&cfg.ladder, bound);
    let opts = EncodeOptions {
        precision: PrecisionMode::Abstract {
            ladder: ladder.clone(),
        },
        formats: Some(Formats::Single(fmt)),
        check_sat: false,
        ..options(mode, cfg)
    };
    let preamble = encode(phi, &opts)?;
    let guards = clamp_ladder(&ladder, fmt)
        .into_iter()
        .map(|s| (s, define_precision_assumptions(fmt, s)))
        .collect();
    Ok(Ladder { preamble, guards })
}

fn is_command_error(stop: &Stop) -> bool {
    matches!(stop, Stop::Failed(Error::BackendOutput(m)) if m.starts_with("(error"))
}

fn run_ladder(
    ladder: &Ladder,
    mode: Mode,
    cfg: &BackendConfig,
    cancel: &AtomicBool,
) -> Result<IncrementalAnswer, Stop> {
    let start = Instant::now();
    let limit = cfg.time_limit.unwrap_or(f64::INFINITY);
    let mut path = match cfg.interaction {
        Interaction::Session => IncrementalPath::Assumptions,
        Interaction::Batch => IncrementalPath::Restart,
    };
    let mut session: Option<Backend> = None;
    let total = ladder.guards.len();
    for (i, (step, guard)) in ladder.guards.iter().enumerate() {
        let deadline = cfg.time_limit.map(|t| {
            let left = (t - start.elapsed().as_secs_f64()).max(0.0);
            Instant::now() + Duration::from_secs_f64(left / (total - i) as f64)
        });
        let answer = match path {
            IncrementalPath::Restart => {
                let script = format!("{}(assert {guard})\n(check-sat)\n", ladder.preamble);
                let c = BackendConfig {
                    interaction: Interaction::Batch,
                    ..cfg.clone()
                };
                run_script(&script, &c, deadline, cancel)
            }
            _ => {
                if session.is_none() {
                    let mut b = Backend::spawn(&cfg.command)?;
                    b.send(&ladder.preamble)?;
                    session = Some(b);
                }
                let b = session.as_mut().expect("session started");
                let mut r = if path == IncrementalPath::Assumptions {
                    b.send(&format!("(check-sat-assuming ({guard}))\n"))?;
                    b.answer(deadline, limit, cancel)
                } else {
                    Err(Stop::Cancelled)
                };
                if path == IncrementalPath::Scopes || r.as_ref().err().is_some_and(is_command_error)
                {
                    path = IncrementalPath::Scopes;
                    b.send(&format!("(push 1)\n(assert {guard})\n(check-sat)\n"))?;
                    r = b.answer(deadline, limit, cancel);
                    if r.is_ok() {
                        b.send("(pop 1)\n")?;
                    }
                }
                r
            }
        };
        match answer {
            Ok(a) if is_conclusive(mode, a) => {
                return Ok(IncrementalAnswer {
                    answer: a,
                    step: Some(*step),
                    checks: i + 1,
                    path,
                });
            }
            Ok(_) => {}
            Err(Stop::Failed(Error::Timeout(_))) => {
                log::debug!("{mode:?} step {step} timed out");
                session = None;
            }
            Err(e) => return Err(e),
        }
    }
    if cfg
        .time_limit
        .is_some_and(|t| start.elapsed().as_secs_f64() >= t)
    {
        return Err(Stop::Failed(Error::Timeout(limit)));
    }
    Ok(IncrementalAnswer {
        answer: Answer::Unknown,
        step: None,
        checks: total,
        path,
    })
}

/// Checks `phi` in `mode` under each ladder step clamped to `bound`,
/// coarsest first, stopping at the first conclusive answer. The script is
/// sent once; steps are selected by guard literals. The time limit is
/// shared evenly among the steps still to run.
pub fn solve_incremental(
    phi: &FpaFormula,
    cfg: &BackendConfig,
    bound: FpFormat,
    mode: Mode,
) -> Result<IncrementalAnswer, Error> {
    let ladder = ladder_script(phi, mode, cfg, bound)?;
    match run_ladder(&ladder, mode, cfg, &AtomicBool::new(false)) {
        Ok(a) => Ok(a),
        Err(Stop::Failed(e)) => Err(e),
        Err(Stop::Cancelled) => unreachable!("never cancelled"),
    }
}

/// [`solve`] with both modes running the precision ladder.
pub fn solve_ladder(
    phi: &FpaFormula,
    cfg: &BackendConfig,
    bound: FpFormat,
) -> Result<SolveResult, Error> {
    let weak = ladder_script(phi, Mode::Weak, cfg, bound)?;
    let strong = ladder_script(phi, Mode::Strong, cfg, bound)?;
    let path = match cfg.interaction {
        Interaction::Session => IncrementalPath::Assumptions,
        Interaction::Batch => IncrementalPath::Restart,
    };
    let run = |ladder: Ladder, mode: Mode| -> Run<'_> {
        Box::new(move |cancel: &AtomicBool| {
            run_ladder(&ladder, mode, cfg, cancel).map(|a| (a.answer, a.step))
        })
    };
    combine(run(weak, Mode::Weak), run(strong, Mode::Strong), Some(path))
}

fn value_pairs(answer: &SExpr) -> Result<Vec<&SExpr>, Error> {
    let bad = || Error::BackendOutput(format!("malformed get-value answer `{answer}`"));
    answer
        .list()
        .ok_or_else(bad)?
        .iter()
        .map(|pair| match pair.list() {
            Some([_, v]) => Ok(v),
            _ => Err(bad()),
        })
        .collect()
}

fn real_value(e: &SExpr) -> Result<BigRational, Error> {
    rational_literal(e)
        .ok_or_else(|| Error::BackendOutput(format!("expected a real value, found `{e}`")))
}

fn bool_value(e: &SExpr) -> Result<bool, Error> {
    match e.atom() {
        Some("true") => Ok(true),
        Some("false") => Ok(false),
        _ => Err(Error::BackendOutput(format!(
            "expected a Boolean value, found `{e}`"
        ))),
    }
}

/// Enclosures of ground terms as computed by the backend from the encoded
/// operator definitions.
pub fn evaluate_ground(
    terms: &[FpaTerm],
    opts: &EncodeOptions,
    leaves: ProbeLeaves,
    cfg: &BackendConfig,
) -> Result<Vec<RInterval<BigRational>>, Error> {
    let script = encode_term_probe_with(terms, opts, leaves)?;
    let limit = cfg.time_limit.unwrap_or(f64::INFINITY);
    let cancel = AtomicBool::new(false);
    let deadline = cfg.deadline(Instant::now());
    let stop = |s: Stop| match s {
        Stop::Failed(e) => e,
        Stop::Cancelled => unreachable!("never cancelled"),
    };
    let mut backend = Backend::spawn(&cfg.command)?;
    backend.send(&script)?;
    backend.close_input();
    let sat = backend.answer(deadline, limit, &cancel).map_err(stop)?;
    if sat != Answer::Sat {
        return Err(Error::BackendOutput(format!("ground probe answered {sat}")));
    }
    let answer = backend.sexpr(deadline, limit, &cancel).map_err(stop)?;
    let values = value_pairs(&answer)?;
    if values.len() != 1 + 3 * terms.len() {
        return Err(Error::BackendOutput(format!(
            "expected {} values, found {}",
            1 + 3 * terms.len(),
            values.len()
        )));
    }
    let large = real_value(values[0])?;
    values[1..]
        .chunks(3)
        .map(|c| {
            let lo = decode_bound(&real_value(c[0])?, &large);
            let hi = decode_bound(&real_value(c[1])?, &large);
            RInterval::new(lo, hi, bool_value(c[2])?)
        })
        .collect()
}
