//! Acceptance gate. Every criterion runs in sequence, prints one PASS/FAIL
//! line, and the test fails afterwards if any criterion failed.

mod common;

use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::Signed;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{backend, eval_ground, f44, formula, rational, term};
use fp2ria::bench::{gen_bmc, BmcInstance, BmcSystem};
use fp2ria::driver::{
    evaluate_ground, solve, solve_ladder, BackendConfig, Interaction, SolveResult, Verdict,
};
use fp2ria::encode::{EncodeOptions, ProbeLeaves, Representation};
use fp2ria::ia::{round_down, round_up, FpaOp, Mode, Rel, XRat};
use fp2ria::oracle::{
    brute_force_check, sweep_comparisons, sweep_enclosure, sweep_operators, FpValue, OracleVerdict,
};
use fp2ria::scalar::parse_rational;
use fp2ria::smt::{parse_script, FpaFormula, FpaTerm};
use fp2ria::{Error, FpFormat};

const BMC_LIMIT: Duration = Duration::from_secs(60);

struct Gate {
    results: Vec<(u32, bool)>,
}

impl Gate {
    fn run(&mut self, id: u32, name: &str, check: impl FnOnce() -> Result<String, String>) {
        let start = Instant::now();
        let (ok, detail) = match check() {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        println!(
            "{} criterion {id} {name}: {detail} [{:.1}s]",
            if ok { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
        self.results.push((id, ok));
    }
}

fn q(s: &str) -> BigRational {
    parse_rational(s).unwrap()
}

fn x(f: FpFormat) -> FpaTerm {
    FpaTerm::var("x", f)
}

fn zero(f: FpFormat) -> FpaTerm {
    FpaTerm::lit(FpValue::PosZero, f)
}

fn worked_examples(f: FpFormat) -> Vec<(&'static str, FpaFormula, Verdict)> {
    let gt0 = FpaFormula::atom(Rel::Gt, x(f), zero(f));
    let lt0 = FpaFormula::atom(Rel::Gt, FpaTerm::unary(FpaOp::Neg, x(f)), zero(f));
    vec![
        (
            "phi",
            FpaFormula::And(vec![gt0.clone(), lt0.clone()]),
            Verdict::Unsat,
        ),
        (
            "phi'",
            FpaFormula::And(vec![FpaFormula::not(gt0), FpaFormula::not(lt0)]),
            Verdict::Unknown,
        ),
        (
            "x>1",
            FpaFormula::atom(Rel::Gt, x(f), FpaTerm::real(&q("1"), f)),
            Verdict::Sat,
        ),
    ]
}

fn configs() -> Vec<BackendConfig> {
    vec![
        backend(),
        backend().with_representation(Representation::Datatype),
    ]
}

fn rounding_values() -> Result<String, String> {
    let prec = f44().precision();
    let tenth = XRat::Finite(q("0.1"));
    let (lo, hi) = (round_down(&tenth, &prec), round_up(&tenth, &prec));
    let (want_lo, want_hi) = (
        XRat::Finite(q("0.085546875")),
        XRat::Finite(q("0.114453125")),
    );
    let printed = |v: &XRat<BigRational>, shown: &str| match v {
        XRat::Finite(v) => (v - q(shown)).abs() <= q("0.0000005"),
        _ => false,
    };
    let detail = format!("down={lo} up={hi}");
    if lo == want_lo && hi == want_hi && printed(&lo, "0.0855469") && printed(&hi, "0.114453") {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn report(r: Result<fp2ria::oracle::SweepReport, Error>) -> Result<String, String> {
    let r = r.map_err(|e| e.to_string())?;
    let line = format!("checks={} violations={}", r.checks, r.violations);
    if r.passed() {
        Ok(line)
    } else {
        Err(format!("{line}\n{r}"))
    }
}

fn enclosure() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let samples: Vec<BigRational> = (0..10_000).map(|_| rational(&mut rng, 300, 1000)).collect();
    report(sweep_enclosure(f44(), &samples))
}

fn examples() -> Result<String, String> {
    let mut runs = 0;
    for f in [f44(), FpFormat::FLOAT64] {
        for (name, phi, want) in worked_examples(f) {
            for cfg in configs() {
                let got = solve(&phi, &cfg)
                    .map_err(|e| format!("{name} at {f}: {e}"))?
                    .verdict;
                if got != want {
                    return Err(format!(
                        "{name} at {f} with {:?}: {got}, expected {want}",
                        cfg.representation
                    ));
                }
                runs += 1;
            }
        }
    }
    Ok(format!("{runs} solves matched"))
}

struct Fuzzed {
    phi: FpaFormula,
    verdict: Verdict,
}

fn fuzz(instances: &mut Vec<Fuzzed>) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let cfg = backend();
    let (mut violations, mut unknown, mut sat, mut unsat) = (Vec::new(), 0, 0, 0);
    for i in 0..500 {
        let phi = formula(&mut rng, f44());
        let truth = brute_force_check(&phi, f44())
            .map_err(|e| format!("formula {i}: {e}"))?
            .verdict;
        let verdict = match solve(&phi, &cfg) {
            Ok(r) => r.verdict,
            Err(Error::SoundnessViolation(m)) => {
                violations.push(format!("formula {i}: {m}"));
                continue;
            }
            Err(e) => return Err(format!("formula {i}: {e}")),
        };
        match (verdict, &truth) {
            (Verdict::Sat, OracleVerdict::Unsat) | (Verdict::Unsat, OracleVerdict::Sat) => {
                violations.push(format!(
                    "formula {i}: {verdict} but truth {truth:?}: {phi:?}"
                ))
            }
            (Verdict::Unknown, _) => unknown += 1,
            (Verdict::Sat, _) => sat += 1,
            (Verdict::Unsat, _) => unsat += 1,
        }
        instances.push(Fuzzed { phi, verdict });
    }
    let detail = format!(
        "500 formulas, sat={sat} unsat={unsat} unknown={unknown} ({:.1}%), violations={}",
        unknown as f64 / 5.0,
        violations.len()
    );
    if violations.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{detail}\n{}", violations.join("\n")))
    }
}

fn ground_differential() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut batches: Vec<Vec<FpaTerm>> = Vec::new();
    for (fmt, count) in [
        (f44(), 700),
        (FpFormat::FLOAT32, 150),
        (FpFormat::FLOAT64, 150),
    ] {
        let terms: Vec<FpaTerm> = (0..count)
            .map(|i| term(&mut rng, fmt, &[], 1 + i % 4))
            .collect();
        batches.extend(terms.chunks(50).map(<[FpaTerm]>::to_vec));
    }
    let cfg = backend();
    let mut mismatches = Vec::new();
    let mut compared = 0;
    for batch in &batches {
        let prec = batch[0].format().precision();
        let expected: Vec<_> = batch.iter().map(|t| eval_ground(t, &prec)).collect();
        for mode in [Mode::Weak, Mode::Strong] {
            let runs = [
                (Representation::Datatype, ProbeLeaves::Folded),
                (Representation::Flattened, ProbeLeaves::Opaque),
                (Representation::Flattened, ProbeLeaves::Alternate),
            ];
            for (representation, leaves) in runs {
                let opts = EncodeOptions {
                    representation,
                    ..EncodeOptions::new(mode)
                };
                let got = evaluate_ground(batch, &opts, leaves, &cfg).map_err(|e| e.to_string())?;
                for ((t, g), e) in batch.iter().zip(&got).zip(&expected) {
                    compared += 1;
                    if g != e {
                        mismatches.push(format!("{representation:?}/{leaves:?}/{mode}: {t:?}: backend {g:?}, library {e:?}"));
                    }
                }
            }
        }
    }
    let detail = format!(
        "1000 terms, {compared} comparisons, mismatches={}",
        mismatches.len()
    );
    if mismatches.is_empty() {
        Ok(detail)
    } else {
        mismatches.truncate(20);
        Err(format!("{detail}\n{}", mismatches.join("\n")))
    }
}

struct BmcRun {
    phi: FpaFormula,
    verdict: Verdict,
}

const THRESHOLDS: [&str; 5] = ["3", "2.71", "2", "1", "0"];

/// Verdicts along a descending threshold sweep read Unsat* Unknown* Sat*.
fn ordered(verdicts: &[Verdict]) -> bool {
    let rank = |v: &Verdict| match v {
        Verdict::Unsat => 0,
        Verdict::Unknown => 1,
        Verdict::Sat => 2,
    };
    verdicts.windows(2).all(|w| rank(&w[0]) <= rank(&w[1]))
}

fn bmc(runs: &mut Vec<BmcRun>) -> Result<String, String> {
    let cfg = backend().with_time_limit(BMC_LIMIT.as_secs_f64());
    let maxima = ["1", "1.9", "2.71"];
    let mut rows = Vec::new();
    let mut problems = Vec::new();
    let mut slowest = Duration::ZERO;
    for k in 1..=3usize {
        let max = q(maxima[k - 1]);
        let inputs = vec![q("1"); k];
        if BmcSystem::Integrator.simulate(&inputs) != max {
            problems.push(format!("k={k}: simulated maximum differs from {max}"));
        }
        let mut verdicts = Vec::new();
        for th in THRESHOLDS {
            let inst =
                BmcInstance::new(BmcSystem::Integrator, k, q(th), FpFormat::FLOAT64).unwrap();
            let phi = parse_script(&gen_bmc(&inst))
                .map_err(|e| e.to_string())?
                .formula();
            let SolveResult {
                verdict,
                provenance,
            } = solve(&phi, &cfg).map_err(|e| format!("k={k} th={th}: {e}"))?;
            slowest = slowest.max(provenance.wall_time);
            if provenance.wall_time >= BMC_LIMIT {
                problems.push(format!(
                    "k={k} th={th}: {:.1}s",
                    provenance.wall_time.as_secs_f64()
                ));
            }
            let th = q(th);
            if (verdict == Verdict::Sat && th > max) || (verdict == Verdict::Unsat && th <= max) {
                problems.push(format!(
                    "k={k} th={th}: {verdict} contradicts the maximum {max}"
                ));
            }
            verdicts.push(verdict);
            runs.push(BmcRun { phi, verdict });
        }
        if !ordered(&verdicts) {
            problems.push(format!("k={k}: verdicts out of order"));
        }
        let above = THRESHOLDS
            .iter()
            .zip(&verdicts)
            .any(|(t, v)| q(t) > max && *v == Verdict::Unsat);
        let below = THRESHOLDS
            .iter()
            .zip(&verdicts)
            .any(|(t, v)| q(t) < max && *v == Verdict::Sat);
        if !(above && below) {
            problems.push(format!("k={k}: verdicts do not bracket {max}"));
        }
        let row: Vec<String> = verdicts.iter().map(ToString::to_string).collect();
        rows.push(format!("k={k}: {}", row.join(" ")));
    }
    let detail = format!(
        "{}; slowest solve {:.1}s",
        rows.join("; "),
        slowest.as_secs_f64()
    );
    if problems.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{detail}\n{}", problems.join("\n")))
    }
}

fn incremental(fuzzed: &[Fuzzed], bmc: &[BmcRun]) -> Result<String, String> {
    let mut cases: Vec<(String, FpaFormula, Verdict)> = Vec::new();
    for f in [f44(), FpFormat::FLOAT64] {
        for (name, phi, want) in worked_examples(f) {
            cases.push((format!("{name} at {f}"), phi, want));
        }
    }
    cases.extend(
        fuzzed
            .iter()
            .enumerate()
            .map(|(i, r)| (format!("fuzz {i}"), r.phi.clone(), r.verdict)),
    );
    cases.extend(
        bmc.iter()
            .enumerate()
            .map(|(i, r)| (format!("bmc {i}"), r.phi.clone(), r.verdict)),
    );
    let base = backend().with_time_limit(BMC_LIMIT.as_secs_f64());
    let mut problems = Vec::new();
    let (mut agreed, mut conclusive) = (0, 0);
    let mut early_exit = false;
    for interaction in [Interaction::Session, Interaction::Batch] {
        let cfg = base.clone().with_interaction(interaction);
        for (name, phi, monolithic) in &cases {
            if interaction == Interaction::Batch && name.starts_with("fuzz") {
                continue;
            }
            let bound = phi
                .formats()
                .into_iter()
                .next()
                .unwrap_or(FpFormat::FLOAT64);
            let r = solve_ladder(phi, &cfg, bound).map_err(|e| format!("{name}: {e}"))?;
            if r.verdict != Verdict::Unknown {
                conclusive += 1;
                if r.verdict != *monolithic {
                    problems.push(format!(
                        "{name} ({interaction:?}): ladder {} vs monolithic {monolithic}",
                        r.verdict
                    ));
                    continue;
                }
            }
            agreed += 1;
            if name == "phi at F(11,53)" && r.provenance.ladder_step == Some(f44()) {
                early_exit = true;
            }
        }
    }
    if !early_exit {
        problems.push("phi at F(11,53) did not conclude at F(4,4)".into());
    }
    let detail = format!("{agreed} runs agreed, {conclusive} conclusive, phi at F(11,53) exits at F(4,4): {early_exit}");
    if problems.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{detail}\n{}", problems.join("\n")))
    }
}

#[test]
fn acceptance() {
    let mut gate = Gate {
        results: Vec::new(),
    };
    let mut fuzzed = Vec::new();
    let mut runs = Vec::new();
    gate.run(1, "rounding values", rounding_values);
    gate.run(2, "rounding enclosure sweep", enclosure);
    gate.run(3, "operator enclosure sweep", || {
        report(sweep_operators(f44()))
    });
    gate.run(4, "comparison predicate sweep", || {
        report(sweep_comparisons(f44()))
    });
    gate.run(5, "worked examples", examples);
    gate.run(6, "soundness fuzzing", || fuzz(&mut fuzzed));
    gate.run(7, "ground differential", ground_differential);
    gate.run(8, "bounded model checking", || bmc(&mut runs));
    gate.run(9, "incremental agreement", || incremental(&fuzzed, &runs));
    let failed: Vec<u32> = gate
        .results
        .iter()
        .filter(|(_, ok)| !ok)
        .map(|(id, _)| *id)
        .collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
