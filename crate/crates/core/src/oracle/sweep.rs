//! Exhaustive soundness sweeps of the interval layer against the oracle.

use std::fmt;

use num_rational::BigRational;

use super::{enumerate_fp, fp_eval_op, fp_round, FpValue, RoundingMode};
use crate::format::FpFormat;
use crate::ia::{
    contains_fp, eval_cmp, iv_op, round_down, round_up, CmpSpec, FpaOp, Mode, Polarity, RInterval,
    Rel, XRat, XVal,
};
use crate::Error;

const DETAIL_LIMIT: usize = 50;

/// Tally of a sweep. Only failing checks are kept as detail lines.
#[derive(Clone, Debug)]
pub struct SweepReport {
    pub name: &'static str,
    pub checks: u64,
    pub violations: u64,
    pub details: Vec<String>,
}

impl SweepReport {
    fn new(name: &'static str) -> Self {
        SweepReport {
            name,
            checks: 0,
            violations: 0,
            details: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, line: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.violations += 1;
            if self.details.len() < DETAIL_LIMIT {
                self.details.push(format!("FAIL {}", line()));
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

impl fmt::Display for SweepReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.details {
            writeln!(f, "{d}")?;
        }
        write!(
            f,
            "{} sweep={} checks={} violations={}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.checks,
            self.violations
        )
    }
}

fn show_interval(i: &RInterval<BigRational>) -> String {
    format!("{},{},{}", i.lo(), i.hi(), i.has_nan())
}

/// Every mode's rounding of every sample, and of every finite value of
/// `fmt`, lies in `[round_down(x), round_up(x)]`, which strictly brackets `x`.
pub fn sweep_enclosure(fmt: FpFormat, samples: &[BigRational]) -> Result<SweepReport, Error> {
    let prec = fmt.precision();
    let mut report = SweepReport::new("enclosure");
    let finite = enumerate_fp(fmt)?
        .into_iter()
        .filter_map(|v| v.to_rational(fmt));
    for x in finite.chain(samples.iter().cloned()) {
        let fx = XRat::Finite(x.clone());
        let (lo, hi) = (round_down(&fx, &prec), round_up(&fx, &prec));
        let iv = RInterval::new_unchecked(lo.clone(), hi.clone(), false);
        report.record(lo < fx && fx < hi, || {
            format!(
                "op=bracket mode=- a={x} b=- got={x} interval={}",
                show_interval(&iv)
            )
        });
        for mode in RoundingMode::ALL {
            let r = fp_round(&x, mode, fmt);
            report.record(iv.contains(&r.value(fmt)), || {
                format!(
                    "op=round mode={mode} a={x} b=- got={} interval={}",
                    r.display(fmt),
                    show_interval(&iv)
                )
            });
        }
    }
    Ok(report)
}

/// Every operator, mode and operand pair of `fmt`: the rounded result lies
/// in the interval extension applied to the operands' tightest intervals.
pub fn sweep_operators(fmt: FpFormat) -> Result<SweepReport, Error> {
    let prec = fmt.precision();
    let values = enumerate_fp(fmt)?;
    let intervals: Vec<RInterval<BigRational>> = values
        .iter()
        .map(|v| RInterval::of_value(&v.value(fmt)))
        .collect();
    let mut report = SweepReport::new("operators");
    for (a, ia) in values.iter().zip(&intervals) {
        for op in [FpaOp::Neg, FpaOp::Abs] {
            let got = fp_eval_op(op, RoundingMode::RNE, *a, *a, fmt);
            let iv = iv_op(op, ia, ia, &prec);
            report.record(iv.contains(&got.value(fmt)), || {
                format!(
                    "op={op} mode=- a={} b=- got={} interval={}",
                    a.display(fmt),
                    got.display(fmt),
                    show_interval(&iv)
                )
            });
        }
        for (b, ib) in values.iter().zip(&intervals) {
            for op in FpaOp::BINARY {
                let iv = iv_op(op, ia, ib, &prec);
                for mode in RoundingMode::ALL {
                    let got = fp_eval_op(op, mode, *a, *b, fmt);
                    report.record(iv.contains(&got.value(fmt)), || {
                        format!(
                            "op={op} mode={mode} a={} b={} got={} interval={}",
                            a.display(fmt),
                            b.display(fmt),
                            got.display(fmt),
                            show_interval(&iv)
                        )
                    });
                }
            }
        }
    }
    Ok(report)
}

fn compare(rel: Rel, a: FpValue, b: FpValue, fmt: FpFormat) -> bool {
    match rel {
        Rel::SeqEq => a.seq_eq(b),
        Rel::FpEq => a.fp_eq(b, fmt),
        Rel::Ge => a.fp_cmp(b, fmt).is_some_and(|o| o.is_ge()),
        Rel::Gt => a.fp_cmp(b, fmt).is_some_and(|o| o.is_gt()),
    }
}

/// The comparison predicates on intervals built from values of `fmt`:
/// point intervals, points joined with NaN, and rounding enclosures. NaN is
/// represented both as `[-oo,-oo] u {NaN}` and as the full surrogate.
///
/// For each pair of intervals `X`, `Y` with value sets `A`, `B`:
/// a weak predicate holds whenever some `a in A`, `b in B` make the relation
/// (or its negation) true; a strong predicate on intervals that pass the
/// membership test implies such a pair exists. Strong implies weak, the two
/// weak polarities cover every pair and the two strong polarities of order
/// relations exclude each other.
pub fn sweep_comparisons(fmt: FpFormat) -> Result<SweepReport, Error> {
    let prec = fmt.precision();
    let values = enumerate_fp(fmt)?;
    let mut family: Vec<RInterval<BigRational>> = Vec::new();
    for v in &values {
        match v.value(fmt) {
            XVal::NaN => {
                family.push(RInterval::neg_inf().with_nan(true));
                family.push(RInterval::nan_surrogate());
            }
            XVal::Real(x) => {
                let point = RInterval::of_value(&XVal::Real(x.clone()));
                family.push(point.clone().with_nan(true));
                family.push(point);
                family.push(RInterval::new_unchecked(
                    round_down(&x, &prec),
                    round_up(&x, &prec),
                    false,
                ));
            }
        }
    }
    family.sort_by_key(show_interval);
    family.dedup();
    let members: Vec<Vec<FpValue>> = family
        .iter()
        .map(|i| {
            values
                .iter()
                .copied()
                .filter(|v| i.contains(&v.value(fmt)))
                .collect()
        })
        .collect();
    let admissible: Vec<bool> = family.iter().map(|i| contains_fp(i, &prec)).collect();

    let mut report = SweepReport::new("comparisons");
    for (x, (xs, x_ok)) in family.iter().zip(members.iter().zip(&admissible)) {
        for (y, (ys, y_ok)) in family.iter().zip(members.iter().zip(&admissible)) {
            for rel in Rel::ALL {
                let exists = |want: bool| {
                    xs.iter()
                        .any(|a| ys.iter().any(|b| compare(rel, *a, *b, fmt) == want))
                };
                let eval = |pol, mode| eval_cmp(CmpSpec::new(rel, pol, mode), x, y);
                let pw = eval(Polarity::Positive, Mode::Weak);
                let nw = eval(Polarity::Negative, Mode::Weak);
                let ps = eval(Polarity::Positive, Mode::Strong);
                let ns = eval(Polarity::Negative, Mode::Strong);
                let line = |what: &str| {
                    format!(
                        "op={rel} mode={what} a={} b={} got=- interval=-",
                        show_interval(x),
                        show_interval(y)
                    )
                };
                let (et, ef) = (exists(true), exists(false));
                report.record(!et || pw, || line("weak+"));
                report.record(!ef || nw, || line("weak-"));
                if *x_ok && *y_ok {
                    report.record(!ps || et, || line("strong+"));
                    report.record(!ns || ef, || line("strong-"));
                }
                report.record(!ps || pw, || line("strong+=>weak+"));
                report.record(!ns || nw, || line("strong-=>weak-"));
                report.record(pw || nw, || line("weak-totality"));
                if matches!(rel, Rel::Ge | Rel::Gt) {
                    report.record(!(ps && ns), || line("strong-exclusivity"));
                }
            }
        }
    }
    Ok(report)
}
