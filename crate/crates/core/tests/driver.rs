use fp2ria::driver::{
    evaluate_ground, solve, solve_incremental, solve_ladder, solve_once, Answer, BackendConfig,
    IncrementalPath, Interaction, Verdict,
};
use fp2ria::encode::{EncodeOptions, ProbeLeaves, Representation};
use fp2ria::ia::{iv_op, FpaOp, Mode, Rel};
use fp2ria::oracle::FpValue;
use fp2ria::smt::{FpaFormula, FpaTerm, RmSlot};
use fp2ria::{make_format, FpFormat, Interval};
use num_rational::BigRational;

fn x(f: FpFormat) -> FpaTerm {
    FpaTerm::var("x", f)
}

fn zero(f: FpFormat) -> FpaTerm {
    FpaTerm::lit(FpValue::PosZero, f)
}

fn one(f: FpFormat) -> FpaTerm {
    FpaTerm::real(&BigRational::from_integer(1.into()), f)
}

fn phi(f: FpFormat) -> FpaFormula {
    FpaFormula::And(vec![
        FpaFormula::atom(Rel::Gt, x(f), zero(f)),
        FpaFormula::atom(Rel::Gt, FpaTerm::unary(FpaOp::Neg, x(f)), zero(f)),
    ])
}

fn phi_prime(f: FpFormat) -> FpaFormula {
    FpaFormula::And(vec![
        FpaFormula::not(FpaFormula::atom(Rel::Gt, x(f), zero(f))),
        FpaFormula::not(FpaFormula::atom(
            Rel::Gt,
            FpaTerm::unary(FpaOp::Neg, x(f)),
            zero(f),
        )),
    ])
}

fn above_one(f: FpFormat) -> FpaFormula {
    FpaFormula::atom(Rel::Gt, x(f), one(f))
}

fn configs() -> Vec<BackendConfig> {
    let base = BackendConfig::from_env().with_time_limit(60.0);
    vec![
        base.clone(),
        base.clone().with_representation(Representation::Datatype),
        base.with_interaction(Interaction::Session),
    ]
}

#[test]
fn worked_examples_once() {
    for f in [make_format(4, 4).unwrap(), FpFormat::FLOAT64] {
        for cfg in configs() {
            assert_eq!(
                solve_once(&phi(f), Mode::Weak, &cfg).unwrap(),
                Answer::Unsat
            );
            assert_eq!(
                solve_once(&phi_prime(f), Mode::Weak, &cfg).unwrap(),
                Answer::Sat
            );
            assert_eq!(
                solve_once(&phi_prime(f), Mode::Strong, &cfg).unwrap(),
                Answer::Unsat
            );
            assert_eq!(
                solve_once(&above_one(f), Mode::Strong, &cfg).unwrap(),
                Answer::Sat
            );
        }
    }
}

#[test]
fn worked_examples_combined() {
    for f in [make_format(4, 4).unwrap(), FpFormat::FLOAT64] {
        for cfg in configs() {
            let r = solve(&phi(f), &cfg).unwrap();
            assert_eq!(r.verdict, Verdict::Unsat);
            assert_eq!(r.provenance.mode, Some(Mode::Weak));
            assert_eq!(
                solve(&phi_prime(f), &cfg).unwrap().verdict,
                Verdict::Unknown
            );
            let r = solve(&above_one(f), &cfg).unwrap();
            assert_eq!(r.verdict, Verdict::Sat);
            assert_eq!(r.provenance.mode, Some(Mode::Strong));
        }
    }
}

#[test]
fn ladder_exits_at_coarsest_step() {
    let coarse = make_format(4, 4).unwrap();
    for cfg in configs() {
        let r = solve_incremental(&phi(FpFormat::FLOAT64), &cfg, FpFormat::FLOAT64, Mode::Weak)
            .unwrap();
        assert_eq!(
            (r.answer, r.step, r.checks),
            (Answer::Unsat, Some(coarse), 1)
        );
        let r = solve_incremental(
            &above_one(FpFormat::FLOAT64),
            &cfg,
            FpFormat::FLOAT64,
            Mode::Strong,
        )
        .unwrap();
        assert_eq!((r.answer, r.step), (Answer::Sat, Some(coarse)));
        let expected = match cfg.interaction {
            Interaction::Session => IncrementalPath::Assumptions,
            Interaction::Batch => IncrementalPath::Restart,
        };
        assert_eq!(r.path, expected);
        let r = solve_incremental(
            &phi_prime(FpFormat::FLOAT64),
            &cfg,
            FpFormat::FLOAT32,
            Mode::Weak,
        )
        .unwrap();
        assert_eq!((r.answer, r.checks), (Answer::Unknown, 3));
        assert_eq!(
            solve_ladder(&phi(FpFormat::FLOAT64), &cfg, FpFormat::FLOAT64)
                .unwrap()
                .verdict,
            Verdict::Unsat
        );
    }
}

#[test]
fn timeouts_are_reported() {
    let cfg = BackendConfig::new("sleep 30").with_time_limit(0.2);
    let err = solve_once(&phi(FpFormat::FLOAT32), Mode::Weak, &cfg).unwrap_err();
    assert!(matches!(err, fp2ria::Error::Timeout(_)), "{err}");
    assert_eq!(
        solve(&phi(FpFormat::FLOAT32), &cfg).unwrap().verdict,
        Verdict::Unknown
    );
}

#[test]
fn crashes_and_garbage_are_reported() {
    let crash = BackendConfig::new("false");
    assert!(matches!(
        solve_once(&phi(FpFormat::FLOAT32), Mode::Weak, &crash),
        Err(fp2ria::Error::BackendCrash { .. })
    ));
    let garbage = BackendConfig::new("echo hello");
    assert!(matches!(
        solve_once(&phi(FpFormat::FLOAT32), Mode::Weak, &garbage),
        Err(fp2ria::Error::BackendOutput(_))
    ));
}

#[test]
fn ground_probe_matches_interval_library() {
    let f = make_format(4, 4).unwrap();
    let prec = f.precision();
    let tenth = FpaTerm::real(&BigRational::new(1.into(), 10.into()), f);
    let three = FpaTerm::lit(FpValue::PosInf, f);
    let terms = vec![
        FpaTerm::binary(FpaOp::Mul, RmSlot::Unspecified, tenth.clone(), one(f)),
        FpaTerm::binary(FpaOp::Div, RmSlot::Unspecified, one(f), zero(f)),
        FpaTerm::binary(
            FpaOp::Sub,
            RmSlot::Unspecified,
            three.clone(),
            three.clone(),
        ),
        FpaTerm::binary(FpaOp::Mul, RmSlot::Unspecified, three, zero(f)),
        FpaTerm::unary(FpaOp::Abs, FpaTerm::unary(FpaOp::Neg, tenth)),
    ];
    let expected: Vec<Interval> = terms.iter().map(|t| eval(t, &prec)).collect();
    for cfg in configs() {
        for mode in [Mode::Weak, Mode::Strong] {
            let opts = EncodeOptions {
                representation: cfg.representation,
                ..EncodeOptions::new(mode)
            };
            for leaves in [
                ProbeLeaves::Folded,
                ProbeLeaves::Opaque,
                ProbeLeaves::Alternate,
            ] {
                assert_eq!(
                    evaluate_ground(&terms, &opts, leaves, &cfg).unwrap(),
                    expected,
                    "{leaves:?}"
                );
            }
        }
    }
}

fn eval(t: &FpaTerm, prec: &fp2ria::Precision<BigRational>) -> Interval {
    use fp2ria::ia::{round_down, round_up, XRat};
    match t {
        FpaTerm::Literal(v, f) => Interval::of_value(&v.value(*f)),
        FpaTerm::Const { value, .. } => {
            let x = XRat::Finite(value.clone());
            Interval::new(round_down(&x, prec), round_up(&x, prec), false).unwrap()
        }
        FpaTerm::Unary(op, a) => {
            let a = eval(a, prec);
            iv_op(*op, &a, &a, prec)
        }
        FpaTerm::Binary(op, _, a, b) => iv_op(*op, &eval(a, prec), &eval(b, prec), prec),
        FpaTerm::Var(..) => unreachable!(),
    }
}
