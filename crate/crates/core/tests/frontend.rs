mod common;

use std::collections::HashMap;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{f44, formula, leaf_value};
use fp2ria::bench::{ra_to_fpa, RaToFpaOptions};
use fp2ria::oracle::{brute_force_check, fp_eval_formula, ModeMap, RoundingMode};
use fp2ria::smt::{
    check_sorts, parse_script, print_script, to_nnf, Formats, FpaFormula, FpaTerm, RmSlot, Script,
};
use fp2ria::{Error, FpFormat};

/// `phi` with every rounding site unspecified.
fn erase_modes(phi: &FpaFormula) -> FpaFormula {
    fn term(t: &FpaTerm) -> FpaTerm {
        match t {
            FpaTerm::Unary(op, a) => FpaTerm::unary(*op, term(a)),
            FpaTerm::Binary(op, _, a, b) => {
                FpaTerm::binary(*op, RmSlot::Unspecified, term(a), term(b))
            }
            other => other.clone(),
        }
    }
    match phi {
        FpaFormula::Atom(r, a, b) => FpaFormula::atom(*r, term(a), term(b)),
        FpaFormula::Not(f) => FpaFormula::not(erase_modes(f)),
        FpaFormula::And(fs) => FpaFormula::And(fs.iter().map(erase_modes).collect()),
        FpaFormula::Or(fs) => FpaFormula::Or(fs.iter().map(erase_modes).collect()),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    /// Pointwise: the same assignment and site modes give the same truth.
    #[test]
    fn nnf_preserves_truth(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = formula(&mut rng, f44());
        let nnf = to_nnf(&phi);
        prop_assert!(nnf.is_nnf());
        for _ in 0..20 {
            let assignment: HashMap<String, _> =
                ["x", "y", "z"].iter().map(|v| (v.to_string(), leaf_value(&mut rng, f44()))).collect();
            let modes = ModeMap {
                named: HashMap::new(),
                sites: (0..8).map(|_| *RoundingMode::ALL.choose(&mut rng).unwrap()).collect(),
            };
            prop_assert_eq!(
                fp_eval_formula(&phi, &assignment, &modes).unwrap(),
                fp_eval_formula(&nnf, &assignment, &modes).unwrap()
            );
        }
    }

    #[test]
    fn print_parse_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fmt = *[f44(), FpFormat::FLOAT32, FpFormat::FLOAT64].choose(&mut rng).unwrap();
        let phi = formula(&mut rng, fmt);
        let text = print_script(&Script::from_formula(&phi));
        let parsed = parse_script(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(erase_modes(&parsed.formula()), phi);
        prop_assert_eq!(print_script(&parsed), text);
    }

    #[test]
    fn converted_real_scripts_sort_check(seed in any::<u64>(), not_nan in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fmt = *[f44(), FpFormat::FLOAT32, FpFormat::FLOAT64].choose(&mut rng).unwrap();
        let ra = real_script(&mut rng);
        let out = ra_to_fpa(&ra, fmt, &RaToFpaOptions { assert_not_nan: not_nan })
            .map_err(|e| TestCaseError::fail(format!("{e}\n{ra}")))?;
        let script = parse_script(&out).map_err(|e| TestCaseError::fail(format!("{e}\n{out}")))?;
        let phi = script.formula();
        prop_assert_eq!(check_sorts(&phi, false).unwrap(), Formats::Single(fmt));
        let mut sites = Vec::new();
        phi.visit_terms(&mut |t| {
            if let FpaTerm::Binary(_, rm, ..) = t {
                sites.push(rm.clone());
            }
        });
        let used: std::collections::HashSet<_> = sites.iter().collect();
        prop_assert_eq!(used.len(), sites.len());
        prop_assert!(sites.iter().all(|rm| matches!(rm, RmSlot::Var(m) if script.mode_vars.contains(m))));
    }
}

/// A random linear or nonlinear real script.
fn real_script(rng: &mut ChaCha8Rng) -> String {
    fn term(rng: &mut ChaCha8Rng, depth: u32) -> String {
        if depth == 0 || rng.gen_bool(0.3) {
            return match rng.gen_range(0..4) {
                0 => "x".into(),
                1 => "y".into(),
                2 => format!("{}.{}", rng.gen_range(0..100), rng.gen_range(0..10)),
                _ => format!("(/ {} {})", rng.gen_range(1..50), rng.gen_range(1..50)),
            };
        }
        let op = ["+", "-", "*", "/"].choose(rng).unwrap();
        let (a, b) = (term(rng, depth - 1), term(rng, depth - 1));
        format!("({op} {a} {b})")
    }
    let mut text =
        String::from("(set-logic QF_NRA)\n(declare-fun x () Real)\n(declare-const y Real)\n");
    for _ in 0..rng.gen_range(1..=3) {
        let rel = ["<", "<=", ">", ">=", "="].choose(rng).unwrap();
        let atom = format!("({rel} {} {})", term(rng, 2), term(rng, 2));
        let atom = if rng.gen_bool(0.3) {
            format!("(not {atom})")
        } else {
            atom
        };
        text.push_str(&format!("(assert {atom})\n"));
    }
    text.push_str("(check-sat)\n");
    text
}

#[test]
fn brute_force_agrees_before_and_after_nnf() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..30 {
        let phi = formula(&mut rng, f44());
        let a = brute_force_check(&phi, f44()).unwrap().verdict;
        let b = brute_force_check(&to_nnf(&phi), f44()).unwrap().verdict;
        assert_eq!(a, b, "{phi:?}");
    }
}

#[test]
fn conversion_rejects_ite() {
    let text = "(declare-fun x () Real)\n(assert (> (ite (> x 0.0) x 1.0) 0.0))\n";
    assert!(matches!(
        ra_to_fpa(text, FpFormat::FLOAT64, &RaToFpaOptions::default()),
        Err(Error::Unsupported { .. })
    ));
}

#[test]
fn conversion_constants() {
    let text = "(declare-fun x () Real)\n(declare-fun y () Real)\n(assert (> (+ x y) (/ 3 2)))\n(assert (< x 0.1))\n";
    let out = ra_to_fpa(text, FpFormat::FLOAT64, &RaToFpaOptions::default()).unwrap();
    assert!(
        out.contains(
            "(fp #b0 #b01111111111 #b1000000000000000000000000000000000000000000000000000)"
        ),
        "{out}"
    );
    assert!(out.contains("((_ fp.const 11 53) 0.1 RNE)"), "{out}");
}
