use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fp2ria::smt::parse_script;
use fp2ria::FpFormat;

const PHI: &str = "(declare-const x Float64)
(assert (fp.gt x (_ +zero 11 53)))
(assert (fp.gt (fp.neg x) (_ +zero 11 53)))
";

const PHI_PRIME: &str = "(declare-const x Float64)
(assert (not (fp.gt x (_ +zero 11 53))))
(assert (not (fp.gt (fp.neg x) (_ +zero 11 53))))
";

const ABOVE_ONE: &str = "(declare-const x Float64)
(assert (fp.gt x (fp #b0 #b01111111111 #x0000000000000)))
";

const FIG3: &str = "(declare-const x Float64)
(assert (fp.gt (fp.mul RNE ((_ fp.const 11 53) 0.1 RNE) x) (fp #b0 #b01111111111 #x0000000000000)))
";

fn fp2ria(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fp2ria"))
        .args(args)
        .env_remove("RIA_BACKEND")
        .output()
        .expect("binary runs")
}

fn script(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn first_line(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout)
        .lines()
        .next()
        .unwrap_or_default()
        .to_string()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn worked_examples() {
    let dir = tempfile::tempdir().unwrap();
    for (name, text, expected) in [
        ("phi", PHI, "unsat"),
        ("phi_prime", PHI_PRIME, "unknown"),
        ("gt1", ABOVE_ONE, "sat"),
    ] {
        let p = script(dir.path(), name, text);
        for extra in [
            &[][..],
            &["--flatten"],
            &["--incremental"],
            &["--incremental", "--session", "--flatten"],
        ] {
            let mut args = vec!["solve", "--mode", "both", "--backend", "z3 -in", path(&p)];
            args.extend_from_slice(extra);
            let o = fp2ria(&args);
            assert_eq!(
                o.status.code(),
                Some(0),
                "{name} {extra:?}: {}",
                String::from_utf8_lossy(&o.stderr)
            );
            assert_eq!(first_line(&o), expected, "{name} {extra:?}");
        }
    }
}

#[test]
fn single_modes_never_claim_the_other_answer() {
    let dir = tempfile::tempdir().unwrap();
    let phi = script(dir.path(), "phi", PHI);
    let gt1 = script(dir.path(), "gt1", ABOVE_ONE);
    assert_eq!(
        first_line(&fp2ria(&["solve", "--mode", "weak", path(&phi)])),
        "unsat"
    );
    assert_eq!(
        first_line(&fp2ria(&["solve", "--mode", "strong", path(&phi)])),
        "unknown"
    );
    assert_eq!(
        first_line(&fp2ria(&["solve", "--mode", "weak", path(&gt1)])),
        "unknown"
    );
    assert_eq!(
        first_line(&fp2ria(&["solve", "--mode", "strong", path(&gt1)])),
        "sat"
    );
}

#[test]
fn verbose_provenance_follows_the_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let phi = script(dir.path(), "phi", PHI);
    let o = fp2ria(&["solve", "-v", "--incremental", path(&phi)]);
    let text = String::from_utf8_lossy(&o.stdout);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "unsat");
    assert!(lines.contains(&"decided-by: weak"), "{text}");
    assert!(lines.contains(&"ladder-step: F(4,4)"), "{text}");
}

#[test]
fn translate_matches_figure_and_is_idempotent() {
    let dir = tempfile::tempdir().unwrap();
    let input = script(dir.path(), "fig3.smt2", FIG3);
    let o = fp2ria(&["translate", "--mode", "weak", path(&input)]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("(assert (= (ri.l x) (ri.u x)))"), "{text}");

    for flags in [
        &["--mode", "strong"][..],
        &["--mode", "weak", "--flatten"],
        &["--precision-list", "4:4,8:24"],
    ] {
        let (a, b) = (dir.path().join("a.smt2"), dir.path().join("b.smt2"));
        for out in [&a, &b] {
            let mut args = vec!["translate", path(&input), "-o", path(out)];
            args.extend_from_slice(flags);
            assert_eq!(fp2ria(&args).status.code(), Some(0));
        }
        assert_eq!(
            std::fs::read(&a).unwrap(),
            std::fs::read(&b).unwrap(),
            "{flags:?}"
        );
    }
    assert_eq!(
        fp2ria(&["translate", "--mode", "both", path(&input)])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn failures_keep_the_output_protocol() {
    let dir = tempfile::tempdir().unwrap();
    let phi = script(dir.path(), "phi", PHI);
    let missing = dir.path().join("missing.smt2");

    let o = fp2ria(&["solve", path(&missing)]);
    assert_eq!(
        (o.status.code(), first_line(&o).as_str()),
        (Some(1), "unknown")
    );

    let o = fp2ria(&["solve", "--backend", "no-such-solver-binary", path(&phi)]);
    assert_eq!(
        (o.status.code(), first_line(&o).as_str()),
        (Some(2), "unknown")
    );
    assert!(String::from_utf8_lossy(&o.stderr).contains("no-such-solver-binary"));

    let o = Command::new(env!("CARGO_BIN_EXE_fp2ria"))
        .args(["solve", path(&phi)])
        .env("RIA_BACKEND", "sh -c 'echo boom >&2; exit 3'")
        .output()
        .unwrap();
    assert_eq!(
        (o.status.code(), first_line(&o).as_str()),
        (Some(2), "unknown")
    );

    let bad = script(dir.path(), "bad", "(assert (fp.gt x))");
    assert_eq!(fp2ria(&["solve", path(&bad)]).status.code(), Some(1));
}

#[test]
fn backend_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let phi = script(dir.path(), "phi", PHI);
    let o = Command::new(env!("CARGO_BIN_EXE_fp2ria"))
        .args(["solve", path(&phi)])
        .env("RIA_BACKEND", "false")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors() {
    assert_eq!(fp2ria(&[]).status.code(), Some(1));
    assert_eq!(fp2ria(&["solve"]).status.code(), Some(1));
    assert_eq!(
        fp2ria(&["solve", "--mode", "sideways", "x"]).status.code(),
        Some(1)
    );
    assert_eq!(
        fp2ria(&["solve", "--precision-list", "4:4", "x"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        fp2ria(&["solve", "--timeout", "-3", "x"]).status.code(),
        Some(1)
    );
    let help = fp2ria(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&help.stdout).contains("translate"));
}

#[test]
fn bench_writes_parsable_instances() {
    let dir = tempfile::tempdir().unwrap();
    let o = fp2ria(&[
        "bench",
        "bmc",
        "--system",
        "filter",
        "--k",
        "1,2",
        "--th",
        "2,0.5",
        "-o",
        path(dir.path()),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let mut names: Vec<String> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(
        names,
        [
            "filter_k1_th0.5.smt2",
            "filter_k1_th2.smt2",
            "filter_k2_th0.5.smt2",
            "filter_k2_th2.smt2"
        ]
    );
    for n in names {
        let phi = parse_script(&std::fs::read_to_string(dir.path().join(n)).unwrap())
            .unwrap()
            .formula();
        assert_eq!(phi.formats(), vec![FpFormat::FLOAT64]);
    }
    assert_eq!(
        fp2ria(&["bench", "bmc", "--system", "pendulum"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn bench_converts_real_arithmetic() {
    let dir = tempfile::tempdir().unwrap();
    let ra = script(
        dir.path(),
        "ra.smt2",
        "(set-logic QF_LRA)\n(declare-fun x () Real)\n(declare-fun y () Real)\n(assert (> (+ x y) (/ 3 2)))\n(check-sat)\n",
    );
    let o = fp2ria(&[
        "bench",
        "ra",
        "--format",
        "8:24",
        "--assert-not-nan",
        path(&ra),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let script = parse_script(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert_eq!(script.formula().formats(), vec![FpFormat::FLOAT32]);

    let ite = script_with_ite(dir.path());
    assert_eq!(fp2ria(&["bench", "ra", path(&ite)]).status.code(), Some(1));
}

fn script_with_ite(dir: &Path) -> PathBuf {
    script(
        dir,
        "ite.smt2",
        "(declare-fun x () Real)\n(assert (> (ite (> x 0) x 1) 0))\n",
    )
}

#[test]
fn oracle_suites_pass() {
    let o = fp2ria(&["oracle", "--suite", "enclosure", "--samples", "200"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(
        text.lines()
            .last()
            .unwrap()
            .starts_with("PASS suites=1 failed=0"),
        "{text}"
    );
    assert_eq!(
        fp2ria(&["oracle", "--format", "11:53"]).status.code(),
        Some(1)
    );
}
