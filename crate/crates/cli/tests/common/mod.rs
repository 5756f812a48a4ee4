//! Invocations and expressions shared by the CLI conformance checks.

#![allow(dead_code)]

use std::path::PathBuf;

use num_rational::Rational64 as Q;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use robba_cli::expr::{parse, Expr};

pub const CASES: &[(&str, &[&str])] = &[
    ("classify_type2", &["classify", "--point", r#"{"center":"t","rho":"1/2"}"#]),
    ("classify_type1", &["classify", "--point", r#"{"center":"t + t^2","rho":"inf"}"#]),
    ("classify_type3", &["classify", "--point", r#"{"center":"t","rho":"1/3"}"#]),
    (
        "classify_type4",
        &["classify", "--point", r#"{"discs":[{"center":"t","rho":"1"},{"center":"t + t^3","rho":"2"}]}"#],
    ),
    ("classify_type5", &["classify", "--point", r#"{"center":"t","rho":"1/2","sign":"-"}"#]),
    ("eval_norm_center", &["eval-norm", "--point", r#"{"center":"t","rho":"1/2"}"#, "--elem", "w - [t]"]),
    (
        "eval_norm_laurent",
        &["eval-norm", "--point", r#"{"center":"t^2","rho":"1"}"#, "--elem", "w^-1*[t^(1/2)] + [1] + O(w^3)"],
    ),
    ("eval_norm_type5", &["eval-norm", "--point", r#"{"center":"t","rho":"1/2","sign":"+"}"#, "--elem", "w - [t]"]),
    (
        "eval_norm_mixed",
        &[
            "--backend",
            "mixed",
            "--prec-w",
            "5",
            "eval-norm",
            "--point",
            r#"{"center":"t","rho":"1/2"}"#,
            "--elem",
            "3*w^-1 + [t^(1/2)]",
        ],
    ),
    (
        "eval_norm_p3",
        &["--config", "@p3.toml", "eval-norm", "--point", r#"{"center":"g*t","rho":"1"}"#, "--elem", "w^2 - [g*t]"],
    ),
    ("same_point_yes", &["same-point", "--u", "t", "--v", "t + t^2", "--rho", "1"]),
    ("factor", &["factor", "--elem", "(w - [t])*(w - [t^2])*([1] + w*[t])"]),
    ("stable_pres", &["stable-pres", "--center", "t", "--elem", "(w - [t])^2*[t] + w*[t^3]", "--depth", "3"]),
    (
        "persist_interval",
        &["persist-interval", "--x", "w", "--y", "[t]", "--center", "t", "--rho", "1/2", "--sign", "+"],
    ),
    ("member", &["member", "--point", r#"{"center":"t","rho":"1/2"}"#, "--f", "w", "--f", "[t^2]", "--g", "[t]"]),
    (
        "cover_check",
        &[
            "cover-check",
            "--subset",
            r#"{"fs":["w"],"g":"[t]"}"#,
            "--subset",
            r#"{"fs":["[t]"],"g":"w"}"#,
            "--point",
            r#"{"center":"t","rho":"1/2"}"#,
            "--point",
            r#"{"center":"t^2","rho":"3"}"#,
        ],
    ),
    (
        "ideal_reduce",
        &[
            "ideal-reduce",
            "--gen",
            "T1 - t + t^2*T1^2",
            "--weights",
            "0",
            "--x",
            "T1^2 + T1 + 1",
            "--varpi",
            "1 + t",
            "--target",
            "2",
        ],
    ),
    ("divide_laurent", &["divide", "--fixture", "@ideal.json", "--y", "T1^3*T2 + T2^3"]),
    ("divide_padic", &["divide", "--domain", "padic", "--gen", "T1 - 2", "--weights", "0", "--y", "T1^3 + (1/3)"]),
    ("afg_witness", &["afg-witness", "--gen", "T1 - t", "--gen", "T2^2 - t", "--weights", "0,1/2", "--probes", "20"]),
    ("err_parse", &["eval-norm", "--point", r#"{"center":"t","rho":"1/2"}"#, "--elem", "w - [t"]),
    ("err_value_group", &["afg-witness", "--gen", "T1", "--weights", "~r"]),
    ("err_config", &["--prec-w", "9", "--backend", "mixed", "classify", "--point", r#"{"center":"t","rho":"1"}"#]),
    ("err_usage", &["classify"]),
    ("err_indeterminate", &["same-point", "--u", "t", "--v", "t + O(t^3)", "--rho", "5"]),
];

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).parent().unwrap().join("cli/tests/golden")
}

pub fn args_for(case: &[&str]) -> Vec<String> {
    let dir = golden_dir();
    std::iter::once("robba".to_string())
        .chain(case.iter().map(|a| match a.strip_prefix('@') {
            Some(file) => dir.join(file).display().to_string(),
            None => a.to_string(),
        }))
        .collect()
}

/// Output of one case as stored on disk; the absolute fixture directory is
/// replaced so files do not depend on the checkout location.
pub fn render_case(case: &[&str]) -> (i32, String) {
    let (code, out) = robba_cli::run(&args_for(case));
    (code, format!("{out}\n").replace(&golden_dir().display().to_string(), "<golden>"))
}

/// Runs every case twice and compares both runs with the stored file.
pub fn check_golden() -> Result<usize, String> {
    let mut bad = Vec::new();
    for (name, case) in CASES {
        let first = render_case(case);
        let second = render_case(case);
        if first != second {
            bad.push(format!("{name}: output differs between runs"));
            continue;
        }
        let path = golden_dir().join(format!("{name}.json"));
        match std::fs::read_to_string(&path) {
            Ok(expected) if expected == first.1 => {}
            Ok(_) => bad.push(format!("{name} (exit {}): differs from golden file\n{}", first.0, first.1)),
            Err(e) => bad.push(format!("{name}: {}: {e}", path.display())),
        }
    }
    if bad.is_empty() {
        Ok(CASES.len())
    } else {
        Err(bad.join("\n"))
    }
}

fn leaf(r: &mut ChaCha8Rng) -> Expr {
    match r.gen_range(0..3) {
        0 => Expr::Int(r.gen_range(0..50)),
        1 => {
            let d = r.gen_range(2..9);
            let mut n = r.gen_range(-20..20);
            while n % d == 0 {
                n += 1;
            }
            Expr::Rational(Q::new(n, d))
        }
        _ => Expr::Ident(["t", "g", "w", "p", "T1", "T2"][r.gen_range(0..6)].to_string()),
    }
}

fn exponent(r: &mut ChaCha8Rng) -> Q {
    let d = [1, 1, 2, 3, 4][r.gen_range(0..5)];
    Q::new(r.gen_range(-6..7), d)
}

fn random_expr(r: &mut ChaCha8Rng, depth: u32) -> Expr {
    if depth == 0 {
        return leaf(r);
    }
    let sub = |r: &mut ChaCha8Rng| Box::new(random_expr(r, depth - 1));
    match r.gen_range(0..9) {
        0 => leaf(r),
        1 => Expr::Neg(sub(r)),
        2 => Expr::Add(sub(r), sub(r)),
        3 => Expr::Sub(sub(r), sub(r)),
        4 => Expr::Mul(sub(r), sub(r)),
        5 => Expr::Pow(sub(r), exponent(r)),
        6 => Expr::Bracket(sub(r)),
        7 => Expr::BigO(sub(r)),
        _ => Expr::Mul(sub(r), Box::new(Expr::Pow(Box::new(leaf(r)), exponent(r)))),
    }
}

/// Prints `n` random expressions, parses each, prints again and reparses;
/// both the text and the tree must be stable.
pub fn check_round_trip(n: usize, seed: u64) -> Result<usize, String> {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..n {
        let text = random_expr(&mut r, 1 + (i % 5) as u32).to_string();
        let parsed = parse(&text).map_err(|e| format!("case {i}: {text:?}: {e}"))?.strip();
        let reprinted = parsed.to_string();
        if reprinted != text {
            return Err(format!("case {i}: {text:?} reprints as {reprinted:?}"));
        }
        let reparsed = parse(&reprinted).map_err(|e| format!("case {i}: {reprinted:?}: {e}"))?.strip();
        if reparsed != parsed {
            return Err(format!("case {i}: {text:?} does not reparse to the same tree"));
        }
    }
    Ok(n)
}
