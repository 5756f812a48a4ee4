//! Fixed invocations whose JSON output is checked byte for byte.
//! Regenerate with `UPDATE_GOLDEN=1 cargo test -p robba-cli --test golden`.

mod common;

use std::process::Command;

use common::{args_for, golden_dir, render_case, CASES};

#[test]
fn golden_outputs() {
    assert_eq!(CASES.len(), 25);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        for (name, case) in CASES {
            std::fs::write(golden_dir().join(format!("{name}.json")), render_case(case).1).unwrap();
        }
    }
    if let Err(e) = common::check_golden() {
        panic!("{e}");
    }
    for (name, case) in CASES {
        let (code, _) = render_case(case);
        assert_eq!(code != 0, name.starts_with("err_"), "{name}: unexpected exit {code}");
    }
}
#[test]
fn binary_matches_library() {
    let args = args_for(CASES[5].1);
    let out = Command::new(env!("CARGO_BIN_EXE_robba")).args(&args[1..]).output().unwrap();
    let (code, text) = robba_cli::run(&args);
    assert_eq!(out.status.code(), Some(code));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), format!("{text}\n"));
}

#[test]
fn exit_codes() {
    let code = |c: &[&str]| robba_cli::run(&args_for(c)).0;
    assert_eq!(code(CASES[0].1), 0);
    assert_eq!(code(&["classify"]), 2);
    assert_eq!(code(&["eval-norm", "--point", "{", "--elem", "w"]), 2);
    assert_eq!(code(&["--prec-w", "9", "--backend", "mixed", "classify", "--point", r#"{"center":"t","rho":"1"}"#]), 4);
    assert_eq!(code(&["same-point", "--u", "t", "--v", "t + O(t^3)", "--rho", "5"]), 3);
}
