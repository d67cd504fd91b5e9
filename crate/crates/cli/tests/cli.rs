use std::process::{Command, Output};

use cdalg::Element;
use serde_json::Value;

fn cdalg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cdalg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(stdout(o).trim()).unwrap()
}

#[test]
fn table_entries() {
    let o = cdalg(&["table", "--level", "1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["table"][1][1], "-e0");
    let o = cdalg(&["table", "--level", "2"]);
    assert_eq!(json(&o)["table"][1][2], "e3");
    let csv = stdout(&cdalg(&["table", "--level", "2", "--format", "csv"]));
    assert_eq!(csv.lines().nth(2).unwrap(), "e1,e1,-e0,e3,-e2");
    assert_eq!(code(&cdalg(&["table", "--level", "9"])), 1);
    assert_eq!(code(&cdalg(&["table", "--level", "7"])), 1);
}

#[test]
fn exp_quarter_turn() {
    let o = cdalg(&[
        "exp",
        "--level",
        "3",
        "--elem",
        r#"{"level":3,"coeffs":[0,1.5708,0,0,0,0,0,0]}"#,
    ]);
    assert_eq!(code(&o), 0);
    let e: Element = serde_json::from_value(json(&o)).unwrap();
    assert!(e.distance(&Element::basis(3, 1)) < 1e-4);
}

#[test]
fn zerodiv_level_four() {
    let o = cdalg(&["zerodiv", "--level", "4"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let u: Element = serde_json::from_value(v["pair"]["u"].clone()).unwrap();
    let w: Element = serde_json::from_value(v["pair"]["v"].clone()).unwrap();
    assert!((&u * &w).norm() <= 1e-12);
    assert!(v["pair"]["product_norm"].as_f64().unwrap() <= 1e-12);
    assert!(json(&cdalg(&["zerodiv", "--level", "3"]))["pair"].is_null());
}

#[test]
fn winding_examples() {
    let o = cdalg(&[
        "winding",
        "--level",
        "2",
        "--k",
        "-2",
        "--dir",
        "e1",
        "--samples",
        "1024",
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "-2");
    let o = cdalg(&[
        "winding", "--level", "3", "--k", "3", "--dir", "e5", "--format", "plain",
    ]);
    assert_eq!(stdout(&o).trim(), "3");
    // undersampled loops cannot be resolved
    assert_eq!(
        code(&cdalg(&[
            "winding",
            "--level",
            "2",
            "--k",
            "5",
            "--dir",
            "e1",
            "--samples",
            "8"
        ])),
        1
    );
}

#[test]
fn element_round_trip() {
    let x = r#"{"level":2,"coeffs":[0.1,-0.30000000000000004,2.5e-17,1e300]}"#;
    let o = cdalg(&["eval", "--op", "conj", "--elem", x]);
    let once: Element = serde_json::from_value(json(&o)).unwrap();
    let text = stdout(&o);
    let o2 = cdalg(&["eval", "--op", "conj", "--elem", text.trim()]);
    let twice: Element = serde_json::from_value(json(&o2)).unwrap();
    assert_eq!(twice, serde_json::from_str::<Element>(x).unwrap());
    assert_eq!(once.conjugate(), twice);
}

#[test]
fn deterministic_output() {
    let args = ["props", "--level", "2", "--trials", "50", "--seed", "17"];
    assert_eq!(cdalg(&args).stdout, cdalg(&args).stdout);
    let search = [
        "rootsearch",
        "--seed",
        "5",
        "--generalized",
        r#"{"level":2,"degree":3,"terms":[{"coeff":{"level":2,"coeffs":[0,0.5,0,0]},"exponent":-2}]}"#,
    ];
    let a = cdalg(&search);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, cdalg(&search).stdout);
}

#[test]
fn props_passes_and_fails() {
    let o = cdalg(&["props", "--level", "3", "--trials", "100"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["passed"], true);
    let o = cdalg(&[
        "props",
        "--level",
        "2",
        "--trials",
        "20",
        "--tol.exp_law_witness",
        "10",
    ]);
    assert_eq!(code(&o), 4);
    assert_eq!(json(&o)["passed"], false);
    assert_eq!(
        code(&cdalg(&["props", "--level", "2", "--tol.nonsense", "1"])),
        1
    );
}

#[test]
fn rootsearch_outcomes() {
    let o = cdalg(&[
        "rootsearch",
        "--generalized",
        r#"{"level":2,"degree":2,"terms":[{"coeff":{"level":2,"coeffs":[1,0,0,0]},"exponent":-1}]}"#,
    ]);
    assert_eq!(code(&o), 0);
    assert!(json(&o)["residual"].as_f64().unwrap() <= 1e-8);
    let o = cdalg(&[
        "rootsearch",
        "--level",
        "2",
        "--commutator",
        "e1",
        "--starts",
        "2",
        "--max-iter",
        "5",
    ]);
    assert_eq!(code(&o), 2);
    assert!(json(&o)["min_sampled_residual"].as_f64().unwrap() >= 1.0 - 1e-9);
    let o = cdalg(&[
        "rootsearch",
        "--poly",
        r#"{"level":2,"direction":[0,1,0,0],"coeffs":[[1,0],[0,0]],"degree":2}"#,
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["roots"].as_array().unwrap().len(), 2);
}

#[test]
fn exit_codes_for_error_classes() {
    // usage and parse errors
    assert_eq!(code(&cdalg(&["frobnicate"])), 1);
    assert_eq!(code(&cdalg(&["exp", "--elem", "{not json"])), 1);
    assert_eq!(
        code(&cdalg(&[
            "exp",
            "--elem",
            r#"{"level":2,"coeffs":[1,2,3]}"#
        ])),
        1
    );
    assert_eq!(
        code(&cdalg(&[
            "exp",
            "--level",
            "3",
            "--elem",
            r#"{"level":2,"coeffs":[1,2,3,4]}"#
        ])),
        1
    );
    assert_eq!(
        code(&cdalg(&["exp", "--elem", "@/nonexistent/file.json"])),
        1
    );
    assert_eq!(code(&cdalg(&["props", "--trials", "0"])), 1);
    assert_eq!(
        code(&cdalg(&[
            "root",
            "--k",
            "0",
            "--elem",
            r#"{"level":1,"coeffs":[1,0]}"#
        ])),
        1
    );
    assert_eq!(code(&cdalg(&["table", "--tol.root", "1"])), 1);
    let constant =
        r#"{"level":1,"degree":2,"terms":[{"coeff":{"level":1,"coeffs":[0,0]},"exponent":-1}]}"#;
    assert_eq!(code(&cdalg(&["rootsearch", "--generalized", constant])), 1);
    let growing =
        r#"{"level":1,"degree":2,"terms":[{"coeff":{"level":1,"coeffs":[1,0]},"exponent":1}]}"#;
    assert_eq!(code(&cdalg(&["rootsearch", "--generalized", growing])), 1);
    let bad_degree = r#"{"level":2,"direction":[0,1,0,0],"coeffs":[[1,0]],"degree":2}"#;
    assert_eq!(code(&cdalg(&["rootsearch", "--poly", bad_degree])), 1);
    // domain errors
    let zero = r#"{"level":2,"coeffs":[0,0,0,0]}"#;
    assert_eq!(
        code(&cdalg(&["eval", "--op", "inverse", "--elem", zero])),
        3
    );
    let neg = r#"{"level":2,"coeffs":[-4,0,0,0]}"#;
    assert_eq!(code(&cdalg(&["log", "--elem", neg])), 3);
    assert_eq!(code(&cdalg(&["root", "--k", "2", "--elem", neg])), 3);
    assert_eq!(
        code(&cdalg(&[
            "root",
            "--k",
            "2",
            "--elem",
            neg,
            "--fallback",
            "e3"
        ])),
        0
    );
    let off = r#"{"level":2,"direction":[0,1,0.5,0],"coeffs":[[1,0]],"degree":1}"#;
    assert_eq!(code(&cdalg(&["rootsearch", "--poly", off])), 3);
    assert_eq!(
        code(&cdalg(&[
            "winding",
            "--level",
            "2",
            "--k",
            "1",
            "--dir",
            r#"{"level":2,"coeffs":[1,0,0,0]}"#
        ])),
        3
    );
    // non-convergence
    assert_eq!(
        code(&cdalg(&[
            "rootsearch",
            "--level",
            "1",
            "--commutator",
            "e1",
            "--starts",
            "1",
            "--max-iter",
            "2"
        ])),
        2
    );
}

#[test]
fn k_root_readings_differ() {
    let x = r#"{"level":1,"coeffs":[-1,1]}"#;
    let polar: Element =
        serde_json::from_value(json(&cdalg(&["root", "--k", "2", "--elem", x]))).unwrap();
    let literal: Element = serde_json::from_value(json(&cdalg(&[
        "root",
        "--k",
        "2",
        "--elem",
        x,
        "--reading",
        "literal",
    ])))
    .unwrap();
    let target: Element = serde_json::from_str(x).unwrap();
    assert!(polar.powi(2).unwrap().distance(&target) < 1e-12);
    assert!(literal.powi(2).unwrap().distance(&target) > 0.1);
}

#[test]
fn help_and_plain_digits() {
    assert_eq!(code(&cdalg(&["--help"])), 0);
    let o = cdalg(&[
        "eval",
        "--op",
        "norm",
        "--elem",
        r#"{"level":1,"coeffs":[1,1]}"#,
        "--format",
        "plain",
    ]);
    assert_eq!(stdout(&o).trim(), "1.41421");
}
