use std::io::Write;
use std::process::Command;

use serde_json::Value;
use ultranorm::{run, Io};

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn invoke_with(args: &[&str], stdin: &str, max_enum: Option<u64>) -> Outcome {
    let mut input = stdin.as_bytes();
    let mut stdout = Vec::new();
    let mut stderr = Vec::new();
    let mut io = Io {
        stdin: &mut input,
        stdout: &mut stdout,
        stderr: &mut stderr,
        max_enum,
    };
    let argv = std::iter::once("ultranorm").chain(args.iter().copied());
    let code = run(argv, &mut io);
    Outcome {
        code,
        stdout: String::from_utf8(stdout).unwrap(),
        stderr: String::from_utf8(stderr).unwrap(),
    }
}

fn invoke(args: &[&str]) -> Outcome {
    invoke_with(args, "", None)
}

fn json(out: &Outcome) -> Value {
    serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", out.stdout))
}

#[test]
fn documented_examples() {
    let out = invoke(&[
        "norm", "--field", "padic:3", "--norm", "one", "--vec", "9,1/3",
    ]);
    assert_eq!((out.code, out.stdout.trim()), (0, r#"{"value":"28/9"}"#));

    let out = invoke(&["enumerate", "--q", "2", "--n", "2", "--norm", "one"]);
    assert_eq!(out.code, 0);
    assert!(out
        .stdout
        .starts_with(r#"{"isometries":8,"axial":8,"formula":8,"match":true"#));

    let out = invoke(&[
        "between", "--field", "gf:3", "--x", "0,0", "--z", "0,1", "--y", "1,1",
    ]);
    assert_eq!((out.code, out.stdout.trim()), (0, r#"{"between":true}"#));
}

#[test]
fn distance_and_segment() {
    let out = invoke(&[
        "distance", "--field", "gf:3", "--x", "0,1,2", "--y", "0,2,2",
    ]);
    assert_eq!(json(&out)["value"], "1");

    let out = invoke(&["segment", "--field", "padic:3", "--x", "1,0", "--y", "0,1"]);
    let v = json(&out);
    assert_eq!(v["k"], 2);
    assert_eq!(
        v["segment"],
        serde_json::json!([["1", "0"], ["0", "0"], ["1", "1"], ["0", "1"]])
    );

    let out = invoke(&[
        "minimize", "--field", "padic:3", "--a", "0,0", "--c", "9,1/3",
    ]);
    let v = json(&out);
    assert_eq!(v["minimum"], "28/9");
    assert_eq!(v["witnesses"].as_array().unwrap().len(), 4);
}

#[test]
fn negative_scalars_are_not_flags() {
    let out = invoke(&["norm", "--field", "padic:3", "--vec", "-9,1/3"]);
    assert_eq!(json(&out)["value"], "28/9");
}

#[test]
fn exit_codes() {
    let out = invoke(&["norm", "--field", "padic:3", "--vec", "9,abc"]);
    assert_eq!(out.code, 1);
    let v = json(&out);
    assert_eq!(v["error"]["kind"], "parse");
    assert!(v["error"]["message"].as_str().unwrap().contains("abc"));

    let out = invoke(&["norm", "--field", "padic:3", "--vec", "9", "--bogus"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("--bogus"));

    let out = invoke(&["frobnicate"]);
    assert_eq!(out.code, 2);

    let out = invoke(&["norm", "--field", "gf:6", "--vec", "1"]);
    assert_eq!(out.code, 2);

    let out = invoke(&[
        "norm",
        "--field",
        "padic:3",
        "--norm",
        "weighted-sup",
        "--vec",
        "1",
    ]);
    assert_eq!(out.code, 2);

    let out = invoke(&["distance", "--field", "padic:3", "--x", "1,0", "--y", "1"]);
    assert_eq!(out.code, 1);
    assert_eq!(json(&out)["error"]["kind"], "dimension-mismatch");

    assert_eq!(invoke(&["--help"]).code, 0);
}

#[test]
fn caps_from_flag_and_environment() {
    let args = ["segment", "--field", "gf:2", "--x", "0,0,0", "--y", "1,1,1"];
    assert_eq!(invoke(&args).code, 0);
    let out = invoke_with(&args, "", Some(4));
    assert_eq!(out.code, 1);
    assert_eq!(json(&out)["error"]["kind"], "enumeration-too-large");

    let out = invoke(&["enumerate", "--q", "2", "--n", "4"]);
    assert_eq!(out.code, 1);
    let out = invoke_with(
        &["enumerate", "--q", "2", "--n", "4", "--centred"],
        "",
        Some(16),
    );
    assert_eq!(out.code, 0);
    // 4! * 1^4
    assert_eq!(json(&out)["isometries"], 24);
}

#[test]
fn counterexample_pipeline() {
    let out = invoke(&[
        "counterexample",
        "--field",
        "padic:3",
        "--e0",
        "1,0",
        "--v0",
        "1/3,0",
    ]);
    assert_eq!(out.code, 0);
    let probes = out.stdout.clone();
    assert_eq!(json(&out)["pairs"].as_array().unwrap().len(), 49);

    let out = invoke_with(&["verify", "--probes", "-", "--norm", "sup"], &probes, None);
    let v = json(&out);
    assert_eq!(v["pass"], true);
    assert_eq!(v["distance_violations"].as_array().unwrap().len(), 0);

    let out = invoke_with(&["verify", "--probes", "-", "--norm", "one"], &probes, None);
    assert_eq!(json(&out)["pass"], false);

    let out = invoke_with(&["decompose", "--probes", "-"], &probes, None);
    assert_eq!(out.code, 1);
    let v = json(&out);
    assert_eq!(v["error"]["kind"], "decomposition-failure");
    assert!(v["error"]["probe"].is_array());

    let out = invoke(&[
        "counterexample",
        "--field",
        "gf:3",
        "--e0",
        "1,0",
        "--v0",
        "2,0",
    ]);
    assert_eq!(json(&out)["error"]["kind"], "hypothesis");
}

#[test]
fn probe_files_round_trip_through_decompose() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    // the coordinate swap on GF(2)^2
    write!(
        file,
        r#"{{"field":"gf:2","n":2,"complete":true,"pairs":[
            [["0","0"],["0","0"]],[["0","1"],["1","0"]],
            [["1","0"],["0","1"]],[["1","1"],["1","1"]]]}}"#
    )
    .unwrap();
    let path = file.path().to_str().unwrap();

    let v = json(&invoke(&["verify", "--probes", path]));
    assert_eq!(v["pass"], true);
    assert_eq!(v["surjective"], true);

    let v = json(&invoke(&["decompose", "--probes", path]));
    assert_eq!(
        v,
        serde_json::json!({
            "field": "gf:2",
            "sigma": [1, 0],
            "taus": [{"table": ["0", "1"]}, {"table": ["0", "1"]}],
            "translation": ["0", "0"],
        })
    );

    let out = invoke(&["decompose", "--probes", "/nonexistent/probes.json"]);
    assert_eq!(
        (out.code, json(&out)["error"]["kind"].as_str()),
        (1, Some("io"))
    );
}

#[test]
fn oracle_subcommands() {
    let v = json(&invoke(&["check-betweenness", "--q", "3", "--n", "2"]));
    assert_eq!(v["triples"], 729);
    assert_eq!(v["mismatches"], 0);

    let v = json(&invoke(&[
        "enumerate",
        "--q",
        "3",
        "--n",
        "2",
        "--centred",
        "--jobs",
        "2",
    ]));
    assert_eq!(v["isometries"], 8);
    assert_eq!(v["match"], true);

    let v = json(&invoke(&[
        "enumerate",
        "--q",
        "2",
        "--n",
        "2",
        "--norm",
        "sup",
    ]));
    assert_eq!(v["isometries"], 24);
    assert_eq!(v["axial"], 8);
    assert!(!v["non_axial_witnesses"].as_array().unwrap().is_empty());

    for field in ["padic:5", "gf:7", "trivial:q"] {
        for norm in ["one", "sup"] {
            let v = json(&invoke(&[
                "check-axioms",
                "--field",
                field,
                "--norm",
                norm,
                "--samples",
                "100",
            ]));
            assert_eq!(v["pass"], true, "{field} {norm}: {v}");
        }
    }
}

#[test]
fn outputs_are_deterministic() {
    let args = [
        "enumerate",
        "--q",
        "2",
        "--n",
        "3",
        "--norm",
        "sup",
        "--centred",
        "--cap",
        "8",
        "--jobs",
        "3",
    ];
    let a = invoke(&args).stdout;
    let b = invoke(&args).stdout;
    assert_eq!(a, b);
    let args = [
        "check-axioms",
        "--field",
        "padic:3",
        "--samples",
        "50",
        "--seed",
        "9",
    ];
    assert_eq!(invoke(&args).stdout, invoke(&args).stdout);
}

#[test]
fn text_format() {
    let out = invoke(&[
        "--format", "text", "norm", "--field", "padic:3", "--vec", "9,1/3",
    ]);
    assert_eq!(out.stdout.trim(), "value: 28/9 (~3.111111)");
    let out = invoke(&[
        "norm", "--format", "text", "--field", "padic:3", "--vec", "1/3",
    ]);
    assert_eq!(out.stdout.trim(), "value: 3");
}

#[test]
fn binary_reads_environment() {
    let exe = env!("CARGO_BIN_EXE_ultranorm");
    let out = Command::new(exe)
        .args(["segment", "--field", "gf:2", "--x", "0,0", "--y", "1,1"])
        .env("ULTRANORM_MAX_ENUM", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = Command::new(exe)
        .args(["norm", "--field", "padic:3", "--vec", "9,1/3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8_lossy(&out.stdout).trim(),
        r#"{"value":"28/9"}"#
    );
}
