use std::process::{Command, Output};

use serde_json::Value;

fn dirichlet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dirichlet"))
        .args(args)
        .env("NO_COLOR", "1")
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

const LOG3_POLY: &str = r#"{"kind":"poly","terms":[{"n":3,"re":1}]}"#;

#[test]
fn diff_golden() {
    let out = dirichlet(&["diff", "--series", LOG3_POLY]);
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "{\"kind\":\"poly\",\"terms\":[{\"n\":3,\"re\":-1.0986122886681098}]}\n"
    );
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn eval_golden() {
    let v = stdout_json(&dirichlet(&["eval", "--series", r#"{"kind":"poly","terms":[{"n":2,"re":1}]}"#, "--s", "1,0"]));
    assert_eq!(v["re"].as_f64(), Some(0.5));
    assert_eq!(v["im"].as_f64(), Some(0.0));
}

#[test]
fn classify_golden() {
    let v = stdout_json(&dirichlet(&["classify", "--lambda", "0,0", "--space", "zero"]));
    assert_eq!(v["verdict"], "resolvent_point");
    let v = stdout_json(&dirichlet(&["classify", "--lambda", "0,0"]));
    assert_eq!(v["verdict"], "eigenvalue_constant");
    let lambda = format!("{},0", -(7f64.ln()));
    let v = stdout_json(&dirichlet(&["classify", "--lambda", &lambda, "--space", "zero"]));
    assert_eq!(v["verdict"], "eigenvalue");
    assert_eq!(v["n"], 7);
}

#[test]
fn series_output_round_trips() {
    let input = r#"{"kind":"poly","terms":[{"n":2,"re":0.1,"im":-0.3},{"n":5,"re":1e-300},{"n":9,"re":-2.5}]}"#;
    let first = dirichlet(&["diff", "--series", input]);
    let emitted = String::from_utf8(first.stdout).unwrap();
    // the emitted descriptor is accepted again and J undoes D
    let back = dirichlet(&["integrate", "--series", emitted.trim()]);
    let v = stdout_json(&back);
    let original: Value = serde_json::from_str(input).unwrap();
    for (got, want) in v["terms"].as_array().unwrap().iter().zip(original["terms"].as_array().unwrap()) {
        assert_eq!(got["n"], want["n"]);
        let close = |a: &Value, b: &Value| {
            let (a, b) = (a.as_f64().unwrap_or(0.0), b.as_f64().unwrap_or(0.0));
            (a - b).abs() <= 1e-15 * a.abs().max(b.abs())
        };
        assert!(close(&got["re"], &want["re"]) && close(&got["im"], &want["im"]), "{got} vs {want}");
    }
    // identity operator output re-parses to the identical coefficient map
    let same = dirichlet(&["mul", "--series", input, "--other", r#"{"kind":"poly","terms":[{"n":1,"re":1}]}"#]);
    let text = String::from_utf8(same.stdout).unwrap();
    let again = dirichlet(&["mul", "--series", text.trim(), "--other", r#"{"kind":"poly","terms":[{"n":1,"re":1}]}"#]);
    assert_eq!(text, String::from_utf8(again.stdout).unwrap());
}

#[test]
fn output_is_deterministic() {
    let args = ["abscissa", "--series", r#"{"kind":"rule","name":"eta"}"#, "--n", "20000"];
    let a = dirichlet(&args);
    let b = dirichlet(&args);
    assert_eq!(a.stdout, b.stdout);
    let v = stdout_json(&a);
    assert!(v["sigma_c"]["value"].as_f64().unwrap().abs() < 0.05);
    assert!((v["sigma_a"]["value"].as_f64().unwrap() - 1.0).abs() < 0.02);
}

#[test]
fn dynamics_csv() {
    let out = dirichlet(&["dynamics", "--operator", "d", "--series", LOG3_POLY, "--eps", "1", "--k-max", "12", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,value");
    assert_eq!(lines.len(), 13);
    let (k, value) = lines[5].split_once(',').unwrap();
    assert_eq!(k, "5");
    let want = 3f64.ln().powi(5) / (5.0 * 3.0);
    assert!((value.parse::<f64>().unwrap() - want).abs() <= 1e-12 * want);
}

#[test]
fn series_csv_has_header() {
    let out = dirichlet(&["diff", "--series", LOG3_POLY, "--format", "csv"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "n,re,im\n3,-1.0986122886681098,0.0\n");
}

#[test]
fn file_indirection() {
    let dir = std::env::temp_dir().join(format!("dirichlet-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("series.json");
    std::fs::write(&path, LOG3_POLY).unwrap();
    let arg = format!("@{}", path.display());
    let v = stdout_json(&dirichlet(&["diff", "--series", &arg]));
    assert_eq!(v["terms"][0]["re"].as_f64(), Some(-(3f64.ln())));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    // usage errors
    assert_eq!(dirichlet(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(dirichlet(&["eval", "--series", LOG3_POLY]).status.code(), Some(1));
    assert_eq!(dirichlet(&["eval", "--series", LOG3_POLY, "--s", "x,1"]).status.code(), Some(1));
    let bad = dirichlet(&["diff", "--series", r#"{"kind":"poly","terms":[{"n":2,"im":1}]}"#]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("`re`"));
    let rule = dirichlet(&["diff", "--series", r#"{"kind":"rule","name":"ones"}"#]);
    assert_eq!(rule.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&rule.stderr).contains("series.truncate"));
    assert_eq!(dirichlet(&["diff", "--series", "@/nonexistent/file.json"]).status.code(), Some(1));

    // domain and spectral errors
    let j = dirichlet(&["integrate", "--series", r#"{"kind":"poly","terms":[{"n":1,"re":1}]}"#]);
    assert_eq!(j.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&j.stderr).contains("a_1"));
    let lambda = format!("{},0", -(2f64.ln()));
    let r = dirichlet(&["resolvent", "--series", LOG3_POLY, "--lambda", &lambda]);
    assert_eq!(r.status.code(), Some(2));
    assert_eq!(dirichlet(&["bv-check", "--lambda", "0,0"]).status.code(), Some(2));
    assert_eq!(dirichlet(&["reciprocal", "--mu", "0,0"]).status.code(), Some(2));

    assert_eq!(dirichlet(&["--help"]).status.code(), Some(0));
}

#[test]
fn no_color_keeps_stderr_plain() {
    let out = dirichlet(&["integrate", "--series", r#"{"kind":"poly","terms":[{"n":1,"re":1}]}"#]);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.starts_with("error: ") && !err.contains('\x1b'));
}

#[test]
fn remaining_subcommands() {
    let v = stdout_json(&dirichlet(&["seminorm", "--series", r#"{"kind":"poly","terms":[{"n":2,"re":1}]}"#, "--eps", "1"]));
    assert_eq!(v["lower"].as_f64(), Some(0.5));
    assert_eq!(v["upper"].as_f64(), Some(0.5));

    let v = stdout_json(&dirichlet(&["resolvent", "--series", r#"{"kind":"poly","terms":[{"n":2,"re":1}]}"#, "--lambda", "1,0"]));
    assert!((v["terms"][0]["re"].as_f64().unwrap() - 1.0 / (1.0 + 2f64.ln())).abs() < 1e-15);

    let v = stdout_json(&dirichlet(&["bv-check", "--lambda", "1,0", "--n", "2000"]));
    assert_eq!(v["verdict"], "bounded");

    let v = stdout_json(&dirichlet(&["reciprocal", "--mu", "-2,0.5"]));
    assert_eq!(v["consistent"], true);

    let g = r#"{"kind":"poly","terms":[{"n":1,"re":4},{"n":2,"re":3}]}"#;
    let v = stdout_json(&dirichlet(&["volterra", "--symbol", g]));
    assert_eq!(v["matches"], true);
    assert_eq!(v["lhs"], v["rhs"]);
    let v = stdout_json(&dirichlet(&["volterra", "--symbol", g, "--series", LOG3_POLY]));
    assert!((v["terms"][0]["re"].as_f64().unwrap() - 3.0 * 2f64.ln() / 6f64.ln()).abs() < 1e-15);

    let v = stdout_json(&dirichlet(&["dynamics", "--operator", "j", "--series", r#"{"kind":"poly","terms":[{"n":2,"re":1}]}"#]));
    assert_eq!(v["verdict"], "diverges");

    let v = stdout_json(&dirichlet(&["eval", "--series", r#"{"kind":"rule","name":"zeta_shift","k":2,"truncate":100000}"#, "--s", "0"]));
    assert!((v["re"].as_f64().unwrap() - std::f64::consts::PI.powi(2) / 6.0).abs() < 1.1e-5);
}
