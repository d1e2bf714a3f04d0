use std::process::Command;

use gkm_cycle::fixtures::{fixture, Fixture, FIXTURE_NAMES};
use gkm_cycle::rep::RepJson;
use gkm_cycle_cli::{run_with, verify, Status, VerifyOptions};
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("gkm-cycle").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn betti_numbers() {
    assert_eq!(run(&["betti", "--fixture", "loop-gr"]), (0, "1 1 2\n".into(), String::new()));
    assert_eq!(run(&["betti", "--fixture", "fl3", "--format", "json"]).1, "[1,2,2,1]\n");
}

#[test]
fn moment_graph_json() {
    let (code, out, _) = run(&["moment-graph", "--fixture", "loop-gr", "--format", "json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["vertices"].as_array().unwrap().len(), 4);
    assert_eq!(v["edges"].as_array().unwrap().len(), 5);
}

#[test]
fn moment_graph_dot_and_projection() {
    let (code, out, _) = run(&["moment-graph", "--fixture", "loop-gr", "--format", "dot"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("digraph"));
    assert_eq!(out.matches("->").count(), 5);
    assert!(out.contains("e3-e1-d"));
    let (_, projected, _) = run(&["moment-graph", "--fixture", "loop-gr", "--format", "dot", "--project-delta"]);
    assert!(!projected.contains("-d\""));
}

#[test]
fn unique_basis_table() {
    let (code, out, _) = run(&["basis", "--fixture", "loop-gr", "--unique"]);
    assert_eq!(code, 0);
    assert!(out.contains("theta4\n  p1\t0\n  p2\t0\n  p3\t0\n  p4\te1^2 - e1*e2 - e1*e3 + e2*e3\n"));
    assert!(out.contains("  p4\t2*e1 - e2 - e3 + d\n"));
}

#[test]
fn explicit_euler_table_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("loop.json");
    std::fs::write(&path, fixture("loop-gr").unwrap().euler_table.unwrap()).unwrap();
    let p = path.to_str().unwrap();
    let with_file = run(&["basis", "--fixture", "loop-gr", "--unique", "--euler-table", p, "--format", "json"]);
    let bundled = run(&["basis", "--fixture", "loop-gr", "--unique", "--format", "json"]);
    assert_eq!(with_file, bundled);
    std::fs::write(&path, "not json").unwrap();
    assert_eq!(run(&["basis", "--fixture", "loop-gr", "--unique", "--euler-table", p]).0, 2);
}

#[test]
fn input_files_and_out() {
    let dir = tempfile::tempdir().unwrap();
    let f = fixture("loop-gr").unwrap();
    let input = dir.path().join("rep.json");
    std::fs::write(&input, serde_json::to_string(&RepJson::new(&f.rep, &f.e)).unwrap()).unwrap();
    let out = dir.path().join("betti.txt");
    let (code, stdout, _) = run(&["betti", "--input", input.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!((code, stdout.as_str()), (0, ""));
    assert_eq!(std::fs::read_to_string(&out).unwrap(), "1 1 2\n");
    std::fs::write(&input, r#"{"n": 2, "segments": [{"i": 1, "ell": 1}], "e": [1]}"#).unwrap();
    assert_eq!(run(&["betti", "--input", input.to_str().unwrap()]).0, 2);
}

#[test]
fn bad_arguments_exit_two() {
    for args in [
        &["frobnicate"][..],
        &["betti"],
        &["betti", "--fixture", "nope"],
        &["betti", "--fixture", "loop-gr", "--format", "svg"],
        &["betti", "--fixture", "loop-gr", "--format", "dot"],
        &["betti", "--fixture", "loop-gr", "--input", "x.json"],
        &["verify", "--fixture", "loop-gr", "--seed", "minus one"],
        &["betti", "--input", "/nonexistent/rep.json"],
    ] {
        assert_eq!(run(args).0, 2, "{args:?}");
    }
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn describe_and_fixed_points() {
    let (code, out, _) = run(&["describe", "--fixture", "loop-gr"]);
    assert_eq!(code, 0);
    assert!(out.contains("cocharacter  (1;1,3,4)\n"));
    let (_, json, _) = run(&["describe", "--fixture", "ex47", "--format", "json"]);
    let v: Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["grading"]["D"], 2);
    let (_, pts, _) = run(&["fixed-points", "--fixture", "loop-gr", "--format", "json"]);
    let v: Value = serde_json::from_str(&pts).unwrap();
    assert_eq!(v[3]["triples"].as_array().unwrap().len(), 2);
    let (_, list, _) = run(&["examples"]);
    for name in FIXTURE_NAMES {
        assert!(list.contains(name));
    }
}

#[test]
fn verify_passes_on_every_fixture() {
    for name in FIXTURE_NAMES.iter().copied().chain(["approx:2,1,2", "approx:2,0,2"]) {
        let (code, out, err) = run(&["verify", "--fixture", name]);
        assert_eq!(code, 0, "{name}\n{out}{err}");
        assert!(!out.contains("FAIL"));
    }
}

/// Paths to every number in a JSON document, including numbers written as
/// strings.
fn numeric_leaves(v: &Value, path: &mut Vec<Value>, out: &mut Vec<Vec<Value>>) {
    match v {
        Value::Number(_) => out.push(path.clone()),
        Value::String(s) if s.parse::<i64>().is_ok() => out.push(path.clone()),
        Value::Array(a) => {
            for (k, x) in a.iter().enumerate() {
                path.push(Value::from(k));
                numeric_leaves(x, path, out);
                path.pop();
            }
        }
        Value::Object(o) => {
            for (k, x) in o {
                path.push(Value::from(k.as_str()));
                numeric_leaves(x, path, out);
                path.pop();
            }
        }
        _ => {}
    }
}

fn bump(doc: &Value, path: &[Value]) -> String {
    let mut doc = doc.clone();
    let mut v = &mut doc;
    for step in path {
        v = match step {
            Value::String(k) => &mut v[k.as_str()],
            Value::Number(n) => &mut v[n.as_u64().unwrap() as usize],
            _ => unreachable!(),
        };
    }
    *v = match v {
        Value::Number(n) => Value::from(n.as_i64().unwrap() + 1),
        Value::String(s) => Value::from((s.parse::<i64>().unwrap() + 1).to_string()),
        _ => unreachable!(),
    };
    serde_json::to_string_pretty(&doc).unwrap()
}

/// Each golden document with one number changed, sampled evenly, plus a
/// truncated copy.
fn corruptions(text: &str, samples: usize) -> Vec<String> {
    let doc: Value = serde_json::from_str(text).unwrap();
    let mut leaves = Vec::new();
    numeric_leaves(&doc, &mut Vec::new(), &mut leaves);
    let step = (leaves.len() / samples).max(1);
    let mut out: Vec<String> = leaves.iter().step_by(step).map(|p| bump(&doc, p)).collect();
    out.push(text[..text.len() / 2].to_string());
    out
}

fn fails(f: &Fixture) -> bool {
    let r = verify(f, &VerifyOptions::default());
    r.checks.iter().any(|(_, s)| matches!(s, Status::Fail(_)))
}

#[test]
fn corrupting_golden_files_is_detected() {
    for name in FIXTURE_NAMES {
        let f = fixture(name).unwrap();
        assert!(!fails(&f), "{name} fails unmodified");
        let samples = if name == "loop-gr" { 1000 } else { 12 };
        type Slot = fn(&mut Fixture) -> &mut Option<String>;
        let slots: [(&str, Slot); 3] = [
            ("graph", |f| &mut f.golden_graph),
            ("basis", |f| &mut f.golden_basis),
            ("euler", |f| &mut f.euler_table),
        ];
        for (kind, slot) in slots {
            let Some(text) = slot(&mut f.clone()).clone() else { continue };
            for (k, bad) in corruptions(&text, samples).into_iter().enumerate() {
                let mut g = f.clone();
                *slot(&mut g) = Some(bad);
                assert!(fails(&g), "{name} {kind} corruption {k} not detected");
            }
        }
    }
}

fn binary(args: &[&str], threads: &str) -> (Option<i32>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_gkm-cycle")).args(args).env("GKM_CYCLE_THREADS", threads).output().unwrap();
    (out.status.code(), out.stdout)
}

#[test]
fn output_is_stable_across_thread_counts() {
    for args in [
        &["basis", "--fixture", "fl3a", "--unique", "--format", "json"][..],
        &["moment-graph", "--fixture", "ex47", "--format", "json"],
        &["verify", "--fixture", "fl3"],
    ] {
        let one = binary(args, "1");
        assert_eq!(one.0, Some(0));
        assert_eq!(binary(args, "4"), one, "{args:?}");
        assert_eq!(binary(args, "0"), one, "{args:?}");
    }
    assert_eq!(binary(&["betti", "--fixture", "loop-gr"], "many").0, Some(2));
}
