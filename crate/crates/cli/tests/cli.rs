use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const K3: &str = "0 1\n1 2\n0 2\n";
const DISJOINT: &str = "0 1\n2 3\n";
const SUBCOMMANDS: [&str; 7] =
    ["matchings", "hyperplanes", "regions", "charpoly", "skeleton", "orientations", "verify"];

fn graph_file(name: &str, text: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli-inputs");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn run(args: &[&str], input: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_matcharr")).args(args).arg("--input").arg(input).output().unwrap()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn validate(subcommand: &str, value: &Value) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{subcommand}.schema.json"));
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(value).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{subcommand}: {errors:?}");
}

#[test]
fn verify_triangle() {
    let out = run(&["verify", "--seed", "0"], &graph_file("k3.txt", K3));
    assert_eq!(out.status.code(), Some(0));
    let report = json_of(&out);
    assert_eq!(report["regions"], 24);
    assert_eq!(report["orientations"], 24);
    assert_eq!(report["verdict"], true);
    validate("verify", &report);
}

#[test]
fn charpoly_constant_term_first() {
    let out = run(&["charpoly"], &graph_file("disjoint.txt", DISJOINT));
    assert_eq!(out.status.code(), Some(0));
    let chi = json_of(&out);
    assert_eq!(chi["coefficients"], serde_json::json!([1, -2, 1]));
    assert_eq!(chi["regions"], 4);

    let out = run(&["charpoly", "--format", "text"], &graph_file("k3.txt", K3));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "t^3 - 6t^2 + 11t - 6\nregions 24\n");
}

#[test]
fn every_output_matches_its_schema() {
    let graphs = [
        ("edge.txt", "a b\n"),
        ("k3.txt", K3),
        ("disjoint.txt", DISJOINT),
        ("p4.txt", "0 1\n1 2\n2 3\n"),
        ("c4.txt", "0 1\n1 2\n2 3\n3 0\n"),
    ];
    for (name, text) in graphs {
        let input = graph_file(name, text);
        for sub in SUBCOMMANDS {
            let out = run(&[sub], &input);
            assert_eq!(out.status.code(), Some(0), "{sub} on {name}");
            validate(sub, &json_of(&out));
        }
    }
}

#[test]
fn matchings_are_index_lists() {
    let out = run(&["matchings"], &graph_file("labels.txt", "# path\nx y\n\ny z\n"));
    let v = json_of(&out);
    assert_eq!(v["edges"], serde_json::json!([["x", "y"], ["y", "z"]]));
    assert_eq!(v["matchings"], serde_json::json!([[], [0], [1]]));
}

#[test]
fn skeleton_and_orientations_as_dot() {
    let input = graph_file("disjoint.txt", DISJOINT);
    let dot = String::from_utf8(run(&["skeleton", "--format", "dot"], &input).stdout).unwrap();
    assert!(dot.starts_with("graph skeleton {"));
    assert_eq!(dot.matches(" -- ").count(), 4);
    let dot = String::from_utf8(run(&["orientations", "--format", "dot"], &input).stdout).unwrap();
    assert_eq!(dot.matches("digraph").count(), 4);
}

#[test]
fn bad_input_exits_with_one_line() {
    for (name, text) in [("empty.txt", ""), ("bad.txt", "0 1 2\n"), ("loop.txt", "0 0\n")] {
        let out = run(&["matchings"], &graph_file(name, text));
        assert_eq!(out.status.code(), Some(1), "{name}");
        let err = String::from_utf8(out.stderr).unwrap();
        assert_eq!(err.lines().count(), 1, "{name}: {err}");
        assert!(out.stdout.is_empty());
    }
    let out = Command::new(env!("CARGO_BIN_EXE_matcharr"))
        .args(["matchings", "--input", "/nonexistent/graph"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn caps_are_enforced() {
    let input = graph_file("k3.txt", K3);
    assert_eq!(run(&["matchings", "--max-edges", "2"], &input).status.code(), Some(1));
    assert_eq!(run(&["hyperplanes", "--max-sequences", "5"], &input).status.code(), Some(1));
    assert_eq!(run(&["hyperplanes", "--max-sequences", "6"], &input).status.code(), Some(0));
    assert_eq!(run(&["skeleton", "--format", "dot", "--max-edges", "3"], &input).status.code(), Some(0));
    assert_eq!(run(&["charpoly", "--format", "dot"], &input).status.code(), Some(1));
}

#[test]
fn failed_verdict_exits_with_two() {
    let out = run(&["verify", "--samples", "0"], &graph_file("k3.txt", K3));
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_of(&out)["verdict"], false);
}

#[test]
fn output_is_deterministic() {
    let input = graph_file("paw.txt", "0 1\n1 2\n2 0\n2 3\n");
    for sub in SUBCOMMANDS {
        let outputs: Vec<Vec<u8>> = ["1", "3", "1"]
            .iter()
            .map(|threads| {
                Command::new(env!("CARGO_BIN_EXE_matcharr"))
                    .args([sub, "--seed", "9", "--input"])
                    .arg(&input)
                    .env("RAYON_NUM_THREADS", threads)
                    .output()
                    .unwrap()
                    .stdout
            })
            .collect();
        assert!(outputs.windows(2).all(|w| w[0] == w[1]), "{sub}");
    }
}
