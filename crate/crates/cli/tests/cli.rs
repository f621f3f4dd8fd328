use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::{json, Value};

use etale_twist::groupoid::{
    brute_force_isomorphic, make_group_groupoid, make_pair_groupoid, FiniteGroup, FiniteGroupoid, GroupoidFile,
    DEFAULT_ISO_LIMIT,
};
use etale_twist_cli::{run, EXIT_INVALID, EXIT_PARSE, EXIT_PASS};

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("etale-twist").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn cli_json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let (code, out, _) = cli(&all);
    (code, serde_json::from_str(&out).unwrap_or_else(|e| panic!("not JSON ({e}): {out}")))
}

/// Compares stdout with a golden file; `UPDATE_GOLDEN=1` rewrites it.
fn assert_golden(name: &str, actual: &str) {
    let path = golden(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, actual).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "golden mismatch for {name}");
}

fn load_groupoid(path: &Path) -> FiniteGroupoid {
    let file: GroupoidFile = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    FiniteGroupoid::from_file(&file).unwrap()
}

#[test]
fn k0_pair_groupoid_golden() {
    let (code, out, _) = cli(&["k0", &fixture("pair4.json"), &fixture("trivial.json"), "--json"]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(out, "{\"k\":1,\"block_sizes\":[4],\"unit_class\":[4]}\n");
    assert_golden("k0_pair4.json", &out);
}

#[test]
fn k0_klein_twisted_and_untwisted() {
    let (code, v) = cli_json(&["k0", &fixture("klein.json"), &fixture("klein_bilinear.json")]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(v, json!({"k": 1, "block_sizes": [2], "unit_class": [2]}));
    let (code, v) = cli_json(&["k0", &fixture("klein.json")]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(v["k"], 4);
    assert_eq!(v["block_sizes"], json!([1, 1, 1, 1]));
}

#[test]
fn k0_human_output() {
    let (code, out, _) = cli(&["k0", &fixture("klein.json"), &fixture("klein_bilinear.json")]);
    assert_eq!(code, EXIT_PASS);
    assert!(out.contains("K0 = Z^1, blocks [2]"), "{out}");
}

#[test]
fn validate_known_schemas() {
    let cases: Vec<Vec<String>> = vec![
        vec![fixture("pair4.json")],
        vec![fixture("klein_zero.json")],
        vec![fixture("swap.json")],
        vec![fixture("klein_bilinear.json"), "--groupoid".into(), fixture("klein.json")],
        vec![fixture("z3z3_coboundary_path.json"), "--groupoid".into(), fixture("z3z3.json")],
        vec![fixture("sym_inverse2_action.json"), "--semigroup".into(), fixture("sym_inverse2.json")],
    ];
    for case in cases {
        let mut args = vec!["validate"];
        args.extend(case.iter().map(String::as_str));
        let (code, v) = cli_json(&args);
        assert_eq!(code, EXIT_PASS, "{case:?}: {v}");
        assert_eq!(v["valid"], true);
    }
}

#[test]
fn validate_reports_schema() {
    let (_, v) = cli_json(&["validate", &fixture("klein_zero.json")]);
    assert_eq!(v["schema"], "semigroup");
    assert_eq!(v["characters"], 1);
    let (_, v) = cli_json(&["validate", &fixture("swap.json")]);
    assert_eq!(v["schema"], "directed_action");
}

#[test]
fn broken_cocycle_lists_worst_triple() {
    let (code, out, _) = cli(&["validate", &fixture("klein_broken.json"), "--groupoid", &fixture("klein.json"), "--json"]);
    assert_eq!(code, EXIT_INVALID);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["error"]["code"], "IdentityViolation");
    assert_eq!(v["error"]["witness"]["worst"]["triple"].as_array().unwrap().len(), 3);
    assert_golden("validate_klein_broken.json", &out);
}

#[test]
fn parse_failures_exit_three() {
    let (code, v) = cli_json(&["validate", &fixture("malformed.json")]);
    assert_eq!(code, EXIT_PARSE);
    assert_eq!(v["error"]["code"], "InvalidJson");

    let dir = tempfile::tempdir().unwrap();
    let odd = dir.path().join("odd.json");
    std::fs::write(&odd, "{\"colour\": 3}").unwrap();
    let (code, v) = cli_json(&["validate", odd.to_str().unwrap()]);
    assert_eq!(code, EXIT_PARSE);
    assert_eq!(v["error"]["code"], "UnknownSchema");

    let (code, _) = cli_json(&["validate", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(code, EXIT_PARSE);

    let (code, v) = cli_json(&["validate", &fixture("klein_bilinear.json")]);
    assert_eq!(code, EXIT_PARSE);
    assert_eq!(v["error"]["code"], "Usage");

    let (code, v) = cli_json(&["k0", &fixture("klein_bilinear.json")]);
    assert_eq!(code, EXIT_PARSE);
    assert_eq!(v["error"]["code"], "WrongSchema");

    let coboundary_on_unknown = dir.path().join("c.json");
    std::fs::write(&coboundary_on_unknown, r#"{"family":"coboundary","b":{"zz":"1/2"}}"#).unwrap();
    let (code, v) = cli_json(&["k0", &fixture("klein.json"), coboundary_on_unknown.to_str().unwrap()]);
    assert_eq!(code, EXIT_PARSE);
    assert_eq!(v["error"]["code"], "UnknownName");
}

#[test]
fn bad_arguments_exit_three() {
    let (code, _, err) = cli(&["k0"]);
    assert_eq!(code, EXIT_PARSE);
    assert!(!err.is_empty());
    let (code, _, _) = cli(&["k0", &fixture("pair4.json"), "--samples", "1"]);
    assert_eq!(code, EXIT_PARSE);
    let (code, out, _) = cli(&["--help"]);
    assert_eq!(code, EXIT_PASS);
    assert!(out.contains("homotopy-check"));
}

#[test]
fn homotopy_check_coboundary_path_golden() {
    let (code, out, _) = cli(&["homotopy-check", &fixture("z3z3.json"), &fixture("z3z3_coboundary_path.json"), "--json"]);
    assert_eq!(code, EXIT_PASS);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdict"], "PASS");
    assert_eq!(v["level"], "ALGEBRA_DATA");
    assert_eq!(v["samples"].as_array().unwrap().len(), 11);
    assert_golden("homotopy_z3z3_coboundary.json", &out);
}

#[test]
fn homotopy_check_constant_passes() {
    let (code, v) = cli_json(&["homotopy-check", &fixture("z3z3.json"), &fixture("z3z3_constant.json")]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(v["samples"][5]["k0"]["block_sizes"], json!([3]));
}

#[test]
fn homotopy_invalid_sample_lists_time() {
    let (code, v) = cli_json(&["homotopy-check", &fixture("klein.json"), &fixture("klein_bad_midpoint.json")]);
    assert_eq!(code, EXIT_INVALID);
    assert_eq!(v["error"]["code"], "SampleInvalid");
    assert_eq!(v["error"]["witness"]["times"], json!(["1/2"]));
    assert_eq!(v["result"]["samples"][5]["valid"], false);
    assert_eq!(v["result"]["verdict"], "FAIL");

    let (code, v) =
        cli_json(&["validate", &fixture("klein_bad_midpoint.json"), "--groupoid", &fixture("klein.json")]);
    assert_eq!(code, EXIT_INVALID);
    assert_eq!(v["error"]["witness"]["times"], json!(["1/2"]));
}

#[test]
fn jump_between_classes_fails() {
    let (code, v) = cli_json(&["homotopy-check", &fixture("klein.json"), &fixture("klein_twist_path.json")]);
    assert_eq!(code, EXIT_INVALID);
    assert_eq!(v["error"]["code"], "NotInvariant");
    assert_eq!(v["error"]["witness"]["t"], "0.5");
    assert_eq!(v["result"]["level"], "NONE");
}

#[test]
fn build_germ_of_group_with_zero() {
    let dir = tempfile::tempdir().unwrap();
    let (code, v) = cli_json(&["build", "germ", &fixture("klein_zero.json"), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code, EXIT_PASS, "{v}");
    let g = load_groupoid(&dir.path().join("groupoid.json"));
    let klein = make_group_groupoid(&FiniteGroup::abelian(&[2, 2]).unwrap());
    assert!(brute_force_isomorphic(&g, &klein, DEFAULT_ISO_LIMIT).unwrap().is_some());
    let map: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("germ_map.json")).unwrap()).unwrap();
    assert_eq!(map["germs"].as_array().unwrap().len(), 4);
}

#[test]
fn build_sigma_with_trivial_fibre_copies_base() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let (code, _) = cli_json(&["build", "sigma", &fixture("pair4.json"), &fixture("trivial.json"), "--m", "1", "--out", out]);
    assert_eq!(code, EXIT_PASS);
    let g = load_groupoid(&dir.path().join("groupoid.json"));
    assert!(brute_force_isomorphic(&g, &make_pair_groupoid(4), DEFAULT_ISO_LIMIT).unwrap().is_some());
    let sidecar: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("sigma.json")).unwrap()).unwrap();
    assert_eq!(sidecar["m"], 1);
    assert_eq!(sidecar["j"].as_object().unwrap().len(), 16);
}

#[test]
fn build_sigma_of_sign_cocycle_is_cyclic_of_order_four() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let (code, _) = cli_json(&["build", "sigma", &fixture("z2.json"), &fixture("z2_sign.json"), "--m", "2", "--out", out]);
    assert_eq!(code, EXIT_PASS);
    let g = load_groupoid(&dir.path().join("groupoid.json"));
    let z4 = make_group_groupoid(&FiniteGroup::cyclic(4));
    assert!(brute_force_isomorphic(&g, &z4, DEFAULT_ISO_LIMIT).unwrap().is_some());
}

#[test]
fn build_sigma_rejects_non_roots() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let (code, v) = cli_json(&["build", "sigma", &fixture("z2.json"), &fixture("z2_sign.json"), "--m", "3", "--out", out]);
    assert_eq!(code, EXIT_INVALID);
    assert_eq!(v["error"]["code"], "NotRootOfUnity");
}

#[test]
fn build_semidirect_swap() {
    let dir = tempfile::tempdir().unwrap();
    let (code, v) = cli_json(&["build", "semidirect", &fixture("swap.json"), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(v["arrows"], 4);
    let g = load_groupoid(&dir.path().join("groupoid.json"));
    assert!(brute_force_isomorphic(&g, &make_pair_groupoid(2), DEFAULT_ISO_LIMIT).unwrap().is_some());
    let (code, v) = cli_json(&["k0", dir.path().join("groupoid.json").to_str().unwrap()]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(v, json!({"k": 1, "block_sizes": [2], "unit_class": [2]}));
}

#[test]
fn built_files_revalidate() {
    let root = tempfile::tempdir().unwrap();
    let builds: Vec<(&str, Vec<String>)> = vec![
        ("germ", vec![fixture("sym_inverse2.json"), fixture("sym_inverse2_action.json")]),
        ("germ", vec![fixture("klein_zero.json")]),
        ("semidirect", vec![fixture("swap.json")]),
        ("sigma", vec![fixture("z2.json"), fixture("z2_sign.json"), "--m".into(), "2".into()]),
    ];
    for (i, (kind, inputs)) in builds.iter().enumerate() {
        let out = root.path().join(i.to_string());
        let out = out.to_str().unwrap();
        let mut args = vec!["build", kind];
        args.extend(inputs.iter().map(String::as_str));
        args.extend(["--out", out]);
        let (code, v) = cli_json(&args);
        assert_eq!(code, EXIT_PASS, "{kind}: {v}");
        let groupoid = format!("{out}/groupoid.json");
        assert_eq!(cli_json(&["validate", &groupoid]).0, EXIT_PASS);
        let cocycle = format!("{out}/cocycle.json");
        if Path::new(&cocycle).exists() {
            assert_eq!(cli_json(&["validate", &cocycle, "--groupoid", &groupoid]).0, EXIT_PASS);
            assert_eq!(cli_json(&["k0", &groupoid, &cocycle]).0, EXIT_PASS);
        }
    }
}

#[test]
fn semidirect_labels_feed_a_bilinear_cocycle() {
    // labels from the sidecar make the pulled-back cocycle expressible as a family
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(cli_json(&["build", "semidirect", &fixture("swap.json"), "--out", out]).0, EXIT_PASS);
    let labeling: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("labeling.json")).unwrap()).unwrap();
    let labels: serde_json::Map<String, Value> = labeling["labels"]
        .as_object()
        .unwrap()
        .iter()
        .map(|(k, v)| (k.clone(), Value::String(format!("({})", v.as_str().unwrap()))))
        .collect();
    let family = json!({"family": "bilinear", "moduli": [2], "Q": [[1]], "labels": labels});
    let path = dir.path().join("bilinear.json");
    std::fs::write(&path, family.to_string()).unwrap();
    let groupoid = dir.path().join("groupoid.json");
    let (code, v) = cli_json(&["k0", groupoid.to_str().unwrap(), path.to_str().unwrap()]);
    assert_eq!(code, EXIT_PASS, "{v}");
    assert_eq!(v["block_sizes"], json!([2]));
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let runs: Vec<Vec<String>> = vec![
        vec!["k0".into(), fixture("klein.json"), fixture("klein_bilinear.json"), "--seed".into(), "7".into()],
        vec!["homotopy-check".into(), fixture("z3z3.json"), fixture("z3z3_coboundary_path.json")],
        vec!["validate".into(), fixture("klein_broken.json"), "--groupoid".into(), fixture("klein.json")],
    ];
    for (i, args) in runs.iter().enumerate() {
        let mut texts = Vec::new();
        for _ in 0..2 {
            let path = dir.path().join(format!("{i}.json"));
            let mut all: Vec<&str> = args.iter().map(String::as_str).collect();
            all.extend(["--json", "--report", path.to_str().unwrap()]);
            let (_, out, _) = cli(&all);
            texts.push((out, std::fs::read(&path).unwrap()));
        }
        assert_eq!(texts[0], texts[1], "{args:?}");
    }
}

#[test]
fn run_report_shape() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let (code, _, _) = cli(&["k0", &fixture("pair4.json"), "--report", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_PASS);
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let keys: Vec<&str> = r.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["command", "inputs", "steps", "result", "outputs", "error", "exit"]);
    assert_eq!(r["inputs"][0]["schema"], "groupoid");
    assert_eq!(r["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
    assert_eq!(r["steps"][0]["subject"], "groupoid");
    assert_eq!(r["result"]["k"], 1);
    assert_eq!(r["error"], Value::Null);
    assert_eq!(r["exit"], 0);
}

#[test]
fn failure_report_carries_code_and_witness() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let args = ["validate", &fixture("klein_broken.json"), "--groupoid", &fixture("klein.json"), "--report", path.to_str().unwrap()];
    let (code, _, err) = cli(&args);
    assert_eq!(code, EXIT_INVALID);
    assert!(err.contains("IdentityViolation"));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r["exit"], 1);
    assert_eq!(r["error"]["code"], "IdentityViolation");
    assert!(r["error"]["witness"].is_object());
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_etale-twist");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code().unwrap();
    assert_eq!(status(&["validate", &fixture("pair4.json")]), 0);
    assert_eq!(status(&["validate", &fixture("klein_broken.json"), "--groupoid", &fixture("klein.json")]), 1);
    assert_eq!(status(&["validate", &fixture("malformed.json")]), 3);
    assert_eq!(status(&["no-such-command"]), 3);
    let out = Command::new(bin).args(["k0", &fixture("pair4.json"), "--json"]).output().unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "{\"k\":1,\"block_sizes\":[4],\"unit_class\":[4]}\n");
}

#[test]
fn fixture_matches_constructor() {
    assert_eq!(load_groupoid(Path::new(&fixture("pair4.json"))), make_pair_groupoid(4));
}
