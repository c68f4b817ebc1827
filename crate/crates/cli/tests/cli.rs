use std::path::PathBuf;
use std::process::Command;

use floerkit_cli::format::{InstanceFile, RandomManifest};
use floerkit_cli::{corpus_dir, run_with};
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["floerkit"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let mut a = vec!["--json"];
    a.extend_from_slice(args);
    let (code, out, err) = run(&a);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}{err}"));
    (code, v)
}

fn instance_files() -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(corpus_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .filter(|p| !p.ends_with("random_manifest.json"))
        .collect();
    v.sort();
    v
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("floerkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn corpus_round_trips() {
    let files = instance_files();
    assert!(files.len() >= 20, "corpus has {} files", files.len());
    for path in files {
        let text = std::fs::read_to_string(&path).unwrap();
        let f = InstanceFile::parse(&text).unwrap();
        assert_eq!(f.to_json(), text, "{} is not canonical", path.display());
        let back = InstanceFile::parse(&f.to_json()).unwrap();
        let (a, b) = (f.complex().unwrap(), back.complex().unwrap());
        assert_eq!(a, b);
        assert!(a.validate().passed(), "{}", path.display());
        for r in a.rels() {
            assert_eq!(a.gens_at(r), b.gens_at(r));
        }
    }
}

#[test]
fn manifest_parses() {
    let text = std::fs::read_to_string(corpus_dir().join("random_manifest.json")).unwrap();
    let m = RandomManifest::parse(&text).unwrap();
    assert_eq!(m.characteristics, vec![2, 3, 0]);
    assert!(m.seeds.len() * m.characteristics.len() >= 200);
}

#[test]
fn every_instance_validates_and_has_expected_invariants() {
    for path in instance_files() {
        let p = path.to_str().unwrap();
        let (code, out, err) = run(&["validate", p]);
        assert_eq!(code, 0, "{p}: {out}{err}");
        let f = InstanceFile::read(&path).unwrap();
        let Some(expected) = &f.expected else { continue };
        let Some(z) = expected.get("zeta") else { continue };
        let (code, v) = run_json(&["cohom", p]);
        assert_eq!(code, 0, "{p}");
        assert_eq!(&v["invariants"]["zeta"], z, "{p}");
        assert_eq!(&v["invariants"]["h"], &expected["h"], "{p}");
    }
}

#[test]
fn validate_lists_relations() {
    let (code, out, _) = run(&["validate", "examples/s3_m1"]);
    assert_eq!(code, 0);
    for rel in ["d∘d = 0", "δ∘d = 0", "d∘δ′ = 0", "dv − vd + δ′δ = 0"] {
        let line = out.lines().find(|l| l.starts_with(rel)).unwrap_or_else(|| panic!("{rel} missing"));
        assert!(line.ends_with("OK"));
    }
}

#[test]
fn lens_table() {
    let (code, v) = run_json(&["lens", "--q", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["h"], serde_json::json!(["3/8", "0", "-1/8", "0"]));
}

#[test]
fn poincare_h() {
    let (code, out, _) = run(&["hinv", "--char", "0", "examples/poincare"]);
    assert_eq!(code, 0);
    assert!(out.contains("h_0 = -1"), "{out}");
    let (_, v) = run_json(&["hinv", "--char", "2", "examples/poincare"]);
    assert_eq!(v["h"], "-1");
}

#[test]
fn froyshov_from_flags_and_file() {
    let (code, v) = run_json(&["froyshov", "examples/poincare"]);
    assert_eq!(code, 0);
    assert_eq!((v["lhs"].as_str(), v["rhs"].as_str(), v["equality"].as_bool()), (Some("1"), Some("1"), Some(true)));
    let (code, v) = run_json(&["froyshov", "--h", "1/8", "--b2", "1"]);
    assert_eq!(code, 1);
    assert_eq!(v["satisfied"], false);
    let (code, _, err) = run(&["froyshov", "--h", "0", "--b2", "2", "--sigma", "0"]);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn sw_values() {
    assert_eq!(run_json(&["sw", "examples/s1xs3"]).1["sw"], "0");
    assert_eq!(run_json(&["sw", "examples/sigma237"]).1["sw"], "1");
    assert_eq!(run_json(&["lefschetz", "examples/sigma237"]).1["lefschetz"], "1");
}

#[test]
fn chambers_emit_round_trip() {
    let out = scratch("s3_m-4.json");
    let (code, v) = run_json(&["chambers", "examples/s3_m0", "--to", "-4", "--emit", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["degrees"].as_array().unwrap().len(), 4);
    let (code, v) = run_json(&["cohom", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["invariants"]["zeta"], -4);
    assert_eq!(v["invariants"]["h"], "0");
}

#[test]
fn dual_and_gen_emit() {
    let out = scratch("gen.json");
    let (code, v) = run_json(&["gen", "--seed", "11", "--size", "18", "--char", "2", "--emit", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["matches"], true);
    let (code, d) = run_json(&["dual", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(d["dual_zeta"].as_i64().unwrap(), -v["zeta"].as_i64().unwrap());
    let (code, f) = run_json(&["fundseq", out.to_str().unwrap(), "--window", "-12", "12"]);
    assert_eq!(code, 0);
    assert_eq!(f["exact"], true);
}

#[test]
fn oracles() {
    assert_eq!(run(&["oracle-mv", "--n", "3"]).0, 0);
    assert_eq!(run(&["oracle-mv", "--n", "1", "--hb", "0:1"]).0, 0);
    for m in ["morse_ball_n1", "morse_ball_n2", "morse_min", "morse_flow"] {
        let (code, v) = run_json(&["oracle-mv", "--model", &format!("examples/{m}")]);
        assert_eq!(code, 0, "{m}");
        assert_eq!(v["passed"], true);
    }
    let (code, v) = run_json(&["oracle-specflow", "examples/specflow_family"]);
    assert_eq!(code, 0);
    assert_eq!(v["flow"]["sf"], 2);
    assert_eq!(run_json(&["oracle-specflow", "--berger", "4"]).1["flow"]["sf"], 4);
}

#[test]
fn obstruct_lattices() {
    assert_eq!(run_json(&["obstruct", "--lattice", "e8"]).1["value"], "1");
    assert_eq!(run_json(&["obstruct", "--lattice", "diag:5"]).1["value"], "0");
    let g = scratch("gram.json");
    std::fs::write(&g, "{\"gram\": [[2, 1], [1, 2]]}").unwrap();
    let (code, v) = run_json(&["obstruct", "--lattice", g.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["rank"], 2);
    std::fs::write(&g, "[[1, 0], [0, -1]]").unwrap();
    assert_eq!(run(&["obstruct", "--lattice", g.to_str().unwrap()]).0, 2);
}

#[test]
fn torsion_over_integers() {
    let (code, v) = run_json(&["chambers", "examples/torsion_z2", "--to", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["consistent"], true);
    let (code, v) = run_json(&["cohom", "examples/torsion_z2"]);
    assert_eq!(code, 0);
    assert_eq!(v["degrees"][0]["hf"], "Z/2");
}

#[test]
fn unsupported_cobordism_exits_3() {
    let mut f = InstanceFile::read(&corpus_dir().join("sigma237.json")).unwrap();
    let t = &mut f.cobordism.as_mut().unwrap().topology;
    // b1 = 1, b+ = 0 and d = (c1^2 - sigma)/4 + b1 = 0
    (t.b1, t.b2, t.sigma) = (1, 4, -4);
    t.c1sq.num = -8;
    let path = scratch("b1.json");
    std::fs::write(&path, f.to_json()).unwrap();
    let (code, out, err) = run(&["cobord-validate", path.to_str().unwrap()]);
    assert_eq!(code, 3, "{out}{err}");
    assert_eq!(run(&["cobord-validate", "examples/sigma237"]).0, 0);
}

#[test]
fn failures_and_bad_input() {
    let mut f = InstanceFile::read(&corpus_dir().join("poincare.json")).unwrap();
    f.complex.delta_prime = vec![1];
    f.complex.generators[0].degree.num = 1;
    f.complex.delta = vec![0];
    f.complex.v = vec![vec![1]];
    let path = scratch("broken.json");
    std::fs::write(&path, f.to_json()).unwrap();
    let (code, out, _) = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(out.contains("FAIL"));
    assert_eq!(run(&["cohom", path.to_str().unwrap()]).0, 1);

    std::fs::write(&path, "{\"format_version\": 1}").unwrap();
    assert_eq!(run(&["validate", path.to_str().unwrap()]).0, 2);
    let text = std::fs::read_to_string(corpus_dir().join("poincare.json")).unwrap();
    std::fs::write(&path, text.replace("\"den\": 1", "\"den\": 2").replace("\"num\": 0", "\"num\": 2")).unwrap();
    assert_eq!(run(&["validate", path.to_str().unwrap()]).0, 2);
    std::fs::write(&path, text.replacen("\"name\"", "\"extra\": 1, \"name\"", 1)).unwrap();
    assert_eq!(run(&["validate", path.to_str().unwrap()]).0, 2);

    assert_eq!(run(&["validate", "examples/no_such_file"]).0, 2);
    assert_eq!(run(&["hinv", "--char", "6", "examples/poincare"]).0, 2);
    assert_eq!(run(&["lens", "--q", "0"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["equivariant", "examples/torsion_z2"]).0, 3);
}

#[test]
fn out_file_holds_report() {
    let path = scratch("report.json");
    let (code, out, _) = run(&["lens", "--q", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("1/8"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["h"], serde_json::json!(["1/8", "-1/8"]));
}

#[test]
fn output_is_exact() {
    for args in [
        vec!["fundseq", "examples/lens_q3_s1", "--window", "-6", "6"],
        vec!["equivariant", "examples/lens_q4_s0", "--window", "-4", "4"],
        vec!["oracle-specflow", "examples/specflow_family"],
    ] {
        let (code, out, _) = run(&args);
        assert_eq!(code, 0, "{args:?}");
        let b = out.as_bytes();
        let float = b.windows(3).any(|w| w[0].is_ascii_digit() && w[1] == b'.' && w[2].is_ascii_digit());
        assert!(!float, "{args:?}: {out}");
    }
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_floerkit");
    let st = Command::new(bin).args(["lens", "--q", "3"]).output().unwrap();
    assert_eq!(st.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&st.stdout).contains("1/12"));
    let st = Command::new(bin).args(["validate", "examples/missing"]).output().unwrap();
    assert_eq!(st.status.code(), Some(2));
    let st = Command::new(bin)
        .env("FLOERKIT_CORPUS", corpus_dir())
        .args(["hinv", "examples/poincare"])
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(0));
}
