use std::path::Path;
use std::process::{Command, Output};

use cohomolab::complexes::{cohomology_dims, verify_complex, ComplexDump, NormedComplex};
use cohomolab::scalars::PrimeField;
use serde_json::Value;

fn cohomolab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cohomolab"))
        .args(args)
        .env_remove("COHOMOLAB_CORPUS")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--output", "json"]);
    let out = cohomolab(&all);
    let code = out.status.code().unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(!stdout.is_empty(), "no output; stderr: {}", String::from_utf8_lossy(&out.stderr));
    (code, serde_json::from_str(&stdout).unwrap())
}

fn dims(v: &Value) -> Vec<u64> {
    v.as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect()
}

fn schema() -> jsonschema::Validator {
    let schema: Value = serde_json::from_str(cohomolab::cli::REPORT_SCHEMA).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

#[test]
fn classes_examples() {
    let sizes = |g: &str| {
        let (code, v) = json(&["classes", g]);
        assert_eq!(code, 0);
        let mut s: Vec<u64> =
            v["report"]["classes"].as_array().unwrap().iter().map(|c| c["size"].as_u64().unwrap()).collect();
        s.sort();
        s
    };
    assert_eq!(sizes("S3"), [1, 2, 3]);
    assert_eq!(sizes("C5"), [1, 1, 1, 1, 1]);
    assert_eq!(sizes("D4"), [1, 1, 2, 2, 2]);
}

#[test]
fn ct_examples() {
    let (_, s3) = json(&["ct", "S3"]);
    assert_eq!(s3["report"]["commutative_transitive"], true);
    let (_, c6) = json(&["ct", "C6"]);
    assert_eq!(c6["report"]["commutative_transitive"], true);
    let (code, d4) = json(&["ct", "D4"]);
    assert_eq!(code, 0);
    assert_eq!(d4["report"]["commutative_transitive"], false);
    // The witness must be the rotation by a half turn: the one central
    // non-identity element.
    let x = d4["report"]["witness"]["x"].as_u64().unwrap() as usize;
    let group = cohomolab::corpus::Corpus::embedded().group("D4").unwrap();
    let central: Vec<usize> = group
        .elements()
        .filter(|&z| z != group.identity() && group.elements().all(|y| group.mul(z, y) == group.mul(y, z)))
        .collect();
    assert_eq!(central, [x]);
}

#[test]
fn disintegrate_examples() {
    let (code, v) = json(&["disintegrate", "S3", "conjugation", "--field", "f2", "--max-degree", "2"]);
    assert_eq!(code, 0);
    assert_eq!(dims(&v["report"]["oracle"]), [2, 1, 1]);
    assert_eq!(v["report"]["equal"], true);
    let stage = |name: &str| {
        v["timings"].as_array().unwrap().iter().find(|t| t["stage"] == name).unwrap()["seconds"].as_f64().unwrap()
    };
    assert!(stage("fast path") < stage("oracle"));

    let (_, v) = json(&["disintegrate", "C2", "trivial", "--field", "f2"]);
    assert_eq!(dims(&v["report"]["fast_path"]), [1, 1, 1, 1]);
    assert_eq!(v["report"]["equal"], true);

    let (_, v) = json(&["disintegrate", "S3", "conjugation", "--field", "q", "--max-degree", "2"]);
    assert_eq!(dims(&v["report"]["resolution"]), [2, 0, 0]);
    assert_eq!(v["report"]["isometric"], true);
    assert_eq!(v["report"]["split_max_norm"], "1");
}

#[test]
fn simplicial_examples() {
    let (code, s3) = json(&["simplicial-triviality", "S3", "--max-degree", "2"]);
    assert_eq!(code, 0);
    assert_eq!(s3["report"]["ideal_vanishes"], true);
    assert!(s3["report"]["verdict"].as_str().unwrap().starts_with("simplicially trivial"));
    let (_, d4) = json(&["simplicial-triviality", "D4", "--max-degree", "2"]);
    assert_eq!(d4["report"]["ideal_vanishes"], true);
    assert_eq!(d4["report"]["commutative_transitive"], false);
    assert!(d4["report"]["verdict"].as_str().unwrap().contains("not necessary"));
    let (_, t) = json(&["simplicial-triviality", "trivial"]);
    assert!(t["report"]["verdict"].as_str().unwrap().starts_with("degenerate"));
}

#[test]
fn sniper_examples() {
    for n in [1, 10, 1000] {
        let (code, v) = json(&["sniper", &n.to_string()]);
        assert_eq!(code, 0);
        assert_eq!(v["report"]["inverse_norm"], n.to_string());
        assert_eq!(v["report"]["forward_norm"], "1");
    }
}

#[test]
fn reports_validate_against_schema() {
    let validator = schema();
    let runs: &[&[&str]] = &[
        &["classes", "Q8"],
        &["ct", "D4"],
        &["ct", "S3"],
        &["disintegrate", "S3", "points_and_sign", "--field", "f3", "--max-degree", "2"],
        &["disintegrate", "C3", "regular", "--max-degree", "2"],
        &["simplicial-triviality", "C3", "--field", "f3", "--max-degree", "2"],
        &["les-verify", "C2", "--max-degree", "2"],
        &["proof-path", "C3", "--max-degree", "2"],
        &["sniper", "5"],
        &["corpus", "list"],
    ];
    for args in runs {
        let (code, v) = json(args);
        assert_eq!(code, 0, "{args:?}");
        let errors: Vec<String> = validator.iter_errors(&v).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{args:?}: {errors:?}");
    }
    let (_, mut bad) = json(&["sniper", "2"]);
    bad["report"]["inverse_norm"] = Value::from(2);
    assert!(!validator.is_valid(&bad));
}

#[test]
fn csv_columns_are_fixed() {
    let header = |args: &[&str]| {
        let mut all = args.to_vec();
        all.extend(["--output", "csv"]);
        let out = cohomolab(&all);
        assert!(out.status.success());
        String::from_utf8(out.stdout).unwrap().lines().next().unwrap().to_string()
    };
    assert_eq!(header(&["classes", "C3"]), "class,size,representative,centralizer_order");
    assert_eq!(header(&["ct", "C3"]), "group,commutative_transitive,witness_x,witness_a,witness_b");
    assert_eq!(header(&["disintegrate", "C3", "trivial", "--max-degree", "1"]), "degree,oracle,fast_path,resolution");
    assert_eq!(
        header(&["simplicial-triviality", "C2", "--max-degree", "1"]),
        "degree,trivial_coefficients,regular_dual,ideal_dual"
    );
    assert_eq!(
        header(&["les-verify", "C2", "--max-degree", "1"]),
        "degree,h_x,h_y,h_z,rank_phi,rank_rho,rank_connecting"
    );
    assert_eq!(header(&["sniper", "3"]), "n,forward_norm,inverse_norm,sum_of_cokernels,max_differential_norm");
}

#[test]
fn input_errors_exit_one_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\n  \"name\": \"bad\",\n  \"order\": 2,\n  \"mul\": [\n    [0, 1],\n    [1, 0],\n  ]\n}")
        .unwrap();
    let out = cohomolab(&["classes", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 7"), "{err}");

    std::fs::write(&path, "{\n  \"name\": \"bad\",\n  \"order\": 2,\n  \"mul\": [\n    [0, 1],\n    [1, 1]\n  ]\n}")
        .unwrap();
    let out = cohomolab(&["classes", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 6"), "{err}");

    assert_eq!(cohomolab(&["classes", "NoSuchGroup"]).status.code(), Some(1));
    assert_eq!(cohomolab(&["disintegrate", "S3", "C2_regular"]).status.code(), Some(1));
    assert_eq!(cohomolab(&["classes", "S3", "--field", "f6"]).status.code(), Some(1));
    assert_eq!(cohomolab(&["bogus"]).status.code(), Some(1));
}

#[test]
fn broken_action_file_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("act.json");
    // Only one of the three transpositions swaps the points.
    std::fs::write(&path, r#"{"group": "S3", "act": [[0,1,2],[1,0,2],[0,1,2],[0,1,2],[0,1,2],[0,1,2]]}"#).unwrap();
    let out = cohomolab(&["disintegrate", "S3", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn dump_complex_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dual.json");
    let out = cohomolab(&[
        "disintegrate",
        "S3",
        "conjugation",
        "--field",
        "f2",
        "--max-degree",
        "2",
        "--dump-complex",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let dump: ComplexDump = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let f2 = PrimeField::new(2).unwrap();
    let c = NormedComplex::from_dump(&f2, &dump).unwrap();
    verify_complex(&c).unwrap();
    assert_eq!(cohomology_dims(&c, "dump").unwrap().homology_dims(), [2, 1, 1]);

    let path = dir.path().join("ideal.json");
    let out = cohomolab(&["les-verify", "C3", "--max-degree", "2", "--dump-complex", path.to_str().unwrap()]);
    assert!(out.status.success());
    let dump: ComplexDump = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(dump.dims[..3], [2, 6, 18]);
}

#[test]
fn corpus_directory_override() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    std::fs::create_dir_all(root.join("groups")).unwrap();
    std::fs::create_dir_all(root.join("actions")).unwrap();
    std::fs::write(root.join("groups/V.json"), r#"{"name": "V", "order": 2, "mul": [[0, 1], [1, 0]]}"#).unwrap();
    std::fs::write(root.join("manifest.json"), r#"{"entries": [{"name": "V", "group": "V"}]}"#).unwrap();
    let run = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_cohomolab")).args(args).env("COHOMOLAB_CORPUS", root).output().unwrap()
    };
    let out = run(&["classes", "V", "--output", "csv"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 3);
    assert_eq!(run(&["classes", "S3"]).status.code(), Some(1));
}

#[test]
fn random_transversal_keeps_dimensions() {
    let base = cohomolab(&["disintegrate", "D4", "vertices_and_diagonals", "--max-degree", "2", "--output", "csv"]);
    for seed in ["1", "2"] {
        let other = cohomolab(&[
            "disintegrate",
            "D4",
            "vertices_and_diagonals",
            "--max-degree",
            "2",
            "--output",
            "csv",
            "--random-transversal",
            "--seed",
            seed,
        ]);
        assert_eq!(base.stdout, other.stdout);
    }
}

#[test]
fn text_output_mentions_verdict() {
    let out = cohomolab(&["sniper", "4"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("forced splitting has norm 4"), "{text}");
    assert!(Path::new(env!("CARGO_BIN_EXE_cohomolab")).exists());
}
