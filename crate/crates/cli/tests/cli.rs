use std::path::PathBuf;
use std::process::{Command, Output};

fn lbuild(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lbuild"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("lbuild runs")
}

fn code(args: &[&str]) -> i32 {
    let out = lbuild(args);
    out.status.code().expect("exit code")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("lbuild-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

/// Each library verification with a command reaching it and the expected exit code.
const COVERAGE: &[(&str, &[&str], i32)] = &[
    ("RootSystem::check_axioms", &["rootsys", "verify", "--tag", "B", "--rank", "3"], 0),
    ("RootSystem::enumerate_weyl_group", &["weyl", "enumerate", "--tag", "G2"], 0),
    ("EmbeddedPair::construct_sigma", &["weyl", "sigma", "--embed", "a2-in-g2"], 0),
    ("ModelApartment::verify_action", &["apartment", "verify", "--config", "data/a2-lex.toml", "--samples", "5"], 0),
    ("EmbeddedPair::check_condition_triangle", &["morphism", "check-triangle", "--embed", "b2-in-a3", "--samples", "100"], 0),
    ("OrderedGroupMorphism::order_check", &["morphism", "order", "--gamma", r#"[["1","0"],["3","1"]]"#], 0),
    ("ApartmentMorphism::verify", &["morphism", "inversion", "--tag", "A", "--rank", "2"], 0),
    ("FieldMorphism::square_check", &["morphism", "field", "--source", "lex-multideg", "--target", "first-var"], 0),
    ("ValuationSpec::axioms_check", &["lattice", "valuation", "--valuation", "first-var", "--samples", "50"], 0),
    ("LatticeBuilding::canonical_form", &["lattice", "canon", "--matrix", r#"[["t","1"],["0","1"]]"#], 0),
    ("LatticeBuilding::witness_invariance_check", &["lattice", "chart", "--samples", "5"], 0),
    ("LatticeBuilding::stab_theorem_check", &["lattice", "stab", "--samples", "20"], 0),
    ("LatticeBuilding::common_apartment", &["lattice", "common-apartment", "--matrix", r#"[["1","0"],["0","1"]]"#, "--other", r#"[["t","1"],["0","1"]]"#], 0),
    ("LatticeBuilding::monomial_product_check", &["lattice", "monomial", "--samples", "10"], 0),
    ("AdaptedNorm::exponent", &["norm", "eval", "--norm", "data/norm-t.json", "--vector", r#"["1","0"]"#], 0),
    ("NormBuilding::chart_norm", &["norm", "chart", "--point", r#"[["2"]]"#], 0),
    ("NormBuilding::stab_oracle_check", &["norm", "stab", "--samples", "20"], 0),
    ("NormBuilding::equality_check", &["norm", "check", "--samples", "5"], 0),
    ("BuildingMorphism::check_conditions_baby", &["building", "check", "--instance", "field-change", "--n", "2", "--samples", "5"], 0),
    ("inversion_selfcheck", &["building", "check", "--instance", "inversion", "--n", "2", "--samples", "10"], 0),
    ("BuildingMorphism::injectivity_check", &["building", "check", "--instance", "block-embed", "--n", "3", "--samples", "5"], 0),
];

#[test]
fn every_verification_is_reachable() {
    for (what, args, expected) in COVERAGE {
        let out = lbuild(args);
        assert_eq!(
            out.status.code(),
            Some(*expected),
            "{what}: {args:?}\n{}\n{}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn g2_verify_lists_twelve_roots() {
    let report = scratch("g2.json");
    assert_eq!(code(&["rootsys", "verify", "--tag", "G2", "--report", report.to_str().unwrap()]), 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["root_count"], 12);
    assert_eq!(v["system"]["roots"].as_array().unwrap().len(), 12);
    assert_eq!(v["axioms"], "PASS");
}

#[test]
fn tilted_embedding_fails_with_a_witness() {
    let report = scratch("tilted.json");
    let args = ["morphism", "check-triangle", "--embed", "a1-tilted-in-a2.json", "--report", report.to_str().unwrap()];
    assert_eq!(code(&args), 1);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert!(v["condition"]["witness"]["x"].is_array());
    assert_eq!(v["witness_confirmed"], true);
    // the shipped file and the preset agree
    assert_eq!(code(&["morphism", "check-triangle", "--embed", "data/a1-tilted-in-a2.json", "--samples", "50"]), 1);
    assert_eq!(code(&["morphism", "check-triangle", "--embed", "data/a1-perp-in-a2.json", "--samples", "50"]), 0);
}

#[test]
fn field_change_instance_passes() {
    assert_eq!(code(&["building", "check", "--instance", "field-change", "--n", "2", "--seed", "7"]), 0);
    assert_eq!(code(&["building", "check", "--instance", "field-change-swapped", "--n", "2", "--samples", "5"]), 1);
}

#[test]
fn failed_verifications_exit_one() {
    assert_eq!(code(&["morphism", "order", "--gamma", "data/swap.json"]), 1);
}

#[test]
fn usage_errors_exit_two_and_echo_the_token() {
    let out = lbuild(&["rootsys", "verify", "--tag", "E9"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("E9"));
    let out = lbuild(&["lattice", "canon", "--matrix", r#"[["1/0","0"],["0","1"]]"#]);
    assert_eq!(out.status.code(), Some(2));
    let out = lbuild(&["morphism", "check-triangle", "--embed", "no-such-embedding"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no-such-embedding"));
    assert_eq!(code(&["no-such-command"]), 2);
    assert_eq!(code(&["render", "--tag", "A", "--rank", "3", "--svg", scratch("a3.svg").to_str().unwrap()]), 2);
}

#[test]
fn reports_and_drawings_are_reproducible() {
    let (a, b) = (scratch("a.json"), scratch("b.json"));
    for p in [&a, &b] {
        let args = ["building", "check", "--instance", "block-embed", "--n", "3", "--samples", "5", "--seed", "3", "--report", p.to_str().unwrap()];
        assert_eq!(code(&args), 0);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let (s, t) = (scratch("s.svg"), scratch("t.svg"));
    for p in [&s, &t] {
        assert_eq!(code(&["render", "--embed", "a2-in-g2", "--svg", p.to_str().unwrap()]), 0);
    }
    let svg = std::fs::read_to_string(&s).unwrap();
    assert_eq!(svg, std::fs::read_to_string(&t).unwrap());
    assert_eq!(svg.matches("url(#base-head)").count(), 12);
    assert_eq!(svg.matches("url(#overlay-head)").count(), 6);
}
