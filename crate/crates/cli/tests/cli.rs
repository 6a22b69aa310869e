use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use hrforms::io::{read_module, to_json, write_module};
use hrforms::oracle::sl2_gram;
use hrforms::padic::{weyl_lattice, LatticeModule};
use hrforms::paths::{standard_module, StandardOptions};
use hrforms::{Ring, RootSystem, Weight};
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn hrforms(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hrforms")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn vlambda_a1_matches_closed_form() {
    let out = hrforms(&["vlambda", "--type", "A1", "--lambda", "3", "--ring", "Q"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let weights: Vec<i64> = v["weights"].as_array().unwrap().iter().map(|w| w["coords"][0].as_i64().unwrap()).collect();
    assert_eq!(weights, vec![3, 1, -1, -3]);
    assert!(v["weights"].as_array().unwrap().iter().all(|w| w["dim"] == 1));
    let diag: Vec<String> = v["form"].as_array().unwrap().iter().map(|b| b["gram"][0][0].as_str().unwrap().to_string()).collect();
    let expect: Vec<String> = (0..4).map(|l| sl2_gram(3, l).to_string()).collect();
    assert_eq!(diag, expect);
    assert_eq!(diag, vec!["1", "3", "12", "36"]);
}

#[test]
fn identical_inputs_give_identical_bytes() {
    let args = ["vlambda", "--type", "A2", "--lambda", "2,1"];
    let a = hrforms(&args);
    let b = hrforms(&args);
    let mut par = args.to_vec();
    par.push("--parallel");
    let c = hrforms(&par);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn output_flag_writes_the_same_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("v.json");
    let to_file = hrforms(&["char", "--type", "B2", "--lambda", "1,1", "-o", path.to_str().unwrap()]);
    assert_eq!(to_file.status.code(), Some(0));
    let stdout = hrforms(&["char", "--type", "B2", "--lambda", "1,1"]);
    assert_eq!(fs::read(&path).unwrap(), stdout.stdout);
    let total: u64 = json(&stdout)["multiplicities"].as_array().unwrap().iter().map(|e| e["dim"].as_u64().unwrap()).sum();
    assert_eq!(total, 16);
}

#[test]
fn shipped_fixtures_round_trip() {
    for name in ["vrho_a2.json", "weyl_a1_3_p5.json", "weyl_a1_5_p5.json", "tilting_a1_p3.json"] {
        let text = fs::read_to_string(fixture(name)).unwrap();
        let data = read_module(&text).unwrap();
        let again = if data.p.is_some() {
            let form = data.form.clone();
            to_json(&LatticeModule::from_data(data).unwrap().to_file(form.as_ref()))
        } else {
            write_module(&data.module, data.form.as_ref())
        };
        assert_eq!(again, text, "{name}");
    }
}

#[test]
fn shipped_fixtures_match_the_library() {
    let v = standard_module(&RootSystem::a2(), Ring::Rational, &Weight(vec![1, 1]), StandardOptions::default()).unwrap();
    assert_eq!(fs::read_to_string(fixture("vrho_a2.json")).unwrap(), write_module(&v.module, Some(&v.form)));
    for (lambda, name) in [(3, "weyl_a1_3_p5.json"), (5, "weyl_a1_5_p5.json")] {
        let (l, g) = weyl_lattice(&RootSystem::a1(), &Weight(vec![lambda]), 5).unwrap();
        assert_eq!(fs::read_to_string(fixture(name)).unwrap(), to_json(&l.to_file(Some(&g))));
    }
}

#[test]
fn verify_hr_on_standard_fixture_passes() {
    let out = hrforms(&["verify-hr", fixture("vrho_a2.json").to_str().unwrap(), "--upset", "0,0", "--upset", "1,-2;-2,1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["overall"], true);
    assert_eq!(r["checked_upsets"].as_array().unwrap().len(), 2);
}

#[test]
fn verify_hr_on_lattices_uses_padic_axioms() {
    let ok = hrforms(&["verify-hr", fixture("weyl_a1_3_p5.json").to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0));
    let bad = hrforms(&["verify-hr", fixture("weyl_a1_5_p5.json").to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(json(&bad)["unimodular"]["witness"], "unimodularity fails at weight 3 (valuation 1)");
}

#[test]
fn verify_tilting_verdicts() {
    let bad = hrforms(&["verify-tilting", fixture("weyl_a1_5_p5.json").to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(1));
    let v = json(&bad);
    assert_eq!(v["overall"], false);
    assert!(v["first_failure"].as_str().unwrap().starts_with("unimodularity fails at weight 3"));

    for name in ["weyl_a1_3_p5.json", "tilting_a1_p3.json"] {
        let out = hrforms(&["verify-tilting", fixture(name).to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{name}");
        assert_eq!(json(&out)["first_failure"], Value::Null);
    }
    let t = json(&hrforms(&["verify-tilting", fixture("tilting_a1_p3.json").to_str().unwrap()]));
    let steps: Vec<i64> = t["filtration"]["steps"].as_array().unwrap().iter().map(|s| s["weight"][0].as_i64().unwrap()).collect();
    assert_eq!(steps, vec![3, 1]);
}

#[test]
fn decompose_reports_components() {
    let out = hrforms(&["decompose", fixture("vrho_a2.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let d = json(&out);
    assert_eq!(d["certified"], true);
    assert_eq!(d["components"].as_array().unwrap().len(), 1);
    assert_eq!(d["components"][0]["scalar"], "1");
}

#[test]
fn usage_and_format_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.json");
    fs::write(&broken, "{\"root_system\": 1}").unwrap();
    let standard = fixture("vrho_a2.json");
    let cases: Vec<Vec<&str>> = vec![
        vec!["vlambda", "--type", "A1", "--lambda", "3", "--ring", "F2"],
        vec!["vlambda", "--type", "A1", "--lambda", "3", "--ring", "Zp", "--p", "2"],
        vec!["vlambda", "--type", "A2", "--lambda", "3"],
        vec!["vlambda", "--type", "A1", "--lambda", "-1"],
        vec!["char", "--type", "A2", "--lambda", "1,-1"],
        vec!["verify-hr", broken.to_str().unwrap()],
        vec!["verify-hr", "/nonexistent/module.json"],
        vec!["verify-tilting", standard.to_str().unwrap()],
        vec!["frobnicate"],
    ];
    for args in cases {
        assert_eq!(hrforms(&args).status.code(), Some(2), "{args:?}");
    }
}
