use std::process::{Command, Output};

use serde_json::Value;

fn qweyl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qweyl")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report on stdout")
}

fn check<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no check named {name}"))
}

#[test]
fn defaults_pass_for_every_command() {
    for cmd in ["verify-qwh", "verify-weyl", "bogoliubov", "foliation-scan"] {
        let out = qweyl(&[cmd]);
        assert_eq!(out.status.code(), Some(0), "{cmd}: {}", String::from_utf8_lossy(&out.stderr));
        let r = json(&out);
        assert_eq!(r["command"], cmd);
        assert_eq!(r["pass"], true);
        for key in ["params", "checks", "convergence", "scan", "seed", "version", "timing"] {
            assert!(r.get(key).is_some(), "{cmd}: missing {key}");
        }
        for c in r["checks"].as_array().unwrap() {
            for key in ["name", "deviation", "tolerance", "pass"] {
                assert!(c.get(key).is_some());
            }
        }
        assert!(!r["convergence"].as_array().unwrap().is_empty());
    }
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        vec!["verify-qwh", "--q", "1"],
        vec!["verify-qwh", "--epsilon", "0"],
        vec!["verify-weyl", "--rho", "0"],
        vec!["bogoliubov", "--epsilon", "0.1,0.2"],
        vec!["foliation-scan", "--modes", ""],
        vec!["bogoliubov", "--epsilon", "0.1", "--rho", "2"],
        vec!["no-such-command"],
        vec![],
    ] {
        let out = qweyl(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn help_exits_zero() {
    assert_eq!(qweyl(&["--help"]).status.code(), Some(0));
    assert_eq!(qweyl(&["bogoliubov", "--help"]).status.code(), Some(0));
}

#[test]
fn absurd_tolerance_exits_two() {
    for cmd in ["verify-qwh", "bogoliubov", "foliation-scan"] {
        let out = qweyl(&[cmd, "--tol", "1e-30"]);
        assert_eq!(out.status.code(), Some(2), "{cmd}");
        assert_eq!(json(&out)["pass"], false);
    }
}

#[test]
fn seeded_runs_are_identical_and_seed_matters() {
    let strip = |out: &Output| {
        let mut v = json(out);
        v.as_object_mut().unwrap().remove("timing");
        v
    };
    let a = strip(&qweyl(&["verify-qwh", "--seed", "9"]));
    let b = strip(&qweyl(&["verify-qwh", "--seed", "9"]));
    let c = strip(&qweyl(&["verify-qwh", "--seed", "10"]));
    assert_eq!(a, b);
    assert_eq!(a["seed"], 9);
    assert_ne!(a["checks"], c["checks"]);
}

#[test]
fn foliation_rows_follow_input_order() {
    let r = json(&qweyl(&["foliation-scan", "--modes", "100,1,10"]));
    let rows = r["scan"].as_array().unwrap();
    let modes: Vec<u64> = rows.iter().map(|row| row["M"].as_u64().unwrap()).collect();
    assert_eq!(modes, [100, 1, 10]);
    let overlaps: Vec<f64> = rows.iter().map(|row| row["overlap"].as_f64().unwrap()).collect();
    for (got, want) in overlaps.iter().zip([2.47e-3, 0.9417, 0.5483]) {
        assert!((got - want).abs() / want < 0.02, "{got} vs {want}");
    }
}

#[test]
fn foliation_at_zero_epsilon_is_all_ones() {
    let out = qweyl(&["foliation-scan", "--epsilon", "0"]);
    assert_eq!(out.status.code(), Some(0));
    for row in json(&out)["scan"].as_array().unwrap() {
        assert_eq!(row["overlap"].as_f64(), Some(1.0));
    }
}

#[test]
fn bogoliubov_at_zero_epsilon_is_trivial() {
    let out = qweyl(&["bogoliubov", "--epsilon", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(check(&r, "generator_equivalence")["deviation"].as_f64(), Some(0.0));
    assert_eq!(check(&r, "identity_at_rho_one")["deviation"].as_f64(), Some(0.0));
}

#[test]
fn tiny_weyl_dimension_is_flagged() {
    let out = qweyl(&["verify-weyl", "--dim", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let r = json(&out);
    assert_eq!(r["pass"], false);
    let warnings = r["warnings"].as_array().unwrap();
    assert!(warnings.iter().any(|w| w.as_str().unwrap().contains("convergence floor")));
}

#[test]
fn csv_report_to_file() {
    let dir = std::env::temp_dir().join(format!("qweyl-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("scan.csv");
    let out = qweyl(&["foliation-scan", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());

    let mut reader = csv::Reader::from_path(&path).unwrap();
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, ["section", "name", "index", "value", "tolerance", "pass"]);
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert!(rows.iter().any(|r| &r[0] == "check"));
    let scan: Vec<&csv::StringRecord> = rows.iter().filter(|r| &r[0] == "scan").collect();
    assert_eq!(scan.len(), 4);
    // full precision survives the round trip
    let last: f64 = scan[3][3].parse().unwrap();
    assert!(last > 0.0 && last < 1e-20);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn json_numbers_carry_seventeen_digits() {
    let out = qweyl(&["foliation-scan", "--modes", "1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let r: Value = serde_json::from_str(&text).unwrap();
    let overlap = r["scan"][0]["overlap"].as_f64().unwrap();
    assert!(text.contains(&format!("{overlap:.16e}")));
}
