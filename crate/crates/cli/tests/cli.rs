use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn cpw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cpw"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &Path, name: &str, out: &Output) -> String {
    let p = dir.join(name);
    std::fs::write(&p, &out.stdout).unwrap();
    p.display().to_string()
}

#[test]
fn four_point_wave_coefficients() {
    let v = json_of(&cpw(&[
        "wave", "--n", "4", "--dims", "1,1,1,1", "--proj", "2", "--cap", "2",
    ]));
    let coeffs: Vec<&str> = v["result"]["series"]["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["coeff"].as_str().unwrap())
        .collect();
    // Independent value: (2)_l (2)_l / (l! (4)_l) = 1, 1, 9/10 for l = 0, 1, 2.
    assert_eq!(coeffs, ["1", "1", "9/10"]);
}

#[test]
fn documented_examples() {
    let v = json_of(&cpw(&[
        "exotic",
        "coeff",
        "--hplus",
        "2",
        "--hminus",
        "1",
        "--structure",
        "H",
    ]));
    assert_eq!(v["result"], "2");
    let v = json_of(&cpw(&[
        "intertwiner",
        "chiral",
        "--h",
        "2",
        "--d1",
        "1",
        "--d2",
        "1",
    ]));
    assert_eq!(v["result"], serde_json::json!({"(1,1)": "-1"}));
    assert_eq!(v["checks"]["pde_residual_zero"], true);
}

#[test]
fn output_is_deterministic() {
    let args = [
        "exotic",
        "positivity",
        "--structure",
        "h",
        "--hmax",
        "3",
        "--kmax",
        "1",
    ];
    let a = cpw(&args);
    let b = cpw(&args);
    assert_eq!(a.stdout, b.stdout);
    let ma: Value = serde_json::from_slice(&a.stderr).unwrap();
    let mb: Value = serde_json::from_slice(&b.stderr).unwrap();
    assert_eq!(ma, mb);
    assert_eq!(ma["output_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn input_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let wave = cpw(&[
        "wave",
        "--n",
        "5",
        "--dims",
        "1/2,3/2,1,5/2,2",
        "--proj",
        "2,3",
        "--cap",
        "4",
    ]);
    let w = write(dir.path(), "w.json", &wave);

    let check = json_of(&cpw(&["casimir-check", "--input", &w]));
    for k in ["1", "2"] {
        assert_eq!(check["result"]["equations"][k]["zero"], true);
    }

    let red = json_of(&cpw(&["reduce", "--input", &w, "--h", "2"]));
    assert_eq!(red["result"]["outcome"], "multiple");
    assert_eq!(red["result"]["expected"]["n"], 4);

    let replayed = cpw(&["wave", "--input", &w]);
    assert_eq!(replayed.stdout, wave.stdout);

    let g = cpw(&["exotic", "g", "--cap", "7"]);
    let gp = write(dir.path(), "g.json", &g);
    let checked = json_of(&cpw(&["exotic", "g", "--input", &gp, "--check-biharmonic"]));
    assert_eq!(checked["result"]["biharmonic"]["zero"], true);
    assert_eq!(checked["result"]["biharmonic"]["valid_order"], 4);
}

#[test]
fn manifest_file_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.json");
    let o = dir.path().join("report.json");
    let out = cpw(&[
        "exotic",
        "positivity",
        "--structure",
        "e",
        "--out",
        o.to_str().unwrap(),
        "--manifest",
        m.to_str().unwrap(),
    ]);
    let v = json_of(&out);
    let manifest: Value = serde_json::from_str(&std::fs::read_to_string(&m).unwrap()).unwrap();
    assert_eq!(manifest["params"], v["params"]);
    assert!(manifest["command_line"]
        .as_str()
        .unwrap()
        .starts_with("cpw exotic positivity"));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&o).unwrap()).unwrap();
    assert_eq!(report, v);
}

#[test]
fn table_format() {
    let out = cpw(&[
        "--format",
        "table",
        "exotic",
        "amplitudes",
        "--h",
        "1",
        "--hprime",
        "1",
        "--cap",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text
        .lines()
        .any(|l| l.starts_with("result.entries.5/2") && l.ends_with("-1/3")));
}

#[test]
fn exit_codes() {
    assert_eq!(
        cpw(&["wave", "--dims", "1,x", "--cap", "2"]).status.code(),
        Some(2)
    );
    assert_eq!(cpw(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(
        cpw(&["wave", "--n", "3", "--dims", "1,1,1,1", "--cap", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        cpw(&["casimir-check", "--input", "/nonexistent.json"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        cpw(&["wave", "--n", "4", "--dims", "1,1,1,1", "--proj", "-1/2", "--cap", "3"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        cpw(&["exotic", "positivity", "--structure", "b", "--hmax", "1"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        cpw(&[
            "intertwiner",
            "tensor",
            "--kappa",
            "1",
            "--L",
            "0",
            "--d1",
            "1",
            "--d2",
            "2"
        ])
        .status
        .code(),
        Some(3)
    );
    assert_eq!(cpw(&["exotic", "build", "--name", "E6"]).status.code(), Some(0));
    assert_eq!(cpw(&["--help"]).status.code(), Some(0));
}

#[test]
fn mismatched_input_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let c = cpw(&[
        "exotic",
        "coeff",
        "--hplus",
        "2",
        "--hminus",
        "1",
        "--structure",
        "B",
    ]);
    let p = write(dir.path(), "c.json", &c);
    assert_eq!(cpw(&["reduce", "--input", &p, "--h", "2"]).status.code(), Some(2));
    assert_eq!(cpw(&["exotic", "g", "--input", &p]).status.code(), Some(2));
}

#[test]
fn failed_self_check_exits_four() {
    let dir = tempfile::tempdir().unwrap();
    let wave = cpw(&[
        "wave", "--n", "4", "--dims", "1,1,1,1", "--proj", "2", "--cap", "3",
    ]);
    let mut v: Value = serde_json::from_slice(&wave.stdout).unwrap();
    v["result"]["series"]["terms"][1]["coeff"] = "2".into();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, v.to_string()).unwrap();
    assert_eq!(
        cpw(&["casimir-check", "--input", p.to_str().unwrap()])
            .status
            .code(),
        Some(4)
    );
}
