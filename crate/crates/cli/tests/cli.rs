//! End-to-end tests of the `revrom` binary and its exit-code contract:
//! 0 success, 1 verification failure, 2 usage/schema error, 3 simulation
//! error.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn revrom(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_revrom"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

#[test]
fn build_and_analyze_rom() {
    let dir = tempfile::tempdir().unwrap();
    let out = revrom(&["build", "rom", "--n", "4", "--m", "2", "--k", "2", "-o", "rom.json"], dir.path());
    assert_eq!(code(&out), 0, "{out:?}");

    let out = revrom(&["analyze", "rom.json", "--check-theorems"], dir.path());
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("gates:           82"));
    assert!(text.contains("transistors:     522"));
    assert!(text.contains("garbage outputs: 88"));
    assert!(!text.contains("MISMATCH"));
}

#[test]
fn analyze_json_format() {
    let dir = tempfile::tempdir().unwrap();
    revrom(&["build", "rom", "--n", "4", "--m", "4", "--k", "2", "-o", "rom.json"], dir.path());
    let out = revrom(
        &["analyze", "rom.json", "--check-theorems", "--format", "json"],
        dir.path(),
    );
    assert_eq!(code(&out), 0);
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["report"]["gate_count"], 146);
    assert_eq!(value["report"]["transistor_count"], 938);
    assert_eq!(value["report"]["garbage_outputs"], 152);
    assert_eq!(value["theorems"]["match"], true);
}

#[test]
fn build_decoder_has_one_hl_gate() {
    let dir = tempfile::tempdir().unwrap();
    let out = revrom(&["build", "decoder", "--n", "2", "-o", "dec.json"], dir.path());
    assert_eq!(code(&out), 0);
    let netlist: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("dec.json")).unwrap()).unwrap();
    let gates = netlist["gates"].as_array().unwrap();
    assert_eq!(gates.len(), 1);
    assert_eq!(gates[0]["kind"], "HL");
}

#[test]
fn invalid_build_params_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = revrom(&["build", "rom", "--n", "4", "--m", "0", "--k", "2", "-o", "x.json"], dir.path());
    assert_eq!(code(&out), 2);
    let out = revrom(&["build", "decoder", "--n", "1", "-o", "x.json"], dir.path());
    assert_eq!(code(&out), 2);
}

#[test]
fn build_output_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    revrom(&["build", "rom", "--n", "4", "--m", "1", "--k", "2", "-o", "a.json"], dir.path());
    revrom(&["build", "rom", "--n", "4", "--m", "1", "--k", "2", "-o", "b.json"], dir.path());
    let a = fs::read_to_string(dir.path().join("a.json")).unwrap();
    let b = fs::read_to_string(dir.path().join("b.json")).unwrap();
    assert_eq!(a, b);
    // re-reading and re-writing the canonical form changes nothing
    let netlist = revrom::Netlist::from_json(&a).unwrap();
    assert_eq!(netlist.to_canonical_json(), a);
}

#[test]
fn analyze_rejects_fanout_file_with_2() {
    let dir = tempfile::tempdir().unwrap();
    revrom(&["build", "dff", "-o", "dff.json"], dir.path());
    let path = dir.path().join("dff.json");
    // hand-edit: make the data wire feed the gate twice
    let edited = fs::read_to_string(&path).unwrap().replace(
        "\"np.fb\",\n        \"np.dc\"",
        "\"D\",\n        \"np.dc\"",
    );
    assert_ne!(edited, fs::read_to_string(&path).unwrap(), "edit must apply");
    fs::write(&path, edited).unwrap();
    let out = revrom(&["analyze", "dff.json"], dir.path());
    assert_eq!(code(&out), 2);
}

#[test]
fn analyze_dff_delay() {
    let dir = tempfile::tempdir().unwrap();
    revrom(&["build", "dff", "-o", "dff.json"], dir.path());
    let out = revrom(&["analyze", "dff.json"], dir.path());
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("delay:           5"));
}

#[test]
fn sim_dff_follows_characteristic_equation() {
    let dir = tempfile::tempdir().unwrap();
    revrom(&["build", "dff", "-o", "dff.json"], dir.path());
    fs::write(dir.path().join("v.csv"), "E,D\n1,1\n0,0\n0,1\n1,0\n0,1\n").unwrap();
    for backend in ["func", "switch"] {
        let out = revrom(
            &["sim", "dff.json", "--vectors", "v.csv", "--backend", backend],
            dir.path(),
        );
        assert_eq!(code(&out), 0);
        assert_eq!(stdout(&out), "Q\n1\n1\n1\n0\n0\n", "backend {backend}");
    }
}

#[test]
fn sim_empty_vectors_is_ok() {
    let dir = tempfile::tempdir().unwrap();
    revrom(&["build", "dff", "-o", "dff.json"], dir.path());
    fs::write(dir.path().join("v.csv"), "E,D\n").unwrap();
    let out = revrom(&["sim", "dff.json", "--vectors", "v.csv"], dir.path());
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "Q\n");
}

#[test]
fn sim_writes_vcd_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    revrom(&["build", "decoder", "--n", "2", "-o", "dec.json"], dir.path());
    fs::write(dir.path().join("v.csv"), "i1,i2\n1,0\n").unwrap();
    let out = revrom(
        &["sim", "dec.json", "--vectors", "v.csv", "--vcd", "dec.vcd", "-o", "out.csv"],
        dir.path(),
    );
    assert_eq!(code(&out), 0);
    let csv = fs::read_to_string(dir.path().join("out.csv")).unwrap();
    assert_eq!(csv, "d0,d1,d2,d3\n0,0,1,0\n");
    let vcd = fs::read_to_string(dir.path().join("dec.vcd")).unwrap();
    assert!(vcd.contains("$timescale"));
    assert!(vcd.contains("#0"));
}

#[test]
fn sim_rom_register_scenario() {
    // hold the eight data inputs fixed, sweep the four addresses of the
    // first row, and expect the addressed register on the outputs
    let dir = tempfile::tempdir().unwrap();
    revrom(&["build", "rom", "--n", "2", "--m", "2", "--k", "2", "-o", "rom.json"], dir.path());
    let fills = ["1,0", "0,1", "1,1", "0,0"];
    let mut csv = String::from("I1,I2,R1D0,R1D1,R2D0,R2D1,R3D0,R3D1,R4D0,R4D1\n");
    for a in 0..4 {
        csv.push_str(&format!("{},{},{}\n", a >> 1, a & 1, fills.join(",")));
    }
    fs::write(dir.path().join("v.csv"), csv).unwrap();
    let out = revrom(&["sim", "rom.json", "--vectors", "v.csv"], dir.path());
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "Q0,Q1\n1,0\n0,1\n1,1\n0,0\n");
}

#[test]
fn verify_gate_and_circuits() {
    let dir = tempfile::tempdir().unwrap();
    let out = revrom(&["verify", "gate", "NP", "--exhaustive"], dir.path());
    assert_eq!(code(&out), 0, "{out:?}");

    revrom(&["build", "decoder", "--n", "3", "-o", "dec3.json"], dir.path());
    let out = revrom(&["verify", "circuit", "dec3.json", "--injective"], dir.path());
    assert_eq!(code(&out), 0, "{out:?}");

    revrom(&["build", "rom", "--n", "4", "--m", "1", "--k", "2", "-o", "rom.json"], dir.path());
    let out = revrom(
        &["verify", "circuit", "rom.json", "--backend-equivalence", "--sample", "50", "--seed", "7"],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "{out:?}");
}

#[test]
fn verify_rejects_injectivity_on_sequential() {
    let dir = tempfile::tempdir().unwrap();
    revrom(&["build", "dff", "-o", "dff.json"], dir.path());
    let out = revrom(&["verify", "circuit", "dff.json", "--injective"], dir.path());
    assert_eq!(code(&out), 2);
}

#[test]
fn verify_gate_requires_exhaustive_flag() {
    let dir = tempfile::tempdir().unwrap();
    let out = revrom(&["verify", "gate", "NP"], dir.path());
    assert_eq!(code(&out), 2);
}

#[test]
fn export_formats() {
    let dir = tempfile::tempdir().unwrap();
    revrom(&["build", "dff", "-o", "dff.json"], dir.path());
    let out = revrom(&["export", "dff.json", "--format", "transistor", "-o", "dff.tn"], dir.path());
    assert_eq!(code(&out), 0);
    let tn = fs::read_to_string(dir.path().join("dff.tn")).unwrap();
    assert_eq!(tn.lines().filter(|l| l.starts_with("T ")).count(), 9);

    revrom(&["build", "decoder", "--n", "2", "-o", "dec.json"], dir.path());
    let out = revrom(&["export", "dec.json", "--format", "dot", "-o", "dec.dot"], dir.path());
    assert_eq!(code(&out), 0);
    let dot = fs::read_to_string(dir.path().join("dec.dot")).unwrap();
    assert_eq!(dot.matches("shape=box").count(), 1);
    assert_eq!(dot.matches(" -> ").count(), 8);

    let out = revrom(&["export", "dec.json", "--format", "vcd-template", "-o", "t.csv"], dir.path());
    assert_eq!(code(&out), 0);
    assert_eq!(fs::read_to_string(dir.path().join("t.csv")).unwrap(), "i1,i2\n0,0\n");
}

#[test]
fn export_missing_file_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = revrom(&["export", "absent.json", "--format", "dot", "-o", "x.dot"], dir.path());
    assert_eq!(code(&out), 2);
}

#[test]
fn backend_equivalence_seed_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    revrom(&["build", "dff", "--complement", "-o", "dff.json"], dir.path());
    let args = ["verify", "circuit", "dff.json", "--backend-equivalence", "--sample", "64", "--seed", "3"];
    let a = revrom(&args, dir.path());
    let b = revrom(&args, dir.path());
    assert_eq!(code(&a), 0);
    assert_eq!(stdout(&a), stdout(&b));
}
