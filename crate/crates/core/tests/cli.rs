use std::path::Path;
use std::process::{Command, Output};

use cheeger_core::measure::measure;
use cheeger_core::porous::{build_omega0, default_sequences, IndexPair};
use cheeger_core::DomainSpec;

fn cheeger(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cheeger")).current_dir(dir).args(args).output().expect("run cheeger")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn build_cantor_reports_bump_count() {
    let dir = tempfile::tempdir().unwrap();
    let o = cheeger(dir.path(), &["build", "cantor", "--eps", "0.04", "--depth", "20"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains(&((1u64 << 20) - 1).to_string()));
    let spec = DomainSpec::load(&dir.path().join("out/cantor.json")).unwrap();
    assert_eq!(spec.obstacle_count(), (1 << 20) - 1);
}

#[test]
fn build_porous_validates() {
    let dir = tempfile::tempdir().unwrap();
    let o = cheeger(dir.path(), &["build", "porous", "--eps1", "0.2", "--depth", "12"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("78") && !text.contains("FAIL"), "{text}");
    for label in ["(i)", "(ii)", "(iii)", "(iv)"] {
        assert!(text.contains(label));
    }

    let o = cheeger(dir.path(), &["build", "porous", "--eps1", "0.3"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("(ii)"), "{}", stderr(&o));
}

#[test]
fn measure_round_trip_is_bit_exact() {
    let dir = tempfile::tempdir().unwrap();
    let o = cheeger(dir.path(), &["build", "porous", "--depth", "9", "-o", "p.json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = cheeger(dir.path(), &["measure", "p.json", "--json", "m.json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("delta < 2^-7: true"));

    let seq = default_sequences(0.2, 1.0).unwrap();
    let in_memory = measure(&build_omega0(&seq, 9, IndexPair::first()).unwrap()).unwrap();
    let from_disk: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("m.json")).unwrap()).unwrap();
    let expected = serde_json::to_value(&in_memory).unwrap();
    assert_eq!(from_disk, expected);
    let lo = from_disk["perimeter"]["lo"].as_f64().unwrap();
    assert_eq!(lo.to_bits(), in_memory.perimeter.lo.to_bits());
}

#[test]
fn measure_cantor_and_disk() {
    let dir = tempfile::tempdir().unwrap();
    cheeger(dir.path(), &["build", "cantor", "--depth", "10"]);
    let o = cheeger(dir.path(), &["measure", "out/cantor.json"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("cantor gap") && text.contains("certified: true"), "{text}");

    std::fs::write(dir.path().join("disk.json"), DomainSpec::plain_disk().to_json().unwrap()).unwrap();
    let o = cheeger(dir.path(), &["measure", "disk.json"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("6.283185307"));
    assert!(stdout(&o).contains("3.141592653"));
}

#[test]
fn verify_is_seeded_and_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |seed: &str, name: &str| {
        let o =
            cheeger(dir.path(), &["--seed", seed, "verify", "lemma21", "angles", "--trials", "300", "--json", name]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        std::fs::read(dir.path().join(name)).unwrap()
    };
    let a = run("7", "a.json");
    let b = run("7", "b.json");
    let c = run("8", "c.json");
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn verify_all_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = cheeger(dir.path(), &["verify", "--all", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}\n{}", stdout(&o), stderr(&o));
    let doc: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("out/verify.json")).unwrap()).unwrap();
    assert_eq!(doc["schema"], "cheeger-verify/1");
    let reports = doc["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 6);
    assert!(reports.iter().all(|r| r["violations"] == 0));
}

#[test]
fn verify_needs_spec_for_solver_suites() {
    let dir = tempfile::tempdir().unwrap();
    let o = cheeger(dir.path(), &["verify", "density"]);
    assert_eq!(o.status.code(), Some(2));
    let o = cheeger(dir.path(), &["verify"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn solve_writes_result_and_indicator() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("disk.json"), DomainSpec::plain_disk().to_json().unwrap()).unwrap();
    let o = cheeger(dir.path(), &["solve", "disk.json", "--grid", "128", "--svg", "out/overlay.svg"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let result: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("out/result.json")).unwrap()).unwrap();
    assert_eq!(result["schema"], "cheeger-result/1");
    assert!((result["h_estimate"].as_f64().unwrap() - 2.0).abs() < 0.05);
    assert!(result["minimality_gap"].as_f64().unwrap() < 0.05);
    let pgm = std::fs::read(dir.path().join("out/indicator.pgm")).unwrap();
    assert!(pgm.starts_with(b"P5\n# cheeger-raster"));
    assert!(dir.path().join("out/overlay.svg").is_file());

    let o = cheeger(dir.path(), &["render", "disk.json", "--indicator", "out/indicator.pgm", "-o", "again.svg"]);
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.toml"), "[solver]\nouter_tol = -1\n").unwrap();
    std::fs::write(dir.path().join("typo.toml"), "sed = 3\n").unwrap();
    std::fs::write(dir.path().join("disk.json"), DomainSpec::plain_disk().to_json().unwrap()).unwrap();
    for args in [
        &["--config", "bad.toml", "solve", "disk.json"][..],
        &["--config", "typo.toml", "verify", "--all"],
        &["solve", "missing.json"],
        &["solve", "disk.json", "--grid", "8"],
        &["render", "disk.json", "--zoom", "1,2"],
        &["frobnicate"],
    ] {
        let o = cheeger(dir.path(), args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
    assert!(!dir.path().join("out/result.json").exists());
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("run.toml"), "output_dir = \"results\"\n[porous]\ndepth = 3\n").unwrap();
    let o = cheeger(dir.path(), &["--config", "run.toml", "build", "porous"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let spec = DomainSpec::load(&dir.path().join("results/porous.json")).unwrap();
    assert_eq!(spec.obstacle_count(), 6);
}

#[test]
fn render_outputs_are_stable() {
    let dir = tempfile::tempdir().unwrap();
    cheeger(dir.path(), &["build", "porous", "--depth", "6"]);
    cheeger(dir.path(), &["build", "cantor", "--depth", "8"]);
    std::fs::write(dir.path().join("disk.json"), DomainSpec::plain_disk().to_json().unwrap()).unwrap();
    let render = |args: &[&str]| {
        let o = cheeger(dir.path(), args);
        assert!(o.status.success(), "{args:?}: {}", stderr(&o));
        o
    };
    render(&["render", "out/porous.json", "--triptych", "-o", "t1.svg"]);
    render(&["render", "out/porous.json", "--triptych", "-o", "t2.svg"]);
    let t1 = std::fs::read_to_string(dir.path().join("t1.svg")).unwrap();
    assert_eq!(t1, std::fs::read_to_string(dir.path().join("t2.svg")).unwrap());
    assert_eq!(t1.matches("<svg").count(), 4);

    render(&["render", "out/cantor.json"]);
    assert!(dir.path().join("out/omega_eps.svg").is_file());
    render(&["render", "--bump", "0.2"]);
    let bump = std::fs::read_to_string(dir.path().join("out/bump.svg")).unwrap();
    assert!(bump.starts_with("<svg") && bump.contains("<path"));

    render(&["render", "disk.json", "-o", "d.svg"]);
    let d = std::fs::read_to_string(dir.path().join("d.svg")).unwrap();
    assert_eq!(d.matches("<circle").count(), 1);

    let o = render(&["render", "out/cantor.json", "--zoom", "0.9,0.9,0.3", "-o", "z.svg"]);
    assert!(stderr(&o).contains("warning"), "{}", stderr(&o));
}
