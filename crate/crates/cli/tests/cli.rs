use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use su11_walk_cli::table::ResultTable;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_su11walk"))
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> Output {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn fig3b_run_writes_two_hundred_rows_and_echoes_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("fig3b.json");
    ok(&["run", "--config", s(&cfg), "--out", s(dir.path())]);
    let table = ResultTable::read(&dir.path().join("fig3b.probabilities.csv")).unwrap();
    assert_eq!(table.rows.len(), 200);
    assert_eq!(table.columns, ["site", "probability", "raw"]);
    let total: f64 = table.column("probability").unwrap().iter().sum();
    assert!((total - 1.0).abs() < 1e-12);

    let original: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&cfg).unwrap()).unwrap();
    let echo = &table.metadata.config;
    for key in [
        "name",
        "frame",
        "sites",
        "steps",
        "start",
        "phase_mode",
        "outputs",
    ] {
        assert_eq!(echo[key], original[key], "{key}");
    }
}

#[test]
fn echoed_config_replays_byte_identically() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("fig5-k0.75.json");
    ok(&["run", "--config", s(&cfg), "--out", s(dir.path())]);
    let meta = dir.path().join("fig5-k0.75.sigma.meta.json");
    let echo: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&meta).unwrap()).unwrap();
    let replay_cfg = dir.path().join("replay.json");
    fs::write(&replay_cfg, serde_json::to_string(&echo["config"]).unwrap()).unwrap();

    let replay = dir.path().join("replay");
    ok(&["run", "--config", s(&replay_cfg), "--out", s(&replay)]);
    for file in ["fig5-k0.75.sigma.csv", "fig5-k0.75.sigma.meta.json"] {
        assert_eq!(
            fs::read(dir.path().join(file)).unwrap(),
            fs::read(replay.join(file)).unwrap(),
            "{file}"
        );
    }
}

#[test]
fn outputs_are_deterministic_in_every_format() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let cfg = configs().join("fig3a.json");
    for dir in [&a, &b] {
        for format in ["csv", "json"] {
            ok(&[
                "run",
                "--config",
                s(&cfg),
                "--out",
                s(dir.path()),
                "--format",
                format,
            ]);
        }
        let table = dir.path().join("fig3a.probabilities.csv");
        ok(&["chart", s(&table), "--out", s(dir.path()), "--name", "p"]);
    }
    for file in [
        "fig3a.probabilities.csv",
        "fig3a.probabilities.meta.json",
        "fig3a.probabilities.json",
        "p.svg",
    ] {
        let x = fs::read(a.path().join(file)).unwrap();
        assert!(!x.is_empty());
        assert_eq!(x, fs::read(b.path().join(file)).unwrap(), "{file}");
    }
}

#[test]
fn zero_steps_puts_all_mass_on_the_start_site() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("z.json");
    // exact in the ideal frame; su11:10,2 on 30 sites leaks below 1e-15
    for (frame, tol) in [("ideal", 0.0), ("su11:10,2", 1e-15)] {
        fs::write(
            &cfg,
            format!(r#"{{"name": "z", "frame": "{frame}", "sites": 30, "steps": 0, "start": -4}}"#),
        )
        .unwrap();
        ok(&[
            "run",
            "--config",
            s(&cfg),
            "--out",
            s(dir.path()),
            "--format",
            "json",
        ]);
        let t = ResultTable::read(&dir.path().join("z.probabilities.json")).unwrap();
        for row in &t.rows {
            let expected = if row[0] == -4.0 { 1.0 } else { 0.0 };
            assert!((row[1] - expected).abs() <= tol, "{frame} {row:?}");
        }
    }
}

#[test]
fn zero_steps_spreads_over_overlapping_neighbours() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("z.json");
    fs::write(
        &cfg,
        r#"{"name": "z", "frame": "hw:1.5", "sites": 30, "steps": 0, "start": 0}"#,
    )
    .unwrap();
    ok(&["run", "--config", s(&cfg), "--out", s(dir.path())]);
    let t = ResultTable::read(&dir.path().join("z.probabilities.csv")).unwrap();
    let p = t.column("probability").unwrap();
    let peak = t.rows.iter().find(|r| r[0] == 0.0).unwrap()[1];
    assert!(p.iter().all(|&v| v <= peak));
    assert!(peak < 0.5);
}

#[test]
fn fig6_configs_produce_entropy_tables() {
    let dir = tempfile::tempdir().unwrap();
    for r in ["0.5", "3"] {
        for c in ["a", "b"] {
            let cfg = configs().join(format!("fig6{c}-r{r}.json"));
            ok(&["run", "--config", s(&cfg), "--out", s(dir.path())]);
        }
    }
    let late = |name: &str| {
        let t = ResultTable::read(&dir.path().join(format!("{name}.entropy.csv"))).unwrap();
        let e = t.column("entropy").unwrap();
        assert_eq!(e.len(), 91);
        e[60..].iter().sum::<f64>() / 31.0
    };
    assert!((late("fig6a-r0.5") - late("fig6b-r0.5")).abs() > 0.05);
    assert!((late("fig6a-r3") - late("fig6b-r3")).abs() < 0.03);
}

#[test]
fn mode_override_changes_results_in_nonorthogonal_frame() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("m.json");
    fs::write(
        &cfg,
        r#"{"name": "m", "frame": "su11:0.25,0.5", "sites": 16, "steps": 10}"#,
    )
    .unwrap();
    let phys = dir.path().join("phys");
    let ideal = dir.path().join("ideal");
    ok(&["run", "--config", s(&cfg), "--out", s(&phys)]);
    ok(&[
        "run",
        "--config",
        s(&cfg),
        "--out",
        s(&ideal),
        "--mode",
        "paper-idealized",
    ]);
    let a = ResultTable::read(&phys.join("m.probabilities.csv")).unwrap();
    let b = ResultTable::read(&ideal.join("m.probabilities.csv")).unwrap();
    assert_eq!(b.metadata.config["phase_mode"], "paper-idealized");
    let gap = a
        .column("probability")
        .unwrap()
        .iter()
        .zip(b.column("probability").unwrap())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    assert!(gap > 1e-3);
}

#[test]
fn overlap_tables_reproduce_closed_form_and_monotonicity() {
    let dir = tempfile::tempdir().unwrap();
    ok(&[
        "overlap",
        "--config",
        s(&configs().join("fig2a-overlap.json")),
        "--out",
        s(dir.path()),
    ]);
    let t = ResultTable::read(&dir.path().join("fig2a-overlap.csv")).unwrap();
    assert_eq!(t.rows.len(), 361);
    let zero = &t.rows[180];
    assert_eq!(zero[0], 0.0);
    assert!(zero[1..].iter().all(|&v| v == 1.0));
    let col = t.column_index("k=0.25,r=2").unwrap();
    let at_pi = t.rows.last().unwrap()[col];
    assert!((at_pi - 0.19137).abs() < 1e-5);
    assert!((at_pi - 4f64.cosh().powf(-0.5)).abs() < 1e-14);
    assert_eq!(t.metadata.notes["decreasing_in_k"], true);

    ok(&[
        "overlap",
        "--k",
        "10",
        "--r",
        "0.5,1,1.5,2",
        "--points",
        "33",
        "--name",
        "b",
        "--out",
        s(dir.path()),
    ]);
    let t = ResultTable::read(&dir.path().join("b.csv")).unwrap();
    assert_eq!(t.columns.len(), 5);
    assert_eq!(t.metadata.notes["decreasing_in_r"], true);
}

#[test]
fn crosscheck_suites() {
    let dir = tempfile::tempdir().unwrap();
    let out = ok(&["crosscheck", "--out", s(dir.path())]);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(stdout.lines().filter(|l| l.starts_with("pass")).count(), 8);

    let out = ok(&[
        "crosscheck",
        "--config",
        s(&configs().join("crosscheck-with-idealized.json")),
        "--out",
        s(dir.path()),
        "--format",
        "json",
    ]);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.lines().any(|l| l.starts_with("expected-divergence")));
    let t = ResultTable::read(&dir.path().join("crosscheck-with-idealized.json")).unwrap();
    assert_eq!(t.rows.len(), 16);
    let expected = t.column("expected_divergence").unwrap();
    assert_eq!(expected.iter().filter(|&&v| v == 1.0).count(), 8);

    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{ \"name\": \"x\", \"k\": [0.25] ").unwrap();
    assert_eq!(
        run(&["crosscheck", "--config", s(&bad)]).status.code(),
        Some(2)
    );

    fs::write(&bad, r#"{"name": "x", "k": [0.25], "r": [3.0]}"#).unwrap();
    let out = run(&["crosscheck", "--config", s(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("r=3"));
}

#[test]
fn charts_render_bar_and_overlay() {
    let dir = tempfile::tempdir().unwrap();
    let d = s(dir.path());
    for name in ["fig5-ideal", "fig5-k0.75", "fig5-k10"] {
        ok(&[
            "run",
            "--config",
            s(&configs().join(format!("{name}.json"))),
            "--out",
            d,
        ]);
    }
    ok(&[
        "chart",
        &format!("{d}/fig5-ideal.sigma.csv"),
        &format!("{d}/fig5-k0.75.sigma.csv"),
        &format!("{d}/fig5-k10.sigma.csv"),
        "--config",
        s(&configs().join("chart-fig5.json")),
        "--out",
        d,
    ]);
    let svg = fs::read_to_string(dir.path().join("fig5.svg")).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 3);
    for label in ["ideal", "k=3/4", "k=10", "step l"] {
        assert!(svg.contains(&format!(">{label}</text>")), "{label}");
    }

    ok(&[
        "run",
        "--config",
        s(&configs().join("fig3b.json")),
        "--out",
        d,
    ]);
    ok(&[
        "chart",
        &format!("{d}/fig3b.probabilities.csv"),
        "--config",
        s(&configs().join("chart-fig3.json")),
        "--out",
        d,
    ]);
    let svg = fs::read_to_string(dir.path().join("fig3b.probabilities.svg")).unwrap();
    assert!(svg.contains("<rect x=") && svg.contains(">site n</text>"));
}

#[test]
fn chart_errors_write_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.csv");
    fs::write(&empty, "step,sigma\n").unwrap();
    let out = run(&["chart", s(&empty), "--out", s(dir.path())]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no rows"));
    assert!(!dir.path().join("empty.svg").exists());

    let t = dir.path().join("t.csv");
    fs::write(&t, "step,sigma\n0,0\n1,0.5\n").unwrap();
    let out = run(&["chart", s(&t), "--y", "entropy", "--out", s(dir.path())]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no column `entropy`"));
    assert!(!dir.path().join("t.svg").exists());
}

#[test]
fn usage_and_config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["run"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        run(&["run", "--config", "missing.json"]).status.code(),
        Some(2)
    );
    let cfg = dir.path().join("c.json");
    fs::write(&cfg, r#"{"name": "c", "frame": "su11:10,2", "sites": 1}"#).unwrap();
    let out = run(&["run", "--config", s(&cfg)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sites"));

    fs::write(&cfg, r#"{"name": "c", "frame": "ideal"}"#).unwrap();
    let out = run(&["run", "--config", s(&cfg), "--format", "xml"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["run", "--config", s(&cfg), "--mode", "wrong"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unwritable_output_is_a_runtime_failure() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    fs::write(
        &cfg,
        r#"{"name": "c", "frame": "ideal", "sites": 8, "steps": 2}"#,
    )
    .unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "").unwrap();
    let out = run(&["run", "--config", s(&cfg), "--out", s(&blocker.join("sub"))]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn every_committed_config_loads() {
    use su11_walk_cli::config::{
        load, ChartSpec, CrossCheckSuite, ExperimentConfig, OverlapConfig,
    };
    let mut n = 0;
    for entry in fs::read_dir(configs()).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap().to_str().unwrap().to_owned();
        let loaded = if name.starts_with("chart-") {
            load::<ChartSpec>(&path).map(drop)
        } else if name.starts_with("crosscheck-") {
            load::<CrossCheckSuite>(&path).map(drop)
        } else if name.ends_with("-overlap.json") {
            load::<OverlapConfig>(&path).map(drop)
        } else {
            load::<ExperimentConfig>(&path).map(drop)
        };
        assert!(loaded.is_ok(), "{name}: {:?}", loaded.err());
        n += 1;
    }
    assert!(n >= 20);
}
