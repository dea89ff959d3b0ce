use std::path::Path;
use std::process::{Command, Output};

use muskat::cli::Resolved;
use muskat::evolution::evolve;
use muskat::{FluxSchedule, Mobility, Shape, Trajectory};

fn muskat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_muskat")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn simulate_circle_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.json");
    let r = muskat(&["simulate", "--family", "circle", "--a0", "1", "--flux", "const:6.283185307179586", "--t-end", "1.5", "--out", p(&out)]);
    assert_eq!(code(&r), 0, "{}", String::from_utf8_lossy(&r.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let traj: Trajectory = serde_json::from_str(&text).unwrap();
    assert!((traj.last().params.a - 2.0).abs() < 1e-10);
    assert_eq!(traj.terminal.kind.name(), "time_end");
    let direct = evolve(
        Shape::circle(1.0).unwrap(),
        &FluxSchedule::Constant { q: 6.283185307179586 },
        1.5,
        1e-3,
        Mobility::default(),
    )
    .unwrap();
    assert_eq!(traj, direct);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    for key in ["family", "mobility", "schedule", "dt"] {
        assert!(v["meta"].get(key).is_some(), "meta.{key}");
    }
    let s0 = &v["samples"][0];
    for key in ["t", "params", "rates", "area", "fluxes"] {
        assert!(s0.get(key).is_some(), "samples[0].{key}");
    }
    assert!(s0["fluxes"][0].get("support_kind").is_some());
    assert!(text.contains("\"dt\":1.0000000000000000e-3"));
}

#[test]
fn unknown_family_is_a_config_error() {
    let r = muskat(&["simulate", "--family", "square"]);
    assert_eq!(code(&r), 2);
    assert!(String::from_utf8_lossy(&r.stderr).contains("family"));
}

#[test]
fn neumann_extraction_ends_in_a_split() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("n.json");
    let r = muskat(&["simulate", "--family", "neumann", "--flux", "const:-3.141592653589793", "--t-end", "3", "--out", p(&out)]);
    assert_eq!(code(&r), 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["terminal"]["kind"], "neumann_split");
    assert!((v["terminal"]["t"].as_f64().unwrap() - 1.25).abs() < 1e-6);
}

#[test]
fn field_csv_shape_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for out in [&a, &b] {
        let r = muskat(&["field", "--family", "circle", "--grid", "-1,1,-1,1,3,3", "--out", p(out)]);
        assert_eq!(code(&r), 0, "{}", String::from_utf8_lossy(&r.stderr));
    }
    let text = std::fs::read(&a).unwrap();
    assert_eq!(text, std::fs::read(&b).unwrap());
    let text = String::from_utf8(text).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,y,fluid,pressure,vx,vy"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 9);
    // row-major: y outer, x inner
    let xy: Vec<(f64, f64)> = rows.iter().map(|r| (r[0].parse().unwrap(), r[1].parse().unwrap())).collect();
    assert_eq!(xy[1], (0.0, -1.0));
    assert_eq!(xy[3], (-1.0, 0.0));
    for r in &rows {
        assert!(r[2] == "1" || r[2] == "2");
    }
    // the centre is the point sink: empty cells
    assert_eq!(&rows[4][3..], &["", "", ""]);
    // (+-1, 0) and (0, +-1) are on the interface: zero gauge
    for i in [1, 3, 5, 7] {
        assert!(rows[i][3].parse::<f64>().unwrap().abs() < 1e-6);
    }
}

#[test]
fn verify_defaults_pass_for_every_family() {
    for family in ["circle", "ellipse", "neumann", "cassini"] {
        let r = muskat(&["verify", "--family", family]);
        assert_eq!(code(&r), 0, "{family}: {}", String::from_utf8_lossy(&r.stderr));
        let report: serde_json::Value = serde_json::from_slice(&r.stdout).unwrap();
        assert_eq!(report["passed"], true);
    }
}

#[test]
fn corrupted_density_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    let report = dir.path().join("report.json");
    std::fs::write(&cfg, r#"{"family": "neumann", "density_scale": 1.01}"#).unwrap();
    let r = muskat(&["verify", "--config", p(&cfg), "--out", p(&report)]);
    assert_eq!(code(&r), 1);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let failed: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(!failed.is_empty() && failed.iter().all(|n| *n == "density_jump"), "{failed:?}");
}

#[test]
fn empty_check_list_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"checks": []}"#).unwrap();
    assert_eq!(code(&muskat(&["verify", "--config", p(&cfg)])), 2);
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"family": "square", "a0": 3.0}"#).unwrap();
    let options = muskat::cli::Options {
        config: Some(cfg.clone()),
        family: Some("ellipse".into()),
        ..Default::default()
    };
    let r = Resolved::from_options(&options).unwrap();
    assert_eq!(r.shape, Shape::ellipse(3.0, 1.0).unwrap());
    assert_eq!(code(&muskat(&["verify", "--config", p(&cfg)])), 2);
}

#[test]
fn table_flux_schedule() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("q.txt");
    std::fs::write(&table, "# t q\n0 6.283185307179586\n10, 6.283185307179586\n").unwrap();
    let spec = format!("table:{}", p(&table));
    let r = muskat(&["simulate", "--flux", &spec, "--t-end", "1.5"]);
    assert_eq!(code(&r), 0);
    let traj: Trajectory = serde_json::from_slice(&r.stdout).unwrap();
    assert!((traj.last().params.a - 2.0).abs() < 1e-10);
    assert_eq!(code(&muskat(&["simulate", "--flux", "table:/does/not/exist"])), 2);
}

#[test]
fn invalid_variant_combinations() {
    assert_eq!(code(&muskat(&["simulate", "--family", "ellipse", "--variant", "constant-area"])), 2);
    assert_eq!(code(&muskat(&["field", "--family", "neumann", "--gamma", "1"])), 2);
    assert_eq!(code(&muskat(&["field", "--variant", "wobbly"])), 2);
    assert_eq!(code(&muskat(&["verify", "--family", "ellipse", "--variant", "constant-area"])), 0);
    assert_eq!(code(&muskat(&["verify", "--family", "circle", "--gamma", "0.5"])), 0);
}

#[test]
fn unwritable_output_is_a_runtime_error() {
    assert_eq!(code(&muskat(&["simulate", "--out", "/nonexistent-dir/x.json"])), 3);
}

#[test]
fn plot_trajectory_and_failures() {
    let dir = tempfile::tempdir().unwrap();
    let traj = dir.path().join("t.json");
    assert_eq!(code(&muskat(&["simulate", "--family", "cassini", "--t-end", "0.5", "--out", p(&traj)])), 0);
    let mut svgs = vec![];
    for name in ["a.svg", "b.svg"] {
        let out = dir.path().join(name);
        let r = muskat(&["plot", p(&traj), "--out", p(&out)]);
        assert_eq!(code(&r), 0, "{}", String::from_utf8_lossy(&r.stderr));
        svgs.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(svgs[0], svgs[1]);
    let svg = String::from_utf8(svgs.remove(0)).unwrap();
    assert!(svg.contains("class=\"legend\"") && svg.contains("stroke-dasharray"));

    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&traj).unwrap()).unwrap();
    v["samples"] = serde_json::json!([]);
    let empty = dir.path().join("empty.json");
    std::fs::write(&empty, v.to_string()).unwrap();
    assert_eq!(code(&muskat(&["plot", p(&empty)])), 2);

    let junk = dir.path().join("junk.json");
    std::fs::write(&junk, "{not json").unwrap();
    assert_eq!(code(&muskat(&["plot", p(&junk)])), 2);
}

#[test]
fn plot_field_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("f.csv");
    assert_eq!(code(&muskat(&["field", "--family", "neumann", "--grid", "-3,3,-3,3,12,12", "--out", p(&csv)])), 0);
    let r = muskat(&["plot", p(&csv)]);
    assert_eq!(code(&r), 0);
    assert!(String::from_utf8_lossy(&r.stdout).starts_with("<svg"));
}
