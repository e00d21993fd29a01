use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn statdyn(args: &[&str], config: Option<&Path>, out: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_statdyn"));
    cmd.args(args);
    if let Some(c) = config {
        cmd.arg("--config").arg(c);
    }
    if let Some(o) = out {
        cmd.arg("--out").arg(o);
    }
    cmd.output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn stderr_json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stderr).unwrap_or_else(|_| panic!("stderr is JSON: {}", String::from_utf8_lossy(&o.stderr)))
}

const IHO: &str = r#"
scenario = "iho"
statistics = "fermion"

[initial]
x0 = 0.7
xdot0 = -0.3

[output]
csv = "iho.csv"
metadata = "iho.json"
plot = "iho.svg"
plot_columns = ["x", "xdot"]
"#;

#[test]
fn iho_run_writes_table_metadata_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "iho.toml", IHO);
    let out = dir.path().join("out");
    let o = statdyn(&["run", "--seed", "7"], Some(&cfg), Some(&out));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let csv = std::fs::read_to_string(out.join("iho.csv")).unwrap();
    assert!(!csv.contains('\r'));
    let lines: Vec<&str> = csv.lines().collect();
    assert!(lines[0].starts_with("# config_hash=") && lines[0].len() == "# config_hash=".len() + 64);
    assert_eq!(lines[1], "t,x,p,xdot,E");
    assert_eq!(lines.len(), 2 + 1001);
    let first: Vec<f64> = lines[2].split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(first[0], 0.0);
    assert!((first[1] - 0.7).abs() < 1e-15);
    assert!((first[3] + 0.3).abs() < 1e-12);
    let second: Vec<&str> = lines[3].split(',').collect();
    assert_eq!(second[0].parse::<f64>().unwrap(), 0.01);
    // 17 significant digits.
    assert!(second.iter().all(|v| v.split('e').next().unwrap().trim_start_matches('-').len() == 18));

    let meta: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("iho.json")).unwrap()).unwrap();
    assert_eq!(meta["summary"]["kind"], "reflect");
    assert_eq!(meta["seed"], 7);
    assert_eq!(meta["integrator"]["rel_tol"], 1e-9);
    assert_eq!(meta["integrator"]["t_end"], 10.0);
    assert_eq!(meta["config"]["statistics"], "fermion");
    assert!(meta["version"].is_string() && meta["wall_time_s"].is_number());
    assert_eq!(meta["config_hash"].as_str().unwrap(), &lines[0]["# config_hash=".len()..]);

    let svg = std::fs::read_to_string(out.join("iho.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.matches("<polyline").count() == 2);
}

#[test]
fn error_categories_have_distinct_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("bad_stats.toml", IHO.replace("fermion", "anyon"), 2, "schema"),
        ("unknown_key.toml", format!("{IHO}\n[extra]\nkey = 1\n"), 2, "schema"),
        ("broken.toml", "scenario = \"iho\"\n[initial\n".to_string(), 3, "config-parse"),
        (
            "singular.toml",
            "scenario = \"iho\"\nstatistics = \"boson\"\n[initial]\nx0 = 0.0\nxdot0 = 0.0\n".to_string(),
            4,
            "numerical",
        ),
    ];
    for (name, body, code, kind) in cases {
        let cfg = write_config(dir.path(), name, &body);
        let o = statdyn(&["run"], Some(&cfg), Some(dir.path()));
        assert_eq!(o.status.code(), Some(code), "{name}");
        let err = stderr_json(&o);
        assert_eq!(err["error"], kind, "{name}");
        assert_eq!(err["exit_code"], code);
        assert!(err["message"].is_string());
        if name == "singular.toml" {
            assert_eq!(err["category"], "singular");
        }
    }
    let o = statdyn(&["run"], Some(&dir.path().join("missing.toml")), Some(dir.path()));
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stderr_json(&o)["error"], "io");

}

#[test]
fn lll2_table_has_all_coordinates_on_the_default_grid() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "lll2.toml",
        r#"
scenario = "lll2"
statistics = "boson"
[potential]
u = 1.0
v = 0.4
[initial]
particles = [[1.0, 0.5], [-0.8, -0.2]]
[integrator]
t_end = 2.0
"#,
    );
    let o = statdyn(&["run"], Some(&cfg), Some(dir.path()));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[1], "t,Z_re,Z_im,z_re,z_im,z1_re,z1_im,z2_re,z2_im,E,E_cm");
    assert_eq!(lines.len(), 2 + 201);
    let row: Vec<f64> = lines[2].split(',').map(|v| v.parse().unwrap()).collect();
    assert!((row[5] - 1.0).abs() < 1e-15 && (row[8] + 0.2).abs() < 1e-15);
    let last: Vec<f64> = lines.last().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert!((last[0] - 2.0).abs() < 1e-12);
    assert!(((last[9] - row[9]) / row[9]).abs() < 1e-6);
}

const SWEEP: &str = r#"
scenario = "iho"
[initial]
x0 = 0.7
xdot0 = -0.3
[sweep]
summary = "summary.csv"
[[sweep.axis]]
parameter = "statistics"
labels = ["boson", "fermion"]
[[sweep.axis]]
parameter = "x0"
values = [0.7, 0.0]
"#;

#[test]
fn sweep_rows_are_ordered_and_errors_stay_in_their_row() {
    let dir = tempfile::tempdir().unwrap();
    let body = format!("{SWEEP}\n[[sweep.axis]]\nparameter = \"xdot0\"\nvalues = [-0.3, 0.0]\n");
    let cfg = write_config(dir.path(), "sweep.toml", &body);
    let o = statdyn(&["sweep", "--jobs", "3"], Some(&cfg), Some(dir.path()));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(
        lines[1],
        "cell,statistics,x0,xdot0,energy,kind,closest_approach,turning_time,energy_drift,error"
    );
    assert_eq!(lines.len(), 2 + 8);
    let cells: Vec<Vec<&str>> = lines[2..].iter().map(|l| l.split(',').collect()).collect();
    for (i, c) in cells.iter().enumerate() {
        assert_eq!(c[0], i.to_string());
        assert_eq!(c[1], if i < 4 { "boson" } else { "fermion" });
    }
    // Last axis varies fastest: (0.7, -0.3), (0.7, 0), (0, -0.3), (0, 0).
    for base in [0, 4] {
        assert_eq!(cells[base][5], "reflect");
        assert!(cells[base].last().unwrap().is_empty());
        assert!(cells[base + 3][4].is_empty());
    }
    // The pair at rest on the origin is singular for bosons.
    assert!(cells[3].last().unwrap().starts_with("singular:"), "{:?}", cells[3]);
}

#[test]
fn empty_grid_gives_header_only_table() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "empty.toml", &SWEEP.replace("values = [0.7, 0.0]", "values = []"));
    let o = statdyn(&["sweep"], Some(&cfg), Some(dir.path()));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2);
    assert!(csv.lines().nth(1).unwrap().starts_with("cell,statistics,x0,"));
}

#[test]
fn repeated_sweeps_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "sweep.toml", SWEEP);
    let mut outputs = Vec::new();
    for (k, jobs) in ["2", "2", "1"].iter().enumerate() {
        let out = dir.path().join(format!("run{k}"));
        let o = statdyn(&["sweep", "--jobs", jobs], Some(&cfg), Some(&out));
        assert!(o.status.success());
        outputs.push(std::fs::read(out.join("summary.csv")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[1], outputs[2]);
}

#[test]
fn lyapunov_and_qcompare_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "trap.toml",
        r#"
scenario = "phase"
statistics = "boson"
[potential]
u = 1.0
v = 0.4
[initial]
z0 = [0.5, 0.5]
[integrator]
t_end = 20.0
"#,
    );
    let o = statdyn(&["lyapunov"], Some(&cfg), Some(&dir.path().join("ly")));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("ly/trajectory.csv")).unwrap();
    assert_eq!(csv.lines().nth(1), Some("t,lambda"));
    assert_eq!(csv.lines().count(), 2 + 20);

    let o = statdyn(&["qcompare"], Some(&cfg), Some(&dir.path().join("q")));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("q/metadata.json")).unwrap()).unwrap();
    assert_eq!(meta["scenario"], "quantum_compare");
    assert_eq!(meta["rows"], 2001);
    assert!(meta["summary"]["period_qm"].as_f64().unwrap() > 0.0);
}

#[test]
fn shipped_configs_validate() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in std::fs::read_dir(root).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "toml") {
            let o = statdyn(&["validate-config"], Some(&path), None);
            assert!(o.status.success(), "{}: {}", path.display(), String::from_utf8_lossy(&o.stderr));
            let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
            assert_eq!(report["valid"], true);
            seen += 1;
        }
    }
    assert!(seen >= 8);
}
