use std::f64::consts::FRAC_PI_2;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn spec(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../specs").join(format!("{name}.json"))
}

fn run(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_denjoy"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env("DENJOY_THREADS", "1")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn error_name(o: &Output) -> String {
    let v: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    v["error"].as_str().unwrap().to_string()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_reports_gaps_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["validate", s(&spec("two_gaps"))]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("gaps: 2\n"), "{text}");
    assert!(text.contains("hyperbolic type: true"));

    let o = run(dir.path(), &["validate", s(&spec("overlapping"))]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_name(&o), "OverlappingGaps");

    let o = run(dir.path(), &["validate", s(&dir.path().join("missing.json"))]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(error_name(&o), "Io");
}

#[test]
fn density_csv_layout() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &["density", s(&spec("two_gaps")), "--window", "-1,3,0.1,2", "--grid", "4,3"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(dir.path().join("density.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert!(lines[0].starts_with("# manifest: manifest.json sha256="));
    assert_eq!(lines[1], "re,im,delta,beta,qh_density,bp_lower_density,upper_density");
    assert_eq!(lines.len(), 2 + 12);
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "density");
    assert_eq!(manifest["metric"], "Quasihyperbolic");

    let o = run(dir.path(), &["density", s(&spec("two_gaps")), "--window", "0,1,2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn punctured_plane_geodesic() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["geodesic", s(&spec("punctured")), "--points", "1,0", "0,1"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let len: f64 = stdout(&o).trim().strip_prefix("length ").unwrap().parse().unwrap();
    assert!((len - FRAC_PI_2).abs() / FRAC_PI_2 < 1e-3, "{len}");
    for f in ["manifest.json", "path.csv", "result.json", "plot.svg"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let result: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("result.json")).unwrap()).unwrap();
    assert_eq!(result["length"].as_f64().unwrap(), len);
    assert_eq!(result["manifest"], "manifest.json");
    let svg = fs::read_to_string(dir.path().join("plot.svg")).unwrap();
    assert!(svg.contains("<!-- manifest: manifest.json sha256="));

    // the hyperbolic metrics need at least two boundary points
    let o = run(
        dir.path(),
        &["geodesic", s(&spec("punctured")), "--metric", "hyp-upper", "--points", "1,1", "2,1"],
    );
    assert_eq!(o.status.code(), Some(4));
    assert_eq!(error_name(&o), "NonHyperbolicType");
}

#[test]
fn adjacent_gaps_fail_the_solver() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["geodesic", s(&spec("periodic")), "--gap", "1", "--depth", "3"]);
    assert_eq!(o.status.code(), Some(4));
    assert_eq!(error_name(&o), "AdjacentGaps");
}

#[test]
fn classify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    for (name, code, rule) in [
        ("geometric", 0, "Thm 3.6"),
        ("periodic", 1, "Cor 1.3"),
        ("alternating", 5, "none"),
    ] {
        let o = run(dir.path(), &["classify", s(&spec(name))]);
        assert_eq!(o.status.code(), Some(code), "{name}");
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(v["rule"], rule, "{name}");
    }
    let o = run(dir.path(), &["classify", s(&spec("alternating")), "--tail-assumption", "lim-zero"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(dir.path(), &["classify", s(&spec("two_gaps")), "--depth", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["witness"]["c0"].as_f64().unwrap() > 0.0);
}

#[test]
fn scan_probe_and_thinness() {
    let dir = tempfile::tempdir().unwrap();
    let g = spec("geometric");
    let o = run(dir.path(), &["scan", s(&g), "--max-n", "2", "--depth", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(dir.path().join("scan.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[1], "n,length,m_n,converged,error");
    assert_eq!(lines.len(), 4);
    assert!(dir.path().join("scan.svg").exists());

    let o = run(dir.path(), &["probe", s(&g), "--n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["a_lower"].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-12);
    let o = run(dir.path(), &["probe", s(&g), "--n", "0"]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(dir.path(), &["thinness", s(&spec("two_gaps")), "--gap", "1", "--samples", "3", "--depth", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("estimate "));
    assert!(dir.path().join("thinness.json").exists());
}

#[test]
fn bad_arguments_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["validate", s(&spec("two_gaps")), "--metric", "euclid"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(dir.path(), &["geodesic", s(&spec("two_gaps"))]);
    assert_eq!(o.status.code(), Some(2));
}
