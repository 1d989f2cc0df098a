use std::process::{Command, Output};

fn cassini(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cassini"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = cassini(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn dist_prints_shortest_value() {
    assert_eq!(
        stdout(&["dist", "--center", "1,0", "--point", "2,0"]),
        "0.5\n"
    );
}

#[test]
fn inclusion_c_euclid_report() {
    let text = stdout(&["inclusion", "c_euclid", "--t", "0.5", "--samples", "200"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!((v["inner_radius"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-12);
    assert_eq!(v["outer_radius"].as_f64().unwrap(), 1.0);
    assert_eq!(v["inner_violations"], 0);
    assert_eq!(v["outer_violations"], 0);
}

#[test]
fn theorem_flag_matches_positional() {
    let a = stdout(&["inclusion", "j_euclid", "--t", "0.3", "--samples", "50"]);
    let b = stdout(&[
        "inclusion",
        "--theorem",
        "j_euclid",
        "--t",
        "0.3",
        "--samples",
        "50",
    ]);
    assert_eq!(a, b);
}

#[test]
fn seeded_output_is_reproducible() {
    let args = ["distortion", "--samples", "200", "--seed", "7"];
    assert_eq!(stdout(&args), stdout(&args));
    let other = stdout(&["distortion", "--samples", "200", "--seed", "8"]);
    assert_ne!(stdout(&args), other);
    let csv = ["ball", "--center", "1,0", "--radius", "0.5", "--rays", "64"];
    assert_eq!(stdout(&csv), stdout(&csv));
    let mut seq = csv.to_vec();
    seq.push("--sequential");
    assert_eq!(stdout(&csv), stdout(&seq));
}

#[test]
fn svg_has_one_path_per_radius() {
    let svg = stdout(&[
        "ball",
        "--center",
        "1,0",
        "--radius",
        "0.1,0.2,0.4,0.6,0.8,0.9",
        "--rays",
        "90",
        "--format",
        "svg",
    ]);
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
    assert!(svg.trim_end().ends_with("</svg>"));
    assert_eq!(svg.matches("<path").count(), 6);
}

#[test]
fn ball_csv_files_per_radius() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ball.csv");
    let out_s = out.to_str().unwrap();
    stdout(&[
        "ball", "--center", "1,0", "--radius", "0.1,0.2", "--rays", "32", "--out", out_s,
    ]);
    for r in ["0.1", "0.2"] {
        let text = std::fs::read_to_string(dir.path().join(format!("ball-r{r}.csv"))).unwrap();
        assert!(text.starts_with("theta,x,y,residual\n"));
        assert_eq!(text.lines().count(), 33);
    }
}

#[test]
fn exit_codes() {
    assert_eq!(cassini(&["nonsense"]).status.code(), Some(1));
    assert_eq!(cassini(&["dist", "--center", "1,0"]).status.code(), Some(1));
    let outside = cassini(&[
        "dist",
        "--center",
        "5,0",
        "--point",
        "0.1,0",
        "--domain",
        "unit-ball",
    ]);
    assert_eq!(outside.status.code(), Some(2));
    let range = cassini(&["inclusion", "c_euclid", "--t", "2"]);
    assert_eq!(range.status.code(), Some(2));
    let unsupported = cassini(&[
        "inclusion",
        "k_c_punctured",
        "--domain",
        "unit-ball",
        "--t",
        "0.1",
    ]);
    assert_eq!(unsupported.status.code(), Some(3));
}
