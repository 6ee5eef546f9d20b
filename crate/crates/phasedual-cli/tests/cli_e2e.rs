//! End-to-end exercises of every subcommand: exit-code contract, output
//! formats, and byte-level determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_phasedual"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write_fixture(dir: &Path, name: &str, content: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path
}

struct Fixtures {
    _dir: tempdir::TempDir,
    ellipse: PathBuf,
    square: PathBuf,
    unit_interval: PathBuf,
    translated: PathBuf,
    ball4: PathBuf,
}

// Minimal hand-rolled tempdir to avoid a dev-dependency.
mod tempdir {
    use std::path::{Path, PathBuf};

    pub struct TempDir(PathBuf);

    impl TempDir {
        pub fn new(tag: &str) -> TempDir {
            let dir =
                std::env::temp_dir().join(format!("phasedual-e2e-{tag}-{}", std::process::id()));
            std::fs::create_dir_all(&dir).unwrap();
            TempDir(dir)
        }

        pub fn path(&self) -> &Path {
            &self.0
        }
    }

    impl Drop for TempDir {
        fn drop(&mut self) {
            let _ = std::fs::remove_dir_all(&self.0);
        }
    }
}

fn fixtures(tag: &str) -> Fixtures {
    let dir = tempdir::TempDir::new(tag);
    let p = dir.path().to_path_buf();
    Fixtures {
        ellipse: write_fixture(
            &p,
            "ellipse.json",
            r#"{"kind":"ellipsoid","hbar":1.0,"matrix":[[2.0,0.0],[0.0,0.5]]}"#,
        ),
        square: write_fixture(
            &p,
            "square.json",
            r#"{"kind":"box","hbar":1.0,"half_widths":[1.0,1.0]}"#,
        ),
        unit_interval: write_fixture(
            &p,
            "interval.json",
            r#"{"kind":"box","hbar":1.0,"half_widths":[1.0]}"#,
        ),
        translated: write_fixture(
            &p,
            "translated.json",
            r#"{"kind":"ellipsoid","hbar":1.0,"matrix":[[1.0,0.0],[0.0,4.0]],"center":[0.3,0.0]}"#,
        ),
        ball4: write_fixture(
            &p,
            "ball4.json",
            r#"{"kind":"ball","hbar":1.0,"radius":1.3,"dim":2}"#,
        ),
        _dir: dir,
    }
}

#[test]
fn dual_inverts_ellipse_matrix() {
    let fx = fixtures("dual");
    let out = run(&["dual", "--body", fx.ellipse.to_str().unwrap()]);
    assert!(out.status.success());
    let spec: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(spec["kind"], "ellipsoid");
    assert_eq!(spec["matrix"][0][0], 0.5);
    assert_eq!(spec["matrix"][1][1], 2.0);
}

#[test]
fn dual_rejects_translated_body_with_exit_2() {
    let fx = fixtures("dual2");
    let out = run(&["dual", "--body", fx.translated.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
}

#[test]
fn volume_exact_square() {
    let fx = fixtures("volume");
    let out = run(&["volume", "--body", fx.square.to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["value"], 4.0);
    assert_eq!(v["method"], "exact");
}

#[test]
fn mahler_square_is_eight() {
    let fx = fixtures("mahler");
    let out = run(&["mahler", "--body", fx.square.to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["mahler"]["value"], 8.0);
    assert_eq!(v["bounds_check"]["lower"]["pass"], true);
}

#[test]
fn bounds_matches_frozen_values() {
    let out = run(&["bounds", "--n", "2"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((v["bs"].as_f64().unwrap() - 9.869604401089358).abs() < 1e-12);
    assert!((v["kuperberg"].as_f64().unwrap() - 0.30842513753404244).abs() < 1e-12);
    assert_eq!(v["mahler_conj"], 8.0);
    assert_eq!(v["delta"], 0.5);
}

#[test]
fn blob_identity_has_no_violations() {
    let out = run(&["blob", "--A", "1,0;0,1", "--verify-samples", "2000"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["containment"]["violations"], 0);
}

#[test]
fn lagrangian_dual_standard_frames() {
    let fx = fixtures("lagr");
    let out = run(&["lagrangian-dual", "--body", fx.square.to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["kind"], "vpolytope");
}

#[test]
fn lagrangian_dual_rotated_1d_frames() {
    let fx = fixtures("lagr-rot");
    let out = run(&[
        "lagrangian-dual",
        "--body",
        fx.unit_interval.to_str().unwrap(),
        "--theta",
        "0.7",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    // The rotated 1D pairing has |M| = 1, so the dual of [-1, 1] is itself.
    assert_eq!(v["kind"], "vpolytope");
    let vtx = v["vertices"][0][0].as_f64().unwrap().abs();
    assert!((vtx - 1.0).abs() < 1e-9, "vertex {vtx}");

    // Rotated frames are a 1D construction; 2D bodies are rejected.
    let out2 = run(&[
        "lagrangian-dual",
        "--body",
        fx.square.to_str().unwrap(),
        "--theta",
        "0.7",
    ]);
    assert_eq!(out2.status.code(), Some(2));
}

#[test]
fn volume_exact_method_errors_on_unsupported_shape() {
    let fx = fixtures("vol-exact");
    let hpoly3 = write_fixture(
        fx._dir.path(),
        "hpoly3.json",
        r#"{"kind":"hpolytope","hbar":1.0,"normals":[[1.0,0.0,0.0],[0.0,1.0,0.0],[0.0,0.0,1.0],[0.6,0.6,0.6]]}"#,
    );
    let out = run(&[
        "volume",
        "--body",
        hpoly3.to_str().unwrap(),
        "--method",
        "exact",
    ]);
    assert_eq!(out.status.code(), Some(2));
    // Auto falls back to Monte Carlo on the same body.
    let out2 = run(&[
        "volume",
        "--body",
        hpoly3.to_str().unwrap(),
        "--samples",
        "50000",
    ]);
    assert!(out2.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out2)).unwrap();
    assert_eq!(v["method"], "monte_carlo");
}

#[test]
fn sweep_carries_hbar_through() {
    let out = run(&["sweep", "--nmax", "2", "--hbar", "0.5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    // n=1 row at hbar = 0.5: bs = mahler_conj = 4ℏ = 2.
    let row = text.lines().nth(1).unwrap();
    let cells: Vec<&str> = row.split(',').collect();
    assert_eq!(cells[0], "1");
    assert_eq!(cells[1], "0.5");
    assert_eq!(cells[2], "2");
    assert_eq!(cells[6], "2");
}

#[test]
fn gromov_width_and_unsupported_dimension() {
    let out = run(&["gromov1d", "--a", "5", "--hbar", "0.5"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["width"], 2.0);

    let out2 = run(&["gromov1d", "--a", "1,1"]);
    assert_eq!(out2.status.code(), Some(2));
}

#[test]
fn santalo_recovers_translated_center() {
    let fx = fixtures("santalo");
    let out = run(&["santalo", "--body", fx.translated.to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let p = v["point"].as_array().unwrap();
    assert!((p[0].as_f64().unwrap() - 0.3).abs() < 1e-2);
    assert!(p[1].as_f64().unwrap().abs() < 1e-2);
}

#[test]
fn fourier_round_trip_through_state_files() {
    let fx = fixtures("fourier");
    let state_path = fx._dir.path().join("phi0_hat.state");
    let out = run(&[
        "fourier",
        "--state",
        "gaussian",
        "--A",
        "1",
        "--state-out",
        state_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["unitarity_defect"].as_f64().unwrap() < 1e-10);

    // Feed the written momentum-space state back through the inverse.
    let out2 = run(&[
        "fourier",
        "--inverse",
        "--state",
        state_path.to_str().unwrap(),
    ]);
    assert!(out2.status.success());

    // Wrong direction on a momentum-space state is a precondition error.
    let out3 = run(&["fourier", "--state", state_path.to_str().unwrap()]);
    assert_eq!(out3.status.code(), Some(2));
}

#[test]
fn wigner_moyal_summary() {
    let fx = fixtures("wigner");
    let table_path = fx._dir.path().join("w.table");
    let out = run(&[
        "wigner",
        "--state",
        "gaussian",
        "--A",
        "1",
        "--table-out",
        table_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["moyal_rel_defect"].as_f64().unwrap() < 1e-6);
    assert!(v["max_imag_residue"].as_f64().unwrap() <= 1e-12);
    assert!(table_path.exists());
}

#[test]
fn concentration_of_phi0() {
    let fx = fixtures("conc");
    let out = run(&[
        "concentration",
        "--state",
        "gaussian",
        "--A",
        "1",
        "--body",
        fx.unit_interval.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let eps = v["epsilon_star"].as_f64().unwrap();
    assert!((eps - 0.3966).abs() < 0.02, "eps {eps}");
}

#[test]
fn ds_check_passes_on_self_dual_interval() {
    let fx = fixtures("ds");
    let out = run(&[
        "ds-check",
        "--state",
        "gaussian",
        "--A",
        "1",
        "--x",
        fx.unit_interval.to_str().unwrap(),
        "--p",
        fx.unit_interval.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["lhs"], 4.0);
}

#[test]
fn hardy_exit_codes_follow_verdict() {
    // Routes agree -> exit 0, regardless of containment truth.
    let out = run(&["hardy", "--A", "4", "--B", "1"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["parameters"]["containment_eigenvalue_route"], false);

    // Non-SPD input -> exit 2.
    let out2 = run(&["hardy", "--A", "1,2;2,1", "--B", "1,0;0,1"]);
    assert_eq!(out2.status.code(), Some(2));
}

#[test]
fn corollary_reports_ball_and_volume_bound() {
    let fx = fixtures("cor");
    let out = run(&[
        "corollary",
        "--state",
        "gaussian",
        "--A",
        "1",
        "--grid",
        "1024,12",
        "--body",
        fx.ball4.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let arr = v.as_array().unwrap();
    assert_eq!(arr.len(), 3);
    assert_eq!(arr[0]["inequality"], "wigner_ball_concentration");
    assert_eq!(arr[2]["inequality"], "wigner_volume_bound");
}

#[test]
fn tradeoff_requires_a_body() {
    let out = run(&["tradeoff", "--state", "gaussian", "--A", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn tradeoff_matches_spec_example() {
    let out = run(&[
        "tradeoff",
        "--state",
        "gaussian",
        "--A",
        "1",
        "--box",
        "1",
        "--hbar",
        "1",
        "--grid",
        "524288,907.4964387392123",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["pass"], true);
    let eps = v["epsilon_star"].as_f64().unwrap();
    let eta = v["eta_star"].as_f64().unwrap();
    assert!((eps - 0.396608).abs() < 1e-3, "eps {eps}");
    assert!((eta - 0.396608).abs() < 1e-3, "eta {eta}");
    assert!((v["rhs"].as_f64().unwrap() - 0.202115).abs() < 1e-6);
}

#[test]
fn sweep_emits_expected_csv() {
    let out = run(&["sweep", "--nmax", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,hbar,bs,kuperberg,mahler_conj,delta_n,mahler_value,mahler_se,pass_lower,pass_upper"
    );
    assert!(text.contains("tradeoff_n,hbar,eps,eta,sum,lower_bound,pass"));
    let rows: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with(['1', '2', '3']))
        .collect();
    assert!(rows.len() >= 5, "3 sweep rows + 2 tradeoff rows");
}

/// Criterion 15, CLI half: identical configuration (including seed) produces
/// byte-identical output files.
#[test]
fn criterion_15_determinism_cli() {
    let fx = fixtures("det");
    let out_a = fx._dir.path().join("a.json");
    let out_b = fx._dir.path().join("b.json");
    for (path, threads) in [(&out_a, "1"), (&out_b, "4")] {
        let out = run(&[
            "mahler",
            "--body",
            fx.square.to_str().unwrap(),
            "--method",
            "mc",
            "--samples",
            "200000",
            "--seed",
            "0",
            "--threads",
            threads,
            "--output",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let a = std::fs::read(&out_a).unwrap();
    let b = std::fs::read(&out_b).unwrap();
    let identical = a == b;
    println!(
        "{} criterion_15_determinism_cli: seed-0 outputs byte-identical across thread counts: {identical}",
        if identical { "PASS" } else { "FAIL" }
    );
    assert!(identical);

    // Repeated sweep runs are byte-identical too.
    let s1 = stdout(&run(&["sweep", "--nmax", "2", "--seed", "0"]));
    let s2 = stdout(&run(&["sweep", "--nmax", "2", "--seed", "0"]));
    assert_eq!(s1, s2);
}

#[test]
fn output_dir_env_var_is_honored() {
    let fx = fixtures("envdir");
    let out = bin()
        .args(["bounds", "--n", "1", "--output", "bounds.json"])
        .env("PHASEDUAL_OUTPUT_DIR", fx._dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(fx._dir.path().join("bounds.json").exists());
}

#[test]
fn csv_format_for_reports() {
    let out = run(&["hardy", "--A", "1", "--B", "1", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("inequality,lhs,rhs,margin,pass"));
    assert!(text.contains("hardy_eigenvalue_criterion,1,1,0,true"));
}

#[test]
fn unknown_flag_is_usage_error() {
    let out = run(&["bounds", "--n", "2", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_body_file_is_usage_error() {
    let fx = fixtures("malformed");
    let bad = write_fixture(fx._dir.path(), "bad.json", "{not json");
    let out = run(&["dual", "--body", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}
