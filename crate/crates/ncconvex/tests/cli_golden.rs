//! End-to-end checks of the command-line front end: exit codes mirror the
//! membership trichotomy, JSON outputs parse back, reruns are bit-identical,
//! and CLI verdicts match direct library calls.

use std::path::Path;
use std::process::Command;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ncconvex::mat::{Field, Mat};
use ncconvex::ncset::{self, NcSetDescr};
use ncconvex::opsys;
use ncconvex::tuple::MatTuple;
use ncconvex::ToleranceConfig;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ncconvex"))
}

fn write_json<T: serde::Serialize>(dir: &Path, name: &str, value: &T) -> std::path::PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(value).unwrap()).unwrap();
    path
}

#[test]
fn member_exit_codes_and_json() {
    let dir = tempdir();
    let set = NcSetDescr::interval(0.0, 1.0).unwrap();
    let set_path = write_json(&dir, "interval.json", &set);
    let mid = write_json(&dir, "mid.json", &MatTuple::from_scalars(&[0.5]));
    let big = write_json(
        &dir,
        "big.json",
        &MatTuple::new(vec![Mat::from_rows_real(&[vec![2.0, 0.0], vec![0.0, 0.5]])]).unwrap(),
    );

    let inside = bin()
        .arg("member")
        .arg(&set_path)
        .arg(&mid)
        .output()
        .unwrap();
    assert_eq!(inside.status.code(), Some(0), "{inside:?}");

    let outside = bin()
        .arg("member")
        .arg(&set_path)
        .arg(&big)
        .args(["--format", "json"])
        .output()
        .unwrap();
    assert_eq!(outside.status.code(), Some(1));
    let parsed: serde_json::Value = serde_json::from_slice(&outside.stdout).unwrap();
    assert_eq!(parsed["verdict"], "outside");
    assert_eq!(parsed["tool"], "ncconvex");
    assert!(parsed["seed"].is_number());

    // bit-identical rerun
    let again = bin()
        .arg("member")
        .arg(&set_path)
        .arg(&big)
        .args(["--format", "json"])
        .output()
        .unwrap();
    assert_eq!(outside.stdout, again.stdout);

    // the seed falls back to the environment and lands in the output
    let seeded = bin()
        .arg("member")
        .arg(&set_path)
        .arg(&mid)
        .args(["--format", "json"])
        .env("NCCONVEX_SEED", "1234")
        .output()
        .unwrap();
    let parsed: serde_json::Value = serde_json::from_slice(&seeded.stdout).unwrap();
    assert_eq!(parsed["seed"], 1234);
}

#[test]
fn state_space_cli_matches_library() {
    let dir = tempdir();
    let cfg = ToleranceConfig::default();
    let sys = opsys::quaternions().unwrap();
    let set = NcSetDescr::state_space(sys.clone());
    let set_path = write_json(&dir, "ncsh.json", &set);
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for k in 0..4 {
        let point = if k % 2 == 0 {
            ncset::sample(&set, 2, &cfg, &mut rng).unwrap()
        } else {
            // break unitality: not a state
            let mut x = ncset::sample(&set, 2, &cfg, &mut rng).unwrap();
            x.parts[0] = x.parts[0].scale(0.8);
            x
        };
        let expected = ncset::member(&set, &point, &cfg).unwrap();
        let expect_code = if expected.is_inside() { 0 } else { 1 };
        let p = write_json(&dir, &format!("pt{k}.json"), &point);
        let out = bin().arg("member").arg(&set_path).arg(&p).output().unwrap();
        assert_eq!(out.status.code(), Some(expect_code), "round {k}");
    }
}

#[test]
fn separate_and_check_cert_round_trip() {
    let dir = tempdir();
    let set = NcSetDescr::interval(-1.0, 1.0).unwrap();
    let set_path = write_json(&dir, "interval.json", &set);
    let y = write_json(
        &dir,
        "y.json",
        &MatTuple::new(vec![Mat::from_rows_real(&[vec![2.0, 0.0], vec![0.0, 0.0]])]).unwrap(),
    );
    let cert_path = dir.join("cert.json");
    let sep = bin()
        .arg("separate")
        .arg(&set_path)
        .arg(&y)
        .arg("--gamma-identity")
        .arg("-o")
        .arg(&cert_path)
        .output()
        .unwrap();
    assert_eq!(sep.status.code(), Some(0), "{sep:?}");
    let check = bin()
        .arg("check-cert")
        .arg(&set_path)
        .arg(&y)
        .arg(&cert_path)
        .output()
        .unwrap();
    assert_eq!(check.status.code(), Some(0));

    // corrupt the certificate: validation must refuse
    let mut cert: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&cert_path).unwrap()).unwrap();
    cert["phi"][0]["re"][0][0] = serde_json::json!(50.0);
    std::fs::write(&cert_path, serde_json::to_string(&cert).unwrap()).unwrap();
    let check = bin()
        .arg("check-cert")
        .arg(&set_path)
        .arg(&y)
        .arg(&cert_path)
        .output()
        .unwrap();
    assert_eq!(check.status.code(), Some(1));
}

#[test]
fn verify_suite_exit_codes() {
    let ok = bin()
        .args(["verify", "quaternion", "--samples", "10"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stdout));
    let unknown = bin().args(["verify", "nope"]).output().unwrap();
    assert_eq!(unknown.status.code(), Some(78));
}

#[test]
fn verify_dump_writes_problem_files() {
    let dir = tempdir();
    let dump = dir.join("dumps");
    let out = bin()
        .args(["verify", "quaternion", "--samples", "4", "--dump"])
        .arg(&dump)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let count = std::fs::read_dir(&dump).unwrap().count();
    assert!(count > 0, "no dump files written");
    // each dump holds a problem and its result, parseable back
    let first = std::fs::read_dir(&dump).unwrap().next().unwrap().unwrap();
    let body: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(first.path()).unwrap()).unwrap();
    assert!(body["problem"]["blocks"].is_array());
    assert!(body["result"]["status"].is_string());
}

#[test]
fn plot_square_matches_closed_form() {
    let dir = tempdir();
    let cfg = ToleranceConfig::default();
    let set = NcSetDescr::max_of(
        vec![
            ncset::Facet { b: 1.0, a: vec![1.0, 0.0] },
            ncset::Facet { b: 1.0, a: vec![-1.0, 0.0] },
            ncset::Facet { b: 1.0, a: vec![0.0, 1.0] },
            ncset::Facet { b: 1.0, a: vec![0.0, -1.0] },
        ],
        Field::Real,
        &cfg,
    )
    .unwrap();
    let set_path = write_json(&dir, "square.json", &set);
    let out = bin()
        .arg("plot")
        .arg(&set_path)
        .args(["-n", "1", "--plane", "0,1", "--angles", "24"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rows = 0;
    for line in text.lines().skip(2) {
        let mut parts = line.split(',');
        let angle: f64 = parts.next().unwrap().parse().unwrap();
        let radius: f64 = parts.next().unwrap().parse().unwrap();
        let expected = 1.0 / angle.cos().abs().max(angle.sin().abs());
        assert!(
            (radius - expected).abs() < 1e-3,
            "angle {angle}: {radius} vs {expected}"
        );
        rows += 1;
    }
    assert_eq!(rows, 24);
}

#[test]
fn ncstate_emits_a_valid_set() {
    let dir = tempdir();
    let out_path = dir.join("set.json");
    let out = bin()
        .args(["ncstate", "quaternions", "-o"])
        .arg(&out_path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let set: NcSetDescr =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    set.validate().unwrap();
    assert_eq!(set.d, 4);
}

#[test]
fn complexify_polar_minmax_smoke() {
    let dir = tempdir();
    let set = NcSetDescr::interval(-1.0, 1.0).unwrap();
    let set_path = write_json(&dir, "interval.json", &set);
    let out_path = dir.join("interval_c.json");
    let out = bin()
        .arg("complexify")
        .arg(&set_path)
        .arg("-o")
        .arg(&out_path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let c: NcSetDescr = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(c.point_field(), Field::Complex);

    // polar membership through the CLI
    let phi_in = write_json(
        &dir,
        "phi_in.json",
        &MatTuple::new(vec![Mat::from_rows_real(&[vec![0.5, 0.0], vec![0.0, -0.5]])]).unwrap(),
    );
    let phi_out = write_json(
        &dir,
        "phi_out.json",
        &MatTuple::new(vec![Mat::from_rows_real(&[vec![3.0, 0.0], vec![0.0, 0.0]])]).unwrap(),
    );
    assert_eq!(
        bin().arg("polar").arg(&set_path).arg(&phi_in).output().unwrap().status.code(),
        Some(0)
    );
    assert_eq!(
        bin().arg("polar").arg(&set_path).arg(&phi_out).output().unwrap().status.code(),
        Some(1)
    );

    // minmax over the default square body
    let out = bin().args(["minmax", "--samples", "12", "-N", "2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));

    // bipolar over the interval
    let out = bin()
        .arg("bipolar")
        .arg("--set")
        .arg(&set_path)
        .args(["--samples", "15"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_64() {
    let out = bin().arg("member").output().unwrap();
    assert_eq!(out.status.code(), Some(64));
    let out = bin().arg("definitely-not-a-command").output().unwrap();
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn data_errors_exit_65() {
    let dir = tempdir();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{not json").unwrap();
    let out = bin().arg("member").arg(&bad).arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(65));
}

fn tempdir() -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!(
        "ncconvex-test-{}-{}",
        std::process::id(),
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .unwrap()
            .as_nanos()
    ));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
