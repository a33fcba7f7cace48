use std::process::{Command, Output};

use ck_tcs::cli::RunConfig;
use ck_tcs::dynamics::phase_state;
use ck_tcs::observables::expectations_tcs;
use ck_tcs::verify::CheckResult;

fn tcs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tcs")).args(args).output().expect("tcs runs")
}

fn stdout(args: &[&str]) -> String {
    let out = tcs(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(2).map(|l| l.split(',').map(String::from).collect()).collect()
}

#[test]
fn trajectory_first_row_is_the_initial_point() {
    let text = stdout(&["trajectory", "--x0", "0.75", "--p0", "-0.25"]);
    let first = &rows(&text)[0];
    let v: Vec<f64> = first.iter().map(|s| s.parse().unwrap()).collect();
    assert_eq!(&v[..3], &[0.0, 0.75, -0.25]);
    assert_eq!((v[5], v[6], v[7]), (1.0, 0.0, 0.0));
}

#[test]
fn trajectory_matches_the_library_bit_for_bit() {
    let text = stdout(&["trajectory", "--gamma", "0.4", "--t1", "3", "--nt", "7"]);
    let config = RunConfig { gamma: 0.4, ..Default::default() };
    let params = config.params().unwrap();
    for row in rows(&text) {
        let t: f64 = row[0].parse().unwrap();
        let s = phase_state(&params, t).unwrap();
        let parsed: Vec<f64> = row.iter().map(|c| c.parse().unwrap()).collect();
        assert_eq!(parsed[1..8], [s.x, s.p, s.w.re, s.w.im, s.z.re, s.z.im, s.sigma]);
    }
}

#[test]
fn observables_rows_match_the_library() {
    let text = stdout(&["observables", "--gamma", "4", "--b-im", "0.5", "--state", "fock:2", "--nt", "5"]);
    let config = RunConfig { gamma: 4.0, b_im: 0.5, ..Default::default() };
    let params = config.params().unwrap();
    for row in rows(&text) {
        let t: f64 = row[0].parse().unwrap();
        let e = expectations_tcs(&params, 2, t).unwrap();
        let mean_x: f64 = row[1].parse().unwrap();
        let var_p: f64 = row[4].parse().unwrap();
        assert_eq!((mean_x, var_p), (e.mean_x, e.var_p));
    }
}

#[test]
fn undamped_product_is_constant_for_mu_one() {
    let text = stdout(&["observables", "--state", "fock:1"]);
    for row in rows(&text) {
        let product: f64 = row[5].parse().unwrap();
        assert!((product - 2.25).abs() < 1e-12, "{product}");
    }
}

#[test]
fn g_column_is_empty_off_the_imaginary_axis() {
    let text = stdout(&["observables", "--b-re", "0.3", "--nt", "3"]);
    assert!(rows(&text).iter().all(|r| r[6].is_empty()));
    let text = stdout(&["observables", "--nt", "3"]);
    assert!(rows(&text).iter().all(|r| !r[6].is_empty()));
}

#[test]
fn wavefunction_dump_is_normalised() {
    let text = stdout(&["wavefunction", "--state", "fock:2", "--t0", "1.2", "--gamma", "0.4"]);
    let data = rows(&text);
    let xs: Vec<f64> = data.iter().map(|r| r[0].parse().unwrap()).collect();
    let dx = xs[1] - xs[0];
    let mass: f64 = data.iter().map(|r| r[3].parse::<f64>().unwrap()).sum::<f64>() * dx;
    assert!((mass - 1.0).abs() < 1e-6, "{mass}");
}

#[test]
fn first_excited_state_vanishes_at_the_centre() {
    let text = stdout(&["wavefunction", "--state", "fock:1", "--grid-n", "1001", "--x0", "0.4"]);
    let data: Vec<(f64, f64)> = rows(&text)
        .iter()
        .map(|r| (r[0].parse().unwrap(), r[3].parse().unwrap()))
        .collect();
    let peak = data.iter().map(|d| d.1).fold(0.0, f64::max);
    let nearest = data.iter().min_by(|a, b| (a.0 - 0.4).abs().total_cmp(&(b.0 - 0.4).abs())).unwrap();
    assert!(nearest.1 < 1e-12 * peak);
}

#[test]
fn overdamped_minimize_reports_time_zero() {
    let text = stdout(&["minimize", "--gamma", "4", "--b-im", "1"]);
    assert_eq!(rows(&text)[0][2].parse::<f64>().unwrap(), 0.0);
}

#[test]
fn solve_mu_reports_the_violated_condition() {
    let text = stdout(&["minimize", "--gamma", "0.4", "--solve-mu", "1.5"]);
    let row = &rows(&text)[0];
    assert!(row[3].is_empty());
    assert!(row[5].contains("|theta*tan(omega*t)| < 1"), "{}", row[5]);
}

#[test]
fn config_file_sits_between_defaults_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.conf");
    std::fs::write(&path, "# damped run\ngamma = 0.4\nnt = 3\nx0 = 2\n").unwrap();
    let p = path.to_str().unwrap();
    let text = stdout(&["trajectory", "--config", p, "--x0", "-1"]);
    let header = text.lines().next().unwrap();
    assert!(header.contains("gamma=4.0000000000000002e-1"));
    assert!(header.contains("x0=-1.0000000000000000e0"));
    assert_eq!(rows(&text).len(), 3);
}

#[test]
fn header_round_trips_through_the_config_parser() {
    let config = RunConfig { gamma: 1.9, b_re: -0.25, nt: 17, ..Default::default() };
    let parsed = RunConfig::parse_text(&config.to_text()).unwrap();
    assert_eq!(parsed, config);
}

#[test]
fn out_writes_the_same_bytes_as_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("traj.csv");
    let direct = stdout(&["trajectory", "--nt", "9"]);
    let out = tcs(&["trajectory", "--nt", "9", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), direct);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["trajectory", "--t0", "3", "--t1", "1"][..],
        &["trajectory", "--m", "0"],
        &["trajectory", "--state", "fock:x"],
        &["observables", "--format", "xml"],
        &["verify", "--tol", "nonsense=1"],
        &["minimize", "--gamma", "2"],
        &["trajectory", "--config", "/nonexistent/tcs.conf"],
    ] {
        let out = tcs(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn verify_json_lines_are_check_objects() {
    let out = tcs(&["verify", "--format", "json-lines", "--corrupt-branch"]);
    assert_eq!(out.status.code(), Some(1));
    let checks: Vec<CheckResult> = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert!(checks.iter().any(|c| !c.passed && c.key() == "residual"));
    assert!(checks.iter().filter(|c| c.key() != "residual").all(|c| c.passed));
}
