use std::fs;
use std::process::{Command, Output};

fn starbdi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_starbdi"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn rows(out: &Output) -> Vec<Vec<String>> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(out.stdout.as_slice());
    r.records()
        .map(|x| x.unwrap().iter().map(str::to_owned).collect())
        .collect()
}

fn p0_curve(d: &str) -> Vec<f64> {
    let out = starbdi(&[
        "transient",
        "--alpha",
        "0.5",
        "--lambda",
        "0.5",
        "--mu",
        "0.5",
        "--d",
        d,
        "--t",
        "0.2:1.6:8",
        "--method",
        "series",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = rows(&out);
    assert_eq!(rows[0], ["method", "t", "k", "value", "trunc_order", "tail_bound"]);
    rows[1..]
        .iter()
        .filter(|r| r[2] == "-1")
        .map(|r| r[3].parse().unwrap())
        .collect()
}

#[test]
fn transient_series_falls_with_more_rays() {
    let curves: Vec<Vec<f64>> = ["1", "2", "3", "4"].iter().map(|d| p0_curve(d)).collect();
    assert_eq!(curves[0].len(), 8);
    for pair in curves.windows(2) {
        assert!(pair[0].iter().zip(&pair[1]).all(|(a, b)| b < a));
    }
}

#[test]
fn series_outside_radius_is_a_usage_error() {
    let out = starbdi(&[
        "transient",
        "--alpha",
        "0.5",
        "--lambda",
        "0.5",
        "--mu",
        "0.5",
        "--t",
        "0.5:2.5:3",
        "--method",
        "series",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("lambda t < 1"));
}

#[test]
fn malformed_grid_is_rejected() {
    let out = starbdi(&[
        "transient",
        "--alpha",
        "0.5",
        "--lambda",
        "0.5",
        "--mu",
        "0.5",
        "--t",
        "1:0:3",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn volterra_and_series_agree() {
    let args = [
        "transient",
        "--alpha",
        "0.5",
        "--lambda",
        "0.5",
        "--mu",
        "0.5",
        "--d",
        "3",
        "--t",
        "0.25:1.5:6",
        "--k",
        "2",
    ];
    let series = rows(&starbdi(&[&args[..], &["--method", "series"]].concat()));
    let vol = rows(&starbdi(
        &[&args[..], &["--method", "volterra", "--steps", "8192"]].concat(),
    ));
    let pick = |rows: &[Vec<String>], k: &str| -> Vec<f64> {
        rows[1..]
            .iter()
            .filter(|r| r[2] == k)
            .map(|r| r[3].parse().unwrap())
            .collect()
    };
    for k in ["-1", "1", "2"] {
        let (a, b) = (pick(&series, k), pick(&vol, k));
        assert_eq!(a.len(), 6);
        assert!(
            a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-6),
            "k = {k}: {a:?} vs {b:?}"
        );
    }
}

#[test]
fn simulation_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, seed: &str| {
        let path = dir.path().join(name);
        let p = path.to_str().unwrap();
        let out = starbdi(&[
            "simulate", "--alpha", "0.1", "--lambda", "0.1", "--mu", "0.5", "--d", "3", "--t", "1:3:3", "--paths",
            "2000", "--seed", seed, "--out", p,
        ]);
        assert!(out.status.success());
        fs::read(path).unwrap()
    };
    let a = run("a.csv", "11");
    assert_eq!(a, run("b.csv", "11"));
    assert_ne!(a, run("c.csv", "12"));
    assert!(String::from_utf8(a)
        .unwrap()
        .starts_with("t,level,probability,stderr\n"));
}

#[test]
fn asymptotic_blocks() {
    let out = starbdi(&[
        "asymptotic",
        "--alpha",
        "0.1",
        "--lambda",
        "0.1",
        "--mu",
        "0.5",
        "--d",
        "3",
        "--k",
        "5",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let (law, moments) = text.split_once("\n\n").expect("two blocks");
    let law: Vec<&str> = law.lines().collect();
    assert_eq!(law[0], "k,limit_probability,nb_pi");
    assert_eq!(law.len(), 7);
    let p0: f64 = law[1].split(',').nth(1).unwrap().parse().unwrap();
    assert!((p0 - 4.0 / 7.0).abs() < 1e-14);
    let m: Vec<&str> = moments.lines().collect();
    assert_eq!(m[0], "theta_d,mean,variance");
    let theta: f64 = m[1].split(',').next().unwrap().parse().unwrap();
    assert!((theta - 15.0 / 7.0).abs() < 1e-14);
}

#[test]
fn asymptotic_above_criticality_is_degenerate() {
    let out = starbdi(&[
        "asymptotic",
        "--alpha",
        "0.5",
        "--lambda",
        "0.5",
        "--mu",
        "0.1",
        "--d",
        "3",
        "--k",
        "2",
    ]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().contains("NaN"));
}

#[test]
fn combinatorics_check_passes() {
    let out = starbdi(&["combinatorics", "--nmax", "8", "--check"]);
    assert!(out.status.success());
    let rows = rows(&out);
    assert_eq!(rows[0], ["n", "k", "t_nk"]);
    assert_eq!(rows.len(), 1 + 36);
    assert_eq!(rows.last().unwrap(), &["8", "8", "1"]);
    // indecomposable permutations of 8 elements
    assert!(rows.contains(&vec!["8".into(), "1".into(), "29093".into()]));
}

#[test]
fn diffusion_density_table() {
    let out = starbdi(&[
        "diffusion",
        "--gamma",
        "1",
        "--mu",
        "1",
        "--beta",
        "-0.5",
        "--t",
        "1:2:2",
        "--x",
        "0.1:5:10",
    ]);
    assert!(out.status.success());
    let rows = rows(&out);
    assert_eq!(rows[0], ["x", "t", "h_density"]);
    assert_eq!(rows.len(), 21);
    assert!(rows[1..].iter().all(|r| r[2].parse::<f64>().unwrap() > 0.0));
}

#[test]
fn validate_reports_each_selected_criterion() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("v.csv");
    let out = starbdi(&["validate", "--quick", "--only", "1,2", "--out", path.to_str().unwrap()]);
    // the polylog identity fails beyond order 0
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("criterion 1 [combinatorics exactness]: PASS"));
    assert!(text.contains("criterion 2 [polylog identity]: FAIL"));
    let csv = fs::read_to_string(path).unwrap();
    assert!(csv.starts_with("criterion,check,value,threshold,status\n"));
    assert!(csv.contains("2,\"max residual, k = 0, x in 0.1..0.9\""));
}

#[test]
fn ks_pilot_fixture_is_reproduced() {
    let fixture = fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/ks_pilot.csv")).unwrap();
    let mut lines = fixture.lines();
    let header = lines.next().unwrap();
    let mut ks_at_threshold_scale = None;
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        let eps: f64 = cells[0].parse().unwrap();
        let ks: f64 = cells[2].parse().unwrap();
        if eps == 0.01 {
            ks_at_threshold_scale = Some(ks);
        }
        if eps == 0.02 {
            let out = starbdi(&[
                "diffusion",
                "--probe",
                "--gamma",
                "1",
                "--mu",
                "1",
                "--beta",
                "-0.5",
                "--epsilon",
                cells[0],
                "--t",
                "1:2:2",
                "--d",
                "3",
                "--paths",
                cells[3],
                "--seed",
                cells[4],
            ]);
            assert!(out.status.success());
            let text = String::from_utf8(out.stdout).unwrap();
            assert!(text.starts_with(&format!("{header}\n{line}\n")), "{text}");
        }
    }
    let ks = ks_at_threshold_scale.expect("pilot row at epsilon = 0.01");
    assert!(ks < starbdi_cli::campaign::KS_THRESHOLD);
    // two-sided 95% Kolmogorov band for the pilot's path count
    assert!(1.358 / 100.0 < starbdi_cli::campaign::KS_THRESHOLD);
}
