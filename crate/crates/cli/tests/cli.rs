use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn ctqw(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ctqw"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str], out: &Path) {
    let o = ctqw(args, out);
    assert!(
        o.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&o.stderr)
    );
}

fn exit_code(args: &[&str]) -> (i32, String) {
    let dir = TempDir::new().unwrap();
    let o = ctqw(args, dir.path());
    (
        o.status.code().unwrap(),
        String::from_utf8_lossy(&o.stderr).into_owned(),
    )
}

/// Rows of a CSV with a header, every field parsed as f64.
fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(str::to_owned).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(|f| f.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

fn column(rows: &[Vec<f64>], i: usize) -> Vec<f64> {
    rows.iter().map(|r| r[i]).collect()
}

const DISCRETE_1D: [&str; 13] = [
    "run1d", "--order", "1", "--nodes", "160", "--lambda", "16", "--m", "16", "--dx", "2",
    "--time", "15",
];

#[test]
fn run1d_writes_a_normalized_distribution_over_centered_labels() {
    let dir = TempDir::new().unwrap();
    ok(&DISCRETE_1D, dir.path());
    let (header, rows) = read_csv(&dir.path().join("dist.csv"));
    assert_eq!(header, ["node_index", "probability"]);
    assert_eq!(rows.len(), 160);
    assert_eq!(rows[0][0], -79.0);
    assert_eq!(rows[159][0], 80.0);
    let total: f64 = column(&rows, 1).iter().sum();
    assert!((total - 1.0).abs() <= 1e-9);

    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["command"], "run1d");
    assert_eq!(manifest["nodes"], 160);
    assert_eq!(manifest["dx"], 2.0);
    assert!(manifest["engine_version"]
        .as_str()
        .unwrap()
        .starts_with("ctqw-core"));
    assert!(manifest["timestamp"].is_string());
}

#[test]
fn run1d_at_time_zero_stays_on_node_zero() {
    let dir = TempDir::new().unwrap();
    ok(&["run1d", "--time", "0"], dir.path());
    let (_, rows) = read_csv(&dir.path().join("dist.csv"));
    let p0 = rows.iter().find(|r| r[0] == 0.0).unwrap()[1];
    assert!(p0 >= 0.999, "{p0}");
}

#[test]
fn distribution_outputs_are_reproducible() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    ok(&DISCRETE_1D, a.path());
    ok(&DISCRETE_1D, b.path());
    assert_eq!(
        fs::read(a.path().join("dist.csv")).unwrap(),
        fs::read(b.path().join("dist.csv")).unwrap()
    );
}

#[test]
fn truncated_boundary_uses_the_dense_path() {
    let dir = TempDir::new().unwrap();
    let args = [
        "run1d",
        "--nodes",
        "20",
        "--lambda",
        "2",
        "--m",
        "8",
        "--time",
        "3",
        "--boundary",
        "truncated",
    ];
    ok(&args, dir.path());
    let (_, rows) = read_csv(&dir.path().join("dist.csv"));
    assert_eq!(rows.len(), 20);
    assert!((column(&rows, 1).iter().sum::<f64>() - 1.0).abs() <= 1e-9);

    // far from the ends the open line and the ring agree
    let ring = TempDir::new().unwrap();
    ok(&args[..args.len() - 2], ring.path());
    let (_, ring_rows) = read_csv(&ring.path().join("dist.csv"));
    let p = |rows: &[Vec<f64>]| rows.iter().find(|r| r[0] == 0.0).unwrap()[1];
    assert!((p(&rows) - p(&ring_rows)).abs() <= 1e-6);
}

#[test]
fn lambda_above_m_is_a_usage_error() {
    let (code, stderr) = exit_code(&["run1d", "--lambda", "32", "--m", "16"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("lambda must not exceed m"), "{stderr}");
}

#[test]
fn invalid_flags_exit_with_two() {
    for args in [
        vec!["run1d", "--order", "3"],
        vec!["run1d", "--boundary", "open"],
        vec!["run1d", "--dx", "0"],
        vec!["sweep", "--lambdas", "0"],
        vec!["sweep", "--lambdas", "4,4"],
        vec!["classical", "--gamma", "-1"],
        vec!["classical", "--gamma", "0"],
        vec!["bench", "--repeats", "1"],
        vec!["bench", "--n", "50:10:5"],
        vec!["run2d", "--nodes", "8"],
    ] {
        assert_eq!(exit_code(&args).0, 2, "{args:?}");
    }
}

#[test]
fn default_sweep_approaches_the_continuum() {
    let dir = TempDir::new().unwrap();
    ok(&["sweep"], dir.path());
    for l in [16, 4, 3, 2, 1] {
        let (_, rows) = read_csv(&dir.path().join(format!("dist_lambda{l}.csv")));
        assert_eq!(rows.len(), 160);
    }
    let (header, rows) = read_csv(&dir.path().join("summary.csv"));
    assert_eq!(header, ["lambda", "tv_distance_to_analytic", "sigma"]);
    assert_eq!(column(&rows, 0), [16.0, 4.0, 3.0, 2.0, 1.0]);
    let tv = column(&rows, 1);
    assert!(tv.windows(2).all(|w| w[1] <= w[0] + 1e-3), "{tv:?}");
}

#[test]
fn single_lambda_sweep_matches_run1d_byte_for_byte() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    ok(&DISCRETE_1D, a.path());
    let mut sweep = DISCRETE_1D.to_vec();
    sweep[0] = "sweep";
    sweep[5] = "--lambdas";
    ok(&sweep, b.path());
    assert_eq!(
        fs::read(a.path().join("dist.csv")).unwrap(),
        fs::read(b.path().join("dist_lambda16.csv")).unwrap()
    );
}

#[test]
fn run2d_x_marginal_matches_the_one_dimensional_walk() {
    let (two, one) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    ok(&["run2d"], two.path());
    ok(&["run1d", "--order", "1", "--nodes", "64"], one.path());

    let (header, grid) = read_csv(&two.path().join("dist2d.csv"));
    assert_eq!(header, ["i", "j", "probability"]);
    assert_eq!(grid.len(), 64 * 64);
    assert!((column(&grid, 2).iter().sum::<f64>() - 1.0).abs() <= 1e-9);

    let (_, line) = read_csv(&one.path().join("dist.csv"));
    for (k, row) in line.iter().enumerate() {
        let marginal: f64 = grid[k * 64..(k + 1) * 64].iter().map(|r| r[2]).sum();
        assert_eq!(grid[k * 64][0], row[0]);
        assert!((marginal - row[1]).abs() <= 1e-8, "node {}", row[0]);
    }
}

#[test]
fn run2d_at_time_zero_concentrates_on_the_origin() {
    let dir = TempDir::new().unwrap();
    ok(&["run2d", "--nodes", "32", "--time", "0"], dir.path());
    let (_, grid) = read_csv(&dir.path().join("dist2d.csv"));
    let best = grid.iter().max_by(|a, b| a[2].total_cmp(&b[2])).unwrap();
    assert_eq!((best[0], best[1]), (0.0, 0.0));
    assert!(best[2] >= 0.99);
}

#[test]
fn classical_walk_is_single_peaked_at_the_origin() {
    let dir = TempDir::new().unwrap();
    ok(
        &[
            "classical",
            "--nodes",
            "160",
            "--gamma",
            "1",
            "--time",
            "25",
        ],
        dir.path(),
    );
    let (header, rows) = read_csv(&dir.path().join("classical.csv"));
    assert_eq!(header, ["node_index", "probability"]);
    let p = column(&rows, 1);
    assert!((p.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
    let peak = p
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .unwrap()
        .0;
    assert_eq!(rows[peak][0], 0.0);
    // unimodal: rises to the peak, falls after it
    assert!(p[..=peak].windows(2).all(|w| w[1] >= w[0] - 1e-15));
    assert!(p[peak..].windows(2).all(|w| w[1] <= w[0] + 1e-15));
}

#[test]
fn classical_walk_at_time_zero_is_a_delta() {
    let dir = TempDir::new().unwrap();
    ok(&["classical", "--time", "0"], dir.path());
    let (_, rows) = read_csv(&dir.path().join("classical.csv"));
    for r in &rows {
        let expect = if r[0] == 0.0 { 1.0 } else { 0.0 };
        assert!((r[1] - expect).abs() <= 1e-12, "{r:?}");
    }
}

#[test]
fn bench_writes_rows_and_fit() {
    let dir = TempDir::new().unwrap();
    ok(
        &["bench", "--n", "50:250:50", "--time", "5", "--repeats", "5"],
        dir.path(),
    );
    let (header, rows) = read_csv(&dir.path().join("bench.csv"));
    assert_eq!(
        header,
        [
            "n",
            "t_direct_s",
            "t_fourier_s",
            "efficiency",
            "max_abs_diff"
        ]
    );
    assert_eq!(column(&rows, 0), [50.0, 100.0, 150.0, 200.0, 250.0]);
    for r in &rows {
        assert!(r[1] > 0.0 && r[2] > 0.0 && r[3] > 0.0);
        assert!(r[4] <= 1e-10, "{r:?}");
    }
    let fit: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("fit.json")).unwrap()).unwrap();
    for key in ["c0", "c1", "c2", "residual"] {
        assert!(fit[key].is_f64(), "{key}");
    }
}

#[test]
fn stub_bench_has_unit_efficiency() {
    let dir = TempDir::new().unwrap();
    ok(
        &["bench", "--stub", "--n", "10:40:10", "--repeats", "3"],
        dir.path(),
    );
    let (_, rows) = read_csv(&dir.path().join("bench.csv"));
    assert_eq!(rows.len(), 4);
    for r in &rows {
        assert!((r[3] - 1.0).abs() < 0.3, "{r:?}");
        assert_eq!(r[4], 0.0);
    }
}
