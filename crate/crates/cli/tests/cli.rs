use std::path::Path;
use std::process::{Command, Output};

const MINIMAL: &str = "\
[grid]
dim = 1
n = 256
L = 6.283185307179586
[model]
alpha = 1.5
kappa = 1
gamma = 1
[time]
t_end = 10
[ic]
preset = gaussian_bump
amplitude = 0.01
";

fn ealign(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ealign"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut r = csv::ReaderBuilder::new().from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(|f| f.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn run_then_analyze_reproduces_the_trace() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("min.ini");
    let text = MINIMAL.replace("t_end = 10", "t_end = 1") + "[output]\nsnapshot_every = 2\n";
    std::fs::write(&cfg, text).unwrap();
    let out = dir.path().join("trace.csv");
    let snaps = dir.path().join("snaps");
    let o = ealign(&[
        "run",
        arg(&cfg),
        "--out",
        arg(&out),
        "--snapshot-dir",
        arg(&snaps),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let banner = String::from_utf8(o.stdout).unwrap();
    assert!(banner.contains(" lambda=1 "), "{banner}");

    let (header, rows) = read_csv(&out);
    assert_eq!(
        header,
        ["t", "min_rho", "mass", "mom_1", "l2_sigma", "l2_u"]
    );
    assert_eq!(rows[0][0], 0.0);
    // mass = L · mean(ρ0), computed from the preset on the sample grid
    let n = 256;
    let l = 2.0 * std::f64::consts::PI;
    let w = l / 16.0;
    let mean: f64 = (0..n)
        .map(|i| {
            let x = l * i as f64 / n as f64 - 0.5 * l;
            // γ = 1, λ = 1: ρ = e^σ
            (0.01 * (-0.5 * (x / w).powi(2)).exp()).exp()
        })
        .sum::<f64>()
        / n as f64;
    assert!(
        (rows[0][2] - l * mean).abs() < 1e-12 * l,
        "{} vs {}",
        rows[0][2],
        l * mean
    );
    let composite = dir.path().join("trace.composite.csv");
    let (ch, _) = read_csv(&composite);
    assert_eq!(ch[0], "t");
    assert!(ch.contains(&"xt_u_l1".to_string()));

    let mut files: Vec<String> = std::fs::read_dir(&snaps)
        .unwrap()
        .map(|e| e.unwrap().path().to_str().unwrap().to_string())
        .collect();
    files.sort();
    assert!(files.len() >= 2);
    let re = dir.path().join("re.csv");
    let mut args = vec!["analyze"];
    args.extend(files.iter().map(String::as_str));
    args.extend(["--config", arg(&cfg), "--out", arg(&re)]);
    let o = ealign(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (rh, rrows) = read_csv(&re);
    assert_eq!(rh, header);
    for row in &rrows {
        let orig = rows.iter().find(|r| r[0] == row[0]).expect("matching time");
        for (a, b) in row.iter().zip(orig) {
            assert!((a - b).abs() <= 1e-12 * b.abs().max(1e-300), "{a} vs {b}");
        }
    }
}

#[test]
fn invalid_config_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.ini");
    std::fs::write(&cfg, MINIMAL.replace("alpha = 1.5", "alpha = 2.5")).unwrap();
    let o = ealign(&["run", arg(&cfg), "--out", arg(&dir.path().join("t.csv"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("alpha must lie in (1,2)"));
    let o = ealign(&["run", "--bogus"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn vacuum_exits_with_three_and_keeps_the_trace() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("v.ini");
    let text = "\
[grid]
dim = 1
n = 64
L = 6.283185307179586
[model]
alpha = 1.5
kappa = 0.05
gamma = 2
mu = 0.01
[time]
t_end = 3
dt = 0.001
cfl = 100
[ic]
preset = gaussian_bump
width = 0.3
amplitude = 2
[output]
cadence = 1
";
    std::fs::write(&cfg, text).unwrap();
    let out = dir.path().join("t.csv");
    let o = ealign(&["run", arg(&cfg), "--out", arg(&out)]);
    assert_eq!(o.status.code(), Some(3));
    let (_, rows) = read_csv(&out);
    assert!(rows.len() > 1);
    assert!(rows.last().unwrap()[0] < 3.0);
}

#[test]
fn linear_row_at_unit_frequency() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("lin.csv");
    let o = ealign(&[
        "linear",
        "--alpha",
        "1.5",
        "--lambda",
        "1",
        "--mu",
        "1",
        "--xi",
        "1",
        "--out",
        arg(&out),
    ]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    let v = |i: usize| row[i].parse::<f64>().unwrap();
    assert_eq!(v(0), 1.0);
    assert!((v(1) + 0.5).abs() < 1e-15 && (v(2) + 0.5).abs() < 1e-15);
    assert!((v(3) - 0.8660254).abs() < 1e-7);
    assert_eq!(row[4], "low");

    let sweep = dir.path().join("sweep.csv");
    let o = ealign(&[
        "linear",
        "--alpha",
        "1.5",
        "--lambda",
        "1",
        "--mu",
        "1",
        "--out",
        arg(&sweep),
    ]);
    assert!(o.status.success());
    assert_eq!(
        std::fs::read_to_string(&sweep).unwrap().lines().count(),
        201
    );
    let o = ealign(&[
        "linear",
        "--alpha",
        "3",
        "--lambda",
        "1",
        "--mu",
        "1",
        "--xi",
        "1",
        "--out",
        arg(&out),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn small_heat_decay_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("heat.csv");
    let o = ealign(&[
        "heat-decay",
        "--n",
        "1024",
        "--length",
        "201.06192982974676",
        "--t-a",
        "2",
        "--t-b",
        "20",
        "--samples",
        "20",
        "--out",
        arg(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(stdout.contains("l2: exponent"));
    let (h, rows) = read_csv(&out);
    assert_eq!(h, ["t", "l2", "low_besov"]);
    assert_eq!(rows.len(), 20);
    assert!(rows.windows(2).all(|w| w[1][1] < w[0][1]));
}

#[test]
fn configured_fit_window_reports_an_exponent() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("fit.ini");
    let text = MINIMAL.replace("t_end = 10", "t_end = 2")
        + "[decay]\ns0 = 0.25\ns1 = 0\nt_a = 0.5\nt_b = 2\n";
    std::fs::write(&cfg, text).unwrap();
    let o = ealign(&["run", arg(&cfg), "--out", arg(&dir.path().join("t.csv"))]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let stdout = String::from_utf8(o.stdout).unwrap();
    let line = stdout
        .lines()
        .find(|l| l.starts_with("l2_pair: exponent "))
        .expect("fit line");
    let exponent: f64 = line.split_whitespace().nth(2).unwrap().parse().unwrap();
    assert!(exponent < 0.0, "{line}");
    assert!(line.contains("prediction -0.166667"), "{line}");
}
