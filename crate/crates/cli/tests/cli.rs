use std::process::{Command, Output};

fn freeconv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_freeconv")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn moments_of_x_plus_xyx() {
    let o = freeconv(&["moments", "--law-x", "semicircle", "--law-y", "semicircle", "--f", "0,1", "--order", "8"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "0,2,0,14,0,138,0,1586");
}

#[test]
fn zero_y_gives_moments_of_x() {
    let o = freeconv(&["moments", "--law-y", "zero", "--order", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "0,1,0,2");
}

#[test]
fn bernoulli_sum_is_arcsine() {
    let o = freeconv(&["convolve", "--mode", "additive", "--law-x", "bernoulli", "--law-y", "bernoulli", "--z", "3+0.001i"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let row: Vec<f64> = out.lines().nth(1).unwrap().split(',').map(|t| t.parse().unwrap()).collect();
    let z = num_complex::Complex64::new(row[0], row[1]);
    let want = 1.0 / ((z - 2.0).sqrt() * (z + 2.0).sqrt());
    assert!((row[2] - want.re).abs() < 1e-9 && (row[3] - want.im).abs() < 1e-9, "{out}");
}

#[test]
fn density_csv() {
    let o = freeconv(&["density", "--law-x", "bernoulli", "--law-y", "bernoulli", "--f", "1", "--lo", "-1", "--hi", "1", "--points", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("x,density"));
    let mid: Vec<f64> = lines.nth(1).unwrap().split(',').map(|t| t.parse().unwrap()).collect();
    assert!((mid[1] - 1.0 / (2.0 * std::f64::consts::PI)).abs() < 1e-5);
}

#[test]
fn eliminate_writes_polynomial_json() {
    let dir = std::env::temp_dir().join(format!("freeconv-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("p.json");
    let o = freeconv(&["eliminate", "--law", "semicircle", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["vars"], serde_json::json!(["x", "z"]));
    assert!(v["terms"].as_array().unwrap().iter().any(|t| t["e"] == serde_json::json!([11, 3]) && t["c"] == "16"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("moments 0,2,0,14,0,138,0,1586"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn rmt_histogram_is_deterministic() {
    let args = ["rmt", "--n", "60", "--seed", "9", "--bins", "8", "--lo", "-6", "--hi", "6"];
    let (a, b) = (freeconv(&args), freeconv(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let out = stdout(&a);
    assert!(out.starts_with("bin_left,bin_right,count\n"));
    let total: usize = out.lines().skip(1).map(|l| l.rsplit(',').next().unwrap().parse::<usize>().unwrap()).sum();
    assert_eq!(total, 60);
}

#[test]
fn verify_subset() {
    let o = freeconv(&["verify", "--only", "2,6"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("[PASS]")).count(), 2);
}

#[test]
fn exit_codes() {
    assert_eq!(freeconv(&["moments", "--law-x", "cauchy"]).status.code(), Some(2));
    assert_eq!(freeconv(&["moments", "--law-x", "{\"law\":"]).status.code(), Some(2));
    assert_eq!(freeconv(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(freeconv(&["convolve", "--z", "nonsense"]).status.code(), Some(2));
    assert_eq!(freeconv(&["rmt", "--n", "10", "--out", "/nonexistent/dir/h.csv"]).status.code(), Some(2));
    // real axis is outside the solver's domain
    assert_eq!(freeconv(&["convolve", "--z", "1"]).status.code(), Some(3));
    // multiplicative convolution needs positive laws
    assert_eq!(freeconv(&["convolve", "--mode", "multiplicative", "--z", "1+1i"]).status.code(), Some(3));
    assert_eq!(freeconv(&["--help"]).status.code(), Some(0));
}
