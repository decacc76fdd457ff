use std::path::Path;
use std::process::{Command, Output};

fn hecke(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hecke"))
        .args(args)
        .env("HECKE_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn csv_row(text: &str) -> Vec<(String, f64)> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<f64> = lines.next().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    header.into_iter().map(String::from).zip(row).collect()
}

fn field(row: &[(String, f64)], name: &str) -> f64 {
    row.iter().find(|(k, _)| k == name).unwrap_or_else(|| panic!("no column {name}")).1
}

#[test]
fn eval_eisenstein_prints_seventeen_digits() {
    let dir = tempfile::tempdir().unwrap();
    let text = stdout(&hecke(dir.path(), &["eval", "eisenstein", "--x", "0", "--y", "1", "--t", "0", "--sigma", "2"]));
    assert!(text.starts_with("sigma,t,re,im,abs,tail_bound\n"));
    let cells: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    // d.dddddddddddddddde<exp>
    let mantissa = cells[2].split('e').next().unwrap();
    assert_eq!(mantissa.replace(['.', '-'], "").len(), 17);
    // E(i, 2) = 4 zeta(2) beta(2) / (2 zeta(4))
    let want = 4.0 * (std::f64::consts::PI.powi(2) / 6.0) * 0.915_965_594_177_219_015 / (2.0 * std::f64::consts::PI.powi(4) / 90.0);
    let row = csv_row(&text);
    assert!((field(&row, "re") - want).abs() < 1e-10);
}

#[test]
fn epstein_routes_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let text = stdout(&hecke(dir.path(), &["--format", "json", "eval", "epstein", "--a", "3", "--b", "0.2", "--t", "15", "--method", "afe"]));
    let line = text.trim();
    assert!(line.starts_with("{\"sigma\":") && line.ends_with('}'));
    assert!(line.contains("\"abs\":"));
    let direct = stdout(&hecke(dir.path(), &["eval", "epstein", "--a", "3", "--b", "0.2", "--t", "15", "--sigma", "2", "--method", "direct"]));
    assert!(field(&csv_row(&direct), "abs") > 0.0);
    // the approximate functional equation lives on the critical line
    let o = hecke(dir.path(), &["eval", "epstein", "--a", "3", "--b", "0", "--t", "5", "--sigma", "2", "--method", "afe"]);
    assert!(!o.status.success());
    // direct summation does not converge on the critical line
    let o = hecke(dir.path(), &["eval", "epstein", "--a", "3", "--b", "0", "--t", "5", "--method", "direct"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
}

#[test]
fn lk_routes_agree_and_fill_the_cache() {
    let dir = tempfile::tempdir().unwrap();
    let args = |m: &'static str| ["eval", "lk", "--disc", "-23", "--char", "1", "--sigma", "2", "--t", "1", "--method", m];
    let hecke_row = csv_row(&stdout(&hecke(dir.path(), &args("hecke"))));
    let direct_row = csv_row(&stdout(&hecke(dir.path(), &args("direct"))));
    for c in ["re", "im"] {
        assert!((field(&hecke_row, c) - field(&direct_row, c)).abs() < 1e-8);
    }
    assert_eq!(field(&hecke_row, "h"), 3.0);
    assert!(dir.path().join("classgroup_-23.txt").exists());
}

#[test]
fn scan_writes_csv_and_svg_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let out1 = dir.path().join("one.csv");
    let out2 = dir.path().join("two.csv");
    let svg = dir.path().join("plot.svg");
    let base = ["scan", "lemma21", "--d-min", "-200", "--d-max", "-3", "--delta", "0.5"];
    let mut a: Vec<&str> = base.to_vec();
    a.extend(["--workers", "1", "--out", out1.to_str().unwrap(), "--svg", svg.to_str().unwrap()]);
    stdout(&hecke(dir.path(), &a));
    let mut b: Vec<&str> = base.to_vec();
    b.extend(["--workers", "3", "--out", out2.to_str().unwrap()]);
    stdout(&hecke(dir.path(), &b));
    let one = std::fs::read(&out1).unwrap();
    assert_eq!(one, std::fs::read(&out2).unwrap());
    let text = String::from_utf8(one).unwrap();
    assert!(text.starts_with("D,delta,h,value,ratio\n"));
    // one row per fundamental discriminant in [-200, -3]
    assert_eq!(text.lines().count() - 1, 62);
    let svg_text = std::fs::read_to_string(&svg).unwrap();
    assert!(svg_text.starts_with("<svg") && svg_text.matches("<circle").count() == 62);
}

#[test]
fn scan_subconv_and_expsum_json() {
    let dir = tempfile::tempdir().unwrap();
    let text = stdout(&hecke(dir.path(), &["--format", "json", "scan", "subconv", "--disc", "-23,-4", "--t", "3,6"]));
    let lines: Vec<&str> = text.lines().collect();
    // three characters plus the second moment for D = -23, one plus the moment for D = -4, at two heights
    assert_eq!(lines.len(), 12);
    assert!(lines.iter().all(|l| l.starts_with("{\"D\":") && l.contains("\"ratio\":")));
    let text = stdout(&hecke(dir.path(), &["scan", "expsum", "--a", "1,4", "--b", "0", "--t", "1000"]));
    assert!(text.starts_with("a,b,t,X1,X2,value,ratio\n"));
    assert!(text.lines().count() > 2);
}

#[test]
fn peak_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let row = csv_row(&stdout(&hecke(dir.path(), &["peak", "--t", "50", "--y-min", "10"])));
    assert!(field(&row, "y") >= 10.0);
    assert!(field(&row, "e_ratio") >= 1.9);
    assert!(field(&row, "phase_defect") <= 1e-8);
}

#[test]
fn config_file_is_read_and_validated() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("hecke.conf");
    let cache = dir.path().join("from-config");
    std::fs::write(&cfg, format!("# test\ntol = 1e-9\nworkers = 1\ncache_dir = {}\n", cache.display())).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_hecke"))
        .args(["--config", cfg.to_str().unwrap(), "eval", "lk", "--disc", "-15", "--char", "0", "--sigma", "2", "--t", "0", "--method", "hecke"])
        .env_remove("HECKE_CACHE_DIR")
        .output()
        .unwrap();
    stdout(&o);
    assert!(cache.join("classgroup_-15.txt").exists());

    // the environment wins over the config file
    let env_cache = dir.path().join("from-env");
    let o = Command::new(env!("CARGO_BIN_EXE_hecke"))
        .args(["--config", cfg.to_str().unwrap(), "eval", "lk", "--disc", "-20", "--char", "0", "--sigma", "2", "--t", "0", "--method", "hecke"])
        .env("HECKE_CACHE_DIR", &env_cache)
        .output()
        .unwrap();
    stdout(&o);
    assert!(env_cache.join("classgroup_-20.txt").exists());
    assert!(!cache.join("classgroup_-20.txt").exists());

    std::fs::write(&cfg, "colour = blue\n").unwrap();
    let o = hecke(dir.path(), &["--config", cfg.to_str().unwrap(), "peak", "--t", "20", "--y-min", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("colour"));
}

#[test]
fn verify_subset_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let o = hecke(dir.path(), &["verify", "--report", report.to_str().unwrap(), "A9", "A11"]);
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with("A9 PASS")));
    assert!(text.lines().any(|l| l.starts_with("A11 PASS")));
    let body = std::fs::read_to_string(&report).unwrap();
    assert!(body.contains("\"A9\"") && body.contains("\"A11\"") && body.contains("\"measured\""));

    let o = hecke(dir.path(), &["verify", "--report", report.to_str().unwrap(), "A99"]);
    assert!(!o.status.success());
}

#[test]
fn corrupted_cache_is_rebuilt() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("classgroup_-47.txt"), "D -47\nh 5\nform 1 1 12\n").unwrap();
    let row = csv_row(&stdout(&hecke(dir.path(), &["eval", "lk", "--disc", "-47", "--char", "0", "--sigma", "2", "--t", "0", "--method", "hecke"])));
    assert_eq!(field(&row, "h"), 5.0);
    assert!(std::fs::read_to_string(dir.path().join("classgroup_-47.txt")).unwrap().trim_end().ends_with("ok"));
}
