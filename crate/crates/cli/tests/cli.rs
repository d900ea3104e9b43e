use std::path::Path;
use std::process::{Command, Output};

fn hkw(args: &[&str], cache: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hkw"))
        .args(args)
        .env("HKW_CACHE_DIR", cache)
        .output()
        .expect("run hkw")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn configs() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/configs"))
}

#[test]
fn compute_plane_and_repeat_from_cache() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["compute", "--ring", "p=2;vars=x,y", "--ideal", "x,y", "--emax", "4"];
    let first = hkw(&args, dir.path());
    assert!(first.status.success());
    assert_eq!(stdout(&first), "e,q,phi\n1,2,4\n2,4,16\n3,8,64\n4,16,256\n");
    assert!(std::fs::read_dir(dir.path()).unwrap().count() > 0);
    let second = hkw(&args, dir.path());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn compute_fermat_with_detail() {
    let dir = tempfile::tempdir().unwrap();
    let detail = dir.path().join("detail.csv");
    let o = hkw(
        &[
            "compute",
            "--ring",
            "p=7;vars=x,y,z;rel=x^3+y^3+z^3",
            "--ideal",
            "x,y,z",
            "--emax",
            "2",
            "--no-cache",
            "--detail",
            detail.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert!(o.status.success());
    assert_eq!(stdout(&o), "e,q,phi\n1,7,109\n2,49,5401\n");
    let d = std::fs::read_to_string(&detail).unwrap();
    assert!(d.starts_with("e,q,m,dim\n1,7,0,1\n1,7,1,3\n"));
    let total: u64 = d
        .lines()
        .skip(1)
        .filter(|l| l.starts_with("1,"))
        .map(|l| l.rsplit(',').next().unwrap().parse::<u64>().unwrap())
        .sum();
    assert_eq!(total, 109);
}

#[test]
fn parse_errors_exit_2_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let o = hkw(
        &["compute", "--ring", "p=7;vars=x,y,z;rel=x^3+w", "--ideal", "x,y,z"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("--ring: parse error at 1:24: unknown variable 'w'"), "{err}");

    let o = hkw(&["compute", "--ring", "p=3;vars=x,y", "--ideal", "x,x*y"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr).unwrap().contains("bound"));
}

#[test]
fn fit_reports_and_failures() {
    let dir = tempfile::tempdir().unwrap();
    let samples = dir.path().join("s.csv");
    std::fs::write(&samples, "e,q,phi\n1,2,4\n2,4,16\n3,8,64\n4,16,256\n5,32,1024\n").unwrap();
    let o = hkw(&["fit", samples.to_str().unwrap()], dir.path());
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["e_hk"], "1/1");
    assert_eq!(v["tau"], 1);
    assert_eq!(v["gamma"], serde_json::json!(["0/1"]));
    assert_eq!(v["beta_audit"], "0/1");

    // 3·4^e + (e mod 2)
    let rows: String = (1..=6u32)
        .map(|e| format!("{e},{},{}\n", 1u64 << e, 3 * (1u64 << (2 * e)) + (e % 2) as u64))
        .collect();
    std::fs::write(&samples, format!("e,q,phi\n{rows}")).unwrap();
    let o = hkw(&["fit", samples.to_str().unwrap()], dir.path());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["e_hk"], "3/1");
    assert_eq!(v["tau"], 2);
    assert_eq!(v["gamma"], serde_json::json!(["1/1", "0/1"]));

    std::fs::write(&samples, "e,q,phi\n1,2,4\n2,4,16\n").unwrap();
    let o = hkw(&["fit", samples.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(3));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["error"], "fit-failure");
    assert_eq!(v["residuals"][0]["alpha"], "1/1");
}

#[test]
fn fit_gnuplot_rows() {
    let dir = tempfile::tempdir().unwrap();
    let samples = dir.path().join("s.csv");
    std::fs::write(&samples, "e,q,phi\n1,7,109\n2,49,5401\n3,343,264709\n").unwrap();
    let o = hkw(&["fit", samples.to_str().unwrap(), "--gnuplot"], dir.path());
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("e_HK = 9/4"));
    assert!(text.contains("\n7 -1.25 # -5/4\n"));
}

#[test]
fn p1check_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = hkw(&["p1check", "--trials", "200", "--seed", "42"], dir.path());
    let b = hkw(&["p1check", "--trials", "200", "--seed", "42"], dir.path());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("formula-vs-oracle: 200/200 exact"));
    let one = hkw(&["p1check", "--trials", "1"], dir.path());
    assert!(stdout(&one).contains("1/1 exact"));
    assert!(stdout(&one).contains("trial 0: bundle="));
}

#[test]
fn bundle_commands() {
    let dir = tempfile::tempdir().unwrap();
    let o = hkw(
        &[
            "bundle-sections", "--hn", "1:0", "--curve", "g=0,degY=1", "--sigma", "0", "--rho", "1",
            "--q", "8",
        ],
        dir.path(),
    );
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["total"], "36/1");

    let o = hkw(
        &[
            "bundle-sequence", "--sub", "1:-2", "--middle", "2:-1", "--quotient", "1:0", "--curve",
            "g=0,degY=1",
        ],
        dir.path(),
    );
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["coefficient"], "1/1");

    let o = hkw(
        &["bundle-sequence", "--syzygy", "2:-9/2", "--degrees", "1,1,1", "--curve", "g=1,degY=3"],
        dir.path(),
    );
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["e_hk"], "9/4");

    let o = hkw(
        &[
            "bundle-sequence", "--sub", "1:-1", "--middle", "2:-1", "--quotient", "1:0", "--curve",
            "g=0,degY=1",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn crossval_from_config_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("plane_maximal.toml");
    let o = hkw(&["--config", cfg.to_str().unwrap(), "crossval", "--emax", "4"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["measured_e_hk"], "1/1");
    assert_eq!(v["agree"], true);
    assert_eq!(v["inputs"]["e_max"], 4);

    // a wrong hypothesis is surfaced as a disagreement
    let o = hkw(
        &["--config", cfg.to_str().unwrap(), "crossval", "--emax", "3", "--hn-syz", "1:-4", "--curve", "g=0,degY=2"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8(o.stderr).unwrap().contains("DISAGREE"));

    // inconsistent degree data is rejected before any computation
    let o = hkw(
        &["--config", cfg.to_str().unwrap(), "crossval", "--emax", "3", "--ideal", "x,y^2"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8(o.stderr).unwrap().contains("inconsistent syzygy data"));
}

#[test]
fn fermat_config_agrees() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("fermat_f7.toml");
    let o = hkw(&["--config", cfg.to_str().unwrap(), "crossval", "--emax", "3"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["measured_e_hk"], "9/4");
    assert_eq!(v["predicted_e_hk"], "9/4");
}
