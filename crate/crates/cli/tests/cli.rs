use std::path::PathBuf;
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twosimple")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("twosimple-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn gldim_green_and_kk() {
    let o = bin(&["gldim", "--family", "green:5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("gldim = 5"), "{}", stdout(&o));
    let o = bin(&["gldim", "--family", "kk:2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "gldim = 5, loewy = 4");
}

#[test]
fn curve_on_random_lines() {
    let out = tmp("curve.json");
    let o = bin(&["curve", "--family", "random:2,3,(1,1,1),42", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("modest = "));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["curve"]["m"], 3);
    assert_eq!(v["curve"]["lambda"]["target_dim"], 6);
}

#[test]
fn input_errors_exit_two() {
    for args in [
        vec!["gldim", "--family", "green:x"],
        vec!["gldim", "--family", "/no/such/family.json"],
        vec!["build-algebra", "--family", "kk:2", "--chi", "0,1"],
        vec!["dcat-verify", "--family", "kk:2", "--delta", "0"],
        vec!["dcat-verify", "--family", "random:3,2,(2,1),1"],
        vec!["curve", "--family", "kk:3"],
        vec!["gldim"],
        vec!["gldim", "-f", "kk:2"],
    ] {
        assert_eq!(bin(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn cutoff_exceeded_exits_one() {
    let o = bin(&["gldim", "--family", "kk:2", "--cutoff", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cutoff"));
}

#[test]
fn family_file_round_trip() {
    let out = tmp("family.json");
    let o = bin(&["check-family", "--family", "random:3,2,(2,1),5", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let fam = tmp("family-data.json");
    std::fs::write(&fam, serde_json::to_string(&v["data"]).unwrap()).unwrap();
    let o = bin(&["verify-oracle", "--family", fam.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("isomorphic"));
}

#[test]
fn family_failing_g_is_reported() {
    let fam = tmp("bad.json");
    std::fs::write(&fam, r#"{"n":2,"m":1,"pairs":[{"V":[["1","0"]],"W":[["2","0"]]}]}"#).unwrap();
    assert_eq!(bin(&["check-family", "--family", fam.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn algebra_commands() {
    let o = bin(&["build-algebra", "--family", "random:2,1,1,7", "--chi", "0,-1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("dim R = 8 (formula 8)"), "{}", stdout(&o));
    let o = bin(&["factorize", "--family", "kk:3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("3 steps"));
    let o = bin(&["dcat-verify", "--family", "random:3,2,(1,1),4", "--delta", "2,-1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn demo_is_deterministic() {
    let (a, b, c) = (tmp("demo-a.json"), tmp("demo-b.json"), tmp("demo-c.json"));
    for (p, seed) in [(&a, "3"), (&b, "3"), (&c, "4")] {
        let o = bin(&["demo", "--quick", "--seed", seed, "--out", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("PASS")).count(), 10);
    }
    let read = |p: &PathBuf| std::fs::read(p).unwrap();
    assert_eq!(read(&a), read(&b));
    assert_ne!(read(&a), read(&c));
}
