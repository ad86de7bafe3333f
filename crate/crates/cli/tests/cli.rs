use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geoshare")).current_dir(dir).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn file_json(p: PathBuf) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn shamir(dir: &Path) {
    assert_eq!(code(&run(dir, &["scheme", "threshold", "--q", "5", "--t", "2", "--n", "3", "-o", "shamir.json"])), 0);
}

#[test]
fn construct_subcommands() {
    let d = TempDir::new().unwrap();
    let o = run(d.path(), &["construct", "parc", "--q", "3", "--variant", "28", "-o", "parc.json"]);
    assert_eq!(code(&o), 0);
    let parc = file_json(d.path().join("parc.json"));
    assert_eq!(parc["kind"], "parc");
    assert_eq!(parc["points"].as_array().unwrap().len(), 9);
    assert_eq!(stdout_json(&o)["regular"], serde_json::json!([3, 3]));

    let o = run(d.path(), &["construct", "harc", "--q", "2", "-o", "harc.json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(file_json(d.path().join("harc.json"))["profile"], serde_json::json!([4, 2]));

    let o = run(d.path(), &["construct", "conic", "--q", "5"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["points"].as_array().unwrap().len(), 6);

    let o = run(d.path(), &["construct", "baer", "--q", "2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["subplane_points"], 7);

    assert_eq!(code(&run(d.path(), &["construct", "parc", "--q", "3", "--variant", "31"])), 2);
    assert_eq!(code(&run(d.path(), &["construct", "parc", "--q", "3"])), 2);
    assert_eq!(code(&run(d.path(), &["construct", "wheel", "--q", "3"])), 2);
}

#[test]
fn schemes_from_geometry() {
    let d = TempDir::new().unwrap();
    run(d.path(), &["construct", "parc", "--q", "3", "--variant", "28", "-o", "parc.json"]);
    assert_eq!(code(&run(d.path(), &["scheme", "from-parc", "parc.json", "-o", "scheme.json"])), 0);
    let s = file_json(d.path().join("scheme.json"));
    assert_eq!(s["participants"].as_array().unwrap().len(), 6);
    assert_eq!(s["verification"]["pass"], true);

    run(d.path(), &["construct", "harc", "--q", "2", "-o", "harc.json"]);
    let o = run(d.path(), &["scheme", "from-harc", "harc.json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["labels"], serde_json::json!(["U1", "U2", "U3", "L1", "L2"]));

    // One participant group is left after removing the dealer's group.
    run(d.path(), &["construct", "parc", "--q", "2", "--variant", "32", "-o", "p32.json"]);
    assert_eq!(code(&run(d.path(), &["scheme", "from-parc", "p32.json"])), 3);
    assert_eq!(code(&run(d.path(), &["scheme", "from-parc", "missing.json"])), 2);
}

#[test]
fn explicit_scheme() {
    let d = TempDir::new().unwrap();
    let gen = r#"{"field":{"p":5,"n":1,"modulus":[0,1]},"k":2,"dealer":[1,0],"participants":[[1,1],[1,2],[1,3]],"labels":["A","B","C"]}"#;
    std::fs::write(d.path().join("g.json"), gen).unwrap();
    std::fs::write(d.path().join("a.json"), r#"{"model":"threshold","t":2,"n":3}"#).unwrap();
    std::fs::write(d.path().join("bad.json"), r#"{"model":"threshold","t":3,"n":3}"#).unwrap();
    assert_eq!(code(&run(d.path(), &["scheme", "explicit", "--generator", "g.json", "--access", "a.json"])), 0);
    let o = run(d.path(), &["scheme", "explicit", "--generator", "g.json", "--access", "bad.json"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("\"pass\": false"));
}

#[test]
fn verify_modes_and_corruption() {
    let d = TempDir::new().unwrap();
    shamir(d.path());
    let o = run(d.path(), &["verify", "shamir.json", "--mode", "all"]);
    assert_eq!(code(&o), 0);
    let r = stdout_json(&o);
    assert_eq!(r["agree"], true);
    for m in ["vector", "definitional", "char"] {
        assert_eq!(r["reports"][m]["pass"], true, "{m}");
    }
    assert_eq!(code(&run(d.path(), &["verify", "shamir.json", "--mode", "char", "--exhaustive"])), 0);

    let mut s = file_json(d.path().join("shamir.json"));
    s["dealer"] = serde_json::json!([0, 0]);
    std::fs::write(d.path().join("zero.json"), s.to_string()).unwrap();
    let o = run(d.path(), &["verify", "zero.json"]);
    assert_eq!(code(&o), 3);
    let r = stdout_json(&o);
    for m in ["vector", "definitional", "char"] {
        assert_eq!(r["reports"][m]["pass"], false, "{m}");
    }

    std::fs::write(d.path().join("junk.json"), "{").unwrap();
    assert_eq!(code(&run(d.path(), &["verify", "junk.json"])), 2);
    assert_eq!(code(&run(d.path(), &["verify", "shamir.json", "--mode", "fancy"])), 2);
}

#[test]
fn verify_array_csv() {
    let d = TempDir::new().unwrap();
    shamir(d.path());
    assert_eq!(code(&run(d.path(), &["export", "csv", "shamir.json", "-o", "a.csv"])), 0);
    std::fs::write(d.path().join("acc.json"), r#"{"model":"threshold","t":2,"n":3}"#).unwrap();
    let o = run(d.path(), &["verify", "--array", "a.csv", "--access", "acc.json", "--mode", "definitional"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["reports"]["definitional"]["method"], "definitional");
    let o = run(d.path(), &["verify", "--array", "a.csv", "--access", "acc.json", "--mode", "all"]);
    assert_eq!(code(&o), 0);

    // Without the field line the order must come from --q.
    let text = std::fs::read_to_string(d.path().join("a.csv")).unwrap();
    let bare: String = text.lines().skip(1).map(|l| format!("{l}\n")).collect();
    std::fs::write(d.path().join("bare.csv"), bare).unwrap();
    assert_eq!(code(&run(d.path(), &["verify", "--array", "bare.csv", "--access", "acc.json"])), 2);
    assert_eq!(code(&run(d.path(), &["verify", "--array", "bare.csv", "--access", "acc.json", "--q", "5"])), 0);

    // A 3-of-3 structure is not what this array realizes.
    std::fs::write(d.path().join("acc3.json"), r#"{"model":"threshold","t":3,"n":3}"#).unwrap();
    assert_eq!(code(&run(d.path(), &["verify", "--array", "a.csv", "--access", "acc3.json"])), 3);

    assert_eq!(code(&run(d.path(), &["export", "json", "shamir.json", "-o", "a.json"])), 0);
    assert_eq!(code(&run(d.path(), &["verify", "--array", "a.json", "--access", "acc.json", "--mode", "vector"])), 0);
}

#[test]
fn deal_and_reconstruct() {
    let d = TempDir::new().unwrap();
    shamir(d.path());
    let o = run(d.path(), &["deal", "shamir.json", "--secret", "3", "--seed", "7", "--out-dir", "shares"]);
    assert_eq!(code(&o), 0);
    let again = run(d.path(), &["deal", "shamir.json", "--secret", "3", "--seed", "7"]);
    assert_eq!(o.stdout, again.stdout);

    let o = run(d.path(), &["reconstruct", "shamir.json", "shares/P1.json", "shares/P3.json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["secret"], 3);

    let o = run(d.path(), &["reconstruct", "shamir.json", "shares/P2.json"]);
    assert_eq!(code(&o), 0);
    let r = stdout_json(&o);
    assert_eq!(r["authorized"], false);
    assert_eq!(r["matching_rules"], 5);
    let dist = r["distribution"].as_array().unwrap();
    assert_eq!(dist.len(), 5);
    assert!(dist.iter().all(|k| k["rules"] == 1));

    // A flipped value in an overdetermined set is caught; in a pair it
    // gives a consistent but wrong secret.
    let mut p1 = file_json(d.path().join("shares/P1.json"));
    p1["value"] = ((p1["value"].as_u64().unwrap() + 1) % 5).into();
    std::fs::write(d.path().join("flipped.json"), p1.to_string()).unwrap();
    let o = run(d.path(), &["reconstruct", "shamir.json", "flipped.json", "shares/P2.json", "shares/P3.json"]);
    assert_eq!(code(&o), 4);
    let o = run(d.path(), &["reconstruct", "shamir.json", "flipped.json", "shares/P3.json"]);
    assert_eq!(code(&o), 0);
    assert_ne!(stdout_json(&o)["secret"], 3);

    let o = run(d.path(), &["deal", "shamir.json", "--secret", "3"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
    assert_eq!(code(&run(d.path(), &["deal", "shamir.json", "--secret", "9", "--seed", "1"])), 2);
    assert_eq!(code(&run(d.path(), &["deal", "shamir.json", "--seed", "1"])), 2);
}

#[test]
fn deal_all_list_file() {
    let d = TempDir::new().unwrap();
    run(d.path(), &["construct", "parc", "--q", "3", "--variant", "28", "-o", "parc.json"]);
    run(d.path(), &["scheme", "from-parc", "parc.json", "-o", "s.json"]);
    let o = run(d.path(), &["deal", "s.json", "--secret", "5", "--seed", "2"]);
    std::fs::write(d.path().join("all.json"), &o.stdout).unwrap();
    let o = run(d.path(), &["reconstruct", "s.json", "all.json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["secret"], 5);
}

#[test]
fn bounds() {
    let d = TempDir::new().unwrap();
    let o = run(d.path(), &["bounds", "parc", "--q", "2"]);
    assert_eq!(code(&o), 0);
    let r = stdout_json(&o);
    assert_eq!(r["max_found"], 4);
    assert_eq!(r["witness"].as_array().unwrap().len(), 4);
    assert!(r["elapsed_ms"].is_number());
    let o = run(d.path(), &["bounds", "harc", "--q", "3"]);
    assert_eq!(stdout_json(&o)["max_found"], 5);
    assert_eq!(code(&run(d.path(), &["bounds", "parc", "--q", "7"])), 2);
}

#[test]
fn written_files_round_trip() {
    let d = TempDir::new().unwrap();
    for (q, v) in [("3", "26"), ("2", "31")] {
        run(d.path(), &["construct", "parc", "--q", q, "--variant", v, "-o", "p.json"]);
        run(d.path(), &["scheme", "from-parc", "p.json", "-o", "s.json"]);
        let o = run(d.path(), &["verify", "s.json", "-o", "r.json"]);
        assert_eq!(code(&o), 0);
        let first = file_json(d.path().join("s.json"));
        // Rebuilding from the file's own parts gives the same file.
        std::fs::write(d.path().join("a.json"), first["access"].to_string()).unwrap();
        let o = run(d.path(), &["scheme", "explicit", "--generator", "s.json", "--access", "a.json"]);
        assert_eq!(code(&o), 0);
        let mut again = stdout_json(&o);
        again["verification"] = first["verification"].clone();
        assert_eq!(again, first);
    }
}
