use std::path::{Path, PathBuf};
use std::process::Command;

use perfchar::reports::citations_registered;
use serde_json::Value;

struct Files {
    dir: tempfile::TempDir,
}

impl Files {
    fn new() -> Self {
        Files {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn put(&self, name: &str, text: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p
    }
}

fn perfchar(args: &[&str], cache: &Path) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_perfchar"))
        .args(args)
        .env("PERFCHAR_CACHE_DIR", cache)
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

fn curve_files(f: &Files, p: u64) -> [String; 3] {
    [
        f.put(
            "r.json",
            &format!(r#"{{"char": {p}, "vars": ["t", "ts"], "relations": ["ts^2 - t^3 - t^2"]}}"#),
        ),
        f.put("n.json", &format!(r#"{{"char": {p}, "vars": ["t", "s"], "relations": ["s^2 - t - 1"]}}"#)),
        f.put("e.json", r#"{"images": {"t": "t", "ts": "t*s"}}"#),
    ]
    .map(|p| p.to_str().unwrap().to_string())
}

#[test]
fn classify_curves() {
    let f = Files::new();
    for (p, coherent, gl) in [(2, true, 2), (3, false, 3)] {
        let [r, n, e] = curve_files(&f, p);
        let (code, out, _) = perfchar(
            &["classify", "--ring", &r, "--normalization", &n, "--embedding", &e],
            f.dir.path(),
        );
        assert_eq!(code, 0);
        let v = json(&out);
        assert_eq!(v["schema"], "perfchar/1");
        assert_eq!(v["coherent"], coherent);
        assert_eq!(v["gl_dim"]["value"], gl);
        assert!(citations_registered(&v));
    }
}

#[test]
fn hk_rows() {
    let f = Files::new();
    let ring = f.put("f2xy.json", r#"{"char": 2, "vars": ["x", "y"]}"#);
    let (code, out, err) = perfchar(
        &["hk", "--ring", ring.to_str().unwrap(), "--ideal", "x,y", "--max-level", "3", "--fit-seibert"],
        f.dir.path(),
    );
    assert_eq!(code, 0, "{err}");
    let v = json(&out);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r["ratio"] == "1"));
    assert_eq!(v["e_hk"]["e_hk"], "1");
    assert_eq!(v["rationality"]["citation"], "hk-rational");
    assert_eq!(v["seibert"]["coefficients"], serde_json::json!(["0", "0", "1"]));
}

#[test]
fn tor_dimension() {
    let f = Files::new();
    let ring = f.put("uv.json", r#"{"char": 2, "vars": ["x", "y"], "relations": ["x*y"]}"#);
    let (code, out, _) = perfchar(
        &["tor", "--ring", ring.to_str().unwrap(), "--left", "x", "--right", "y", "--index", "2", "--level", "1"],
        f.dir.path(),
    );
    assert_eq!(code, 0);
    assert_eq!(json(&out)["dim"], 1);
}

#[test]
fn invariants_carry_citations() {
    let f = Files::new();
    let ring = f.put("node.json", r#"{"char": 2, "vars": ["x", "y"], "relations": ["x*y"]}"#);
    let (code, out, _) = perfchar(&["invariants", "--ring", ring.to_str().unwrap()], f.dir.path());
    assert_eq!(code, 0);
    let v = json(&out);
    assert!(citations_registered(&v));
    let rows = v["rows"].as_array().unwrap();
    for r in rows {
        let cited = r["source"] == "cited";
        assert_eq!(cited, r.get("citation").is_some());
    }
}

#[test]
fn witt_and_tilt_and_valuation() {
    let f = Files::new();
    let (code, out, _) = perfchar(&["witt", "--char", "2", "--length", "3", "--table"], f.dir.path());
    assert_eq!(code, 0);
    assert_eq!(json(&out)["passed"], true);
    assert!(f.dir.path().join("witt-p2-n3.txt").exists());
    let (code, out, _) = perfchar(&["tilt", "--char", "2", "--length", "4"], f.dir.path());
    assert_eq!(code, 0);
    assert_eq!(json(&out)["passed"], true);
    let ring = f.put("fx.json", r#"{"char": 2, "vars": ["x"]}"#);
    let (code, out, _) = perfchar(
        &["tilt", "--ring", ring.to_str().unwrap(), "--length", "3", "--witness", "x^(1/2)"],
        f.dir.path(),
    );
    assert_eq!(code, 0);
    assert_eq!(json(&out)["lift"], serde_json::json!(["x^(1/2)", "x^(1/4)", "x^(1/8)"]));
    let (code, out, _) = perfchar(&["valuation", "--char", "3", "--element", "x^(2/9)+x"], f.dir.path());
    assert_eq!(code, 0);
    assert_eq!(json(&out)["valuation"], "2/9");
    let (code, out, _) = perfchar(&["ext1-check", "--char", "2", "--length", "4", "--seed", "1"], f.dir.path());
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["v_a1"], "7/8");
    assert_eq!(v["tight"], true);
}

#[test]
fn exit_codes() {
    let f = Files::new();
    let d = f.dir.path();
    assert_eq!(perfchar(&["no-such-command"], d).0, 1);
    let bad = f.put("bad.json", "{ not json");
    let (code, out, err) = perfchar(&["invariants", "--ring", bad.to_str().unwrap()], d);
    assert_eq!(code, 1);
    assert!(out.is_empty() && !err.is_empty());
    // a search that cannot succeed within its window
    let ring = f.put("xy.json", r#"{"char": 2, "vars": ["x", "y"]}"#);
    let (code, out, _) = perfchar(
        &["resolve-colimit", "--ring", ring.to_str().unwrap(), "--ideal", "x", "--element", "y", "--max-level", "2"],
        d,
    );
    assert_eq!(code, 2);
    assert_eq!(json(&out)["found"], false);
    let (code, _, err) = perfchar(
        &["--budget", "1", "hk", "--ring", ring.to_str().unwrap(), "--ideal", "x^2 + y, y^2 + x*y + x", "--max-level", "3"],
        d,
    );
    assert_eq!(code, 2, "{err}");
}

#[test]
fn markdown_and_determinism() {
    let f = Files::new();
    let [r, n, e] = curve_files(&f, 5);
    let args = ["classify", "--ring", &r, "--normalization", &n, "--embedding", &e];
    let first = perfchar(&args, f.dir.path());
    let second = perfchar(&args, f.dir.path());
    assert_eq!(first, second);
    let mut md = args.to_vec();
    md.extend(["--format", "md"]);
    let (code, out, _) = perfchar(&md, f.dir.path());
    assert_eq!(code, 0);
    assert!(out.starts_with("# perfchar classify"));
    let ring = f.put("xy.json", r#"{"char": 2, "vars": ["x", "y"]}"#);
    let vc = ["vanish-check", "--ring", ring.to_str().unwrap(), "--left", "x, y", "--right", "x", "--samples", "6"];
    assert_eq!(perfchar(&vc, f.dir.path()), perfchar(&vc, f.dir.path()));
}
