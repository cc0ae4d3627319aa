use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ddcat_core::{
    decide_eq_exprs, fixtures, is_normal, load_diagram, load_signature, parse_expr,
    validate_diagram, Sig2,
};
use tempfile::TempDir;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn ddcat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ddcat"))
        .args(args)
        .env("DDCAT_COLOR", "0")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn s0() -> String {
    fixture("s0.json").to_str().unwrap().to_string()
}

#[test]
fn check_is_reflexive() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.expr", "(alpha|beta)");
    let b = write(&dir, "b.expr", "(alpha|beta)");
    let o = ddcat(&["check", "-s", &s0(), &a, &b]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "EQUAL\nnormal forms coincide\n");
}

#[test]
fn check_reports_reasons() {
    let dir = TempDir::new().unwrap();
    let ab = write(&dir, "ab.expr", "(alpha | beta)");
    let ba = write(&dir, "ba.expr", "(beta | alpha)");
    let aa = write(&dir, "aa.expr", "(alpha | alpha)");
    let a = write(&dir, "a.expr", "alpha");
    let cases = [
        (&ab, &ba, "normal forms differ"),
        (&ab, &aa, "multiset mismatch"),
        (&ab, &a, "boundary mismatch"),
    ];
    for (x, y, reason) in cases {
        let o = ddcat(&["check", "-s", &s0(), x, y]);
        assert_eq!(o.status.code(), Some(1));
        assert_eq!(stdout(&o), format!("NOT-EQUAL\n{reason}\n"));
    }
}

#[test]
fn check_accepts_diagram_documents() {
    let dir = TempDir::new().unwrap();
    let e = write(&dir, "e.expr", "((alpha | beta) / (beta | alpha))");
    let t = ddcat(&["translate", "-s", &s0(), &e]);
    assert_eq!(t.status.code(), Some(0));
    let d = write(&dir, "e.diag.json", &stdout(&t));
    let o = ddcat(&["check", "-s", &s0(), &e, &d]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn malformed_input_exits_two_without_panicking() {
    let dir = TempDir::new().unwrap();
    let good = write(&dir, "good.expr", "alpha");
    let inputs = [
        write(&dir, "garbage.expr", "(alpha | "),
        write(&dir, "unknown.expr", "omega"),
        write(&dir, "mismatch.expr", "(alpha / alpha) | hid(v)"),
        write(&dir, "truncated.json", "{\"domain\": {\"at\": \"A\""),
        write(&dir, "badlevel.json", "{\"domain\":{\"at\":\"A\",\"wires\":[]},\"levels\":[{\"offset\":3,\"cell\":\"alpha\"}]}"),
        write(&dir, "badtiling.json", "{\"type\":{},\"cells\":[{\"rect\":[0,0]}]}"),
        write(&dir, "binary.expr", "\u{0}\u{1}\u{2}\u{fffd}"),
        dir.path().join("missing.expr").to_str().unwrap().to_string(),
    ];
    let bad_sig = write(&dir, "bad.json", "{\"objects\": [\"A\"], \"hgens\": 7}");
    for input in &inputs {
        for cmd in ["normalize", "translate", "tile", "extract"] {
            let o = ddcat(&[cmd, "-s", &s0(), input]);
            assert_eq!(o.status.code(), Some(2), "{cmd} {input}");
            assert!(
                stderr(&o).starts_with("error: "),
                "{cmd} {input}: {}",
                stderr(&o)
            );
            assert!(!stderr(&o).contains("panicked"));
        }
        let o = ddcat(&["check", "-s", &s0(), &good, input]);
        assert_eq!(o.status.code(), Some(2), "check {input}");
        let out = dir.path().join("x.svg");
        let o = ddcat(&["render", "-s", &s0(), input, "-o", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "render {input}");
    }
    let o = ddcat(&["check", "-s", &bad_sig, &good, &good]);
    assert_eq!(o.status.code(), Some(2));
    let o = ddcat(&["check", "-s", &s0(), &good]);
    assert_eq!(o.status.code(), Some(2));
    let o = ddcat(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn emitted_documents_reparse() {
    let dir = TempDir::new().unwrap();
    let sig = fixtures::mixed();
    let s2 = Sig2::from_signature(&sig);
    let sig_path = fixture("mixed.json");
    for seed in 0..12u64 {
        let e = ddcat_core::random_expr(&sig, 6, seed).unwrap();
        let path = write(&dir, "e.expr", &ddcat_core::print_expr(&e));
        for cmd in ["translate", "normalize"] {
            let o = ddcat(&[cmd, "-s", sig_path.to_str().unwrap(), &path]);
            assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
            let d = load_diagram(&stdout(&o), &s2).unwrap();
            assert!(validate_diagram(&d, &s2).is_ok());
            if cmd == "normalize" {
                assert!(is_normal(&d, &s2).unwrap());
            }
        }
    }
}

#[test]
fn tile_then_extract_round_trips() {
    let dir = TempDir::new().unwrap();
    let sig = load_signature(&fs::read_to_string(fixture("s0x.json")).unwrap()).unwrap();
    let sig_path = fixture("s0x.json");
    let sig_path = sig_path.to_str().unwrap();
    let text = "((alpha | delta) / (beta | gamma))";
    let e = write(&dir, "e.expr", text);
    let t = ddcat(&["tile", "-s", sig_path, &e]);
    assert_eq!(t.status.code(), Some(0), "{}", stderr(&t));
    let out = stdout(&t);
    let (doc, verdict) = out.trim_end().rsplit_once('\n').unwrap();
    assert_eq!(verdict, "COMPOSABLE");
    let m = write(&dir, "m.tiling.json", doc);
    let x = ddcat(&["extract", "-s", sig_path, &m]);
    assert_eq!(x.status.code(), Some(0), "{}", stderr(&x));
    let back = parse_expr(stdout(&x).trim(), &sig).unwrap();
    assert!(decide_eq_exprs(&back, &parse_expr(text, &sig).unwrap(), &sig).unwrap());
}

#[test]
fn pinwheel_is_reported() {
    let dir = TempDir::new().unwrap();
    let sig = fixture("pinwheel.json");
    let sig = sig.to_str().unwrap();
    let diag = fixture("pinwheel.diag.json");
    let t = ddcat(&["tile", "-s", sig, diag.to_str().unwrap()]);
    assert_eq!(t.status.code(), Some(1), "{}", stderr(&t));
    let out = stdout(&t);
    assert!(out.ends_with("PINWHEEL\n"));
    let (doc, _) = out.trim_end().rsplit_once('\n').unwrap();
    let m = write(&dir, "m.tiling.json", doc);
    let x = ddcat(&["extract", "-s", sig, &m]);
    assert_eq!(x.status.code(), Some(1));
    assert_eq!(stdout(&x), "NOT-BINARY-COMPOSABLE\n");
}

#[test]
fn tile_rejects_inadmissible_diagrams() {
    let dir = TempDir::new().unwrap();
    let d = write(
        &dir,
        "d.json",
        r#"{"domain":{"at":"A","wires":[{"kind":"h","gen":"h"},{"kind":"vop","gen":"v"},{"kind":"h","gen":"h"}]},"levels":[]}"#,
    );
    let o = ddcat(&["tile", "-s", &s0(), &d]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not admissible"));
}

#[test]
fn render_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let e = write(&dir, "e.expr", "((alpha | beta) / (beta | alpha))");
    let diag = fixture("pinwheel.diag.json");
    let tiling = fixture("subdivision_a.tiling.json");
    let cases = [
        (s0(), e),
        (
            fixture("pinwheel.json").to_str().unwrap().to_string(),
            diag.to_str().unwrap().to_string(),
        ),
        (
            fixture("subdivision.json").to_str().unwrap().to_string(),
            tiling.to_str().unwrap().to_string(),
        ),
    ];
    for (i, (sig, input)) in cases.iter().enumerate() {
        let a = dir.path().join(format!("{i}a.svg"));
        let b = dir.path().join(format!("{i}b.svg"));
        for out in [&a, &b] {
            let o = ddcat(&["render", "-s", sig, input, "-o", out.to_str().unwrap()]);
            assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
            assert!(o.stdout.is_empty());
        }
        let (a, b) = (fs::read(a).unwrap(), fs::read(b).unwrap());
        assert!(a.starts_with(b"<svg"));
        assert_eq!(a, b);
    }
}

#[test]
fn output_has_no_color_codes_when_disabled() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.expr", "alpha");
    let b = write(&dir, "b.expr", "beta");
    let o = ddcat(&["check", "-s", &s0(), &a, &b]);
    assert!(!o.stdout.contains(&0x1b));
}

#[test]
fn bench_prints_csv() {
    let o = ddcat(&["bench", "--family", "chain", "--sizes", "2,5,9", "--edges"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("n,swap_count,wall_ms,vertices,edges"));
    for (line, n) in lines.zip([2usize, 5, 9]) {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 5);
        assert_eq!(cols[0].parse::<usize>().unwrap(), n);
        assert_eq!(cols[1].parse::<usize>().unwrap(), n * (n - 1) / 2);
        assert!(cols[2].parse::<f64>().unwrap() >= 0.0);
        assert_eq!(cols[3].parse::<usize>().unwrap(), n);
    }
    let o = ddcat(&["bench", "--family", "ladder", "--sizes", "4"]);
    assert_eq!(
        stdout(&o).lines().nth(1).unwrap().split(',').nth(1),
        Some("0")
    );
    for args in [
        &["bench", "--family", "spiral"][..],
        &["bench", "--sizes", "0"][..],
    ] {
        assert_eq!(ddcat(args).status.code(), Some(2));
    }
}
