//! One line per acceptance criterion. Exits non-zero if any fails.

use std::collections::BTreeMap;
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::Instant;

use ddcat_core::axioms::{axiom_instance, Axiom};
use ddcat_core::{
    bfs_class, decide_eq_exprs, extract_expr, fixtures, is_binary_composable, normalize,
    random_diagram, random_expr, reconstruct, translate_expr, validate_diagram, CellLabel,
    DoubleSignature, Extracted, LayeredDiagram, Rect, Sig2,
};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn path(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

fn ddcat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ddcat"))
        .args(args)
        .env("DDCAT_COLOR", "0")
        .output()
        .expect("binary runs")
}

type Verdict = (bool, String);

fn round_trip_corpus() -> Vec<(&'static str, DoubleSignature)> {
    vec![
        ("s0", fixtures::s0()),
        ("pinwheel", fixtures::pinwheel_signature()),
        ("mixed", fixtures::mixed()),
        ("s0x", fixtures::s0x()),
    ]
}

fn round_trip() -> Verdict {
    let start = Instant::now();
    let (mut total, mut ok) = (0, 0);
    let mut first_bad = None;
    for (name, sig) in round_trip_corpus() {
        for seed in 0..300u64 {
            let e = random_expr(&sig, 1 + (seed % 10) as usize, seed).unwrap();
            total += 1;
            let good = (|| {
                let m = reconstruct(&translate_expr(&e, &sig).ok()?, &sig).ok()?;
                match extract_expr(&m, &sig).ok()? {
                    Extracted::Composable(back) => decide_eq_exprs(&back, &e, &sig).ok(),
                    Extracted::NotBinaryComposable { .. } => Some(false),
                }
            })()
            .unwrap_or(false);
            if good {
                ok += 1;
            } else if first_bad.is_none() {
                first_bad = Some(format!("{name}: {e}"));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let mut detail = format!("{ok}/{total} expressions on 4 signatures, {secs:.1} s");
    if let Some(b) = first_bad {
        detail += &format!(", first failure {b}");
    }
    (ok == total && total >= 1000 && secs < 60.0, detail)
}

fn axiom_soundness() -> Verdict {
    let sigs = [
        fixtures::s0(),
        fixtures::mixed(),
        fixtures::three_objects(),
        fixtures::pinwheel_signature(),
    ];
    let mut per: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    for sig in &sigs {
        for ax in Axiom::ALL {
            for seed in 0..25u64 {
                let inst = axiom_instance(sig, ax, 5, seed).unwrap();
                let e = per.entry(format!("{ax:?}")).or_default();
                e.0 += 1;
                if decide_eq_exprs(&inst.lhs, &inst.rhs, sig).unwrap_or(false) {
                    e.1 += 1;
                }
            }
        }
    }
    let total: usize = per.values().map(|v| v.0).sum();
    let ok: usize = per.values().map(|v| v.1).sum();
    let parts: Vec<String> = per
        .iter()
        .map(|(k, (t, o))| format!("{k} {o}/{t}"))
        .collect();
    (
        ok == total && total >= 500,
        format!("{ok}/{total} instances ({})", parts.join(", ")),
    )
}

fn oracle_completeness() -> Verdict {
    let sigs = [
        fixtures::s0(),
        fixtures::s0x(),
        fixtures::three_objects(),
        fixtures::mixed(),
        fixtures::pinwheel_signature(),
        fixtures::inductive_signature(),
        fixtures::chain_signature(),
        fixtures::column_signature(),
        fixtures::gluing_signature(),
        fixtures::subdivision_signature(),
    ];
    let start = Instant::now();
    let (mut diagrams, mut ok, mut pairs, mut members) = (0, 0, 0, 0usize);
    let mut first_bad = None;
    for (si, sig) in sigs.iter().enumerate() {
        let s2 = Sig2::from_signature(sig);
        let mut groups: BTreeMap<String, Vec<(LayeredDiagram, LayeredDiagram)>> = BTreeMap::new();
        for seed in 0..100u64 {
            let d = random_diagram(&s2, 7, 8, seed).unwrap();
            diagrams += 1;
            let class = bfs_class(&d, 1_000_000, &s2).unwrap();
            members += class.len();
            let nf = normalize(&d, &s2).unwrap().diagram;
            let good = class.contains(&nf)
                && class
                    .iter()
                    .all(|x| normalize(x, &s2).unwrap().diagram == nf);
            if good {
                ok += 1;
            } else if first_bad.is_none() {
                first_bad = Some(format!("signature {si} seed {seed}"));
            }
            let cod = validate_diagram(&d, &s2).unwrap();
            let key = format!("{:?}|{:?}|{:?}", d.domain, cod, d.cell_multiset());
            let id = class.first().unwrap().clone();
            groups.entry(key).or_default().push((id, nf));
        }
        for g in groups.values() {
            for i in 0..g.len() {
                for j in i + 1..g.len() {
                    pairs += 1;
                    let same_class = g[i].0 == g[j].0;
                    let same_nf = g[i].1 == g[j].1;
                    if same_class != same_nf {
                        ok = 0;
                        first_bad.get_or_insert_with(|| {
                            format!("signature {si}: class/normal form disagree")
                        });
                    }
                }
            }
        }
    }
    let mut detail = format!(
        "{ok}/{diagrams} diagrams, {members} class members, {pairs} same-boundary pairs, {:.1} s",
        start.elapsed().as_secs_f64()
    );
    if let Some(b) = first_bad {
        detail += &format!(", first failure {b}");
    }
    (ok == diagrams && diagrams >= 1000, detail)
}

fn pinwheel() -> Verdict {
    let sig = fixtures::pinwheel_signature();
    let m = reconstruct(&fixtures::pinwheel_diagram(), &sig).unwrap();
    let gens: Vec<(Rect, CellLabel)> = m
        .grid_rects()
        .into_iter()
        .filter(|(_, l)| l.is_gen())
        .collect();
    let figure = vec![
        (Rect::new(1, 1, 3, 2), CellLabel::gen("alpha")),
        (Rect::new(1, 2, 2, 4), CellLabel::gen("beta")),
        (Rect::new(2, 2, 3, 3), CellLabel::gen("gamma")),
        (Rect::new(2, 3, 4, 4), CellLabel::gen("epsilon")),
        (Rect::new(3, 1, 4, 3), CellLabel::gen("delta")),
    ];
    let matches = gens == figure;
    let pinwheel = matches!(
        extract_expr(&m, &sig).unwrap(),
        Extracted::NotBinaryComposable { .. }
    );
    let (mut small, mut small_ok) = (0, 0);
    for (_, sig) in round_trip_corpus() {
        for seed in 0..300u64 {
            let e = random_expr(&sig, 1 + (seed % 10) as usize, seed).unwrap();
            let m = reconstruct(&translate_expr(&e, &sig).unwrap(), &sig).unwrap();
            if m.cells.len() <= 4 {
                small += 1;
                if is_binary_composable(&m, &sig).unwrap() {
                    small_ok += 1;
                }
            }
        }
    }
    (
        matches && pinwheel && small > 0 && small == small_ok,
        format!(
            "{} generator cells, layout {}, {}, {small_ok}/{small} small reconstructions composable",
            gens.len(),
            if matches { "matches the figure" } else { "differs from the figure" },
            if pinwheel { "not binary composable" } else { "composable" },
        ),
    )
}

fn chain_pairs() -> Verdict {
    let sig = fixture("chain.json");
    let files: Vec<PathBuf> = (1..=5)
        .map(|i| fixture(&format!("chain_e{i}.expr")))
        .collect();
    let (mut pairs, mut equal) = (0, 0);
    for i in 0..files.len() {
        for j in i + 1..files.len() {
            pairs += 1;
            let o = ddcat(&["check", "-s", path(&sig), path(&files[i]), path(&files[j])]);
            if o.status.code() == Some(0) && o.stdout.starts_with(b"EQUAL\n") {
                equal += 1;
            }
        }
    }
    (equal == pairs, format!("{equal}/{pairs} pairs EQUAL"))
}

fn bench_rows(sizes: &str) -> Vec<(usize, usize, f64)> {
    let o = ddcat(&["bench", "--family", "chain", "--sizes", sizes]);
    assert_eq!(o.status.code(), Some(0));
    String::from_utf8(o.stdout)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| {
            let c: Vec<&str> = l.split(',').collect();
            (
                c[0].parse().unwrap(),
                c[1].parse().unwrap(),
                c[2].parse().unwrap(),
            )
        })
        .collect()
}

fn slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (sx, sy) = points
        .iter()
        .fold((0.0, 0.0), |(a, b), (x, y)| (a + x.ln(), b + y.ln()));
    let (mx, my) = (sx / n, sy / n);
    let num: f64 = points
        .iter()
        .map(|(x, y)| (x.ln() - mx) * (y.ln() - my))
        .sum();
    let den: f64 = points.iter().map(|(x, _)| (x.ln() - mx).powi(2)).sum();
    num / den
}

fn complexity() -> Verdict {
    let sizes = [8usize, 16, 32, 64, 128];
    let mut best: BTreeMap<usize, f64> = BTreeMap::new();
    let mut swaps_ok = true;
    for _ in 0..3 {
        for (n, swaps, ms) in bench_rows("8,16,32,64,128") {
            swaps_ok &= swaps == n * (n - 1) / 2;
            let e = best.entry(n).or_insert(f64::INFINITY);
            *e = e.min(ms);
        }
    }
    swaps_ok &= best.keys().copied().eq(sizes);
    let pts: Vec<(f64, f64)> = best.iter().map(|(n, t)| (*n as f64, *t)).collect();
    let k = slope(&pts);
    let t128 = best[&128];
    let large: Vec<(f64, f64)> = bench_rows("128,256,512")
        .iter()
        .map(|(n, _, t)| (*n as f64, *t))
        .collect();
    let times: Vec<String> = best.iter().map(|(n, t)| format!("{n}:{t:.3}")).collect();
    (
        swaps_ok && (1.6..=2.3).contains(&k) && t128 < 1000.0,
        format!(
            "swaps {}, fitted exponent {k:.2} over 8..128 (ms {}), n=128 {t128:.2} ms; exponent over 128..512 {:.2}",
            if swaps_ok { "n(n-1)/2 exactly" } else { "WRONG" },
            times.join(" "),
            slope(&large),
        ),
    )
}

fn determinism() -> Verdict {
    let dir = std::env::temp_dir().join(format!("ddcat-acceptance-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let chain = fixture("chain.json");
    let e1 = fixture("chain_e1.expr");
    let e2 = fixture("chain_e2.expr");
    let pin = fixture("pinwheel.json");
    let pdiag = fixture("pinwheel.diag.json");
    let sub = fixture("subdivision.json");
    let sub_a = fixture("subdivision_a.tiling.json");
    let tile_to = |sig: &Path, input: &Path, name: &str| -> PathBuf {
        let text =
            String::from_utf8(ddcat(&["tile", "-s", path(sig), path(input)]).stdout).unwrap();
        let doc = dir.join(name);
        fs::write(&doc, text.trim_end().rsplit_once('\n').unwrap().0).unwrap();
        doc
    };
    let doc = tile_to(&pin, &pdiag, "pinwheel.tiling.json");
    let chain_doc = tile_to(&chain, &e1, "chain.tiling.json");
    let svg = dir.join("out.svg");
    let runs: Vec<Vec<&str>> = vec![
        vec!["translate", "-s", path(&chain), path(&e1)],
        vec!["normalize", "-s", path(&chain), path(&e2)],
        vec!["check", "-s", path(&chain), path(&e1), path(&e2)],
        vec!["tile", "-s", path(&pin), path(&pdiag)],
        vec!["extract", "-s", path(&pin), path(&doc)],
        vec!["extract", "-s", path(&chain), path(&chain_doc)],
        vec!["render", "-s", path(&chain), path(&e1), "-o", path(&svg)],
        vec!["render", "-s", path(&pin), path(&pdiag), "-o", path(&svg)],
        vec!["render", "-s", path(&sub), path(&sub_a), "-o", path(&svg)],
        vec![
            "bench", "--family", "chain", "--sizes", "4,8", "--seed", "3", "--edges",
        ],
        vec![
            "bench", "--family", "ladder", "--sizes", "4,8", "--seed", "3",
        ],
    ];
    let strip_wall = |s: &str| -> String {
        s.lines()
            .map(|l| {
                let mut c: Vec<&str> = l.split(',').collect();
                c.remove(2);
                c.join(",")
            })
            .collect::<Vec<_>>()
            .join("\n")
    };
    let mut same = 0;
    for args in &runs {
        let outputs: Vec<Vec<u8>> = (0..2)
            .map(|_| {
                let o = ddcat(args);
                let mut bytes = o.stdout;
                if args[0] == "bench" {
                    bytes = strip_wall(&String::from_utf8(bytes).unwrap()).into_bytes();
                }
                if args[0] == "render" {
                    bytes = fs::read(&svg).unwrap();
                }
                bytes.extend(o.status.code().unwrap_or(-1).to_string().bytes());
                bytes
            })
            .collect();
        if outputs[0] == outputs[1] && outputs[0].len() > 1 {
            same += 1;
        }
    }
    fs::remove_dir_all(&dir).ok();
    (
        same == runs.len(),
        format!(
            "{same}/{} commands byte-identical across two runs",
            runs.len()
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 7] = [
        ("round trip", round_trip),
        ("axiom soundness", axiom_soundness),
        ("oracle completeness", oracle_completeness),
        ("pinwheel", pinwheel),
        ("chain of equivalences", chain_pairs),
        ("complexity", complexity),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let (pass, detail) = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            (false, format!("panicked: {msg}"))
        });
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {} {name}: {} ({detail})",
            i + 1,
            if pass { "PASS" } else { "FAIL" }
        );
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
}
