//! Deterministic SVG output for layered diagrams and partial tilings.
//!
//! Diagrams sit on a half-unit grid: wires of each level word are centred,
//! the node of level `k` is drawn at height `2k + 2`. Horizontal wires are
//! black and reversed vertical wires red.

use std::fmt::Write;

use crate::diagram::{level_words, LayeredDiagram, Sig2, Wire};
use crate::error::Result;
use crate::tiling::{CellLabel, PartialTiling};

const HALF: i64 = 20;
const TILE: i64 = 60;
const PAD: i64 = 20;
const H_COLOR: &str = "#000000";
const V_COLOR: &str = "#cc0000";

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn color(is_h: bool) -> (&'static str, &'static str) {
    if is_h {
        ("wire h", H_COLOR)
    } else {
        ("wire vop", V_COLOR)
    }
}

fn polyline(out: &mut String, is_h: bool, pts: &[(i64, i64)]) {
    let (class, stroke) = color(is_h);
    let pts: Vec<String> = pts.iter().map(|(x, y)| format!("{x},{y}")).collect();
    let _ = writeln!(
        out,
        r#"  <polyline class="{class}" points="{}" fill="none" stroke="{stroke}" stroke-width="2"/>"#,
        pts.join(" ")
    );
}

fn node(out: &mut String, x: i64, y: i64, label: &str) {
    let _ = writeln!(
        out,
        r##"  <circle class="node" cx="{x}" cy="{y}" r="6" fill="#ffffff" stroke="#000000" stroke-width="2"/>"##
    );
    let _ = writeln!(
        out,
        r#"  <text class="label" x="{}" y="{}" font-family="monospace" font-size="12">{}</text>"#,
        x + 9,
        y - 6,
        escape(label)
    );
}

fn open(out: &mut String, w: i64, h: i64) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(
        out,
        r##"  <rect class="frame" x="0" y="0" width="{w}" height="{h}" fill="#ffffff" stroke="#888888"/>"##
    );
}

struct Strand {
    is_h: bool,
    pts: Vec<(i64, i64)>,
}

/// One polyline per wire, one circle per level.
pub fn render_diagram_svg(d: &LayeredDiagram, sig2: &Sig2) -> Result<String> {
    let words = level_words(d, sig2)?;
    let widest = words.iter().map(|w| w.len()).max().unwrap_or(0) as i64;
    let slot = |j: usize, i: usize| (2 * i as i64 + 2 + widest - words[j].len() as i64) * HALF;
    let slice_y = |j: usize| (2 * j as i64 + 1) * HALF;
    let height = (2 * d.levels.len() as i64 + 2) * HALF;
    let width = (widest.max(1) + 1) * 2 * HALF;

    let mut done: Vec<Strand> = Vec::new();
    let mut nodes = Vec::new();
    let mut live: Vec<Strand> = words[0]
        .wires
        .iter()
        .enumerate()
        .map(|(i, w)| Strand {
            is_h: w.is_h(),
            pts: vec![(slot(0, i), 0)],
        })
        .collect();
    for (i, s) in live.iter_mut().enumerate() {
        s.pts.push((slot(0, i), slice_y(0)));
    }
    for (k, level) in d.levels.iter().enumerate() {
        let ty = sig2.ty(&level.cell)?;
        let (a, b) = (ty.input.len(), ty.output.len());
        let o = level.offset;
        let ny = (2 * k as i64 + 2) * HALF;
        let mut xs: Vec<i64> = (o..o + a).map(|i| slot(k, i)).collect();
        xs.extend((o..o + b).map(|i| slot(k + 1, i)));
        let nx = if xs.is_empty() {
            slot(k, o) - HALF
        } else {
            xs.iter().sum::<i64>() / xs.len() as i64
        };
        nodes.push((nx, ny, level.cell.clone()));
        let tail = live.split_off(o + a);
        for mut s in live.drain(o..) {
            s.pts.push((nx, ny));
            done.push(s);
        }
        live.extend(ty.output.wires.iter().map(|w: &Wire| Strand {
            is_h: w.is_h(),
            pts: vec![(nx, ny)],
        }));
        live.extend(tail);
        for (i, s) in live.iter_mut().enumerate() {
            s.pts.push((slot(k + 1, i), slice_y(k + 1)));
        }
    }
    let last = words.len() - 1;
    for (i, mut s) in live.into_iter().enumerate() {
        s.pts.push((slot(last, i), height));
        done.push(s);
    }

    let mut out = String::new();
    open(&mut out, width, height);
    for s in &done {
        polyline(&mut out, s.is_h, &s.pts);
    }
    for (x, y, label) in &nodes {
        node(&mut out, *x, *y, label);
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Cells as rectangles on the compacted grid. Generator cells get a node
/// joined to every boundary wire; identity cells carry their wires across.
pub fn render_tiling_svg(m: &PartialTiling) -> String {
    let c = m.renormalized(TILE);
    let at = |v: i64| v + PAD;
    let (mut w, mut h) = (0, 0);
    for cell in &c.cells {
        w = w.max(cell.rect.x1);
        h = h.max(cell.rect.y1);
    }
    let mut out = String::new();
    open(&mut out, w + 2 * PAD, h + 2 * PAD);
    let mut cells: Vec<_> = c.cells.iter().collect();
    cells.sort_by_key(|cell| cell.rect);
    for cell in &cells {
        let r = cell.rect;
        let _ = writeln!(
            out,
            r##"  <rect class="cell" x="{}" y="{}" width="{}" height="{}" fill="none" stroke="#444444"/>"##,
            at(r.x0),
            at(r.y0),
            r.x1 - r.x0,
            r.y1 - r.y0
        );
    }
    for cell in &cells {
        let r = cell.rect;
        let p = &cell.wires;
        match &cell.label {
            CellLabel::Gen { cell: name } => {
                let (cx, cy) = (at((r.x0 + r.x1) / 2), at((r.y0 + r.y1) / 2));
                for &x in &p.top {
                    polyline(&mut out, true, &[(at(x), at(r.y0)), (cx, cy)]);
                }
                for &x in &p.bottom {
                    polyline(&mut out, true, &[(cx, cy), (at(x), at(r.y1))]);
                }
                for &y in &p.left {
                    polyline(&mut out, false, &[(at(r.x0), at(y)), (cx, cy)]);
                }
                for &y in &p.right {
                    polyline(&mut out, false, &[(cx, cy), (at(r.x1), at(y))]);
                }
                node(&mut out, cx, cy, name);
            }
            CellLabel::VIdCell { .. } => {
                for (&a, &b) in p.top.iter().zip(&p.bottom) {
                    polyline(&mut out, true, &[(at(a), at(r.y0)), (at(b), at(r.y1))]);
                }
            }
            CellLabel::HIdCell { .. } => {
                for (&a, &b) in p.left.iter().zip(&p.right) {
                    polyline(&mut out, false, &[(at(r.x0), at(a)), (at(r.x1), at(b))]);
                }
            }
        }
    }
    out.push_str("</svg>\n");
    out
}
