//! Partial tilings: staircase-shaped rectangle subdivisions whose cells are
//! generators or identities, the gluing calculus, reconstruction from
//! admissible diagrams, guillotine extraction and a bounded equivalence
//! search.

mod equiv;
mod extract;
mod glue;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::diagram::{Wire, WireWord};
use crate::error::{Error, Result};
use crate::expr::{boundary_of, CellExpr};
use crate::signature::{CellBoundary, DoubleSignature, HWord, Kind, VWord, Word};

pub use equiv::{tilings_equivalent, Equivalence};
pub use extract::{extract_expr, is_binary_composable, Extracted};
pub use glue::{empty_tiling, glue, gluing_positions, reconstruct, GluingPosition};

/// Spacing used when coordinates are renormalized before a gluing.
pub(crate) const SCALE: i64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rect {
    pub x0: i64,
    pub y0: i64,
    pub x1: i64,
    pub y1: i64,
}

impl Rect {
    pub fn new(x0: i64, y0: i64, x1: i64, y1: i64) -> Self {
        Rect { x0, y0, x1, y1 }
    }

    pub fn area(&self) -> i128 {
        (self.x1 - self.x0) as i128 * (self.y1 - self.y0) as i128
    }

    pub fn overlaps(&self, o: &Rect) -> bool {
        self.x0 < o.x1 && o.x0 < self.x1 && self.y0 < o.y1 && o.y0 < self.y1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CellLabel {
    Gen {
        cell: String,
    },
    /// Identity for horizontal composition; vertical wires pass left to right.
    HIdCell {
        word: VWord,
    },
    /// Identity for vertical composition; horizontal wires pass top to bottom.
    VIdCell {
        word: HWord,
    },
}

impl CellLabel {
    pub fn gen(name: &str) -> Self {
        CellLabel::Gen {
            cell: name.to_string(),
        }
    }

    pub fn is_gen(&self) -> bool {
        matches!(self, CellLabel::Gen { .. })
    }

    pub fn is_empty_identity(&self) -> bool {
        match self {
            CellLabel::Gen { .. } => false,
            CellLabel::HIdCell { word } | CellLabel::VIdCell { word } => word.is_empty(),
        }
    }

    pub fn to_expr(&self) -> CellExpr {
        match self {
            CellLabel::Gen { cell } => CellExpr::Gen(cell.clone()),
            CellLabel::HIdCell { word } => CellExpr::HId(word.clone()),
            CellLabel::VIdCell { word } => CellExpr::VId(word.clone()),
        }
    }

    pub fn boundary(&self, sig: &DoubleSignature) -> Result<CellBoundary> {
        boundary_of(&self.to_expr(), sig)
    }
}

/// Wire coordinates along each side: x positions on top and bottom, y
/// positions on left and right, in reading order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WirePositions {
    pub top: Vec<i64>,
    pub bottom: Vec<i64>,
    pub left: Vec<i64>,
    pub right: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TileCell {
    pub rect: Rect,
    pub label: CellLabel,
    pub sides: CellBoundary,
    pub wires: WirePositions,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Step {
    pub h: HWord,
    pub v: VWord,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TilingType {
    pub h: HWord,
    pub v: VWord,
    pub steps: Vec<Step>,
}

impl TilingType {
    pub fn n(&self) -> usize {
        self.steps.len()
    }

    /// The level word `h_1 ; v_1^op ; ... ; h_n ; v_n^op`.
    pub fn level_word(&self) -> WireWord {
        let at = self
            .steps
            .first()
            .map(|s| s.h.at.clone())
            .unwrap_or_else(|| self.v.at.clone());
        let mut wires = Vec::new();
        for s in &self.steps {
            wires.extend(s.h.gens.iter().map(|g| Wire::h(g)));
            wires.extend(s.v.gens.iter().rev().map(|g| Wire::vop(g)));
        }
        WireWord { at, wires }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialTiling {
    pub cells: Vec<TileCell>,
}

/// A maximal straight piece of the open boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Seg {
    /// y for horizontal pieces, x for vertical ones.
    pub fixed: i64,
    pub lo: i64,
    pub hi: i64,
    pub word: Word,
    pub pos: Vec<i64>,
}

/// The staircase: `hs[m]` is H_{m+1}, `vs[m]` is V_{m+1}.
#[derive(Clone, Debug)]
pub(crate) struct Path {
    pub hs: Vec<Seg>,
    pub vs: Vec<Seg>,
    pub top: Seg,
    pub left: Seg,
}

impl Path {
    pub fn n(&self) -> usize {
        self.hs.len()
    }

    pub fn ty(&self) -> TilingType {
        TilingType {
            h: self.top.word.clone(),
            v: self.left.word.clone(),
            steps: self
                .hs
                .iter()
                .zip(&self.vs)
                .map(|(h, v)| Step {
                    h: h.word.clone(),
                    v: v.word.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Top,
    Bottom,
    Left,
    Right,
}

fn side_data(c: &TileCell, side: Side) -> (i64, i64, i64, &Word, &Vec<i64>) {
    let r = c.rect;
    match side {
        Side::Top => (r.y0, r.x0, r.x1, &c.sides.domh, &c.wires.top),
        Side::Bottom => (r.y1, r.x0, r.x1, &c.sides.codh, &c.wires.bottom),
        Side::Left => (r.x0, r.y0, r.y1, &c.sides.domv, &c.wires.left),
        Side::Right => (r.x1, r.y0, r.y1, &c.sides.codv, &c.wires.right),
    }
}

fn opposite(side: Side) -> Side {
    match side {
        Side::Top => Side::Bottom,
        Side::Bottom => Side::Top,
        Side::Left => Side::Right,
        Side::Right => Side::Left,
    }
}

fn kind_of(side: Side) -> Kind {
    match side {
        Side::Top | Side::Bottom => Kind::H,
        Side::Left | Side::Right => Kind::V,
    }
}

/// Subtracts closed intervals from `[lo, hi]`, keeping pieces of positive length.
fn subtract(lo: i64, hi: i64, mut cover: Vec<(i64, i64)>) -> Vec<(i64, i64)> {
    cover.sort();
    let mut out = Vec::new();
    let mut cur = lo;
    for (a, b) in cover {
        if b <= cur || a >= hi {
            continue;
        }
        if a > cur {
            out.push((cur, a));
        }
        cur = cur.max(b);
    }
    if cur < hi {
        out.push((cur, hi));
    }
    out
}

impl PartialTiling {
    pub fn gen_count(&self) -> usize {
        self.cells.iter().filter(|c| c.label.is_gen()).count()
    }

    /// Pieces of `side` not covered by the opposite side of another cell.
    fn exposed(&self, sig: &DoubleSignature, side: Side) -> Result<Vec<Seg>> {
        let mut segs = Vec::new();
        for (ci, c) in self.cells.iter().enumerate() {
            let (fixed, lo, hi, word, pos) = side_data(c, side);
            let cover: Vec<(i64, i64)> = self
                .cells
                .iter()
                .enumerate()
                .filter(|(di, _)| *di != ci)
                .filter_map(|(_, d)| {
                    let (f, a, b, _, _) = side_data(d, opposite(side));
                    (f == fixed && a < hi && b > lo).then_some((a, b))
                })
                .collect();
            for (a, b) in subtract(lo, hi, cover) {
                let first = pos.iter().position(|&p| p > a).unwrap_or(pos.len());
                let last = pos.iter().position(|&p| p >= b).unwrap_or(pos.len());
                let w = sig.factor_at(kind_of(side), word, first, last - first)?;
                segs.push(Seg {
                    fixed,
                    lo: a,
                    hi: b,
                    word: w,
                    pos: pos[first..last].to_vec(),
                });
            }
        }
        segs.sort_by_key(|s| (s.fixed, s.lo));
        let mut merged: Vec<Seg> = Vec::new();
        for s in segs {
            if let Some(prev) = merged.last_mut() {
                if prev.fixed == s.fixed && prev.hi == s.lo {
                    prev.hi = s.hi;
                    prev.word = prev.word.concat(&s.word);
                    prev.pos.extend(s.pos);
                    continue;
                }
            }
            merged.push(s);
        }
        Ok(merged)
    }

    pub(crate) fn path(&self, sig: &DoubleSignature) -> Result<Path> {
        if self.cells.is_empty() {
            return Err(Error::InvalidTiling("no cells".into()));
        }
        let bottoms = self.exposed(sig, Side::Bottom)?;
        let rights = self.exposed(sig, Side::Right)?;
        let tops = self.exposed(sig, Side::Top)?;
        let lefts = self.exposed(sig, Side::Left)?;
        if tops.len() != 1 || lefts.len() != 1 {
            return Err(Error::InvalidTiling(
                "top and left boundaries must be single straight edges".into(),
            ));
        }
        let (top, left) = (tops[0].clone(), lefts[0].clone());
        if top.lo != left.fixed || top.fixed != left.lo {
            return Err(Error::InvalidTiling(
                "top and left edges do not meet".into(),
            ));
        }
        let mut hs = Vec::new();
        let mut vs = Vec::new();
        let mut x = left.fixed;
        let mut y = left.hi;
        loop {
            let Some(h) = bottoms.iter().find(|s| s.fixed == y && s.lo == x) else {
                break;
            };
            x = h.hi;
            hs.push(h.clone());
            let v = rights
                .iter()
                .find(|s| s.fixed == x && s.hi == y)
                .ok_or_else(|| Error::InvalidTiling(format!("staircase breaks at ({x}, {y})")))?;
            y = v.lo;
            vs.push(v.clone());
        }
        if hs.is_empty()
            || hs.len() != bottoms.len()
            || vs.len() != rights.len()
            || y != top.fixed
            || x != top.hi
        {
            return Err(Error::InvalidTiling("boundary is not a staircase".into()));
        }
        Ok(Path { hs, vs, top, left })
    }

    pub fn tiling_type(&self, sig: &DoubleSignature) -> Result<TilingType> {
        Ok(self.path(sig)?.ty())
    }

    pub fn level_word(&self, sig: &DoubleSignature) -> Result<WireWord> {
        Ok(self.tiling_type(sig)?.level_word())
    }

    /// Checks cell labels, wire counts, disjointness, coverage of the
    /// staircase, agreement on shared edges and the inner-step condition.
    pub fn validate(&self, sig: &DoubleSignature) -> Result<()> {
        for c in &self.cells {
            let r = c.rect;
            if r.x0 >= r.x1 || r.y0 >= r.y1 {
                return Err(Error::InvalidTiling(format!("degenerate rectangle {r:?}")));
            }
            if c.label.boundary(sig)? != c.sides {
                return Err(Error::InvalidTiling(format!(
                    "sides of {:?} disagree with its label",
                    c.label
                )));
            }
            for side in [Side::Top, Side::Bottom, Side::Left, Side::Right] {
                let (_, lo, hi, word, pos) = side_data(c, side);
                if pos.len() != word.len()
                    || pos.windows(2).any(|w| w[0] >= w[1])
                    || pos.iter().any(|&p| p <= lo || p >= hi)
                {
                    return Err(Error::InvalidTiling(format!(
                        "bad wire positions on {:?}",
                        c.label
                    )));
                }
            }
        }
        for (i, a) in self.cells.iter().enumerate() {
            for b in &self.cells[i + 1..] {
                if a.rect.overlaps(&b.rect) {
                    return Err(Error::InvalidTiling(format!(
                        "cells {:?} and {:?} overlap",
                        a.rect, b.rect
                    )));
                }
            }
        }
        for a in &self.cells {
            for b in &self.cells {
                for side in [Side::Bottom, Side::Right] {
                    let (fa, la, ha, wa, pa) = side_data(a, side);
                    let (fb, lb, hb, wb, pb) = side_data(b, opposite(side));
                    if fa != fb || la.max(lb) >= ha.min(hb) {
                        continue;
                    }
                    let (lo, hi) = (la.max(lb), ha.min(hb));
                    let pick = |w: &Word, p: &[i64]| -> Vec<(i64, String)> {
                        p.iter()
                            .zip(&w.gens)
                            .filter(|(x, _)| **x > lo && **x < hi)
                            .map(|(x, g)| (*x, g.clone()))
                            .collect()
                    };
                    if pick(wa, pa) != pick(wb, pb) {
                        return Err(Error::InvalidTiling(format!(
                            "wires disagree between {:?} and {:?}",
                            a.rect, b.rect
                        )));
                    }
                }
            }
        }
        let path = self.path(sig)?;
        let x0 = path.left.fixed;
        let mut area: i128 = 0;
        for (h, v) in path.hs.iter().zip(&path.vs) {
            area += (h.hi - x0) as i128 * (v.hi - v.lo) as i128;
        }
        let covered: i128 = self.cells.iter().map(|c| c.rect.area()).sum();
        if area != covered {
            return Err(Error::InvalidTiling(
                "cells do not cover the staircase".into(),
            ));
        }
        let n = path.n();
        for (m, h) in path.hs.iter().enumerate() {
            if m > 0 && h.word.is_empty() {
                return Err(Error::InvalidTiling(format!(
                    "inner step h_{} is an identity",
                    m + 1
                )));
            }
        }
        for (m, v) in path.vs.iter().enumerate() {
            if m + 1 < n && v.word.is_empty() {
                return Err(Error::InvalidTiling(format!(
                    "inner step v_{} is an identity",
                    m + 1
                )));
            }
        }
        Ok(())
    }

    fn axis_values(&self) -> (BTreeSet<i64>, BTreeSet<i64>) {
        let mut xs = BTreeSet::new();
        let mut ys = BTreeSet::new();
        for c in &self.cells {
            xs.extend([c.rect.x0, c.rect.x1]);
            ys.extend([c.rect.y0, c.rect.y1]);
            xs.extend(c.wires.top.iter().chain(&c.wires.bottom));
            ys.extend(c.wires.left.iter().chain(&c.wires.right));
        }
        (xs, ys)
    }

    fn remap(&self, fx: impl Fn(i64) -> i64, fy: impl Fn(i64) -> i64) -> PartialTiling {
        PartialTiling {
            cells: self
                .cells
                .iter()
                .map(|c| TileCell {
                    rect: Rect::new(fx(c.rect.x0), fy(c.rect.y0), fx(c.rect.x1), fy(c.rect.y1)),
                    label: c.label.clone(),
                    sides: c.sides.clone(),
                    wires: WirePositions {
                        top: c.wires.top.iter().map(|&x| fx(x)).collect(),
                        bottom: c.wires.bottom.iter().map(|&x| fx(x)).collect(),
                        left: c.wires.left.iter().map(|&y| fy(y)).collect(),
                        right: c.wires.right.iter().map(|&y| fy(y)).collect(),
                    },
                })
                .collect(),
        }
    }

    /// Maps every coordinate value to its rank times `scale`, keeping the
    /// relative order of grid lines and wires.
    pub fn renormalized(&self, scale: i64) -> PartialTiling {
        let (xs, ys) = self.axis_values();
        let rx: BTreeMap<i64, i64> = xs
            .iter()
            .enumerate()
            .map(|(i, &x)| (x, i as i64 * scale))
            .collect();
        let ry: BTreeMap<i64, i64> = ys
            .iter()
            .enumerate()
            .map(|(i, &y)| (y, i as i64 * scale))
            .collect();
        self.remap(|x| rx[&x], |y| ry[&y])
    }

    /// Cell rectangles with coordinates replaced by the rank of the grid
    /// line among grid lines only (wire positions ignored).
    pub fn grid_rects(&self) -> Vec<(Rect, CellLabel)> {
        let xs: BTreeSet<i64> = self
            .cells
            .iter()
            .flat_map(|c| [c.rect.x0, c.rect.x1])
            .collect();
        let ys: BTreeSet<i64> = self
            .cells
            .iter()
            .flat_map(|c| [c.rect.y0, c.rect.y1])
            .collect();
        let rank = |s: &BTreeSet<i64>, v: i64| s.range(..v).count() as i64;
        let mut out: Vec<(Rect, CellLabel)> = self
            .cells
            .iter()
            .map(|c| {
                (
                    Rect::new(
                        rank(&xs, c.rect.x0),
                        rank(&ys, c.rect.y0),
                        rank(&xs, c.rect.x1),
                        rank(&ys, c.rect.y1),
                    ),
                    c.label.clone(),
                )
            })
            .collect();
        out.sort();
        out
    }

    /// Bounding box of all cells.
    pub fn bounds(&self) -> Option<Rect> {
        let mut it = self.cells.iter().map(|c| c.rect);
        let first = it.next()?;
        Some(it.fold(first, |a, r| {
            Rect::new(
                a.x0.min(r.x0),
                a.y0.min(r.y0),
                a.x1.max(r.x1),
                a.y1.max(r.y1),
            )
        }))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CellDoc {
    rect: [i64; 4],
    label: CellLabel,
    sides: CellBoundary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    wires: Option<WirePositions>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TilingDoc {
    #[serde(rename = "type")]
    ty: TilingType,
    cells: Vec<CellDoc>,
}

fn spread(lo: i64, hi: i64, count: usize) -> Vec<i64> {
    let c = count as i64;
    (1..=c).map(|t| lo + (hi - lo) * t / (c + 1)).collect()
}

/// Serializes with coordinates compacted to consecutive integers.
pub fn emit_tiling(m: &PartialTiling, sig: &DoubleSignature) -> Result<String> {
    let ty = m.tiling_type(sig)?;
    let c = m.renormalized(1);
    let doc = TilingDoc {
        ty,
        cells: c
            .cells
            .iter()
            .map(|cell| CellDoc {
                rect: [cell.rect.x0, cell.rect.y0, cell.rect.x1, cell.rect.y1],
                label: cell.label.clone(),
                sides: cell.sides.clone(),
                wires: Some(cell.wires.clone()),
            })
            .collect(),
    };
    Ok(serde_json::to_string_pretty(&doc).expect("tiling documents always serialize"))
}

/// Parses and validates a tiling document. Missing wire positions are
/// spread evenly along each side, after scaling the grid.
pub fn load_tiling(text: &str, sig: &DoubleSignature) -> Result<PartialTiling> {
    let doc: TilingDoc = serde_json::from_str(text).map_err(|e| Error::Parse {
        pos: e.column(),
        msg: format!("line {}: {e}", e.line()),
    })?;
    let mut cells = Vec::new();
    for c in doc.cells {
        let [x0, y0, x1, y1] = c.rect;
        let rect = Rect::new(x0, y0, x1, y1);
        let wires = match c.wires {
            Some(w) => w,
            None => {
                let s = SCALE;
                let r = Rect::new(x0 * s, y0 * s, x1 * s, y1 * s);
                let w = WirePositions {
                    top: spread(r.x0, r.x1, c.sides.domh.len()),
                    bottom: spread(r.x0, r.x1, c.sides.codh.len()),
                    left: spread(r.y0, r.y1, c.sides.domv.len()),
                    right: spread(r.y0, r.y1, c.sides.codv.len()),
                };
                cells.push(TileCell {
                    rect: r,
                    label: c.label,
                    sides: c.sides,
                    wires: w,
                });
                continue;
            }
        };
        cells.push(TileCell {
            rect,
            label: c.label,
            sides: c.sides,
            wires,
        });
    }
    let m = PartialTiling { cells };
    m.validate(sig)?;
    if m.tiling_type(sig)? != doc.ty {
        return Err(Error::InvalidTiling(
            "declared type differs from the cells' boundary".into(),
        ));
    }
    Ok(m)
}

pub(crate) fn spread_between(lo: i64, hi: i64, count: usize) -> Vec<i64> {
    spread(lo, hi, count)
}
