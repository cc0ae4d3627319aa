//! Bounded search for tiling equivalence.
//!
//! A state is a tiling whose coordinates have been compacted: every grid
//! line and wire sits at its longest-path distance from the top-left corner
//! in the order constraints the cells impose. Tilings that differ by a
//! translation of boundaries compact to the same state. Where four cells
//! meet in a crossing, compaction keeps the vertical line straight; the
//! `flip` and `align` moves reach the other readings.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use super::{subtract, CellLabel, PartialTiling, Rect, TileCell, WirePositions};
use crate::error::Result;
use crate::signature::{DoubleSignature, Kind};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Equivalence {
    Equivalent,
    /// Cell multisets or boundary types differ, so no move sequence exists.
    NotEquivalent,
    /// The search budget ran out.
    Unknown,
}

type Key = Vec<(Rect, CellLabel, [Vec<i64>; 4])>;

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }

    fn find(&mut self, mut a: usize) -> usize {
        while self.0[a] != a {
            self.0[a] = self.0[self.0[a]];
            a = self.0[a];
        }
        a
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

#[derive(Default)]
struct Hints {
    /// Pairs of vertical edges (`2c` left, `2c + 1` right) forced onto one line.
    force_x: Vec<(usize, usize)>,
    /// Pairs of horizontal edges (`2c` top, `2c + 1` bottom).
    force_y: Vec<(usize, usize)>,
    /// Vertical edge pairs meeting at a crossing that are left unglued.
    split_x: HashSet<(usize, usize)>,
}

fn transpose(cells: &[TileCell]) -> Vec<TileCell> {
    cells
        .iter()
        .map(|c| TileCell {
            rect: Rect::new(c.rect.y0, c.rect.x0, c.rect.y1, c.rect.x1),
            label: c.label.clone(),
            sides: c.sides.clone(),
            wires: WirePositions {
                top: c.wires.left.clone(),
                bottom: c.wires.right.clone(),
                left: c.wires.top.clone(),
                right: c.wires.bottom.clone(),
            },
        })
        .collect()
}

fn vedge(cells: &[TileCell], e: usize) -> (i64, i64, i64) {
    let r = cells[e / 2].rect;
    (if e % 2 == 0 { r.x0 } else { r.x1 }, r.y0, r.y1)
}

/// A horizontal edge passes through `(x, y)` on both sides of `x`.
fn crossing(cells: &[TileCell], x: i64, y: i64) -> bool {
    let on = |c: &&TileCell| c.rect.y0 == y || c.rect.y1 == y;
    cells
        .iter()
        .filter(on)
        .any(|c| c.rect.x0 < x && c.rect.x1 >= x)
        && cells
            .iter()
            .filter(on)
            .any(|c| c.rect.x0 <= x && c.rect.x1 > x)
}

/// Recomputes x coordinates by longest path, keeping y fixed.
fn compact_x(
    cells: &[TileCell],
    force: &[(usize, usize)],
    glue_crossings: bool,
    split: &HashSet<(usize, usize)>,
) -> Option<Vec<TileCell>> {
    let ne = 2 * cells.len();
    let mut dsu = Dsu::new(ne);
    for e in 0..ne {
        for f in e + 1..ne {
            let (xe, ae, be) = vedge(cells, e);
            let (xf, af, bf) = vedge(cells, f);
            if xe != xf {
                continue;
            }
            if ae.max(af) < be.min(bf) {
                dsu.union(e, f);
            } else if be == af || bf == ae {
                let y = if be == af { be } else { bf };
                let glue = !crossing(cells, xe, y) || glue_crossings != split.contains(&(e, f));
                if glue {
                    dsu.union(e, f);
                }
            }
        }
    }
    for &(e, f) in force {
        dsu.union(e, f);
    }

    let mut index: HashMap<(bool, i64, i64), usize> = HashMap::new();
    let mut succ: Vec<Vec<usize>> = Vec::new();
    let mut node = |key: (bool, i64, i64), succ: &mut Vec<Vec<usize>>| -> usize {
        *index.entry(key).or_insert_with(|| {
            succ.push(Vec::new());
            succ.len() - 1
        })
    };
    let mut edge_node = vec![0; ne];
    for (e, slot) in edge_node.iter_mut().enumerate() {
        *slot = node((false, dsu.find(e) as i64, 0), &mut succ);
    }
    let chain = |from: &[usize], mid: &[usize], to: &[usize], succ: &mut Vec<Vec<usize>>| {
        let mut prev: Vec<usize> = from.to_vec();
        for &m in mid {
            for &p in &prev {
                succ[p].push(m);
            }
            prev = vec![m];
        }
        for &t in to {
            for &p in &prev {
                succ[p].push(t);
            }
        }
    };
    for (ci, c) in cells.iter().enumerate() {
        let (l, r) = (edge_node[2 * ci], edge_node[2 * ci + 1]);
        let top: Vec<usize> = c
            .wires
            .top
            .iter()
            .map(|&p| node((true, p, c.rect.y0), &mut succ))
            .collect();
        let bot: Vec<usize> = c
            .wires
            .bottom
            .iter()
            .map(|&p| node((true, p, c.rect.y1), &mut succ))
            .collect();
        chain(&[l], &top, &[r], &mut succ);
        chain(&[l], &bot, &[r], &mut succ);
    }
    // Exposed bottom pieces carry wires that no cell below orders.
    for (ci, c) in cells.iter().enumerate() {
        let y = c.rect.y1;
        let cover: Vec<(i64, i64)> = cells
            .iter()
            .enumerate()
            .filter(|&(di, d)| di != ci && d.rect.y0 == y)
            .map(|(_, d)| (d.rect.x0, d.rect.x1))
            .collect();
        for (lo, hi) in subtract(c.rect.x0, c.rect.x1, cover) {
            let touching = |x: i64| -> Vec<usize> {
                (0..ne)
                    .filter(|&e| {
                        let (xe, a, b) = vedge(cells, e);
                        xe == x && a <= y && y <= b
                    })
                    .map(|e| edge_node[e])
                    .collect()
            };
            let mid: Vec<usize> = c
                .wires
                .bottom
                .iter()
                .filter(|&&p| p > lo && p < hi)
                .map(|&p| node((true, p, y), &mut succ))
                .collect();
            chain(&touching(lo), &mid, &touching(hi), &mut succ);
        }
    }

    let n = succ.len();
    let mut indeg = vec![0usize; n];
    for s in &succ {
        for &t in s {
            indeg[t] += 1;
        }
    }
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut dist = vec![0i64; n];
    let mut done = 0;
    while let Some(v) = queue.pop_front() {
        done += 1;
        for &t in &succ[v] {
            dist[t] = dist[t].max(dist[v] + 1);
            indeg[t] -= 1;
            if indeg[t] == 0 {
                queue.push_back(t);
            }
        }
    }
    if done != n {
        return None;
    }
    let wire = |p: i64, y: i64| dist[index[&(true, p, y)]];
    Some(
        cells
            .iter()
            .enumerate()
            .map(|(ci, c)| TileCell {
                rect: Rect::new(
                    dist[edge_node[2 * ci]],
                    c.rect.y0,
                    dist[edge_node[2 * ci + 1]],
                    c.rect.y1,
                ),
                label: c.label.clone(),
                sides: c.sides.clone(),
                wires: WirePositions {
                    top: c.wires.top.iter().map(|&p| wire(p, c.rect.y0)).collect(),
                    bottom: c.wires.bottom.iter().map(|&p| wire(p, c.rect.y1)).collect(),
                    left: c.wires.left.clone(),
                    right: c.wires.right.clone(),
                },
            })
            .collect(),
    )
}

fn compact(cells: &[TileCell], hints: &Hints, sig: &DoubleSignature) -> Option<Vec<TileCell>> {
    let mut cur = cells.to_vec();
    for _ in 0..8 {
        let x = compact_x(&cur, &hints.force_x, true, &hints.split_x)?;
        let y = transpose(&compact_x(
            &transpose(&x),
            &hints.force_y,
            false,
            &HashSet::new(),
        )?);
        if y == cur {
            break;
        }
        cur = y;
    }
    cur.sort_by_key(|c| c.rect);
    PartialTiling { cells: cur.clone() }.validate(sig).ok()?;
    Some(cur)
}

fn key(cells: &[TileCell]) -> Key {
    cells
        .iter()
        .map(|c| {
            let w = &c.wires;
            (
                c.rect,
                c.label.clone(),
                [
                    w.top.clone(),
                    w.bottom.clone(),
                    w.left.clone(),
                    w.right.clone(),
                ],
            )
        })
        .collect()
}

/// Empty identities are the same cell whichever way they are labelled.
fn normalize_label(label: CellLabel) -> CellLabel {
    match label {
        CellLabel::VIdCell { word } if word.is_empty() => CellLabel::HIdCell { word },
        other => other,
    }
}

fn is_hid(l: &CellLabel) -> bool {
    matches!(l, CellLabel::HIdCell { .. })
}

fn is_vid(l: &CellLabel) -> bool {
    matches!(l, CellLabel::VIdCell { .. }) || l.is_empty_identity()
}

fn concat(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut v = [a, b].concat();
    v.sort_unstable();
    v
}

/// Absorbs identity `i` into its neighbour `j` when they share a full side.
fn merged(i: &TileCell, j: &TileCell) -> Option<TileCell> {
    let (a, b) = (i.rect, j.rect);
    let same_rows = a.y0 == b.y0 && a.y1 == b.y1;
    let same_cols = a.x0 == b.x0 && a.x1 == b.x1;
    let wires = if same_rows && is_hid(&i.label) && (a.x0 == b.x1 || a.x1 == b.x0) {
        let (l, r) = if a.x0 == b.x1 { (j, i) } else { (i, j) };
        WirePositions {
            top: concat(&l.wires.top, &r.wires.top),
            bottom: concat(&l.wires.bottom, &r.wires.bottom),
            left: l.wires.left.clone(),
            right: r.wires.right.clone(),
        }
    } else if same_cols && is_vid(&i.label) && (a.y0 == b.y1 || a.y1 == b.y0) {
        let (t, u) = if a.y0 == b.y1 { (j, i) } else { (i, j) };
        WirePositions {
            top: t.wires.top.clone(),
            bottom: u.wires.bottom.clone(),
            left: concat(&t.wires.left, &u.wires.left),
            right: concat(&t.wires.right, &u.wires.right),
        }
    } else {
        return None;
    };
    Some(TileCell {
        rect: Rect::new(
            a.x0.min(b.x0),
            a.y0.min(b.y0),
            a.x1.max(b.x1),
            a.y1.max(b.y1),
        ),
        label: j.label.clone(),
        sides: j.sides.clone(),
        wires,
    })
}

#[derive(Clone, Copy)]
enum Dir {
    Left,
    Right,
    Up,
    Down,
}

/// Splits an identity off one side of `c`; coordinates must be doubled so
/// the new line fits strictly inside.
fn split_off(c: &TileCell, dir: Dir, sig: &DoubleSignature) -> Result<(TileCell, TileCell)> {
    let r = c.rect;
    let s = &c.sides;
    let (rest, id_rect, label, wires) = match dir {
        Dir::Right => (
            Rect::new(r.x0, r.y0, r.x1 - 1, r.y1),
            Rect::new(r.x1 - 1, r.y0, r.x1, r.y1),
            CellLabel::HIdCell {
                word: s.codv.clone(),
            },
            (vec![], vec![], c.wires.right.clone(), c.wires.right.clone()),
        ),
        Dir::Left => (
            Rect::new(r.x0 + 1, r.y0, r.x1, r.y1),
            Rect::new(r.x0, r.y0, r.x0 + 1, r.y1),
            CellLabel::HIdCell {
                word: s.domv.clone(),
            },
            (vec![], vec![], c.wires.left.clone(), c.wires.left.clone()),
        ),
        Dir::Down => (
            Rect::new(r.x0, r.y0, r.x1, r.y1 - 1),
            Rect::new(r.x0, r.y1 - 1, r.x1, r.y1),
            CellLabel::VIdCell {
                word: s.codh.clone(),
            },
            (
                c.wires.bottom.clone(),
                c.wires.bottom.clone(),
                vec![],
                vec![],
            ),
        ),
        Dir::Up => (
            Rect::new(r.x0, r.y0 + 1, r.x1, r.y1),
            Rect::new(r.x0, r.y0, r.x1, r.y0 + 1),
            CellLabel::VIdCell {
                word: s.domh.clone(),
            },
            (c.wires.top.clone(), c.wires.top.clone(), vec![], vec![]),
        ),
    };
    let label = normalize_label(label);
    let id = TileCell {
        rect: id_rect,
        sides: label.boundary(sig)?,
        label,
        wires: WirePositions {
            top: wires.0,
            bottom: wires.1,
            left: wires.2,
            right: wires.3,
        },
    };
    Ok((
        TileCell {
            rect: rest,
            ..c.clone()
        },
        id,
    ))
}

/// Cuts `c` along the line `at`, vertical when `vertical`. An identity cut
/// across its wires splits the word, one cut along them copies it; a
/// generator sheds an identity on whichever side carries no crossing wire.
fn cut(
    c: &TileCell,
    vertical: bool,
    at: i64,
    sig: &DoubleSignature,
) -> Result<Option<(TileCell, TileCell)>> {
    let r = c.rect;
    let (lo, hi) = if vertical { (r.x0, r.x1) } else { (r.y0, r.y1) };
    if at <= lo || at >= hi {
        return Ok(None);
    }
    let (ra, rb) = if vertical {
        (
            Rect::new(r.x0, r.y0, at, r.y1),
            Rect::new(at, r.y0, r.x1, r.y1),
        )
    } else {
        (
            Rect::new(r.x0, r.y0, r.x1, at),
            Rect::new(r.x0, at, r.x1, r.y1),
        )
    };
    let w = &c.wires;
    let (la, lb, wa, wb) = match (&c.label, vertical) {
        (CellLabel::HIdCell { word }, false) | (CellLabel::VIdCell { word }, true) => {
            let (pos, kind) = if vertical {
                (&w.top, Kind::H)
            } else {
                (&w.left, Kind::V)
            };
            if pos.contains(&at) {
                return Ok(None);
            }
            let k = pos.iter().filter(|&&p| p < at).count();
            let a = sig.factor_at(kind, word, 0, k)?;
            let b = sig.factor_at(kind, word, k, word.len() - k)?;
            let (pa, pb) = (pos[..k].to_vec(), pos[k..].to_vec());
            let side = |p: Vec<i64>| {
                if vertical {
                    WirePositions {
                        top: p.clone(),
                        bottom: p,
                        ..Default::default()
                    }
                } else {
                    WirePositions {
                        left: p.clone(),
                        right: p,
                        ..Default::default()
                    }
                }
            };
            let label = |x| {
                normalize_label(if vertical {
                    CellLabel::VIdCell { word: x }
                } else {
                    CellLabel::HIdCell { word: x }
                })
            };
            (label(a), label(b), side(pa), side(pb))
        }
        (CellLabel::Gen { .. }, _) => return split_at_line(c, vertical, at, sig),
        (label, _) => (label.clone(), label.clone(), w.clone(), w.clone()),
    };
    let make = |rect, label: CellLabel, wires| -> Result<TileCell> {
        Ok(TileCell {
            rect,
            sides: label.boundary(sig)?,
            label,
            wires,
        })
    };
    Ok(Some((make(ra, la, wa)?, make(rb, lb, wb)?)))
}

fn split_at_line(
    c: &TileCell,
    vertical: bool,
    at: i64,
    sig: &DoubleSignature,
) -> Result<Option<(TileCell, TileCell)>> {
    let r = c.rect;
    let w = &c.wires;
    let across: Vec<i64> = if vertical {
        [&w.top[..], &w.bottom[..]].concat()
    } else {
        [&w.left[..], &w.right[..]].concat()
    };
    let dir = if across.iter().all(|&p| p > at) {
        if vertical {
            Dir::Left
        } else {
            Dir::Up
        }
    } else if across.iter().all(|&p| p < at) {
        if vertical {
            Dir::Right
        } else {
            Dir::Down
        }
    } else {
        return Ok(None);
    };
    let (rest, mut id) = split_off(c, dir, sig)?;
    let (rest_rect, id_rect) = match dir {
        Dir::Left => (
            Rect::new(at, r.y0, r.x1, r.y1),
            Rect::new(r.x0, r.y0, at, r.y1),
        ),
        Dir::Right => (
            Rect::new(r.x0, r.y0, at, r.y1),
            Rect::new(at, r.y0, r.x1, r.y1),
        ),
        Dir::Up => (
            Rect::new(r.x0, at, r.x1, r.y1),
            Rect::new(r.x0, r.y0, r.x1, at),
        ),
        Dir::Down => (
            Rect::new(r.x0, r.y0, r.x1, at),
            Rect::new(r.x0, at, r.x1, r.y1),
        ),
    };
    id.rect = id_rect;
    Ok(Some((
        TileCell {
            rect: rest_rect,
            ..rest
        },
        id,
    )))
}

fn doubled(cells: &[TileCell]) -> Vec<TileCell> {
    PartialTiling {
        cells: cells.to_vec(),
    }
    .remap(|x| 2 * x, |y| 2 * y)
    .cells
}

/// Pairs of edges ending on a common line from opposite sides, with
/// nothing else in between on that line.
fn opposite_stems(cells: &[TileCell]) -> Vec<(usize, usize)> {
    let ne = 2 * cells.len();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for e in 0..ne {
        let (xe, _, be) = vedge(cells, e);
        for f in 0..ne {
            let (xf, af, _) = vedge(cells, f);
            if af != be || xe == xf {
                continue;
            }
            let (lo, hi) = (xe.min(xf), xe.max(xf));
            let spanned = cells.iter().any(|c| {
                (c.rect.y0 == be || c.rect.y1 == be) && c.rect.x0 <= lo && c.rect.x1 >= hi
            });
            if spanned && seen.insert((xe, xf, be)) {
                out.push((e.min(f), e.max(f)));
            }
        }
    }
    out
}

/// Corners where four cells meet: (upper left, upper right, lower left, lower right).
fn crossings(cells: &[TileCell]) -> Vec<[usize; 4]> {
    let find = |p: &dyn Fn(&Rect) -> bool| cells.iter().position(|c| p(&c.rect));
    let mut out = Vec::new();
    for (ul, c) in cells.iter().enumerate() {
        let (x, y) = (c.rect.x1, c.rect.y1);
        let ur = find(&|r| r.x0 == x && r.y1 == y);
        let ll = find(&|r| r.x1 == x && r.y0 == y);
        let lr = find(&|r| r.x0 == x && r.y0 == y);
        if let (Some(ur), Some(ll), Some(lr)) = (ur, ll, lr) {
            out.push([ul, ur, ll, lr]);
        }
    }
    out
}

fn neighbours(cells: &[TileCell], cap: usize, sig: &DoubleSignature) -> Result<Vec<Vec<TileCell>>> {
    let mut out = Vec::new();
    let plain = Hints::default();
    for (i, c) in cells.iter().enumerate() {
        if c.label.is_gen() {
            continue;
        }
        for (j, d) in cells.iter().enumerate() {
            if i == j {
                continue;
            }
            if let Some(m) = merged(c, d) {
                let next: Vec<TileCell> = cells
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != i)
                    .map(|(k, x)| if k == j { m.clone() } else { x.clone() })
                    .collect();
                out.extend(compact(&next, &plain, sig));
            }
        }
    }
    if cells.len() < cap {
        let xs: HashSet<i64> = cells.iter().flat_map(|c| [c.rect.x0, c.rect.x1]).collect();
        let ys: HashSet<i64> = cells.iter().flat_map(|c| [c.rect.y0, c.rect.y1]).collect();
        for (j, c) in cells.iter().enumerate() {
            let lines = xs
                .iter()
                .map(|&x| (true, x))
                .chain(ys.iter().map(|&y| (false, y)));
            for (vertical, at) in lines {
                if let Some((a, b)) = cut(c, vertical, at, sig)? {
                    let mut next = cells.to_vec();
                    next[j] = a;
                    next.push(b);
                    out.extend(compact(&next, &plain, sig));
                }
            }
        }
        let base = doubled(cells);
        for j in 0..base.len() {
            for dir in [Dir::Left, Dir::Right, Dir::Up, Dir::Down] {
                let (rest, id) = split_off(&base[j], dir, sig)?;
                let mut next = base.clone();
                next[j] = rest;
                next.push(id);
                out.extend(compact(&next, &plain, sig));
            }
        }
    }
    for (e, f) in opposite_stems(cells) {
        let h = Hints {
            force_x: vec![(e, f)],
            ..Default::default()
        };
        out.extend(compact(cells, &h, sig));
    }
    let t = transpose(cells);
    for (e, f) in opposite_stems(&t) {
        let h = Hints {
            force_y: vec![(e, f)],
            ..Default::default()
        };
        out.extend(compact(cells, &h, sig));
    }
    for [ul, ur, ll, lr] in crossings(cells) {
        let above = [2 * ul + 1, 2 * ur];
        let below = [2 * ll + 1, 2 * lr];
        let mut split_x = HashSet::new();
        for a in above {
            for b in below {
                split_x.insert((a.min(b), a.max(b)));
            }
        }
        let h = Hints {
            force_x: vec![],
            force_y: vec![(2 * ul + 1, 2 * ur + 1), (2 * ll, 2 * lr)],
            split_x,
        };
        out.extend(compact(cells, &h, sig));
    }
    Ok(out)
}

fn gen_multiset(m: &PartialTiling) -> BTreeMap<&str, usize> {
    let mut out = BTreeMap::new();
    for c in &m.cells {
        if let CellLabel::Gen { cell } = &c.label {
            *out.entry(cell.as_str()).or_insert(0) += 1;
        }
    }
    out
}

fn start(m: &PartialTiling, sig: &DoubleSignature) -> Option<Vec<TileCell>> {
    let cells: Vec<TileCell> = m
        .cells
        .iter()
        .map(|c| TileCell {
            label: normalize_label(c.label.clone()),
            ..c.clone()
        })
        .collect();
    compact(&cells, &Hints::default(), sig)
}

/// Bidirectional breadth-first search over identity absorption and
/// emission, line alignment and crossing flips. `budget` bounds the
/// number of expanded states.
pub fn tilings_equivalent(
    m1: &PartialTiling,
    m2: &PartialTiling,
    budget: usize,
    sig: &DoubleSignature,
) -> Result<Equivalence> {
    m1.validate(sig)?;
    m2.validate(sig)?;
    if m1.tiling_type(sig)? != m2.tiling_type(sig)? || gen_multiset(m1) != gen_multiset(m2) {
        return Ok(Equivalence::NotEquivalent);
    }
    let (Some(s1), Some(s2)) = (start(m1, sig), start(m2, sig)) else {
        return Ok(Equivalence::Unknown);
    };
    if key(&s1) == key(&s2) {
        return Ok(Equivalence::Equivalent);
    }
    let cap = m1.cells.len().max(m2.cells.len()) + 2;
    let mut seen: [HashSet<Key>; 2] = [HashSet::from([key(&s1)]), HashSet::from([key(&s2)])];
    let mut frontier = [vec![s1], vec![s2]];
    let mut expanded = 0;
    while !frontier[0].is_empty() && !frontier[1].is_empty() {
        let side = usize::from(frontier[0].len() > frontier[1].len());
        let layer = std::mem::take(&mut frontier[side]);
        let mut next = Vec::new();
        for s in layer {
            if expanded >= budget {
                return Ok(Equivalence::Unknown);
            }
            expanded += 1;
            for t in neighbours(&s, cap, sig)? {
                let k = key(&t);
                if seen[1 - side].contains(&k) {
                    return Ok(Equivalence::Equivalent);
                }
                if seen[side].insert(k) {
                    next.push(t);
                }
            }
        }
        frontier[side] = next;
    }
    Ok(Equivalence::Unknown)
}
