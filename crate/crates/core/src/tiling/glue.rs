use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{
    spread_between, CellLabel, PartialTiling, Rect, TileCell, TilingType, WirePositions, SCALE,
};
use crate::diagram::{level_words, split_admissible_domain, LayeredDiagram, Sig2};
use crate::error::{Error, Result};
use crate::signature::{CellBoundary, DoubleSignature, HWord, Kind, VWord, Word};

/// Attachment site `(k, i, j)`: corner `k` of the staircase, skipping `i`
/// wires of `h_{k+1}` or `j` wires of `v_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GluingPosition {
    pub k: usize,
    pub i: usize,
    pub j: usize,
}

impl GluingPosition {
    pub fn new(k: usize, i: usize, j: usize) -> Self {
        GluingPosition { k, i, j }
    }
}

fn cell(
    label: CellLabel,
    rect: Rect,
    wires: WirePositions,
    sig: &DoubleSignature,
) -> Result<TileCell> {
    let sides = label.boundary(sig)?;
    Ok(TileCell {
        rect,
        label,
        sides,
        wires,
    })
}

/// The thin L shape exposing `v` then `h`. Degenerates to a single cell
/// when either word is empty.
pub fn empty_tiling(h: &HWord, v: &VWord, sig: &DoubleSignature) -> Result<PartialTiling> {
    if h.at != v.at {
        return Err(Error::AnchorMismatch(format!(
            "h starts at {} but v starts at {}",
            h.at, v.at
        )));
    }
    sig.check_word(Kind::H, h)?;
    sig.check_word(Kind::V, v)?;
    let s = SCALE;
    let yv = s * (v.len() as i64 + 1);
    let xh = s * (h.len() as i64 + 1);
    let cells = match (h.is_empty(), v.is_empty()) {
        (true, true) => vec![cell(
            CellLabel::HIdCell { word: v.clone() },
            Rect::new(0, 0, s, s),
            WirePositions::default(),
            sig,
        )?],
        (true, false) => {
            let ys = spread_between(0, yv, v.len());
            vec![cell(
                CellLabel::HIdCell { word: v.clone() },
                Rect::new(0, 0, s, yv),
                WirePositions {
                    left: ys.clone(),
                    right: ys,
                    ..Default::default()
                },
                sig,
            )?]
        }
        (false, true) => {
            let xs = spread_between(0, xh, h.len());
            vec![cell(
                CellLabel::VIdCell { word: h.clone() },
                Rect::new(0, 0, xh, s),
                WirePositions {
                    top: xs.clone(),
                    bottom: xs,
                    ..Default::default()
                },
                sig,
            )?]
        }
        (false, false) => {
            let ys = spread_between(0, yv, v.len());
            let xs = spread_between(0, xh, h.len());
            vec![
                cell(
                    CellLabel::HIdCell {
                        word: Word::empty(h.at.clone()),
                    },
                    Rect::new(-s, -s, 0, 0),
                    WirePositions::default(),
                    sig,
                )?,
                cell(
                    CellLabel::HIdCell { word: v.clone() },
                    Rect::new(-s, 0, 0, yv),
                    WirePositions {
                        left: ys.clone(),
                        right: ys,
                        ..Default::default()
                    },
                    sig,
                )?,
                cell(
                    CellLabel::VIdCell { word: h.clone() },
                    Rect::new(0, -s, xh, 0),
                    WirePositions {
                        top: xs.clone(),
                        bottom: xs,
                        ..Default::default()
                    },
                    sig,
                )?,
            ]
        }
    };
    Ok(PartialTiling { cells })
}

fn is_factor(sig: &DoubleSignature, kind: Kind, w: &Word, at: usize, f: &Word) -> bool {
    at + f.len() <= w.len()
        && sig
            .factor_at(kind, w, at, f.len())
            .map_or(false, |x| x == *f)
}

fn positions_for_type(
    ty: &TilingType,
    b: &CellBoundary,
    sig: &DoubleSignature,
) -> BTreeSet<GluingPosition> {
    let (hp, vp) = (&b.domh, &b.domv);
    let n = ty.n();
    let h = |m: usize| &ty.steps[m - 1].h;
    let v = |m: usize| &ty.steps[m - 1].v;
    let mut out = BTreeSet::new();
    if is_factor(sig, Kind::H, h(1), 0, hp) {
        out.insert(GluingPosition::new(0, 0, 0));
    }
    if vp.is_empty() {
        for i in 1..=h(1).len() {
            if is_factor(sig, Kind::H, h(1), i, hp) {
                out.insert(GluingPosition::new(0, i, 0));
            }
        }
    }
    if is_factor(sig, Kind::V, v(n), 0, vp) {
        out.insert(GluingPosition::new(n, 0, 0));
    }
    if hp.is_empty() {
        for i in 1..=v(n).len() {
            if is_factor(sig, Kind::V, v(n), i, vp) {
                out.insert(GluingPosition::new(n, 0, i));
            }
        }
    }
    for k in 1..n {
        if is_factor(sig, Kind::V, v(k), 0, vp) && is_factor(sig, Kind::H, h(k + 1), 0, hp) {
            out.insert(GluingPosition::new(k, 0, 0));
        }
        if hp.is_empty() {
            for i in 1..=v(k).len() {
                if is_factor(sig, Kind::V, v(k), i, vp) {
                    out.insert(GluingPosition::new(k, 0, i));
                }
            }
        }
        if vp.is_empty() {
            for i in 1..=h(k + 1).len() {
                if is_factor(sig, Kind::H, h(k + 1), i, hp) {
                    out.insert(GluingPosition::new(k, i, 0));
                }
            }
        }
    }
    out
}

/// Every legal position for a generator with boundary `b` on `m`.
pub fn gluing_positions(
    m: &PartialTiling,
    b: &CellBoundary,
    sig: &DoubleSignature,
) -> Result<BTreeSet<GluingPosition>> {
    let ty = m.tiling_type(sig)?;
    Ok(positions_for_type(&ty, b, sig))
}

/// A fresh coordinate strictly between `u` and the next value in use.
fn after(set: &mut BTreeSet<i64>, u: i64) -> i64 {
    let next = set.range(u + 1..).next().copied().unwrap_or(u + 2 * SCALE);
    let v = u + (next - u) / 2;
    assert!(v > u && v < next, "coordinate space exhausted");
    set.insert(v);
    v
}

pub fn glue(
    m: &PartialTiling,
    cell_name: &str,
    p: GluingPosition,
    sig: &DoubleSignature,
) -> Result<PartialTiling> {
    let b = sig.cell(cell_name)?.clone();
    if !gluing_positions(m, &b, sig)?.contains(&p) {
        return Err(Error::IllegalPosition(format!(
            "({}, {}, {}) for `{cell_name}`",
            p.k, p.i, p.j
        )));
    }
    let mut m = m.renormalized(SCALE);
    let path = m.path(sig)?;
    let (mut xs, mut ys) = m.axis_values();
    let n = path.n();
    let GluingPosition { k, i, j } = p;
    let hseg = (k < n).then(|| &path.hs[k]);
    let vseg = (k >= 1).then(|| &path.vs[k - 1]);
    let xk = if k == 0 {
        path.left.fixed
    } else {
        path.vs[k - 1].fixed
    };
    let yk1 = if k < n {
        path.hs[k].fixed
    } else {
        path.top.fixed
    };

    let mut left = xk;
    let mut top = yk1;
    if i > 0 {
        left = after(&mut xs, hseg.expect("checked position").pos[i - 1]);
    }
    if j > 0 {
        top = after(&mut ys, vseg.expect("checked position").pos[j - 1]);
    }
    let used_h = i + b.domh.len();
    let right = match hseg {
        Some(s) if used_h == s.word.len() => s.hi,
        Some(s) if used_h > 0 => after(&mut xs, s.pos[used_h - 1].max(left)),
        _ => after(&mut xs, left),
    };
    let used_v = j + b.domv.len();
    let bottom = match vseg {
        Some(s) if used_v == s.word.len() => s.hi,
        Some(s) if used_v > 0 => after(&mut ys, s.pos[used_v - 1].max(top)),
        _ => after(&mut ys, top),
    };

    if let Some(s) = hseg.filter(|_| i > 0) {
        let w = sig.factor_at(Kind::H, &s.word, 0, i)?;
        let pos = s.pos[..i].to_vec();
        m.cells.push(cell(
            CellLabel::VIdCell { word: w },
            Rect::new(xk, yk1, left, bottom),
            WirePositions {
                top: pos.clone(),
                bottom: pos,
                ..Default::default()
            },
            sig,
        )?);
    }
    if let Some(s) = vseg.filter(|_| j > 0) {
        let w = sig.factor_at(Kind::V, &s.word, 0, j)?;
        let pos = s.pos[..j].to_vec();
        m.cells.push(cell(
            CellLabel::HIdCell { word: w },
            Rect::new(xk, yk1, right, top),
            WirePositions {
                left: pos.clone(),
                right: pos,
                ..Default::default()
            },
            sig,
        )?);
    }
    let top_pos = match hseg {
        Some(s) => s.pos[i..used_h].to_vec(),
        None => spread_between(left, right, b.domh.len()),
    };
    let left_pos = match vseg {
        Some(s) => s.pos[j..used_v].to_vec(),
        None => spread_between(top, bottom, b.domv.len()),
    };
    m.cells.push(TileCell {
        rect: Rect::new(left, top, right, bottom),
        label: CellLabel::gen(cell_name),
        wires: WirePositions {
            top: top_pos,
            left: left_pos,
            bottom: spread_between(left, right, b.codh.len()),
            right: spread_between(top, bottom, b.codv.len()),
        },
        sides: b,
    });
    fill_identities(&mut m, sig)?;
    Ok(m)
}

/// Fills every notch under an identity inner step with an identity cell,
/// repeating until the inner steps are all non-identities.
fn fill_identities(m: &mut PartialTiling, sig: &DoubleSignature) -> Result<()> {
    loop {
        let path = m.path(sig)?;
        let n = path.n();
        let mut notches: BTreeMap<Rect, (Option<CellLabel>, WirePositions)> = BTreeMap::new();
        for a in 1..n {
            let h = &path.hs[a];
            if h.word.is_empty() {
                let v = &path.vs[a - 1];
                let r = Rect::new(h.lo, h.fixed, h.hi, path.hs[a - 1].fixed);
                let e = notches.entry(r).or_insert((None, WirePositions::default()));
                e.0 = Some(CellLabel::HIdCell {
                    word: v.word.clone(),
                });
                e.1.left = v.pos.clone();
                e.1.right = v.pos.clone();
            }
        }
        for a in 0..n.saturating_sub(1) {
            let v = &path.vs[a];
            if v.word.is_empty() {
                let h = &path.hs[a + 1];
                let r = Rect::new(v.fixed, v.lo, h.hi, v.hi);
                let e = notches.entry(r).or_insert((None, WirePositions::default()));
                e.0 = Some(match e.0.take() {
                    Some(_) => CellLabel::HIdCell {
                        word: Word::empty(v.word.at.clone()),
                    },
                    None => CellLabel::VIdCell {
                        word: h.word.clone(),
                    },
                });
                e.1.top = h.pos.clone();
                e.1.bottom = h.pos.clone();
            }
        }
        if notches.is_empty() {
            return Ok(());
        }
        for (rect, (label, mut wires)) in notches {
            let label = label.expect("notch has a label");
            if label.is_empty_identity() {
                wires = WirePositions::default();
            }
            m.cells.push(cell(label, rect, wires, sig)?);
        }
    }
}

/// The position at which a level's generator attaches, read off the
/// current level word.
pub(crate) fn position_for_level(
    ty: &TilingType,
    offset: usize,
    b: &CellBoundary,
) -> Result<GluingPosition> {
    let nv = b.domv.len();
    let nh = b.domh.len();
    let mut segs = Vec::new();
    let mut s = 0;
    for (idx, st) in ty.steps.iter().enumerate() {
        segs.push((true, idx + 1, s, st.h.len()));
        s += st.h.len();
        segs.push((false, idx + 1, s, st.v.len()));
        s += st.v.len();
    }
    let bad = || Error::InvalidTiling(format!("no gluing position at offset {offset}"));
    if nv > 0 {
        let &(_, m, st, len) = segs
            .iter()
            .find(|(is_h, _, st, len)| !is_h && *st <= offset && offset < st + len)
            .ok_or_else(bad)?;
        if offset - st + nv > len {
            return Err(bad());
        }
        let j = len - (offset - st) - nv;
        if nh > 0 {
            return if j == 0 {
                Ok(GluingPosition::new(m, 0, 0))
            } else {
                Err(bad())
            };
        }
        return Ok(GluingPosition::new(m, 0, j));
    }
    if nh > 0 {
        let &(_, m, st, _) = segs
            .iter()
            .find(|(is_h, _, st, len)| *is_h && *st <= offset && offset < st + len)
            .ok_or_else(bad)?;
        return Ok(GluingPosition::new(m - 1, offset - st, 0));
    }
    if let Some(&(_, m, st, _)) = segs
        .iter()
        .find(|(is_h, _, st, len)| *is_h && *st <= offset && offset <= st + len)
    {
        return Ok(GluingPosition::new(m - 1, offset - st, 0));
    }
    let &(_, m, st, len) = segs
        .iter()
        .find(|(is_h, _, st, len)| !is_h && *st < offset && offset <= st + len)
        .ok_or_else(bad)?;
    Ok(GluingPosition::new(m, 0, len - (offset - st)))
}

/// Builds the tiling of a diagram level by level. Only the domain has to
/// read `v^op ; h`; the result is rectangular when the codomain reads
/// `h' ; v'^op` as well.
pub fn reconstruct(phi: &LayeredDiagram, sig: &DoubleSignature) -> Result<PartialTiling> {
    let sig2 = Sig2::from_signature(sig);
    let words = level_words(phi, &sig2)?;
    let (v, h) = split_admissible_domain(&phi.domain, &sig2)?;
    let mut m = empty_tiling(&h, &v, sig)?;
    for (idx, level) in phi.levels.iter().enumerate() {
        let ty = m.tiling_type(sig)?;
        let b = sig.cell(&level.cell)?;
        let p = position_for_level(&ty, level.offset, b)?;
        m = glue(&m, &level.cell, p, sig)?;
        let got = m.level_word(sig)?;
        if got.wires != words[idx + 1].wires {
            return Err(Error::InvalidTiling(format!(
                "after level {idx} the open boundary reads {got}, expected {}",
                words[idx + 1]
            )));
        }
    }
    Ok(m.renormalized(SCALE))
}
