use std::collections::BTreeSet;

use super::{CellLabel, PartialTiling, Rect, TileCell, WirePositions};
use crate::error::{Error, Result};
use crate::expr::CellExpr;
use crate::signature::{DoubleSignature, Kind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Extracted {
    Composable(CellExpr),
    /// A sub-rectangle with at least two cells and no full cut.
    NotBinaryComposable {
        rect: Rect,
    },
}

fn bbox(cells: &[&TileCell]) -> Rect {
    cells.iter().skip(1).fold(cells[0].rect, |a, c| {
        let r = c.rect;
        Rect::new(
            a.x0.min(r.x0),
            a.y0.min(r.y0),
            a.x1.max(r.x1),
            a.y1.max(r.y1),
        )
    })
}

enum Cut {
    Vertical(i64),
    Horizontal(i64),
}

/// Leftmost full vertical cut, else topmost full horizontal cut.
fn find_cut(cells: &[&TileCell], b: Rect) -> Option<Cut> {
    let mut xs: Vec<i64> = cells
        .iter()
        .map(|c| c.rect.x0)
        .filter(|&x| x > b.x0)
        .collect();
    xs.sort_unstable();
    xs.dedup();
    for x in xs {
        if cells.iter().all(|c| c.rect.x1 <= x || c.rect.x0 >= x) {
            return Some(Cut::Vertical(x));
        }
    }
    let mut ys: Vec<i64> = cells
        .iter()
        .map(|c| c.rect.y0)
        .filter(|&y| y > b.y0)
        .collect();
    ys.sort_unstable();
    ys.dedup();
    for y in ys {
        if cells.iter().all(|c| c.rect.y1 <= y || c.rect.y0 >= y) {
            return Some(Cut::Horizontal(y));
        }
    }
    None
}

fn decompose(cells: Vec<&TileCell>) -> std::result::Result<CellExpr, Rect> {
    if cells.len() == 1 {
        return Ok(cells[0].label.to_expr());
    }
    let b = bbox(&cells);
    match find_cut(&cells, b) {
        Some(Cut::Vertical(x)) => {
            let (l, r): (Vec<&TileCell>, Vec<&TileCell>) =
                cells.into_iter().partition(|c| c.rect.x1 <= x);
            Ok(CellExpr::hcomp(decompose(l)?, decompose(r)?))
        }
        Some(Cut::Horizontal(y)) => {
            let (t, bt): (Vec<&TileCell>, Vec<&TileCell>) =
                cells.into_iter().partition(|c| c.rect.y1 <= y);
            Ok(CellExpr::vcomp(decompose(t)?, decompose(bt)?))
        }
        None => Err(b),
    }
}

fn split_at(cuts: &BTreeSet<i64>, lo: i64, hi: i64, avoid: &[i64]) -> Vec<(i64, i64)> {
    let mut pts = vec![lo];
    pts.extend(cuts.range(lo + 1..hi).filter(|c| !avoid.contains(c)));
    pts.push(hi);
    pts.windows(2).map(|w| (w[0], w[1])).collect()
}

/// Splits every identity cell along each grid line crossing it. The
/// pieces compose back to the original identity, so meaning is unchanged.
pub(crate) fn refine_identities(m: &PartialTiling, sig: &DoubleSignature) -> Result<PartialTiling> {
    let xs: BTreeSet<i64> = m
        .cells
        .iter()
        .flat_map(|c| [c.rect.x0, c.rect.x1])
        .collect();
    let ys: BTreeSet<i64> = m
        .cells
        .iter()
        .flat_map(|c| [c.rect.y0, c.rect.y1])
        .collect();
    let mut cells = Vec::new();
    for c in &m.cells {
        let r = c.rect;
        let (kind, word, pos) = match &c.label {
            CellLabel::Gen { .. } => {
                cells.push(c.clone());
                continue;
            }
            CellLabel::VIdCell { word } => (Kind::H, word, &c.wires.top),
            CellLabel::HIdCell { word } => (Kind::V, word, &c.wires.left),
        };
        let (across, along) = match kind {
            Kind::H => (
                split_at(&xs, r.x0, r.x1, pos),
                split_at(&ys, r.y0, r.y1, &[]),
            ),
            Kind::V => (
                split_at(&ys, r.y0, r.y1, pos),
                split_at(&xs, r.x0, r.x1, &[]),
            ),
        };
        for &(a, b) in &across {
            let first = pos.iter().position(|&p| p > a).unwrap_or(pos.len());
            let last = pos.iter().position(|&p| p >= b).unwrap_or(pos.len());
            let w = sig.factor_at(kind, word, first, last - first)?;
            let p = pos[first..last].to_vec();
            for &(s, t) in &along {
                let (label, rect, wires) = match kind {
                    Kind::H => (
                        CellLabel::VIdCell { word: w.clone() },
                        Rect::new(a, s, b, t),
                        WirePositions {
                            top: p.clone(),
                            bottom: p.clone(),
                            ..Default::default()
                        },
                    ),
                    Kind::V => (
                        CellLabel::HIdCell { word: w.clone() },
                        Rect::new(s, a, t, b),
                        WirePositions {
                            left: p.clone(),
                            right: p.clone(),
                            ..Default::default()
                        },
                    ),
                };
                let sides = label.boundary(sig)?;
                cells.push(TileCell {
                    rect,
                    label,
                    sides,
                    wires,
                });
            }
        }
    }
    Ok(PartialTiling { cells })
}

/// Guillotine decomposition of a rectangular tiling. When identity cells
/// block every cut they are split along the grid and the search retried.
pub fn extract_expr(m: &PartialTiling, sig: &DoubleSignature) -> Result<Extracted> {
    if m.tiling_type(sig)?.n() != 1 {
        return Err(Error::NotRectangular);
    }
    if let Ok(e) = decompose(m.cells.iter().collect()) {
        return Ok(Extracted::Composable(e));
    }
    let refined = refine_identities(m, sig)?;
    Ok(match decompose(refined.cells.iter().collect()) {
        Ok(e) => Extracted::Composable(e),
        Err(rect) => Extracted::NotBinaryComposable { rect },
    })
}

pub fn is_binary_composable(m: &PartialTiling, sig: &DoubleSignature) -> Result<bool> {
    Ok(matches!(extract_expr(m, sig)?, Extracted::Composable(_)))
}
