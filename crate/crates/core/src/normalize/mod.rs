//! Exchange moves, the left-greedy normal form, equality checking and a
//! breadth-first oracle for small diagrams.

use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::diagram::{validate_diagram, LayeredDiagram, Level, Sig2};
use crate::error::{Error, Result};
use crate::expr::CellExpr;
use crate::signature::DoubleSignature;
use crate::translate::translate_with;

mod closed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SwapKind {
    /// The lower generator lies entirely left of the upper one.
    LeftSwap,
    /// The lower generator lies entirely right of the upper one.
    RightSwap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    pub diagram: LayeredDiagram,
    pub swaps: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Equal,
    BoundaryMismatch,
    MultisetMismatch,
    NormalFormsDiffer,
}

impl Verdict {
    pub fn is_equal(self) -> bool {
        self == Verdict::Equal
    }

    pub fn reason(self) -> &'static str {
        match self {
            Verdict::Equal => "normal forms coincide",
            Verdict::BoundaryMismatch => "boundary mismatch",
            Verdict::MultisetMismatch => "multiset mismatch",
            Verdict::NormalFormsDiffer => "normal forms differ",
        }
    }
}

#[derive(Clone, Copy)]
struct Slot {
    offset: usize,
    inputs: usize,
    outputs: usize,
    cell: usize,
    /// Position of the level in the input diagram.
    id: usize,
}

fn left_ok(upper: Slot, lower: Slot) -> bool {
    lower.offset + lower.inputs <= upper.offset
}

fn right_ok(upper: Slot, lower: Slot) -> bool {
    lower.offset >= upper.offset + upper.outputs
}

fn left_swap(upper: Slot, lower: Slot) -> (Slot, Slot) {
    (
        lower,
        Slot {
            offset: upper.offset - lower.inputs + lower.outputs,
            ..upper
        },
    )
}

fn right_swap(upper: Slot, lower: Slot) -> (Slot, Slot) {
    (
        Slot {
            offset: lower.offset - upper.outputs + upper.inputs,
            ..lower
        },
        upper,
    )
}

fn should_rise(upper: Slot, lower: Slot) -> bool {
    left_ok(upper, lower)
}

struct Packed {
    names: Vec<String>,
    slots: Vec<Slot>,
}

fn pack(d: &LayeredDiagram, sig2: &Sig2) -> Result<Packed> {
    let mut names: Vec<String> = d.levels.iter().map(|l| l.cell.clone()).collect();
    names.sort();
    names.dedup();
    let mut slots = Vec::with_capacity(d.levels.len());
    for (id, l) in d.levels.iter().enumerate() {
        let ty = sig2.ty(&l.cell)?;
        slots.push(Slot {
            id,
            offset: l.offset,
            inputs: ty.input.len(),
            outputs: ty.output.len(),
            cell: names.binary_search(&l.cell).expect("name collected above"),
        });
    }
    Ok(Packed { names, slots })
}

fn unpack(domain: &crate::diagram::WireWord, p: &Packed) -> LayeredDiagram {
    LayeredDiagram {
        domain: domain.clone(),
        levels: p
            .slots
            .iter()
            .map(|s| Level {
                offset: s.offset,
                cell: p.names[s.cell].clone(),
            })
            .collect(),
    }
}

pub fn swap_levels(
    d: &LayeredDiagram,
    i: usize,
    kind: SwapKind,
    sig2: &Sig2,
) -> Result<LayeredDiagram> {
    if i + 1 >= d.levels.len() {
        return Err(Error::NotSwappable { index: i, kind });
    }
    let mut p = pack(d, sig2)?;
    let (u, l) = (p.slots[i], p.slots[i + 1]);
    let (a, b) = match kind {
        SwapKind::LeftSwap if left_ok(u, l) => left_swap(u, l),
        SwapKind::RightSwap if right_ok(u, l) => right_swap(u, l),
        _ => return Err(Error::NotSwappable { index: i, kind }),
    };
    p.slots[i] = a;
    p.slots[i + 1] = b;
    Ok(unpack(&d.domain, &p))
}

/// Insertion-sort sifting by LeftSwap, repeated until no pair rises.
/// Returns the number of swaps.
fn sift(slots: &mut [Slot]) -> usize {
    let n = slots.len();
    let mut swaps = 0;
    for _ in 0..n * n + 2 {
        let mut changed = false;
        for j in 1..n {
            let mut q = j;
            while q > 0 && should_rise(slots[q - 1], slots[q]) {
                let (a, b) = left_swap(slots[q - 1], slots[q]);
                slots[q - 1] = a;
                slots[q] = b;
                swaps += 1;
                changed = true;
                q -= 1;
            }
        }
        if !changed {
            return swaps;
        }
    }
    debug_assert!(false, "sifting did not settle");
    swaps
}

fn key(slots: &[Slot]) -> Vec<(usize, usize)> {
    slots.iter().map(|s| (s.offset, s.cell)).collect()
}

/// Every level as high and as left as LeftSwaps allow. Closed components
/// are normalized on their own and placed at the first gap of their face.
pub fn normalize(d: &LayeredDiagram, sig2: &Sig2) -> Result<NormalForm> {
    validate_diagram(d, sig2)?;
    let mut p = pack(d, sig2)?;
    let swaps = match closed::canonical(d.domain.len(), &p.slots) {
        Some((slots, swaps)) => {
            p.slots = slots;
            swaps
        }
        None => sift(&mut p.slots),
    };
    Ok(NormalForm {
        diagram: unpack(&d.domain, &p),
        swaps,
    })
}

/// True when [`normalize`] leaves `d` unchanged.
pub fn is_normal(d: &LayeredDiagram, sig2: &Sig2) -> Result<bool> {
    Ok(&normalize(d, sig2)?.diagram == d)
}

pub fn compare_diagrams(d1: &LayeredDiagram, d2: &LayeredDiagram, sig2: &Sig2) -> Result<Verdict> {
    let c1 = validate_diagram(d1, sig2).map_err(|e| Error::SignatureMismatch(e.to_string()))?;
    let c2 = validate_diagram(d2, sig2).map_err(|e| Error::SignatureMismatch(e.to_string()))?;
    if d1.domain != d2.domain || c1 != c2 {
        return Ok(Verdict::BoundaryMismatch);
    }
    if d1.cell_multiset() != d2.cell_multiset() {
        return Ok(Verdict::MultisetMismatch);
    }
    let n1 = normalize(d1, sig2)?;
    let n2 = normalize(d2, sig2)?;
    Ok(if n1.diagram == n2.diagram {
        Verdict::Equal
    } else {
        Verdict::NormalFormsDiffer
    })
}

pub fn decide_eq_diagrams(d1: &LayeredDiagram, d2: &LayeredDiagram, sig2: &Sig2) -> Result<bool> {
    Ok(compare_diagrams(d1, d2, sig2)?.is_equal())
}

pub fn compare_exprs(e1: &CellExpr, e2: &CellExpr, sig: &DoubleSignature) -> Result<Verdict> {
    let sig2 = Sig2::from_signature(sig);
    let d1 = translate_with(e1, sig, &sig2)?;
    let d2 = translate_with(e2, sig, &sig2)?;
    compare_diagrams(&d1, &d2, &sig2)
}

pub fn decide_eq_exprs(e1: &CellExpr, e2: &CellExpr, sig: &DoubleSignature) -> Result<bool> {
    Ok(compare_exprs(e1, e2, sig)?.is_equal())
}

/// The closure of `{d}` under both kinds of swap.
pub fn bfs_class(d: &LayeredDiagram, cap: usize, sig2: &Sig2) -> Result<BTreeSet<LayeredDiagram>> {
    validate_diagram(d, sig2)?;
    let start = pack(d, sig2)?;
    let mut seen: HashSet<Vec<(usize, usize)>> = HashSet::new();
    let mut queue: VecDeque<Vec<Slot>> = VecDeque::new();
    seen.insert(key(&start.slots));
    queue.push_back(start.slots.clone());
    let mut out = BTreeSet::new();
    while let Some(slots) = queue.pop_front() {
        out.insert(unpack(
            &d.domain,
            &Packed {
                names: start.names.clone(),
                slots: slots.clone(),
            },
        ));
        for i in 0..slots.len().saturating_sub(1) {
            let (u, l) = (slots[i], slots[i + 1]);
            let mut moves = Vec::with_capacity(2);
            if left_ok(u, l) {
                moves.push(left_swap(u, l));
            }
            if right_ok(u, l) {
                moves.push(right_swap(u, l));
            }
            for (a, b) in moves {
                let mut next = slots.clone();
                next[i] = a;
                next[i + 1] = b;
                if seen.insert(key(&next)) {
                    if seen.len() > cap {
                        return Err(Error::OracleOverflow { cap });
                    }
                    queue.push_back(next);
                }
            }
        }
    }
    Ok(out)
}
