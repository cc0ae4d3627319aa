//! Bundled signatures and diagrams used by tests, benches and examples.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diagram::LayeredDiagram;
use crate::error::{Error, Result};
use crate::expr::{parse_expr, CellExpr};
use crate::signature::{load_signature, DoubleSignature};
use crate::tiling::{load_tiling, PartialTiling};

macro_rules! fixture {
    ($file:literal) => {
        include_str!(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/../../fixtures/",
            $file
        ))
    };
}

fn sig(text: &str) -> DoubleSignature {
    load_signature(text).expect("bundled signature is valid")
}

fn diag(text: &str) -> LayeredDiagram {
    serde_json::from_str(text).expect("bundled diagram is valid")
}

/// One object, one generator of each kind, two square cells `alpha`, `beta`.
pub fn s0() -> DoubleSignature {
    sig(fixture!("s0.json"))
}

/// Like [`s0`] with four square cells `alpha` .. `delta`.
pub fn s0x() -> DoubleSignature {
    sig(fixture!("s0x.json"))
}

/// Objects A, B, C with `f: A -> B`, `g: B -> C`.
pub fn three_objects() -> DoubleSignature {
    sig(fixture!("three_objects.json"))
}

/// Two objects and cells with empty sides, including two scalars.
pub fn mixed() -> DoubleSignature {
    sig(fixture!("mixed.json"))
}

/// Five cells whose arities were transcribed by hand from a drawing of
/// the pinwheel arrangement.
pub fn pinwheel_signature() -> DoubleSignature {
    sig(fixture!("pinwheel.json"))
}

pub fn pinwheel_diagram() -> LayeredDiagram {
    diag(fixture!("pinwheel.diag.json"))
}

pub fn inductive_signature() -> DoubleSignature {
    sig(fixture!("inductive.json"))
}

pub fn inductive_diagram() -> LayeredDiagram {
    diag(fixture!("inductive.diag.json"))
}

/// Cells `a`, `b`, `c`, `d`: two dominoes joined by two vertical wires.
pub fn chain_signature() -> DoubleSignature {
    sig(fixture!("chain.json"))
}

pub fn chain_expressions() -> Vec<CellExpr> {
    let s = chain_signature();
    [
        fixture!("chain_e1.expr"),
        fixture!("chain_e2.expr"),
        fixture!("chain_e3.expr"),
        fixture!("chain_e4.expr"),
        fixture!("chain_e5.expr"),
    ]
    .iter()
    .map(|t| parse_expr(t, &s).expect("bundled expression parses"))
    .collect()
}

/// A single cell `c` on one vertical wire; stacking copies gives diagrams
/// whose levels are pairwise independent.
pub fn column_signature() -> DoubleSignature {
    sig(fixture!("column.json"))
}

pub fn gluing_signature() -> DoubleSignature {
    sig(fixture!("gluing.json"))
}

/// Cells `alpha`, `beta`, `delta`, `nu`, `gamma`, `mu` on one object.
pub fn subdivision_signature() -> DoubleSignature {
    sig(fixture!("subdivision.json"))
}

/// Two subdivisions of one staircase with the same cells, differing by
/// identity cells and the placement of grid lines.
pub fn subdivision_tilings() -> (PartialTiling, PartialTiling) {
    let s = subdivision_signature();
    let load = |t: &str| load_tiling(t, &s).expect("bundled tiling is valid");
    (
        load(fixture!("subdivision_a.tiling.json")),
        load(fixture!("subdivision_b.tiling.json")),
    )
}

/// `n` copies of `c` stacked vertically, nested to the right or left.
pub fn column_chain(n: usize, right_nested: bool) -> CellExpr {
    let mut e = CellExpr::gen("c");
    for _ in 1..n {
        e = if right_nested {
            CellExpr::vcomp(CellExpr::gen("c"), e)
        } else {
            CellExpr::vcomp(e, CellExpr::gen("c"))
        };
    }
    e
}

/// `n` copies of `alpha` side by side; every level touches the next.
pub fn ladder(n: usize, right_nested: bool) -> CellExpr {
    let mut e = CellExpr::gen("alpha");
    for _ in 1..n {
        e = if right_nested {
            CellExpr::hcomp(CellExpr::gen("alpha"), e)
        } else {
            CellExpr::hcomp(e, CellExpr::gen("alpha"))
        };
    }
    e
}

/// Benchmark workloads. `Chain` stacks the column cell, giving levels in
/// reverse order that all commute; `Ladder` juxtaposes `alpha` from S0, giving
/// a connected diagram that admits no swap.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Chain,
    Ladder,
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "chain" => Ok(Family::Chain),
            "ladder" => Ok(Family::Ladder),
            other => Err(Error::Validation(format!("unknown family `{other}`"))),
        }
    }
}

fn bracketed(lo: usize, hi: usize, leaf: &str, vertical: bool, rng: &mut ChaCha8Rng) -> CellExpr {
    if hi - lo == 1 {
        return CellExpr::gen(leaf);
    }
    let mid = rng.gen_range(lo + 1..hi);
    let (a, b) = (
        bracketed(lo, mid, leaf, vertical, rng),
        bracketed(mid, hi, leaf, vertical, rng),
    );
    if vertical {
        CellExpr::vcomp(a, b)
    } else {
        CellExpr::hcomp(a, b)
    }
}

/// The signature of `family` with its size-`n` member in two bracketings:
/// left nested, and a random one drawn from `seed`.
pub fn family(
    family: Family,
    n: usize,
    seed: u64,
) -> Result<(DoubleSignature, CellExpr, CellExpr)> {
    if n == 0 {
        return Err(Error::Range("family size must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(match family {
        Family::Chain => (
            column_signature(),
            column_chain(n, false),
            bracketed(0, n, "c", true, &mut rng),
        ),
        Family::Ladder => (
            s0(),
            ladder(n, false),
            bracketed(0, n, "alpha", false, &mut rng),
        ),
    })
}
