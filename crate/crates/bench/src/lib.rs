//! Workload builders shared by the benchmarks.

use ddcat_core::fixtures::{self, Family};
use ddcat_core::{translate_expr, CellExpr, DoubleSignature, LayeredDiagram, Result, Sig2};

pub use ddcat_core::fixtures::Family as WorkloadFamily;

/// One member of a scalable family, in two bracketings, with the
/// translation of the first.
pub struct Workload {
    pub n: usize,
    pub sig: DoubleSignature,
    pub sig2: Sig2,
    pub left: CellExpr,
    pub other: CellExpr,
    pub diagram: LayeredDiagram,
}

pub fn workload(family: Family, n: usize, seed: u64) -> Result<Workload> {
    let (sig, left, other) = fixtures::family(family, n, seed)?;
    let sig2 = Sig2::from_signature(&sig);
    let diagram = translate_expr(&left, &sig)?;
    Ok(Workload {
        n,
        sig,
        sig2,
        left,
        other,
        diagram,
    })
}

pub const SIZES: [usize; 5] = [8, 16, 32, 64, 128];
