//! Word problem for free double categories: expressions, their layered
//! string diagrams, exchange normal forms, and planar tilings.

pub mod axioms;
pub mod diagram;
pub mod error;
pub mod expr;
pub mod fixtures;
pub mod normalize;
pub mod render;
pub mod signature;
pub mod tiling;
pub mod translate;

pub use diagram::{
    emit_diagram, is_admissible, juxtapose, level_word_at, level_words, load_diagram,
    random_diagram, stack, validate_diagram, LayeredDiagram, Level, Sig2, TwoGenType, Wire,
    WireWord,
};
pub use error::{Error, Result};
pub use expr::{boundary_of, parse_expr, print_expr, random_expr, CellExpr};
pub use normalize::{
    bfs_class, compare_diagrams, compare_exprs, decide_eq_diagrams, decide_eq_exprs, is_normal,
    normalize, swap_levels, NormalForm, SwapKind, Verdict,
};
pub use render::{render_diagram_svg, render_tiling_svg};
pub use signature::{
    emit_signature, load_signature, CellBoundary, DoubleSignature, HWord, Kind, VWord, Word,
};
pub use tiling::{
    emit_tiling, empty_tiling, extract_expr, glue, gluing_positions, is_binary_composable,
    load_tiling, reconstruct, tilings_equivalent, CellLabel, Equivalence, Extracted,
    GluingPosition, PartialTiling, Rect, Step, TileCell, TilingType, WirePositions,
};
pub use translate::{translate_expr, translate_signature};
