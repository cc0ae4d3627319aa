//! The translation from double-category expressions to layered diagrams.

use crate::diagram::{LayeredDiagram, Level, Sig2, TwoGenType, WireWord};
use crate::error::{Error, Result};
use crate::expr::{boundary_of, CellExpr};
use crate::signature::{CellBoundary, DoubleSignature, Kind};

use std::collections::BTreeMap;

pub fn translate_signature(sig: &DoubleSignature) -> BTreeMap<String, TwoGenType> {
    Sig2::from_signature(sig).types
}

struct Built {
    diag: LayeredDiagram,
    cod: WireWord,
    b: CellBoundary,
}

/// A diagram with its codomain, before the boundary is attached.
struct Part {
    diag: LayeredDiagram,
    cod: WireWord,
}

fn identity(w: WireWord) -> Part {
    Part {
        diag: LayeredDiagram::identity(w.clone()),
        cod: w,
    }
}

fn jux(l: Part, r: Part) -> Part {
    let shift = l.cod.len();
    let (mut diag, mut cod) = (l.diag, l.cod);
    diag.domain.wires.extend(r.diag.domain.wires);
    diag.levels
        .extend(r.diag.levels.into_iter().map(|lv| Level {
            offset: lv.offset + shift,
            cell: lv.cell,
        }));
    cod.wires.extend(r.cod.wires);
    Part { diag, cod }
}

fn part(b: Built) -> Part {
    Part {
        diag: b.diag,
        cod: b.cod,
    }
}

fn stack(top: Part, bottom: Part, b: CellBoundary) -> Result<Built> {
    if top.cod.wires != bottom.diag.domain.wires {
        return Err(Error::Composition(format!(
            "internal: codomain {} does not meet domain {}",
            top.cod, bottom.diag.domain
        )));
    }
    let mut diag = top.diag;
    diag.levels.extend(bottom.diag.levels);
    Ok(Built {
        diag,
        cod: bottom.cod,
        b,
    })
}

/// Translates `e`; the result is valid and admissible.
pub fn translate_expr(e: &CellExpr, sig: &DoubleSignature) -> Result<LayeredDiagram> {
    let sig2 = Sig2::from_signature(sig);
    translate_with(e, sig, &sig2)
}

pub fn translate_with(e: &CellExpr, sig: &DoubleSignature, sig2: &Sig2) -> Result<LayeredDiagram> {
    let hw = |w: &crate::signature::Word| WireWord::from_h(w);
    let built = e.fold(
        |leaf| {
            let b = boundary_of(leaf, sig)?;
            match leaf {
                CellExpr::Gen(name) => {
                    let ty = sig2.ty(name)?;
                    Ok(Built {
                        diag: LayeredDiagram {
                            domain: ty.input.clone(),
                            levels: vec![Level::new(0, name)],
                        },
                        cod: ty.output.clone(),
                        b,
                    })
                }
                CellExpr::HId(v) => {
                    sig.check_word(Kind::V, v)?;
                    let id = identity(sig2.vop_reversal(v)?);
                    Ok(Built {
                        diag: id.diag,
                        cod: id.cod,
                        b,
                    })
                }
                CellExpr::VId(h) => {
                    sig.check_word(Kind::H, h)?;
                    let id = identity(hw(h));
                    Ok(Built {
                        diag: id.diag,
                        cod: id.cod,
                        b,
                    })
                }
                _ => unreachable!(),
            }
        },
        |node, l, r| match node {
            CellExpr::HComp(..) => {
                if l.b.codv != r.b.domv {
                    return Err(Error::Composition(format!(
                        "codv(left) = {} differs from domv(right) = {}",
                        l.b.codv, r.b.domv
                    )));
                }
                let b = CellBoundary {
                    domh: l.b.domh.concat(&r.b.domh),
                    codh: l.b.codh.concat(&r.b.codh),
                    domv: l.b.domv.clone(),
                    codv: r.b.codv.clone(),
                };
                let (lower_id, upper_id) = (identity(hw(&l.b.codh)), identity(hw(&r.b.domh)));
                let (lp, rp) = (part(l), part(r));
                let upper = jux(lp, upper_id);
                let lower = jux(lower_id, rp);
                stack(upper, lower, b)
            }
            _ => {
                if l.b.codh != r.b.domh {
                    return Err(Error::Composition(format!(
                        "codh(top) = {} differs from domh(bottom) = {}",
                        l.b.codh, r.b.domh
                    )));
                }
                let b = CellBoundary {
                    domh: l.b.domh.clone(),
                    codh: r.b.codh.clone(),
                    domv: l.b.domv.concat(&r.b.domv),
                    codv: l.b.codv.concat(&r.b.codv),
                };
                let upper_id = identity(sig2.vop_reversal(&r.b.domv)?);
                let lower_id = identity(sig2.vop_reversal(&l.b.codv)?);
                let (lp, rp) = (part(l), part(r));
                let upper = jux(upper_id, lp);
                let lower = jux(rp, lower_id);
                stack(upper, lower, b)
            }
        },
    )?;
    Ok(built.diag)
}
