//! Random instances of the double-category axioms, for soundness checks of
//! the decision procedure.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::expr::{boundary_of, random_expr, CellExpr};
use crate::signature::{CellBoundary, DoubleSignature, Kind, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    HAssoc,
    VAssoc,
    HUnit,
    VUnit,
    Exchange,
    EmptyIdentity,
}

impl Axiom {
    pub const ALL: [Axiom; 6] = [
        Axiom::HAssoc,
        Axiom::VAssoc,
        Axiom::HUnit,
        Axiom::VUnit,
        Axiom::Exchange,
        Axiom::EmptyIdentity,
    ];
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomInstance {
    pub axiom: Axiom,
    pub lhs: CellExpr,
    pub rhs: CellExpr,
}

fn count(e: &CellExpr) -> usize {
    match e {
        CellExpr::HComp(a, b) | CellExpr::VComp(a, b) => 1 + count(a) + count(b),
        _ => 1,
    }
}

/// Replaces the `target`-th subterm in preorder by `f(subterm)`.
fn rewrite_at(e: &CellExpr, target: usize, f: &mut dyn FnMut(&CellExpr) -> CellExpr) -> CellExpr {
    fn go(
        e: &CellExpr,
        target: usize,
        seen: &mut usize,
        f: &mut dyn FnMut(&CellExpr) -> CellExpr,
    ) -> CellExpr {
        let here = *seen;
        *seen += 1;
        if here == target {
            return f(e);
        }
        match e {
            CellExpr::HComp(a, b) => {
                let a = go(a, target, seen, f);
                CellExpr::hcomp(a, go(b, target, seen, f))
            }
            CellExpr::VComp(a, b) => {
                let a = go(a, target, seen, f);
                CellExpr::vcomp(a, go(b, target, seen, f))
            }
            leaf => leaf.clone(),
        }
    }
    go(e, target, &mut 0, f)
}

fn preorder(e: &CellExpr) -> Vec<CellExpr> {
    let mut out = Vec::new();
    let mut stack = vec![e];
    while let Some(x) = stack.pop() {
        out.push(x.clone());
        if let CellExpr::HComp(a, b) | CellExpr::VComp(a, b) = x {
            stack.push(b);
            stack.push(a);
        }
    }
    out
}

fn rotate(e: &CellExpr, leftward: bool) -> Option<CellExpr> {
    match (e, leftward) {
        (CellExpr::HComp(ab, c), true) => match &**ab {
            CellExpr::HComp(a, b) => Some(CellExpr::hcomp(
                (**a).clone(),
                CellExpr::hcomp((**b).clone(), (**c).clone()),
            )),
            _ => None,
        },
        (CellExpr::HComp(a, bc), false) => match &**bc {
            CellExpr::HComp(b, c) => Some(CellExpr::hcomp(
                CellExpr::hcomp((**a).clone(), (**b).clone()),
                (**c).clone(),
            )),
            _ => None,
        },
        (CellExpr::VComp(ab, c), true) => match &**ab {
            CellExpr::VComp(a, b) => Some(CellExpr::vcomp(
                (**a).clone(),
                CellExpr::vcomp((**b).clone(), (**c).clone()),
            )),
            _ => None,
        },
        (CellExpr::VComp(a, bc), false) => match &**bc {
            CellExpr::VComp(b, c) => Some(CellExpr::vcomp(
                CellExpr::vcomp((**a).clone(), (**b).clone()),
                (**c).clone(),
            )),
            _ => None,
        },
        _ => None,
    }
}

fn corner(sig: &DoubleSignature, b: &CellBoundary) -> Result<String> {
    Ok(sig.word_endpoints(Kind::H, &b.codh)?.1)
}

/// `(a | b) / (c | d)` and `(a / c) | (b / d)` for four composable pieces
/// drawn from a pool, or `s` padded by identities when none fit.
fn exchange_square(
    s: &CellExpr,
    sig: &DoubleSignature,
    pool: &[(CellExpr, CellBoundary)],
    rng: &mut ChaCha8Rng,
) -> Result<(CellExpr, CellExpr)> {
    for _ in 0..400 {
        let pick = |rng: &mut ChaCha8Rng| &pool[rng.gen_range(0..pool.len())];
        let (a, ba) = pick(rng);
        let (b, bb) = pick(rng);
        let (c, bc) = pick(rng);
        let (d, bd) = pick(rng);
        if ba.codv == bb.domv && bc.codv == bd.domv && ba.codh == bc.domh && bb.codh == bd.domh {
            return Ok(square(a, b, c, d));
        }
    }
    let bs = boundary_of(s, sig)?;
    let at = corner(sig, &bs)?;
    Ok(square(
        s,
        &CellExpr::HId(bs.codv.clone()),
        &CellExpr::VId(bs.codh.clone()),
        &CellExpr::HId(Word::empty(at)),
    ))
}

fn square(a: &CellExpr, b: &CellExpr, c: &CellExpr, d: &CellExpr) -> (CellExpr, CellExpr) {
    (
        CellExpr::vcomp(
            CellExpr::hcomp(a.clone(), b.clone()),
            CellExpr::hcomp(c.clone(), d.clone()),
        ),
        CellExpr::hcomp(
            CellExpr::vcomp(a.clone(), c.clone()),
            CellExpr::vcomp(b.clone(), d.clone()),
        ),
    )
}

/// One instance of `axiom`, placed at a random position inside a random
/// expression with at most `budget` leaves. Both sides are well formed.
pub fn axiom_instance(
    sig: &DoubleSignature,
    axiom: Axiom,
    budget: usize,
    seed: u64,
) -> Result<AxiomInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let host = random_expr(sig, budget, rng.gen())?;
    let (lhs, rhs) = match axiom {
        Axiom::HAssoc | Axiom::VAssoc => {
            let horizontal = axiom == Axiom::HAssoc;
            let nodes = preorder(&host);
            let mut sites: Vec<(usize, bool)> = Vec::new();
            for (i, n) in nodes.iter().enumerate() {
                let kind_ok = matches!(
                    (n, horizontal),
                    (CellExpr::HComp(..), true) | (CellExpr::VComp(..), false)
                );
                for leftward in [true, false] {
                    if kind_ok && rotate(n, leftward).is_some() {
                        sites.push((i, leftward));
                    }
                }
            }
            match sites.choose(&mut rng) {
                Some(&(i, leftward)) => {
                    let rhs = rewrite_at(&host, i, &mut |n| {
                        rotate(n, leftward).expect("site was checked")
                    });
                    (host, rhs)
                }
                None => {
                    let i = rng.gen_range(0..count(&host));
                    let sub = &nodes[i];
                    let b = boundary_of(sub, sig)?;
                    let (x, y) = if horizontal {
                        (CellExpr::HId(b.domv.clone()), CellExpr::HId(b.codv.clone()))
                    } else {
                        (CellExpr::VId(b.domh.clone()), CellExpr::VId(b.codh.clone()))
                    };
                    let comp = if horizontal {
                        CellExpr::hcomp
                    } else {
                        CellExpr::vcomp
                    };
                    let l = comp(comp(x.clone(), sub.clone()), y.clone());
                    let r = comp(x, comp(sub.clone(), y));
                    (
                        rewrite_at(&host, i, &mut |_| l.clone()),
                        rewrite_at(&host, i, &mut |_| r.clone()),
                    )
                }
            }
        }
        Axiom::HUnit | Axiom::VUnit => {
            let nodes = preorder(&host);
            let i = rng.gen_range(0..nodes.len());
            let b = boundary_of(&nodes[i], sig)?;
            let before = rng.gen_bool(0.5);
            let padded = match (axiom, before) {
                (Axiom::HUnit, true) => CellExpr::hcomp(CellExpr::HId(b.domv), nodes[i].clone()),
                (Axiom::HUnit, false) => CellExpr::hcomp(nodes[i].clone(), CellExpr::HId(b.codv)),
                (_, true) => CellExpr::vcomp(CellExpr::VId(b.domh), nodes[i].clone()),
                (_, false) => CellExpr::vcomp(nodes[i].clone(), CellExpr::VId(b.codh)),
            };
            (host.clone(), rewrite_at(&host, i, &mut |_| padded.clone()))
        }
        Axiom::Exchange => {
            let pool: Vec<(CellExpr, CellBoundary)> = (0..24)
                .map(|_| {
                    let e = random_expr(sig, 2, rng.gen())?;
                    let b = boundary_of(&e, sig)?;
                    Ok((e, b))
                })
                .collect::<Result<_>>()?;
            let nodes = preorder(&host);
            let i = rng.gen_range(0..nodes.len());
            let sub = nodes[i].clone();
            let bsub = boundary_of(&sub, sig)?;
            let (l, r) = exchange_square(&sub, sig, &pool, &mut rng)?;
            let bl = boundary_of(&l, sig)?;
            if bl == bsub {
                (
                    rewrite_at(&host, i, &mut |_| l.clone()),
                    rewrite_at(&host, i, &mut |_| r.clone()),
                )
            } else {
                (l, r)
            }
        }
        Axiom::EmptyIdentity => {
            let nodes = preorder(&host);
            let i = rng.gen_range(0..nodes.len());
            let sub = nodes[i].clone();
            let b = boundary_of(&sub, sig)?;
            let at = corner(sig, &b)?;
            let with = |empty: CellExpr| {
                CellExpr::vcomp(
                    CellExpr::hcomp(sub.clone(), CellExpr::HId(b.codv.clone())),
                    CellExpr::hcomp(CellExpr::VId(b.codh.clone()), empty),
                )
            };
            let l = with(CellExpr::HId(Word::empty(at.clone())));
            let r = with(CellExpr::VId(Word::empty(at)));
            (
                rewrite_at(&host, i, &mut |_| l.clone()),
                rewrite_at(&host, i, &mut |_| r.clone()),
            )
        }
    };
    Ok(AxiomInstance { axiom, lhs, rhs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn instances_are_well_formed_and_distinct() {
        for sig in [fixtures::s0(), fixtures::mixed(), fixtures::three_objects()] {
            for (k, ax) in Axiom::ALL.iter().enumerate() {
                for seed in 0..20u64 {
                    let inst = axiom_instance(&sig, *ax, 4, seed * 7 + k as u64).unwrap();
                    let bl = boundary_of(&inst.lhs, &sig).unwrap();
                    let br = boundary_of(&inst.rhs, &sig).unwrap();
                    assert_eq!(bl, br, "{ax:?}: {} vs {}", inst.lhs, inst.rhs);
                    assert_ne!(inst.lhs, inst.rhs, "{ax:?}");
                }
            }
        }
    }

    #[test]
    fn preorder_matches_rewrite_indices() {
        let sig = fixtures::s0x();
        let e = random_expr(&sig, 6, 3).unwrap();
        let nodes = preorder(&e);
        assert_eq!(nodes.len(), count(&e));
        for (i, n) in nodes.iter().enumerate() {
            let mut hit = None;
            rewrite_at(&e, i, &mut |x| {
                hit = Some(x.clone());
                x.clone()
            });
            assert_eq!(hit.as_ref(), Some(n));
        }
    }
}
