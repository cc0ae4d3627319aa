mod common;

use ddcat_core::{
    boundary_of, decide_eq_diagrams, is_admissible, juxtapose, parse_expr, print_expr, random_expr,
    stack, translate_expr, validate_diagram, CellExpr, DoubleSignature, LayeredDiagram, Sig2,
    WireWord,
};
use proptest::prelude::*;

use common::signatures;

/// Like the translation, but when the two factors share no wires the
/// right (resp. lower) factor is whiskered in first.
fn translate_swapped(e: &CellExpr, sig: &DoubleSignature, s2: &Sig2) -> LayeredDiagram {
    let id = |w: WireWord| LayeredDiagram::identity(w);
    let hw = |w: &ddcat_core::Word| WireWord::from_h(w);
    match e {
        CellExpr::HComp(l, r) => {
            let (bl, br) = (boundary_of(l, sig).unwrap(), boundary_of(r, sig).unwrap());
            let (tl, tr) = (translate_swapped(l, sig, s2), translate_swapped(r, sig, s2));
            if !bl.codv.is_empty() {
                let upper = juxtapose(&tl, &id(hw(&br.domh)), s2).unwrap();
                let lower = juxtapose(&id(hw(&bl.codh)), &tr, s2).unwrap();
                return stack(&upper, &lower, s2).unwrap();
            }
            let left_in = s2.vop_reversal(&bl.domv).unwrap().concat(&hw(&bl.domh));
            let right_out = hw(&br.codh).concat(&s2.vop_reversal(&br.codv).unwrap());
            let upper = juxtapose(&id(left_in), &tr, s2).unwrap();
            let lower = juxtapose(&tl, &id(right_out), s2).unwrap();
            stack(&upper, &lower, s2).unwrap()
        }
        CellExpr::VComp(t, b) => {
            let (bt, bb) = (boundary_of(t, sig).unwrap(), boundary_of(b, sig).unwrap());
            let (tt, tb) = (translate_swapped(t, sig, s2), translate_swapped(b, sig, s2));
            if !bt.codh.is_empty() {
                let upper = juxtapose(&id(s2.vop_reversal(&bb.domv).unwrap()), &tt, s2).unwrap();
                let lower = juxtapose(&tb, &id(s2.vop_reversal(&bt.codv).unwrap()), s2).unwrap();
                return stack(&upper, &lower, s2).unwrap();
            }
            let top_in = s2.vop_reversal(&bt.domv).unwrap().concat(&hw(&bt.domh));
            let bottom_out = hw(&bb.codh).concat(&s2.vop_reversal(&bb.codv).unwrap());
            let upper = juxtapose(&tb, &id(top_in), s2).unwrap();
            let lower = juxtapose(&id(bottom_out), &tt, s2).unwrap();
            stack(&upper, &lower, s2).unwrap()
        }
        leaf => translate_expr(leaf, sig).unwrap(),
    }
}

fn has_reordered_node(e: &CellExpr, sig: &DoubleSignature) -> bool {
    match e {
        CellExpr::HComp(l, r) => {
            boundary_of(l, sig).unwrap().codv.is_empty()
                || has_reordered_node(l, sig)
                || has_reordered_node(r, sig)
        }
        CellExpr::VComp(t, b) => {
            boundary_of(t, sig).unwrap().codh.is_empty()
                || has_reordered_node(t, sig)
                || has_reordered_node(b, sig)
        }
        _ => false,
    }
}

proptest! {
    #![proptest_config(common::config(256))]

    #[test]
    fn print_then_parse_is_identity(si in 0usize..10, budget in 1usize..10, seed in any::<u64>()) {
        let (_, sig) = &signatures()[si];
        let e = random_expr(sig, budget, seed).unwrap();
        prop_assert_eq!(parse_expr(&print_expr(&e), sig).unwrap(), e);
    }

    #[test]
    fn boundary_satisfies_corner_equations(si in 0usize..10, budget in 1usize..10, seed in any::<u64>()) {
        let (_, sig) = &signatures()[si];
        let e = random_expr(sig, budget, seed).unwrap();
        let b = boundary_of(&e, sig).unwrap();
        prop_assert!(sig.check_boundary("e", &b).is_ok());
    }

    #[test]
    fn leaves_equal_levels(si in 0usize..10, budget in 1usize..10, seed in any::<u64>()) {
        let (_, sig) = &signatures()[si];
        let e = random_expr(sig, budget, seed).unwrap();
        let d = translate_expr(&e, sig).unwrap();
        prop_assert_eq!(d.levels.len(), e.leaf_count());
        prop_assert_eq!(d.levels.len(), e.cell_names().len());
    }

    #[test]
    fn translation_is_admissible_with_natural_boundary(si in 0usize..10, budget in 1usize..10, seed in any::<u64>()) {
        let (_, sig) = &signatures()[si];
        let s2 = Sig2::from_signature(sig);
        let e = random_expr(sig, budget, seed).unwrap();
        let d = translate_expr(&e, sig).unwrap();
        prop_assert!(is_admissible(&d, &s2));
        let b = boundary_of(&e, sig).unwrap();
        let dom = s2.vop_reversal(&b.domv).unwrap().concat(&WireWord::from_h(&b.domh));
        let cod = WireWord::from_h(&b.codh).concat(&s2.vop_reversal(&b.codv).unwrap());
        prop_assert_eq!(&d.domain.wires, &dom.wires);
        prop_assert_eq!(validate_diagram(&d, &s2).unwrap().wires, cod.wires);
    }

    #[test]
    fn other_whiskering_order_is_equivalent(si in 0usize..10, budget in 1usize..8, seed in any::<u64>()) {
        let (_, sig) = &signatures()[si];
        let s2 = Sig2::from_signature(sig);
        let e = random_expr(sig, budget, seed).unwrap();
        let d = translate_expr(&e, sig).unwrap();
        let alt = translate_swapped(&e, sig, &s2);
        prop_assert!(validate_diagram(&alt, &s2).is_ok());
        if !has_reordered_node(&e, sig) {
            prop_assert_eq!(&alt, &d);
        }
        prop_assert!(decide_eq_diagrams(&d, &alt, &s2).unwrap());
    }
}

#[test]
fn other_whiskering_order_differs_somewhere() {
    let (_, sig) = &signatures()[3];
    let s2 = Sig2::from_signature(sig);
    let differing = (0..200u64)
        .filter(|&seed| {
            let e = random_expr(sig, 6, seed).unwrap();
            translate_swapped(&e, sig, &s2) != translate_expr(&e, sig).unwrap()
        })
        .count();
    assert!(differing > 0);
}
