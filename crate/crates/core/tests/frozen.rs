//! Frozen reference values. Each is backed by a closed form or an
//! independent computation noted beside it.

use num_bigint::BigUint;
use scap_core::clique_packing::{fcc, fcc_delta};
use scap_core::entropy::{info_lp_bound, partial_info_lp_bound, LpMode};
use scap_core::exact::{confusion_graph, ind_exact_chromatic, scap_exact_mis};
use scap_core::graph::generators::*;
use scap_core::graph::{maximum_matching, minimum_vertex_cover};
use scap_core::partial::entropy_hq;
use scap_core::rational::{from_usize, int, parse_rational, rat, to_decimal, to_f64};
use num_traits::Signed;
use scap_core::{Graph, Rational};

struct Row {
    name: &'static str,
    g: Graph,
    mm: usize,
    fcc: Rational,
    vc: usize,
    info_lp: Option<Rational>,
}

fn rows() -> Vec<Row> {
    vec![
        // Odd cycles: n/2 on both sides.
        Row { name: "C5", g: cycle(5), mm: 2, fcc: rat(5, 2), vc: 3, info_lp: Some(rat(5, 2)) },
        Row { name: "C7", g: cycle(7), mm: 3, fcc: rat(7, 2), vc: 4, info_lp: Some(rat(7, 2)) },
        Row { name: "C9", g: cycle(9), mm: 4, fcc: rat(9, 2), vc: 5, info_lp: Some(rat(9, 2)) },
        // Cliques: n - 1.
        Row { name: "K4", g: complete(4), mm: 2, fcc: int(3), vc: 3, info_lp: Some(int(3)) },
        // Bipartite: mm = vc.
        Row { name: "P4", g: path(4), mm: 2, fcc: int(2), vc: 2, info_lp: Some(int(2)) },
        Row { name: "K23", g: complete_bipartite(2, 3), mm: 2, fcc: int(2), vc: 2, info_lp: Some(int(2)) },
        Row { name: "grid3x3", g: grid(3, 3), mm: 4, fcc: int(4), vc: 4, info_lp: Some(int(4)) },
        // Perfect matching, triangle-free.
        Row { name: "petersen", g: petersen(), mm: 5, fcc: int(5), vc: 6, info_lp: None },
    ]
}

#[test]
fn bound_table() {
    for r in rows() {
        assert_eq!(maximum_matching(&r.g).len(), r.mm, "{}", r.name);
        assert_eq!(fcc(&r.g).unwrap().value, r.fcc, "{}", r.name);
        assert_eq!(minimum_vertex_cover(&r.g).len(), r.vc, "{}", r.name);
        if let Some(v) = r.info_lp {
            assert_eq!(info_lp_bound(&r.g, &LpMode::Full).unwrap(), v, "{}", r.name);
        }
    }
}

#[test]
fn confusion_graph_table() {
    // (graph, edges, α, χ) for q = 2, counted by a direct scan of word pairs.
    let table: [(Graph, usize, u32, u32); 5] = [
        (complete(2), 4, 2, 2),
        (complete(3), 12, 4, 2),
        (cycle(4), 48, 4, 4),
        (cycle(5), 240, 5, 8),
        (path(3), 16, 2, 4),
    ];
    for (g, edges, alpha, chi) in table {
        let bg = confusion_graph(&g, 2).unwrap().materialize().unwrap();
        assert_eq!(bg.edge_count(), edges);
        assert_eq!(scap_exact_mis(&g, 2).unwrap().value.arg, BigUint::from(alpha));
        assert_eq!(ind_exact_chromatic(&g, 2).unwrap().value.arg, BigUint::from(chi));
    }
}

#[test]
fn binary_entropy_reference() {
    // 50-digit reference values.
    let tenth = entropy_hq(2, &rat(1, 10), 45).unwrap();
    let r = parse_rational("0.46899559358928122125358933038332046009716545917811").unwrap();
    assert!((&tenth.mid() - &r).abs() < Rational::new(1.into(), BigUint::from(10u32).pow(44).into()));
    let twentieth = entropy_hq(2, &rat(1, 20), 40).unwrap();
    let r = parse_rational("0.286396957115956128766475977727897474306").unwrap();
    assert!((&twentieth.mid() - &r).abs() < Rational::new(1.into(), BigUint::from(10u32).pow(38).into()));
    assert!(to_decimal(&twentieth.mid(), 30).starts_with("0.286396957115956128766475977727"));
}

#[test]
fn partial_values() {
    // n/2 (2 - h_2(1/10)) for the 5-cycle.
    let p = fcc_delta(&cycle(5), 2, &rat(1, 10), 40).unwrap();
    assert!((to_f64(&p.value) - 3.827511016026797).abs() < 1e-13);
    // n/2 (1 + R) at R = 1/2.
    assert_eq!(partial_info_lp_bound(&cycle(5), &rat(1, 2), &LpMode::Full).unwrap(), rat(15, 4));
    assert_eq!(partial_info_lp_bound(&cycle(5), &int(1), &LpMode::Full).unwrap(), from_usize(5));
}

#[test]
fn edgeless_entropy_lp_is_zero() {
    // Every vertex lies in the closure of the empty set.
    assert_eq!(info_lp_bound(&Graph::empty(3), &LpMode::Full).unwrap(), int(0));
}
