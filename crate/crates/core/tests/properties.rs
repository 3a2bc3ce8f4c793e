use num_bigint::BigUint;
use proptest::prelude::*;
use scap_core::clique_packing::fcc;
use scap_core::exact::{ind_exact_chromatic, sandwich_check, scap_exact_mis};
use scap_core::graph::generators::{grid, path};
use scap_core::graph::io::{emit, parse, Format};
use scap_core::graph::{
    boundary, cartesian_product, closure, fractional_vertex_cover_halfintegral, induced_subgraph, is_vertex_cover,
    maximum_matching, minimum_vertex_cover, VertexSet,
};
use scap_core::lp::{solve, solve_guided, LinearProgram, LpStatus, Relation, Sense};
use scap_core::planar::round_vc_4_3;
use scap_core::ptas::decompose_with;
use scap_core::rational::{from_usize, int, rat};
use scap_core::{Graph, Rational};

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            Graph::new(n, pairs.zip(bits).filter(|(_, b)| *b).map(|(e, _)| e)).unwrap()
        })
    })
}

/// Random subgraph of the `rows × cols` grid.
fn grid_subgraph(rows: usize, cols: usize) -> impl Strategy<Value = Graph> {
    let base = grid(rows, cols);
    let m = base.m();
    proptest::collection::vec(any::<bool>(), m).prop_map(move |keep| {
        Graph::new(base.n(), base.edges().zip(&keep).filter(|(_, k)| **k).map(|(e, _)| e)).unwrap()
    })
}

fn set_strategy(n: usize) -> impl Strategy<Value = VertexSet> {
    proptest::collection::vec(any::<bool>(), n)
        .prop_map(move |bits| VertexSet::from_vertices(n, (0..n).filter(|&v| bits[v])))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closure_is_extensive_and_monotone(g in graph_strategy(8), seed in any::<u64>()) {
        let n = g.n();
        let s = VertexSet::from_vertices(n, (0..n).filter(|v| seed >> v & 1 == 1));
        let t = VertexSet::from_vertices(n, (0..n).filter(|v| seed >> (v + 8) & 1 == 1)).union(&s);
        let (cs, ct) = (closure(&g, &s), closure(&g, &t));
        prop_assert!(s.is_subset(&cs));
        prop_assert!(cs.is_subset(&ct));
        let bo = boundary(&g, &s, &t);
        prop_assert!(bo.is_subset(&t) && bo.is_disjoint(&s));
        for v in bo.iter() {
            prop_assert!(g.neighbors(v).iter().all(|&w| s.contains(w)));
        }
    }

    #[test]
    fn matching_packing_cover_chain(g in graph_strategy(9)) {
        let mm = from_usize(maximum_matching(&g).len());
        let f = fcc(&g).unwrap().value;
        let vc = from_usize(minimum_vertex_cover(&g).len());
        prop_assert!(mm <= f && f <= vc);
    }

    #[test]
    fn half_integral_cover_is_dual_to_fcc_without_triangles(g in grid_subgraph(3, 4)) {
        let x = fractional_vertex_cover_halfintegral(&g);
        prop_assert!(x.is_feasible(&g));
        prop_assert_eq!(x.total(), fcc(&g).unwrap().value);
    }

    #[test]
    fn rounded_cover_within_four_thirds(g in grid_subgraph(4, 5)) {
        let r = round_vc_4_3(&g).unwrap();
        let cover = VertexSet::from_vertices(g.n(), r.cover.iter().copied());
        prop_assert!(is_vertex_cover(&g, &cover));
        let limit = (rat(4, 3) * &r.fractional).ceil();
        prop_assert!(from_usize(r.cover.len()) <= limit);
        prop_assert!(r.cover.len() >= minimum_vertex_cover(&g).len());
    }

    #[test]
    fn decomposition_contract(g in grid_subgraph(5, 5), cap in 1usize..12, seed in any::<u64>()) {
        let d = decompose_with(&g, &rat(1, 2), cap, seed);
        prop_assert!(d.is_valid(&g));
    }

    #[test]
    fn vertex_removal_costs_at_most_one_symbol_each(g in graph_strategy(5), s in set_strategy(5)) {
        let s = VertexSet::from_vertices(g.n(), s.iter().filter(|&v| v < g.n()));
        let alpha = scap_exact_mis(&g, 2).unwrap().value.arg;
        let keep = s.complement();
        let sub_alpha = if keep.is_empty() {
            BigUint::from(1u32)
        } else {
            scap_exact_mis(&induced_subgraph(&g, &keep).unwrap().graph, 2).unwrap().value.arg
        };
        prop_assert!(sub_alpha <= alpha);
        prop_assert!(alpha <= sub_alpha << s.len());
    }

    #[test]
    fn sandwich_lower_side(g in graph_strategy(4), q in 2u64..=3) {
        let alpha = scap_exact_mis(&g, q).unwrap().value.arg;
        let chi = ind_exact_chromatic(&g, q).unwrap().value.arg;
        prop_assert!(sandwich_check(g.n(), q, &alpha, &chi).lower);
    }

    #[test]
    fn product_shape(a in graph_strategy(5), b in graph_strategy(5)) {
        let p = cartesian_product(&a, &b);
        prop_assert_eq!(p.n(), a.n() * b.n());
        prop_assert_eq!(p.m(), a.n() * b.m() + b.n() * a.m());
    }

    #[test]
    fn io_round_trip(g in graph_strategy(9)) {
        for f in [Format::EdgeList, Format::Dimacs] {
            prop_assert_eq!(parse(&emit(&g, f), f).unwrap(), g.clone());
        }
    }

    #[test]
    fn guided_simplex_agrees_with_exact(
        rows in proptest::collection::vec(proptest::collection::vec(-3i64..=4, 5), 1..6),
        rhs in proptest::collection::vec(0i64..=8, 6),
        obj in proptest::collection::vec(-2i64..=5, 5),
    ) {
        let mut lp = LinearProgram::new(5, Sense::Maximize);
        for (j, &c) in obj.iter().enumerate() {
            lp.set_objective(j, int(c));
        }
        for (i, row) in rows.iter().enumerate() {
            let coeffs = row.iter().enumerate().filter(|(_, &a)| a != 0).map(|(j, &a)| (j, int(a))).collect();
            lp.add_constraint(coeffs, Relation::Le, int(rhs[i]));
        }
        // Keep the program bounded.
        lp.add_constraint((0..5).map(|j| (j, int(1))).collect(), Relation::Le, int(10));
        let (a, b) = (solve(&lp).unwrap(), solve_guided(&lp).unwrap());
        prop_assert_eq!(a.status, LpStatus::Optimal);
        prop_assert_eq!(b.status, LpStatus::Optimal);
        prop_assert_eq!(&a.objective, &b.objective);
        prop_assert!(lp.check(&b.values).is_ok());
    }
}

#[test]
fn removal_of_a_path_end() {
    let g = path(3);
    let sub = induced_subgraph(&g, &VertexSet::from_vertices(3, [0, 1])).unwrap();
    assert_eq!(sub.graph.m(), 1);
    assert_eq!(fcc(&sub.graph).unwrap().value, Rational::from_integer(1.into()));
}
