//! Acceptance run: one line per criterion. Criteria listed in
//! `EXPECTED_FAIL` are known to be unattainable as stated; the run fails
//! only on an unexpected outcome.

use num_bigint::BigUint;
use num_traits::Signed;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use scap_cli::bounds_report;
use scap_core::clique_packing::{build_storage_code, code_rate, fcc, verify_storage_code};
use scap_core::entropy::gadget::{c9_cover, CoverSpec, CoverViolation, GadgetCover};
use scap_core::entropy::{find_partition, info_lp_bound, verify_gadget_cover, LpMode};
use scap_core::exact::{ind_exact_chromatic, sandwich_check, scap_exact_mis, scap_exact_recovery_enum, SideCheck};
use scap_core::graph::generators::*;
use scap_core::graph::io::parse_edge_list;
use scap_core::graph::{cartesian_product, induced_subgraph, is_vertex_cover, VertexSet};
use scap_core::partial::{delta_grid, partial_bounds, sweep, UpperModel, DEFAULT_DIGITS};
use scap_core::planar::round_vc_4_3;
use scap_core::ptas::{decompose, ptas_scap};
use scap_core::rational::{from_usize, int, rat, to_decimal, to_f64};
use scap_core::{Graph, Rational};
use std::time::{Duration, Instant};

/// Criteria whose statement cannot hold for every listed input.
const EXPECTED_FAIL: &[u32] = &[3];

/// Agreement between closed forms and the LP pipeline, and enclosure width.
fn enclosure_tol() -> Rational {
    Rational::new(1.into(), 10_000_000_000u64.into())
}

const GRID_SUBGRAPHS: usize = 20;
const GRID_SEED: u64 = 2024;
const GRID_KEEP: f64 = 0.7;
const DELTA_POINTS: usize = 101;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1() -> Check {
    for n in [5, 7, 9] {
        let t = Instant::now();
        let (r, _) = bounds_report(&cycle(n), None, None).map_err(|e| e.to_string())?;
        let half = from_usize(n) / from_usize(2);
        ensure(r.best_lower == half && r.best_upper == half, || {
            format!("C{n}: [{}, {}]", r.best_lower, r.best_upper)
        })?;
        ensure(t.elapsed() < Duration::from_secs(10), || format!("C{n} took {:?}", t.elapsed()))?;
    }
    Ok("C5, C7, C9 give n/2 on both sides".into())
}

fn c2() -> Check {
    let mut count = 0;
    for n in 1..=4 {
        for g in connected_graphs(n) {
            let mis = scap_exact_mis(&g, 2).map_err(|e| e.to_string())?;
            let en = scap_exact_recovery_enum(&g, 2).map_err(|e| e.to_string())?;
            ensure(mis.value == en.value, || format!("{g:?}: {} vs {}", mis.value.arg, en.value.arg))?;
            ensure(mis.verify(&g) && en.verify(&g), || format!("{g:?}: witness rejected"))?;
            count += 1;
        }
    }
    Ok(format!("{count} connected graphs agree"))
}

fn c3() -> Check {
    let mut cases: Vec<(String, Graph)> = Vec::new();
    for n in 1..=4 {
        for (i, g) in connected_graphs(n).into_iter().enumerate() {
            cases.push((format!("n{n}#{i}"), g));
        }
    }
    cases.push(("C5".into(), cycle(5)));
    let mut failures = Vec::new();
    for (name, g) in &cases {
        let alpha = scap_exact_mis(g, 2).map_err(|e| e.to_string())?.value.arg;
        let chi = ind_exact_chromatic(g, 2).map_err(|e| e.to_string())?.value.arg;
        let s = sandwich_check(g.n(), 2, &alpha, &chi);
        ensure(s.lower, || format!("{name}: lower side fails"))?;
        if s.upper != SideCheck::Holds {
            failures.push(format!("{name} (alpha={alpha}, chi={chi}) upper side {:?}", s.upper));
        }
    }
    if failures.is_empty() {
        Ok(format!("both sides hold on {} pairs", cases.len()))
    } else {
        Err(format!("lower side holds on all {} pairs; {}", cases.len(), failures.join("; ")))
    }
}

fn c4() -> Check {
    let t = Instant::now();
    for (name, g) in [("C5", cycle(5)), ("C9", cycle(9)), ("K4", complete(4)), ("Petersen", petersen())] {
        let p = fcc(&g).map_err(|e| e.to_string())?;
        let code = build_storage_code(&g, &p).map_err(|e| e.to_string())?;
        ensure(verify_storage_code(&g, &code), || format!("{name}: code rejected"))?;
        ensure(code_rate(&code) == Some(p.value.clone()), || format!("{name}: rate {:?} vs {}", code_rate(&code), p.value))?;
    }
    ensure(t.elapsed() < Duration::from_secs(30), || format!("took {:?}", t.elapsed()))?;
    Ok("codes verify at the LP rate".into())
}

/// Twice the maximum fractional matching: the matching number of the
/// bipartite double cover, by augmenting paths.
fn fractional_matching_twice(g: &Graph) -> usize {
    fn augment(g: &Graph, u: usize, seen: &mut [bool], right: &mut [Option<usize>]) -> bool {
        for &v in g.neighbors(u) {
            if !seen[v] {
                seen[v] = true;
                if right[v].is_none_or(|w| augment(g, w, seen, right)) {
                    right[v] = Some(u);
                    return true;
                }
            }
        }
        false
    }
    let mut right = vec![None; g.n()];
    (0..g.n()).filter(|&u| augment(g, u, &mut vec![false; g.n()], &mut right)).count()
}

/// Minimum vertex cover by branching on an endpoint of an uncovered edge.
fn branching_vc(edges: &[(usize, usize)], taken: u64, size: usize, best: &mut usize) {
    if size >= *best {
        return;
    }
    match edges.iter().find(|&&(u, v)| taken >> u & 1 == 0 && taken >> v & 1 == 0) {
        None => *best = size,
        Some(&(u, v)) => {
            branching_vc(edges, taken | 1 << u, size + 1, best);
            branching_vc(edges, taken | 1 << v, size + 1, best);
        }
    }
}

fn c5() -> Check {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(GRID_SEED);
    let base = grid(5, 5);
    for i in 0..GRID_SUBGRAPHS {
        let g = random_subgraph(&base, GRID_KEEP, &mut rng);
        let f = fcc(&g).map_err(|e| e.to_string())?.value;
        let fm = from_usize(fractional_matching_twice(&g)) / from_usize(2);
        ensure(f == fm, || format!("#{i}: fcc {f} vs fractional matching {fm}"))?;
        let r = round_vc_4_3(&g).map_err(|e| e.to_string())?;
        let cover = VertexSet::from_vertices(g.n(), r.cover.iter().copied());
        ensure(is_vertex_cover(&g, &cover), || format!("#{i}: rounding is not a cover"))?;
        let limit = (rat(4, 3) * &r.fractional).ceil();
        ensure(from_usize(r.cover.len()) <= limit, || format!("#{i}: {} > {limit}", r.cover.len()))?;
        let edges: Vec<_> = g.edges().collect();
        let mut vc = g.n();
        branching_vc(&edges, 0, 0, &mut vc);
        ensure(f <= from_usize(vc), || format!("#{i}: fcc {f} > vc {vc}"))?;
    }
    ensure(t.elapsed() < Duration::from_secs(120), || format!("took {:?}", t.elapsed()))?;
    Ok(format!("{GRID_SUBGRAPHS} grid subgraphs"))
}

fn c6() -> Check {
    let t = Instant::now();
    let g = grid(10, 10);
    let eps = rat(1, 2);
    let d = decompose(&g, &eps).map_err(|e| e.to_string())?;
    ensure(d.is_valid(&g), || "decomposition violates its contract".into())?;
    let removed = d.removed.len();
    let r = ptas_scap(&g, 2, &eps).map_err(|e| e.to_string())?;
    let f = fcc(&g).map_err(|e| e.to_string())?.value;
    let need = &f - from_usize(r.decomposition.removed.len());
    ensure(r.value.at_least(&need), || format!("value {} + |V0| below fcc {f}", r.value_f64()))?;
    let mut pairs = 0;
    for n in 1..=5 {
        for g in all_graphs(n) {
            let alpha = scap_exact_mis(&g, 2).map_err(|e| e.to_string())?.value.arg;
            for mask in 1u64..1 << n {
                let s = VertexSet::from_mask(n, mask);
                let keep = s.complement();
                let sub = if keep.is_empty() {
                    BigUint::from(1u32)
                } else {
                    let h = induced_subgraph(&g, &keep).map_err(|e| e.to_string())?.graph;
                    scap_exact_mis(&h, 2).map_err(|e| e.to_string())?.value.arg
                };
                ensure(sub <= alpha && alpha <= &sub << s.len(), || format!("{g:?} minus {:?}", s.to_vec()))?;
                pairs += 1;
            }
        }
    }
    ensure(t.elapsed() < Duration::from_secs(300), || format!("took {:?}", t.elapsed()))?;
    Ok(format!(
        "cap {}, |V0| = {removed}, {} components; vertex removal bound on {pairs} pairs",
        d.cap,
        d.components.len()
    ))
}

fn c7() -> Check {
    let t = Instant::now();
    let c9 = cycle(9);
    let cover = c9_cover(&c9);
    let cert = verify_gadget_cover(&c9, &cover).map_err(|e| e.to_string())?;
    ensure(cert.bound == rat(9, 2), || format!("C9 cover bound {}", cert.bound))?;
    for drop in 0..cover.gadgets.len() {
        let mut gadgets = cover.gadgets.clone();
        gadgets.remove(drop);
        let mutated = GadgetCover { k: cover.k, gadgets };
        match verify_gadget_cover(&c9, &mutated) {
            Err(CoverViolation::Uncovered { edge, .. }) => ensure(c9.has_edge(edge.0, edge.1), || "named edge absent".into())?,
            other => return Err(format!("dropping gadget {drop}: {other:?}")),
        }
    }
    let prism = cartesian_product(&cycle(5), &complete(2));
    let chorded = cycle_with_chords(12, &[(0, 5)]).map_err(|e| e.to_string())?;
    for (name, g, bound) in [("C5xK2", prism, int(5)), ("C12+chord", chorded, int(6))] {
        let p = find_partition(&g).map_err(|e| format!("{name}: {e}"))?;
        ensure(p.bound == bound, || format!("{name}: bound {}", p.bound))?;
        let f = fcc(&g).map_err(|e| e.to_string())?.value;
        ensure(f == bound, || format!("{name}: fcc {f}"))?;
    }
    ensure(t.elapsed() < Duration::from_secs(60), || format!("took {:?}", t.elapsed()))?;
    Ok("C9 cover 9/2, mutations rejected, partitions give 5 and 6".into())
}

fn c8() -> Check {
    let t = Instant::now();
    let mut small = 0;
    for n in 1..=5 {
        for g in connected_graphs(n) {
            let lp = info_lp_bound(&g, &LpMode::Full).map_err(|e| e.to_string())?;
            let scap = scap_exact_mis(&g, 2).map_err(|e| e.to_string())?.value;
            ensure(scap.at_most(&lp), || format!("{g:?}: scap {} above LP {lp}", scap.to_f64()))?;
            let vc = scap_core::graph::minimum_vertex_cover(&g).len();
            ensure(lp <= from_usize(vc), || format!("{g:?}: LP {lp} above vc {vc}"))?;
            small += 1;
        }
    }
    let mut bip = 0;
    for n in 2..=8 {
        for g in connected_bipartite_graphs(n) {
            let lp = info_lp_bound(&g, &LpMode::Full).map_err(|e| e.to_string())?;
            let mm = scap_core::graph::maximum_matching(&g).len();
            let vc = scap_core::graph::minimum_vertex_cover(&g).len();
            ensure(mm == vc && lp == from_usize(mm), || format!("{g:?}: LP {lp}, mm {mm}, vc {vc}"))?;
            bip += 1;
        }
    }
    ensure(t.elapsed() < Duration::from_secs(600), || format!("took {:?}", t.elapsed()))?;
    Ok(format!("{small} connected graphs, {bip} bipartite graphs"))
}

fn c9() -> Check {
    let t = Instant::now();
    let tol = enclosure_tol();
    let mut worst = Rational::from_integer(0.into());
    for (name, g) in [("C5", cycle(5)), ("C9", cycle(9)), ("K4", complete(4))] {
        let n = from_usize(g.n());
        let r0 = partial_bounds(&g, 2, &int(0)).map_err(|e| e.to_string())?;
        ensure(r0.lower.value == n && r0.best_upper() == n, || format!("{name}: delta 0 gives [{}, {}]", r0.lower.value, r0.best_upper()))?;
        let lp = info_lp_bound(&g, &LpMode::Full).map_err(|e| e.to_string())?;
        let f = fcc(&g).map_err(|e| e.to_string())?.value;
        for d in [rat(1, 2), rat(3, 4), int(1)] {
            let r = partial_bounds(&g, 2, &d).map_err(|e| e.to_string())?;
            let p = &r.upper(UpperModel::Plotkin).ok_or("no Plotkin entry")?.bound;
            ensure(p.value == lp && p.error == Rational::from_integer(0.into()), || format!("{name} at {d}: Plotkin {} vs LP {lp}", p.value))?;
            ensure(r.lower.value == f && r.lower.hi() >= f && r.lower.lo() <= f, || format!("{name} at {d}: lower {} vs fcc {f}", r.lower.value))?;
        }
        let reports = sweep(&g, 2, &delta_grid(DELTA_POINTS), DEFAULT_DIGITS).map_err(|e| e.to_string())?;
        for r in &reports {
            ensure(r.consistent(), || format!("{name} at {}: lower above an upper", r.delta))?;
            let Some(closed) = &r.odd_cycle else { continue };
            for c in closed {
                let u = &r.upper(c.model).ok_or("missing model")?.bound;
                for gap in [
                    (c.upper.mid() - &u.value).abs(),
                    u.error.clone(),
                    c.upper.width(),
                    (c.lower.mid() - &r.lower.value).abs(),
                    r.lower.error.clone(),
                    c.lower.width(),
                ] {
                    worst = worst.max(gap);
                }
            }
        }
    }
    ensure(worst < tol, || format!("closed forms differ by {}", to_decimal(&worst, 14)))?;
    ensure(t.elapsed() < Duration::from_secs(300), || format!("took {:?}", t.elapsed()))?;
    Ok(format!("endpoints, collapse and {DELTA_POINTS}-point sweeps; closed forms within {:.1e}", to_f64(&worst)))
}


fn c10() -> Check {
    println!("INFO 10  asymptotic planar ratio optimality: not testable at desk scale");
    println!("INFO 10  true value of R_q(delta): open; only Singleton, Plotkin and Hamming upper models are reported");
    let g = parse_edge_list(include_str!("../../core/data/outerplanar9.edges")).map_err(|e| e.to_string())?;
    let spec: CoverSpec = serde_json::from_str(include_str!("../../core/data/outerplanar9_cover.json")).map_err(|e| e.to_string())?;
    let cover = spec.build(&g).map_err(|e| e.to_string())?;
    let cert = verify_gadget_cover(&g, &cover).map_err(|e| e.to_string())?;
    let f = fcc(&g).map_err(|e| e.to_string())?.value;
    let target = rat(14, 3);
    ensure(cert.bound == target && f == target, || format!("cover {} fcc {f}", cert.bound))?;
    Ok("conditional: reconstructed 9-vertex outerplanar graph gives 14/3 on both sides".into())
}

fn main() {
    let criteria: [(u32, &str, fn() -> Check); 10] = [
        (1, "odd-cycle capacity", c1),
        (2, "exact-method agreement", c2),
        (3, "sandwich inequality", c3),
        (4, "storage code realization", c4),
        (5, "planar approximation", c5),
        (6, "separator decomposition", c6),
        (7, "cover and partition certificates", c7),
        (8, "entropy LP", c8),
        (9, "partial recovery", c9),
        (10, "conditional results", c10),
    ];
    let mut unexpected = 0;
    for (id, name, f) in criteria {
        let t = Instant::now();
        let outcome = f();
        let secs = t.elapsed().as_secs_f64();
        let expect_fail = EXPECTED_FAIL.contains(&id);
        let (tag, detail) = match (&outcome, expect_fail) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Err(d), true) => ("FAIL (expected)", d.clone()),
            (Ok(d), true) => ("PASS (unexpected)", d.clone()),
            (Err(d), false) => ("FAIL", d.clone()),
        };
        if outcome.is_ok() == expect_fail {
            unexpected += 1;
        }
        println!("{tag:<17} {id:>2}  {name} [{secs:.2}s]: {detail}");
    }
    if unexpected > 0 {
        println!("{unexpected} unexpected outcome(s)");
        std::process::exit(1);
    }
}
