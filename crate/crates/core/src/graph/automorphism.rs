//! Graph automorphisms and the orbits they induce on vertex subsets.

use super::Graph;

/// Generators of the automorphism group: for each prefix `0..i` fixed
/// pointwise, one automorphism mapping `i` to each vertex of its orbit
/// (a transversal of a stabilizer chain).
pub fn automorphism_generators(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.n();
    let sig: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut gens = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if sig[i] != sig[j] {
                continue;
            }
            let mut perm = vec![usize::MAX; n];
            let mut used = vec![false; n];
            for k in 0..i {
                perm[k] = k;
                used[k] = true;
            }
            perm[i] = j;
            used[j] = true;
            if !consistent(g, &perm, i) {
                continue;
            }
            if extend(g, &sig, &mut perm, &mut used, i + 1) {
                gens.push(perm);
            }
        }
    }
    gens
}

fn consistent(g: &Graph, perm: &[usize], k: usize) -> bool {
    (0..k).all(|u| g.has_edge(u, k) == g.has_edge(perm[u], perm[k]))
}

fn extend(g: &Graph, sig: &[usize], perm: &mut [usize], used: &mut [bool], k: usize) -> bool {
    if k == g.n() {
        return true;
    }
    for t in 0..g.n() {
        if used[t] || sig[t] != sig[k] {
            continue;
        }
        perm[k] = t;
        if consistent(g, perm, k) {
            used[t] = true;
            if extend(g, sig, perm, used, k + 1) {
                return true;
            }
            used[t] = false;
        }
    }
    perm[k] = usize::MAX;
    false
}

pub fn is_automorphism(g: &Graph, perm: &[usize]) -> bool {
    let mut seen = vec![false; g.n()];
    perm.len() == g.n()
        && perm.iter().all(|&p| p < g.n() && !std::mem::replace(&mut seen[p], true))
        && g.edges().all(|(u, v)| g.has_edge(perm[u], perm[v]))
}

pub fn apply_to_mask(perm: &[usize], mask: u64) -> u64 {
    let mut out = 0;
    let mut m = mask;
    while m != 0 {
        let v = m.trailing_zeros() as usize;
        m &= m - 1;
        out |= 1 << perm[v];
    }
    out
}

/// `orbit[mask]` is the smallest mask in the orbit of `mask` under the
/// automorphism group; `n <= 20`.
pub fn subset_orbits(g: &Graph) -> Vec<u32> {
    let n = g.n();
    assert!(n <= 20, "subset orbits are limited to n <= 20");
    let size = 1usize << n;
    let mut parent: Vec<u32> = (0..size as u32).collect();
    fn find(parent: &mut [u32], mut x: u32) -> u32 {
        while parent[x as usize] != x {
            parent[x as usize] = parent[parent[x as usize] as usize];
            x = parent[x as usize];
        }
        x
    }
    for perm in automorphism_generators(g) {
        for s in 0..size {
            let t = apply_to_mask(&perm, s as u64) as usize;
            let (a, b) = (find(&mut parent, s as u32), find(&mut parent, t as u32));
            if a != b {
                // The smaller root wins, so roots are orbit minima.
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                parent[hi as usize] = lo;
            }
        }
    }
    (0..size as u32).map(|s| find(&mut parent, s)).collect()
}

#[cfg(test)]
mod tests {
    use super::super::generators::*;
    use super::*;

    fn group_order(g: &Graph) -> usize {
        // Orbit-stabilizer along the chain: product of transversal sizes.
        let gens = automorphism_generators(g);
        (0..g.n())
            .map(|i| 1 + gens.iter().filter(|p| p[..i].iter().enumerate().all(|(k, &x)| k == x) && p[i] != i).count())
            .product()
    }

    #[test]
    fn generators_are_automorphisms() {
        for g in [cycle(5), petersen(), grid(3, 3), complete(4), path(5)] {
            for p in automorphism_generators(&g) {
                assert!(is_automorphism(&g, &p));
            }
        }
    }

    #[test]
    fn group_orders() {
        assert_eq!(group_order(&cycle(5)), 10);
        assert_eq!(group_order(&petersen()), 120);
        assert_eq!(group_order(&complete(4)), 24);
        assert_eq!(group_order(&path(4)), 2);
        assert_eq!(group_order(&grid(3, 3)), 8);
    }

    #[test]
    fn orbit_counts() {
        // Subsets of C5 up to rotation and reflection: the necklace count 8.
        let orbits = subset_orbits(&cycle(5));
        let mut reps: Vec<u32> = orbits.clone();
        reps.sort_unstable();
        reps.dedup();
        assert_eq!(reps.len(), 8);
        assert!(orbits.iter().enumerate().all(|(s, &r)| r as usize <= s));
    }
}
