//! Graph corpora for cross-validation: seeded random connected multigraphs
//! and exhaustive enumeration of small connected multigraphs up to
//! isomorphism. These back the randomized identity checks and the
//! exhaustive bound sweeps in the integration tests.

use rand::Rng;

use crate::graph::Multigraph;

/// A uniformly seeded random connected multigraph with exactly `n`
/// vertices and `m >= n - 1` edges: a random spanning tree plus uniformly
/// random extra edges (parallel edges allowed, loops not).
pub fn random_connected_multigraph<R: Rng>(rng: &mut R, n: usize, m: usize) -> Multigraph {
    assert!(n >= 1, "need at least one vertex");
    assert!(n == 1 || m + 1 >= n, "too few edges to connect {n} vertices");
    let mut edges = Vec::with_capacity(m);
    for v in 1..n {
        let u = rng.gen_range(0..v);
        edges.push((u, v));
    }
    while edges.len() < m {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v {
            edges.push((u.min(v), u.max(v)));
        }
    }
    Multigraph::new(n, edges).expect("edges validated here")
}

/// Canonical form of a loopless multigraph: the lexicographically smallest
/// sorted edge list over all relabelings of the vertices.
fn canonical_edges(n: usize, edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<Vec<(usize, usize)>> = None;
    permute(&mut perm, 0, &mut |p| {
        let mut relabeled: Vec<(usize, usize)> = edges
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (p[u], p[v]);
                (a.min(b), a.max(b))
            })
            .collect();
        relabeled.sort_unstable();
        if best.as_ref().map_or(true, |b| relabeled < *b) {
            best = Some(relabeled);
        }
    });
    best.unwrap()
}

fn permute<F: FnMut(&[usize])>(items: &mut Vec<usize>, k: usize, visit: &mut F) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// Every connected loopless multigraph with exactly `n` vertices and `m`
/// edges, one representative per isomorphism class. Enumerates edge
/// multisets over the unordered vertex pairs and deduplicates by canonical
/// relabeling, so it is only practical for small `n`.
pub fn enumerate_connected_multigraphs(n: usize, m: usize) -> Vec<Multigraph> {
    if n == 1 {
        return if m == 0 { vec![Multigraph::new(1, vec![]).unwrap()] } else { vec![] };
    }
    if m + 1 < n {
        return vec![];
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    // Multisets of size m over `pairs`, as non-decreasing index sequences.
    let mut choice = vec![0usize; m];
    loop {
        let edges: Vec<(usize, usize)> = choice.iter().map(|&i| pairs[i]).collect();
        let g = Multigraph::new(n, edges.clone()).unwrap();
        if g.is_connected() && seen.insert(canonical_edges(n, &edges)) {
            out.push(g);
        }
        // Advance to the next non-decreasing sequence.
        let mut pos = m;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            if choice[pos] + 1 < pairs.len() {
                let next = choice[pos] + 1;
                for slot in choice.iter_mut().skip(pos) {
                    *slot = next;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_graphs_are_connected_with_requested_size() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let n = rng.gen_range(2..=7);
            let m = rng.gen_range(n - 1..=10.max(n - 1));
            let g = random_connected_multigraph(&mut rng, n, m);
            assert_eq!(g.n(), n);
            assert_eq!(g.m(), m);
            assert!(g.is_connected());
        }
    }

    #[test]
    fn enumeration_counts_match_known_values() {
        // Connected loopless multigraphs up to isomorphism.
        assert_eq!(enumerate_connected_multigraphs(2, 1).len(), 1); // an edge
        assert_eq!(enumerate_connected_multigraphs(2, 3).len(), 1); // triple edge
        assert_eq!(enumerate_connected_multigraphs(3, 2).len(), 1); // path
        assert_eq!(enumerate_connected_multigraphs(3, 3).len(), 2); // triangle, doubled-edge path
        assert_eq!(enumerate_connected_multigraphs(4, 3).len(), 2); // path, star
        assert_eq!(enumerate_connected_multigraphs(3, 4).len(), 3);
        assert_eq!(enumerate_connected_multigraphs(4, 2).len(), 0); // cannot connect
        assert_eq!(enumerate_connected_multigraphs(1, 0).len(), 1);
    }

    #[test]
    fn enumeration_has_no_isomorphic_duplicates() {
        // Spot-check: every returned graph has a distinct canonical form
        // (by construction), and sizes are as requested.
        for g in enumerate_connected_multigraphs(4, 5) {
            assert_eq!(g.n(), 4);
            assert_eq!(g.m(), 5);
            assert!(g.is_connected());
        }
    }
}
