//! Brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use blockadelab::model::{BlockadeGraph, Configuration, Language};
use rand::Rng;

/// Maximum weight and all maximum-weight independent sets, by trying every subset.
pub fn brute_force_mwis(g: &BlockadeGraph) -> (u64, Language) {
    let n = g.n();
    let mut best = 0u64;
    let mut winners = Vec::new();
    for m in 0u32..1 << n {
        if g.edges().iter().any(|&(a, b)| m >> a & 1 == 1 && m >> b & 1 == 1) {
            continue;
        }
        let w: u64 = (0..n).filter(|&v| m >> v & 1 == 1).map(|v| g.weight(v) as u64).sum();
        if w > best {
            best = w;
            winners.clear();
        }
        if w == best {
            winners.push(Configuration::from_excited(n, (0..n).filter(|&v| m >> v & 1 == 1)));
        }
    }
    (best, Language::new(winners).unwrap())
}

/// Counts weight- and adjacency-preserving permutations among all `n!`.
pub fn brute_force_automorphisms(g: &BlockadeGraph) -> u64 {
    fn extend(g: &BlockadeGraph, image: &mut Vec<usize>, used: &mut [bool]) -> u64 {
        let v = image.len();
        if v == g.n() {
            return 1;
        }
        let mut count = 0;
        for w in 0..g.n() {
            if used[w] || g.weight(v) != g.weight(w) {
                continue;
            }
            if (0..v).any(|u| g.has_edge(u, v) != g.has_edge(image[u], w)) {
                continue;
            }
            used[w] = true;
            image.push(w);
            count += extend(g, image, used);
            image.pop();
            used[w] = false;
        }
        count
    }
    extend(g, &mut Vec::new(), &mut vec![false; g.n()])
}

/// Random graph on 1..=max_n vertices with weights in 1..=max_weight and a random edge density.
pub fn random_graph(rng: &mut impl Rng, max_n: usize, max_weight: u32) -> BlockadeGraph {
    let n = rng.gen_range(1..=max_n);
    let density: f64 = rng.gen_range(0.05..0.8);
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .filter(|_| rng.gen_bool(density))
        .collect();
    let weights = (0..n).map(|_| rng.gen_range(1..=max_weight)).collect();
    BlockadeGraph::new(n, edges, weights).unwrap()
}
