#![allow(dead_code)]

use std::collections::VecDeque;

use detourkit::{bfs_layers, io, Graph};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const EDGE_PROBS: [f64; 3] = [0.25, 0.4, 0.6];

/// `G(n, p)` resampled until every vertex is reachable from 0.
pub fn connected_gnp(n: usize, p: f64, seed: u64) -> Graph {
    let mut s = seed;
    loop {
        let g = io::gnp(n, p, s).unwrap();
        if bfs_layers(&g, 0)
            .unwrap()
            .distances()
            .iter()
            .all(Option::is_some)
        {
            return g;
        }
        s = s
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
    }
}

/// Connected graphs with `n` in `lo..=hi` and `p` cycling through [`EDGE_PROBS`].
pub fn random_suite(count: usize, lo: usize, hi: usize, seed: u64) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let n = rng.gen_range(lo..=hi);
            connected_gnp(n, EDGE_PROBS[i % EDGE_PROBS.len()], rng.gen())
        })
        .collect()
}

/// Every connected graph on exactly `n` labeled vertices.
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    (0u64..1 << pairs.len())
        .map(|mask| {
            Graph::new(
                n,
                pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &e)| e),
            )
        })
        .map(Result::unwrap)
        .filter(|g| {
            n == 0
                || bfs_layers(g, 0)
                    .unwrap()
                    .distances()
                    .iter()
                    .all(Option::is_some)
        })
        .collect()
}

/// Hop distances by plain queue BFS over an edge list.
pub fn naive_distances(n: usize, edges: &[(usize, usize)], s: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; n];
    dist[s] = Some(0);
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        for &(a, b) in edges {
            let w = if a == u {
                b
            } else if b == u {
                a
            } else {
                continue;
            };
            if dist[w].is_none() {
                dist[w] = Some(dist[u].unwrap() + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

pub fn random_permutation(n: usize, seed: u64) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    perm
}
