mod common;

use std::collections::BTreeSet;

use detourkit::{bfs_layers, random_partition, EdgeClass, Graph};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn graph() -> impl Strategy<Value = Graph> {
    (1usize..14).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        let len = pairs.len();
        proptest::collection::vec(any::<bool>(), len).prop_map(move |keep| {
            let edges = pairs.iter().zip(&keep).filter(|(_, &k)| k).map(|(&e, _)| e);
            Graph::new(n, edges).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn bfs_matches_naive(g in graph(), s_pick in any::<usize>()) {
        let s = s_pick % g.n();
        let lg = bfs_layers(&g, s).unwrap();
        prop_assert_eq!(lg.distances().to_vec(), common::naive_distances(g.n(), g.edges(), s));
        for d in 0..=lg.depth() {
            for &v in lg.layer(d) {
                prop_assert_eq!(lg.dist(v), Some(d));
            }
        }
    }

    #[test]
    fn edges_never_skip_layers(g in graph()) {
        let lg = bfs_layers(&g, 0).unwrap();
        let parity = lg.parity_partition();
        for &(u, v) in g.edges() {
            let (Some(du), Some(dv)) = (lg.dist(u), lg.dist(v)) else { continue };
            prop_assert!(du.abs_diff(dv) <= 1);
            let class = lg.classify_edge(u, v).unwrap();
            prop_assert_eq!(class == EdgeClass::Stable, du == dv);
            // forward and backward edges cross the parity partition
            prop_assert_eq!(parity.is_v1(u) != parity.is_v1(v), du != dv);
        }
    }

    #[test]
    fn interval_views_intersect(g in graph(), picks in any::<[usize; 3]>()) {
        let lg = bfs_layers(&g, 0).unwrap();
        let reach: Vec<usize> = (0..g.n()).filter(|&v| lg.dist(v).is_some()).collect();
        let x = reach[picks[0] % reach.len()];
        let dx = lg.dist(x).unwrap();
        let deeper: Vec<usize> = reach.iter().copied().filter(|&v| lg.dist(v).unwrap() > dx).collect();
        prop_assume!(!deeper.is_empty());
        let (y, z) = (deeper[picks[1] % deeper.len()], deeper[picks[2] % deeper.len()]);
        let (y, z) = if lg.dist(y) <= lg.dist(z) { (y, z) } else { (z, y) };
        let vy: BTreeSet<usize> = lg.interval(x, y).unwrap().vertices().iter().copied().collect();
        let vz: BTreeSet<usize> = lg.interval(x, z).unwrap().vertices().iter().copied().collect();
        // G_(x,y] is contained in G_(x,z] for d(y) <= d(z), and both in G_(x,inf)
        prop_assert!(vy.is_subset(&vz));
        let tail: BTreeSet<usize> = lg.tail(x).unwrap().vertices().iter().copied().collect();
        prop_assert!(vz.is_subset(&tail));
        for &v in &vy {
            let dv = lg.dist(v).unwrap();
            prop_assert!(v == x || (dx < dv && dv <= lg.dist(y).unwrap()));
        }
    }

    #[test]
    fn relabeling_preserves_distances(g in graph(), seed in any::<u64>()) {
        let perm = common::random_permutation(g.n(), seed);
        let h = g.relabel(&perm).unwrap();
        let dg = bfs_layers(&g, 0).unwrap();
        let dh = bfs_layers(&h, perm[0]).unwrap();
        for (v, &pv) in perm.iter().enumerate() {
            prop_assert_eq!(dg.dist(v), dh.dist(pv));
        }
    }
}

#[test]
fn random_partition_is_fair() {
    // Each vertex lands in V1 with probability 1/2: over 400 draws on 50
    // vertices the V1 count is Binomial(20000, 1/2), sd ~ 71.
    let g = detourkit::io::path(50);
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut per_vertex = [0usize; 50];
    for _ in 0..400 {
        let part = random_partition(&g, &mut rng);
        for v in part.v1() {
            per_vertex[v] += 1;
        }
    }
    let total: usize = per_vertex.iter().sum();
    assert!((total as i64 - 10_000).abs() < 5 * 71, "total {total}");
    // per vertex Binomial(400, 1/2), sd 10
    assert!(
        per_vertex.iter().all(|&c| (c as i64 - 200).abs() < 60),
        "{per_vertex:?}"
    );
}
