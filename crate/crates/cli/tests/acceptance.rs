//! Acceptance criteria 1-8. Prints one PASS/FAIL line per criterion.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::process::Command;
use std::time::Instant;

use detourkit::field64::{mul_hardware, mul_portable};
use detourkit::oracle::{
    self, labeled_walk_sum, AssignmentVars, OracleLimits, PathRecord, WalkFilter,
};
use detourkit::{
    bfs_layers, detour, dp_state_count, random_partition, sieve, Alpha, DetourQuery, FieldElem,
    Graph,
};
use detourkit::{SieveQuery, Strategy, VarAssignment};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn feasible(len: usize, k1: usize, l2: usize) -> bool {
    len + 1 >= k1 + 2 * l2
}

fn c1_field() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xf1e1d);
    let mut bad = 0u64;
    for _ in 0..100_000 {
        let (a, b, c) = (
            FieldElem(rng.gen()),
            FieldElem(rng.gen()),
            FieldElem(rng.gen()),
        );
        bad += ((a * b) * c != a * (b * c)) as u64;
        bad += (a * (b + c) != a * b + a * c) as u64;
        if !a.is_zero() {
            bad += (a * a.inverse().unwrap() != FieldElem::ONE) as u64;
        }
        let mut x = a;
        for _ in 0..64 {
            x = x.square();
        }
        bad += (x != a) as u64;
    }
    let mut mismatches = 0u64;
    let mut hardware = false;
    for _ in 0..1_000_000 {
        let (a, b) = (FieldElem(rng.gen()), FieldElem(rng.gen()));
        if let Some(h) = mul_hardware(a, b) {
            hardware = true;
            mismatches += (h != mul_portable(a, b)) as u64;
        }
    }
    let path = if hardware {
        "hardware multiply present"
    } else {
        "no hardware multiply on this CPU"
    };
    outcome(
        bad == 0 && mismatches == 0,
        format!("{bad} identity failures in 1e5 rounds, {mismatches} of 1e6 pairs differ ({path})"),
    )
}

fn c2_sieve_exhaustive() -> Outcome {
    let mut graphs: Vec<Graph> = (1..=5).flat_map(common::connected_graphs).collect();
    let exhaustive = graphs.len();
    let six = common::connected_graphs(6);
    let mut rng = ChaCha8Rng::seed_from_u64(0xc2);
    for _ in 0..5000 {
        graphs.push(six[rng.gen_range(0..six.len())].clone());
    }
    let (mut queries, mut fp, mut fneg, mut yes) = (0u64, 0u64, 0u64, 0u64);
    for g in &graphs {
        let lg = bfs_layers(g, 0).unwrap();
        let view = lg.full_view();
        let partition = lg.parity_partition();
        let truth =
            oracle::signatures_from(&view, 0, &partition, 7, OracleLimits::UNLIMITED).unwrap();
        for t in 0..g.n() {
            for len in 0..=7 {
                for k1 in 0..=len + 1 {
                    for l2 in (0..=len).filter(|&l2| feasible(len, k1, l2)) {
                        let q = SieveQuery {
                            view: &view,
                            partition: &partition,
                            from: 0,
                            to: t,
                            len,
                            k1,
                            l2,
                        };
                        let got = sieve::decide(&q, &mut rng, 1).unwrap();
                        let want = truth.contains(&(t, len, k1, l2));
                        queries += 1;
                        yes += want as u64;
                        fp += (got && !want) as u64;
                        fneg += (!got && want) as u64;
                    }
                }
            }
        }
    }
    outcome(
        fp == 0 && fneg == 0,
        format!(
            "{exhaustive} graphs on <= 5 vertices plus 5000 sampled on 6, {queries} queries ({yes} yes): {fp} false positives, {fneg} false negatives"
        ),
    )
}

fn c3_cancellation() -> Outcome {
    let guarded = WalkFilter {
        simple_only: false,
        no_immediate_return: true,
    };
    let simple = WalkFilter {
        simple_only: true,
        no_immediate_return: false,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0xc3);
    let (mut checks, mut unequal, mut cancelled) = (0u64, 0u64, 0u64);
    for g in common::random_suite(200, 3, 7, 0xc3) {
        let lg = bfs_layers(&g, 0).unwrap();
        let view = lg.full_view();
        let partition = random_partition(&g, &mut rng);
        for _ in 0..5 {
            let t = rng.gen_range(0..g.n());
            let len = rng.gen_range(1..=6);
            let (k1, l2) = loop {
                let k1 = rng.gen_range(0..=len + 1);
                let l2 = rng.gen_range(0..=(len + 1 - k1) / 2);
                if feasible(len, k1, l2) && k1 + l2 <= 5 {
                    break (k1, l2);
                }
            };
            let assign = VarAssignment::random(&g, k1 + l2, &mut rng);
            let vars = AssignmentVars {
                graph: &g,
                assign: &assign,
            };
            let all =
                labeled_walk_sum(&view, &partition, 0, t, len, k1, l2, &vars, guarded).unwrap();
            let paths =
                labeled_walk_sum(&view, &partition, 0, t, len, k1, l2, &vars, simple).unwrap();
            checks += 1;
            unequal += (all.value != paths.value) as u64;
            cancelled += all.walks - paths.walks;
        }
    }
    outcome(unequal == 0, format!("{checks} assignments, {unequal} unequal sums, {cancelled} non-simple labeled walks cancelled"))
}

fn suite() -> Vec<Graph> {
    common::random_suite(300, 4, 12, 0xc4)
}

/// Runs every (t, k <= 5) instance, rerunning misses with a fresh seed.
/// Returns (yes-instances, false positives, first-pass misses, misses left after rerun).
#[allow(clippy::needless_range_loop)]
fn detour_sweep(
    graphs: &[Graph],
    alpha: Alpha,
    strategy: Strategy,
    truth: &[Vec<[bool; 6]>],
) -> (u64, u64, u64, u64) {
    let (mut yes, mut fp, mut miss, mut stuck) = (0, 0, 0, 0);
    for (gi, g) in graphs.iter().enumerate() {
        for t in 1..g.n() {
            for k in 0..=5 {
                let want = truth[gi][t][k];
                let mut q = DetourQuery::new(g, 0, t, k);
                q.alpha = alpha;
                q.solver.strategy = strategy;
                q.seed = gi as u64;
                q.solver.master_seed = gi as u64;
                let got = detour::solve(&q).unwrap();
                yes += want as u64;
                fp += (got && !want) as u64;
                if want && !got {
                    miss += 1;
                    q.seed ^= 0x5eed_0000;
                    q.solver.master_seed ^= 0x5eed_0000;
                    stuck += !detour::solve(&q).unwrap() as u64;
                }
            }
        }
    }
    (yes, fp, miss, stuck)
}

fn truth_table(graphs: &[Graph]) -> Vec<Vec<[bool; 6]>> {
    graphs
        .iter()
        .map(|g| {
            let mut rows = vec![[false; 6]; g.n()];
            for (t, row) in rows.iter_mut().enumerate().skip(1) {
                for (k, cell) in row.iter_mut().enumerate() {
                    *cell = oracle::detour_exists(g, 0, t, k).unwrap();
                }
            }
            rows
        })
        .collect()
}

fn sweep_ok(yes: u64, fp: u64, miss: u64, stuck: u64) -> bool {
    fp == 0 && miss * 100 <= yes && stuck == 0
}

fn c4_detour(graphs: &[Graph], truth: &[Vec<[bool; 6]>]) -> Outcome {
    let (yes, fp, miss, stuck) = detour_sweep(graphs, Alpha::DEFAULT, Strategy::Auto, truth);
    let default_ok = sweep_ok(yes, fp, miss, stuck);

    // the default strategy brute-forces views this small, so run the sieve
    // path explicitly on a slice of the suite
    let small: Vec<Graph> = graphs
        .iter()
        .filter(|g| g.n() <= 9)
        .take(30)
        .cloned()
        .collect();
    let small_truth = truth_table(&small);
    let (syes, sfp, smiss, sstuck) =
        detour_sweep(&small, Alpha::DEFAULT, Strategy::Sieve, &small_truth);
    let sieve_ok = sweep_ok(syes, sfp, smiss, sstuck);

    let mut table_mismatch = 0;
    let mut entries = 0;
    for (gi, g) in graphs.iter().enumerate().take(50) {
        let t = g.n() - 1;
        let lg = bfs_layers(g, 0).unwrap();
        let k = 5;
        let mut q = DetourQuery::new(g, 0, t, k);
        q.seed = gi as u64;
        let table = detour::run(&q).unwrap().table;
        let dt = lg.dist(t).unwrap();
        for x in (0..g.n()).filter(|&x| lg.dist(x).is_some_and(|d| d <= dt)) {
            let dx = lg.dist(x).unwrap();
            let tail = lg.tail(x).unwrap();
            let want: BTreeSet<usize> = if tail.contains(t) {
                oracle::path_lengths(&tail, x, t, dt - dx + k, OracleLimits::UNLIMITED).unwrap()
            } else {
                BTreeSet::new()
            };
            entries += 1;
            table_mismatch +=
                (table.lengths(x).into_iter().collect::<BTreeSet<_>>() != want) as u64;
        }
    }
    outcome(
        default_ok && sieve_ok && table_mismatch == 0,
        format!(
            "default: {yes} yes, {fp} FP, {miss} FN ({stuck} after rerun); sieve-only on {} graphs: {syes} yes, {sfp} FP, {smiss} FN ({sstuck} after rerun); offset tables: {table_mismatch} of {entries} vertices differ",
            small.len()
        ),
    )
}

fn c5_alpha(graphs: &[Graph], truth: &[Vec<[bool; 6]>]) -> Outcome {
    let alphas = [
        Alpha::new(0, 1).unwrap(),
        Alpha::new(1, 4).unwrap(),
        Alpha::DEFAULT,
        Alpha::new(9, 10).unwrap(),
    ];
    let mut parts = Vec::new();
    let mut ok = true;
    for a in alphas {
        let (yes, fp, miss, stuck) = detour_sweep(graphs, a, Strategy::Auto, truth);
        ok &= sweep_ok(yes, fp, miss, stuck);
        parts.push(format!("α={}/{}: {fp} FP {miss} FN", a.num(), a.den()));
    }
    outcome(ok, parts.join(", "))
}

fn c6_claims(graphs: &[Graph]) -> (Outcome, bool) {
    let (mut paths, mut split_bad, mut bound_bad, mut uncharacterized) = (0u64, 0u64, 0u64, 0u64);
    // spread ~1e5 paths over the whole suite; unused budget carries over
    for (gi, g) in graphs.iter().enumerate() {
        let per_graph = (100_000u64.saturating_sub(paths)).div_ceil((graphs.len() - gi) as u64);
        let lg = bfs_layers(g, 0).unwrap();
        let parity = lg.parity_partition();
        let mut pairs: Vec<(usize, usize)> = (0..g.n())
            .flat_map(|x| {
                lg.tail(x)
                    .unwrap()
                    .vertices()
                    .iter()
                    .map(move |&t| (x, t))
                    .collect::<Vec<_>>()
            })
            .filter(|&(x, t)| lg.dist(t) >= lg.dist(x))
            .collect();
        pairs.shuffle(&mut ChaCha8Rng::seed_from_u64(gi as u64));
        let mut taken = 0u64;
        for (x, t) in pairs {
            let per_pair = per_graph.saturating_sub(taken) as usize;
            let tail = lg.tail(x).unwrap();
            let (dx, dt) = (lg.dist(x).unwrap(), lg.dist(t).unwrap());
            for path in oracle::simple_paths(&tail, x, t, dt - dx + 5, OracleLimits::UNLIMITED)
                .unwrap()
                .take(per_pair)
            {
                let rec = PathRecord::new(&lg, path);
                let r = rec.len - (dt - dx);
                paths += 1;
                taken += 1;
                split_bad += (r..=5).any(|k| !oracle::check_split_claim(&rec, &lg, k)) as u64;
                if !oracle::check_label_bound(&rec) {
                    bound_bad += 1;
                    let both_v1 = parity.is_v1(rec.first()) && parity.is_v1(rec.last());
                    uncharacterized +=
                        !(both_v1 && 2 * (rec.k1 + rec.l2) == rec.len + rec.stable + 2) as u64;
                }
            }
            if taken >= per_graph {
                break;
            }
        }
    }
    let pass = split_bad == 0 && bound_bad == 0;
    // The stated label bound is off by one when both ends lie in V1; every
    // violation must be of exactly that kind.
    let explained = split_bad == 0 && uncharacterized == 0;
    (
        outcome(
            pass,
            format!(
                "{paths} paths over {} graphs: split claim fails on {split_bad}; label bound fails on {bound_bad} ({uncharacterized} outside the both-ends-in-V1, 2(k1+l2) = q+m+2 case)",
                graphs.len()
            ),
        ),
        explained,
    )
}

fn c7_scaling() -> Outcome {
    let g = detourkit::io::grid(16).unwrap();
    let lg = bfs_layers(&g, 0).unwrap();
    let view = lg.full_view();
    let partition = lg.parity_partition();
    // len = 2j - 1 leaves room for k1 = j; the DP has len + 1 layers, the
    // polynomial factor divided out
    let per_layer: Vec<f64> = (4..=12)
        .map(|j| {
            let len = 2 * j - 1;
            let q = SieveQuery {
                view: &view,
                partition: &partition,
                from: 0,
                to: 15,
                len,
                k1: j,
                l2: 0,
            };
            dp_state_count(&q).unwrap() as f64 / (len + 1) as f64
        })
        .collect();
    let ratios: Vec<f64> = per_layer.windows(2).map(|w| w[1] / w[0]).collect();
    let ok = ratios.iter().all(|r| (1.6..=2.4).contains(r));
    let shown: Vec<String> = ratios.iter().map(|r| format!("{r:.3}")).collect();
    outcome(
        ok,
        format!("per-step ratios for k1+l2 = 5..12: {}", shown.join(" ")),
    )
}

fn c8_cli() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.txt");
    std::fs::write(
        &graph,
        detourkit::io::serialize_graph(&common::connected_gnp(11, 0.35, 8)),
    )
    .unwrap();
    let g = graph.to_str().unwrap();
    let runs: [&[&str]; 3] = [
        &[
            "detour", "--graph", g, "--s", "0", "--t", "10", "--k", "3", "--seed", "42",
        ],
        &[
            "detour",
            "--graph",
            g,
            "--s",
            "0",
            "--t",
            "10",
            "--k",
            "4",
            "--seed",
            "42",
            "--strategy",
            "sieve",
            "--reps",
            "4",
        ],
        &[
            "bipath", "--graph", g, "--s", "0", "--t", "10", "--len", "5", "--k1", "3", "--l2",
            "1", "--seed", "9",
        ],
    ];
    let mut differing = 0;
    for args in runs {
        let outputs: Vec<serde_json::Value> = (0..5)
            .map(|_| {
                let out = Command::new(env!("CARGO_BIN_EXE_detourkit"))
                    .args(args)
                    .output()
                    .unwrap();
                let mut v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
                v.as_object_mut().unwrap().remove("elapsed_ms");
                v
            })
            .collect();
        differing += outputs.windows(2).filter(|w| w[0] != w[1]).count();
    }
    outcome(
        differing == 0,
        format!("3 commands x 5 runs, {differing} differing report pairs"),
    )
}

fn run(name: &str, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let res = panic::catch_unwind(AssertUnwindSafe(f));
    let secs = start.elapsed().as_secs_f64();
    match res {
        Ok(o) => {
            println!(
                "{} {name} ({secs:.1}s): {}",
                if o.pass { "PASS" } else { "FAIL" },
                o.detail
            );
            o.pass
        }
        Err(_) => {
            println!("FAIL {name} ({secs:.1}s): panicked");
            false
        }
    }
}

fn main() {
    let graphs = suite();
    let truth = truth_table(&graphs);
    let mut failed = Vec::new();
    let mut check = |name: &'static str, ok: bool| {
        if !ok {
            failed.push(name);
        }
    };
    check("1", run("criterion 1 field suite", c1_field));
    check("2", run("criterion 2 sieve vs oracle", c2_sieve_exhaustive));
    check("3", run("criterion 3 cancellation", c3_cancellation));
    check(
        "4",
        run("criterion 4 detour vs oracle", || {
            c4_detour(&graphs, &truth)
        }),
    );
    check(
        "5",
        run("criterion 5 alpha invariance", || c5_alpha(&graphs, &truth)),
    );
    let mut explained = false;
    run("criterion 6 claim suites", || {
        let (o, e) = c6_claims(&graphs);
        explained = e;
        o
    });
    check("7", run("criterion 7 scaling", c7_scaling));
    check("8", run("criterion 8 cli determinism", c8_cli));
    // Criterion 6's label bound is false as stated (see README); the run
    // still requires the split claim everywhere and the exact failure shape.
    assert!(
        explained,
        "criterion 6: split claim failed or label-bound violation outside the known case"
    );
    assert!(failed.is_empty(), "criteria failed: {failed:?}");
}
