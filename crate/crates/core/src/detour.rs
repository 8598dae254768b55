//! Layered dynamic program for k-Detour on undirected graphs.
//!
//! For every vertex `x` no deeper than `t` the program computes the offsets
//! `r in [0, k]` such that `G_(x,inf)` has an `x`–`t` path of length
//! `d(t) - d(x) + r`. Vertices within `(1-α)k/2` layers of `t` are solved
//! directly with the path solver. Shallower layers are filled from deeper
//! ones, guessing the number `m` of stable edges of a hidden path:
//!
//! * few stable edges (`m < αk`): the parity bipartition makes most path
//!   edges cross parts, so bipartitioned queries with a small label budget
//!   either reach `t` directly or reach a split vertex `y`, after which the
//!   already computed offsets of `y` are appended;
//! * many stable edges: a short prefix to a split vertex `y` within
//!   `(1-α)k/2 + 1` layers is found with the path solver.
//!
//! All fractional thresholds are evaluated in integer arithmetic.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{bfs_layers, Bipartition, Graph, LayeredGraph, SubgraphView};
use crate::oracle::{self, OracleLimits};
use crate::path_solver::{exists_path_upto_many, PathSolverConfig, Strategy};
use crate::seed;
use crate::sieve::{signature_fits, SieveBatch, SieveCounters, TableSpec};

/// Largest supported detour parameter; offsets are stored in a `u64`.
pub const MAX_K: usize = 63;

/// Exact rational threshold parameter in `[0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Alpha {
    num: u64,
    den: u64,
}

impl Alpha {
    pub const DEFAULT: Alpha = Alpha {
        num: 55814,
        den: 100000,
    };
    pub const ZERO: Alpha = Alpha { num: 0, den: 1 };

    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 || num >= den {
            return Err(Error::InvalidAlpha { num, den });
        }
        Ok(Alpha { num, den })
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    /// `m < αk`
    pub fn below(&self, m: usize, k: usize) -> bool {
        (m as u128) * (self.den as u128) < (k as u128) * (self.num as u128)
    }

    /// `floor((1-α)k/2)`
    pub fn base_depth(&self, k: usize) -> usize {
        (((self.den - self.num) as u128 * k as u128) / (2 * self.den as u128)) as usize
    }

    /// `floor((3-α)k/2)`
    pub fn base_cap(&self, k: usize) -> usize {
        (((3 * self.den - self.num) as u128 * k as u128) / (2 * self.den as u128)) as usize
    }
}

impl Default for Alpha {
    fn default() -> Self {
        Alpha::DEFAULT
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Alpha {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidConfig(format!("alpha must look like NUM/DEN, got {s:?}"));
        let (num, den) = s.trim().split_once('/').ok_or_else(bad)?;
        let num = num.trim().parse().map_err(|_| bad())?;
        let den = den.trim().parse().map_err(|_| bad())?;
        Alpha::new(num, den)
    }
}

/// Label budget for the few-stable-edges case.
///
/// `Listed` admits signatures with `4(k1 + l2) <= 3k + m + 2` in both
/// subcases. A path with `q` edges, at most `m` of them stable, can carry
/// `(q + m + 2) / 2` labels when both of its ends lie in V1, one more than
/// `Listed` assumes, and a split prefix may be one edge longer than a path
/// that reaches `t` directly. `Widened` (the default) therefore admits
/// `4(k1 + l2) <= 3k + m + 4` when reaching `t` directly and
/// `4(k1 + l2) <= 3k + m + 6` for prefixes ending at a split vertex.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Case1Budget {
    Listed,
    #[default]
    Widened,
}

impl Case1Budget {
    /// Largest admissible `k1 + l2` for a path from `x` straight to `t`.
    pub fn direct(&self, k: usize, m: usize) -> usize {
        match self {
            Case1Budget::Listed => (3 * k + m + 2) / 4,
            Case1Budget::Widened => (3 * k + m + 4) / 4,
        }
    }

    /// Largest admissible `k1 + l2` for a prefix ending at a split vertex.
    pub fn split(&self, k: usize, m: usize) -> usize {
        match self {
            Case1Budget::Listed => (3 * k + m + 2) / 4,
            Case1Budget::Widened => (3 * k + m + 6) / 4,
        }
    }
}

impl fmt::Display for Case1Budget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case1Budget::Listed => "listed",
            Case1Budget::Widened => "widened",
        })
    }
}

impl FromStr for Case1Budget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "listed" => Ok(Case1Budget::Listed),
            "widened" => Ok(Case1Budget::Widened),
            other => Err(Error::InvalidConfig(format!(
                "unknown case-1 budget {other:?}"
            ))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct DetourQuery<'g> {
    pub graph: &'g Graph,
    pub s: usize,
    pub t: usize,
    pub k: usize,
    pub alpha: Alpha,
    pub seed: u64,
    pub case1_budget: Case1Budget,
    pub solver: PathSolverConfig,
}

impl<'g> DetourQuery<'g> {
    pub fn new(graph: &'g Graph, s: usize, t: usize, k: usize) -> Self {
        DetourQuery {
            graph,
            s,
            t,
            k,
            alpha: Alpha::DEFAULT,
            seed: 0,
            case1_budget: Case1Budget::default(),
            solver: PathSolverConfig::default(),
        }
    }
}

/// Per-vertex offset sets: bit `r` of vertex `x` means an `x`–`t` path of
/// length `d(t) - d(x) + r` exists in `G_(x,inf)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OffsetTable {
    k: usize,
    dist_t: usize,
    dist: Vec<Option<usize>>,
    bits: Vec<Option<u64>>,
}

impl OffsetTable {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dist_t(&self) -> usize {
        self.dist_t
    }

    /// `None` for vertices without an entry (unreachable or deeper than `t`).
    pub fn offsets(&self, x: usize) -> Option<u64> {
        self.bits.get(x).copied().flatten()
    }

    pub fn contains(&self, x: usize, r: usize) -> bool {
        r <= self.k && self.offsets(x).is_some_and(|b| b >> r & 1 == 1)
    }

    /// Stored path lengths `d(t) - d(x) + r` for `x`, ascending.
    pub fn lengths(&self, x: usize) -> Vec<usize> {
        let Some(bits) = self.offsets(x) else {
            return Vec::new();
        };
        let base = self.dist_t - self.dist[x].expect("entries exist only for reachable vertices");
        (0..=self.k)
            .filter(|r| bits >> r & 1 == 1)
            .map(|r| base + r)
            .collect()
    }

    pub fn has_entry(&self, x: usize) -> bool {
        self.offsets(x).is_some()
    }
}

/// Instrumentation collected during one run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RunStats {
    pub dp_states: u64,
    pub sieve_tables: u64,
    pub sieve_queries: u64,
}

#[derive(Clone, Debug)]
pub struct DetourRun {
    pub answer: bool,
    pub dist_st: usize,
    pub table: OffsetTable,
    pub stats: RunStats,
}

/// Decides whether a simple `s`–`t` path of length `dist(s,t) + k` exists.
/// `true` is always correct.
pub fn solve(q: &DetourQuery<'_>) -> Result<bool> {
    Ok(run(q)?.answer)
}

pub fn compute_offset_table(q: &DetourQuery<'_>) -> Result<OffsetTable> {
    Ok(run(q)?.table)
}

/// Runs the full program and returns the answer with its table and counters.
pub fn run(q: &DetourQuery<'_>) -> Result<DetourRun> {
    let g = q.graph;
    g.check_vertex(q.s)?;
    g.check_vertex(q.t)?;
    q.solver.validate()?;
    if q.k > MAX_K {
        return Err(Error::DetourTooLarge { k: q.k, max: MAX_K });
    }
    let lg = bfs_layers(g, q.s)?;
    let dist_t = lg.dist(q.t).ok_or(Error::Unreachable(q.t))?;
    let counters = SieveCounters::default();
    let ctx = Context {
        q,
        lg: &lg,
        parity: lg.parity_partition(),
        dist_t,
        counters: &counters,
    };
    let mut bits: Vec<Option<u64>> = vec![None; g.n()];

    let base_depth = q.alpha.base_depth(q.k);
    let first_inductive = dist_t.checked_sub(base_depth + 1);
    for d in (0..=dist_t).rev() {
        let layer = lg.layer(d);
        let results: Vec<Result<u64>> = if first_inductive.is_none_or(|fi| d > fi) {
            layer.par_iter().map(|&x| ctx.base_case(x)).collect()
        } else {
            let snapshot = &bits;
            layer
                .par_iter()
                .map(|&x| ctx.inductive(x, snapshot))
                .collect()
        };
        for (&x, r) in layer.iter().zip(results) {
            bits[x] = Some(r?);
        }
    }

    let table = OffsetTable {
        k: q.k,
        dist_t,
        dist: lg.distances().to_vec(),
        bits,
    };
    let answer = table.contains(q.s, q.k);
    let stats = RunStats {
        dp_states: counters.dp_states(),
        sieve_tables: counters.tables(),
        sieve_queries: counters.queries(),
    };
    Ok(DetourRun {
        answer,
        dist_st: dist_t,
        table,
        stats,
    })
}

struct Context<'a, 'g> {
    q: &'a DetourQuery<'g>,
    lg: &'a LayeredGraph,
    parity: Bipartition,
    dist_t: usize,
    counters: &'a SieveCounters,
}

/// Signature oracle for one `(view, from)`: either sieve tables or the set
/// of signatures realised by simple paths.
enum Bipartitioned {
    Sieve(SieveBatch),
    Exact(HashSet<(usize, usize, usize, usize)>),
}

impl Bipartitioned {
    fn decide(
        &self,
        to: usize,
        len: usize,
        k1: usize,
        l2: usize,
        counters: &SieveCounters,
    ) -> bool {
        match self {
            Bipartitioned::Sieve(batch) => {
                counters.count_query();
                batch
                    .decide(to, len, k1, l2)
                    .expect("signature within table spec")
            }
            Bipartitioned::Exact(set) => set.contains(&(to, len, k1, l2)),
        }
    }
}

impl Context<'_, '_> {
    fn depth(&self, v: usize) -> usize {
        self.lg
            .dist(v)
            .expect("only reachable vertices are visited")
    }

    /// Offset bit for a length of an `x`–`t` path, if inside the window.
    fn offset_of(&self, dx: usize, len: usize) -> Option<usize> {
        let lo = self.dist_t - dx;
        (len >= lo && len - lo <= self.q.k).then(|| len - lo)
    }

    fn solver_cfg(&self, x: usize, phase: u64) -> PathSolverConfig {
        PathSolverConfig {
            master_seed: seed::derive(self.q.seed, &[phase, x as u64]),
            ..self.q.solver.clone()
        }
    }

    fn base_case(&self, x: usize) -> Result<u64> {
        let (k, t) = (self.q.k, self.q.t);
        if x == t {
            return Ok(1);
        }
        let dx = self.depth(x);
        if dx == self.dist_t {
            // t is not in G_(x,inf)
            return Ok(0);
        }
        let cap = self.q.alpha.base_cap(k).min(self.dist_t - dx + k);
        let view = self.lg.tail(x)?;
        let lens = exists_path_upto_many(
            &view,
            x,
            &[t],
            cap,
            &self.solver_cfg(x, 1),
            Some(self.counters),
        )?;
        Ok(lens[0]
            .iter()
            .filter_map(|&len| self.offset_of(dx, len))
            .fold(0, |b, r| b | 1 << r))
    }

    fn inductive(&self, x: usize, bits: &[Option<u64>]) -> Result<u64> {
        let q = self.q;
        let (k, t, alpha) = (q.k, q.t, q.alpha);
        let dx = self.depth(x);
        let mut out = 0u64;
        let insert_len = |len: usize, out: &mut u64| {
            if let Some(r) = self.offset_of(dx, len) {
                *out |= 1 << r;
            }
        };
        // a + L(y), with L(y) stored as offsets relative to d(t) - d(y)
        let append = |a: usize, y: usize, out: &mut u64| {
            let dy = self.depth(y);
            let Some(ybits) = bits[y] else { return };
            for r in (0..=k).filter(|r| ybits >> r & 1 == 1) {
                if let Some(off) = self.offset_of(dx, a + self.dist_t - dy + r) {
                    *out |= 1 << off;
                }
            }
        };

        // Few stable edges.
        let ms: Vec<usize> = (0..=k).take_while(|&m| alpha.below(m, k)).collect();
        if let Some(&m_max) = ms.last() {
            let spec_for = |max_len: usize, labels: usize| TableSpec {
                max_len,
                labels,
                k1_max: labels,
                l2_max: labels,
            };

            let labels = q.case1_budget.direct(k, m_max);
            let tail = self.lg.tail(x)?;
            let max_len = (2 * labels).min(self.dist_t - dx + k);
            let sig = self.bipartitioned(&tail, x, spec_for(max_len, labels), 1)?;
            for &m in &ms {
                for_each_signature(q.case1_budget.direct(k, m), |k1, l2| {
                    for len in 0..=(2 * k1 + l2).min(max_len) {
                        if !signature_fits(len, k1, l2) || self.offset_of(dx, len).is_none() {
                            continue;
                        }
                        if sig.decide(t, len, k1, l2, self.counters) {
                            insert_len(len, &mut out);
                        }
                    }
                });
            }

            let labels = q.case1_budget.split(k, m_max);
            let y_top = self.dist_t.min(dx + (3 * k - ms[0]) / 2 + 1);
            for dy in dx + 1..=y_top {
                let ys = self.lg.layer(dy);
                let Some(&first) = ys.first() else { continue };
                let view = self.lg.interval(x, first)?;
                let max_len = (2 * labels).min(dy - dx + k);
                let sig = self.bipartitioned(&view, x, spec_for(max_len, labels), 2 + dy as u64)?;
                for &m in &ms {
                    if dy > dx + (3 * k - m) / 2 + 1 {
                        continue;
                    }
                    for_each_signature(q.case1_budget.split(k, m), |k1, l2| {
                        for a in 0..=(2 * k1 + l2).min(max_len) {
                            if !signature_fits(a, k1, l2) {
                                continue;
                            }
                            for &y in ys {
                                if sig.decide(y, a, k1, l2, self.counters) {
                                    append(a, y, &mut out);
                                }
                            }
                        }
                    });
                }
            }
        }

        // Many stable edges.
        let y_top = self.dist_t.min(dx + alpha.base_depth(k) + 1);
        for dy in dx + 1..=y_top {
            let ys = self.lg.layer(dy);
            let Some(&first) = ys.first() else { continue };
            let view = self.lg.interval(x, first)?;
            let cap = (alpha.base_cap(k) + 1).min(dy - dx + k);
            let cfg = self.solver_cfg(x, (1 << 32) | dy as u64);
            let lens = exists_path_upto_many(&view, x, ys, cap, &cfg, Some(self.counters))?;
            for (&y, set) in ys.iter().zip(&lens) {
                for &a in set {
                    append(a, y, &mut out);
                }
            }
        }
        Ok(out)
    }

    fn bipartitioned(
        &self,
        view: &SubgraphView<'_>,
        x: usize,
        spec: TableSpec,
        phase: u64,
    ) -> Result<Bipartitioned> {
        if self.q.solver.strategy == Strategy::BruteForce {
            let set = oracle::signatures_from(
                view,
                x,
                &self.parity,
                spec.max_len,
                OracleLimits::UNLIMITED,
            )?;
            return Ok(Bipartitioned::Exact(set));
        }
        let mut rng = seed::rng_for(self.q.seed, &[phase, x as u64, 7]);
        let batch = SieveBatch::build(
            view,
            &self.parity,
            x,
            spec,
            self.q.solver.sieve_reps,
            &mut rng,
            self.q.solver.label_cap,
            Some(self.counters),
        )?;
        Ok(Bipartitioned::Sieve(batch))
    }
}

/// Every `(k1, l2)` with `k1 + l2 <= budget`.
fn for_each_signature(budget: usize, mut f: impl FnMut(usize, usize)) {
    for k1 in 0..=budget {
        for l2 in 0..=(budget - k1) {
            f(k1, l2);
        }
    }
}
