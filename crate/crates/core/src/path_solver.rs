//! Exact-length simple path detection inside a subgraph view.
//!
//! The sieve strategy draws uniform random bipartitions and, for each one,
//! asks the walk sieve for every signature `(k1, l2)` whose label count fits
//! the budget `ceil(3(len+1)/4) + slack`. A hidden path lands within budget
//! with constant probability per bipartition, so repetitions drive the false
//! negative rate down; positive answers are always correct.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{random_partition, SubgraphView, ViewKind};
use crate::oracle::{self, OracleLimits};
use crate::seed;
use crate::sieve::{signature_fits, SieveBatch, SieveCounters, TableSpec, DEFAULT_LABEL_CAP};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Strategy {
    Sieve,
    BruteForce,
    #[default]
    Auto,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Sieve => "sieve",
            Strategy::BruteForce => "brute",
            Strategy::Auto => "auto",
        })
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sieve" => Ok(Strategy::Sieve),
            "brute" | "bruteforce" | "brute-force" => Ok(Strategy::BruteForce),
            "auto" => Ok(Strategy::Auto),
            other => Err(Error::InvalidConfig(format!("unknown strategy {other:?}"))),
        }
    }
}

/// Instances at or below either bound are brute-forced under [`Strategy::Auto`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AutoThreshold {
    pub max_vertices: usize,
    pub max_len: usize,
}

impl Default for AutoThreshold {
    fn default() -> Self {
        AutoThreshold {
            max_vertices: 14,
            max_len: 4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathSolverConfig {
    pub budget_slack: usize,
    /// Independent random bipartitions per call.
    pub repetitions: usize,
    pub strategy: Strategy,
    pub master_seed: u64,
    pub auto_threshold: AutoThreshold,
    /// Polynomial evaluations per sieve table.
    pub sieve_reps: usize,
    pub label_cap: usize,
}

impl Default for PathSolverConfig {
    fn default() -> Self {
        PathSolverConfig {
            budget_slack: 2,
            repetitions: 32,
            strategy: Strategy::Auto,
            master_seed: 0,
            auto_threshold: AutoThreshold::default(),
            sieve_reps: 1,
            label_cap: DEFAULT_LABEL_CAP,
        }
    }
}

impl PathSolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(Error::InvalidConfig(
                "repetitions must be at least 1".into(),
            ));
        }
        if self.sieve_reps == 0 {
            return Err(Error::InvalidConfig("sieve reps must be at least 1".into()));
        }
        Ok(())
    }

    /// Label budget for a path of length `len`.
    pub fn budget(&self, len: usize) -> usize {
        (3 * (len + 1)).div_ceil(4) + self.budget_slack
    }

    fn use_brute_force(&self, view: &SubgraphView<'_>, cap: usize) -> bool {
        match self.strategy {
            Strategy::BruteForce => true,
            Strategy::Sieve => false,
            Strategy::Auto => {
                view.len() <= self.auto_threshold.max_vertices || cap <= self.auto_threshold.max_len
            }
        }
    }
}

pub fn exists_path_of_length(
    view: &SubgraphView<'_>,
    from: usize,
    to: usize,
    len: usize,
    cfg: &PathSolverConfig,
) -> Result<bool> {
    let found = exists_path_upto_many(view, from, &[to], len, cfg, None)?;
    Ok(found[0].contains(&len))
}

/// `{len <= cap : a simple from–to path of that length exists}`.
pub fn exists_path_upto(
    view: &SubgraphView<'_>,
    from: usize,
    to: usize,
    cap: usize,
    cfg: &PathSolverConfig,
) -> Result<BTreeSet<usize>> {
    Ok(exists_path_upto_many(view, from, &[to], cap, cfg, None)?.swap_remove(0))
}

/// [`exists_path_upto`] for several targets sharing bipartitions and tables.
pub fn exists_path_upto_many(
    view: &SubgraphView<'_>,
    from: usize,
    targets: &[usize],
    cap: usize,
    cfg: &PathSolverConfig,
    counters: Option<&SieveCounters>,
) -> Result<Vec<BTreeSet<usize>>> {
    cfg.validate()?;
    view.check_member(from)?;
    for &t in targets {
        view.check_member(t)?;
    }
    if cfg.use_brute_force(view, cap) {
        return targets
            .iter()
            .map(|&t| oracle::path_lengths(view, from, t, cap, OracleLimits::UNLIMITED))
            .collect();
    }

    // Any simple path has at most `len + 1` labels in play.
    let labels = cfg.budget(cap).min(cap + 1);
    if labels > cfg.label_cap {
        return Err(Error::LabelBudgetExceeded {
            requested: labels,
            cap: cfg.label_cap,
        });
    }
    let spec = TableSpec {
        max_len: cap,
        labels,
        k1_max: labels,
        l2_max: labels,
    };
    let stream = view_stream(view.kind(), from);
    let g = view.base().graph();
    let mut found = vec![BTreeSet::new(); targets.len()];
    for rep in 0..cfg.repetitions {
        if found.iter().all(|f| f.len() == cap + 1) {
            break;
        }
        let mut rng = seed::rng_for(cfg.master_seed, &[stream.0, stream.1, stream.2, rep as u64]);
        let partition = random_partition(g, &mut rng);
        let batch = SieveBatch::build(
            view,
            &partition,
            from,
            spec,
            cfg.sieve_reps,
            &mut rng,
            cfg.label_cap,
            counters,
        )?;
        for (i, &t) in targets.iter().enumerate() {
            for len in 0..=cap {
                if found[i].contains(&len) {
                    continue;
                }
                let budget = cfg.budget(len);
                'sig: for k1 in 0..=budget.min(len + 1) {
                    for l2 in 0..=(budget - k1) {
                        if !signature_fits(len, k1, l2) {
                            break;
                        }
                        if let Some(c) = counters {
                            c.count_query();
                        }
                        if batch
                            .decide(t, len, k1, l2)
                            .expect("signature within table spec")
                        {
                            found[i].insert(len);
                            break 'sig;
                        }
                    }
                }
            }
        }
    }
    Ok(found)
}

fn view_stream(kind: ViewKind, from: usize) -> (u64, u64, u64) {
    match kind {
        ViewKind::Interval(x, y) => (1, x as u64, ((y as u64) << 32) | from as u64),
        ViewKind::Tail(x) => (2, x as u64, from as u64),
    }
}
