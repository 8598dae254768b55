//! Exhaustive reference implementations.
//!
//! Everything here is exponential and meant for small graphs only: it is
//! the ground truth the sieve, the path solver and the detour program are
//! tested against.

use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::field64::FieldElem;
use crate::graph::{bfs_layers, Bipartition, EdgeClass, Graph, LayeredGraph, SubgraphView};
use crate::sieve::VarAssignment;

/// Size guard for the exhaustive routines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_vertices: usize,
    pub max_len: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_vertices: 16,
            max_len: 16,
        }
    }
}

impl OracleLimits {
    pub const UNLIMITED: OracleLimits = OracleLimits {
        max_vertices: usize::MAX,
        max_len: usize::MAX,
    };

    fn check(&self, vertices: usize, len: usize) -> Result<()> {
        if vertices > self.max_vertices {
            return Err(Error::OracleGuard {
                what: "view size",
                value: vertices,
                limit: self.max_vertices,
            });
        }
        if len > self.max_len {
            return Err(Error::OracleGuard {
                what: "path length",
                value: len,
                limit: self.max_len,
            });
        }
        Ok(())
    }
}

/// A simple path with its edge-class and parity-partition signature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathRecord {
    pub vertices: Vec<usize>,
    pub len: usize,
    /// Vertices at odd depth.
    pub k1: usize,
    /// Edges with both endpoints at even depth.
    pub l2: usize,
    pub stable: usize,
    pub backward: usize,
    pub forward: usize,
}

impl PathRecord {
    pub fn new(lg: &LayeredGraph, vertices: Vec<usize>) -> Self {
        let parity = lg.parity_partition();
        let (k1, l2) = signature(&parity, &vertices);
        let (mut forward, mut backward, mut stable) = (0, 0, 0);
        for w in vertices.windows(2) {
            match lg
                .classify_edge(w[0], w[1])
                .expect("path edges are reachable graph edges")
            {
                EdgeClass::Forward => forward += 1,
                EdgeClass::Backward => backward += 1,
                EdgeClass::Stable => stable += 1,
            }
        }
        PathRecord {
            len: vertices.len() - 1,
            vertices,
            k1,
            l2,
            stable,
            backward,
            forward,
        }
    }

    pub fn first(&self) -> usize {
        self.vertices[0]
    }

    pub fn last(&self) -> usize {
        *self.vertices.last().expect("paths are nonempty")
    }
}

/// `(V1 vertex count, V2V2 edge count)` of a vertex sequence.
pub fn signature(partition: &Bipartition, vertices: &[usize]) -> (usize, usize) {
    let k1 = vertices.iter().filter(|&&v| partition.is_v1(v)).count();
    let l2 = vertices
        .windows(2)
        .filter(|w| !partition.is_v1(w[0]) && !partition.is_v1(w[1]))
        .count();
    (k1, l2)
}

/// Depth-first stream of every simple `from`–`to` path of length at most
/// `max_len` inside a view, in lexicographic order of vertex ids.
pub struct SimplePaths<'v, 'g> {
    view: &'v SubgraphView<'g>,
    to: usize,
    max_len: usize,
    nbrs: Vec<Vec<usize>>,
    /// Hop distance to `to` inside the view, for pruning.
    remaining: Vec<usize>,
    path: Vec<usize>,
    cursor: Vec<usize>,
    on_path: Vec<bool>,
    state: StreamState,
}

#[derive(PartialEq, Eq)]
enum StreamState {
    Fresh,
    Running,
    Done,
}

impl<'v, 'g> SimplePaths<'v, 'g> {
    fn new(view: &'v SubgraphView<'g>, from: usize, to: usize, max_len: usize) -> Self {
        let n = view.base().n();
        let mut nbrs = vec![Vec::new(); n];
        for &v in view.vertices() {
            nbrs[v] = view.neighbors(v).collect();
        }
        let mut remaining = vec![usize::MAX; n];
        let mut queue = VecDeque::from([to]);
        remaining[to] = 0;
        while let Some(u) = queue.pop_front() {
            for &w in &nbrs[u] {
                if remaining[w] == usize::MAX {
                    remaining[w] = remaining[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        SimplePaths {
            view,
            to,
            max_len,
            nbrs,
            remaining,
            path: vec![from],
            cursor: vec![0],
            on_path: vec![false; n],
            state: StreamState::Fresh,
        }
    }
}

impl Iterator for SimplePaths<'_, '_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        match self.state {
            StreamState::Done => return None,
            StreamState::Fresh => {
                self.state = StreamState::Running;
                let from = self.path[0];
                if from == self.to {
                    self.state = StreamState::Done;
                    return Some(vec![from]);
                }
                if self.remaining[from] > self.max_len {
                    self.state = StreamState::Done;
                    return None;
                }
                self.on_path[from] = true;
            }
            StreamState::Running => {}
        }
        while let Some(&top) = self.path.last() {
            let depth = self.path.len() - 1;
            let i = self.cursor.last_mut().expect("cursor parallels path");
            if depth == self.max_len || *i >= self.nbrs[top].len() {
                self.on_path[top] = false;
                self.path.pop();
                self.cursor.pop();
                continue;
            }
            let w = self.nbrs[top][*i];
            *i += 1;
            if self.on_path[w]
                || self.remaining[w] == usize::MAX
                || depth + 1 + self.remaining[w] > self.max_len
            {
                continue;
            }
            if w == self.to {
                let mut found = self.path.clone();
                found.push(w);
                return Some(found);
            }
            self.path.push(w);
            self.cursor.push(0);
            self.on_path[w] = true;
        }
        self.state = StreamState::Done;
        let _ = self.view;
        None
    }
}

/// Every simple path as a vertex sequence.
pub fn simple_paths<'v, 'g>(
    view: &'v SubgraphView<'g>,
    from: usize,
    to: usize,
    max_len: usize,
    limits: OracleLimits,
) -> Result<SimplePaths<'v, 'g>> {
    view.check_member(from)?;
    view.check_member(to)?;
    limits.check(view.len(), max_len)?;
    Ok(SimplePaths::new(view, from, to, max_len))
}

/// Every simple path with its signature fields.
pub fn enumerate<'v, 'g>(
    view: &'v SubgraphView<'g>,
    from: usize,
    to: usize,
    max_len: usize,
) -> Result<impl Iterator<Item = PathRecord> + 'v>
where
    'g: 'v,
{
    enumerate_with_limits(view, from, to, max_len, OracleLimits::default())
}

pub fn enumerate_with_limits<'v, 'g>(
    view: &'v SubgraphView<'g>,
    from: usize,
    to: usize,
    max_len: usize,
    limits: OracleLimits,
) -> Result<impl Iterator<Item = PathRecord> + 'v>
where
    'g: 'v,
{
    let lg = view.base();
    Ok(simple_paths(view, from, to, max_len, limits)?.map(move |p| PathRecord::new(lg, p)))
}

/// Lengths `<= cap` of simple `from`–`to` paths in the view.
pub fn path_lengths(
    view: &SubgraphView<'_>,
    from: usize,
    to: usize,
    cap: usize,
    limits: OracleLimits,
) -> Result<BTreeSet<usize>> {
    Ok(simple_paths(view, from, to, cap, limits)?
        .map(|p| p.len() - 1)
        .collect())
}

pub fn bipartitioned_exists(
    view: &SubgraphView<'_>,
    from: usize,
    to: usize,
    len: usize,
    k1: usize,
    l2: usize,
    partition: &Bipartition,
) -> Result<bool> {
    bipartitioned_exists_with_limits(
        view,
        from,
        to,
        len,
        k1,
        l2,
        partition,
        OracleLimits::default(),
    )
}

#[allow(clippy::too_many_arguments)]
pub fn bipartitioned_exists_with_limits(
    view: &SubgraphView<'_>,
    from: usize,
    to: usize,
    len: usize,
    k1: usize,
    l2: usize,
    partition: &Bipartition,
    limits: OracleLimits,
) -> Result<bool> {
    Ok(simple_paths(view, from, to, len, limits)?
        .any(|p| p.len() == len + 1 && signature(partition, &p) == (k1, l2)))
}

/// All `(to, len, k1, l2)` realised by simple paths from `from` with
/// `len <= max_len`.
pub fn signatures_from(
    view: &SubgraphView<'_>,
    from: usize,
    partition: &Bipartition,
    max_len: usize,
    limits: OracleLimits,
) -> Result<HashSet<(usize, usize, usize, usize)>> {
    view.check_member(from)?;
    limits.check(view.len(), max_len)?;
    let n = view.base().n();
    let nbrs: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            if view.contains(v) {
                view.neighbors(v).collect()
            } else {
                Vec::new()
            }
        })
        .collect();
    let mut out = HashSet::new();
    let mut on_path = vec![false; n];
    let start_k1 = usize::from(partition.is_v1(from));
    on_path[from] = true;
    extend_signatures(
        &nbrs,
        partition,
        from,
        0,
        start_k1,
        0,
        max_len,
        &mut on_path,
        &mut out,
    );
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn extend_signatures(
    nbrs: &[Vec<usize>],
    partition: &Bipartition,
    v: usize,
    len: usize,
    k1: usize,
    l2: usize,
    max_len: usize,
    on_path: &mut [bool],
    out: &mut HashSet<(usize, usize, usize, usize)>,
) {
    out.insert((v, len, k1, l2));
    if len == max_len {
        return;
    }
    for &w in &nbrs[v] {
        if on_path[w] {
            continue;
        }
        let dk1 = usize::from(partition.is_v1(w));
        let dl2 = usize::from(!partition.is_v1(v) && !partition.is_v1(w));
        on_path[w] = true;
        extend_signatures(
            nbrs,
            partition,
            w,
            len + 1,
            k1 + dk1,
            l2 + dl2,
            max_len,
            on_path,
            out,
        );
        on_path[w] = false;
    }
}

/// Whether `g` has a simple `s`–`t` path of length exactly `dist(s,t) + k`.
pub fn detour_exists(g: &Graph, s: usize, t: usize, k: usize) -> Result<bool> {
    detour_exists_with_limits(g, s, t, k, OracleLimits::default())
}

pub fn detour_exists_with_limits(
    g: &Graph,
    s: usize,
    t: usize,
    k: usize,
    limits: OracleLimits,
) -> Result<bool> {
    g.check_vertex(t)?;
    let lg = bfs_layers(g, s)?;
    let dist = lg.dist(t).ok_or(Error::Unreachable(t))?;
    let target = dist + k;
    let view = lg.full_view();
    Ok(simple_paths(&view, s, t, target, limits)?.any(|p| p.len() == target + 1))
}

/// Split-vertex property for a path from `x` to `t` (the record's
/// endpoints) and detour parameter `k`.
///
/// Vacuously true when the record is not a candidate: it leaves `G_(x,inf)`,
/// is longer than `d(t) - d(x) + k`, or starts too close to `t`
/// (`d(x) > d(t) - (k - m)/2 - 1`). Otherwise looks for a vertex `y` with
/// `d(x) + 1 <= d(y) <= d(x) + (k - m)/2 + 1`, everything after `y`
/// strictly deeper than `y`, and everything up to `y` no deeper than `y`.
pub fn check_split_claim(record: &PathRecord, lg: &LayeredGraph, k: usize) -> bool {
    let depth = |v: usize| lg.dist(v).expect("record vertices are reachable");
    let dx = depth(record.first());
    let dt = depth(record.last());
    let m = record.stable;
    if dt < dx || record.vertices[1..].iter().any(|&v| depth(v) <= dx) {
        return true;
    }
    if record.len > dt - dx + k || m > k {
        return true;
    }
    // d(x) <= d(t) - (k-m)/2 - 1  <=>  2(d(t) - d(x) - 1) >= k - m
    if dt - dx < 1 || 2 * (dt - dx - 1) < k - m {
        return true;
    }
    let mut prefix_max = 0usize;
    // suffix_min[i] = min depth over vertices[i+1..]
    let n = record.vertices.len();
    let mut suffix_min = vec![usize::MAX; n];
    for i in (0..n - 1).rev() {
        suffix_min[i] = suffix_min[i + 1].min(depth(record.vertices[i + 1]));
    }
    for (i, &y) in record.vertices.iter().enumerate() {
        let dy = depth(y);
        prefix_max = prefix_max.max(dy);
        if i == 0 {
            continue;
        }
        let in_range = dy > dx && 2 * (dy - dx - 1) <= k - m;
        if in_range && suffix_min[i] > dy && prefix_max <= dy {
            return true;
        }
    }
    false
}

/// `k1 + l2 <= (q + m + 1) / 2`, evaluated as `2(k1 + l2) <= q + m + 1`.
pub fn check_label_bound(record: &PathRecord) -> bool {
    2 * (record.k1 + record.l2) <= record.len + record.stable + 1
}

/// Variable values as seen by the explicit labeled-walk enumerator. The
/// edge variable is queried with the traversal direction so that tests can
/// substitute direction-dependent values.
pub trait WalkVariables {
    fn edge(&self, from: usize, to: usize) -> FieldElem;
    fn vertex_label(&self, v: usize, label: usize) -> FieldElem;
    fn edge_label(&self, from: usize, to: usize, label: usize) -> FieldElem;
}

/// The sieve's own variables: symmetric in the edge endpoints.
pub struct AssignmentVars<'a> {
    pub graph: &'a Graph,
    pub assign: &'a VarAssignment,
}

impl WalkVariables for AssignmentVars<'_> {
    fn edge(&self, from: usize, to: usize) -> FieldElem {
        self.assign
            .edge_var(self.graph, from, to)
            .expect("walk edges exist")
    }

    fn vertex_label(&self, v: usize, label: usize) -> FieldElem {
        self.assign.vertex_label(v, label)
    }

    fn edge_label(&self, from: usize, to: usize, label: usize) -> FieldElem {
        self.assign
            .edge_label(self.graph, from, to, label)
            .expect("walk edges exist")
    }
}

/// Which labeled walks the explicit enumerator sums over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WalkFilter {
    /// Keep only walks without a repeated vertex.
    pub simple_only: bool,
    /// Forbid stepping `V2 -> V1 -> same V2 vertex`.
    pub no_immediate_return: bool,
}

/// Totals from explicit labeled-walk enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WalkSum {
    pub value: FieldElem,
    pub walks: u64,
    /// Walks containing a `V2 -> V1 -> same V2` step.
    pub immediate_returns: u64,
}

/// Sums the monomial of every labeled walk of length `len` from `from` to
/// `to` with exactly `k1` `V1` occurrences and `l2` `V2V2` edge
/// occurrences, each labeled with a distinct label from `0..k1 + l2`.
#[allow(clippy::too_many_arguments)]
pub fn labeled_walk_sum(
    view: &SubgraphView<'_>,
    partition: &Bipartition,
    from: usize,
    to: usize,
    len: usize,
    k1: usize,
    l2: usize,
    vars: &dyn WalkVariables,
    filter: WalkFilter,
) -> Result<WalkSum> {
    view.check_member(from)?;
    view.check_member(to)?;
    OracleLimits {
        max_vertices: 10,
        max_len: 10,
    }
    .check(view.len(), len)?;
    let mut walker = Walker {
        view,
        partition,
        to,
        len,
        k1,
        l2,
        labels: k1 + l2,
        vars,
        filter,
        walk: vec![from],
        sum: WalkSum {
            value: FieldElem::ZERO,
            walks: 0,
            immediate_returns: 0,
        },
    };
    if partition.is_v1(from) {
        if k1 >= 1 {
            for c in 0..walker.labels {
                walker.step(vars.vertex_label(from, c), 1 << c, 1, 0);
            }
        }
    } else {
        walker.step(FieldElem::ONE, 0, 0, 0);
    }
    Ok(walker.sum)
}

struct Walker<'a, 'v, 'g> {
    view: &'a SubgraphView<'g>,
    partition: &'a Bipartition,
    to: usize,
    len: usize,
    k1: usize,
    l2: usize,
    labels: usize,
    vars: &'v dyn WalkVariables,
    filter: WalkFilter,
    walk: Vec<usize>,
    sum: WalkSum,
}

impl Walker<'_, '_, '_> {
    fn step(&mut self, acc: FieldElem, used: u32, c1: usize, c2: usize) {
        let v = *self.walk.last().expect("walk is nonempty");
        if self.walk.len() == self.len + 1 {
            if v == self.to && c1 == self.k1 && c2 == self.l2 {
                let simple = {
                    let mut seen = HashSet::new();
                    self.walk.iter().all(|&u| seen.insert(u))
                };
                if self.filter.simple_only && !simple {
                    return;
                }
                if self.has_immediate_return() {
                    self.sum.immediate_returns += 1;
                }
                self.sum.value += acc;
                self.sum.walks += 1;
            }
            return;
        }
        let nbrs: Vec<usize> = self.view.neighbors(v).collect();
        for w in nbrs {
            if self.filter.no_immediate_return && self.walk.len() >= 2 {
                let p = self.walk[self.walk.len() - 2];
                if !self.partition.is_v1(p) && self.partition.is_v1(v) && w == p {
                    continue;
                }
            }
            let x = acc * self.vars.edge(v, w);
            self.walk.push(w);
            if self.partition.is_v1(w) {
                if c1 < self.k1 {
                    for c in (0..self.labels).filter(|c| used & (1 << c) == 0) {
                        let y = self.vars.vertex_label(w, c);
                        self.step(x * y, used | (1 << c), c1 + 1, c2);
                    }
                }
            } else if !self.partition.is_v1(v) {
                if c2 < self.l2 {
                    for c in (0..self.labels).filter(|c| used & (1 << c) == 0) {
                        let y = self.vars.edge_label(v, w, c);
                        self.step(x * y, used | (1 << c), c1, c2 + 1);
                    }
                }
            } else {
                self.step(x, used, c1, c2);
            }
            self.walk.pop();
        }
    }

    fn has_immediate_return(&self) -> bool {
        self.walk
            .windows(3)
            .any(|w| !self.partition.is_v1(w[0]) && self.partition.is_v1(w[1]) && w[2] == w[0])
    }
}
