//! Algebraic sieve for the bipartitioned path problem.
//!
//! Given a vertex bipartition `V1 ⊔ V2`, decides whether a view contains a
//! simple `from`–`to` path with exactly `len` edges, exactly `k1` vertices in
//! `V1` and exactly `l2` edges inside `V2`. The decision evaluates, at a
//! random point of GF(2^64), a polynomial summing one monomial per labeled
//! walk:
//!
//! * every `V1` vertex occurrence and every `V2V2` edge occurrence carries a
//!   distinct label from `L = {0, .., k1 + l2 - 1}`;
//! * after a step `V2 -> V1` the walk may not step straight back;
//! * the monomial is the product of the symmetric edge variables `x{u,v}`
//!   and of the label variables `y(element, label)`, keyed by element
//!   identity rather than walk position.
//!
//! Over characteristic 2 the contributions of non-simple walks cancel in
//! pairs, so the polynomial is nonzero exactly when a simple path with the
//! requested signature exists. The evaluation is a dynamic program over
//! `(label subset, vertex, return guard, V1 count)` per walk length.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};

use rand::RngCore;

use crate::error::{Error, Result};
use crate::field64::FieldElem;
use crate::graph::{Bipartition, Graph, SubgraphView};

/// Largest label set the sieve accepts by default.
pub const DEFAULT_LABEL_CAP: usize = 30;

/// Dense layers are used up to this many slots, hash maps beyond.
const DENSE_SLOT_LIMIT: usize = 1 << 24;

/// One `(len, k1, l2)` bipartitioned-path instance.
#[derive(Clone, Copy, Debug)]
pub struct SieveQuery<'v, 'g> {
    pub view: &'v SubgraphView<'g>,
    pub partition: &'v Bipartition,
    pub from: usize,
    pub to: usize,
    pub len: usize,
    pub k1: usize,
    pub l2: usize,
}

impl SieveQuery<'_, '_> {
    pub fn labels(&self) -> usize {
        self.k1 + self.l2
    }

    pub fn validate(&self, label_cap: usize) -> Result<()> {
        let n = self.view.base().n();
        if self.partition.len() != n {
            return Err(Error::InvalidConfig(format!(
                "partition covers {} vertices, graph has {n}",
                self.partition.len()
            )));
        }
        self.view.check_member(self.from)?;
        self.view.check_member(self.to)?;
        if self.len + 1 < self.k1 + 2 * self.l2 {
            return Err(Error::InfeasibleSignature {
                len: self.len,
                k1: self.k1,
                l2: self.l2,
            });
        }
        if self.labels() > label_cap {
            return Err(Error::LabelBudgetExceeded {
                requested: self.labels(),
                cap: label_cap,
            });
        }
        Ok(())
    }

    fn spec(&self) -> TableSpec {
        TableSpec {
            max_len: self.len,
            labels: self.labels(),
            k1_max: self.k1,
            l2_max: self.l2,
        }
    }
}

/// Whether some simple path of length `len` can have signature `(k1, l2)`:
/// it has `len + 1 - k1` vertices in V2, and V2V2 edges join consecutive ones.
pub fn signature_fits(len: usize, k1: usize, l2: usize) -> bool {
    k1 <= len + 1 && (l2 == 0 || k1 + l2 <= len)
}

/// Values for the edge variables `x{u,v}` and the label variables
/// `y(element, label)` over a whole graph.
#[derive(Clone, Debug)]
pub struct VarAssignment {
    labels: usize,
    edge: Vec<FieldElem>,
    vertex_label: Vec<FieldElem>,
    edge_label: Vec<FieldElem>,
}

impl VarAssignment {
    /// Independent uniform values for every variable, label universe `0..labels`.
    pub fn random<R: RngCore + ?Sized>(g: &Graph, labels: usize, rng: &mut R) -> Self {
        let mut draw = |count: usize| -> Vec<FieldElem> {
            (0..count).map(|_| FieldElem::sample_uniform(rng)).collect()
        };
        let edge = draw(g.m());
        let vertex_label = draw(g.n() * labels);
        let edge_label = draw(g.m() * labels);
        VarAssignment {
            labels,
            edge,
            vertex_label,
            edge_label,
        }
    }

    /// Builds an assignment from explicit functions; the edge function is
    /// called once per unordered edge as `(min, max)`.
    pub fn from_fn(
        g: &Graph,
        labels: usize,
        mut edge: impl FnMut(usize, usize) -> FieldElem,
        mut vertex_label: impl FnMut(usize, usize) -> FieldElem,
        mut edge_label: impl FnMut(usize, usize, usize) -> FieldElem,
    ) -> Self {
        let edge_vals = g.edges().iter().map(|&(u, v)| edge(u, v)).collect();
        let vertex_vals = (0..g.n())
            .flat_map(|v| (0..labels).map(move |c| (v, c)))
            .map(|(v, c)| vertex_label(v, c))
            .collect();
        let edge_label_vals = g
            .edges()
            .iter()
            .flat_map(|&(u, v)| (0..labels).map(move |c| (u, v, c)))
            .map(|(u, v, c)| edge_label(u, v, c))
            .collect();
        VarAssignment {
            labels,
            edge: edge_vals,
            vertex_label: vertex_vals,
            edge_label: edge_label_vals,
        }
    }

    pub fn labels(&self) -> usize {
        self.labels
    }

    #[inline]
    pub fn edge_by_id(&self, eid: usize) -> FieldElem {
        self.edge[eid]
    }

    #[inline]
    pub fn vertex_label(&self, v: usize, label: usize) -> FieldElem {
        self.vertex_label[v * self.labels + label]
    }

    #[inline]
    pub fn edge_label_by_id(&self, eid: usize, label: usize) -> FieldElem {
        self.edge_label[eid * self.labels + label]
    }

    pub fn edge_var(&self, g: &Graph, u: usize, v: usize) -> Option<FieldElem> {
        g.edge_id(u, v).map(|e| self.edge[e])
    }

    pub fn edge_label(&self, g: &Graph, u: usize, v: usize, label: usize) -> Option<FieldElem> {
        g.edge_id(u, v).map(|e| self.edge_label_by_id(e, label))
    }
}

/// Shape of a walk table: the longest walk length and the signature bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TableSpec {
    pub max_len: usize,
    /// Size of the label universe; a target with `k1 + l2 = j` reads the
    /// states whose label set is exactly `{0, .., j-1}`.
    pub labels: usize,
    pub k1_max: usize,
    pub l2_max: usize,
}

/// Running totals shared across evaluations.
#[derive(Debug, Default)]
pub struct SieveCounters {
    pub dp_states: AtomicU64,
    pub tables: AtomicU64,
    pub queries: AtomicU64,
}

impl SieveCounters {
    pub fn dp_states(&self) -> u64 {
        self.dp_states.load(Ordering::Relaxed)
    }

    pub fn tables(&self) -> u64 {
        self.tables.load(Ordering::Relaxed)
    }

    pub fn queries(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }

    pub(crate) fn count_query(&self) {
        self.queries.fetch_add(1, Ordering::Relaxed);
    }
}

#[derive(Clone, Copy)]
struct Arc {
    to: u32,
    eid: u32,
    /// Position of the arc's tail in `adj[to]`.
    back: u32,
}

/// The view re-indexed to `0..nv` with arcs carrying edge ids.
struct Compact {
    local: Vec<Option<u32>>,
    global: Vec<usize>,
    adj: Vec<Vec<Arc>>,
    v1: Vec<bool>,
    max_deg: usize,
}

impl Compact {
    fn new(view: &SubgraphView<'_>, partition: &Bipartition) -> Self {
        let g = view.base().graph();
        let global = view.vertices().to_vec();
        let mut local = vec![None; g.n()];
        for (i, &v) in global.iter().enumerate() {
            local[v] = Some(i as u32);
        }
        let mut adj: Vec<Vec<Arc>> = Vec::with_capacity(global.len());
        for &v in &global {
            let arcs = g
                .neighbors(v)
                .iter()
                .zip(g.incident_edge_ids(v))
                .filter_map(|(&w, &eid)| {
                    local[w].map(|lw| Arc {
                        to: lw,
                        eid: eid as u32,
                        back: 0,
                    })
                })
                .collect();
            adj.push(arcs);
        }
        for v in 0..adj.len() {
            for i in 0..adj[v].len() {
                let w = adj[v][i].to as usize;
                let back = adj[w]
                    .iter()
                    .position(|a| a.to as usize == v)
                    .expect("undirected adjacency");
                adj[v][i].back = back as u32;
            }
        }
        let max_deg = adj.iter().map(Vec::len).max().unwrap_or(0);
        let v1 = global.iter().map(|&v| partition.is_v1(v)).collect();
        Compact {
            local,
            global,
            adj,
            v1,
            max_deg,
        }
    }
}

#[derive(Clone, Copy)]
struct Dims {
    nv: usize,
    ctx: usize,
    c1: usize,
}

impl Dims {
    #[inline]
    fn index(&self, set: u32, v: usize, ctx: usize, c1: usize) -> usize {
        ((set as usize * self.nv + v) * self.ctx + ctx) * self.c1 + c1
    }

    #[inline]
    fn decode(&self, idx: usize) -> (u32, usize, usize, usize) {
        let c1 = idx % self.c1;
        let rest = idx / self.c1;
        let ctx = rest % self.ctx;
        let rest = rest / self.ctx;
        let v = rest % self.nv;
        ((rest / self.nv) as u32, v, ctx, c1)
    }
}

enum Layer {
    Dense {
        vals: Vec<FieldElem>,
        hit: Vec<bool>,
        touched: Vec<usize>,
    },
    Sparse {
        vals: HashMap<usize, FieldElem>,
        touched: Vec<usize>,
    },
}

impl Layer {
    fn new(slots: usize) -> Self {
        if slots <= DENSE_SLOT_LIMIT {
            Layer::Dense {
                vals: vec![FieldElem::ZERO; slots],
                hit: vec![false; slots],
                touched: Vec::new(),
            }
        } else {
            Layer::Sparse {
                vals: HashMap::new(),
                touched: Vec::new(),
            }
        }
    }

    #[inline]
    fn add(&mut self, idx: usize, val: FieldElem) {
        match self {
            Layer::Dense { vals, hit, touched } => {
                if !hit[idx] {
                    hit[idx] = true;
                    touched.push(idx);
                }
                vals[idx] += val;
            }
            Layer::Sparse { vals, touched } => {
                vals.entry(idx)
                    .and_modify(|x| *x += val)
                    .or_insert_with(|| {
                        touched.push(idx);
                        val
                    });
            }
        }
    }

    fn touched(&self) -> &[usize] {
        match self {
            Layer::Dense { touched, .. } | Layer::Sparse { touched, .. } => touched,
        }
    }

    #[inline]
    fn get(&self, idx: usize) -> FieldElem {
        match self {
            Layer::Dense { vals, .. } => vals[idx],
            Layer::Sparse { vals, .. } => vals.get(&idx).copied().unwrap_or(FieldElem::ZERO),
        }
    }

    fn clear(&mut self) {
        match self {
            Layer::Dense { vals, hit, touched } => {
                for &i in touched.iter() {
                    vals[i] = FieldElem::ZERO;
                    hit[i] = false;
                }
                touched.clear();
            }
            Layer::Sparse { vals, touched } => {
                vals.clear();
                touched.clear();
            }
        }
    }
}

/// Evaluations of the walk polynomial from one start vertex, for every end
/// vertex, every length up to `spec.max_len` and every signature within the
/// spec's bounds, all at one variable assignment.
pub struct WalkTable {
    spec: TableSpec,
    local: Vec<Option<u32>>,
    nv: usize,
    /// `[len][v][j][c1]`: sum over walks ending at `v` whose label set is
    /// exactly `{0..j}` and that visited `c1` vertices of `V1`.
    finals: Vec<FieldElem>,
    states: u64,
}

impl WalkTable {
    /// Runs the dynamic program. `assign` must cover at least `spec.labels`
    /// labels and the view's base graph.
    pub fn build(
        view: &SubgraphView<'_>,
        partition: &Bipartition,
        from: usize,
        spec: TableSpec,
        assign: &VarAssignment,
    ) -> Result<Self> {
        view.check_member(from)?;
        if spec.labels > 31 {
            return Err(Error::LabelBudgetExceeded {
                requested: spec.labels,
                cap: 31,
            });
        }
        if assign.labels() < spec.labels {
            return Err(Error::InvalidConfig(format!(
                "assignment has {} labels, table needs {}",
                assign.labels(),
                spec.labels
            )));
        }
        let compact = Compact::new(view, partition);
        let nv = compact.global.len();
        let dims = Dims {
            nv,
            ctx: compact.max_deg + 1,
            c1: spec.k1_max + 1,
        };
        let slots = (1usize << spec.labels)
            .checked_mul(nv * dims.ctx * dims.c1)
            .ok_or(Error::LabelBudgetExceeded {
                requested: spec.labels,
                cap: 31,
            })?;
        let fdims = (nv, spec.labels + 1, spec.k1_max + 1);
        let mut finals = vec![FieldElem::ZERO; (spec.max_len + 1) * fdims.0 * fdims.1 * fdims.2];
        let final_index = |len: usize, v: usize, j: usize, c1: usize| {
            ((len * fdims.0 + v) * fdims.1 + j) * fdims.2 + c1
        };

        let full: u32 = (1u32 << spec.labels) - 1;
        let mut cur = Layer::new(slots);
        let mut next = Layer::new(slots);
        let start = compact.local[from].expect("member checked") as usize;
        let start_global = compact.global[start];
        if compact.v1[start] {
            if spec.k1_max >= 1 {
                for c in 0..spec.labels {
                    cur.add(
                        dims.index(1 << c, start, 0, 1),
                        assign.vertex_label(start_global, c),
                    );
                }
            }
        } else {
            cur.add(dims.index(0, start, 0, 0), FieldElem::ONE);
        }

        let mut states = 0u64;
        for len in 0..=spec.max_len {
            states += cur.touched().len() as u64;
            for &idx in cur.touched() {
                let (set, v, _, c1) = dims.decode(idx);
                if set & set.wrapping_add(1) == 0 {
                    let j = set.count_ones() as usize;
                    finals[final_index(len, v, j, c1)] += cur.get(idx);
                }
            }
            if len == spec.max_len {
                break;
            }
            for &idx in cur.touched() {
                let val = cur.get(idx);
                let (set, v, ctx, c1) = dims.decode(idx);
                let used = set.count_ones() as usize;
                let v_in_v1 = compact.v1[v];
                for (i, arc) in compact.adj[v].iter().enumerate() {
                    if ctx != 0 && i == ctx - 1 {
                        continue;
                    }
                    let w = arc.to as usize;
                    let eid = arc.eid as usize;
                    let base = val * assign.edge_by_id(eid);
                    if compact.v1[w] {
                        if c1 == spec.k1_max || used == spec.labels {
                            continue;
                        }
                        let guard = if v_in_v1 { 0 } else { arc.back as usize + 1 };
                        let wg = compact.global[w];
                        let mut free = full & !set;
                        while free != 0 {
                            let c = free.trailing_zeros() as usize;
                            free &= free - 1;
                            let y = assign.vertex_label(wg, c);
                            next.add(dims.index(set | (1 << c), w, guard, c1 + 1), base * y);
                        }
                    } else if !v_in_v1 {
                        if used - c1 == spec.l2_max || used == spec.labels {
                            continue;
                        }
                        let mut free = full & !set;
                        while free != 0 {
                            let c = free.trailing_zeros() as usize;
                            free &= free - 1;
                            let y = assign.edge_label_by_id(eid, c);
                            next.add(dims.index(set | (1 << c), w, 0, c1), base * y);
                        }
                    } else {
                        next.add(dims.index(set, w, 0, c1), base);
                    }
                }
            }
            cur.clear();
            std::mem::swap(&mut cur, &mut next);
        }

        Ok(WalkTable {
            spec,
            local: compact.local,
            nv,
            finals,
            states,
        })
    }

    pub fn spec(&self) -> TableSpec {
        self.spec
    }

    /// Number of distinct DP states that received at least one contribution.
    pub fn states_touched(&self) -> u64 {
        self.states
    }

    /// Polynomial value for the target `(to, len, k1, l2)`; `None` when the
    /// target lies outside the table's spec. Zero if `to` is not in the view.
    pub fn value(&self, to: usize, len: usize, k1: usize, l2: usize) -> Option<FieldElem> {
        let s = &self.spec;
        if len > s.max_len || k1 > s.k1_max || l2 > s.l2_max || k1 + l2 > s.labels {
            return None;
        }
        let Some(Some(v)) = self.local.get(to) else {
            return Some(FieldElem::ZERO);
        };
        let j = k1 + l2;
        let idx = ((len * self.nv + *v as usize) * (s.labels + 1) + j) * (s.k1_max + 1) + k1;
        Some(self.finals[idx])
    }
}

/// Exact value of the walk polynomial for `q` at `assign`.
pub fn evaluate_polynomial(q: &SieveQuery<'_, '_>, assign: &VarAssignment) -> Result<FieldElem> {
    evaluate_with_cap(q, assign, DEFAULT_LABEL_CAP)
}

pub fn evaluate_with_cap(
    q: &SieveQuery<'_, '_>,
    assign: &VarAssignment,
    label_cap: usize,
) -> Result<FieldElem> {
    q.validate(label_cap)?;
    let table = WalkTable::build(q.view, q.partition, q.from, q.spec(), assign)?;
    Ok(table
        .value(q.to, q.len, q.k1, q.l2)
        .expect("target within its own spec"))
}

/// One-sided randomized decision: `true` is always correct.
pub fn decide<R: RngCore + ?Sized>(
    q: &SieveQuery<'_, '_>,
    rng: &mut R,
    reps: usize,
) -> Result<bool> {
    decide_counted(q, rng, reps, DEFAULT_LABEL_CAP, None)
}

pub fn decide_counted<R: RngCore + ?Sized>(
    q: &SieveQuery<'_, '_>,
    rng: &mut R,
    reps: usize,
    label_cap: usize,
    counters: Option<&SieveCounters>,
) -> Result<bool> {
    q.validate(label_cap)?;
    if reps == 0 {
        return Err(Error::InvalidConfig("reps must be at least 1".into()));
    }
    let g = q.view.base().graph();
    for _ in 0..reps {
        let assign = VarAssignment::random(g, q.labels(), rng);
        let table = WalkTable::build(q.view, q.partition, q.from, q.spec(), &assign)?;
        if let Some(c) = counters {
            c.dp_states
                .fetch_add(table.states_touched(), Ordering::Relaxed);
            c.tables.fetch_add(1, Ordering::Relaxed);
            c.count_query();
        }
        if !table
            .value(q.to, q.len, q.k1, q.l2)
            .expect("target within spec")
            .is_zero()
        {
            return Ok(true);
        }
    }
    Ok(false)
}

/// DP states touched by one evaluation of `q` (assignment values do not
/// affect the count).
pub fn dp_state_count(q: &SieveQuery<'_, '_>) -> Result<u64> {
    q.validate(DEFAULT_LABEL_CAP)?;
    let g = q.view.base().graph();
    let assign = VarAssignment::from_fn(
        g,
        q.labels(),
        |_, _| FieldElem::ONE,
        |_, _| FieldElem::ONE,
        |_, _, _| FieldElem::ONE,
    );
    Ok(WalkTable::build(q.view, q.partition, q.from, q.spec(), &assign)?.states_touched())
}

/// Several independently assigned tables sharing one start vertex; answers
/// many targets at once. A target is accepted if any table is nonzero.
pub struct SieveBatch {
    tables: Vec<WalkTable>,
}

impl SieveBatch {
    #[allow(clippy::too_many_arguments)]
    pub fn build<R: RngCore + ?Sized>(
        view: &SubgraphView<'_>,
        partition: &Bipartition,
        from: usize,
        spec: TableSpec,
        reps: usize,
        rng: &mut R,
        label_cap: usize,
        counters: Option<&SieveCounters>,
    ) -> Result<Self> {
        if spec.labels > label_cap {
            return Err(Error::LabelBudgetExceeded {
                requested: spec.labels,
                cap: label_cap,
            });
        }
        if reps == 0 {
            return Err(Error::InvalidConfig("reps must be at least 1".into()));
        }
        let g = view.base().graph();
        let mut tables = Vec::with_capacity(reps);
        for _ in 0..reps {
            let assign = VarAssignment::random(g, spec.labels, rng);
            let table = WalkTable::build(view, partition, from, spec, &assign)?;
            if let Some(c) = counters {
                c.dp_states
                    .fetch_add(table.states_touched(), Ordering::Relaxed);
                c.tables.fetch_add(1, Ordering::Relaxed);
            }
            tables.push(table);
        }
        Ok(SieveBatch { tables })
    }

    /// `None` if the target is outside the batch's spec.
    pub fn decide(&self, to: usize, len: usize, k1: usize, l2: usize) -> Option<bool> {
        let mut any = false;
        for t in &self.tables {
            if !t.value(to, len, k1, l2)?.is_zero() {
                any = true;
            }
        }
        Some(any)
    }

    pub fn spec(&self) -> TableSpec {
        self.tables[0].spec()
    }
}
