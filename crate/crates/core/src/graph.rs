//! Undirected graphs, BFS layering from a source, edge classes, bipartitions
//! and the interval/tail subgraph views the detour program works on.

use std::collections::{BTreeSet, VecDeque};

use rand::Rng;

use crate::error::{Error, Result};

/// Simple undirected graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    // edge ids parallel to `adj`
    adj_eid: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, duplicate edges and bad ids.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut list = Vec::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::InvalidVertex { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                return Err(Error::DuplicateEdge(u, v));
            }
            list.push(key);
        }
        let mut pairs: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for (id, &(u, v)) in list.iter().enumerate() {
            pairs[u].push((v, id));
            pairs[v].push((u, id));
        }
        let mut adj = Vec::with_capacity(n);
        let mut adj_eid = Vec::with_capacity(n);
        for mut nbrs in pairs {
            nbrs.sort_unstable();
            adj.push(nbrs.iter().map(|&(w, _)| w).collect());
            adj_eid.push(nbrs.iter().map(|&(_, id)| id).collect());
        }
        Ok(Graph {
            n,
            edges: list,
            adj,
            adj_eid,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Edges in insertion order, each normalised to `(min, max)`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    /// Edge ids of `v`'s incident edges, in the same order as [`Graph::neighbors`].
    pub fn incident_edge_ids(&self, v: usize) -> &[usize] {
        &self.adj_eid[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_id(u, v).is_some()
    }

    /// Index of `{u, v}` in [`Graph::edges`].
    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        if u >= self.n || v >= self.n {
            return None;
        }
        self.adj[u]
            .binary_search(&v)
            .ok()
            .map(|i| self.adj_eid[u][i])
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::InvalidVertex {
                vertex: v,
                n: self.n,
            })
        }
    }

    /// The same graph with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.n {
            return Err(Error::InvalidConfig(format!(
                "permutation has {} entries, graph has {} vertices",
                perm.len(),
                self.n
            )));
        }
        Graph::new(self.n, self.edges.iter().map(|&(u, v)| (perm[u], perm[v])))
    }
}

/// Direction-dependent class of a traversed edge `u -> v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeClass {
    Forward,
    Backward,
    Stable,
}

/// A graph together with BFS distances from a source vertex.
#[derive(Clone, Debug)]
pub struct LayeredGraph {
    graph: Graph,
    source: usize,
    dist: Vec<Option<usize>>,
    layers: Vec<Vec<usize>>,
}

impl LayeredGraph {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn n(&self) -> usize {
        self.graph.n
    }

    /// `d(v)`, or `None` when `v` is unreachable from the source.
    pub fn dist(&self, v: usize) -> Option<usize> {
        self.dist[v]
    }

    pub fn distances(&self) -> &[Option<usize>] {
        &self.dist
    }

    /// Vertices at BFS depth `d`, ascending. Empty past the deepest layer.
    pub fn layer(&self, d: usize) -> &[usize] {
        self.layers.get(d).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn depth(&self) -> usize {
        self.layers.len().saturating_sub(1)
    }

    fn reachable_dist(&self, v: usize) -> Result<usize> {
        self.graph.check_vertex(v)?;
        self.dist[v].ok_or(Error::Unreachable(v))
    }

    pub fn classify_edge(&self, u: usize, v: usize) -> Result<EdgeClass> {
        let du = self.reachable_dist(u)?;
        let dv = self.reachable_dist(v)?;
        if !self.graph.has_edge(u, v) {
            return Err(Error::NotAnEdge(u, v));
        }
        Ok(if dv == du + 1 {
            EdgeClass::Forward
        } else if du == dv + 1 {
            EdgeClass::Backward
        } else {
            EdgeClass::Stable
        })
    }

    /// Odd layers go to `V1`, even layers and unreachable vertices to `V2`.
    pub fn parity_partition(&self) -> Bipartition {
        Bipartition {
            in_v1: self
                .dist
                .iter()
                .map(|d| matches!(d, Some(d) if d % 2 == 1))
                .collect(),
        }
    }

    pub fn interval(&self, x: usize, y: usize) -> Result<SubgraphView<'_>> {
        self.view(ViewKind::Interval(x, y))
    }

    pub fn tail(&self, x: usize) -> Result<SubgraphView<'_>> {
        self.view(ViewKind::Tail(x))
    }

    pub fn full_view(&self) -> SubgraphView<'_> {
        SubgraphView::build(self, ViewKind::Tail(self.source), 0, None)
    }

    pub fn view(&self, kind: ViewKind) -> Result<SubgraphView<'_>> {
        match kind {
            ViewKind::Interval(x, y) => {
                let dx = self.reachable_dist(x)?;
                let dy = self.reachable_dist(y)?;
                if dx >= dy {
                    return Err(Error::EmptyInterval { dx, dy });
                }
                Ok(SubgraphView::build(self, kind, dx, Some(dy)))
            }
            ViewKind::Tail(x) => {
                let dx = self.reachable_dist(x)?;
                Ok(SubgraphView::build(self, kind, dx, None))
            }
        }
    }
}

/// BFS distances from `s`.
pub fn bfs_layers(g: &Graph, s: usize) -> Result<LayeredGraph> {
    g.check_vertex(s)?;
    let mut dist = vec![None; g.n];
    let mut layers: Vec<Vec<usize>> = Vec::new();
    let mut queue = VecDeque::from([s]);
    dist[s] = Some(0);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].expect("queued vertices have a distance");
        if layers.len() <= du {
            layers.push(Vec::new());
        }
        layers[du].push(u);
        for &w in &g.adj[u] {
            if dist[w].is_none() {
                dist[w] = Some(du + 1);
                queue.push_back(w);
            }
        }
    }
    for layer in &mut layers {
        layer.sort_unstable();
    }
    Ok(LayeredGraph {
        graph: g.clone(),
        source: s,
        dist,
        layers,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Part {
    V1,
    V2,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bipartition {
    in_v1: Vec<bool>,
}

impl Bipartition {
    pub fn from_parts(parts: impl IntoIterator<Item = Part>) -> Self {
        Bipartition {
            in_v1: parts.into_iter().map(|p| p == Part::V1).collect(),
        }
    }

    pub fn from_v1_flags(in_v1: Vec<bool>) -> Self {
        Bipartition { in_v1 }
    }

    pub fn len(&self) -> usize {
        self.in_v1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.in_v1.is_empty()
    }

    #[inline]
    pub fn is_v1(&self, v: usize) -> bool {
        self.in_v1[v]
    }

    pub fn part(&self, v: usize) -> Part {
        if self.in_v1[v] {
            Part::V1
        } else {
            Part::V2
        }
    }

    pub fn v1(&self) -> impl Iterator<Item = usize> + '_ {
        self.in_v1
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(v, _)| v)
    }

    pub fn v2(&self) -> impl Iterator<Item = usize> + '_ {
        self.in_v1
            .iter()
            .enumerate()
            .filter(|(_, &b)| !b)
            .map(|(v, _)| v)
    }
}

/// Each vertex independently and uniformly in `V1` or `V2`.
pub fn random_partition<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> Bipartition {
    Bipartition {
        in_v1: (0..g.n).map(|_| rng.gen::<bool>()).collect(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ViewKind {
    /// `G_(x,y]`: `x` plus every vertex `w` with `d(x) < d(w) <= d(y)`.
    Interval(usize, usize),
    /// `G_(x,inf)`: `x` plus every vertex strictly deeper than `x`.
    Tail(usize),
}

/// Induced subgraph of a [`LayeredGraph`] selected by depth.
#[derive(Clone, Debug)]
pub struct SubgraphView<'a> {
    base: &'a LayeredGraph,
    kind: ViewKind,
    members: Vec<bool>,
    vertices: Vec<usize>,
}

impl<'a> SubgraphView<'a> {
    fn build(base: &'a LayeredGraph, kind: ViewKind, dx: usize, dy: Option<usize>) -> Self {
        let anchor = match kind {
            ViewKind::Interval(x, _) | ViewKind::Tail(x) => x,
        };
        let members: Vec<bool> = base
            .dist
            .iter()
            .enumerate()
            .map(|(w, d)| match *d {
                None => false,
                Some(_) if w == anchor => true,
                Some(dw) => dw > dx && dy.is_none_or(|dy| dw <= dy),
            })
            .collect();
        let vertices = members
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(v, _)| v)
            .collect();
        SubgraphView {
            base,
            kind,
            members,
            vertices,
        }
    }

    pub fn base(&self) -> &'a LayeredGraph {
        self.base
    }

    pub fn kind(&self) -> ViewKind {
        self.kind
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.members.len() && self.members[v]
    }

    /// Member vertices, ascending.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Neighbours of `v` inside the view, ascending.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.base
            .graph
            .neighbors(v)
            .iter()
            .copied()
            .filter(move |&w| self.members[w])
    }

    pub fn check_member(&self, v: usize) -> Result<()> {
        self.base.graph.check_vertex(v)?;
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::NotInView(v))
        }
    }
}
