//! Mutable multigraph with parallel edges, O(1) degree-bucket sampling, and
//! set contraction.
//!
//! Vertices and edges are identified by monotonically increasing ids that are
//! never reused. Edge ids survive contraction: an edge keeps its id (and its
//! frozen `origin` endpoints) when an endpoint is merged away, which is what
//! lets a matching computed on a reduced graph be mapped back onto the input
//! graph. Self-loops are rejected at construction and structurally impossible
//! afterwards: contraction deletes internal edges instead of folding them.

use std::collections::HashMap;
use std::fmt;
use std::io::{BufRead, Write};

use rand::Rng;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use thiserror::Error;

/// Degree histogram: `histogram[d]` counts the alive vertices of degree `d`.
/// Inline up to degree 7, which keeps low-order runs free of a heap
/// allocation per snapshot; higher-degree runs spill transparently.
pub type DegreeHistogram = SmallVec<[u32; 8]>;

/// Identifier of a vertex. Stable for the lifetime of a graph; never reused.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

/// Identifier of an edge. Stable under contraction; never reused.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl EdgeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Errors from graph mutation and sampling operations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop rejected at {0}")]
    LoopRejected(VertexId),
    #[error("unknown or removed vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown or removed edge {0}")]
    UnknownEdge(EdgeId),
    #[error("vertex {vertex} still has degree {degree}")]
    NonzeroDegree { vertex: VertexId, degree: usize },
    #[error("contraction set has {0} vertices, need at least 2")]
    SetTooSmall(usize),
    #[error("no vertex of degree {0}")]
    EmptyBucket(usize),
    #[error("graph is empty")]
    EmptyGraph,
    #[error("vertex {0} has no incident edge")]
    IsolatedVertex(VertexId),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for GraphError {
    fn from(e: std::io::Error) -> Self {
        GraphError::Io(e.to_string())
    }
}

#[derive(Debug, Clone)]
struct VertexSlot {
    alive: bool,
    /// Incident edge ids; parallel edges appear once per copy, so sampling an
    /// index uniformly weights edges by multiplicity. Inline up to degree 8,
    /// so ordinary vertices never touch a separate heap buffer.
    incidence: SmallVec<[EdgeId; 8]>,
    /// Position inside `buckets[degree]`.
    bucket_pos: u32,
    /// Scratch flag used by `contract_set`.
    in_set: bool,
}

#[derive(Debug, Clone)]
struct EdgeSlot {
    alive: bool,
    a: VertexId,
    b: VertexId,
    /// Position of this edge inside the incidence list of `a` / `b`.
    pos_a: u32,
    pos_b: u32,
    /// Endpoints at creation time. Never updated by contraction.
    origin: (VertexId, VertexId),
}

/// An edge deleted by a graph operation, with its endpoints at deletion time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RemovedEdge {
    pub edge: EdgeId,
    pub a: VertexId,
    pub b: VertexId,
}

/// An edge re-pointed at a merged vertex by a contraction, with the endpoint
/// it was attached to before.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbsorbedEdge {
    pub edge: EdgeId,
    pub former: VertexId,
}

/// Receipt returned by [`MultiGraph::contract_set_detailed`], carrying enough
/// provenance to replay or undo the contraction.
#[derive(Debug, Clone)]
pub struct ContractionDetail {
    pub new_vertex: VertexId,
    /// Edges with both endpoints inside the set, deleted by the contraction.
    pub internal_edges: Vec<RemovedEdge>,
    /// Edges re-pointed to the merged vertex.
    pub absorbed: Vec<AbsorbedEdge>,
}

/// Undirected multigraph. No self-loops, parallel edges allowed.
#[derive(Debug, Clone)]
pub struct MultiGraph {
    vertices: Vec<VertexSlot>,
    edges: Vec<EdgeSlot>,
    /// `buckets[d]` holds exactly the alive vertices of degree `d`.
    buckets: Vec<Vec<VertexId>>,
    n_alive: usize,
    m_alive: usize,
    /// Anchors for lazy min/max degree scans. `min_anchor` never exceeds the
    /// true minimum degree; `max_anchor` is never below the true maximum.
    min_anchor: usize,
    max_anchor: usize,
}

impl MultiGraph {
    /// Graph with vertices `0..n` and no edges.
    pub fn new_graph(n: usize) -> Self {
        let mut g = MultiGraph {
            vertices: Vec::with_capacity(n),
            edges: Vec::new(),
            buckets: vec![Vec::with_capacity(n)],
            n_alive: n,
            m_alive: 0,
            min_anchor: 0,
            max_anchor: 0,
        };
        for i in 0..n {
            g.vertices.push(VertexSlot {
                alive: true,
                incidence: SmallVec::new(),
                bucket_pos: i as u32,
                in_set: false,
            });
            g.buckets[0].push(VertexId(i as u32));
        }
        g
    }

    pub fn vertex_count(&self) -> usize {
        self.n_alive
    }

    pub fn edge_count(&self) -> usize {
        self.m_alive
    }

    pub fn is_empty(&self) -> bool {
        self.n_alive == 0
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.get(v.index()).map(|s| s.alive).unwrap_or(false)
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.edges.get(e.index()).map(|s| s.alive).unwrap_or(false)
    }

    fn slot(&self, v: VertexId) -> Result<&VertexSlot, GraphError> {
        self.vertices
            .get(v.index())
            .filter(|s| s.alive)
            .ok_or(GraphError::UnknownVertex(v))
    }

    fn eslot(&self, e: EdgeId) -> Result<&EdgeSlot, GraphError> {
        self.edges
            .get(e.index())
            .filter(|s| s.alive)
            .ok_or(GraphError::UnknownEdge(e))
    }

    pub fn degree(&self, v: VertexId) -> Result<usize, GraphError> {
        Ok(self.slot(v)?.incidence.len())
    }

    /// Current endpoints of an edge (may differ from `origin` after
    /// contractions).
    pub fn endpoints(&self, e: EdgeId) -> Result<(VertexId, VertexId), GraphError> {
        let s = self.eslot(e)?;
        Ok((s.a, s.b))
    }

    /// Endpoints the edge was created with. Valid even for removed edges.
    pub fn origin(&self, e: EdgeId) -> Result<(VertexId, VertexId), GraphError> {
        self.edges
            .get(e.index())
            .map(|s| s.origin)
            .ok_or(GraphError::UnknownEdge(e))
    }

    pub fn incident_edges(&self, v: VertexId) -> Result<&[EdgeId], GraphError> {
        Ok(&self.slot(v)?.incidence)
    }

    /// Alive vertices in increasing id order.
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices
            .iter()
            .enumerate()
            .filter(|(_, s)| s.alive)
            .map(|(i, _)| VertexId(i as u32))
    }

    /// Alive edges in increasing id order.
    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, VertexId, VertexId)> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, s)| s.alive)
            .map(|(i, s)| (EdgeId(i as u32), s.a, s.b))
    }

    fn bucket_remove(&mut self, v: VertexId) {
        let d = self.vertices[v.index()].incidence.len();
        let pos = self.vertices[v.index()].bucket_pos as usize;
        let bucket = &mut self.buckets[d];
        let last = bucket.len() - 1;
        bucket.swap(pos, last);
        bucket.pop();
        if pos < bucket.len() {
            let moved = bucket[pos];
            self.vertices[moved.index()].bucket_pos = pos as u32;
        }
    }

    fn bucket_insert(&mut self, v: VertexId, d: usize) {
        if self.buckets.len() <= d {
            self.buckets.resize_with(d + 1, Vec::new);
        }
        self.vertices[v.index()].bucket_pos = self.buckets[d].len() as u32;
        self.buckets[d].push(v);
        if d > self.max_anchor {
            self.max_anchor = d;
        }
        if d < self.min_anchor {
            self.min_anchor = d;
        }
    }

    /// Minimum degree over alive vertices. Panics on an empty graph.
    pub fn min_degree(&mut self) -> usize {
        debug_assert!(self.n_alive > 0);
        while self.min_anchor < self.buckets.len() && self.buckets[self.min_anchor].is_empty() {
            self.min_anchor += 1;
        }
        self.min_anchor
    }

    /// Maximum degree over alive vertices. Panics on an empty graph.
    pub fn max_degree(&mut self) -> usize {
        debug_assert!(self.n_alive > 0);
        while self.max_anchor > 0 && self.buckets[self.max_anchor].is_empty() {
            self.max_anchor -= 1;
        }
        self.max_anchor
    }

    /// Adds an edge between two distinct alive vertices, returning a fresh id.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<EdgeId, GraphError> {
        if u == v {
            return Err(GraphError::LoopRejected(u));
        }
        self.slot(u)?;
        self.slot(v)?;
        let e = EdgeId(self.edges.len() as u32);
        let (du, dv) = (
            self.vertices[u.index()].incidence.len(),
            self.vertices[v.index()].incidence.len(),
        );
        self.bucket_remove(u);
        self.bucket_remove(v);
        self.edges.push(EdgeSlot {
            alive: true,
            a: u,
            b: v,
            pos_a: du as u32,
            pos_b: dv as u32,
            origin: (u, v),
        });
        self.vertices[u.index()].incidence.push(e);
        self.vertices[v.index()].incidence.push(e);
        self.bucket_insert(u, du + 1);
        self.bucket_insert(v, dv + 1);
        self.m_alive += 1;
        Ok(e)
    }

    /// Detaches `e` from the incidence list of endpoint `v`, fixing the
    /// position index of whichever edge gets swapped into its place.
    fn detach(&mut self, e: EdgeId, v: VertexId, pos: u32) {
        let inc = &mut self.vertices[v.index()].incidence;
        debug_assert_eq!(inc[pos as usize], e);
        let last = inc.len() - 1;
        inc.swap(pos as usize, last);
        inc.pop();
        if (pos as usize) < inc.len() {
            let moved = inc[pos as usize];
            let ms = &mut self.edges[moved.index()];
            if ms.a == v && ms.pos_a as usize == inc.len() {
                ms.pos_a = pos;
            } else {
                debug_assert!(ms.b == v && ms.pos_b as usize == inc.len());
                ms.pos_b = pos;
            }
        }
    }

    /// Removes an edge. Re-adding the same endpoints later yields a fresh id.
    pub fn remove_edge(&mut self, e: EdgeId) -> Result<(), GraphError> {
        let s = self.eslot(e)?;
        let (a, b, pa, pb) = (s.a, s.b, s.pos_a, s.pos_b);
        self.bucket_remove(a);
        self.bucket_remove(b);
        self.detach(e, a, pa);
        self.detach(e, b, pb);
        self.edges[e.index()].alive = false;
        let (da, db) = (
            self.vertices[a.index()].incidence.len(),
            self.vertices[b.index()].incidence.len(),
        );
        self.bucket_insert(a, da);
        self.bucket_insert(b, db);
        self.m_alive -= 1;
        Ok(())
    }

    /// Removes an isolated vertex.
    pub fn remove_vertex(&mut self, v: VertexId) -> Result<(), GraphError> {
        let d = self.slot(v)?.incidence.len();
        if d != 0 {
            return Err(GraphError::NonzeroDegree { vertex: v, degree: d });
        }
        self.bucket_remove(v);
        self.vertices[v.index()].alive = false;
        self.n_alive -= 1;
        Ok(())
    }

    /// Contracts a set of at least two distinct vertices into one fresh
    /// vertex. Edges inside the set are deleted; edges leaving the set keep
    /// their ids and are re-pointed at the merged vertex, so
    /// `degree(new) = sum of member degrees - 2 * internal_dropped`.
    pub fn contract_set(&mut self, set: &[VertexId]) -> Result<(VertexId, usize), GraphError> {
        let d = self.contract_set_detailed(set)?;
        Ok((d.new_vertex, d.internal_edges.len()))
    }

    /// [`MultiGraph::contract_set`] with a full provenance receipt.
    pub fn contract_set_detailed(
        &mut self,
        set: &[VertexId],
    ) -> Result<ContractionDetail, GraphError> {
        if set.len() < 2 {
            return Err(GraphError::SetTooSmall(set.len()));
        }
        for &v in set {
            self.slot(v)?;
            if self.vertices[v.index()].in_set {
                // Duplicate entries would corrupt the degree arithmetic.
                for &u in set {
                    self.vertices[u.index()].in_set = false;
                }
                return Err(GraphError::UnknownVertex(v));
            }
            self.vertices[v.index()].in_set = true;
        }
        // Members leave their buckets now, while their degrees still match;
        // edge processing below mutates their incidence lists freely.
        for &v in set {
            self.bucket_remove(v);
        }

        let vc = VertexId(self.vertices.len() as u32);
        self.vertices.push(VertexSlot {
            alive: true,
            incidence: SmallVec::new(),
            bucket_pos: 0,
            in_set: false,
        });
        self.n_alive += 1;

        let mut internal_edges = Vec::new();
        let mut absorbed = Vec::new();
        for &m in set {
            // Each pass empties m's incidence list from the back: both the
            // delete branch and the re-point branch detach the edge from m,
            // so the loop makes progress without a snapshot.
            while let Some(&e) = self.vertices[m.index()].incidence.last() {
                let s = &self.edges[e.index()];
                debug_assert!(s.alive);
                let (a, b, pa, pb) = (s.a, s.b, s.pos_a, s.pos_b);
                let internal =
                    self.vertices[a.index()].in_set && self.vertices[b.index()].in_set;
                if internal {
                    self.detach(e, a, pa);
                    self.detach(e, b, pb);
                    self.edges[e.index()].alive = false;
                    self.m_alive -= 1;
                    internal_edges.push(RemovedEdge { edge: e, a, b });
                } else {
                    // Exactly one endpoint (m) is in the set.
                    let (inside, pos) = if self.vertices[a.index()].in_set {
                        (a, pa)
                    } else {
                        (b, pb)
                    };
                    debug_assert_eq!(inside, m);
                    self.detach(e, inside, pos);
                    let npos = self.vertices[vc.index()].incidence.len() as u32;
                    let s = &mut self.edges[e.index()];
                    if s.a == inside {
                        s.a = vc;
                        s.pos_a = npos;
                    } else {
                        s.b = vc;
                        s.pos_b = npos;
                    }
                    self.vertices[vc.index()].incidence.push(e);
                    absorbed.push(AbsorbedEdge { edge: e, former: inside });
                }
            }
        }

        for &m in set {
            let ms = &mut self.vertices[m.index()];
            debug_assert!(ms.incidence.is_empty());
            ms.alive = false;
            ms.in_set = false;
            self.n_alive -= 1;
        }
        let dc = self.vertices[vc.index()].incidence.len();
        self.bucket_insert(vc, dc);

        Ok(ContractionDetail {
            new_vertex: vc,
            internal_edges,
            absorbed,
        })
    }

    /// Uniformly random vertex of the given degree.
    pub fn random_vertex_with_degree<R: Rng + ?Sized>(
        &self,
        d: usize,
        rng: &mut R,
    ) -> Result<VertexId, GraphError> {
        let bucket = self.buckets.get(d).ok_or(GraphError::EmptyBucket(d))?;
        if bucket.is_empty() {
            return Err(GraphError::EmptyBucket(d));
        }
        Ok(bucket[rng.random_range(0..bucket.len())])
    }

    /// Uniformly random vertex among those of maximum degree.
    pub fn random_max_degree_vertex<R: Rng + ?Sized>(
        &mut self,
        rng: &mut R,
    ) -> Result<VertexId, GraphError> {
        if self.n_alive == 0 {
            return Err(GraphError::EmptyGraph);
        }
        let d = self.max_degree();
        self.random_vertex_with_degree(d, rng)
    }

    /// Uniformly random incident edge, parallel edges weighted by
    /// multiplicity.
    pub fn random_incident_edge<R: Rng + ?Sized>(
        &self,
        v: VertexId,
        rng: &mut R,
    ) -> Result<EdgeId, GraphError> {
        let inc = &self.slot(v)?.incidence;
        if inc.is_empty() {
            return Err(GraphError::IsolatedVertex(v));
        }
        Ok(inc[rng.random_range(0..inc.len())])
    }

    /// `histogram[d]` = number of alive vertices of degree `d`. Empty for the
    /// empty graph.
    pub fn degree_histogram(&mut self) -> DegreeHistogram {
        if self.n_alive == 0 {
            return DegreeHistogram::new();
        }
        let top = self.max_degree();
        (0..=top).map(|d| self.buckets[d].len() as u32).collect()
    }

    /// `sum over v of max(degree(v) - ell, 0)`.
    pub fn excess(&mut self, ell: usize) -> usize {
        if self.n_alive == 0 {
            return 0;
        }
        let top = self.max_degree();
        let mut s = 0;
        for d in ell + 1..=top {
            s += (d - ell) * self.buckets[d].len();
        }
        s
    }

    /// Fraction of edge endpoints on degree-`j` vertices:
    /// `j * n_j / (2|E|)`. Errors when the graph has no edges.
    pub fn p_j(&mut self, j: usize) -> Result<f64, GraphError> {
        if self.m_alive == 0 {
            return Err(GraphError::EmptyGraph);
        }
        let nj = if self.n_alive == 0 || j >= self.buckets.len() {
            0
        } else {
            self.buckets[j].len()
        };
        Ok((j * nj) as f64 / (2 * self.m_alive) as f64)
    }

    /// Next vertex id that would be handed out.
    pub fn vertex_id_bound(&self) -> usize {
        self.vertices.len()
    }

    /// Next edge id that would be handed out.
    pub fn edge_id_bound(&self) -> usize {
        self.edges.len()
    }

    // --- restore primitives used by log rewind ------------------------------

    /// Shell with `nv` dead vertex slots and `ne` dead edge slots, for
    /// rebuilding a graph from a rewind.
    pub(crate) fn shell(nv: usize, ne: usize) -> Self {
        let mut g = MultiGraph {
            vertices: Vec::with_capacity(nv),
            edges: Vec::with_capacity(ne),
            buckets: vec![Vec::new()],
            n_alive: 0,
            m_alive: 0,
            min_anchor: 0,
            max_anchor: 0,
        };
        for _ in 0..nv {
            g.vertices.push(VertexSlot {
                alive: false,
                incidence: SmallVec::new(),
                bucket_pos: 0,
                in_set: false,
            });
        }
        for i in 0..ne {
            g.edges.push(EdgeSlot {
                alive: false,
                a: VertexId(0),
                b: VertexId(0),
                pos_a: 0,
                pos_b: 0,
                origin: (VertexId(i as u32), VertexId(i as u32)),
            });
        }
        g
    }

    pub(crate) fn restore_vertex(&mut self, v: VertexId) {
        let s = &mut self.vertices[v.index()];
        debug_assert!(!s.alive && s.incidence.is_empty());
        s.alive = true;
        self.n_alive += 1;
        self.bucket_insert(v, 0);
    }

    /// Re-adds a dead edge slot with the given endpoints. The origin is set to
    /// the endpoints; a full rewind re-points them to the true origin.
    pub(crate) fn restore_edge(&mut self, e: EdgeId, a: VertexId, b: VertexId) {
        debug_assert!(!self.edges[e.index()].alive);
        debug_assert!(a != b);
        let (da, db) = (
            self.vertices[a.index()].incidence.len(),
            self.vertices[b.index()].incidence.len(),
        );
        self.bucket_remove(a);
        self.bucket_remove(b);
        let s = &mut self.edges[e.index()];
        s.alive = true;
        s.a = a;
        s.b = b;
        s.pos_a = da as u32;
        s.pos_b = db as u32;
        s.origin = (a, b);
        self.vertices[a.index()].incidence.push(e);
        self.vertices[b.index()].incidence.push(e);
        self.bucket_insert(a, da + 1);
        self.bucket_insert(b, db + 1);
        self.m_alive += 1;
    }

    /// Moves one endpoint of an alive edge from `from` to `to`.
    pub(crate) fn repoint_edge(&mut self, e: EdgeId, from: VertexId, to: VertexId) {
        debug_assert!(self.edges[e.index()].alive);
        let (a, b, pa, pb) = {
            let s = &self.edges[e.index()];
            (s.a, s.b, s.pos_a, s.pos_b)
        };
        let (side_a, pos) = if a == from {
            (true, pa)
        } else {
            debug_assert_eq!(b, from);
            (false, pb)
        };
        let dturn = self.vertices[to.index()].incidence.len();
        self.bucket_remove(from);
        self.bucket_remove(to);
        self.detach(e, from, pos);
        let npos = self.vertices[to.index()].incidence.len() as u32;
        {
            let s = &mut self.edges[e.index()];
            if side_a {
                s.a = to;
                s.pos_a = npos;
            } else {
                s.b = to;
                s.pos_b = npos;
            }
        }
        self.vertices[to.index()].incidence.push(e);
        let dfrom = self.vertices[from.index()].incidence.len();
        self.bucket_insert(from, dfrom);
        self.bucket_insert(to, dturn + 1);
    }

    pub(crate) fn kill_vertex_slot(&mut self, v: VertexId) {
        debug_assert!(self.vertices[v.index()].incidence.is_empty());
        self.bucket_remove(v);
        self.vertices[v.index()].alive = false;
        self.n_alive -= 1;
    }

    /// Checks the internal bookkeeping: degree sum, bucket partition, position
    /// indices, loop freedom. O(V + E); intended for tests.
    pub fn check_invariants(&self) -> Result<(), String> {
        let mut deg_sum = 0;
        let mut seen_alive = 0;
        for (i, s) in self.vertices.iter().enumerate() {
            if !s.alive {
                continue;
            }
            seen_alive += 1;
            deg_sum += s.incidence.len();
            let v = VertexId(i as u32);
            let d = s.incidence.len();
            let bucket = self
                .buckets
                .get(d)
                .ok_or_else(|| format!("{v}: no bucket of degree {d}"))?;
            if bucket.get(s.bucket_pos as usize) != Some(&v) {
                return Err(format!("{v}: bucket position out of sync"));
            }
            for (pos, &e) in s.incidence.iter().enumerate() {
                let es = &self.edges[e.index()];
                if !es.alive {
                    return Err(format!("{v}: dead edge {e} in incidence"));
                }
                let ok = (es.a == v && es.pos_a as usize == pos)
                    || (es.b == v && es.pos_b as usize == pos);
                if !ok {
                    return Err(format!("{e}: position desync at {v}"));
                }
            }
        }
        if seen_alive != self.n_alive {
            return Err("n_alive out of sync".into());
        }
        let mut edges_alive = 0;
        for (i, s) in self.edges.iter().enumerate() {
            if !s.alive {
                continue;
            }
            edges_alive += 1;
            if s.a == s.b {
                return Err(format!("e{i}: self-loop"));
            }
        }
        if edges_alive != self.m_alive {
            return Err("m_alive out of sync".into());
        }
        if deg_sum != 2 * self.m_alive {
            return Err(format!(
                "degree sum {deg_sum} != 2|E| = {}",
                2 * self.m_alive
            ));
        }
        let bucket_total: usize = self.buckets.iter().map(Vec::len).sum();
        if bucket_total != self.n_alive {
            return Err("buckets do not partition the vertex set".into());
        }
        Ok(())
    }

    // --- edge-list text format ----------------------------------------------

    /// Writes `# vertices=N edges=M` followed by one `u v` line per edge
    /// (parallel edges repeated). Vertices are relabeled compactly by
    /// increasing id; for a freshly built graph this is the identity.
    pub fn write_edge_list<W: Write>(&self, out: &mut W) -> Result<(), GraphError> {
        let mut label = HashMap::new();
        for (i, v) in self.vertices().enumerate() {
            label.insert(v, i);
        }
        writeln!(out, "# vertices={} edges={}", self.n_alive, self.m_alive)?;
        for (_, a, b) in self.edges() {
            writeln!(out, "{} {}", label[&a], label[&b])?;
        }
        Ok(())
    }

    /// Parses the format written by [`MultiGraph::write_edge_list`].
    pub fn read_edge_list<R: BufRead>(input: R) -> Result<Self, GraphError> {
        let mut g = None;
        let mut declared_edges = 0usize;
        for (no, line) in input.lines().enumerate() {
            let line = line?;
            let line_no = no + 1;
            let t = line.trim();
            if t.is_empty() {
                continue;
            }
            if let Some(rest) = t.strip_prefix('#') {
                if g.is_some() {
                    continue; // later comments are ignored
                }
                let mut vertices = None;
                let mut edges = None;
                for field in rest.split_whitespace() {
                    if let Some(v) = field.strip_prefix("vertices=") {
                        vertices = v.parse::<usize>().ok();
                    } else if let Some(v) = field.strip_prefix("edges=") {
                        edges = v.parse::<usize>().ok();
                    }
                }
                let (n, m) = match (vertices, edges) {
                    (Some(n), Some(m)) => (n, m),
                    _ => {
                        return Err(GraphError::Parse {
                            line: line_no,
                            reason: "header must declare vertices= and edges=".into(),
                        })
                    }
                };
                g = Some(MultiGraph::new_graph(n));
                declared_edges = m;
                continue;
            }
            let g = g.as_mut().ok_or(GraphError::Parse {
                line: line_no,
                reason: "missing `# vertices=N edges=M` header".into(),
            })?;
            let mut it = t.split_whitespace();
            let parse = |tok: Option<&str>| -> Result<usize, GraphError> {
                tok.and_then(|s| s.parse::<usize>().ok())
                    .ok_or(GraphError::Parse {
                        line: line_no,
                        reason: "expected `u v`".into(),
                    })
            };
            let u = parse(it.next())?;
            let v = parse(it.next())?;
            if it.next().is_some() {
                return Err(GraphError::Parse {
                    line: line_no,
                    reason: "expected exactly two fields".into(),
                });
            }
            let n = g.vertex_count();
            if u >= n || v >= n {
                return Err(GraphError::Parse {
                    line: line_no,
                    reason: format!("vertex {} out of range 0..{n}", u.max(v)),
                });
            }
            g.add_edge(VertexId(u as u32), VertexId(v as u32))
                .map_err(|e| GraphError::Parse {
                    line: line_no,
                    reason: e.to_string(),
                })?;
        }
        let g = g.ok_or(GraphError::Parse {
            line: 0,
            reason: "empty input".into(),
        })?;
        if g.edge_count() != declared_edges {
            return Err(GraphError::Parse {
                line: 0,
                reason: format!(
                    "header declares {declared_edges} edges, found {}",
                    g.edge_count()
                ),
            });
        }
        Ok(g)
    }
}

impl PartialEq for MultiGraph {
    /// Structural equality on ids: same alive vertex set, same alive edges
    /// with the same (unordered) endpoints.
    fn eq(&self, other: &Self) -> bool {
        let va: Vec<VertexId> = self.vertices().collect();
        let vb: Vec<VertexId> = other.vertices().collect();
        if va != vb {
            return false;
        }
        let norm = |g: &MultiGraph| -> Vec<(EdgeId, VertexId, VertexId)> {
            g.edges()
                .map(|(e, a, b)| if a <= b { (e, a, b) } else { (e, b, a) })
                .collect()
        };
        norm(self) == norm(other)
    }
}

impl Eq for MultiGraph {}
