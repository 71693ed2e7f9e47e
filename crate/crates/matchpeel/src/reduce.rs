//! Degree-dispatched peeling.
//!
//! While the graph is nonempty, one action is applied per step, chosen by the
//! minimum degree: isolated vertices are discarded, degree-1 vertices are
//! matched to their neighbor and both are removed, degree-2 vertices are
//! contracted with their two neighbors (or matched like a pendant when both
//! edges run to the same neighbor, the only exact move there), and otherwise
//! a random edge at a maximum-degree vertex is removed. A max-edge removal
//! that leaves an endpoint with exactly two edges, parallel to a single
//! vertex, is repaired immediately by contracting the three vertices
//! involved.
//!
//! Every action is logged with enough provenance to replay the run forward or
//! rewind it back to the input graph. Actions group into hyperactions: the
//! prefix before the first max-edge removal, then one group per removal, each
//! running until the minimum degree is at least 3 again (or the graph is
//! empty). The graphs at group boundaries drive all trace statistics.

use std::io::{BufRead, Write};

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::genmodel::{dominance_slacks, dominant_with_slacks};
use crate::multigraph::{DegreeHistogram, EdgeId, GraphError, MultiGraph, VertexId};

pub use crate::multigraph::{AbsorbedEdge, RemovedEdge};

/// One logged step of the peeling process.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Action {
    /// Removal of an isolated vertex.
    VertexZero { v: VertexId },
    /// Removal of a degree-1 vertex `v` and its neighbor `w`, deleting every
    /// edge incident to either. `matched_edge` is the v-w edge and is always
    /// present in `removed_edges`.
    VertexOne {
        v: VertexId,
        w: VertexId,
        matched_edge: EdgeId,
        removed_edges: Vec<RemovedEdge>,
    },
    /// Contraction of a degree-2 vertex with its two distinct neighbors.
    /// `internal_dropped` counts deleted in-set edges and always equals
    /// `internal_edges.len()`. Replayed logs may also carry a single-neighbor
    /// pair form, which unwinding and classification still accept.
    Contraction {
        contracted: VertexId,
        neighbors: Vec<VertexId>,
        new_vertex: VertexId,
        internal_dropped: usize,
        internal_edges: Vec<RemovedEdge>,
        absorbed: Vec<AbsorbedEdge>,
    },
    /// Removal of a uniformly random edge at a maximum-degree vertex `v`;
    /// `u` is the other endpoint.
    MaxEdgeRemoval {
        v: VertexId,
        u: VertexId,
        edge: EdgeId,
        deg_v_before: usize,
        deg_u_before: usize,
    },
    /// Repair contraction after a max-edge removal: endpoint `u` was left
    /// with degree 2 and both edges parallel to `w`, so {u, v, w} merge.
    /// `pendant_edge` is the edge the removal deleted (joining u and v).
    AutoCorrection {
        u: VertexId,
        v: VertexId,
        w: VertexId,
        pendant_edge: EdgeId,
        new_vertex: VertexId,
        internal_dropped: usize,
        internal_edges: Vec<RemovedEdge>,
        absorbed: Vec<AbsorbedEdge>,
    },
}

impl Action {
    pub fn is_max_edge_removal(&self) -> bool {
        matches!(self, Action::MaxEdgeRemoval { .. })
    }
}

/// Complete record of one peeling run, replayable and rewindable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionLog {
    /// Vertex count of the input graph (input vertices are ids `0..n`).
    pub initial_vertices: usize,
    /// One past the largest vertex id the run created.
    pub vertex_bound: usize,
    /// One past the largest edge id the run created.
    pub edge_bound: usize,
    pub actions: Vec<Action>,
}

#[derive(Debug, Error)]
pub enum LogError {
    #[error("malformed log: {0}")]
    Malformed(String),
    #[error("replay diverged: {0}")]
    Replay(String),
    #[error("serialization: {0}")]
    Serde(String),
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for LogError {
    fn from(e: std::io::Error) -> Self {
        LogError::Io(e.to_string())
    }
}

/// Hyperaction classification. `T1`..`T4` follow the shape of the group after
/// its leading max-edge removal; `Initial` is the prefix before the first
/// removal. `T3c` (a contraction destroying two or more extra parallel edges)
/// and `Bad` fall outside the analyzed set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HyperactionKind {
    Initial,
    T1,
    T2,
    T3a,
    T3b,
    T3c,
    T4,
    Bad,
}

impl HyperactionKind {
    /// Whether per-step drift bounds apply to this group.
    pub fn is_good(self) -> bool {
        !matches!(self, HyperactionKind::T3c | HyperactionKind::Bad)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            HyperactionKind::Initial => "Initial",
            HyperactionKind::T1 => "T1",
            HyperactionKind::T2 => "T2",
            HyperactionKind::T3a => "T3a",
            HyperactionKind::T3b => "T3b",
            HyperactionKind::T3c => "T3c",
            HyperactionKind::T4 => "T4",
            HyperactionKind::Bad => "Bad",
        }
    }
}

impl std::fmt::Display for HyperactionKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A contiguous slice of the log: `actions[start..start + len]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Hyperaction {
    pub index: usize,
    pub kind: HyperactionKind,
    pub start: usize,
    pub len: usize,
}

/// Snapshot of trace statistics at one hyperaction boundary. `kind` is the
/// classification of the group that produced this boundary; the record at
/// index 0 belongs to the initial prefix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub index: usize,
    pub kind: HyperactionKind,
    pub edges: usize,
    pub min_degree: usize,
    pub max_degree: usize,
    /// `histogram[d]` = number of vertices of degree `d`.
    pub histogram: DegreeHistogram,
    pub dominant: bool,
    pub dominant_strict: bool,
}

impl TraceRecord {
    pub fn n(&self, j: usize) -> usize {
        self.histogram.get(j).copied().unwrap_or(0) as usize
    }

    pub fn vertex_count(&self) -> usize {
        self.histogram.iter().map(|&c| c as usize).sum()
    }

    /// Fraction of edge endpoints at degree-j vertices; 0 on an edgeless
    /// boundary.
    pub fn p(&self, j: usize) -> f64 {
        if self.edges == 0 {
            return 0.0;
        }
        (j * self.n(j)) as f64 / (2 * self.edges) as f64
    }

    /// Total degree overshoot above `ell`.
    pub fn excess(&self, ell: usize) -> usize {
        self.histogram
            .iter()
            .enumerate()
            .skip(ell + 1)
            .map(|(d, &c)| (d - ell) * c as usize)
            .sum()
    }
}

/// Trace configuration: `k` is the dominance order (typically the input's
/// maximum degree) and `n0` the input vertex count the slack terms use.
#[derive(Debug, Clone, Copy)]
pub struct Monitors {
    pub k: usize,
    pub n0: usize,
}

impl Monitors {
    pub fn from_graph(g: &mut MultiGraph) -> Self {
        Monitors {
            k: if g.is_empty() { 0 } else { g.max_degree() },
            n0: g.vertex_count(),
        }
    }
}

fn removed(g: &MultiGraph, e: EdgeId) -> RemovedEdge {
    let (a, b) = g.endpoints(e).expect("edge alive");
    RemovedEdge { edge: e, a, b }
}

/// If `x` was left with exactly two edges, both parallel to one vertex other
/// than `other`, contracts {x, other, parallel neighbor} and reports it.
fn try_auto_correct(
    g: &mut MultiGraph,
    x: VertexId,
    other: VertexId,
    pendant: EdgeId,
) -> Option<Action> {
    if g.degree(x) != Ok(2) {
        return None;
    }
    let inc = g.incident_edges(x).ok()?;
    let far = |e: EdgeId| {
        let (a, b) = g.endpoints(e).expect("edge alive");
        if a == x {
            b
        } else {
            a
        }
    };
    let (w1, w2) = (far(inc[0]), far(inc[1]));
    if w1 != w2 {
        return None;
    }
    // When the parallel partner is the removal's other endpoint the repair
    // set would collapse to a pair; leave that to the normal degree-2 arm.
    if w1 == other {
        return None;
    }
    let detail = g
        .contract_set_detailed(&[x, other, w1])
        .expect("repair set alive and distinct");
    Some(Action::AutoCorrection {
        u: x,
        v: other,
        w: w1,
        pendant_edge: pendant,
        new_vertex: detail.new_vertex,
        internal_dropped: detail.internal_edges.len(),
        internal_edges: detail.internal_edges,
        absorbed: detail.absorbed,
    })
}

/// Matches `v` to `w` and removes both vertices with every incident edge.
/// Callers guarantee all of v's edges lead to w, so the removal list taken
/// from w covers everything that disappears.
fn remove_matched_pair(
    g: &mut MultiGraph,
    v: VertexId,
    w: VertexId,
    matched_edge: EdgeId,
) -> Result<Action, GraphError> {
    let removed_edges: Vec<RemovedEdge> = g
        .incident_edges(w)?
        .iter()
        .map(|&e| removed(g, e))
        .collect();
    for r in &removed_edges {
        g.remove_edge(r.edge)?;
    }
    g.remove_vertex(v)?;
    g.remove_vertex(w)?;
    Ok(Action::VertexOne {
        v,
        w,
        matched_edge,
        removed_edges,
    })
}

/// Applies one peeling step, dispatched on the minimum degree. The max-edge
/// arm may additionally apply a repair contraction, returned as the second
/// action.
pub fn reduce_step<R: Rng + ?Sized>(
    g: &mut MultiGraph,
    rng: &mut R,
) -> Result<(Action, Option<Action>), GraphError> {
    if g.is_empty() {
        return Err(GraphError::EmptyGraph);
    }
    match g.min_degree() {
        0 => {
            let v = g.random_vertex_with_degree(0, rng)?;
            g.remove_vertex(v)?;
            Ok((Action::VertexZero { v }, None))
        }
        1 => {
            let v = g.random_vertex_with_degree(1, rng)?;
            let matched_edge = g.incident_edges(v)?[0];
            let (a, b) = g.endpoints(matched_edge)?;
            let w = if a == v { b } else { a };
            Ok((remove_matched_pair(g, v, w, matched_edge)?, None))
        }
        2 => {
            let v = g.random_vertex_with_degree(2, rng)?;
            let inc = g.incident_edges(v)?;
            let far = |e: EdgeId| {
                let (a, b) = g.endpoints(e).expect("edge alive");
                if a == v {
                    b
                } else {
                    a
                }
            };
            let (n1, n2) = (far(inc[0]), far(inc[1]));
            if n1 == n2 {
                // Both edges are parallel to one neighbor, so v can only ever
                // be matched to n1: treat it like a pendant (an exact move)
                // instead of merging the pair, which would forfeit v whenever
                // the merged vertex later gets matched through n1's other
                // edges. One of the two parallel edges carries the match,
                // chosen uniformly.
                let matched_edge = inc[rng.random_range(0..inc.len())];
                return Ok((remove_matched_pair(g, v, n1, matched_edge)?, None));
            }
            let detail = g.contract_set_detailed(&[v, n1, n2])?;
            Ok((
                Action::Contraction {
                    contracted: v,
                    neighbors: vec![n1, n2],
                    new_vertex: detail.new_vertex,
                    internal_dropped: detail.internal_edges.len(),
                    internal_edges: detail.internal_edges,
                    absorbed: detail.absorbed,
                },
                None,
            ))
        }
        _ => {
            let v = g.random_max_degree_vertex(rng)?;
            let edge = g.random_incident_edge(v, rng)?;
            let (a, b) = g.endpoints(edge)?;
            let u = if a == v { b } else { a };
            let deg_v_before = g.degree(v)?;
            let deg_u_before = g.degree(u)?;
            g.remove_edge(edge)?;
            let mer = Action::MaxEdgeRemoval {
                v,
                u,
                edge,
                deg_v_before,
                deg_u_before,
            };
            // Check the non-max endpoint first; a successful repair absorbs
            // both endpoints, so at most one fires.
            let repair = try_auto_correct(g, u, v, edge)
                .or_else(|| try_auto_correct(g, v, u, edge));
            Ok((mer, repair))
        }
    }
}

fn capture(g: &mut MultiGraph, index: usize, k: usize, slacks: &[f64]) -> TraceRecord {
    if g.is_empty() {
        return TraceRecord {
            index,
            kind: HyperactionKind::Initial,
            edges: 0,
            min_degree: 0,
            max_degree: 0,
            histogram: DegreeHistogram::new(),
            dominant: true,
            dominant_strict: true,
        };
    }
    let histogram = g.degree_histogram();
    TraceRecord {
        index,
        kind: HyperactionKind::Initial,
        edges: g.edge_count(),
        min_degree: g.min_degree(),
        max_degree: g.max_degree(),
        dominant: dominant_with_slacks(&histogram, k, slacks, false),
        dominant_strict: dominant_with_slacks(&histogram, k, slacks, true),
        histogram,
    }
}

/// Peels `g` down to the empty graph, returning the full action log and one
/// trace record per hyperaction boundary. Record `i` describes the graph
/// after hyperaction `i`; its `kind` is that hyperaction's classification.
pub fn run_reduce<R: Rng + ?Sized>(
    g: &mut MultiGraph,
    rng: &mut R,
    monitors: &Monitors,
) -> (ActionLog, Vec<TraceRecord>) {
    let initial_vertices = g.vertex_count();
    // A run retires every vertex and performs roughly one action per edge,
    // with up to one boundary record per action; sizing the buffers up front
    // keeps the hot loop free of regrowth. The dominance slack terms depend
    // only on the input, so they are computed once here.
    let mut actions: Vec<Action> = Vec::with_capacity(initial_vertices + g.edge_count());
    let mut records: Vec<TraceRecord> = Vec::with_capacity(initial_vertices + 16);
    let slacks = dominance_slacks(monitors.k, monitors.n0);

    let drain_low_degree = |g: &mut MultiGraph, actions: &mut Vec<Action>, rng: &mut R| {
        while !g.is_empty() && g.min_degree() < 3 {
            let (a, repair) = reduce_step(g, rng).expect("graph nonempty");
            debug_assert!(repair.is_none(), "repair outside a max-edge step");
            actions.push(a);
        }
    };

    drain_low_degree(g, &mut actions, rng);
    records.push(capture(g, 0, monitors.k, &slacks));

    while !g.is_empty() {
        let (a, repair) = reduce_step(g, rng).expect("graph nonempty");
        debug_assert!(a.is_max_edge_removal());
        actions.push(a);
        if let Some(r) = repair {
            actions.push(r);
        }
        drain_low_degree(g, &mut actions, rng);
        records.push(capture(g, records.len(), monitors.k, &slacks));
    }

    let log = ActionLog {
        initial_vertices,
        vertex_bound: g.vertex_id_bound(),
        edge_bound: g.edge_id_bound(),
        actions,
    };
    let groups = group_and_classify(&log).expect("log built here is well formed");
    debug_assert_eq!(groups.len(), records.len());
    for (rec, h) in records.iter_mut().zip(&groups) {
        rec.kind = h.kind;
    }
    (log, records)
}

fn classify_group(actions: &[Action]) -> HyperactionKind {
    use Action::*;
    use HyperactionKind::*;
    debug_assert!(matches!(actions[0], MaxEdgeRemoval { .. }));
    let eta = |a: &Action| -> Option<usize> {
        // Extra parallel-edge count of a three-set contraction: the
        // contracted vertex always contributes its own two edges, the rest
        // are neighbor-neighbor parallels.
        match a {
            Contraction {
                neighbors,
                internal_dropped,
                ..
            } if neighbors.len() == 2 => Some(internal_dropped - 2),
            _ => None,
        }
    };
    match &actions[1..] {
        [] => T1,
        [AutoCorrection { .. }] => T2,
        [c @ Contraction { .. }] => match eta(c) {
            Some(0) => T3a,
            Some(1) => T3b,
            Some(_) => T3c,
            None => Bad, // pair contraction
        },
        [c1 @ Contraction { .. }, c2 @ Contraction { .. }] => match (eta(c1), eta(c2)) {
            // The second contraction must be clean; the first may carry one
            // parallel (the chained shape forces exactly one there).
            (Some(e1), Some(0)) if e1 <= 1 => T4,
            _ => Bad,
        },
        _ => Bad,
    }
}

/// Partitions a log into hyperactions and classifies each. The prefix before
/// the first max-edge removal is `Initial` when it is benign (no isolated
/// removals, no pair contractions) and `Bad` otherwise; it is always emitted,
/// empty or not.
pub fn group_and_classify(log: &ActionLog) -> Result<Vec<Hyperaction>, LogError> {
    use Action::*;
    for (i, a) in log.actions.iter().enumerate() {
        match a {
            AutoCorrection { .. } => {
                let prev_is_mer = i > 0 && log.actions[i - 1].is_max_edge_removal();
                if !prev_is_mer {
                    return Err(LogError::Malformed(format!(
                        "repair contraction at position {i} does not follow a max-edge removal"
                    )));
                }
            }
            VertexOne {
                matched_edge,
                removed_edges,
                ..
            } => {
                if !removed_edges.iter().any(|r| r.edge == *matched_edge) {
                    return Err(LogError::Malformed(format!(
                        "pendant match at position {i} not among its removed edges"
                    )));
                }
            }
            Contraction {
                internal_dropped,
                internal_edges,
                ..
            } => {
                if *internal_dropped != internal_edges.len() {
                    return Err(LogError::Malformed(format!(
                        "contraction at position {i} has inconsistent internal edge count"
                    )));
                }
            }
            _ => {}
        }
    }

    let first_mer = log
        .actions
        .iter()
        .position(Action::is_max_edge_removal)
        .unwrap_or(log.actions.len());
    let prefix_bad = log.actions[..first_mer].iter().any(|a| match a {
        VertexZero { .. } => true,
        Contraction { neighbors, .. } => neighbors.len() < 2,
        _ => false,
    });
    let mut out = vec![Hyperaction {
        index: 0,
        kind: if prefix_bad {
            HyperactionKind::Bad
        } else {
            HyperactionKind::Initial
        },
        start: 0,
        len: first_mer,
    }];

    let mut start = first_mer;
    while start < log.actions.len() {
        let end = log.actions[start + 1..]
            .iter()
            .position(Action::is_max_edge_removal)
            .map(|p| start + 1 + p)
            .unwrap_or(log.actions.len());
        out.push(Hyperaction {
            index: out.len(),
            kind: classify_group(&log.actions[start..end]),
            start,
            len: end - start,
        });
        start = end;
    }
    Ok(out)
}

impl ActionLog {
    /// Applies the log to a copy of the graph it was recorded on, checking
    /// that every id materializes exactly as logged.
    pub fn replay(&self, g0: &MultiGraph) -> Result<MultiGraph, LogError> {
        let mut g = g0.clone();
        let mismatch = |i: usize, what: &str| -> LogError {
            LogError::Replay(format!("action {i}: {what}"))
        };
        for (i, a) in self.actions.iter().enumerate() {
            match a {
                Action::VertexZero { v } => {
                    g.remove_vertex(*v).map_err(|e| mismatch(i, &e.to_string()))?;
                }
                Action::VertexOne {
                    v, w, removed_edges, ..
                } => {
                    for r in removed_edges {
                        g.remove_edge(r.edge).map_err(|e| mismatch(i, &e.to_string()))?;
                    }
                    g.remove_vertex(*v).map_err(|e| mismatch(i, &e.to_string()))?;
                    g.remove_vertex(*w).map_err(|e| mismatch(i, &e.to_string()))?;
                }
                Action::Contraction {
                    contracted,
                    neighbors,
                    new_vertex,
                    internal_dropped,
                    ..
                } => {
                    let mut set = vec![*contracted];
                    set.extend_from_slice(neighbors);
                    let (vc, dropped) =
                        g.contract_set(&set).map_err(|e| mismatch(i, &e.to_string()))?;
                    if vc != *new_vertex || dropped != *internal_dropped {
                        return Err(mismatch(i, "contraction produced different ids"));
                    }
                }
                Action::MaxEdgeRemoval { edge, .. } => {
                    g.remove_edge(*edge).map_err(|e| mismatch(i, &e.to_string()))?;
                }
                Action::AutoCorrection {
                    u,
                    v,
                    w,
                    new_vertex,
                    internal_dropped,
                    ..
                } => {
                    let (vc, dropped) = g
                        .contract_set(&[*u, *v, *w])
                        .map_err(|e| mismatch(i, &e.to_string()))?;
                    if vc != *new_vertex || dropped != *internal_dropped {
                        return Err(mismatch(i, "repair produced different ids"));
                    }
                }
            }
        }
        Ok(g)
    }

    /// Rebuilds the input graph by undoing every action in reverse order.
    pub fn rewind_all(&self) -> Result<MultiGraph, LogError> {
        let mut g = MultiGraph::shell(self.vertex_bound, self.edge_bound);
        for a in self.actions.iter().rev() {
            match a {
                Action::VertexZero { v } => g.restore_vertex(*v),
                Action::VertexOne {
                    v, w, removed_edges, ..
                } => {
                    g.restore_vertex(*v);
                    g.restore_vertex(*w);
                    for r in removed_edges.iter().rev() {
                        g.restore_edge(r.edge, r.a, r.b);
                    }
                }
                Action::MaxEdgeRemoval { v, u, edge, .. } => {
                    g.restore_edge(*edge, *v, *u);
                }
                Action::Contraction {
                    contracted,
                    neighbors,
                    new_vertex,
                    internal_edges,
                    absorbed,
                    ..
                } => {
                    g.restore_vertex(*contracted);
                    for n in neighbors {
                        g.restore_vertex(*n);
                    }
                    for ab in absorbed.iter().rev() {
                        g.repoint_edge(ab.edge, *new_vertex, ab.former);
                    }
                    for r in internal_edges.iter().rev() {
                        g.restore_edge(r.edge, r.a, r.b);
                    }
                    g.kill_vertex_slot(*new_vertex);
                }
                Action::AutoCorrection {
                    u,
                    v,
                    w,
                    new_vertex,
                    internal_edges,
                    absorbed,
                    ..
                } => {
                    g.restore_vertex(*u);
                    g.restore_vertex(*v);
                    g.restore_vertex(*w);
                    for ab in absorbed.iter().rev() {
                        g.repoint_edge(ab.edge, *new_vertex, ab.former);
                    }
                    for r in internal_edges.iter().rev() {
                        g.restore_edge(r.edge, r.a, r.b);
                    }
                    g.kill_vertex_slot(*new_vertex);
                }
            }
        }
        let expect: Vec<VertexId> = (0..self.initial_vertices as u32).map(VertexId).collect();
        let got: Vec<VertexId> = g.vertices().collect();
        if got != expect {
            return Err(LogError::Replay(
                "rewind did not recover the initial vertex set".into(),
            ));
        }
        Ok(g)
    }

    /// Writes one JSON object per line: a header with the id bounds, then one
    /// line per action in order.
    pub fn write_jsonl<W: Write>(&self, out: &mut W) -> Result<(), LogError> {
        let header = serde_json::json!({
            "kind": "Log",
            "initial_vertices": self.initial_vertices,
            "vertex_bound": self.vertex_bound,
            "edge_bound": self.edge_bound,
            "actions": self.actions.len(),
        });
        writeln!(out, "{header}")?;
        for a in &self.actions {
            let line = serde_json::to_string(a).map_err(|e| LogError::Serde(e.to_string()))?;
            writeln!(out, "{line}")?;
        }
        Ok(())
    }

    /// Parses the format written by [`ActionLog::write_jsonl`].
    pub fn read_jsonl<R: BufRead>(input: R) -> Result<Self, LogError> {
        let mut lines = input.lines();
        let header_line = lines
            .next()
            .ok_or_else(|| LogError::Malformed("empty log file".into()))??;
        let header: serde_json::Value =
            serde_json::from_str(&header_line).map_err(|e| LogError::Serde(e.to_string()))?;
        if header.get("kind").and_then(|v| v.as_str()) != Some("Log") {
            return Err(LogError::Malformed("first line is not a log header".into()));
        }
        let field = |name: &str| -> Result<usize, LogError> {
            header
                .get(name)
                .and_then(|v| v.as_u64())
                .map(|v| v as usize)
                .ok_or_else(|| LogError::Malformed(format!("header missing {name}")))
        };
        let mut log = ActionLog {
            initial_vertices: field("initial_vertices")?,
            vertex_bound: field("vertex_bound")?,
            edge_bound: field("edge_bound")?,
            actions: Vec::with_capacity(field("actions")?),
        };
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let a: Action =
                serde_json::from_str(&line).map_err(|e| LogError::Serde(e.to_string()))?;
            log.actions.push(a);
        }
        Ok(log)
    }
}
