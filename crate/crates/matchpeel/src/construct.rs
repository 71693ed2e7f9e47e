//! Matching assembly by unwinding a peeling log.
//!
//! The log is traversed in reverse while a matching over original edge ids is
//! grown. Pendant removals contribute their matched edge directly. Each
//! contraction is expanded: if the merged vertex is covered, the covering
//! edge is handed back to the member it was really attached to, and the
//! remaining members pair up through a recorded internal edge. A reversed
//! edge removal offers its edge back, and it is taken whenever both endpoints
//! are still uncovered. Edge ids never change during peeling, so every id in
//! the log names an edge of the input graph and the finished matching is
//! checked against the input's endpoints.

use std::collections::HashMap;
use std::io::Write;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::multigraph::{EdgeId, MultiGraph, VertexId};
use crate::reduce::{AbsorbedEdge, Action, ActionLog, RemovedEdge};

/// A matching of the original graph: edge ids plus the vertices they cover,
/// both sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Matching {
    edges: Vec<EdgeId>,
    covered: Vec<VertexId>,
}

impl Matching {
    pub fn empty() -> Self {
        Matching {
            edges: Vec::new(),
            covered: Vec::new(),
        }
    }

    pub fn from_edges(g0: &MultiGraph, edges: Vec<EdgeId>) -> Self {
        let mut covered = Vec::with_capacity(edges.len() * 2);
        for &e in &edges {
            if let Ok((a, b)) = g0.endpoints(e) {
                covered.push(a);
                covered.push(b);
            }
        }
        let mut edges = edges;
        edges.sort_unstable();
        covered.sort_unstable();
        Matching { edges, covered }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn covered(&self) -> &[VertexId] {
        &self.covered
    }

    pub fn covers(&self, v: VertexId) -> bool {
        self.covered.binary_search(&v).is_ok()
    }

    /// One line per matched edge: `u v edge_id`, ordered by edge id, with
    /// `u <= v` taken from the graph's endpoints.
    pub fn write_text<W: Write>(&self, g0: &MultiGraph, out: &mut W) -> std::io::Result<()> {
        for &e in &self.edges {
            let (a, b) = g0
                .endpoints(e)
                .map_err(|err| std::io::Error::other(err.to_string()))?;
            let (u, v) = if a <= b { (a, b) } else { (b, a) };
            writeln!(out, "{} {} {}", u.0, v.0, e.0)?;
        }
        Ok(())
    }
}

/// Independent validity verdict for a matching against a graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MatchingReport {
    pub valid: bool,
    pub size: usize,
    /// Size reaches floor(n/2) for the graph's vertex count.
    pub perfect: bool,
}

/// Checks edge membership and endpoint disjointness from scratch.
pub fn validate_matching(m: &Matching, g0: &MultiGraph) -> MatchingReport {
    let mut valid = true;
    let mut seen = HashMap::new();
    for &e in m.edges() {
        match g0.endpoints(e) {
            Ok((a, b)) => {
                if seen.insert(a, e).is_some() || seen.insert(b, e).is_some() {
                    valid = false;
                }
            }
            Err(_) => valid = false,
        }
    }
    // Duplicate edge ids would collide on both endpoints above.
    let size = m.len();
    MatchingReport {
        valid,
        size,
        perfect: size == g0.vertex_count() / 2,
    }
}

#[derive(Debug, Error)]
pub enum ConstructError {
    #[error("inconsistent log: {0}")]
    Inconsistent(String),
}

fn joins(r: &RemovedEdge, x: VertexId, y: VertexId) -> bool {
    (r.a == x && r.b == y) || (r.a == y && r.b == x)
}

fn former_endpoint(absorbed: &[AbsorbedEdge], e: EdgeId) -> Result<VertexId, ConstructError> {
    absorbed
        .iter()
        .find(|ab| ab.edge == e)
        .map(|ab| ab.former)
        .ok_or_else(|| ConstructError::Inconsistent(format!("edge {e} not absorbed here")))
}

/// Current cover state during the reverse traversal, dense over every vertex
/// id the log may name (original vertices and merged ones alike).
struct Cover {
    slots: Vec<Option<EdgeId>>,
}

impl Cover {
    fn slot(&mut self, v: VertexId) -> Result<&mut Option<EdgeId>, ConstructError> {
        self.slots
            .get_mut(v.index())
            .ok_or_else(|| ConstructError::Inconsistent(format!("{v} out of log bounds")))
    }

    fn add(&mut self, v: VertexId, e: EdgeId) -> Result<(), ConstructError> {
        if self.slot(v)?.replace(e).is_some() {
            return Err(ConstructError::Inconsistent(format!("{v} covered twice")));
        }
        Ok(())
    }

    fn pair(&mut self, a: VertexId, b: VertexId, e: EdgeId) -> Result<(), ConstructError> {
        self.add(a, e)?;
        self.add(b, e)
    }

    fn take(&mut self, v: VertexId) -> Result<Option<EdgeId>, ConstructError> {
        Ok(self.slot(v)?.take())
    }

    fn is_free(&mut self, v: VertexId) -> Result<bool, ConstructError> {
        Ok(self.slot(v)?.is_none())
    }
}

/// Unwinds the log into a matching of `g0` and verifies it covers exactly the
/// endpoints of its edges. Tie-breaks (which member pairs up when the merged
/// vertex was uncovered, which parallel edge carries a pair) are uniform.
pub fn unwind<R: Rng + ?Sized>(
    log: &ActionLog,
    g0: &MultiGraph,
    rng: &mut R,
) -> Result<Matching, ConstructError> {
    let bound = log
        .vertex_bound
        .max(g0.vertex_count())
        .max(log.initial_vertices);
    let mut cover = Cover {
        slots: vec![None; bound],
    };

    for action in log.actions.iter().rev() {
        match action {
            Action::VertexZero { .. } => {}
            Action::MaxEdgeRemoval { v, u, edge, .. } => {
                // Reversing the removal puts this edge back. Both endpoints
                // outlive the action, so later steps may already cover one of
                // them; when both are still free, taking the edge grows the
                // matching and never costs anything downstream.
                if cover.is_free(*v)? && cover.is_free(*u)? {
                    cover.pair(*v, *u, *edge)?;
                }
            }
            Action::VertexOne {
                v, w, matched_edge, ..
            } => {
                // v and w leave the graph here, so nothing later covers them.
                cover.pair(*v, *w, *matched_edge)?;
            }
            Action::Contraction {
                contracted,
                neighbors,
                new_vertex,
                internal_edges,
                absorbed,
                ..
            } => {
                let x = *contracted;
                let held = cover.take(*new_vertex)?;
                match neighbors.as_slice() {
                    [a] => {
                        // Pair contraction: both of x's edges are parallel
                        // to a.
                        match held {
                            Some(e) => {
                                let f = former_endpoint(absorbed, e)?;
                                if f != *a {
                                    return Err(ConstructError::Inconsistent(format!(
                                        "pair contraction cover lands on {f}"
                                    )));
                                }
                                cover.add(*a, e)?; // x stays uncovered
                            }
                            None => {
                                let pick =
                                    internal_edges[rng.random_range(0..internal_edges.len())];
                                cover.pair(x, *a, pick.edge)?;
                            }
                        }
                    }
                    [a, b] => {
                        let xs_edge_to = |t: VertexId| -> Result<EdgeId, ConstructError> {
                            internal_edges
                                .iter()
                                .find(|r| joins(r, x, t))
                                .map(|r| r.edge)
                                .ok_or_else(|| {
                                    ConstructError::Inconsistent(format!(
                                        "no internal edge {x}-{t}"
                                    ))
                                })
                        };
                        match held {
                            Some(e) => {
                                let f = former_endpoint(absorbed, e)?;
                                let partner = if f == *a {
                                    *b
                                } else if f == *b {
                                    *a
                                } else {
                                    return Err(ConstructError::Inconsistent(format!(
                                        "contraction cover lands on {f}"
                                    )));
                                };
                                cover.add(f, e)?;
                                cover.pair(x, partner, xs_edge_to(partner)?)?;
                            }
                            None => {
                                let t = if rng.random_range(0..2) == 0 { *a } else { *b };
                                cover.pair(x, t, xs_edge_to(t)?)?;
                            }
                        }
                    }
                    other => {
                        return Err(ConstructError::Inconsistent(format!(
                            "contraction with {} neighbors",
                            other.len()
                        )))
                    }
                }
            }
            Action::AutoCorrection {
                u,
                v,
                w,
                pendant_edge,
                new_vertex,
                internal_edges,
                absorbed,
                ..
            } => {
                let parallels: Vec<EdgeId> = internal_edges
                    .iter()
                    .filter(|r| joins(r, *u, *w))
                    .map(|r| r.edge)
                    .collect();
                if parallels.len() != 2 {
                    return Err(ConstructError::Inconsistent(format!(
                        "repair expected a parallel pair {u}-{w}, found {}",
                        parallels.len()
                    )));
                }
                let pick_parallel =
                    |rng: &mut R| -> EdgeId { parallels[rng.random_range(0..2)] };
                match cover.take(*new_vertex)? {
                    Some(e) => {
                        let f = former_endpoint(absorbed, e)?;
                        if f == *v {
                            cover.add(*v, e)?;
                            let p = pick_parallel(rng);
                            cover.pair(*u, *w, p)?;
                        } else if f == *w {
                            cover.add(*w, e)?;
                            cover.pair(*u, *v, *pendant_edge)?;
                        } else {
                            return Err(ConstructError::Inconsistent(format!(
                                "repair cover lands on {f}"
                            )));
                        }
                    }
                    None => {
                        // All three uncovered: pair u with w or with v.
                        if rng.random_range(0..2) == 0 {
                            let p = pick_parallel(rng);
                            cover.pair(*u, *w, p)?;
                        } else {
                            cover.pair(*u, *v, *pendant_edge)?;
                        }
                    }
                }
            }
        }
    }

    // Every cover entry must sit on an endpoint of its edge in the input
    // graph, and each matched edge must cover exactly its two endpoints.
    let covered_total = cover.slots.iter().filter(|s| s.is_some()).count();
    let mut edges: Vec<EdgeId> = cover.slots.iter().filter_map(|s| *s).collect();
    edges.sort_unstable();
    edges.dedup();
    let at = |v: VertexId| cover.slots.get(v.index()).copied().flatten();
    for &e in &edges {
        let (a, b) = g0.endpoints(e).map_err(|err| {
            ConstructError::Inconsistent(format!("matched edge not in input: {err}"))
        })?;
        if at(a) != Some(e) || at(b) != Some(e) {
            return Err(ConstructError::Inconsistent(format!(
                "edge {e} does not cover exactly its endpoints"
            )));
        }
    }
    if covered_total != 2 * edges.len() {
        return Err(ConstructError::Inconsistent(
            "cover size does not match edge count".into(),
        ));
    }
    Ok(Matching::from_edges(g0, edges))
}
