//! Exact maximum-matching references.
//!
//! [`max_matching_exact`] runs the blossom algorithm (augmenting paths with
//! odd-cycle shrinking) on the simple projection of a multigraph; parallel
//! edges cannot change the maximum cardinality, so each vertex pair keeps one
//! representative edge id. [`brute_force_matching`] is an independent
//! subset-DP oracle for tiny graphs, used to gate the blossom code itself.

use std::collections::HashMap;

use rand::Rng;
use thiserror::Error;

use crate::construct::{unwind, validate_matching, Matching};
use crate::multigraph::{EdgeId, MultiGraph, VertexId};
use crate::reduce::{run_reduce, Monitors};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph has {0} vertices, brute force handles at most {MAX_BRUTE_VERTICES}")]
    TooLarge(usize),
}

/// Vertex cap for [`brute_force_matching`].
pub const MAX_BRUTE_VERTICES: usize = 16;

/// Compact view: alive vertices renumbered 0..n, simple adjacency, one
/// representative edge id per unordered pair (smallest id wins).
struct Compact {
    ids: Vec<VertexId>,
    adj: Vec<Vec<usize>>,
    representative: HashMap<(usize, usize), EdgeId>,
}

fn compact(g: &MultiGraph) -> Compact {
    let ids: Vec<VertexId> = g.vertices().collect();
    let index: HashMap<VertexId, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut adj = vec![Vec::new(); ids.len()];
    let mut representative = HashMap::new();
    for (e, a, b) in g.edges() {
        let (i, j) = (index[&a], index[&b]);
        let key = (i.min(j), i.max(j));
        representative.entry(key).or_insert_with(|| {
            adj[i].push(j);
            adj[j].push(i);
            e
        });
    }
    Compact {
        ids,
        adj,
        representative,
    }
}

/// Maximum-cardinality matching by blossom shrinking. Returns representative
/// edge ids of the multigraph.
pub fn max_matching_exact(g: &MultiGraph) -> Matching {
    let c = compact(g);
    let n = c.ids.len();
    let mut mate: Vec<Option<usize>> = vec![None; n];

    // Greedy warm start cuts the number of augmenting searches roughly in
    // half.
    for v in 0..n {
        if mate[v].is_none() {
            for &u in &c.adj[v] {
                if mate[u].is_none() {
                    mate[v] = Some(u);
                    mate[u] = Some(v);
                    break;
                }
            }
        }
    }

    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut base: Vec<usize> = (0..n).collect();
    let mut used = vec![false; n];
    let mut in_blossom = vec![false; n];

    // Walks match/parent pointers upward from v, flagging traversed bases,
    // until the root; used to find the lowest common ancestor of two tree
    // vertices.
    fn lca(
        mate: &[Option<usize>],
        parent: &[Option<usize>],
        base: &[usize],
        mut a: usize,
        mut b: usize,
        scratch: &mut [bool],
    ) -> usize {
        for f in scratch.iter_mut() {
            *f = false;
        }
        loop {
            a = base[a];
            scratch[a] = true;
            match mate[a] {
                Some(m) => match parent[m] {
                    Some(p) => a = p,
                    None => break,
                },
                None => break,
            }
        }
        loop {
            b = base[b];
            if scratch[b] {
                return b;
            }
            let m = mate[b].expect("tree vertex below root is matched");
            b = parent[m].expect("matched tree vertex has a parent");
        }
    }

    fn mark_path(
        mate: &[Option<usize>],
        parent: &mut [Option<usize>],
        base: &[usize],
        in_blossom: &mut [bool],
        mut v: usize,
        b: usize,
        mut child: usize,
    ) {
        while base[v] != b {
            let m = mate[v].expect("blossom vertex is matched");
            in_blossom[base[v]] = true;
            in_blossom[base[m]] = true;
            parent[v] = Some(child);
            child = m;
            v = parent[m].expect("blossom path continues to the base");
        }
    }

    for root in 0..n {
        if mate[root].is_some() {
            continue;
        }
        // Grow an alternating tree from this exposed vertex.
        for p in parent.iter_mut() {
            *p = None;
        }
        for (i, b) in base.iter_mut().enumerate() {
            *b = i;
        }
        for u in used.iter_mut() {
            *u = false;
        }
        used[root] = true;
        let mut queue = vec![root];
        let mut augmented_at: Option<usize> = None;
        let mut scratch = vec![false; n];

        'bfs: while let Some(v) = queue.pop() {
            for &to in &c.adj[v] {
                if base[v] == base[to] || mate[v] == Some(to) {
                    continue;
                }
                let to_in_tree = to == root || mate[to].map_or(false, |m| parent[m].is_some());
                if to_in_tree {
                    // Even-even edge closes an odd cycle: shrink it.
                    let b = lca(&mate, &parent, &base, v, to, &mut scratch);
                    for f in in_blossom.iter_mut() {
                        *f = false;
                    }
                    mark_path(&mate, &mut parent, &base, &mut in_blossom, v, b, to);
                    mark_path(&mate, &mut parent, &base, &mut in_blossom, to, b, v);
                    for i in 0..n {
                        if in_blossom[base[i]] {
                            base[i] = b;
                            if !used[i] {
                                used[i] = true;
                                queue.push(i);
                            }
                        }
                    }
                } else if parent[to].is_none() {
                    parent[to] = Some(v);
                    match mate[to] {
                        None => {
                            augmented_at = Some(to);
                            break 'bfs;
                        }
                        Some(m) => {
                            used[m] = true;
                            queue.push(m);
                        }
                    }
                }
            }
        }

        if let Some(mut v) = augmented_at {
            // Flip matched edges along the alternating path back to the root.
            while let Some(pv) = parent[v] {
                let next = mate[pv];
                mate[v] = Some(pv);
                mate[pv] = Some(v);
                match next {
                    Some(nv) => v = nv,
                    None => break,
                }
            }
        }
    }

    let mut edges = Vec::new();
    for v in 0..n {
        if let Some(u) = mate[v] {
            if v < u {
                edges.push(c.representative[&(v, u)]);
            }
        }
    }
    Matching::from_edges(g, edges)
}

/// Exact maximum matching size by DP over vertex subsets. Independent of the
/// blossom code by construction.
pub fn brute_force_matching(g: &MultiGraph) -> Result<usize, OracleError> {
    let c = compact(g);
    let n = c.ids.len();
    if n > MAX_BRUTE_VERTICES {
        return Err(OracleError::TooLarge(n));
    }
    let mut neighbor_mask = vec![0u32; n];
    for (v, adj) in c.adj.iter().enumerate() {
        for &u in adj {
            neighbor_mask[v] |= 1 << u;
        }
    }
    let mut best = vec![-1i8; 1usize << n];
    best[0] = 0;
    fn solve(mask: usize, neighbor_mask: &[u32], best: &mut [i8]) -> i8 {
        if best[mask] >= 0 {
            return best[mask];
        }
        let v = mask.trailing_zeros() as usize;
        // v stays single...
        let mut score = solve(mask & !(1 << v), neighbor_mask, best);
        // ...or matches any remaining neighbor.
        let mut options = neighbor_mask[v] as usize & mask & !(1 << v);
        while options != 0 {
            let u = options.trailing_zeros() as usize;
            options &= options - 1;
            let sub = mask & !(1 << v) & !(1 << u);
            score = score.max(1 + solve(sub, neighbor_mask, best));
        }
        best[mask] = score;
        score
    }
    Ok(solve((1usize << n) - 1, &neighbor_mask, &mut best) as usize)
}

/// Peel-and-unwind matching with an exact fallback: if the heuristic result
/// is not of size floor(n/2), the blossom matching is returned instead.
pub fn match_with_fallback<R: Rng + ?Sized>(g: &MultiGraph, rng: &mut R) -> Matching {
    let mut work = g.clone();
    let monitors = Monitors::from_graph(&mut work);
    let (log, _) = run_reduce(&mut work, rng, &monitors);
    if let Ok(m) = unwind(&log, g, rng) {
        let rep = validate_matching(&m, g);
        if rep.valid && rep.perfect {
            return m;
        }
    }
    max_matching_exact(g)
}
