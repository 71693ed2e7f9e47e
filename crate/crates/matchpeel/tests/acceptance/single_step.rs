//! One-hyperaction Monte Carlo oracle over a frozen degree histogram.
//!
//! Instead of materializing a whole graph per trial, the configuration-model
//! pairing is revealed lazily: every vertex starts as an anonymous member of
//! its degree bucket with all points free, and a point's partner is drawn
//! uniformly from the remaining free points only when the peeling process
//! needs to look at it. Revealing a pair that closes a loop corresponds to a
//! configuration the sampler would have rejected, so the trial restarts.
//! Everything the real reducer does inside one hyperaction (max-edge removal,
//! auto-correction, contractions, pendant cascades) is mirrored exactly on
//! this urn, including the per-vertex degree bookkeeping needed to report the
//! hyperaction's change to every degree count.

use rand::Rng;

/// Frozen mid-run degree histogram: `(degree, vertex count)` pairs.
pub const HISTOGRAM: [(usize, usize); 6] = [
    (3, 3000),
    (4, 1000),
    (5, 2700),
    (6, 6600),
    (7, 10200),
    (8, 5400),
];

/// Maximum degree any merged vertex can reach here (two degree-8 outer
/// members around a degree-2 center would give 8 + 8 - 2).
pub const DEG_CAP: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    T1,
    T2,
    T3a,
    T3b,
    T3c,
    T4,
    Bad,
}

impl Kind {
    pub fn is_t3(self) -> bool {
        matches!(self, Kind::T3a | Kind::T3b | Kind::T3c)
    }
}

/// Compressed shape of one post-removal action, enough to classify the group
/// the same way the reducer's log classifier does.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Act {
    /// Repair contraction (degree-2 endpoint with a double edge elsewhere).
    Ac,
    /// Three-set contraction with the given extra parallel count.
    C3(usize),
    /// Pendant removal, including the double-edge pendant-style match.
    V1,
    /// Isolated-vertex removal.
    V0,
}

fn classify(acts: &[Act]) -> Kind {
    match acts {
        [] => Kind::T1,
        [Act::Ac] => Kind::T2,
        [Act::C3(0)] => Kind::T3a,
        [Act::C3(1)] => Kind::T3b,
        [Act::C3(_)] => Kind::T3c,
        [Act::C3(e1), Act::C3(0)] if *e1 <= 1 => Kind::T4,
        _ => Kind::Bad,
    }
}

/// A vertex the trial has touched. `start` is its degree at the start of the
/// hyperaction (`None` for vertices born from a contraction); `free` counts
/// its not-yet-revealed points.
struct Tv {
    start: Option<usize>,
    free: usize,
    alive: bool,
}

#[derive(Clone, Copy)]
struct Edge {
    a: usize,
    b: usize,
    alive: bool,
}

pub struct Outcome {
    /// Change of the degree histogram over the hyperaction, indexed by degree.
    pub delta: [i64; DEG_CAP],
    pub kind: Kind,
}

struct Trial {
    /// Untouched vertices per degree; index is the degree.
    counts: [usize; 9],
    /// Total free points held by untouched vertices.
    fresh_points: usize,
    tracked: Vec<Tv>,
    /// Total free points held by tracked vertices.
    tracked_free: usize,
    /// Revealed edges between tracked vertices.
    edges: Vec<Edge>,
    acts: Vec<Act>,
}

impl Trial {
    fn new() -> Self {
        let mut counts = [0usize; 9];
        let mut fresh_points = 0;
        for (d, c) in HISTOGRAM {
            counts[d] = c;
            fresh_points += d * c;
        }
        Trial {
            counts,
            fresh_points,
            tracked: Vec::with_capacity(32),
            tracked_free: 0,
            edges: Vec::with_capacity(32),
            acts: Vec::with_capacity(4),
        }
    }

    /// Pulls one untouched degree-`d` vertex out of its bucket.
    fn track_fresh(&mut self, d: usize) -> usize {
        debug_assert!(self.counts[d] > 0);
        self.counts[d] -= 1;
        self.fresh_points -= d;
        self.tracked_free += d;
        self.tracked.push(Tv {
            start: Some(d),
            free: d,
            alive: true,
        });
        self.tracked.len() - 1
    }

    /// Consumes one free point of `x` and reveals its partner, consuming the
    /// partner's point as well. Returns the partner's tracked index, tracking
    /// it first if it was fresh; `None` means the pair closed a loop at `x`
    /// (a configuration the sampler rejects), so the caller must restart.
    fn reveal_partner<R: Rng + ?Sized>(&mut self, x: usize, rng: &mut R) -> Option<usize> {
        debug_assert!(self.tracked[x].free > 0);
        self.tracked[x].free -= 1;
        self.tracked_free -= 1;
        let total = self.tracked_free + self.fresh_points;
        debug_assert!(total > 0);
        let mut t = rng.random_range(0..total);
        if t < self.tracked_free {
            for (i, tv) in self.tracked.iter_mut().enumerate() {
                if t < tv.free {
                    if i == x {
                        return None;
                    }
                    tv.free -= 1;
                    self.tracked_free -= 1;
                    return Some(i);
                }
                t -= tv.free;
            }
            unreachable!("tracked free-point walk exhausted");
        }
        t -= self.tracked_free;
        for d in 3..self.counts.len() {
            let bucket = self.counts[d] * d;
            if t < bucket {
                let i = self.track_fresh(d);
                self.tracked[i].free -= 1;
                self.tracked_free -= 1;
                return Some(i);
            }
            t -= bucket;
        }
        unreachable!("fresh free-point walk exhausted");
    }

    fn degree(&self, i: usize) -> usize {
        self.tracked[i].free
            + self
                .edges
                .iter()
                .filter(|e| e.alive && (e.a == i || e.b == i))
                .count()
    }

    /// Contracts the tracked set: reveals every member point, drops in-set
    /// edges, re-points boundary edges at a newly born vertex, and returns
    /// `(new vertex, internal edge count)`. `None` propagates a loop restart.
    fn contract<R: Rng + ?Sized>(
        &mut self,
        set: &[usize],
        rng: &mut R,
    ) -> Option<(usize, usize)> {
        let mut internal = 0usize;
        for &m in set {
            while self.tracked[m].free > 0 {
                let p = self.reveal_partner(m, rng)?;
                if set.contains(&p) {
                    internal += 1;
                } else {
                    self.edges.push(Edge {
                        a: m,
                        b: p,
                        alive: true,
                    });
                }
            }
        }
        for e in self.edges.iter_mut().filter(|e| e.alive) {
            if set.contains(&e.a) && set.contains(&e.b) {
                e.alive = false;
                internal += 1;
            }
        }
        let new = self.tracked.len();
        self.tracked.push(Tv {
            start: None,
            free: 0,
            alive: true,
        });
        for e in self.edges.iter_mut().filter(|e| e.alive) {
            if set.contains(&e.a) {
                e.a = new;
            }
            if set.contains(&e.b) {
                e.b = new;
            }
            debug_assert!(e.a != e.b);
        }
        for &m in set {
            self.tracked[m].alive = false;
        }
        Some((new, internal))
    }

    /// Pendant removal at degree-1 vertex `z`: deletes `z`, its neighbor, and
    /// every edge at the neighbor (revealing the neighbor's free points so the
    /// far endpoints lose their degrees).
    fn remove_pendant<R: Rng + ?Sized>(&mut self, z: usize, rng: &mut R) -> Option<()> {
        debug_assert_eq!(self.degree(z), 1);
        let w = if self.tracked[z].free == 1 {
            self.reveal_partner(z, rng)?
            // The z-w edge dies immediately, so it is never added.
        } else {
            let e = self
                .edges
                .iter()
                .find(|e| e.alive && (e.a == z || e.b == z))
                .expect("degree-1 vertex has its edge");
            if e.a == z {
                e.b
            } else {
                e.a
            }
        };
        self.remove_matched_pair(z, w, rng)
    }

    /// Deletes matched vertices `z` and `w` along with every edge at `w`
    /// (callers guarantee all of z's edges lead to w). Each revealed partner
    /// of w just loses its point: the edges die, so none is materialized.
    fn remove_matched_pair<R: Rng + ?Sized>(
        &mut self,
        z: usize,
        w: usize,
        rng: &mut R,
    ) -> Option<()> {
        while self.tracked[w].free > 0 {
            self.reveal_partner(w, rng)?;
        }
        for e in self.edges.iter_mut().filter(|e| e.alive) {
            if e.a == w || e.b == w {
                e.alive = false;
            }
        }
        self.tracked[z].alive = false;
        self.tracked[w].alive = false;
        Some(())
    }

    /// Lowest-degree alive tracked vertex, ties broken uniformly (untouched
    /// vertices all keep degree 3 or more and never participate).
    fn min_alive<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<(usize, usize)> {
        let mut min_d = usize::MAX;
        let mut ids: Vec<usize> = Vec::new();
        for i in 0..self.tracked.len() {
            if !self.tracked[i].alive {
                continue;
            }
            let d = self.degree(i);
            if d < min_d {
                min_d = d;
                ids.clear();
                ids.push(i);
            } else if d == min_d {
                ids.push(i);
            }
        }
        if ids.is_empty() {
            return None;
        }
        Some((min_d, ids[rng.random_range(0..ids.len())]))
    }

    fn delta(&self) -> [i64; DEG_CAP] {
        let mut delta = [0i64; DEG_CAP];
        for (i, tv) in self.tracked.iter().enumerate() {
            if let Some(s) = tv.start {
                delta[s] -= 1;
            }
            if tv.alive {
                delta[self.degree(i)] += 1;
            }
        }
        delta
    }
}

/// One hyperaction from a fresh urn; `None` restarts (rejected pairing).
fn attempt<R: Rng + ?Sized>(rng: &mut R) -> Option<Outcome> {
    let mut t = Trial::new();

    // Max-edge removal: a fresh degree-8 vertex loses a uniformly random
    // point, and the revealed edge is deleted on the spot.
    let v = t.track_fresh(8);
    let u = t.reveal_partner(v, rng)?;

    // Repair check on the non-max endpoint (the max endpoint sits at degree 7
    // here and can never need repair). If the endpoint fell to degree 2, both
    // its remaining edges must be revealed to decide between the repair
    // contraction and the ordinary degree-2 arm.
    if t.degree(u) == 2 {
        let x1 = t.reveal_partner(u, rng)?;
        t.edges.push(Edge {
            a: u,
            b: x1,
            alive: true,
        });
        let x2 = t.reveal_partner(u, rng)?;
        t.edges.push(Edge {
            a: u,
            b: x2,
            alive: true,
        });
        if x1 == x2 && x1 != v {
            t.contract(&[u, v, x1], rng)?;
            t.acts.push(Act::Ac);
        }
    }

    // Low-degree drain, exactly the reducer's dispatch.
    loop {
        let Some((d, z)) = t.min_alive(rng) else { break };
        if d >= 3 {
            break;
        }
        match d {
            0 => {
                t.tracked[z].alive = false;
                t.acts.push(Act::V0);
            }
            1 => {
                t.remove_pendant(z, rng)?;
                t.acts.push(Act::V1);
            }
            2 => {
                while t.tracked[z].free > 0 {
                    let p = t.reveal_partner(z, rng)?;
                    t.edges.push(Edge {
                        a: z,
                        b: p,
                        alive: true,
                    });
                }
                let nbrs: Vec<usize> = t
                    .edges
                    .iter()
                    .filter(|e| e.alive && (e.a == z || e.b == z))
                    .map(|e| if e.a == z { e.b } else { e.a })
                    .collect();
                debug_assert_eq!(nbrs.len(), 2);
                if nbrs[0] == nbrs[1] {
                    // Both edges run to one neighbor: matched like a pendant,
                    // mirroring the reducer's exact move for this shape.
                    t.remove_matched_pair(z, nbrs[0], rng)?;
                    t.acts.push(Act::V1);
                } else {
                    let (_, internal) = t.contract(&[z, nbrs[0], nbrs[1]], rng)?;
                    t.acts.push(Act::C3(internal - 2));
                }
            }
            _ => unreachable!("drain only runs below degree 3"),
        }
    }

    Some(Outcome {
        delta: t.delta(),
        kind: classify(&t.acts),
    })
}

/// Runs one hyperaction to completion, restarting on rejected pairings.
pub fn simulate_one<R: Rng + ?Sized>(rng: &mut R) -> Outcome {
    loop {
        if let Some(o) = attempt(rng) {
            return o;
        }
    }
}

/// Endpoint fraction of degree `j` in the frozen histogram.
pub fn endpoint_fraction(j: usize) -> f64 {
    let two_e: usize = HISTOGRAM.iter().map(|&(d, c)| d * c).sum();
    let nj = HISTOGRAM
        .iter()
        .find(|&&(d, _)| d == j)
        .map(|&(_, c)| c)
        .unwrap_or(0);
    (j * nj) as f64 / two_e as f64
}
