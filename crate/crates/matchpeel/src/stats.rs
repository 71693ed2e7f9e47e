//! Trace analysis: drift comparisons, bound checks, stopping times.
//!
//! Everything here is a pure function of the trace records captured at
//! hyperaction boundaries. Predictions are evaluated from the endpoint
//! fractions p_j = j*n_j/(2e) of the records themselves; asymptotically
//! vanishing correction terms are treated as zero and absorbed into the
//! caller's tolerances.

use serde::Serialize;
use thiserror::Error;

use crate::genmodel::dominant_histogram;
use crate::reduce::{HyperactionKind, TraceRecord};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StatsError {
    #[error("trace too short: need {needed} boundaries past the degree floor, have {got}")]
    TraceTooShort { needed: usize, got: usize },
}

/// Edge floor below which boundaries stop being analyzed: n0^0.9.
pub fn edge_floor(n0: usize) -> f64 {
    (n0 as f64).powf(0.9)
}

/// Natural-log-squared ceiling used by the excess monitor.
pub fn excess_ceiling(n0: usize) -> f64 {
    let l = (n0 as f64).ln();
    l * l
}

/// Whether a boundary is inside the analysis window: strictly dominant at
/// order `j` and at or above the edge floor for `n0`.
pub fn in_window(rec: &TraceRecord, j: usize, n0: usize) -> bool {
    rec.edges as f64 >= edge_floor(n0)
        && dominant_histogram(&rec.histogram, j, n0, true)
}

/// First boundary whose maximum degree is at most `j`; `trace.len()` if none.
/// A full trace ends at the empty graph, so the index exists there.
pub fn tau_index(trace: &[TraceRecord], j: usize) -> usize {
    trace
        .iter()
        .position(|r| r.max_degree <= j)
        .unwrap_or(trace.len())
}

/// First boundary leaving the order-`j` analysis window (dominance broken or
/// edges under the floor); `trace.len()` if none.
pub fn t_index(trace: &[TraceRecord], j: usize, n0: usize) -> usize {
    trace
        .iter()
        .position(|r| !in_window(r, j, n0))
        .unwrap_or(trace.len())
}

/// Expected change of the degree-r vertex count over one good hyperaction,
/// as a function of the endpoint fractions at its start:
/// `p(r+1) - p(r) + p(3) * (sum over j1+j2-2 = r of p(j1)*p(j2) - 2*p(r))`,
/// the pair sum ranging over ordered pairs with j1, j2 >= 3. The caller adds
/// the max-degree indicator term when r is one below the degree cap.
pub fn predicted_degree_drift(p: impl Fn(usize) -> f64, r: usize) -> f64 {
    let mut pair_sum = 0.0;
    // j1 + j2 = r + 2, both at least 3.
    for j1 in 3..=r.saturating_sub(1) {
        let j2 = r + 2 - j1;
        pair_sum += p(j1) * p(j2);
    }
    p(r + 1) - p(r) + p(3) * (pair_sum - 2.0 * p(r))
}

/// Expected edge change per good hyperaction: `-1 - 2*p3`.
pub fn predicted_edge_drift(p3: f64) -> f64 {
    -1.0 - 2.0 * p3
}

/// Upper bound on the expected excess change per good hyperaction while the
/// excess is positive:
/// `-(1 - p3) - p(ell+1) - p3^3 + (ell - 3) * p3 * (1 - p3)^2`.
pub fn excess_drift_bound(p3: f64, p_next: f64, ell: usize) -> f64 {
    -(1.0 - p3) - p_next - p3.powi(3) + (ell as f64 - 3.0) * p3 * (1.0 - p3) * (1.0 - p3)
}

/// One breached per-step bound: which hyperaction, which quantity, and the
/// change observed against the allowed interval.
#[derive(Debug, Clone, Serialize)]
pub struct BoundViolation {
    pub index: usize,
    pub kind: String,
    pub quantity: String,
    pub change: i64,
    pub low: i64,
    pub high: i64,
}

impl std::fmt::Display for BoundViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "hyperaction {} ({}): {} changed by {}, allowed [{}, {}]",
            self.index, self.kind, self.quantity, self.change, self.low, self.high
        )
    }
}

/// Checks the per-step hard bounds over every good hyperaction whose start
/// boundary has maximum degree above 3: |Δe| <= 6; |Δn_r| <= 5 for
/// 3 <= r <= k-1; and -2 <= Δex_ell <= ell-3 + [ex_ell = 0] for
/// 3 <= ell <= k. The excess interval is asymmetric on purpose: a single
/// max-edge removal between two high-degree vertices lowers every excess by
/// 2, while increases only come from contractions and stay under the stated
/// ceiling.
pub fn hard_bound_violations(trace: &[TraceRecord], k: usize) -> Vec<BoundViolation> {
    let mut out = Vec::new();
    for pair in trace.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if b.kind == HyperactionKind::Initial || !b.kind.is_good() || a.max_degree <= 3 {
            continue;
        }
        let mut push = |quantity: String, change: i64, low: i64, high: i64| {
            if change < low || change > high {
                out.push(BoundViolation {
                    index: b.index,
                    kind: b.kind.as_str().to_owned(),
                    quantity,
                    change,
                    low,
                    high,
                });
            }
        };
        let de = b.edges as i64 - a.edges as i64;
        push("edges".to_owned(), de, -6, 6);
        for r in 3..k {
            let dn = b.n(r) as i64 - a.n(r) as i64;
            push(format!("n_{r}"), dn, -5, 5);
        }
        for ell in 3..=k {
            let dex = b.excess(ell) as i64 - a.excess(ell) as i64;
            let high = ell as i64 - 3 + i64::from(a.excess(ell) == 0);
            push(format!("ex_{ell}"), dex, -2, high);
        }
    }
    out
}

/// Observed-vs-predicted drift of one degree count inside a window.
#[derive(Debug, Clone, Serialize)]
pub struct DegreeDriftRow {
    pub r: usize,
    pub observed: f64,
    pub predicted: f64,
    pub z: f64,
}

/// Observed excess drift against its upper bound inside a window; `samples`
/// counts boundaries with positive excess (the only ones measured).
#[derive(Debug, Clone, Serialize)]
pub struct ExcessDriftRow {
    pub ell: usize,
    pub samples: usize,
    pub observed: f64,
    pub bound: f64,
}

/// Fractions of hyperaction kinds inside a window.
#[derive(Debug, Clone, Default, Serialize)]
pub struct KindFractions {
    pub t1: f64,
    pub t2: f64,
    pub t3a: f64,
    pub t3b: f64,
    pub t3c: f64,
    pub t4: f64,
    pub bad: f64,
}

impl KindFractions {
    pub fn t3(&self) -> f64 {
        self.t3a + self.t3b + self.t3c
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WindowStats {
    /// First boundary index of the window; the window measures the changes
    /// from boundary `start` to `start + len`.
    pub start: usize,
    pub len: usize,
    pub mean_p3: f64,
    pub observed_edge_drift: f64,
    pub predicted_edge_drift: f64,
    pub edge_z: f64,
    pub degree_rows: Vec<DegreeDriftRow>,
    pub excess_rows: Vec<ExcessDriftRow>,
    pub kinds: KindFractions,
    /// Fraction of boundaries in the window whose max degree exceeds 3.
    pub above_degree_floor: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DriftReport {
    pub k: usize,
    pub window: usize,
    pub n0: usize,
    pub windows: Vec<WindowStats>,
}

fn mean_and_z(samples: &[f64], predicted: f64) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    if samples.len() < 2 {
        return (mean, 0.0);
    }
    let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    let se = (var / n).sqrt();
    let z = if se > 0.0 { (mean - predicted) / se } else { 0.0 };
    (mean, z)
}

/// Splits the trace into consecutive windows of `window` hyperactions and
/// compares observed mean changes of edges, degree counts, and excesses
/// against their predictions. `k` is the input's degree cap: degree rows run
/// r in 3..k, with the max-degree indicator added at r = k-1; excess rows run
/// ell in 3..=k. Partial tail windows are dropped.
pub fn drift_report(
    trace: &[TraceRecord],
    window: usize,
    k: usize,
    n0: usize,
) -> Result<DriftReport, StatsError> {
    let diffs = trace.len().saturating_sub(1);
    let usable = trace[..diffs]
        .iter()
        .filter(|r| r.max_degree > 3)
        .count();
    if usable < window || window == 0 {
        return Err(StatsError::TraceTooShort {
            needed: window.max(1),
            got: usable,
        });
    }

    let mut windows = Vec::new();
    let mut start = 0;
    while start + window <= diffs {
        let range = start..start + window;
        let recs = &trace[range.start..range.end + 1];

        let de: Vec<f64> = recs
            .windows(2)
            .map(|w| w[1].edges as f64 - w[0].edges as f64)
            .collect();
        let mean_p3 = recs[..window].iter().map(|r| r.p(3)).sum::<f64>() / window as f64;
        let predicted = predicted_edge_drift(mean_p3);
        let (observed, z) = mean_and_z(&de, predicted);

        let p_start = |j: usize| recs[0].p(j);
        let mut degree_rows = Vec::new();
        for r in 3..k {
            let dn: Vec<f64> = recs
                .windows(2)
                .map(|w| w[1].n(r) as f64 - w[0].n(r) as f64)
                .collect();
            let mut pred = predicted_degree_drift(p_start, r);
            if r + 1 == k {
                // Each removal at a degree-k vertex deterministically makes
                // one degree-(k-1) vertex.
                let hits = recs[..window]
                    .iter()
                    .filter(|rec| rec.max_degree == k)
                    .count();
                pred += hits as f64 / window as f64;
            }
            let (obs, zr) = mean_and_z(&dn, pred);
            degree_rows.push(DegreeDriftRow {
                r,
                observed: obs,
                predicted: pred,
                z: zr,
            });
        }

        let mut excess_rows = Vec::new();
        for ell in 3..=k {
            let dex: Vec<f64> = recs
                .windows(2)
                .filter(|w| w[0].excess(ell) > 0)
                .map(|w| w[1].excess(ell) as f64 - w[0].excess(ell) as f64)
                .collect();
            let p3_next = (
                recs[..window].iter().map(|r| r.p(3)).sum::<f64>() / window as f64,
                recs[..window].iter().map(|r| r.p(ell + 1)).sum::<f64>() / window as f64,
            );
            let observed = if dex.is_empty() {
                f64::NAN
            } else {
                dex.iter().sum::<f64>() / dex.len() as f64
            };
            excess_rows.push(ExcessDriftRow {
                ell,
                samples: dex.len(),
                observed,
                bound: excess_drift_bound(p3_next.0, p3_next.1, ell),
            });
        }

        let mut kinds = KindFractions::default();
        for rec in &recs[1..] {
            let slot = match rec.kind {
                HyperactionKind::T1 => &mut kinds.t1,
                HyperactionKind::T2 => &mut kinds.t2,
                HyperactionKind::T3a => &mut kinds.t3a,
                HyperactionKind::T3b => &mut kinds.t3b,
                HyperactionKind::T3c => &mut kinds.t3c,
                HyperactionKind::T4 => &mut kinds.t4,
                HyperactionKind::Initial | HyperactionKind::Bad => &mut kinds.bad,
            };
            *slot += 1.0 / window as f64;
        }

        let above = recs[..window]
            .iter()
            .filter(|r| r.max_degree > 3)
            .count() as f64
            / window as f64;

        windows.push(WindowStats {
            start,
            len: window,
            mean_p3,
            observed_edge_drift: observed,
            predicted_edge_drift: predicted,
            edge_z: z,
            degree_rows,
            excess_rows,
            kinds,
            above_degree_floor: above,
        });
        start += window;
    }

    Ok(DriftReport {
        k,
        window,
        n0,
        windows,
    })
}

impl DriftReport {
    /// One CSV row per window: edge drift, p3, and kind fractions.
    pub fn windows_csv(&self) -> String {
        let mut out = String::from(
            "start,len,mean_p3,observed_de,predicted_de,edge_z,t1,t2,t3,t4,bad\n",
        );
        for w in &self.windows {
            out.push_str(&format!(
                "{},{},{:.6},{:.6},{:.6},{:.3},{:.6},{:.6},{:.6},{:.6},{:.6}\n",
                w.start,
                w.len,
                w.mean_p3,
                w.observed_edge_drift,
                w.predicted_edge_drift,
                w.edge_z,
                w.kinds.t1,
                w.kinds.t2,
                w.kinds.t3(),
                w.kinds.t4,
                w.kinds.bad,
            ));
        }
        out
    }
}

/// Endpoint-fraction bound check along a trace. Applies at boundaries that
/// are strictly dominant at order k-1 and above the edge floor; at each such
/// boundary p3 must stay under `3 / sum_{j=3}^{k-1} 1.17^(j-3) * j + eps`
/// (and under the fixed anchor 0.081 + eps, the k >= 8 value).
#[derive(Debug, Clone, Serialize)]
pub struct RemAReport {
    pub k: usize,
    pub epsilon: f64,
    /// 3 / sum 1.17^(j-3) * j, the operative bound.
    pub bound: f64,
    /// Same shape with the exponent flipped (1.17^(3-j)); reported for
    /// comparison, not enforced.
    pub bound_alt: f64,
    pub anchor: f64,
    pub checked: usize,
    pub max_p3: f64,
    pub violations: Vec<usize>,
}

pub const REM_A_ANCHOR: f64 = 0.081;
pub const REM_A_DEFAULT_EPSILON: f64 = 0.005;
pub const DOMINANCE_ALPHA: f64 = 1.17;

pub fn rem_a_bound(k: usize) -> f64 {
    let denom: f64 = (3..k).map(|j| DOMINANCE_ALPHA.powi(j as i32 - 3) * j as f64).sum();
    3.0 / denom
}

pub fn rem_a_bound_alt(k: usize) -> f64 {
    let denom: f64 = (3..k).map(|j| DOMINANCE_ALPHA.powi(3 - j as i32) * j as f64).sum();
    3.0 / denom
}

/// Checks the p3 bound over all in-window boundaries. Intended for k >= 8
/// (where the 0.081 anchor applies); smaller k report against their own
/// computed bound only.
pub fn rem_a_check(trace: &[TraceRecord], k: usize, n0: usize, epsilon: f64) -> RemAReport {
    let bound = rem_a_bound(k);
    let mut report = RemAReport {
        k,
        epsilon,
        bound,
        bound_alt: rem_a_bound_alt(k),
        anchor: REM_A_ANCHOR,
        checked: 0,
        max_p3: 0.0,
        violations: Vec::new(),
    };
    for rec in trace {
        if !in_window(rec, k - 1, n0) {
            continue;
        }
        report.checked += 1;
        let p3 = rec.p(3);
        if p3 > report.max_p3 {
            report.max_p3 = p3;
        }
        let limit = if k >= 8 {
            bound.min(REM_A_ANCHOR)
        } else {
            bound
        };
        if p3 > limit + epsilon {
            report.violations.push(rec.index);
        }
    }
    report
}

/// Excess ceiling and hyperaction goodness over the in-floor prefix.
#[derive(Debug, Clone, Serialize)]
pub struct ExcessReport {
    pub k: usize,
    pub ceiling: f64,
    pub checked: usize,
    pub max_excess: usize,
    pub within: bool,
    pub all_good: bool,
    pub bad_count: usize,
}

pub fn excess_monitor(trace: &[TraceRecord], k: usize, n0: usize) -> ExcessReport {
    let floor = edge_floor(n0);
    let ceiling = excess_ceiling(n0);
    let mut report = ExcessReport {
        k,
        ceiling,
        checked: 0,
        max_excess: 0,
        within: true,
        all_good: true,
        bad_count: 0,
    };
    for rec in trace {
        if (rec.edges as f64) < floor {
            continue;
        }
        report.checked += 1;
        let ex = rec.excess(k);
        report.max_excess = report.max_excess.max(ex);
        if !rec.kind.is_good() {
            report.all_good = false;
            report.bad_count += 1;
        }
    }
    report.within = (report.max_excess as f64) <= ceiling;
    report
}

/// Edge survival at the first boundary where the max degree reaches k-1,
/// and how long that took.
#[derive(Debug, Clone, Serialize)]
pub struct SurvivalReport {
    pub k: usize,
    /// First boundary index with max degree <= k-1.
    pub tau: usize,
    pub e0: usize,
    pub edges_at_tau: usize,
    pub ratio: f64,
    /// Degree-k count at the start; the time bound scales with it.
    pub nk0: usize,
    /// k >= 8: ratio >= 1 - 4/k. k in 5..=7: ratio >= 1e-25 (never binding
    /// at desk scale). Smaller k: not applicable, reported true.
    pub edge_ok: bool,
    /// k >= 8: tau <= 1.5*nk0 + n0^0.6; otherwise not applicable, true.
    pub time_ok: bool,
    pub applicable: bool,
}

pub fn survival_report(trace: &[TraceRecord], k: usize, n0: usize) -> SurvivalReport {
    let tau = tau_index(trace, k.saturating_sub(1));
    let tau = tau.min(trace.len().saturating_sub(1));
    let e0 = trace.first().map(|r| r.edges).unwrap_or(0);
    let edges_at_tau = trace.get(tau).map(|r| r.edges).unwrap_or(0);
    let ratio = if e0 == 0 {
        1.0
    } else {
        edges_at_tau as f64 / e0 as f64
    };
    let nk0 = trace.first().map(|r| r.n(k)).unwrap_or(0);
    let applicable = k >= 5;
    let edge_ok = if k >= 8 {
        ratio >= 1.0 - 4.0 / k as f64
    } else if k >= 5 {
        ratio >= 1e-25
    } else {
        true
    };
    let time_ok = if k >= 8 {
        (tau as f64) <= 1.5 * nk0 as f64 + (n0 as f64).powf(0.6)
    } else {
        true
    };
    SurvivalReport {
        k,
        tau,
        e0,
        edges_at_tau,
        ratio,
        nk0,
        edge_ok,
        time_ok,
        applicable,
    }
}
