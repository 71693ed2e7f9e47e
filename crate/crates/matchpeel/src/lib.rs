//! Degree-peeling matching heuristic for random multigraphs.
//!
//! The pipeline has three stages. `genmodel` samples a multigraph with a
//! prescribed degree sequence from the configuration model. `reduce` peels
//! the graph down to nothing, dispatching on the minimum degree and logging
//! every action; the log partitions into hyperactions whose boundary
//! statistics form a trace. `construct` unwinds the log in reverse to grow a
//! matching of the input graph. `oracle` supplies exact maximum-matching
//! references (blossom and brute force) and a fallback wrapper; `stats` turns
//! traces into drift, bound, and stopping-time reports.
//!
//! ```
//! use matchpeel::{
//!     regular_sequence, run_reduce, sample_configuration, unwind, validate_matching, Monitors,
//! };
//! use rand::SeedableRng;
//! use rand_chacha::ChaCha8Rng;
//!
//! let mut rng = ChaCha8Rng::seed_from_u64(7);
//! let degrees = regular_sequence(100, 3).unwrap();
//! let g0 = sample_configuration(&degrees, &mut rng, 10_000).unwrap();
//! let mut g = g0.clone();
//! let monitors = Monitors::from_graph(&mut g);
//! let (log, _trace) = run_reduce(&mut g, &mut rng, &monitors);
//! let matching = unwind(&log, &g0, &mut rng).unwrap();
//! assert!(validate_matching(&matching, &g0).valid);
//! ```

pub mod construct;
pub mod genmodel;
pub mod multigraph;
pub mod oracle;
pub mod reduce;
pub mod stats;

pub use construct::{unwind, validate_matching, ConstructError, Matching, MatchingReport};
pub use genmodel::{
    check_dominance, dominant_histogram, read_degrees, regular_sequence, sample_configuration,
    sample_simple, GenError, DEFAULT_MAX_ATTEMPTS,
};
pub use multigraph::{EdgeId, GraphError, MultiGraph, VertexId};
pub use oracle::{brute_force_matching, match_with_fallback, max_matching_exact, OracleError};
pub use reduce::{
    group_and_classify, reduce_step, run_reduce, Action, ActionLog, Hyperaction, HyperactionKind,
    LogError, Monitors, TraceRecord,
};
pub use stats::{
    drift_report, excess_monitor, hard_bound_violations, rem_a_check, survival_report,
    BoundViolation, DriftReport, ExcessReport, RemAReport, StatsError, SurvivalReport,
};
