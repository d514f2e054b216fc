//! Two-dimensional scoring of legislators from roll-call votes.
//!
//! Every legislator gets an ideological position `d1` (the mean of their
//! oriented, standardized vote deviations) and a cohesion score `d2` (the
//! dispersion of those deviations). Orientation needs a LEFT/RIGHT split of
//! the chamber, which can come from the built-in two-pole agglomerative
//! clustering or from external labels.
//!
//! The crate also computes RICE and UNITY group cohesion indices, Pearson
//! and Spearman correlations with standard errors for comparing score sets,
//! and a seeded synthetic legislature generator with planted ideology and
//! noise.
//!
//! ```
//! use bcall::{bcall_scores, bipartition, PeriodKey, VoteMatrix};
//!
//! let m = VoteMatrix::from_values(
//!     &["L1", "L2", "R1", "R2"],
//!     &[vec![1, 1, 1], vec![1, 1, -1], vec![-1, -1, -1], vec![-1, -1, 1]],
//!     "2020-01-01",
//! )?;
//! let poles = bipartition(&m, 100, Some("R1"))?;
//! let run = bcall_scores(&m, &poles.groups(), &PeriodKey::new("2020"))?;
//! assert!(run.scores[2].d1 < 0.0);
//! # Ok::<(), bcall::Error>(())
//! ```

pub mod cluster;
pub mod cohesion;
pub mod correlation;
pub mod engine;
pub mod error;
pub mod io;
pub mod model;
pub mod period;
pub mod pipeline;
pub mod synth;

pub use cluster::{
    agglomerate, bipartition, orient_labels, pairwise_distance, refine, DistanceMatrix,
    PolarityPartition,
};
pub use cohesion::{
    cohesion_comparison, group_indices, rice_index, unity_index, GroupIndexSeries, GroupVoteTally,
    UnityWeighting,
};
pub use correlation::{pearson, spearman, Correlation, CorrelationReport};
pub use engine::{
    bcall_scores, deviation, rollcall_stats, standardize, BCallScore, Groups, Orientation,
    RollCallStats, ScoreRun,
};
pub use error::{Error, Result};
pub use model::{filter_low_participation, Cast, Legislator, RollCall, Side, VoteMatrix};
pub use period::{slice_by_period, PeriodKey, PeriodPolicy};
pub use pipeline::{run_pipeline, RunConfig};
pub use synth::{generate, SynthConfig, Synthetic};
