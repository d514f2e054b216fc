//! Per-rollcall statistics, oriented standardized deviations and the two
//! legislator dimensions: `d1` (ideological position, the mean of a
//! legislator's deviations) and `d2` (cohesion, their population standard
//! deviation).
//!
//! A rollcall is oriented by comparing the left group's mean vote with the
//! right group's. When the left approves no more than the right the raw
//! deviation `(v - M) / S` keeps its sign, otherwise it is negated, so a
//! negative deviation always means "voted further left than the chamber".
//! Rollcalls with zero variance, or where one group has no participant,
//! carry no positional information and are dropped.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Side, VoteMatrix};
use crate::period::PeriodKey;

/// LEFT/RIGHT assignment keyed by legislator id.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Groups(BTreeMap<String, Side>);

impl Groups {
    pub fn new() -> Self {
        Groups::default()
    }

    pub fn insert(&mut self, id: impl Into<String>, side: Side) {
        self.0.insert(id.into(), side);
    }

    pub fn get(&self, id: &str) -> Option<Side> {
        self.0.get(id).copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Side)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }

    /// Every LEFT becomes RIGHT and vice versa.
    pub fn swapped(&self) -> Groups {
        Groups(
            self.0
                .iter()
                .map(|(k, v)| (k.clone(), v.opposite()))
                .collect(),
        )
    }

    /// Groups aligned with the matrix's legislator order.
    pub fn resolve(&self, m: &VoteMatrix) -> Vec<Option<Side>> {
        m.legislators().iter().map(|l| self.get(&l.id)).collect()
    }
}

impl<S: Into<String>> FromIterator<(S, Side)> for Groups {
    fn from_iter<I: IntoIterator<Item = (S, Side)>>(iter: I) -> Self {
        Groups(iter.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Positive,
    Negative,
    Dropped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RollCallStats {
    pub rollcall_id: String,
    pub n_participants: usize,
    /// Mean numeric cast over non-absent participants.
    pub mean: Option<f64>,
    /// Population standard deviation over the same participants.
    pub stddev: Option<f64>,
    pub left_mean: Option<f64>,
    pub right_mean: Option<f64>,
    pub orientation: Orientation,
    /// Both group means are defined and equal.
    pub tied: bool,
}

impl RollCallStats {
    pub fn is_dropped(&self) -> bool {
        self.orientation == Orientation::Dropped
    }
}

#[derive(Default, Clone, Copy)]
struct Acc {
    sum: i64,
    n: i64,
}

impl Acc {
    fn mean(self) -> Option<f64> {
        (self.n > 0).then(|| self.sum as f64 / self.n as f64)
    }
}

/// Statistics for a rollcall given the `(side, value)` of each participant.
/// Group means are compared as exact fractions so ties are detected exactly.
pub fn stats_from_votes(
    rollcall_id: &str,
    votes: impl IntoIterator<Item = (Side, i8)>,
) -> RollCallStats {
    let votes: Vec<(Side, i8)> = votes.into_iter().collect();
    let mut all = Acc::default();
    let mut by_side = [Acc::default(); 2];
    let (mut lo, mut hi) = (i8::MAX, i8::MIN);
    for &(side, v) in &votes {
        all.sum += v as i64;
        all.n += 1;
        by_side[side.index()].sum += v as i64;
        by_side[side.index()].n += 1;
        lo = lo.min(v);
        hi = hi.max(v);
    }

    let mean = all.mean();
    let stddev = mean.map(|m| {
        let ss: f64 = votes.iter().map(|&(_, v)| (v as f64 - m).powi(2)).sum();
        (ss / all.n as f64).sqrt()
    });
    let [left, right] = by_side;

    let (orientation, tied) = if all.n == 0 || lo == hi || left.n == 0 || right.n == 0 {
        (Orientation::Dropped, false)
    } else {
        // left.sum / left.n  vs  right.sum / right.n, cross-multiplied
        let lhs = left.sum * right.n;
        let rhs = right.sum * left.n;
        let orientation = if lhs <= rhs {
            Orientation::Positive
        } else {
            Orientation::Negative
        };
        (orientation, lhs == rhs)
    };

    RollCallStats {
        rollcall_id: rollcall_id.to_string(),
        n_participants: all.n as usize,
        mean,
        stddev,
        left_mean: left.mean(),
        right_mean: right.mean(),
        orientation,
        tied,
    }
}

/// Statistics for rollcall `rollcall` of `m`. Every participant must have a group.
pub fn rollcall_stats(m: &VoteMatrix, rollcall: usize, groups: &Groups) -> Result<RollCallStats> {
    rollcall_stats_resolved(m, rollcall, &groups.resolve(m))
}

fn rollcall_stats_resolved(
    m: &VoteMatrix,
    rollcall: usize,
    sides: &[Option<Side>],
) -> Result<RollCallStats> {
    let votes = m
        .participants(rollcall)
        .map(|(i, c)| {
            let side =
                sides[i].ok_or_else(|| Error::MissingGroup(m.legislators()[i].id.clone()))?;
            Ok((side, c.value().expect("participants are non-absent")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(stats_from_votes(&m.rollcalls()[rollcall].id, votes))
}

/// Oriented standardized deviation of vote `v` on a retained rollcall.
///
/// # Panics
///
/// If the rollcall was dropped; callers must skip dropped rollcalls.
#[inline]
pub fn deviation(v: f64, stats: &RollCallStats) -> f64 {
    let (mean, sd) = match (stats.orientation, stats.mean, stats.stddev) {
        (Orientation::Dropped, _, _) | (_, None, _) | (_, _, None) => {
            panic!(
                "deviation requested on dropped rollcall `{}`",
                stats.rollcall_id
            )
        }
        (_, Some(m), Some(s)) => (m, s),
    };
    let z = (v - mean) / sd;
    match stats.orientation {
        Orientation::Positive => z,
        _ => -z,
    }
}

/// A legislator's deviations over the retained rollcalls they voted on.
#[derive(Clone, Debug, PartialEq)]
pub struct DeviationSeries {
    pub legislator_id: String,
    pub values: Vec<f64>,
}

/// Rollcall statistics plus the grid of deviations (`None` where the cast is
/// absent or the rollcall is dropped).
#[derive(Clone, Debug)]
pub struct Standardized {
    pub stats: Vec<RollCallStats>,
    n_rollcalls: usize,
    u: Vec<Option<f64>>,
    ids: Vec<String>,
}

impl Standardized {
    pub fn u(&self, legislator: usize, rollcall: usize) -> Option<f64> {
        self.u[legislator * self.n_rollcalls + rollcall]
    }

    /// Deviations of every participant on one rollcall.
    pub fn rollcall_deviations(&self, rollcall: usize) -> Vec<f64> {
        (0..self.ids.len())
            .filter_map(|i| self.u(i, rollcall))
            .collect()
    }

    pub fn series(&self, legislator: usize) -> DeviationSeries {
        let n = self.n_rollcalls;
        DeviationSeries {
            legislator_id: self.ids[legislator].clone(),
            values: self.u[legislator * n..(legislator + 1) * n]
                .iter()
                .flatten()
                .copied()
                .collect(),
        }
    }

    pub fn n_dropped(&self) -> usize {
        self.stats.iter().filter(|s| s.is_dropped()).count()
    }

    pub fn n_tied(&self) -> usize {
        self.stats.iter().filter(|s| s.tied).count()
    }
}

/// Computes statistics for every rollcall and the deviation of every cast.
pub fn standardize(m: &VoteMatrix, groups: &Groups) -> Result<Standardized> {
    let sides = groups.resolve(m);
    let stats = (0..m.n_rollcalls())
        .into_par_iter()
        .map(|j| rollcall_stats_resolved(m, j, &sides))
        .collect::<Result<Vec<_>>>()?;

    let n_rc = m.n_rollcalls();
    let mut u = vec![None; m.n_legislators() * n_rc];
    for (j, st) in stats.iter().enumerate() {
        if st.is_dropped() {
            continue;
        }
        for (i, c) in m.participants(j) {
            let v = c.value().expect("participants are non-absent") as f64;
            u[i * n_rc + j] = Some(deviation(v, st));
        }
    }
    Ok(Standardized {
        stats,
        n_rollcalls: n_rc,
        u,
        ids: m.legislators().iter().map(|l| l.id.clone()).collect(),
    })
}

/// Mean and population standard deviation of a series; `None` when empty.
/// A constant series yields exactly that constant and zero.
pub fn mean_and_spread(values: &[f64]) -> Option<(f64, f64)> {
    let first = *values.first()?;
    if values.iter().all(|&v| v == first) {
        return Some((first, 0.0));
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    Some((mean, var.sqrt()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BCallScore {
    pub legislator_id: String,
    pub period: PeriodKey,
    /// Ideological position; negative is left of centre.
    pub d1: f64,
    /// Dispersion of the legislator's deviations; low is cohesive.
    pub d2: f64,
    pub n_votes: usize,
    pub group: Option<Side>,
}

/// Scores for one period together with the rollcall diagnostics.
#[derive(Clone, Debug)]
pub struct ScoreRun {
    pub period: PeriodKey,
    pub scores: Vec<BCallScore>,
    pub stats: Vec<RollCallStats>,
    pub n_dropped: usize,
    pub n_tied: usize,
}

/// Scores every legislator with at least one retained vote, in input order.
/// If every rollcall is dropped the score list is empty and `n_dropped`
/// equals the rollcall count.
pub fn bcall_scores(m: &VoteMatrix, groups: &Groups, period: &PeriodKey) -> Result<ScoreRun> {
    let std = standardize(m, groups)?;
    let scores = (0..m.n_legislators())
        .filter_map(|i| {
            let series = std.series(i);
            let (d1, d2) = mean_and_spread(&series.values)?;
            Some(BCallScore {
                legislator_id: series.legislator_id,
                period: period.clone(),
                d1,
                d2,
                n_votes: series.values.len(),
                group: groups.get(&m.legislators()[i].id),
            })
        })
        .collect();
    Ok(ScoreRun {
        period: period.clone(),
        scores,
        n_dropped: std.n_dropped(),
        n_tied: std.n_tied(),
        stats: std.stats,
    })
}
