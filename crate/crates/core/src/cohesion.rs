//! Group cohesion indices and their comparison with mean `d2`.
//!
//! RICE for one rollcall is `|yea - nay| / (yea + nay)`; the group index is
//! the unweighted mean over rollcalls where the group cast at least one yea
//! or nay. UNITY is the same per-rollcall value averaged with weights taken
//! from the chamber-wide vote, so that lopsided votes count less.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::correlation::CorrelationReport;
use crate::engine::BCallScore;
use crate::error::{Error, Result};
use crate::model::{Cast, VoteMatrix};
use crate::period::PeriodKey;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupVoteTally {
    pub group: String,
    pub rollcall_id: String,
    pub yea: usize,
    pub nay: usize,
    pub abstain: usize,
}

impl GroupVoteTally {
    pub fn new(group: &str, rollcall_id: &str, yea: usize, nay: usize, abstain: usize) -> Self {
        GroupVoteTally {
            group: group.to_string(),
            rollcall_id: rollcall_id.to_string(),
            yea,
            nay,
            abstain,
        }
    }

    /// Per-rollcall Rice value; `None` if the group cast no yea or nay.
    pub fn rice(&self) -> Option<f64> {
        let total = self.yea + self.nay;
        (total > 0).then(|| self.yea.abs_diff(self.nay) as f64 / total as f64)
    }

    /// `1 - |yea - nay| / (yea + nay)`: 1 for an even split, 0 when one-sided.
    pub fn closeness(&self) -> f64 {
        self.rice().map_or(0.0, |r| 1.0 - r)
    }
}

/// Weighting applied to per-rollcall Rice values when computing UNITY.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UnityWeighting {
    /// Weight by closeness of the chamber-wide vote.
    #[default]
    ChamberCloseness,
    /// Every rollcall weighs the same; UNITY then equals RICE.
    Uniform,
}

impl UnityWeighting {
    pub fn as_str(self) -> &'static str {
        match self {
            UnityWeighting::ChamberCloseness => "chamber-closeness",
            UnityWeighting::Uniform => "uniform",
        }
    }
}

impl std::str::FromStr for UnityWeighting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "chamber-closeness" => Ok(UnityWeighting::ChamberCloseness),
            "uniform" => Ok(UnityWeighting::Uniform),
            other => Err(Error::Config(format!("unknown unity weighting `{other}`"))),
        }
    }
}

/// Mean Rice value over rollcalls where the group cast a yea or nay.
pub fn rice_index(tallies: &[GroupVoteTally]) -> Option<f64> {
    let values: Vec<f64> = tallies.iter().filter_map(GroupVoteTally::rice).collect();
    (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
}

/// Weighted mean Rice value. `chamber` must hold a tally for every rollcall
/// in `tallies`. Returns `None` when every weight is zero.
pub fn unity_index(
    tallies: &[GroupVoteTally],
    chamber: &[GroupVoteTally],
    weighting: UnityWeighting,
) -> Result<Option<f64>> {
    let by_id: HashMap<&str, &GroupVoteTally> = chamber
        .iter()
        .map(|t| (t.rollcall_id.as_str(), t))
        .collect();
    let (mut num, mut den) = (0.0, 0.0);
    for t in tallies {
        let Some(rice) = t.rice() else { continue };
        let w = match weighting {
            UnityWeighting::Uniform => 1.0,
            UnityWeighting::ChamberCloseness => by_id
                .get(t.rollcall_id.as_str())
                .ok_or_else(|| {
                    Error::Config(format!("no chamber tally for rollcall `{}`", t.rollcall_id))
                })?
                .closeness(),
        };
        if w > 0.0 {
            num += w * rice;
            den += w;
        }
    }
    Ok((den > 0.0).then(|| num / den))
}

fn count(t: &mut GroupVoteTally, c: Cast) {
    match c {
        Cast::Yea => t.yea += 1,
        Cast::Nay => t.nay += 1,
        Cast::Abstain => t.abstain += 1,
        Cast::Absent => {}
    }
}

/// Tallies per group and rollcall. `group_of` is aligned with the matrix's
/// legislators; `None` members are left out. Groups appear in order of first
/// member, and each group gets one tally per rollcall.
pub fn tally_groups(
    m: &VoteMatrix,
    group_of: &[Option<String>],
) -> Vec<(String, Vec<GroupVoteTally>)> {
    let mut order: Vec<String> = Vec::new();
    for g in group_of.iter().flatten() {
        if !order.contains(g) {
            order.push(g.clone());
        }
    }
    order
        .into_iter()
        .map(|g| {
            let tallies = m
                .rollcalls()
                .iter()
                .enumerate()
                .map(|(j, rc)| {
                    let mut t = GroupVoteTally::new(&g, &rc.id, 0, 0, 0);
                    for (i, c) in m.participants(j) {
                        if group_of[i].as_deref() == Some(g.as_str()) {
                            count(&mut t, c);
                        }
                    }
                    t
                })
                .collect();
            (g, tallies)
        })
        .collect()
}

/// Chamber-wide tally for every rollcall.
pub fn chamber_tallies(m: &VoteMatrix) -> Vec<GroupVoteTally> {
    m.rollcalls()
        .iter()
        .enumerate()
        .map(|(j, rc)| {
            let mut t = GroupVoteTally::new("chamber", &rc.id, 0, 0, 0);
            for (_, c) in m.participants(j) {
                count(&mut t, c);
            }
            t
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupIndexSeries {
    pub group: String,
    pub period: PeriodKey,
    pub rice: Option<f64>,
    pub unity: Option<f64>,
    /// Rollcalls on which the group cast at least one yea or nay.
    pub n_rollcalls: usize,
}

/// RICE and UNITY for every group in one period.
pub fn group_indices(
    m: &VoteMatrix,
    group_of: &[Option<String>],
    period: &PeriodKey,
    weighting: UnityWeighting,
) -> Result<Vec<GroupIndexSeries>> {
    let chamber = chamber_tallies(m);
    tally_groups(m, group_of)
        .into_iter()
        .map(|(group, tallies)| {
            Ok(GroupIndexSeries {
                n_rollcalls: tallies.iter().filter(|t| t.rice().is_some()).count(),
                rice: rice_index(&tallies),
                unity: unity_index(&tallies, &chamber, weighting)?,
                period: period.clone(),
                group,
            })
        })
        .collect()
}

/// Mean `d2` of the legislators in one (group, period) cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellMean {
    pub group: String,
    pub period: PeriodKey,
    pub mean_d2: f64,
    pub n_legislators: usize,
}

/// Averages `d2` per (group, period). Scores whose group is `None` are
/// skipped. Cells appear in order of first score.
pub fn mean_d2_cells<F>(scores: &[BCallScore], group_of: F) -> Vec<CellMean>
where
    F: Fn(&BCallScore) -> Option<String>,
{
    let mut cells: Vec<(String, PeriodKey, f64, usize)> = Vec::new();
    for s in scores {
        let Some(g) = group_of(s) else { continue };
        match cells.iter_mut().find(|c| c.0 == g && c.1 == s.period) {
            Some(c) => {
                c.2 += s.d2;
                c.3 += 1;
            }
            None => cells.push((g, s.period.clone(), s.d2, 1)),
        }
    }
    cells
        .into_iter()
        .map(|(group, period, sum, n)| CellMean {
            group,
            period,
            mean_d2: sum / n as f64,
            n_legislators: n,
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CohesionComparison {
    /// Mean `d2` against RICE.
    pub rice: CorrelationReport,
    /// Mean `d2` against UNITY.
    pub unity: CorrelationReport,
    pub n_cells: usize,
}

/// Correlates cell mean `d2` with the matching cell's RICE and UNITY.
/// Needs at least three cells present on both sides.
pub fn cohesion_comparison(
    cells: &[CellMean],
    indices: &[GroupIndexSeries],
) -> Result<CohesionComparison> {
    let lookup: HashMap<(&str, &PeriodKey), &GroupIndexSeries> = indices
        .iter()
        .map(|ix| ((ix.group.as_str(), &ix.period), ix))
        .collect();
    let matched: Vec<(&CellMean, &GroupIndexSeries)> = cells
        .iter()
        .filter_map(|c| {
            lookup
                .get(&(c.group.as_str(), &c.period))
                .map(|ix| (c, *ix))
        })
        .collect();
    if matched.len() < 3 {
        return Err(Error::InsufficientCells {
            found: matched.len(),
        });
    }
    let paired = |pick: fn(&GroupIndexSeries) -> Option<f64>| -> Result<CorrelationReport> {
        let (x, y): (Vec<f64>, Vec<f64>) = matched
            .iter()
            .filter_map(|(c, ix)| pick(ix).map(|v| (c.mean_d2, v)))
            .unzip();
        CorrelationReport::compute(&x, &y)
    };
    Ok(CohesionComparison {
        rice: paired(|ix| ix.rice)?,
        unity: paired(|ix| ix.unity)?,
        n_cells: matched.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rice_examples() {
        assert_eq!(
            rice_index(&[GroupVoteTally::new("g", "v", 80, 20, 3)]),
            Some(0.6)
        );
        assert_eq!(
            rice_index(&[GroupVoteTally::new("g", "v", 50, 50, 0)]),
            Some(0.0)
        );
        let unanimous = [
            GroupVoteTally::new("g", "a", 10, 0, 0),
            GroupVoteTally::new("g", "b", 0, 7, 2),
        ];
        assert_eq!(rice_index(&unanimous), Some(1.0));
    }

    #[test]
    fn rice_undefined_without_yea_or_nay() {
        assert_eq!(rice_index(&[GroupVoteTally::new("g", "v", 0, 0, 5)]), None);
        assert_eq!(rice_index(&[]), None);
    }

    #[test]
    fn unity_contested_rollcall() {
        let g = [GroupVoteTally::new("g", "v", 80, 20, 0)];
        let ch = [GroupVoteTally::new("chamber", "v", 50, 50, 0)];
        assert_eq!(
            unity_index(&g, &ch, UnityWeighting::ChamberCloseness).unwrap(),
            Some(0.6)
        );
    }

    #[test]
    fn unity_discounts_lopsided_chamber() {
        let g = [
            GroupVoteTally::new("g", "a", 10, 0, 0),
            GroupVoteTally::new("g", "b", 5, 5, 0),
        ];
        let ch = [
            GroupVoteTally::new("chamber", "a", 40, 40, 0),
            GroupVoteTally::new("chamber", "b", 80, 0, 0),
        ];
        assert_eq!(
            unity_index(&g, &ch, UnityWeighting::ChamberCloseness).unwrap(),
            Some(1.0)
        );
        assert_eq!(
            unity_index(&g, &ch, UnityWeighting::Uniform).unwrap(),
            Some(0.5)
        );
    }

    #[test]
    fn unity_all_weights_zero_is_missing() {
        let g = [GroupVoteTally::new("g", "a", 3, 1, 0)];
        let ch = [GroupVoteTally::new("chamber", "a", 9, 0, 0)];
        assert_eq!(
            unity_index(&g, &ch, UnityWeighting::ChamberCloseness).unwrap(),
            None
        );
    }

    #[test]
    fn unity_unanimous_group_is_one() {
        let g = [
            GroupVoteTally::new("g", "a", 7, 0, 0),
            GroupVoteTally::new("g", "b", 0, 3, 0),
            GroupVoteTally::new("g", "c", 4, 0, 0),
        ];
        let ch = [
            GroupVoteTally::new("chamber", "a", 13, 11, 0),
            GroupVoteTally::new("chamber", "b", 3, 29, 0),
            GroupVoteTally::new("chamber", "c", 20, 0, 0),
        ];
        assert_eq!(
            unity_index(&g, &ch, UnityWeighting::ChamberCloseness).unwrap(),
            Some(1.0)
        );
    }

    #[test]
    fn unity_missing_chamber_tally_is_error() {
        let g = [GroupVoteTally::new("g", "a", 7, 0, 0)];
        assert!(unity_index(&g, &[], UnityWeighting::ChamberCloseness).is_err());
    }

    #[test]
    fn tallies_from_matrix() {
        let m = VoteMatrix::from_rows(
            &["a", "b", "c"],
            &[
                vec![Cast::Yea, Cast::Abstain],
                vec![Cast::Nay, Cast::Absent],
                vec![Cast::Yea, Cast::Yea],
            ],
            "2020-01-01",
        )
        .unwrap();
        let groups = vec![Some("P".to_string()), Some("P".to_string()), None];
        let t = tally_groups(&m, &groups);
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].1[0], GroupVoteTally::new("P", "V1", 1, 1, 0));
        assert_eq!(t[0].1[1], GroupVoteTally::new("P", "V2", 0, 0, 1));
        let ch = chamber_tallies(&m);
        assert_eq!(ch[0], GroupVoteTally::new("chamber", "V1", 2, 1, 0));
        let ix = group_indices(
            &m,
            &groups,
            &PeriodKey::new("2020"),
            UnityWeighting::Uniform,
        )
        .unwrap();
        assert_eq!(ix[0].n_rollcalls, 1);
        assert_eq!(ix[0].rice, Some(0.0));
    }

    fn cell(group: &str, period: &str, d2: f64) -> CellMean {
        CellMean {
            group: group.into(),
            period: PeriodKey::new(period),
            mean_d2: d2,
            n_legislators: 1,
        }
    }

    fn index(group: &str, period: &str, rice: f64) -> GroupIndexSeries {
        GroupIndexSeries {
            group: group.into(),
            period: PeriodKey::new(period),
            rice: Some(rice),
            unity: Some(rice),
            n_rollcalls: 10,
        }
    }

    #[test]
    fn decreasing_d2_gives_negative_r() {
        let cells = [
            cell("A", "1", 0.9),
            cell("A", "2", 0.7),
            cell("A", "3", 0.2),
        ];
        let ix = [
            index("A", "1", 0.1),
            index("A", "2", 0.5),
            index("A", "3", 0.6),
        ];
        let cmp = cohesion_comparison(&cells, &ix).unwrap();
        assert!(cmp.rice.pearson_r().unwrap() < 0.0);
        assert_eq!(cmp.n_cells, 3);
    }

    #[test]
    fn constant_d2_is_missing() {
        let cells = [
            cell("A", "1", 0.5),
            cell("A", "2", 0.5),
            cell("A", "3", 0.5),
        ];
        let ix = [
            index("A", "1", 0.1),
            index("A", "2", 0.5),
            index("A", "3", 0.6),
        ];
        let cmp = cohesion_comparison(&cells, &ix).unwrap();
        assert_eq!(cmp.rice.pearson, None);
    }

    #[test]
    fn too_few_cells() {
        let cells = [cell("A", "1", 0.5), cell("B", "1", 0.4)];
        let ix = [index("A", "1", 0.1), index("B", "1", 0.5)];
        assert!(matches!(
            cohesion_comparison(&cells, &ix),
            Err(Error::InsufficientCells { found: 2 })
        ));
    }
}
