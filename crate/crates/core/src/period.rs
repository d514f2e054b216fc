//! Slicing a vote matrix into analysis periods.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use chrono::{Datelike, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::VoteMatrix;

/// Label of an analysis period, e.g. `2014` or `2015-2016`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PeriodKey(pub String);

impl PeriodKey {
    pub fn new(label: impl Into<String>) -> Self {
        PeriodKey(label.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for PeriodKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Inclusive date range with a label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodRange {
    pub label: String,
    pub start: NaiveDate,
    pub end: NaiveDate,
}

impl PeriodRange {
    fn contains(&self, date: NaiveDate) -> bool {
        self.start <= date && date <= self.end
    }
}

/// How rollcalls are grouped into periods.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PeriodPolicy {
    CalendarYear,
    Ranges(Vec<PeriodRange>),
}

impl PeriodPolicy {
    /// Validated explicit ranges, sorted by start date. Ranges must not overlap.
    pub fn ranges(mut ranges: Vec<PeriodRange>) -> Result<Self> {
        if ranges.is_empty() {
            return Err(Error::Config("no period ranges given".into()));
        }
        ranges.sort_by_key(|r| r.start);
        for r in &ranges {
            if r.end < r.start {
                return Err(Error::Config(format!(
                    "range `{}` ends before it starts",
                    r.label
                )));
            }
        }
        for w in ranges.windows(2) {
            if w[1].start <= w[0].end {
                return Err(Error::Config(format!(
                    "ranges `{}` and `{}` overlap",
                    w[0].label, w[1].label
                )));
            }
        }
        Ok(PeriodPolicy::Ranges(ranges))
    }
}

impl FromStr for PeriodPolicy {
    type Err = Error;

    /// `year`, or `ranges=LABEL:START..END,...` where the label is optional.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("year") {
            return Ok(PeriodPolicy::CalendarYear);
        }
        let Some(spec) = s.strip_prefix("ranges=") else {
            return Err(Error::Config(format!(
                "unknown period policy `{s}` (expected `year` or `ranges=...`)"
            )));
        };
        let parse_date = |d: &str| {
            NaiveDate::parse_from_str(d.trim(), "%Y-%m-%d")
                .map_err(|_| Error::Config(format!("bad range date `{d}`")))
        };
        let mut ranges = Vec::new();
        for item in spec.split(',').filter(|i| !i.trim().is_empty()) {
            let (label, span) = match item.split_once(':') {
                Some((l, span)) => (Some(l.trim().to_string()), span),
                None => (None, item),
            };
            let (a, b) = span
                .split_once("..")
                .ok_or_else(|| Error::Config(format!("bad range `{item}`")))?;
            let (start, end) = (parse_date(a)?, parse_date(b)?);
            ranges.push(PeriodRange {
                label: label.unwrap_or_else(|| format!("{start}..{end}")),
                start,
                end,
            });
        }
        PeriodPolicy::ranges(ranges)
    }
}

/// Partitions rollcalls into periods. Each slice keeps the legislators with
/// at least one non-absent cast inside it; input order is preserved.
///
/// Calendar years come out in chronological order. Explicit ranges come out
/// in start-date order and a range without rollcalls yields an empty slice.
pub fn slice_by_period(
    m: &VoteMatrix,
    policy: &PeriodPolicy,
) -> Result<Vec<(PeriodKey, VoteMatrix)>> {
    let dates = m
        .rollcalls()
        .iter()
        .map(|rc| rc.parsed_date())
        .collect::<Result<Vec<_>>>()?;

    let buckets: Vec<(PeriodKey, Vec<usize>)> = match policy {
        PeriodPolicy::CalendarYear => {
            let mut by_year: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
            for (j, d) in dates.iter().enumerate() {
                by_year.entry(d.year()).or_default().push(j);
            }
            by_year
                .into_iter()
                .map(|(y, idx)| (PeriodKey::new(y.to_string()), idx))
                .collect()
        }
        PeriodPolicy::Ranges(ranges) => {
            let mut idx: Vec<Vec<usize>> = vec![Vec::new(); ranges.len()];
            for (j, d) in dates.iter().enumerate() {
                let k = ranges.iter().position(|r| r.contains(*d)).ok_or_else(|| {
                    Error::OutsideRanges {
                        rollcall: m.rollcalls()[j].id.clone(),
                        date: d.to_string(),
                    }
                })?;
                idx[k].push(j);
            }
            ranges
                .iter()
                .zip(idx)
                .map(|(r, i)| (PeriodKey::new(r.label.clone()), i))
                .collect()
        }
    };

    Ok(buckets
        .into_iter()
        .map(|(key, rcs)| {
            let legs: Vec<usize> = (0..m.n_legislators())
                .filter(|&i| rcs.iter().any(|&j| m.cast(i, j).is_present()))
                .collect();
            (key, m.subset(&legs, &rcs))
        })
        .collect())
}
