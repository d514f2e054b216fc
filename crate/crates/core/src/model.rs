//! Roll-call data model: casts, legislators, rollcalls and the vote matrix.
//!
//! A [`VoteMatrix`] is a dense legislators × rollcalls grid of [`Cast`]s.
//! Missing entries are stored as [`Cast::Absent`], which carries no numeric
//! value and is skipped by every statistic downstream. The matrix is
//! immutable once built; every operation returns a new value.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A single legislator's recorded choice on one rollcall.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cast {
    Yea,
    Nay,
    Abstain,
    #[default]
    Absent,
}

impl Cast {
    /// Numeric encoding: yea +1, nay -1, abstain 0; absent has none.
    #[inline]
    pub fn value(self) -> Option<i8> {
        match self {
            Cast::Yea => Some(1),
            Cast::Nay => Some(-1),
            Cast::Abstain => Some(0),
            Cast::Absent => None,
        }
    }

    #[inline]
    pub fn is_present(self) -> bool {
        self != Cast::Absent
    }

    /// Case-insensitive parse of `yea`, `nay`, `abstain` or `absent`.
    /// `present` reads as an abstention.
    pub fn parse(token: &str) -> Option<Cast> {
        match token.trim().to_ascii_lowercase().as_str() {
            "yea" => Some(Cast::Yea),
            "nay" => Some(Cast::Nay),
            "abstain" | "present" => Some(Cast::Abstain),
            "absent" => Some(Cast::Absent),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Cast::Yea => "yea",
            Cast::Nay => "nay",
            Cast::Abstain => "abstain",
            Cast::Absent => "absent",
        }
    }

    /// The mirrored cast: yea and nay swap, the others are unchanged.
    pub fn negated(self) -> Cast {
        match self {
            Cast::Yea => Cast::Nay,
            Cast::Nay => Cast::Yea,
            other => other,
        }
    }
}

impl fmt::Display for Cast {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One of the two poles legislators are divided into.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }

    pub fn parse(token: &str) -> Option<Side> {
        match token.trim().to_ascii_lowercase().as_str() {
            "left" => Some(Side::Left),
            "right" => Some(Side::Right),
            _ => None,
        }
    }

    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    /// 0 for left, 1 for right.
    #[inline]
    pub fn index(self) -> usize {
        match self {
            Side::Left => 0,
            Side::Right => 1,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Legislator {
    pub id: String,
    pub name: String,
    pub party: Option<String>,
    pub group: Option<Side>,
}

impl Legislator {
    pub fn new(id: impl Into<String>) -> Self {
        let id = id.into();
        Legislator {
            name: id.clone(),
            id,
            party: None,
            group: None,
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_party(mut self, party: impl Into<String>) -> Self {
        self.party = Some(party.into());
        self
    }
}

/// Rollcall metadata. The date is kept as recorded and parsed on demand so
/// that period slicing can report the offending rollcall.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RollCall {
    pub id: String,
    pub date: String,
}

impl RollCall {
    pub fn new(id: impl Into<String>, date: impl Into<String>) -> Self {
        RollCall {
            id: id.into(),
            date: date.into(),
        }
    }

    pub fn parsed_date(&self) -> Result<chrono::NaiveDate> {
        chrono::NaiveDate::parse_from_str(self.date.trim(), "%Y-%m-%d").map_err(|_| {
            Error::InvalidDate {
                rollcall: self.id.clone(),
                value: self.date.clone(),
            }
        })
    }
}

/// Legislators × rollcalls matrix of casts, stored row-major by legislator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VoteMatrix {
    legislators: Vec<Legislator>,
    rollcalls: Vec<RollCall>,
    casts: Vec<Cast>,
}

impl VoteMatrix {
    /// Builds a matrix from its parts. `casts` is row-major: legislator `i`,
    /// rollcall `j` lives at `i * rollcalls.len() + j`.
    pub fn from_parts(
        legislators: Vec<Legislator>,
        rollcalls: Vec<RollCall>,
        casts: Vec<Cast>,
    ) -> Result<Self> {
        if casts.len() != legislators.len() * rollcalls.len() {
            return Err(Error::Config(format!(
                "cast grid has {} entries, expected {} × {}",
                casts.len(),
                legislators.len(),
                rollcalls.len()
            )));
        }
        check_unique(legislators.iter().map(|l| l.id.as_str()), "legislator")?;
        check_unique(rollcalls.iter().map(|r| r.id.as_str()), "rollcall")?;
        Ok(VoteMatrix {
            legislators,
            rollcalls,
            casts,
        })
    }

    /// Convenience constructor from per-legislator rows of casts. Rollcalls
    /// are named `V1..Vn` and all share `date`.
    pub fn from_rows(ids: &[&str], rows: &[Vec<Cast>], date: &str) -> Result<Self> {
        if ids.len() != rows.len() {
            return Err(Error::LengthMismatch {
                left: ids.len(),
                right: rows.len(),
            });
        }
        let n_rc = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n_rc) {
            return Err(Error::Config("ragged cast rows".into()));
        }
        let legislators = ids.iter().map(|id| Legislator::new(*id)).collect();
        let rollcalls = (1..=n_rc)
            .map(|j| RollCall::new(format!("V{j}"), date))
            .collect();
        let casts = rows.iter().flatten().copied().collect();
        Self::from_parts(legislators, rollcalls, casts)
    }

    /// Same as [`VoteMatrix::from_rows`] with numeric votes in `{-1, 0, 1}`;
    /// any other value is treated as absent.
    pub fn from_values(ids: &[&str], rows: &[Vec<i8>], date: &str) -> Result<Self> {
        let rows: Vec<Vec<Cast>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| cast_from_value(v)).collect())
            .collect();
        Self::from_rows(ids, &rows, date)
    }

    pub fn legislators(&self) -> &[Legislator] {
        &self.legislators
    }

    pub fn rollcalls(&self) -> &[RollCall] {
        &self.rollcalls
    }

    pub fn n_legislators(&self) -> usize {
        self.legislators.len()
    }

    pub fn n_rollcalls(&self) -> usize {
        self.rollcalls.len()
    }

    #[inline]
    pub fn cast(&self, legislator: usize, rollcall: usize) -> Cast {
        self.casts[legislator * self.rollcalls.len() + rollcall]
    }

    /// All casts of one legislator, in rollcall order.
    #[inline]
    pub fn row(&self, legislator: usize) -> &[Cast] {
        let n = self.rollcalls.len();
        &self.casts[legislator * n..(legislator + 1) * n]
    }

    /// `(legislator index, cast)` for every non-absent cast on a rollcall.
    pub fn participants(&self, rollcall: usize) -> impl Iterator<Item = (usize, Cast)> + '_ {
        (0..self.legislators.len())
            .map(move |i| (i, self.cast(i, rollcall)))
            .filter(|(_, c)| c.is_present())
    }

    pub fn legislator_index(&self, id: &str) -> Option<usize> {
        self.legislators.iter().position(|l| l.id == id)
    }

    /// Index from legislator id to row.
    pub fn legislator_lookup(&self) -> HashMap<&str, usize> {
        self.legislators
            .iter()
            .enumerate()
            .map(|(i, l)| (l.id.as_str(), i))
            .collect()
    }

    /// Count of non-absent casts for a legislator.
    pub fn participation(&self, legislator: usize) -> usize {
        self.row(legislator)
            .iter()
            .filter(|c| c.is_present())
            .count()
    }

    /// Count of non-absent casts over the whole matrix.
    pub fn n_present(&self) -> usize {
        self.casts.iter().filter(|c| c.is_present()).count()
    }

    /// Sub-matrix restricted to the given legislator and rollcall indices,
    /// which must be in ascending order to preserve input ordering.
    pub fn subset(&self, legislators: &[usize], rollcalls: &[usize]) -> VoteMatrix {
        let mut casts = Vec::with_capacity(legislators.len() * rollcalls.len());
        for &i in legislators {
            let row = self.row(i);
            casts.extend(rollcalls.iter().map(|&j| row[j]));
        }
        VoteMatrix {
            legislators: legislators
                .iter()
                .map(|&i| self.legislators[i].clone())
                .collect(),
            rollcalls: rollcalls
                .iter()
                .map(|&j| self.rollcalls[j].clone())
                .collect(),
            casts,
        }
    }

    /// Every yea becomes nay and vice versa.
    pub fn negated(&self) -> VoteMatrix {
        VoteMatrix {
            legislators: self.legislators.clone(),
            rollcalls: self.rollcalls.clone(),
            casts: self.casts.iter().map(|c| c.negated()).collect(),
        }
    }

    /// Returns a copy with each legislator's `group` set from `groups`.
    pub fn with_groups(&self, groups: &[Option<Side>]) -> VoteMatrix {
        let mut out = self.clone();
        for (leg, g) in out.legislators.iter_mut().zip(groups) {
            leg.group = *g;
        }
        out
    }

    /// Joins matrices that cover disjoint rollcalls. Legislators are merged
    /// by id in order of first appearance; a legislator missing from a part
    /// is absent on that part's rollcalls.
    pub fn concat(parts: &[VoteMatrix]) -> Result<VoteMatrix> {
        let mut legislators: Vec<Legislator> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        for part in parts {
            for leg in &part.legislators {
                if !index.contains_key(&leg.id) {
                    index.insert(leg.id.clone(), legislators.len());
                    legislators.push(leg.clone());
                }
            }
        }
        let rollcalls: Vec<RollCall> = parts
            .iter()
            .flat_map(|p| p.rollcalls.iter().cloned())
            .collect();
        let n_rc = rollcalls.len();
        let mut casts = vec![Cast::Absent; legislators.len() * n_rc];
        let mut offset = 0;
        for part in parts {
            for (i, leg) in part.legislators.iter().enumerate() {
                let row = index[&leg.id];
                for (j, c) in part.row(i).iter().enumerate() {
                    casts[row * n_rc + offset + j] = *c;
                }
            }
            offset += part.n_rollcalls();
        }
        VoteMatrix::from_parts(legislators, rollcalls, casts)
    }
}

fn cast_from_value(v: i8) -> Cast {
    match v {
        1 => Cast::Yea,
        -1 => Cast::Nay,
        0 => Cast::Abstain,
        _ => Cast::Absent,
    }
}

fn check_unique<'a>(ids: impl Iterator<Item = &'a str>, what: &str) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for id in ids {
        if !seen.insert(id) {
            return Err(Error::Config(format!("duplicate {what} id `{id}`")));
        }
    }
    Ok(())
}

/// Keeps legislators whose share of non-absent casts is at least `threshold`
/// of the matrix's rollcalls. Equality is retained. Rollcalls are untouched.
pub fn filter_low_participation(m: &VoteMatrix, threshold: f64) -> Result<VoteMatrix> {
    if !(0.0..=1.0).contains(&threshold) {
        return Err(Error::Config(format!(
            "participation threshold {threshold} is outside [0, 1]"
        )));
    }
    let total = m.n_rollcalls();
    let keep: Vec<usize> = (0..m.n_legislators())
        .filter(|&i| total == 0 || m.participation(i) as f64 / total as f64 >= threshold)
        .collect();
    let all_rc: Vec<usize> = (0..total).collect();
    Ok(m.subset(&keep, &all_rc))
}
