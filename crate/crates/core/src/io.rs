//! CSV formats: canonical long-format votes, Voteview exports, and the
//! score, cluster, index, plot, ground-truth and correlation outputs.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use csv::{ReaderBuilder, StringRecord, Trim, WriterBuilder};

use crate::cohesion::GroupIndexSeries;
use crate::engine::{BCallScore, Groups};
use crate::error::{Error, Result};
use crate::model::{Cast, Legislator, RollCall, Side, VoteMatrix};
use crate::synth::GroundTruth;

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| Error::io(path, e))
}

fn reader<R: Read>(r: R) -> csv::Reader<R> {
    ReaderBuilder::new()
        .trim(Trim::All)
        .flexible(false)
        .from_reader(r)
}

/// Column positions looked up by (case-insensitive) header name.
struct Columns {
    index: HashMap<String, usize>,
    source: String,
}

impl Columns {
    fn new(headers: &StringRecord, source: &str) -> Self {
        Columns {
            index: headers
                .iter()
                .enumerate()
                .map(|(i, h)| (h.trim().to_ascii_lowercase(), i))
                .collect(),
            source: source.to_string(),
        }
    }

    fn require(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::MissingColumn {
                column: name.to_string(),
                source_name: self.source.clone(),
            })
    }

    fn optional(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }
}

fn line_of(rec: &StringRecord) -> u64 {
    rec.position().map_or(0, |p| p.line())
}

fn non_empty(s: &str) -> Option<String> {
    (!s.is_empty()).then(|| s.to_string())
}

/// Accumulates casts in first-appearance order and rejects duplicates.
#[derive(Default)]
struct MatrixBuilder {
    legislators: Vec<Legislator>,
    leg_index: HashMap<String, usize>,
    rollcalls: Vec<RollCall>,
    rc_index: HashMap<String, usize>,
    casts: HashMap<(usize, usize), (Cast, u64)>,
}

impl MatrixBuilder {
    fn legislator(&mut self, leg: Legislator) -> usize {
        if let Some(&i) = self.leg_index.get(&leg.id) {
            return i;
        }
        let i = self.legislators.len();
        self.leg_index.insert(leg.id.clone(), i);
        self.legislators.push(leg);
        i
    }

    fn rollcall(&mut self, rc: RollCall, line: u64) -> Result<usize> {
        if let Some(&j) = self.rc_index.get(&rc.id) {
            let existing = &self.rollcalls[j];
            if !rc.date.is_empty() && existing.date != rc.date {
                return Err(Error::row(
                    line,
                    format!(
                        "rollcall `{}` dated {} here but {} earlier",
                        rc.id, rc.date, existing.date
                    ),
                ));
            }
            return Ok(j);
        }
        let j = self.rollcalls.len();
        self.rc_index.insert(rc.id.clone(), j);
        self.rollcalls.push(rc);
        Ok(j)
    }

    fn cast(&mut self, leg: usize, rc: usize, cast: Cast, line: u64) -> Result<()> {
        if let Some(&(_, first)) = self.casts.get(&(leg, rc)) {
            return Err(Error::DuplicateCast {
                legislator: self.legislators[leg].id.clone(),
                rollcall: self.rollcalls[rc].id.clone(),
                first_line: first,
                second_line: line,
            });
        }
        self.casts.insert((leg, rc), (cast, line));
        Ok(())
    }

    fn build(self) -> Result<VoteMatrix> {
        let n_rc = self.rollcalls.len();
        let mut grid = vec![Cast::Absent; self.legislators.len() * n_rc];
        for ((i, j), (c, _)) in self.casts {
            grid[i * n_rc + j] = c;
        }
        VoteMatrix::from_parts(self.legislators, self.rollcalls, grid)
    }
}

/// Reads the canonical long format:
/// `legislator_id, legislator_name, party, rollcall_id, date, cast`.
pub fn read_canonical<R: Read>(r: R, source: &str) -> Result<VoteMatrix> {
    let mut rdr = reader(r);
    let cols = Columns::new(rdr.headers()?, source);
    let c_id = cols.require("legislator_id")?;
    let c_name = cols.require("legislator_name")?;
    let c_party = cols.require("party")?;
    let c_rc = cols.require("rollcall_id")?;
    let c_date = cols.require("date")?;
    let c_cast = cols.require("cast")?;

    let mut b = MatrixBuilder::default();
    for rec in rdr.records() {
        let rec = rec?;
        let line = line_of(&rec);
        let token = &rec[c_cast];
        let cast = Cast::parse(token)
            .ok_or_else(|| Error::row(line, format!("unknown cast `{token}`")))?;
        if rec[c_id].is_empty() || rec[c_rc].is_empty() {
            return Err(Error::row(line, "empty legislator or rollcall id"));
        }
        let leg = b.legislator(Legislator {
            id: rec[c_id].to_string(),
            name: rec[c_name].to_string(),
            party: non_empty(&rec[c_party]),
            group: None,
        });
        let rc = b.rollcall(RollCall::new(&rec[c_rc], &rec[c_date]), line)?;
        b.cast(leg, rc, cast, line)?;
    }
    b.build()
}

pub fn read_canonical_file(path: &Path) -> Result<VoteMatrix> {
    read_canonical(open(path)?, &path.display().to_string())
}

/// Maps a Voteview `cast_code`: 1-3 yea, 4-6 nay, 7-8 present (abstain),
/// 0 and 9 absent.
pub fn voteview_cast(code: u8) -> Option<Cast> {
    match code {
        1..=3 => Some(Cast::Yea),
        4..=6 => Some(Cast::Nay),
        7 | 8 => Some(Cast::Abstain),
        0 | 9 => Some(Cast::Absent),
        _ => None,
    }
}

fn voteview_rollcall_id(congress: &str, chamber: &str, rollnumber: &str) -> String {
    format!("{congress}-{chamber}-{rollnumber}")
}

/// Reads a Voteview votes export (`congress, chamber, rollnumber, icpsr,
/// cast_code`) and joins member names/parties (`icpsr, bioname,
/// party_code`) and rollcall dates (`congress, chamber, rollnumber, date`)
/// when those tables are given.
pub fn read_voteview<R: Read, M: Read, C: Read>(
    votes: R,
    members: Option<M>,
    rollcalls: Option<C>,
) -> Result<VoteMatrix> {
    let mut member_info: HashMap<String, (String, Option<String>)> = HashMap::new();
    if let Some(m) = members {
        let mut rdr = reader(m);
        let cols = Columns::new(rdr.headers()?, "voteview members");
        let c_icpsr = cols.require("icpsr")?;
        let c_name = cols.optional("bioname");
        let c_party = cols.optional("party_code");
        for rec in rdr.records() {
            let rec = rec?;
            member_info
                .entry(rec[c_icpsr].to_string())
                .or_insert_with(|| {
                    (
                        c_name.map_or_else(|| rec[c_icpsr].to_string(), |c| rec[c].to_string()),
                        c_party.and_then(|c| non_empty(&rec[c])),
                    )
                });
        }
    }

    let mut dates: HashMap<String, String> = HashMap::new();
    if let Some(c) = rollcalls {
        let mut rdr = reader(c);
        let cols = Columns::new(rdr.headers()?, "voteview rollcalls");
        let (c_cong, c_ch, c_roll, c_date) = (
            cols.require("congress")?,
            cols.require("chamber")?,
            cols.require("rollnumber")?,
            cols.require("date")?,
        );
        for rec in rdr.records() {
            let rec = rec?;
            dates.insert(
                voteview_rollcall_id(&rec[c_cong], &rec[c_ch], &rec[c_roll]),
                rec[c_date].to_string(),
            );
        }
    }

    let mut rdr = reader(votes);
    let cols = Columns::new(rdr.headers()?, "voteview votes");
    let (c_cong, c_ch, c_roll, c_icpsr, c_code) = (
        cols.require("congress")?,
        cols.require("chamber")?,
        cols.require("rollnumber")?,
        cols.require("icpsr")?,
        cols.require("cast_code")?,
    );
    let mut b = MatrixBuilder::default();
    for rec in rdr.records() {
        let rec = rec?;
        let line = line_of(&rec);
        let raw = &rec[c_code];
        let cast = raw
            .parse::<u8>()
            .ok()
            .and_then(voteview_cast)
            .ok_or_else(|| Error::row(line, format!("unknown cast_code `{raw}`")))?;
        let icpsr = rec[c_icpsr].to_string();
        let (name, party) = member_info
            .get(&icpsr)
            .cloned()
            .unwrap_or_else(|| (icpsr.clone(), None));
        let leg = b.legislator(Legislator {
            id: icpsr,
            name,
            party,
            group: None,
        });
        let id = voteview_rollcall_id(&rec[c_cong], &rec[c_ch], &rec[c_roll]);
        let date = dates.get(&id).cloned().unwrap_or_default();
        let rc = b.rollcall(RollCall::new(id, date), line)?;
        b.cast(leg, rc, cast, line)?;
    }
    b.build()
}

pub fn read_voteview_files(
    votes: &Path,
    members: Option<&Path>,
    rollcalls: Option<&Path>,
) -> Result<VoteMatrix> {
    read_voteview(
        open(votes)?,
        members.map(open).transpose()?,
        rollcalls.map(open).transpose()?,
    )
}

/// Writes the matrix in canonical long format, skipping absent entries.
pub fn write_canonical<W: Write>(w: W, m: &VoteMatrix) -> Result<()> {
    let mut wtr = WriterBuilder::new().from_writer(w);
    wtr.write_record([
        "legislator_id",
        "legislator_name",
        "party",
        "rollcall_id",
        "date",
        "cast",
    ])?;
    for (i, leg) in m.legislators().iter().enumerate() {
        for (rc, c) in m.rollcalls().iter().zip(m.row(i)) {
            if c.is_present() {
                wtr.write_record([
                    leg.id.as_str(),
                    &leg.name,
                    leg.party.as_deref().unwrap_or(""),
                    &rc.id,
                    &rc.date,
                    c.as_str(),
                ])?;
            }
        }
    }
    wtr.flush().map_err(|e| Error::io("<csv writer>", e))?;
    Ok(())
}

/// Fixed six-decimal rendering used by every numeric output column.
pub fn fmt_real(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".to_string()
    } else {
        s
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_real).unwrap_or_default()
}

/// `legislator_id, legislator_name, party, period, n_votes, d1, d2, group`.
pub fn write_scores<W: Write>(
    w: W,
    scores: &[BCallScore],
    legislators: &[Legislator],
) -> Result<()> {
    let by_id: HashMap<&str, &Legislator> =
        legislators.iter().map(|l| (l.id.as_str(), l)).collect();
    let mut wtr = WriterBuilder::new().from_writer(w);
    wtr.write_record([
        "legislator_id",
        "legislator_name",
        "party",
        "period",
        "n_votes",
        "d1",
        "d2",
        "group",
    ])?;
    for s in scores {
        let leg = by_id.get(s.legislator_id.as_str());
        wtr.write_record([
            s.legislator_id.as_str(),
            leg.map_or("", |l| l.name.as_str()),
            leg.and_then(|l| l.party.as_deref()).unwrap_or(""),
            s.period.as_str(),
            &s.n_votes.to_string(),
            &fmt_real(s.d1),
            &fmt_real(s.d2),
            s.group.map_or("", Side::as_str),
        ])?;
    }
    wtr.flush().map_err(|e| Error::io("<csv writer>", e))?;
    Ok(())
}

/// `legislator_id, d1, d2, group, period`: scatter-plot input.
pub fn write_plot<W: Write>(w: W, scores: &[BCallScore]) -> Result<()> {
    let mut wtr = WriterBuilder::new().from_writer(w);
    wtr.write_record(["legislator_id", "d1", "d2", "group", "period"])?;
    for s in scores {
        wtr.write_record([
            s.legislator_id.as_str(),
            &fmt_real(s.d1),
            &fmt_real(s.d2),
            s.group.map_or("", Side::as_str),
            s.period.as_str(),
        ])?;
    }
    wtr.flush().map_err(|e| Error::io("<csv writer>", e))?;
    Ok(())
}

/// One labelled legislator; `period` is empty for run-wide labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterLabel {
    pub legislator_id: String,
    pub side: Side,
    pub period: Option<String>,
}

/// `legislator_id, cluster, period` with `cluster` in `{left, right}`.
pub fn write_clusters<W: Write>(w: W, labels: &[ClusterLabel]) -> Result<()> {
    let mut wtr = WriterBuilder::new().from_writer(w);
    wtr.write_record(["legislator_id", "cluster", "period"])?;
    for l in labels {
        wtr.write_record([
            l.legislator_id.as_str(),
            l.side.as_str(),
            l.period.as_deref().unwrap_or(""),
        ])?;
    }
    wtr.flush().map_err(|e| Error::io("<csv writer>", e))?;
    Ok(())
}

/// Externally supplied LEFT/RIGHT labels. Rows without a period apply to
/// every period; rows with one override them for that period.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LabelSet {
    pub global: Groups,
    pub by_period: HashMap<String, Groups>,
}

impl LabelSet {
    pub fn for_period(&self, period: &str) -> Groups {
        let mut g = self.global.clone();
        if let Some(p) = self.by_period.get(period) {
            for (id, side) in p.iter() {
                g.insert(id, side);
            }
        }
        g
    }
}

/// Reads `legislator_id, cluster[, period]`.
pub fn read_labels<R: Read>(r: R, source: &str) -> Result<LabelSet> {
    let mut rdr = reader(r);
    let cols = Columns::new(rdr.headers()?, source);
    let c_id = cols.require("legislator_id")?;
    let c_cluster = cols.require("cluster")?;
    let c_period = cols.optional("period");
    let mut out = LabelSet::default();
    for rec in rdr.records() {
        let rec = rec?;
        let line = line_of(&rec);
        let side = Side::parse(&rec[c_cluster])
            .ok_or_else(|| Error::row(line, format!("unknown cluster `{}`", &rec[c_cluster])))?;
        match c_period.map(|c| &rec[c]).filter(|p| !p.is_empty()) {
            Some(p) => out
                .by_period
                .entry(p.to_string())
                .or_default()
                .insert(&rec[c_id], side),
            None => out.global.insert(&rec[c_id], side),
        }
    }
    Ok(out)
}

/// Reads `party, cluster`, assigning every member of a party to a pole.
pub fn read_party_map<R: Read>(r: R, source: &str) -> Result<HashMap<String, Side>> {
    let mut rdr = reader(r);
    let cols = Columns::new(rdr.headers()?, source);
    let c_party = cols.require("party")?;
    let c_cluster = cols.require("cluster")?;
    let mut out = HashMap::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = line_of(&rec);
        let side = Side::parse(&rec[c_cluster])
            .ok_or_else(|| Error::row(line, format!("unknown cluster `{}`", &rec[c_cluster])))?;
        out.insert(rec[c_party].to_string(), side);
    }
    Ok(out)
}

pub fn read_labels_file(path: &Path) -> Result<LabelSet> {
    read_labels(open(path)?, &path.display().to_string())
}

pub fn read_party_map_file(path: &Path) -> Result<HashMap<String, Side>> {
    read_party_map(open(path)?, &path.display().to_string())
}

/// `group, period, n_rollcalls, rice, unity`; undefined indices are empty.
pub fn write_indices<W: Write>(w: W, indices: &[GroupIndexSeries]) -> Result<()> {
    let mut wtr = WriterBuilder::new().from_writer(w);
    wtr.write_record(["group", "period", "n_rollcalls", "rice", "unity"])?;
    for ix in indices {
        wtr.write_record([
            ix.group.as_str(),
            ix.period.as_str(),
            &ix.n_rollcalls.to_string(),
            &fmt_opt(ix.rice),
            &fmt_opt(ix.unity),
        ])?;
    }
    wtr.flush().map_err(|e| Error::io("<csv writer>", e))?;
    Ok(())
}

/// `legislator_id, theta, sigma`.
pub fn write_ground_truth<W: Write>(w: W, truth: &[GroundTruth]) -> Result<()> {
    let mut wtr = WriterBuilder::new().from_writer(w);
    wtr.write_record(["legislator_id", "theta", "sigma"])?;
    for t in truth {
        wtr.write_record([
            t.legislator_id.as_str(),
            &fmt_real(t.theta),
            &fmt_real(t.sigma),
        ])?;
    }
    wtr.flush().map_err(|e| Error::io("<csv writer>", e))?;
    Ok(())
}

/// One value per legislator and period from a score file.
#[derive(Clone, Debug, PartialEq)]
pub struct ScoreRecord {
    pub legislator_id: String,
    pub period: String,
    pub score: f64,
}

/// Reads `legislator_id, period, <column>`. With `column = None` the
/// `score` column is used if present, otherwise `d1`. A missing `period`
/// column reads as an empty period. Blank values are skipped.
pub fn read_scores<R: Read>(r: R, source: &str, column: Option<&str>) -> Result<Vec<ScoreRecord>> {
    let mut rdr = reader(r);
    let cols = Columns::new(rdr.headers()?, source);
    let c_id = cols.require("legislator_id")?;
    let c_period = cols.optional("period");
    let c_val = match column {
        Some(name) => cols.require(&name.to_ascii_lowercase())?,
        None => cols
            .optional("score")
            .or_else(|| cols.optional("d1"))
            .ok_or_else(|| Error::MissingColumn {
                column: "score".into(),
                source_name: source.to_string(),
            })?,
    };
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let raw = &rec[c_val];
        if raw.is_empty() {
            continue;
        }
        let score = raw
            .parse::<f64>()
            .map_err(|_| Error::row(line_of(&rec), format!("bad score `{raw}`")))?;
        out.push(ScoreRecord {
            legislator_id: rec[c_id].to_string(),
            period: c_period.map(|c| rec[c].to_string()).unwrap_or_default(),
            score,
        });
    }
    Ok(out)
}

pub fn read_scores_file(path: &Path, column: Option<&str>) -> Result<Vec<ScoreRecord>> {
    read_scores(open(path)?, &path.display().to_string(), column)
}

/// One row of a correlation report; missing coefficients print empty.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct CorrelationRow {
    pub metric: String,
    pub r: Option<f64>,
    pub se: Option<f64>,
    pub rho: Option<f64>,
    pub rho_se: Option<f64>,
    pub n: usize,
}

impl CorrelationRow {
    pub fn new(metric: impl Into<String>, report: &crate::correlation::CorrelationReport) -> Self {
        CorrelationRow {
            metric: metric.into(),
            r: report.pearson.map(|c| c.r),
            se: report.pearson.map(|c| c.se),
            rho: report.spearman.map(|c| c.r),
            rho_se: report.spearman.map(|c| c.se),
            n: report.n,
        }
    }
}

/// `metric, r, se, rho, rho_se, n`.
pub fn write_correlations<W: Write>(w: W, rows: &[CorrelationRow]) -> Result<()> {
    let mut wtr = WriterBuilder::new().from_writer(w);
    wtr.write_record(["metric", "r", "se", "rho", "rho_se", "n"])?;
    for row in rows {
        wtr.write_record([
            row.metric.as_str(),
            &fmt_opt(row.r),
            &fmt_opt(row.se),
            &fmt_opt(row.rho),
            &fmt_opt(row.rho_se),
            &row.n.to_string(),
        ])?;
    }
    wtr.flush().map_err(|e| Error::io("<csv writer>", e))?;
    Ok(())
}

/// Writes `path` through a sibling temporary file renamed into place.
pub fn write_atomic<F>(path: &Path, body: F) -> Result<()>
where
    F: FnOnce(&mut BufWriter<File>) -> Result<()>,
{
    let tmp = path.with_extension(format!(
        "{}.tmp",
        path.extension().and_then(|e| e.to_str()).unwrap_or("")
    ));
    {
        let file = File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
        let mut w = BufWriter::new(file);
        body(&mut w)?;
        w.flush().map_err(|e| Error::io(&tmp, e))?;
    }
    std::fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}
