//! End-to-end workflow: ingest, slice into periods, filter, group, score,
//! compute cohesion indices and write the run directory.
//!
//! A run directory holds `scores.csv`, `clusters.csv`, `indices.csv`,
//! `plot.csv` and `manifest.json`. Outputs contain no timestamps, so the
//! same inputs and configuration always produce byte-identical files.

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cluster::{bipartition, LabelRule};
use crate::cohesion::{
    cohesion_comparison, group_indices, mean_d2_cells, CohesionComparison, GroupIndexSeries,
    UnityWeighting,
};
use crate::correlation::CorrelationReport;
use crate::engine::{bcall_scores, BCallScore, Groups};
use crate::error::{Error, Result};
use crate::io::{self, ClusterLabel, CorrelationRow, LabelSet};
use crate::model::{filter_low_participation, Legislator, Side, VoteMatrix};
use crate::period::{slice_by_period, PeriodKey, PeriodPolicy};

pub const DEFAULT_MIN_PARTICIPATION: f64 = 0.10;
pub const DEFAULT_MAX_REFINE_ITERS: usize = 100;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Adapter {
    Canonical,
    Voteview {
        members: Option<PathBuf>,
        rollcalls: Option<PathBuf>,
    },
}

/// Where LEFT/RIGHT comes from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "path", rename_all = "kebab-case")]
pub enum GroupSource {
    /// Agglomerative clustering with refinement, per period.
    Cluster,
    /// `legislator_id, cluster[, period]` file.
    Labels(PathBuf),
    /// `party, cluster` file.
    PartyMap(PathBuf),
}

impl std::str::FromStr for GroupSource {
    type Err = Error;

    /// `cluster`, `file=<path>` or `party-map=<path>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "cluster" {
            Ok(GroupSource::Cluster)
        } else if let Some(p) = s.strip_prefix("file=") {
            Ok(GroupSource::Labels(PathBuf::from(p)))
        } else if let Some(p) = s.strip_prefix("party-map=") {
            Ok(GroupSource::PartyMap(PathBuf::from(p)))
        } else {
            Err(Error::Config(format!(
                "unknown grouping `{s}` (expected cluster, file=<path> or party-map=<path>)"
            )))
        }
    }
}

/// Aggregation level for RICE/UNITY.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IndexGrouping {
    #[default]
    Party,
    /// The LEFT/RIGHT poles.
    Bloc,
}

impl std::str::FromStr for IndexGrouping {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "party" => Ok(IndexGrouping::Party),
            "bloc" => Ok(IndexGrouping::Bloc),
            other => Err(Error::Config(format!("unknown index grouping `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub inputs: Vec<PathBuf>,
    pub adapter: Adapter,
    pub period: PeriodPolicy,
    pub min_participation: f64,
    pub groups: GroupSource,
    pub anchor_left: Option<String>,
    pub max_refine_iters: usize,
    pub seed: u64,
    #[serde(skip)]
    pub out: PathBuf,
    pub unity_weighting: UnityWeighting,
    pub index_grouping: IndexGrouping,
}

impl RunConfig {
    pub fn new(input: impl Into<PathBuf>, out: impl Into<PathBuf>) -> Self {
        RunConfig {
            inputs: vec![input.into()],
            adapter: Adapter::Canonical,
            period: PeriodPolicy::CalendarYear,
            min_participation: DEFAULT_MIN_PARTICIPATION,
            groups: GroupSource::Cluster,
            anchor_left: None,
            max_refine_iters: DEFAULT_MAX_REFINE_ITERS,
            seed: 0,
            out: out.into(),
            unity_weighting: UnityWeighting::default(),
            index_grouping: IndexGrouping::default(),
        }
    }
}

/// Configuration as read from a TOML file or command-line flags. Every
/// field is optional; [`ConfigFile::or`] layers one source over another.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ConfigFile {
    pub input: Option<Vec<PathBuf>>,
    pub adapter: Option<String>,
    pub members: Option<PathBuf>,
    pub rollcalls: Option<PathBuf>,
    pub period: Option<String>,
    pub min_participation: Option<f64>,
    pub groups: Option<String>,
    pub anchor_left: Option<String>,
    pub max_refine_iters: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub unity_weighting: Option<String>,
    pub index_groups: Option<String>,
}

impl ConfigFile {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text)
    }

    /// Values from `self`, falling back to `base` where unset.
    pub fn or(self, base: ConfigFile) -> ConfigFile {
        ConfigFile {
            input: self.input.or(base.input),
            adapter: self.adapter.or(base.adapter),
            members: self.members.or(base.members),
            rollcalls: self.rollcalls.or(base.rollcalls),
            period: self.period.or(base.period),
            min_participation: self.min_participation.or(base.min_participation),
            groups: self.groups.or(base.groups),
            anchor_left: self.anchor_left.or(base.anchor_left),
            max_refine_iters: self.max_refine_iters.or(base.max_refine_iters),
            seed: self.seed.or(base.seed),
            out: self.out.or(base.out),
            unity_weighting: self.unity_weighting.or(base.unity_weighting),
            index_groups: self.index_groups.or(base.index_groups),
        }
    }

    pub fn into_run_config(self) -> Result<RunConfig> {
        let inputs = self
            .input
            .filter(|v| !v.is_empty())
            .ok_or_else(|| Error::Config("no input given".into()))?;
        let out = self
            .out
            .ok_or_else(|| Error::Config("no output directory given".into()))?;
        let adapter = match self.adapter.as_deref().unwrap_or("canonical") {
            "canonical" => Adapter::Canonical,
            "voteview" => Adapter::Voteview {
                members: self.members,
                rollcalls: self.rollcalls,
            },
            other => return Err(Error::Config(format!("unknown adapter `{other}`"))),
        };
        let min_participation = self.min_participation.unwrap_or(DEFAULT_MIN_PARTICIPATION);
        if !(0.0..=1.0).contains(&min_participation) {
            return Err(Error::Config(format!(
                "min-participation {min_participation} is outside [0, 1]"
            )));
        }
        Ok(RunConfig {
            inputs,
            adapter,
            period: self.period.as_deref().unwrap_or("year").parse()?,
            min_participation,
            groups: self.groups.as_deref().unwrap_or("cluster").parse()?,
            anchor_left: self.anchor_left,
            max_refine_iters: self.max_refine_iters.unwrap_or(DEFAULT_MAX_REFINE_ITERS),
            seed: self.seed.unwrap_or(0),
            out,
            unity_weighting: self
                .unity_weighting
                .as_deref()
                .map(str::parse)
                .transpose()?
                .unwrap_or_default(),
            index_grouping: self
                .index_groups
                .as_deref()
                .map(str::parse)
                .transpose()?
                .unwrap_or_default(),
        })
    }
}

/// Loads and concatenates the configured inputs.
pub fn ingest(inputs: &[PathBuf], adapter: &Adapter) -> Result<VoteMatrix> {
    let parts = inputs
        .iter()
        .map(|p| match adapter {
            Adapter::Canonical => io::read_canonical_file(p),
            Adapter::Voteview { members, rollcalls } => {
                io::read_voteview_files(p, members.as_deref(), rollcalls.as_deref())
            }
        })
        .collect::<Result<Vec<_>>>()?;
    match parts.len() {
        1 => Ok(parts.into_iter().next().expect("one part")),
        _ => VoteMatrix::concat(&parts),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RefinementSummary {
    pub iterations: usize,
    pub converged: bool,
    pub moves: usize,
    pub refused_moves: usize,
    pub label_rule: LabelRule,
}

/// Everything computed for one period.
#[derive(Clone, Debug)]
pub struct PeriodResult {
    pub period: PeriodKey,
    pub legislators: Vec<Legislator>,
    pub groups: Groups,
    pub scores: Vec<BCallScore>,
    pub indices: Vec<GroupIndexSeries>,
    pub refinement: Option<RefinementSummary>,
    pub summary: PeriodSummary,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct PeriodSummary {
    pub period: String,
    pub rollcalls: usize,
    pub retained_rollcalls: usize,
    pub dropped_rollcalls: usize,
    pub tied_rollcalls: usize,
    pub legislators_in_slice: usize,
    pub legislators_retained: usize,
    pub legislators_scored: usize,
    pub skipped: bool,
    pub refinement: Option<RefinementSummary>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct Analysis {
    pub config: RunConfig,
    pub periods: Vec<PeriodResult>,
    pub cohesion: Option<CohesionComparison>,
    pub warnings: Vec<String>,
}

impl Analysis {
    pub fn scores(&self) -> Vec<BCallScore> {
        self.periods
            .iter()
            .flat_map(|p| p.scores.iter().cloned())
            .collect()
    }

    pub fn indices(&self) -> Vec<GroupIndexSeries> {
        self.periods
            .iter()
            .flat_map(|p| p.indices.iter().cloned())
            .collect()
    }

    pub fn legislators(&self) -> Vec<Legislator> {
        let mut seen = std::collections::HashSet::new();
        self.periods
            .iter()
            .flat_map(|p| p.legislators.iter())
            .filter(|l| seen.insert(l.id.clone()))
            .cloned()
            .collect()
    }

    pub fn cluster_labels(&self) -> Vec<ClusterLabel> {
        self.periods
            .iter()
            .flat_map(|p| {
                p.legislators.iter().filter_map(|l| {
                    p.groups.get(&l.id).map(|side| ClusterLabel {
                        legislator_id: l.id.clone(),
                        side,
                        period: Some(p.period.to_string()),
                    })
                })
            })
            .collect()
    }
}

enum Resolver {
    Cluster,
    Labels(LabelSet),
    Party(HashMap<String, Side>),
}

impl Resolver {
    fn new(source: &GroupSource) -> Result<Self> {
        Ok(match source {
            GroupSource::Cluster => Resolver::Cluster,
            GroupSource::Labels(p) => Resolver::Labels(io::read_labels_file(p)?),
            GroupSource::PartyMap(p) => Resolver::Party(io::read_party_map_file(p)?),
        })
    }
}

fn analyze_period(
    cfg: &RunConfig,
    resolver: &Resolver,
    period: PeriodKey,
    slice: VoteMatrix,
) -> Result<PeriodResult> {
    let mut summary = PeriodSummary {
        period: period.to_string(),
        rollcalls: slice.n_rollcalls(),
        legislators_in_slice: slice.n_legislators(),
        ..Default::default()
    };
    let m = filter_low_participation(&slice, cfg.min_participation)?;
    summary.legislators_retained = m.n_legislators();

    let skip = |mut summary: PeriodSummary, why: String| {
        summary.skipped = true;
        summary.dropped_rollcalls = summary.rollcalls;
        summary.warnings.push(why);
        PeriodResult {
            period: period.clone(),
            legislators: m.legislators().to_vec(),
            groups: Groups::new(),
            scores: Vec::new(),
            indices: Vec::new(),
            refinement: None,
            summary,
        }
    };
    if m.n_rollcalls() == 0 {
        return Ok(skip(summary, "empty period skipped".into()));
    }
    if m.n_legislators() < 2 {
        return Ok(skip(
            summary,
            format!(
                "only {} legislator(s) after filtering; period skipped",
                m.n_legislators()
            ),
        ));
    }

    let mut refinement = None;
    let groups = match resolver {
        Resolver::Cluster => {
            let anchor = match cfg.anchor_left.as_deref() {
                Some(a) if m.legislator_index(a).is_none() => {
                    summary.warnings.push(format!(
                        "anchor `{a}` not present after filtering; first-seed labelling used"
                    ));
                    None
                }
                other => other,
            };
            let p = bipartition(&m, cfg.max_refine_iters, anchor)?;
            if !p.converged {
                summary.warnings.push(format!(
                    "refinement stopped after {} sweep(s) without converging",
                    p.iterations
                ));
            }
            refinement = Some(RefinementSummary {
                iterations: p.iterations,
                converged: p.converged,
                moves: p.moves,
                refused_moves: p.refused_moves,
                label_rule: p.label_rule.clone(),
            });
            p.groups()
        }
        Resolver::Labels(labels) => labels.for_period(period.as_str()),
        Resolver::Party(map) => m
            .legislators()
            .iter()
            .filter_map(|l| {
                l.party
                    .as_ref()
                    .and_then(|p| map.get(p))
                    .map(|s| (l.id.clone(), *s))
            })
            .collect(),
    };

    let run = bcall_scores(&m, &groups, &period)?;
    summary.dropped_rollcalls = run.n_dropped;
    summary.retained_rollcalls = m.n_rollcalls() - run.n_dropped;
    summary.tied_rollcalls = run.n_tied;
    summary.legislators_scored = run.scores.len();
    if run.scores.is_empty() {
        summary.warnings.push(format!(
            "all {} rollcall(s) dropped; no scores",
            run.n_dropped
        ));
    }

    let index_groups: Vec<Option<String>> = m
        .legislators()
        .iter()
        .map(|l| match cfg.index_grouping {
            IndexGrouping::Party => l.party.clone(),
            IndexGrouping::Bloc => groups.get(&l.id).map(|s| s.as_str().to_string()),
        })
        .collect();
    let indices = group_indices(&m, &index_groups, &period, cfg.unity_weighting)?;

    summary.refinement = refinement.clone();
    // keep only legislators present in this period's groups
    let legislators = m.legislators().to_vec();
    let groups: Groups = legislators
        .iter()
        .filter_map(|l| groups.get(&l.id).map(|s| (l.id.clone(), s)))
        .collect();
    Ok(PeriodResult {
        period,
        legislators,
        groups,
        scores: run.scores,
        indices,
        refinement,
        summary,
    })
}

/// Runs every stage in memory.
pub fn analyze(cfg: &RunConfig) -> Result<Analysis> {
    let matrix = ingest(&cfg.inputs, &cfg.adapter)?;
    analyze_matrix(cfg, &matrix)
}

/// Runs every stage on an already loaded matrix.
pub fn analyze_matrix(cfg: &RunConfig, matrix: &VoteMatrix) -> Result<Analysis> {
    if !(0.0..=1.0).contains(&cfg.min_participation) {
        return Err(Error::Config(format!(
            "min-participation {} is outside [0, 1]",
            cfg.min_participation
        )));
    }
    if let Some(a) = cfg.anchor_left.as_deref() {
        if matrix.legislator_index(a).is_none() {
            return Err(Error::UnknownLegislator(a.to_string()));
        }
    }
    let resolver = Resolver::new(&cfg.groups)?;
    let slices = slice_by_period(matrix, &cfg.period)?;
    let periods = slices
        .into_par_iter()
        .map(|(key, slice)| {
            let label = key.to_string();
            analyze_period(cfg, &resolver, key, slice).map_err(|e| e.in_period(&label))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut warnings = Vec::new();
    let cohesion = {
        let party: HashMap<String, Option<String>> = matrix
            .legislators()
            .iter()
            .map(|l| (l.id.clone(), l.party.clone()))
            .collect();
        let scores: Vec<BCallScore> = periods
            .iter()
            .flat_map(|p| p.scores.iter().cloned())
            .collect();
        let cells = mean_d2_cells(&scores, |s| match cfg.index_grouping {
            IndexGrouping::Party => party.get(&s.legislator_id).cloned().flatten(),
            IndexGrouping::Bloc => s.group.map(|g| g.as_str().to_string()),
        });
        let indices: Vec<GroupIndexSeries> = periods
            .iter()
            .flat_map(|p| p.indices.iter().cloned())
            .collect();
        match cohesion_comparison(&cells, &indices) {
            Ok(c) => Some(c),
            Err(Error::InsufficientCells { found }) => {
                warnings.push(format!(
                    "cohesion comparison skipped: {found} aggregation cell(s), at least 3 required"
                ));
                None
            }
            Err(e) => return Err(e),
        }
    };

    Ok(Analysis {
        config: cfg.clone(),
        periods,
        cohesion,
        warnings,
    })
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    config: &'a RunConfig,
    unity_weighting: &'static str,
    periods: Vec<&'a PeriodSummary>,
    cohesion: Option<CohesionRows>,
    warnings: &'a [String],
}

#[derive(Serialize)]
struct CohesionRows {
    n_cells: usize,
    rows: Vec<CorrelationRow>,
}

fn cohesion_rows(c: &CohesionComparison) -> Vec<CorrelationRow> {
    vec![
        CorrelationRow::new("mean_d2~rice", &c.rice),
        CorrelationRow::new("mean_d2~unity", &c.unity),
    ]
}

fn write_manifest(dir: &Path, a: &Analysis) -> Result<()> {
    let manifest = Manifest {
        tool: "bcall",
        version: env!("CARGO_PKG_VERSION"),
        config: &a.config,
        unity_weighting: a.config.unity_weighting.as_str(),
        periods: a.periods.iter().map(|p| &p.summary).collect(),
        cohesion: a.cohesion.as_ref().map(|c| CohesionRows {
            n_cells: c.n_cells,
            rows: cohesion_rows(c),
        }),
        warnings: &a.warnings,
    };
    io::write_atomic(&dir.join("manifest.json"), |w| {
        serde_json::to_writer_pretty(&mut *w, &manifest)?;
        std::io::Write::write_all(w, b"\n").map_err(|e| Error::io("manifest.json", e))
    })
}

/// Which files a command writes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outputs {
    /// scores, clusters, indices, plot and manifest.
    All,
    /// clusters and manifest.
    Clusters,
    /// indices, cohesion comparison and manifest.
    Indices,
}

pub fn write_outputs(a: &Analysis, dir: &Path, which: Outputs) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let scores = a.scores();
    if which == Outputs::All {
        let legislators = a.legislators();
        io::write_atomic(&dir.join("scores.csv"), |w| {
            io::write_scores(w, &scores, &legislators)
        })?;
        io::write_atomic(&dir.join("plot.csv"), |w| io::write_plot(w, &scores))?;
    }
    if matches!(which, Outputs::All | Outputs::Clusters) {
        io::write_atomic(&dir.join("clusters.csv"), |w| {
            io::write_clusters(w, &a.cluster_labels())
        })?;
    }
    if matches!(which, Outputs::All | Outputs::Indices) {
        io::write_atomic(&dir.join("indices.csv"), |w| {
            io::write_indices(w, &a.indices())
        })?;
    }
    if which == Outputs::Indices {
        let rows = a.cohesion.as_ref().map(cohesion_rows).unwrap_or_default();
        io::write_atomic(&dir.join("cohesion.csv"), |w| {
            io::write_correlations(w, &rows)
        })?;
    }
    write_manifest(dir, a)
}

/// Full run: analysis plus every output file in `cfg.out`.
pub fn run_pipeline(cfg: &RunConfig) -> Result<Analysis> {
    let a = analyze(cfg)?;
    write_outputs(&a, &cfg.out, Outputs::All)?;
    Ok(a)
}

/// How two score files are matched.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum JoinKey {
    /// Match on legislator and period; one report per period.
    #[default]
    LegislatorPeriod,
    /// Match on legislator only; one pooled report.
    Legislator,
}

impl std::str::FromStr for JoinKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "legislator-period" => Ok(JoinKey::LegislatorPeriod),
            "legislator" => Ok(JoinKey::Legislator),
            other => Err(Error::Config(format!("unknown join key `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PeriodComparison {
    pub period: String,
    pub n_joined: usize,
    /// `None` when fewer than three rows joined.
    pub report: Option<CorrelationReport>,
}

impl PeriodComparison {
    pub fn row(&self) -> CorrelationRow {
        match &self.report {
            Some(r) => CorrelationRow::new(&self.period, r),
            None => CorrelationRow {
                metric: self.period.clone(),
                r: None,
                se: None,
                rho: None,
                rho_se: None,
                n: self.n_joined,
            },
        }
    }
}

/// Inner-joins two score lists and correlates them per period, in order of
/// first appearance in `a`.
pub fn compare_scores(
    a: &[io::ScoreRecord],
    b: &[io::ScoreRecord],
    key: JoinKey,
) -> Result<Vec<PeriodComparison>> {
    let period_of = |r: &io::ScoreRecord| match key {
        JoinKey::LegislatorPeriod => r.period.clone(),
        JoinKey::Legislator => "all".to_string(),
    };
    let b_index: HashMap<(String, String), f64> = b
        .iter()
        .map(|r| ((r.legislator_id.clone(), period_of(r)), r.score))
        .collect();
    let mut order: Vec<String> = Vec::new();
    let mut pairs: BTreeMap<String, (Vec<f64>, Vec<f64>)> = BTreeMap::new();
    for r in a {
        let p = period_of(r);
        if !pairs.contains_key(&p) {
            order.push(p.clone());
        }
        let entry = pairs.entry(p.clone()).or_default();
        if let Some(&y) = b_index.get(&(r.legislator_id.clone(), p)) {
            entry.0.push(r.score);
            entry.1.push(y);
        }
    }
    order
        .into_iter()
        .map(|p| {
            let (x, y) = &pairs[&p];
            let report = if x.len() >= 3 {
                Some(CorrelationReport::compute(x, y)?)
            } else {
                None
            };
            Ok(PeriodComparison {
                period: p,
                n_joined: x.len(),
                report,
            })
        })
        .collect()
}

/// Reads two score files, compares them and writes `comparison.csv` and
/// `comparison.json` into `out`.
pub fn compare(
    scores_a: &Path,
    scores_b: &Path,
    key: JoinKey,
    column_a: Option<&str>,
    column_b: Option<&str>,
    out: &Path,
) -> Result<Vec<PeriodComparison>> {
    let a = io::read_scores_file(scores_a, column_a)?;
    let b = io::read_scores_file(scores_b, column_b)?;
    let result = compare_scores(&a, &b, key)?;
    std::fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let rows: Vec<CorrelationRow> = result.iter().map(PeriodComparison::row).collect();
    io::write_atomic(&out.join("comparison.csv"), |w| {
        io::write_correlations(w, &rows)
    })?;
    io::write_atomic(&out.join("comparison.json"), |w| {
        serde_json::to_writer_pretty(&mut *w, &rows)?;
        std::io::Write::write_all(w, b"\n").map_err(|e| Error::io("comparison.json", e))
    })?;
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(id: &str, period: &str, score: f64) -> io::ScoreRecord {
        io::ScoreRecord {
            legislator_id: id.into(),
            period: period.into(),
            score,
        }
    }

    #[test]
    fn config_layering() {
        let file = ConfigFile::from_toml(
            "input = [\"votes.csv\"]\nout = \"run\"\nmin-participation = 0.2\nperiod = \"year\"\n",
        )
        .unwrap();
        let flags = ConfigFile {
            min_participation: Some(0.3),
            ..Default::default()
        };
        let cfg = flags.or(file).into_run_config().unwrap();
        assert_eq!(cfg.min_participation, 0.3);
        assert_eq!(cfg.inputs, vec![PathBuf::from("votes.csv")]);
        assert_eq!(cfg.max_refine_iters, 100);
        assert_eq!(cfg.groups, GroupSource::Cluster);
    }

    #[test]
    fn bad_config_values_are_config_errors() {
        let base = ConfigFile {
            input: Some(vec!["a.csv".into()]),
            out: Some("o".into()),
            ..Default::default()
        };
        for bad in [
            ConfigFile {
                groups: Some("kmeans".into()),
                ..base.clone()
            },
            ConfigFile {
                period: Some("weekly".into()),
                ..base.clone()
            },
            ConfigFile {
                min_participation: Some(2.0),
                ..base.clone()
            },
            ConfigFile {
                adapter: Some("json".into()),
                ..base.clone()
            },
            ConfigFile {
                input: None,
                ..base.clone()
            },
        ] {
            assert!(bad.into_run_config().unwrap_err().is_config());
        }
        assert!(ConfigFile::from_toml("bogus = 1").unwrap_err().is_config());
    }

    #[test]
    fn group_source_parse() {
        assert_eq!(
            "cluster".parse::<GroupSource>().unwrap(),
            GroupSource::Cluster
        );
        assert_eq!(
            "file=labels.csv".parse::<GroupSource>().unwrap(),
            GroupSource::Labels("labels.csv".into())
        );
        assert_eq!(
            "party-map=p.csv".parse::<GroupSource>().unwrap(),
            GroupSource::PartyMap("p.csv".into())
        );
    }

    #[test]
    fn short_join_is_missing() {
        let a = [rec("A", "1", 1.0), rec("B", "1", 2.0), rec("C", "2", 1.0)];
        let b = [rec("A", "1", 1.0), rec("B", "1", 2.0)];
        let cmp = compare_scores(&a, &b, JoinKey::LegislatorPeriod).unwrap();
        assert_eq!(cmp.len(), 2);
        assert!(cmp.iter().all(|c| c.report.is_none()));
        assert_eq!(cmp[0].n_joined, 2);
        assert_eq!(cmp[1].n_joined, 0);
    }

    #[test]
    fn pooled_join() {
        let a = [rec("A", "1", 1.0), rec("B", "1", 2.0), rec("C", "1", 3.0)];
        let b = [rec("A", "x", 2.0), rec("B", "y", 4.0), rec("C", "z", 6.0)];
        let cmp = compare_scores(&a, &b, JoinKey::Legislator).unwrap();
        assert_eq!(cmp[0].period, "all");
        assert!((cmp[0].report.as_ref().unwrap().pearson_r().unwrap() - 1.0).abs() < 1e-12);
    }
}
