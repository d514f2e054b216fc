use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use bcall::io;
use bcall::pipeline::{self, ConfigFile, JoinKey, Outputs};
use bcall::synth::{self, SynthConfig};
use bcall::{Error, Result};

/// Roll-call scoring: ideological position and voting cohesion per legislator.
#[derive(Parser)]
#[command(name = "bcall", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load votes and write them back in canonical long format.
    Ingest(RunArgs),
    /// Divide legislators into LEFT/RIGHT poles per period.
    Cluster(RunArgs),
    /// Full run: scores, clusters, indices, plot data and manifest.
    Score(RunArgs),
    /// RICE/UNITY per group and period, and their correlation with mean d2.
    Indices(RunArgs),
    /// Correlate two score files per period (Pearson and Spearman).
    Compare(CompareArgs),
    /// Generate a synthetic legislature with planted ideology and noise.
    Synth(SynthArgs),
}

#[derive(Args, Default)]
struct RunArgs {
    /// TOML file with the same keys as the flags; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    input: Vec<PathBuf>,
    /// canonical | voteview
    #[arg(long)]
    adapter: Option<String>,
    /// Voteview members table (voteview adapter).
    #[arg(long)]
    members: Option<PathBuf>,
    /// Voteview rollcalls table with dates (voteview adapter).
    #[arg(long)]
    rollcalls: Option<PathBuf>,
    /// year | ranges=LABEL:START..END,...
    #[arg(long)]
    period: Option<String>,
    /// Minimum share of rollcalls a legislator must vote on [default: 0.10].
    #[arg(long)]
    min_participation: Option<f64>,
    /// cluster | file=<labels.csv> | party-map=<map.csv>
    #[arg(long)]
    groups: Option<String>,
    /// Legislator whose pole is labelled LEFT.
    #[arg(long)]
    anchor_left: Option<String>,
    /// Refinement sweep cap [default: 100].
    #[arg(long)]
    max_refine_iters: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// chamber-closeness | uniform
    #[arg(long)]
    unity_weighting: Option<String>,
    /// party | bloc
    #[arg(long)]
    index_groups: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn into_config(self) -> Result<pipeline::RunConfig> {
        let base = match &self.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        let flags = ConfigFile {
            input: (!self.input.is_empty()).then_some(self.input),
            adapter: self.adapter,
            members: self.members,
            rollcalls: self.rollcalls,
            period: self.period,
            min_participation: self.min_participation,
            groups: self.groups,
            anchor_left: self.anchor_left,
            max_refine_iters: self.max_refine_iters,
            seed: self.seed,
            out: self.out,
            unity_weighting: self.unity_weighting,
            index_groups: self.index_groups,
        };
        flags.or(base).into_run_config()
    }
}

#[derive(Args)]
struct CompareArgs {
    /// First score file (ours or external `legislator_id, period, score`).
    scores_a: PathBuf,
    scores_b: PathBuf,
    /// legislator-period | legislator
    #[arg(long, default_value = "legislator-period")]
    join: String,
    /// Column to read from the first file [default: score, else d1].
    #[arg(long)]
    column_a: Option<String>,
    #[arg(long)]
    column_b: Option<String>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, default_value_t = 200)]
    legislators: usize,
    #[arg(long, default_value_t = 500)]
    rollcalls: usize,
    /// Ideology range LO:HI for uniform draws.
    #[arg(long, default_value = "-1:1", allow_hyphen_values = true)]
    theta: String,
    /// Noise range LO:HI for uniform draws.
    #[arg(long, default_value = "0.1:0.6")]
    sigma: String,
    #[arg(long, default_value_t = 0.0)]
    abstain: f64,
    #[arg(long, default_value_t = 0.0)]
    absent: f64,
    #[arg(long, default_value = "2020-01-01")]
    date: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

fn parse_range(s: &str) -> Result<(f64, f64)> {
    let bad = || Error::Config(format!("bad range `{s}` (expected LO:HI)"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    Ok((
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    ))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Ingest(args) => {
            let cfg = args.into_config()?;
            let m = pipeline::ingest(&cfg.inputs, &cfg.adapter)?;
            std::fs::create_dir_all(&cfg.out).map_err(|e| Error::Config(e.to_string()))?;
            io::write_atomic(&cfg.out.join("votes.csv"), |w| io::write_canonical(w, &m))?;
            println!(
                "{} legislators, {} rollcalls, {} casts",
                m.n_legislators(),
                m.n_rollcalls(),
                m.n_present()
            );
        }
        Command::Cluster(args) => {
            let cfg = args.into_config()?;
            let a = pipeline::analyze(&cfg)?;
            pipeline::write_outputs(&a, &cfg.out, Outputs::Clusters)?;
        }
        Command::Score(args) => {
            let cfg = args.into_config()?;
            let a = pipeline::run_pipeline(&cfg)?;
            for w in a.periods.iter().flat_map(|p| &p.summary.warnings) {
                eprintln!("warning: {w}");
            }
        }
        Command::Indices(args) => {
            let cfg = args.into_config()?;
            let a = pipeline::analyze(&cfg)?;
            pipeline::write_outputs(&a, &cfg.out, Outputs::Indices)?;
        }
        Command::Compare(args) => {
            let key: JoinKey = args.join.parse()?;
            let result = pipeline::compare(
                &args.scores_a,
                &args.scores_b,
                key,
                args.column_a.as_deref(),
                args.column_b.as_deref(),
                &args.out,
            )?;
            for c in &result {
                let row = c.row();
                let show = |v: Option<f64>| v.map_or("missing".to_string(), |v| format!("{v:.3}"));
                println!(
                    "{}\tr={} se={}\trho={} se={}\tn={}",
                    row.metric,
                    show(row.r),
                    show(row.se),
                    show(row.rho),
                    show(row.rho_se),
                    row.n
                );
            }
        }
        Command::Synth(args) => {
            let mut cfg = SynthConfig::random_population(
                args.legislators,
                args.rollcalls,
                parse_range(&args.theta)?,
                parse_range(&args.sigma)?,
                args.seed,
            );
            cfg.abstain_prob = args.abstain;
            cfg.absent_prob = args.absent;
            cfg.date = args.date;
            let s = synth::generate(&cfg)?;
            std::fs::create_dir_all(&args.out).map_err(|e| Error::Config(e.to_string()))?;
            io::write_atomic(&args.out.join("votes.csv"), |w| {
                io::write_canonical(w, &s.matrix)
            })?;
            io::write_atomic(&args.out.join("truth.csv"), |w| {
                io::write_ground_truth(w, &s.truth)
            })?;
            let meta = serde_json::json!({ "rng": synth::RNG_ALGORITHM, "config": cfg });
            io::write_atomic(&args.out.join("synth.json"), |w| {
                serde_json::to_writer_pretty(&mut *w, &meta)?;
                Ok(())
            })?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
