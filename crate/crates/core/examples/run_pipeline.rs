//! End-to-end run over three synthetic years: writes the canonical input,
//! runs the pipeline and lists the output directory.
//!
//!     cargo run --example run_pipeline -- /tmp/bcall-demo

use std::path::PathBuf;

use bcall::synth::{generate, SynthConfig};
use bcall::{io, run_pipeline, RunConfig, VoteMatrix};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("bcall-demo"));
    std::fs::create_dir_all(&dir)?;

    let mut years = Vec::new();
    for (k, year) in (2018..2021).enumerate() {
        let mut cfg = SynthConfig::two_blocs(20, 0.6, 0.35, 120, k as u64);
        cfg.date = format!("{year}-04-01");
        cfg.rollcall_prefix = format!("{year}-");
        cfg.absent_prob = 0.08;
        years.push(generate(&cfg)?.matrix);
    }
    let input = dir.join("votes.csv");
    io::write_atomic(&input, |w| {
        io::write_canonical(w, &VoteMatrix::concat(&years)?)
    })?;

    let mut cfg = RunConfig::new(&input, dir.join("out"));
    cfg.anchor_left = Some("L001".into());
    let analysis = run_pipeline(&cfg)?;

    for p in &analysis.periods {
        let s = &p.summary;
        println!(
            "{}: {} rollcalls ({} dropped), {} legislators scored",
            s.period, s.rollcalls, s.dropped_rollcalls, s.legislators_scored
        );
    }
    if let Some(c) = &analysis.cohesion {
        println!(
            "r(mean d2, RICE) over {} cells: {:?}",
            c.n_cells,
            c.rice.pearson_r()
        );
    }
    for w in &analysis.warnings {
        println!("warning: {w}");
    }
    println!("outputs in {}", cfg.out.display());
    Ok(())
}
