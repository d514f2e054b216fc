//! Generates a legislature with known ideology and noise, scores it and
//! reports how well d1 and d2 recover the planted values.
//!
//!     cargo run --release --example score_synthetic_legislature

use bcall::correlation::spearman;
use bcall::synth::{generate, SynthConfig};
use bcall::{bcall_scores, bipartition, PeriodKey};

fn main() -> bcall::Result<()> {
    let cfg = SynthConfig::random_population(200, 500, (-1.0, 1.0), (0.1, 0.6), 42);
    let s = generate(&cfg)?;
    let thetas = s.thetas();

    let leftmost = (0..thetas.len())
        .min_by(|&a, &b| thetas[a].total_cmp(&thetas[b]))
        .unwrap();
    let poles = bipartition(&s.matrix, 100, Some(&s.truth[leftmost].legislator_id))?;
    let run = bcall_scores(&s.matrix, &poles.groups(), &PeriodKey::new("synthetic"))?;

    let d1: Vec<f64> = run.scores.iter().map(|x| x.d1).collect();
    let d2: Vec<f64> = run.scores.iter().map(|x| x.d2).collect();
    println!("rollcalls dropped: {}", run.n_dropped);
    println!("rho(d1, theta) = {:.3}", spearman(&d1, &thetas)?.unwrap().r);
    println!(
        "rho(d2, sigma) = {:.3}",
        spearman(&d2, &s.sigmas())?.unwrap().r
    );

    println!(
        "\n{:>6} {:>7} {:>6} {:>7} {:>6}",
        "id", "theta", "sigma", "d1", "d2"
    );
    for (sc, t) in run.scores.iter().zip(&s.truth).step_by(25) {
        println!(
            "{:>6} {:>7.3} {:>6.3} {:>7.3} {:>6.3}",
            sc.legislator_id, t.theta, t.sigma, sc.d1, sc.d2
        );
    }
    Ok(())
}
