//! Correlates two score sets with Pearson and Spearman, joined by
//! legislator and period.

use bcall::io::ScoreRecord;
use bcall::pipeline::{compare_scores, JoinKey};

fn records(values: &[(&str, &str, f64)]) -> Vec<ScoreRecord> {
    values
        .iter()
        .map(|&(id, period, score)| ScoreRecord {
            legislator_id: id.into(),
            period: period.into(),
            score,
        })
        .collect()
}

fn main() -> bcall::Result<()> {
    let ours = records(&[
        ("a", "2021", -1.2),
        ("b", "2021", -0.4),
        ("c", "2021", 0.3),
        ("d", "2021", 0.9),
        ("e", "2021", 1.1),
        ("a", "2022", -1.0),
        ("b", "2022", -0.7),
        ("c", "2022", 0.2),
        ("d", "2022", 1.3),
    ]);
    // a nonlinear but monotone external scale, with one disagreement in 2022
    let theirs = records(&[
        ("a", "2021", -0.9),
        ("b", "2021", -0.5),
        ("c", "2021", 0.1),
        ("d", "2021", 0.6),
        ("e", "2021", 0.95),
        ("a", "2022", -0.6),
        ("b", "2022", -0.8),
        ("c", "2022", 0.4),
        ("d", "2022", 0.7),
    ]);

    for key in [JoinKey::LegislatorPeriod, JoinKey::Legislator] {
        println!("{key:?}");
        for c in compare_scores(&ours, &theirs, key)? {
            let row = c.row();
            println!(
                "  {:<5} n={} r={:.3} (se {:.3}) rho={:.3} (se {:.3})",
                row.metric,
                row.n,
                row.r.unwrap_or(f64::NAN),
                row.se.unwrap_or(f64::NAN),
                row.rho.unwrap_or(f64::NAN),
                row.rho_se.unwrap_or(f64::NAN)
            );
        }
    }
    Ok(())
}
