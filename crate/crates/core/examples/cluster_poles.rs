//! Two-pole clustering on a small chamber: seeds, growth, refinement and
//! labelling by anchor.

use bcall::cluster::{agglomerate, orient_labels, pairwise_distance, refine};
use bcall::{Side, VoteMatrix};

fn main() -> bcall::Result<()> {
    let m = VoteMatrix::from_values(
        &["Ana", "Ben", "Cruz", "Dara", "Eli", "Fay"],
        &[
            vec![1, 1, 1, -1, 1, 0],
            vec![1, 1, -1, -1, 1, 1],
            vec![1, 0, 1, -1, 1, 1],
            vec![-1, -1, -1, 1, -1, -1],
            vec![-1, -1, 1, 1, -1, 0],
            vec![-1, 1, -1, 1, -1, -1],
        ],
        "2023-02-01",
    )?;

    let d = pairwise_distance(&m);
    let (a, b) = d.farthest_pair().unwrap();
    println!(
        "seeds: {} and {} (distance {:.3})",
        d.ids()[a],
        d.ids()[b],
        d.get(a, b)
    );

    let grown = agglomerate(&m, &d)?;
    let refined = refine(&grown, &m, 100);
    println!(
        "refinement: {} sweep(s), {} move(s), converged = {}",
        refined.iterations, refined.moves, refined.converged
    );

    let labelled = orient_labels(&refined, Some("Dara"))?;
    for side in [Side::Left, Side::Right] {
        let names: Vec<&str> = labelled
            .members(side)
            .into_iter()
            .map(|i| m.legislators()[i].id.as_str())
            .collect();
        println!("{:>5}: {}", side.as_str(), names.join(", "));
    }
    Ok(())
}
