//! RICE and UNITY for two synthetic parties whose discipline differs, and
//! the correlation of those indices with mean d2 across periods.

use std::collections::HashMap;

use bcall::cohesion::{cohesion_comparison, group_indices, mean_d2_cells, UnityWeighting};
use bcall::synth::{generate, SynthConfig};
use bcall::{bcall_scores, Groups, PeriodKey, Side};

fn main() -> bcall::Result<()> {
    let mut cells = Vec::new();
    let mut indices = Vec::new();
    for year in 2015..2021 {
        let loose = 0.1 + 0.15 * (year - 2015) as f64;
        let n = 60;
        let ideology = (0..n).map(|i| if i < n / 2 { -0.6 } else { 0.6 }).collect();
        let noise = (0..n)
            .map(|i| if i < n / 2 { loose } else { 0.2 })
            .collect();
        let mut cfg = SynthConfig::new(ideology, noise, 250, year as u64);
        cfg.parties = (0..n)
            .map(|i| if i < n / 2 { "Blue" } else { "Gold" }.to_string())
            .collect();
        let s = generate(&cfg)?;

        let period = PeriodKey::new(year.to_string());
        let party: HashMap<String, String> = s
            .matrix
            .legislators()
            .iter()
            .map(|l| (l.id.clone(), l.party.clone().unwrap()))
            .collect();
        let groups: Groups = party
            .iter()
            .map(|(id, p)| {
                (
                    id.clone(),
                    if p == "Blue" { Side::Left } else { Side::Right },
                )
            })
            .collect();

        let run = bcall_scores(&s.matrix, &groups, &period)?;
        let labels: Vec<Option<String>> = s
            .matrix
            .legislators()
            .iter()
            .map(|l| l.party.clone())
            .collect();
        let idx = group_indices(
            &s.matrix,
            &labels,
            &period,
            UnityWeighting::ChamberCloseness,
        )?;
        for g in &idx {
            println!(
                "{year} {:<4} rice {:.3} unity {:.3}",
                g.group,
                g.rice.unwrap_or(f64::NAN),
                g.unity.unwrap_or(f64::NAN)
            );
        }
        indices.extend(idx);
        cells.extend(mean_d2_cells(&run.scores, |sc| {
            party.get(&sc.legislator_id).cloned()
        }));
    }

    let cmp = cohesion_comparison(&cells, &indices)?;
    println!("\n{} cells", cmp.n_cells);
    println!("r(mean d2, RICE)  = {:.3}", cmp.rice.pearson_r().unwrap());
    println!("r(mean d2, UNITY) = {:.3}", cmp.unity.pearson_r().unwrap());
    Ok(())
}
