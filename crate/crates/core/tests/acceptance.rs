//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each
//! and exits non-zero if any criterion fails.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use bcall::cluster::{centroid, distance_to_centroid};
use bcall::cohesion::{cohesion_comparison, group_indices, mean_d2_cells, UnityWeighting};
use bcall::correlation::{spearman, standard_error};
use bcall::engine::{mean_and_spread, stats_from_votes};
use bcall::pipeline::{run_pipeline, RunConfig};
use bcall::synth::{generate, SynthConfig};
use bcall::{
    agglomerate, bcall_scores, bipartition, deviation, io, pairwise_distance, standardize, Groups,
    Legislator, PeriodKey, PeriodPolicy, Side, VoteMatrix,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn planted_groups(s: &bcall::Synthetic) -> Groups {
    s.truth
        .iter()
        .enumerate()
        .map(|(i, t)| (t.legislator_id.clone(), s.planted_side(i)))
        .collect()
}

fn population_stddev(v: &[f64]) -> f64 {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n).sqrt()
}

/// 1. Per-rollcall zero sum and unit population dispersion of deviations.
fn standardization_invariants() -> Outcome {
    const TOL: f64 = 1e-9;
    let mut cfg = SynthConfig::random_population(200, 500, (-1.0, 1.0), (0.1, 0.6), 11);
    cfg.abstain_prob = 0.05;
    cfg.absent_prob = 0.05;
    let s = generate(&cfg).map_err(|e| e.to_string())?;
    let groups = planted_groups(&s);

    let start = Instant::now();
    let std = standardize(&s.matrix, &groups).map_err(|e| e.to_string())?;
    let (mut worst_sum, mut worst_sd, mut checked) = (0.0f64, 0.0f64, 0);
    for (j, st) in std.stats.iter().enumerate() {
        if st.is_dropped() {
            continue;
        }
        let u = std.rollcall_deviations(j);
        worst_sum = worst_sum.max(u.iter().sum::<f64>().abs());
        worst_sd = worst_sd.max((population_stddev(&u) - 1.0).abs());
        checked += 1;
    }
    let elapsed = start.elapsed().as_secs_f64();
    let detail = format!(
        "{checked} rollcalls, max |sum u| = {worst_sum:.2e}, max |sd - 1| = {worst_sd:.2e}, {elapsed:.3}s"
    );
    if worst_sum <= TOL && worst_sd <= TOL && elapsed < 1.0 && checked > 0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// 2. Label swap negates d1 and keeps d2; vote negation keeps every u.
fn symmetry_suite() -> Outcome {
    const TOL: f64 = 1e-12;
    let mut used = 0;
    let mut seed = 1000u64;
    let mut worst = 0.0f64;
    while used < 50 {
        seed += 1;
        let n_leg = 20 + (seed % 30) as usize;
        let n_rc = 40 + (seed % 50) as usize;
        let mut cfg = SynthConfig::random_population(n_leg, n_rc, (-1.0, 1.0), (0.1, 0.8), seed);
        cfg.abstain_prob = 0.1;
        cfg.absent_prob = 0.1;
        let s = generate(&cfg).map_err(|e| e.to_string())?;
        let m = &s.matrix;
        let g = planted_groups(&s);
        if g.iter().all(|(_, side)| side == Side::Left)
            || g.iter().all(|(_, side)| side == Side::Right)
        {
            continue;
        }
        let period = PeriodKey::new("p");
        let base = bcall_scores(m, &g, &period).map_err(|e| e.to_string())?;
        if base.n_tied > 0 {
            continue;
        }
        used += 1;

        let swapped = bcall_scores(m, &g.swapped(), &period).map_err(|e| e.to_string())?;
        for (a, b) in base.scores.iter().zip(&swapped.scores) {
            worst = worst.max((a.d1 + b.d1).abs()).max((a.d2 - b.d2).abs());
        }

        let neg = m.negated();
        let u = standardize(m, &g).map_err(|e| e.to_string())?;
        let un = standardize(&neg, &g).map_err(|e| e.to_string())?;
        for i in 0..m.n_legislators() {
            for j in 0..m.n_rollcalls() {
                match (u.u(i, j), un.u(i, j)) {
                    (Some(a), Some(b)) => worst = worst.max((a - b).abs()),
                    (None, None) => {}
                    _ => return Err(format!("seed {seed}: retained set differs at ({i}, {j})")),
                }
            }
        }
    }
    let detail = format!("{used} matrices, max deviation {worst:.1e}");
    if worst <= TOL {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// 3. Planted ideology and noise are recovered in rank order.
fn synthetic_recovery() -> Outcome {
    let (mut min_d1, mut min_d2) = (f64::INFINITY, f64::INFINITY);
    let mut lines = Vec::new();
    for seed in 1..=10u64 {
        let cfg = SynthConfig::random_population(200, 500, (-1.0, 1.0), (0.1, 0.6), seed);
        let s = generate(&cfg).map_err(|e| e.to_string())?;
        let thetas = s.thetas();
        let leftmost = (0..thetas.len())
            .min_by(|&a, &b| thetas[a].total_cmp(&thetas[b]))
            .unwrap();
        let anchor = s.truth[leftmost].legislator_id.clone();
        let p = bipartition(&s.matrix, 100, Some(&anchor)).map_err(|e| e.to_string())?;
        let run = bcall_scores(&s.matrix, &p.groups(), &PeriodKey::new("p"))
            .map_err(|e| e.to_string())?;
        if run.scores.len() != 200 {
            return Err(format!(
                "seed {seed}: {} legislators scored",
                run.scores.len()
            ));
        }
        let d1: Vec<f64> = run.scores.iter().map(|x| x.d1).collect();
        let d2: Vec<f64> = run.scores.iter().map(|x| x.d2).collect();
        let r1 = spearman(&d1, &thetas).unwrap().unwrap().r;
        let r2 = spearman(&d2, &s.sigmas()).unwrap().unwrap().r;
        min_d1 = min_d1.min(r1);
        min_d2 = min_d2.min(r2);
        lines.push(format!("{r1:.3}/{r2:.3}"));
    }
    let detail = format!(
        "min rho(d1, theta) = {min_d1:.3}, min rho(d2, sigma) = {min_d2:.3} [{}]",
        lines.join(" ")
    );
    if min_d1 >= 0.90 && min_d2 >= 0.60 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// 4. Mean d2 per party-period correlates negatively with RICE.
fn d2_rice_correlation() -> Outcome {
    let mut cells = Vec::new();
    let mut indices = Vec::new();
    for k in 0..10u64 {
        let per_party = 40;
        let mut rng_cfg =
            SynthConfig::random_population(2 * per_party, 300, (0.2, 0.9), (0.0, 0.0), 500 + k);
        let sigma_a = 0.1 + 0.1 * k as f64;
        for i in 0..2 * per_party {
            if i < per_party {
                rng_cfg.ideology[i] = -rng_cfg.ideology[i];
                rng_cfg.noise[i] = sigma_a;
            } else {
                rng_cfg.noise[i] = 0.2;
            }
        }
        rng_cfg.parties = (0..2 * per_party)
            .map(|i| if i < per_party { "A" } else { "B" }.to_string())
            .collect();
        let s = generate(&rng_cfg).map_err(|e| e.to_string())?;
        let period = PeriodKey::new(format!("{}", 2010 + k));
        let groups: Groups = s
            .matrix
            .legislators()
            .iter()
            .map(|l| {
                let side = if l.party.as_deref() == Some("A") {
                    Side::Left
                } else {
                    Side::Right
                };
                (l.id.clone(), side)
            })
            .collect();
        let run = bcall_scores(&s.matrix, &groups, &period).map_err(|e| e.to_string())?;
        let party: Vec<Option<String>> = s
            .matrix
            .legislators()
            .iter()
            .map(|l| l.party.clone())
            .collect();
        indices.extend(
            group_indices(&s.matrix, &party, &period, UnityWeighting::ChamberCloseness)
                .map_err(|e| e.to_string())?,
        );
        let lookup: std::collections::HashMap<String, String> = s
            .matrix
            .legislators()
            .iter()
            .map(|l| (l.id.clone(), l.party.clone().unwrap()))
            .collect();
        cells.extend(mean_d2_cells(&run.scores, |sc| {
            lookup.get(&sc.legislator_id).cloned()
        }));
    }
    let cmp = cohesion_comparison(&cells, &indices).map_err(|e| e.to_string())?;
    let r = cmp.rice.pearson_r().ok_or("undefined correlation")?;
    let ru = cmp.unity.pearson_r().unwrap_or(f64::NAN);
    let detail = format!(
        "{} cells, r(mean d2, RICE) = {r:.3}, r(mean d2, UNITY) = {ru:.3}",
        cmp.n_cells
    );
    if r <= -0.5 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// 5. Standard-error formula against published (r, SE) rows at chamber size.
fn standard_error_crosscheck() -> Outcome {
    // (label, r, printed SE, chamber size)
    let rows = [
        ("US 2022", 0.964, 0.013, 435),
        ("US 2021", 0.988, 0.007, 435),
        ("US 2020", 0.938, 0.017, 435),
        ("US 2010", 0.978, 0.010, 435),
        ("Chile 2017", 0.982, 0.017, 120),
        ("Chile 2010", 0.991, 0.013, 120),
        ("Chile 2022", 0.991, 0.011, 155),
        ("Chile 2018", 0.993, 0.010, 155),
    ];
    let headline = standard_error(0.964, 435);
    if format!("{headline:.3}") != "0.013" || (headline - 0.0128).abs() > 5e-5 {
        return Err(format!("headline SE {headline:.5}"));
    }
    let mut parts = Vec::new();
    for (label, r, printed, n) in rows {
        let se = standard_error(r, n);
        if (se - printed).abs() > 0.001 + 1e-12 {
            return Err(format!("{label}: computed {se:.4} vs printed {printed}"));
        }
        parts.push(format!("{label} {se:.4}"));
    }
    Ok(format!(
        "US 2022 {headline:.4} -> 0.013; {}",
        parts.join(", ")
    ))
}

/// 6. Noise-free blocs are recovered exactly and refinement is a fixed point.
fn clustering_correctness() -> Outcome {
    const TOL: f64 = 1e-12;
    for seed in 1..=20u64 {
        let per_bloc = 5 + (seed as usize % 16);
        let mut cfg = SynthConfig::two_blocs(per_bloc, 0.8, 0.0, 60, seed);
        // spread each bloc while keeping it clear of the cutpoint range
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for t in cfg.ideology.iter_mut() {
            *t = t.signum() * rand::Rng::random_range(&mut rng, 0.55..=1.0);
        }
        let s = generate(&cfg).map_err(|e| e.to_string())?;
        // interleave the blocs in input order
        let mut order: Vec<usize> = (0..s.matrix.n_legislators()).collect();
        order.shuffle(&mut rng);
        let m = shuffled(&s.matrix, &order);
        let planted: Vec<Side> = order.iter().map(|&i| s.planted_side(i)).collect();

        let p = bipartition(&m, 100, None).map_err(|e| e.to_string())?;
        let same = p.assignment == planted;
        let flipped = p
            .assignment
            .iter()
            .zip(&planted)
            .all(|(a, b)| *a == b.opposite());
        if !(same || flipped) {
            return Err(format!("seed {seed}: planted partition not recovered"));
        }
        if !p.converged {
            return Err(format!("seed {seed}: refinement did not converge"));
        }
        let cents = [
            centroid(&m, p.members(Side::Left)),
            centroid(&m, p.members(Side::Right)),
        ];
        for i in 0..m.n_legislators() {
            let own = p.assignment[i];
            let d_own = distance_to_centroid(m.row(i), &cents[own.index()]);
            let d_other = distance_to_centroid(m.row(i), &cents[own.opposite().index()]);
            if d_own > d_other + TOL {
                return Err(format!(
                    "seed {seed}: legislator {i} closer to other centroid"
                ));
            }
        }
    }
    Ok("20/20 seeds recovered, fixed point holds".into())
}

fn shuffled(m: &VoteMatrix, order: &[usize]) -> VoteMatrix {
    let legislators: Vec<Legislator> = order.iter().map(|&i| m.legislators()[i].clone()).collect();
    let casts = order
        .iter()
        .flat_map(|&i| m.row(i).iter().copied())
        .collect();
    VoteMatrix::from_parts(legislators, m.rollcalls().to_vec(), casts).unwrap()
}

/// 7. Hand-traced worked examples.
fn hand_traced_goldens() -> Outcome {
    const TOL: f64 = 1e-4;
    let close = |a: f64, b: f64| (a - b).abs() <= TOL;
    let split = stats_from_votes(
        "V",
        [
            (Side::Left, -1),
            (Side::Left, -1),
            (Side::Right, 1),
            (Side::Right, 1),
        ],
    );
    if !(close(split.mean.unwrap(), 0.0) && close(split.stddev.unwrap(), 1.0)) {
        return Err(format!("split stats {split:?}"));
    }
    if !close(deviation(-1.0, &split), -1.0) || !close(deviation(1.0, &split), 1.0) {
        return Err("u values for the split rollcall".into());
    }
    let abst = stats_from_votes(
        "V",
        [
            (Side::Left, -1),
            (Side::Left, 0),
            (Side::Right, 1),
            (Side::Right, 1),
        ],
    );
    if !(close(abst.mean.unwrap(), 0.25)
        && close(abst.stddev.unwrap(), 0.8292)
        && close(abst.left_mean.unwrap(), -0.5)
        && close(abst.right_mean.unwrap(), 1.0))
    {
        return Err(format!("abstain stats {abst:?}"));
    }
    let (d1, d2) = mean_and_spread(&[-1.0, -1.0, -0.5]).unwrap();
    if !(close(d1, -0.8333) && close(d2, 0.2357)) {
        return Err(format!("d1 {d1}, d2 {d2}"));
    }
    let m = VoteMatrix::from_values(
        &["L1", "L2", "R1", "R2"],
        &[
            vec![1, 1, 1],
            vec![1, 1, -1],
            vec![-1, -1, -1],
            vec![-1, -1, 1],
        ],
        "2020-01-01",
    )
    .map_err(|e| e.to_string())?;
    let d = pairwise_distance(&m);
    let p = agglomerate(&m, &d).map_err(|e| e.to_string())?;
    let d_l = distance_to_centroid(m.row(1), &centroid(&m, [0]));
    let d_r = distance_to_centroid(m.row(1), &centroid(&m, [2]));
    let ok = d.get(0, 2) == 2.0
        && p.seeds == (0, 2)
        && close(d_l, 2.0 / 3.0)
        && close(d_r, 4.0 / 3.0)
        && p.assignment == [Side::Left, Side::Left, Side::Right, Side::Right];
    if ok {
        Ok("stats 0/1 and 0.25/0.8292, u = -1/+1, d1 -0.8333 d2 0.2357, 4x3 trace".into())
    } else {
        Err(format!("clustering trace {:?}", p.assignment))
    }
}

/// 8. Two full runs produce byte-identical files.
fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut parts = Vec::new();
    for (k, year) in [2019, 2020, 2021].iter().enumerate() {
        let mut cfg =
            SynthConfig::random_population(60, 80, (-1.0, 1.0), (0.1, 0.6), 77 + k as u64);
        cfg.abstain_prob = 0.03;
        cfg.absent_prob = 0.05;
        cfg.date = format!("{year}-05-01");
        cfg.rollcall_prefix = format!("Y{year}-");
        cfg.parties = (0..60)
            .map(|i| {
                if i % 3 == 0 {
                    "P1"
                } else if i % 3 == 1 {
                    "P2"
                } else {
                    "P3"
                }
                .to_string()
            })
            .collect();
        parts.push(generate(&cfg).map_err(|e| e.to_string())?.matrix);
    }
    let m = VoteMatrix::concat(&parts).map_err(|e| e.to_string())?;
    let input = dir.path().join("votes.csv");
    io::write_atomic(&input, |w| io::write_canonical(w, &m)).map_err(|e| e.to_string())?;

    let run = |name: &str| {
        let mut cfg = RunConfig::new(&input, dir.path().join(name));
        cfg.period = PeriodPolicy::CalendarYear;
        cfg.seed = 9;
        run_pipeline(&cfg).map_err(|e| e.to_string())
    };
    run("a")?;
    run("b")?;
    let files = [
        "scores.csv",
        "clusters.csv",
        "indices.csv",
        "plot.csv",
        "manifest.json",
    ];
    for f in files {
        let a = std::fs::read(dir.path().join("a").join(f)).map_err(|e| e.to_string())?;
        let b = std::fs::read(dir.path().join("b").join(f)).map_err(|e| e.to_string())?;
        if a != b {
            return Err(format!("{f} differs"));
        }
        if a.is_empty() {
            return Err(format!("{f} is empty"));
        }
    }
    Ok(format!("{} files identical across runs", files.len()))
}

fn main() {
    let criteria: [Criterion; 8] = [
        (
            "AC1 per-vote standardization invariants",
            standardization_invariants,
        ),
        ("AC2 symmetry suite", symmetry_suite),
        ("AC3 synthetic recovery", synthetic_recovery),
        ("AC4 negative d2-RICE correlation", d2_rice_correlation),
        ("AC5 SE formula cross-check", standard_error_crosscheck),
        ("AC6 clustering correctness", clustering_correctness),
        ("AC7 hand-traced goldens", hand_traced_goldens),
        ("AC8 determinism", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
