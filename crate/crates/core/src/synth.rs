//! Synthetic legislatures with planted ideology and noise.
//!
//! Each rollcall `j` gets a polarity `s_j ∈ {-1, +1}` and a cutpoint `c_j`
//! drawn uniformly from the configured range. Legislator `i` votes yea when
//! `s_j·θ_i - c_j + ε_ij > 0` with `ε_ij ~ N(0, σ_i)`, nay otherwise; the
//! cast is then replaced by absent or abstain with the configured
//! probabilities.
//!
//! The random stream is ChaCha8 seeded with `seed_from_u64(seed)` and is
//! consumed in a fixed order: per rollcall one uniform for the polarity and
//! one for the cutpoint, then per legislator (in index order) one standard
//! normal followed by one uniform for the abstain/absent overwrite. The
//! stream consumption does not depend on σ or the probabilities.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Cast, Legislator, RollCall, Side, VoteMatrix};

/// Name of the pseudo-random algorithm behind [`generate`].
pub const RNG_ALGORITHM: &str =
    "ChaCha8Rng (rand_chacha 0.9) seeded via SeedableRng::seed_from_u64";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub n_legislators: usize,
    pub n_rollcalls: usize,
    /// Planted position per legislator, in `[-1, 1]`.
    pub ideology: Vec<f64>,
    /// Standard deviation of each legislator's vote noise.
    pub noise: Vec<f64>,
    pub abstain_prob: f64,
    pub absent_prob: f64,
    pub cutpoint_range: (f64, f64),
    pub seed: u64,
    /// Optional party per legislator; empty for none.
    pub parties: Vec<String>,
    /// ISO date stamped on every rollcall.
    pub date: String,
    /// Prefix of generated rollcall ids.
    pub rollcall_prefix: String,
}

impl SynthConfig {
    pub fn new(ideology: Vec<f64>, noise: Vec<f64>, n_rollcalls: usize, seed: u64) -> Self {
        SynthConfig {
            n_legislators: ideology.len(),
            n_rollcalls,
            ideology,
            noise,
            abstain_prob: 0.0,
            absent_prob: 0.0,
            cutpoint_range: (-0.5, 0.5),
            seed,
            parties: Vec::new(),
            date: "2020-01-01".to_string(),
            rollcall_prefix: "V".to_string(),
        }
    }

    /// θ uniform on `theta_range` and σ uniform on `sigma_range`, drawn from
    /// stream 1 of the seed so they do not overlap the vote stream.
    pub fn random_population(
        n_legislators: usize,
        n_rollcalls: usize,
        theta_range: (f64, f64),
        sigma_range: (f64, f64),
        seed: u64,
    ) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(1);
        let mut uniform = |(lo, hi): (f64, f64)| lo + (hi - lo) * rng.random::<f64>();
        let mut ideology = Vec::with_capacity(n_legislators);
        let mut noise = Vec::with_capacity(n_legislators);
        for _ in 0..n_legislators {
            ideology.push(uniform(theta_range));
            noise.push(uniform(sigma_range));
        }
        SynthConfig::new(ideology, noise, n_rollcalls, seed)
    }

    /// Two equal blocs at `-theta` (party `L`) and `+theta` (party `R`).
    pub fn two_blocs(
        per_bloc: usize,
        theta: f64,
        sigma: f64,
        n_rollcalls: usize,
        seed: u64,
    ) -> Self {
        let ideology = (0..2 * per_bloc)
            .map(|i| if i < per_bloc { -theta } else { theta })
            .collect();
        let mut cfg = SynthConfig::new(ideology, vec![sigma; 2 * per_bloc], n_rollcalls, seed);
        cfg.parties = (0..2 * per_bloc)
            .map(|i| if i < per_bloc { "L" } else { "R" }.to_string())
            .collect();
        cfg
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Synth(m));
        if self.n_legislators < 4 {
            return fail(format!(
                "need at least 4 legislators, got {}",
                self.n_legislators
            ));
        }
        if self.n_rollcalls < 2 {
            return fail(format!(
                "need at least 2 rollcalls, got {}",
                self.n_rollcalls
            ));
        }
        if self.ideology.len() != self.n_legislators || self.noise.len() != self.n_legislators {
            return fail("ideology and noise must have one entry per legislator".into());
        }
        if !self.parties.is_empty() && self.parties.len() != self.n_legislators {
            return fail("parties must be empty or have one entry per legislator".into());
        }
        if let Some(t) = self.ideology.iter().find(|t| !(-1.0..=1.0).contains(*t)) {
            return fail(format!("ideology {t} outside [-1, 1]"));
        }
        if let Some(s) = self.noise.iter().find(|s| !(s.is_finite() && **s >= 0.0)) {
            return fail(format!("noise {s} must be finite and non-negative"));
        }
        let probs_ok = (0.0..1.0).contains(&self.abstain_prob)
            && (0.0..1.0).contains(&self.absent_prob)
            && self.abstain_prob + self.absent_prob < 1.0;
        if !probs_ok {
            return fail(format!(
                "abstain_prob {} and absent_prob {} must lie in [0, 1) with sum < 1",
                self.abstain_prob, self.absent_prob
            ));
        }
        let (lo, hi) = self.cutpoint_range;
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return fail(format!("bad cutpoint range ({lo}, {hi})"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub legislator_id: String,
    pub theta: f64,
    pub sigma: f64,
}

#[derive(Clone, Debug)]
pub struct Synthetic {
    pub matrix: VoteMatrix,
    pub truth: Vec<GroundTruth>,
    /// Polarity and cutpoint drawn for each rollcall.
    pub rollcall_params: Vec<(i8, f64)>,
}

impl Synthetic {
    /// LEFT for negative θ, RIGHT otherwise.
    pub fn planted_side(&self, legislator: usize) -> Side {
        if self.truth[legislator].theta < 0.0 {
            Side::Left
        } else {
            Side::Right
        }
    }

    pub fn thetas(&self) -> Vec<f64> {
        self.truth.iter().map(|t| t.theta).collect()
    }

    pub fn sigmas(&self) -> Vec<f64> {
        self.truth.iter().map(|t| t.sigma).collect()
    }
}

/// Generates a vote matrix from `cfg`. Identical configurations give
/// identical matrices.
pub fn generate(cfg: &SynthConfig) -> Result<Synthetic> {
    cfg.validate()?;
    let n = cfg.n_legislators;
    let width = n.to_string().len().max(3);
    let legislators: Vec<Legislator> = (0..n)
        .map(|i| {
            let mut l = Legislator::new(format!("L{:0width$}", i + 1));
            l.name = format!("Legislator {}", i + 1);
            l.party = cfg.parties.get(i).cloned();
            l
        })
        .collect();
    let rc_width = cfg.n_rollcalls.to_string().len().max(3);
    let rollcalls: Vec<RollCall> = (0..cfg.n_rollcalls)
        .map(|j| {
            RollCall::new(
                format!("{}{:0rc_width$}", cfg.rollcall_prefix, j + 1),
                &cfg.date,
            )
        })
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (lo, hi) = cfg.cutpoint_range;
    let mut casts = vec![Cast::Absent; n * cfg.n_rollcalls];
    let mut params = Vec::with_capacity(cfg.n_rollcalls);
    for j in 0..cfg.n_rollcalls {
        let polarity: i8 = if rng.random::<f64>() < 0.5 { -1 } else { 1 };
        let cut = lo + (hi - lo) * rng.random::<f64>();
        params.push((polarity, cut));
        for i in 0..n {
            let z: f64 = rng.sample(StandardNormal);
            let overwrite = rng.random::<f64>();
            let utility = polarity as f64 * cfg.ideology[i] - cut + cfg.noise[i] * z;
            casts[i * cfg.n_rollcalls + j] = if overwrite < cfg.absent_prob {
                Cast::Absent
            } else if overwrite < cfg.absent_prob + cfg.abstain_prob {
                Cast::Abstain
            } else if utility > 0.0 {
                Cast::Yea
            } else {
                Cast::Nay
            };
        }
    }

    let truth = legislators
        .iter()
        .zip(cfg.ideology.iter().zip(&cfg.noise))
        .map(|(l, (&theta, &sigma))| GroundTruth {
            legislator_id: l.id.clone(),
            theta,
            sigma,
        })
        .collect();
    Ok(Synthetic {
        matrix: VoteMatrix::from_parts(legislators, rollcalls, casts)?,
        truth,
        rollcall_params: params,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noise_free_votes_follow_the_cutpoint() {
        let cfg = SynthConfig::new(vec![-0.9, -0.2, 0.1, 0.7, 1.0], vec![0.0; 5], 50, 3);
        let s = generate(&cfg).unwrap();
        for (j, &(pol, cut)) in s.rollcall_params.iter().enumerate() {
            for i in 0..5 {
                let expect = if pol as f64 * cfg.ideology[i] - cut > 0.0 {
                    Cast::Yea
                } else {
                    Cast::Nay
                };
                assert_eq!(s.matrix.cast(i, j), expect);
            }
        }
    }

    #[test]
    fn same_seed_same_matrix() {
        let mut cfg = SynthConfig::random_population(20, 30, (-1.0, 1.0), (0.1, 0.6), 42);
        cfg.abstain_prob = 0.05;
        cfg.absent_prob = 0.1;
        let a = generate(&cfg).unwrap();
        let b = generate(&cfg).unwrap();
        assert_eq!(a.matrix, b.matrix);
        cfg.seed = 43;
        assert_ne!(generate(&cfg).unwrap().matrix, a.matrix);
    }

    #[test]
    fn invalid_configs_rejected() {
        let ok = SynthConfig::two_blocs(2, 0.8, 0.0, 10, 1);
        assert!(ok.validate().is_ok());

        let mut c = ok.clone();
        c.abstain_prob = 0.6;
        c.absent_prob = 0.4;
        assert!(generate(&c).unwrap_err().is_config());

        let c = SynthConfig::two_blocs(1, 0.8, 0.0, 10, 1);
        assert!(generate(&c).is_err());

        let mut c = ok.clone();
        c.n_rollcalls = 1;
        assert!(generate(&c).is_err());

        let mut c = ok.clone();
        c.noise[0] = -0.1;
        assert!(generate(&c).is_err());

        let mut c = ok;
        c.ideology[0] = 1.5;
        assert!(generate(&c).is_err());
    }
}
