//! Pearson and Spearman correlation with the large-sample standard error
//! `sqrt((1 - r²) / (n - 2))`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A correlation coefficient with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Correlation {
    pub r: f64,
    pub se: f64,
}

/// Standard error of a correlation coefficient from `n` pairs.
pub fn standard_error(r: f64, n: usize) -> f64 {
    ((1.0 - r * r).max(0.0) / (n as f64 - 2.0)).sqrt()
}

/// Pearson product-moment correlation.
///
/// Returns `Ok(None)` when fewer than three pairs are given or either input
/// is constant; the correlation is undefined there.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<Option<Correlation>> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let n = x.len();
    if n < 3 {
        return Ok(None);
    }
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 || is_constant(x) || is_constant(y) {
        return Ok(None);
    }
    let r = (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0);
    Ok(Some(Correlation {
        r,
        se: standard_error(r, n),
    }))
}

fn is_constant(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[0] == w[1])
}

/// Fractional (1-based) ranks; tied values share the average of their ranks.
pub fn fractional_ranks(v: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut ranks = vec![0.0; v.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && v[order[end]] == v[order[start]] {
            end += 1;
        }
        // positions start..end hold ranks start+1 ..= end
        let avg = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = avg;
        }
        start = end;
    }
    ranks
}

/// Spearman rank correlation: Pearson on fractional ranks.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<Option<Correlation>> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    pearson(&fractional_ranks(x), &fractional_ranks(y))
}

/// Pearson and Spearman results for one paired sample. Undefined
/// coefficients are `None`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub pearson: Option<Correlation>,
    pub spearman: Option<Correlation>,
    pub n: usize,
}

impl CorrelationReport {
    pub fn compute(x: &[f64], y: &[f64]) -> Result<Self> {
        Ok(CorrelationReport {
            pearson: pearson(x, y)?,
            spearman: spearman(x, y)?,
            n: x.len(),
        })
    }

    pub fn pearson_r(&self) -> Option<f64> {
        self.pearson.map(|c| c.r)
    }

    pub fn spearman_rho(&self) -> Option<f64> {
        self.spearman.map(|c| c.r)
    }
}
