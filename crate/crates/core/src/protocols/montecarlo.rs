use rayon::prelude::*;
use serde::Serialize;

use super::pipeline::{hgsa_n_analyze, AnalyzerConfig};
use crate::error::{Error, Result};
use crate::kerrqnd::{gaussian_error_prob, HomodyneModel};
use crate::rng::SeedStreams;
use crate::statecore::HyperLabel;

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `errors` out of `trials`.
pub fn wilson_interval(errors: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateEstimate {
    pub trials: u64,
    pub errors: u64,
    pub rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl RateEstimate {
    pub fn new(errors: u64, trials: u64) -> Self {
        let (ci_low, ci_high) = wilson_interval(errors, trials, Z_95);
        Self {
            trials,
            errors,
            rate: if trials == 0 {
                0.0
            } else {
                errors as f64 / trials as f64
            },
            ci_low,
            ci_high,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateRate {
    pub state: HyperLabel,
    #[serde(flatten)]
    pub estimate: RateEstimate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloReport {
    pub n: usize,
    pub model: HomodyneModel,
    pub theta: f64,
    pub alpha: f64,
    pub seed: u64,
    /// `gaussian_error_prob(alpha, theta)` for the configured model.
    pub per_probe_error: f64,
    /// `1 − (1 − ε)^{2(n−1)}`: some probe misread.
    pub predicted_rate: f64,
    pub aggregate: RateEstimate,
    pub per_state: Vec<StateRate>,
}

/// Probability that at least one of the `2(n−1)` probes is misread.
pub fn predicted_misclassification(n: usize, per_probe_error: f64) -> f64 {
    1.0 - (1.0 - per_probe_error).powi(2 * (n as i32 - 1))
}

/// Runs `cfg.trials` sampled analyses; trial `t` feeds canonical state
/// `t mod 4^n` and draws from its own child seed stream.
pub fn monte_carlo(n: usize, cfg: &AnalyzerConfig) -> Result<MonteCarloReport> {
    if cfg.trials == 0 {
        return Err(Error::arg("trials must be at least 1"));
    }
    let labels = HyperLabel::enumerate(n)?;
    let states: Vec<_> = labels.iter().map(|l| l.state()).collect();
    let root = SeedStreams::new(cfg.seed);
    let misses: Vec<bool> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let idx = (t % labels.len() as u64) as usize;
            let trial_cfg = AnalyzerConfig {
                seed: root.child(t).seed(),
                ..cfg.clone()
            };
            hgsa_n_analyze(n, &states[idx], &trial_cfg).map(|(got, _)| got != labels[idx])
        })
        .collect::<Result<_>>()?;

    let mut counts = vec![(0u64, 0u64); labels.len()];
    for (t, &miss) in misses.iter().enumerate() {
        let c = &mut counts[t % labels.len()];
        c.0 += u64::from(miss);
        c.1 += 1;
    }
    let total_errors = counts.iter().map(|c| c.0).sum();
    let per_probe_error = match cfg.model {
        HomodyneModel::Ideal => 0.0,
        HomodyneModel::Gaussian => gaussian_error_prob(cfg.alpha, cfg.theta),
    };
    Ok(MonteCarloReport {
        n,
        model: cfg.model,
        theta: cfg.theta,
        alpha: cfg.alpha,
        seed: cfg.seed,
        per_probe_error,
        predicted_rate: predicted_misclassification(n, per_probe_error),
        aggregate: RateEstimate::new(total_errors, cfg.trials),
        per_state: labels
            .into_iter()
            .zip(counts)
            .map(|(state, (e, t))| StateRate {
                state,
                estimate: RateEstimate::new(e, t),
            })
            .collect(),
    })
}
