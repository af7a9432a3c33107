//! Monte Carlo study of TLqE maximum-likelihood estimators.
//!
//! Replication `j` at sample size `n` draws its data with the seed
//! [`replication_seed`]`(seed, n, j)`, fits TLqE from the default start grid
//! and records the estimates. Moments are reduced by pairwise summation over
//! replications in index order, so reports do not depend on the worker count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::fit::fit_tlqe;
use crate::sampling::{sample, SampleRequest};
use crate::{Dataset, Error, Result, Tlqe};

/// Seed of the shipped default configuration.
pub const GOLDEN_SEED: u64 = 20_240_917;

/// Largest tolerated share of non-converged fits in a cell.
pub const MAX_FAILURE_RATE: f64 = 0.05;

pub const PARAMETERS: [&str; 3] = ["alpha", "lambda", "q"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub true_params: Tlqe<f64>,
    pub sample_sizes: Vec<usize>,
    pub replications: usize,
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            true_params: Tlqe::new(2.0, 0.5, 1.3).expect("valid defaults"),
            sample_sizes: vec![100, 500],
            replications: 200,
            seed: GOLDEN_SEED,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::Config("replications must be at least 1".into()));
        }
        if self.sample_sizes.is_empty() {
            return Err(Error::Config("at least one sample size is required".into()));
        }
        if let Some(&n) = self.sample_sizes.iter().find(|&&n| n < 4) {
            return Err(Error::Config(format!(
                "sample size {n} is too small to fit three parameters (need ≥ 4)"
            )));
        }
        if let Some(w) = self.sample_sizes.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::Config(format!(
                "sample sizes must be strictly increasing, got {} then {}",
                w[0], w[1]
            )));
        }
        Ok(())
    }
}

/// Summary for one (sample size, parameter) pair over converged fits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimCell {
    pub sample_size: usize,
    pub parameter: String,
    pub truth: f64,
    pub mean: f64,
    pub bias: f64,
    pub variance: f64,
    pub mse: f64,
    pub converged: usize,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub config: SimConfig,
    pub cells: Vec<SimCell>,
}

impl SimReport {
    pub fn cell(&self, sample_size: usize, parameter: &str) -> Option<&SimCell> {
        self.cells
            .iter()
            .find(|c| c.sample_size == sample_size && c.parameter == parameter)
    }
}

/// SplitMix64 finaliser.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// `mix64(mix64(mix64(seed) ^ n) ^ j)`
pub fn replication_seed(seed: u64, sample_size: usize, replication: usize) -> u64 {
    mix64(mix64(mix64(seed) ^ sample_size as u64) ^ replication as u64)
}

/// Pairwise (cascade) summation in slice order.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 8 {
        return v.iter().sum();
    }
    let mid = v.len() / 2;
    pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
}

/// Draw and fit one replication; `None` when the fit did not converge.
pub fn run_replication(
    cfg: &SimConfig,
    sample_size: usize,
    replication: usize,
) -> Result<Option<[f64; 3]>> {
    let req = SampleRequest::new(
        cfg.true_params,
        sample_size,
        replication_seed(cfg.seed, sample_size, replication),
    )?;
    let data = Dataset::new(sample(&req)?)?;
    let fit = fit_tlqe(&data, None)?;
    Ok(fit.converged.then(|| {
        let e = fit.estimates;
        [e.alpha, e.lambda, e.q.expect("TLqE fit has q")]
    }))
}

pub fn run_simulation(cfg: &SimConfig) -> Result<SimReport> {
    cfg.validate()?;
    let truth = [
        cfg.true_params.alpha(),
        cfg.true_params.lambda(),
        cfg.true_params.q(),
    ];
    let mut cells = Vec::new();
    for &n in &cfg.sample_sizes {
        let outcomes: Vec<Option<[f64; 3]>> = (0..cfg.replications)
            .into_par_iter()
            .map(|j| run_replication(cfg, n, j))
            .collect::<Result<_>>()?;
        let ok: Vec<[f64; 3]> = outcomes.iter().flatten().copied().collect();
        let failures = outcomes.len() - ok.len();
        if failures as f64 > MAX_FAILURE_RATE * cfg.replications as f64 {
            return Err(Error::Simulation(format!(
                "{failures} of {} fits failed to converge at n = {n} (limit {:.0}%)",
                cfg.replications,
                100.0 * MAX_FAILURE_RATE
            )));
        }
        let m = ok.len() as f64;
        for (k, name) in PARAMETERS.iter().enumerate() {
            let est: Vec<f64> = ok.iter().map(|e| e[k]).collect();
            let mean = pairwise_sum(&est) / m;
            let dev: Vec<f64> = est.iter().map(|e| (e - mean).powi(2)).collect();
            let err: Vec<f64> = est.iter().map(|e| (e - truth[k]).powi(2)).collect();
            cells.push(SimCell {
                sample_size: n,
                parameter: name.to_string(),
                truth: truth[k],
                mean,
                bias: mean - truth[k],
                variance: pairwise_sum(&dev) / m,
                mse: pairwise_sum(&err) / m,
                converged: ok.len(),
                failures,
            });
        }
    }
    Ok(SimReport {
        config: cfg.clone(),
        cells,
    })
}
