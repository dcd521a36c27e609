use std::collections::BTreeMap;

use lifshitz_core::rng::rng_from_seed;
use lifshitz_core::stats::{linear_fit, median};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, LabResult};
use crate::table::ResultTable;

pub const BOOTSTRAP_RESAMPLES: usize = 1000;

/// Least squares of `log median(y)` on `log L`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub observable: String,
    pub sizes: Vec<usize>,
    pub medians: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    /// 2.5% and 97.5% bootstrap quantiles of the slope.
    pub ci: (f64, f64),
    pub resamples: usize,
}

pub fn fit_samples(observable: &str, samples: &BTreeMap<usize, Vec<f64>>, seed: u64) -> LabResult<ScalingFit> {
    if samples.len() < 3 {
        return Err(LabError::Fit(format!("need at least 3 distinct sizes, got {}", samples.len())));
    }
    if samples.values().flatten().any(|&v| !(v > 0.0)) {
        return Err(LabError::Fit(format!("observable `{observable}` has non-positive values")));
    }
    let sizes: Vec<usize> = samples.keys().copied().collect();
    let xs: Vec<f64> = sizes.iter().map(|&l| (l as f64).ln()).collect();
    let medians: Vec<f64> = samples.values().map(|v| median(v)).collect();
    let ys: Vec<f64> = medians.iter().map(|m| m.ln()).collect();
    let (slope, intercept, r2) = linear_fit(&xs, &ys);

    let mut rng = rng_from_seed(seed);
    let mut slopes = Vec::with_capacity(BOOTSTRAP_RESAMPLES);
    let mut buf = Vec::new();
    for _ in 0..BOOTSTRAP_RESAMPLES {
        let ys: Vec<f64> = samples
            .values()
            .map(|v| {
                buf.clear();
                buf.extend((0..v.len()).map(|_| v[rng.random_range(0..v.len())]));
                median(&buf).ln()
            })
            .collect();
        slopes.push(linear_fit(&xs, &ys).0);
    }
    slopes.sort_by(|a, b| a.total_cmp(b));
    let q = |p: f64| slopes[((p * (slopes.len() - 1) as f64).round()) as usize];
    Ok(ScalingFit { observable: observable.into(), sizes, medians, slope, intercept, r2, ci: (q(0.025), q(0.975)), resamples: BOOTSTRAP_RESAMPLES })
}

pub fn scaling_fit(table: &ResultTable, observable: &str) -> LabResult<ScalingFit> {
    let samples = table.by_size(observable);
    fit_samples(observable, &samples, table.provenance.seed)
}
