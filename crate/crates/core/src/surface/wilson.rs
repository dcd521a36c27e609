//! Wilson's eigenfunction drift for the column dynamics.

use serde::{Deserialize, Serialize};

use super::dynamics::{CoupledPair, Dynamics};
use super::partition::{BoxSpec, PlanePartition};
use super::paths::{partition_to_paths, LatticePathBundle};
use crate::parallel::map_replicas;
use crate::rng::derive_seed;
use crate::stats::mean_se;
use crate::Result;

pub fn kappa(d_prime: usize) -> f64 {
    1.0 - (std::f64::consts::PI / (2.0 * d_prime as f64)).cos()
}

pub fn weight(d_prime: usize, x: usize) -> f64 {
    (std::f64::consts::PI * x as f64 / (2.0 * d_prime as f64)).sin()
}

/// `max_x |Δg(x) + κ g(x)|` over `1 <= x < 2D'`.
pub fn eigen_residual(d_prime: usize) -> f64 {
    let k = kappa(d_prime);
    (1..2 * d_prime)
        .map(|x| {
            let lap = 0.5 * (weight(d_prime, x - 1) + weight(d_prime, x + 1)) - weight(d_prime, x);
            (lap + k * weight(d_prime, x)).abs()
        })
        .fold(0.0, f64::max)
}

/// `Φ(φ) = Σ_x g(x) Σ_j φ^{(j)}_x`.
pub fn phi_functional(phi: &LatticePathBundle) -> f64 {
    let n = phi.len();
    let d_prime = n / 2;
    (1..n).map(|x| weight(d_prime, x) * phi.column_sum(x) as f64).sum()
}

fn partition_phi(v: &PlanePartition, b: &BoxSpec) -> f64 {
    phi_functional(&partition_to_paths(v, b).expect("dynamics keep partitions valid"))
}

/// Right-hand side of the conditional-mean identity at position `x`:
/// `½ Σ_j (φ_{x-1} + φ_{x+1}) + Σ_j (1_{A+} - 1_{A-})`.
pub fn conditional_mean_rhs(phi: &LatticePathBundle, b: &BoxSpec, x: usize) -> Result<f64> {
    let top = partition_to_paths(&b.floor(), b)?;
    let bottom = partition_to_paths(&b.ceil(), b)?;
    let mut s = 0.0;
    for (k, p) in phi.paths.iter().enumerate() {
        s += 0.5 * (p[x - 1] + p[x + 1]) as f64;
        if p[x - 1] == p[x + 1] {
            if p[x] == top.paths[k][x] && p[x] < p[x - 1] {
                s -= 1.0;
            }
            if p[x] == bottom.paths[k][x] && p[x] > p[x - 1] {
                s += 1.0;
            }
        }
    }
    Ok(s)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriftReport {
    pub d_prime: usize,
    pub kappa: f64,
    /// `u(0) = Φ(φ⁻) - Φ(φ⁺)`.
    pub u0: f64,
    /// `2 |V⁺ \ V⁻|`; each cube moves one path by 2 at one position.
    pub volume_bound: f64,
    pub times: Vec<f64>,
    pub mean: Vec<f64>,
    pub se: Vec<f64>,
    pub bound: Vec<f64>,
    /// Checkpoints with `mean - 3 se > u0 e^{-κt/2}`.
    pub violations: usize,
    /// Consecutive checkpoints where the per-replica contraction
    /// `D(t2) - e^{-κ(t2-t1)/2} D(t1)` has mean above zero by more than 3 se.
    pub step_violations: usize,
    pub replicas: u64,
}

pub fn wilson_drift(b: &BoxSpec, replicas: u64, times: &[f64], seed: u64) -> DriftReport {
    let d_prime = b.d_prime();
    let k = kappa(d_prime);
    let u0 = partition_phi(&b.floor(), b) - partition_phi(&b.ceil(), b);
    let traces: Vec<Vec<f64>> = map_replicas(replicas, |r| {
        let mut pair = CoupledPair::extremal(b, Dynamics::Column, derive_seed(seed, r));
        times
            .iter()
            .map(|&t| {
                pair.run_until(t, false);
                partition_phi(&pair.lower, b) - partition_phi(&pair.upper, b)
            })
            .collect()
    });
    let mut mean = Vec::new();
    let mut se = Vec::new();
    let mut bound = Vec::new();
    let mut violations = 0;
    for (i, &t) in times.iter().enumerate() {
        let col: Vec<f64> = traces.iter().map(|tr| tr[i]).collect();
        let (m, s) = mean_se(&col);
        let bd = u0 * (-k * t / 2.0).exp();
        if m - 3.0 * s > bd * (1.0 + 1e-12) {
            violations += 1;
        }
        mean.push(m);
        se.push(s);
        bound.push(bd);
    }
    let mut step_violations = 0;
    for i in 1..times.len() {
        let f = (-k * (times[i] - times[i - 1]) / 2.0).exp();
        let inc: Vec<f64> = traces.iter().map(|tr| tr[i] - f * tr[i - 1]).collect();
        let (m, s) = mean_se(&inc);
        if m - 3.0 * s > 1e-12 * u0 {
            step_violations += 1;
        }
    }
    DriftReport {
        d_prime,
        kappa: k,
        u0,
        volume_bound: 2.0 * b.free_volume() as f64,
        times: times.to_vec(),
        mean,
        se,
        bound,
        violations,
        step_violations,
        replicas,
    }
}
