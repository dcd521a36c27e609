use serde::{Deserialize, Serialize};

use super::heat::heat_solve;
use crate::parallel::map_replicas;
use crate::rng::{derive_seed, EventStream};
use crate::stats::mean_se;
use crate::surface::{column_resample_with, partition_to_paths, BoxSpec, PlanePartition};
use crate::{Error, Result};

/// Column dynamics in the cube `{1..L/2}³` with `+` on the three faces
/// through the origin and `-` on the others.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColdynReport {
    pub l: usize,
    /// Heat time; the column dynamics runs to `t / 2`.
    pub t: f64,
    pub replicas: u64,
    /// `Ê h_x(t/2)` for `x = 0..=L`.
    pub empirical: Vec<f64>,
    pub sigma: Vec<f64>,
    /// `u(t, x)`.
    pub analytic: Vec<f64>,
    pub max_deviation: f64,
    pub max_z: f64,
    /// Frequency of `+` at `(1, L/2, 1)` at column time `t / 2`.
    pub corner: f64,
    pub corner_sigma: f64,
    /// `(L/2)(1 - u(t, L-1))/2`.
    pub corner_bound: f64,
}

/// `h_x = (2/L) Σ_j (φ^{(j)}_x - j)` where `φ^{(j)}` is the level-`j` path
/// with `φ_0 = φ_L = j`.
pub fn height_profile(v: &PlanePartition, b: &BoxSpec) -> Result<Vec<f64>> {
    let bundle = partition_to_paths(v, b)?;
    let a1 = b.a1;
    let l = b.d_prime();
    Ok((0..=l)
        .map(|x| {
            let s: i64 = bundle.paths.iter().map(|p| (p[a1 + x] + a1 as i32) as i64 - p[0] as i64).sum();
            2.0 * s as f64 / l as f64
        })
        .collect())
}

/// Every column carries a rate-2 clock and is resampled uniformly over its
/// admissible heights.
pub fn run_columns(v: &mut PlanePartition, b: &BoxSpec, t: f64, seed: u64) {
    let cols: Vec<(usize, usize)> = (1..=b.a1).flat_map(|x| (1..=b.a2).map(move |y| (x, y))).collect();
    let mut clock = EventStream::new(seed, cols.len(), 2.0);
    loop {
        let ev = clock.next_event();
        if ev.time > t {
            break;
        }
        column_resample_with(v, b, &cols[ev.site..=ev.site], &[ev.u]);
    }
}

pub fn coldyn_profile(l: usize, t: f64, replicas: u64, seed: u64) -> Result<ColdynReport> {
    if l < 2 || l % 2 != 0 {
        return Err(Error::InvalidArgument(format!("L must be even, got {l}")));
    }
    if replicas == 0 {
        return Err(Error::InvalidArgument("at least one replica is required".into()));
    }
    let a = l / 2;
    let b = BoxSpec::full(a, a, a as i32)?;
    let runs: Vec<(Vec<f64>, bool)> = map_replicas(replicas, |r| {
        let mut v = PlanePartition::constant(a, a, 0);
        run_columns(&mut v, &b, t / 2.0, derive_seed(seed, r));
        (height_profile(&v, &b).expect("dynamics keeps the partition valid"), v.get(1, a) >= 1)
    });
    let heat = heat_solve(l, t)?;
    let mut empirical = Vec::with_capacity(l + 1);
    let mut sigma = Vec::with_capacity(l + 1);
    for x in 0..=l {
        let xs: Vec<f64> = runs.iter().map(|(h, _)| h[x]).collect();
        let (m, se) = mean_se(&xs);
        empirical.push(m);
        sigma.push(se);
    }
    let mut max_deviation: f64 = 0.0;
    let mut max_z: f64 = 0.0;
    for x in 0..=l {
        let d = (empirical[x] - heat.u[x]).abs();
        max_deviation = max_deviation.max(d);
        let z = if sigma[x] > 0.0 {
            d / sigma[x]
        } else if d < 1e-9 {
            0.0
        } else {
            f64::INFINITY
        };
        max_z = max_z.max(z);
    }
    let hits: Vec<f64> = runs.iter().map(|(_, c)| *c as u8 as f64).collect();
    let (corner, corner_sigma) = mean_se(&hits);
    let corner_bound = a as f64 * (1.0 - heat.u[l - 1]) / 2.0;
    Ok(ColdynReport { l, t, replicas, empirical, sigma, analytic: heat.u, max_deviation, max_z, corner, corner_sigma, corner_bound })
}
