use serde::{Deserialize, Serialize};

use super::heat::heat_solve;
use crate::parallel::map_replicas;
use crate::rng::{derive_seed, EventStream};
use crate::{Error, Result};

/// Exclusion process on `1..=L`; `occ[x - 1]` is site `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct SsepState {
    pub occ: Vec<bool>,
    pub time: f64,
}

impl SsepState {
    /// Sites `x ≤ L/2` occupied.
    pub fn step(l: usize) -> Self {
        SsepState { occ: (1..=l).map(|x| x <= l / 2).collect(), time: 0.0 }
    }

    pub fn particles(&self) -> usize {
        self.occ.iter().filter(|&&o| o).count()
    }

    /// Every site carries a rate-1 clock; a particle at the ringing site
    /// picks a side with probability 1/2 and jumps if that site exists and
    /// is empty.
    pub fn run_until(&mut self, t: f64, seed: u64) {
        let l = self.occ.len();
        let mut clock = EventStream::new(seed, l, 1.0);
        loop {
            let ev = clock.next_event();
            if ev.time > t {
                break;
            }
            let x = ev.site;
            if !self.occ[x] {
                continue;
            }
            let target = if ev.u < 0.5 { x.checked_sub(1) } else { Some(x + 1).filter(|&y| y < l) };
            if let Some(y) = target {
                if !self.occ[y] {
                    self.occ[x] = false;
                    self.occ[y] = true;
                }
            }
        }
        self.time = t;
    }
}

/// Site occupation frequencies against `(1 + u(t,x) - u(t,x-1)) / 2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SsepProfile {
    pub l: usize,
    pub t: f64,
    pub replicas: u64,
    /// Indexed by `x - 1`.
    pub empirical: Vec<f64>,
    pub analytic: Vec<f64>,
    pub sigma: Vec<f64>,
    /// `max_x |empirical - analytic| / sigma`, sites with zero variance
    /// counted only when they disagree.
    pub max_z: f64,
}

pub fn ssep_simulate(l: usize, t: f64, replicas: u64, seed: u64) -> Result<SsepProfile> {
    if replicas == 0 {
        return Err(Error::InvalidArgument("at least one replica is required".into()));
    }
    let heat = heat_solve(l, t)?;
    let analytic: Vec<f64> = (1..=l).map(|x| 0.5 * (1.0 + heat.u[x] - heat.u[x - 1])).collect();
    let finals = map_replicas(replicas, |r| {
        let mut s = SsepState::step(l);
        s.run_until(t, derive_seed(seed, r));
        s.occ
    });
    let n = replicas as f64;
    let mut counts = vec![0u64; l];
    for occ in &finals {
        for (c, &o) in counts.iter_mut().zip(occ) {
            *c += o as u64;
        }
    }
    let empirical: Vec<f64> = counts.iter().map(|&c| c as f64 / n).collect();
    let sigma: Vec<f64> = analytic.iter().map(|&p| (p.clamp(0.0, 1.0) * (1.0 - p.clamp(0.0, 1.0)) / n).sqrt()).collect();
    let max_z = empirical
        .iter()
        .zip(&analytic)
        .zip(&sigma)
        .map(|((e, a), s)| {
            let d = (e - a).abs();
            if *s > 0.0 {
                d / s
            } else if d < 1e-9 {
                0.0
            } else {
                f64::INFINITY
            }
        })
        .fold(0.0, f64::max);
    Ok(SsepProfile { l, t, replicas, empirical, analytic, sigma, max_z })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn time_zero_is_step() {
        let p = ssep_simulate(8, 0.0, 5, 1).unwrap();
        assert_eq!(p.empirical, vec![1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(p.analytic, p.empirical);
    }

    #[test]
    fn single_particle_two_sites() {
        // the particle hops at rate 1/2 each way: P(at site 1) = (1 + e^{-t}) / 2
        for t in [0.3, 1.0, 2.5] {
            let p = ssep_simulate(2, t, 40_000, 11).unwrap();
            let exact = 0.5 * (1.0 + (-t as f64).exp());
            assert!((p.analytic[0] - exact).abs() < 1e-12);
            let se = (exact * (1.0 - exact) / 40_000.0).sqrt();
            assert!((p.empirical[0] - exact).abs() < 4.0 * se);
        }
    }

    #[test]
    fn profile_matches_heat_gradient() {
        let p = ssep_simulate(32, 100.0, 10_000, 3).unwrap();
        assert!(p.max_z <= 4.0, "{}", p.max_z);
    }

    proptest! {
        #[test]
        fn particle_number_conserved(l in 1usize..12, t in 0.0f64..20.0, seed in any::<u64>()) {
            let l = 2 * l;
            let mut s = SsepState::step(l);
            s.run_until(t, seed);
            prop_assert_eq!(s.particles(), l / 2);
        }
    }
}
