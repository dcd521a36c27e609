use serde::{Deserialize, Serialize};

use super::rule::RateRule;
use crate::lattice::{Domain, SpinConfig};
use crate::rng::EventStream;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub time: f64,
    pub magnetization: f64,
    /// `|M(σ)|`, the number of minus sites.
    pub interface: usize,
    pub energy: i64,
}

impl Sample {
    fn of(time: f64, sigma: &SpinConfig, dom: &Domain) -> Self {
        Sample {
            time,
            magnetization: sigma.magnetization(dom),
            interface: sigma.minus_count(),
            energy: sigma.energy(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HittingRecord {
    /// First time every spin is `+`; `None` if not reached by the horizon.
    pub tau_plus: Option<f64>,
    pub events: u64,
    pub final_hash: u64,
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub hitting: HittingRecord,
    /// Events at β = ∞ that raised the energy; always zero.
    pub energy_increases: u64,
    pub final_state: SpinConfig,
}

/// Event-driven heat-bath run up to `horizon`. Observables are sampled at
/// `0, dt, 2dt, ...` (only at 0 and `horizon` if `sample_dt <= 0`).
pub fn simulate(
    dom: &Domain,
    xi: &SpinConfig,
    rule: RateRule,
    horizon: f64,
    seed: u64,
    sample_dt: f64,
) -> Trajectory {
    let mut sigma = xi.clone();
    let table = rule.table(dom.dim());
    let shift = 2 * dom.dim() as i32;
    let mut samples = vec![Sample::of(0.0, &sigma, dom)];
    let mut next_sample = if sample_dt > 0.0 { sample_dt } else { f64::INFINITY };
    let mut tau_plus = sigma.is_all_plus().then_some(0.0);
    let mut events = 0u64;
    let mut increases = 0u64;
    let mut stream = EventStream::new(seed, dom.len(), 1.0);
    loop {
        let e = stream.next_event();
        let t_end = e.time.min(horizon);
        while next_sample <= t_end {
            samples.push(Sample::of(next_sample, &sigma, dom));
            next_sample += sample_dt;
        }
        if e.time > horizon {
            break;
        }
        events += 1;
        let s = sigma.neighbor_sum(dom, e.site);
        let new = if e.u < table[(s + shift) as usize] { 1 } else { -1 };
        if new != sigma.get(dom, e.site) {
            let before = sigma.energy();
            sigma.flip(dom, e.site);
            if rule == RateRule::Infinite && sigma.energy() > before {
                increases += 1;
            }
            debug_assert!(rule != RateRule::Infinite || sigma.energy() <= before);
            if tau_plus.is_none() && sigma.is_all_plus() {
                tau_plus = Some(e.time);
            }
        }
    }
    if samples.last().is_none_or(|s| s.time < horizon) {
        samples.push(Sample::of(horizon, &sigma, dom));
    }
    Trajectory {
        samples,
        hitting: HittingRecord { tau_plus, events, final_hash: sigma.hash64(dom) },
        energy_increases: increases,
        final_state: sigma,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BetaCompareReport {
    pub first_disagreement: Option<f64>,
    pub disagreement_fraction: f64,
    pub events: u64,
}

/// Runs the β and β = ∞ chains from `xi` on one event stream with shared
/// uniforms.
pub fn beta_compare(dom: &Domain, xi: &SpinConfig, beta: RateRule, horizon: f64, seed: u64) -> BetaCompareReport {
    let mut a = xi.clone();
    let mut b = xi.clone();
    let ta = beta.table(dom.dim());
    let tb = RateRule::Infinite.table(dom.dim());
    let shift = 2 * dom.dim() as i32;
    let mut first = None;
    let mut differing = 0usize;
    let mut events = 0;
    let mut stream = EventStream::new(seed, dom.len(), 1.0);
    loop {
        let e = stream.next_event();
        if e.time > horizon {
            break;
        }
        events += 1;
        let was = a.get(dom, e.site) != b.get(dom, e.site);
        let sa = a.neighbor_sum(dom, e.site);
        let sb = b.neighbor_sum(dom, e.site);
        a.set(dom, e.site, if e.u < ta[(sa + shift) as usize] { 1 } else { -1 });
        b.set(dom, e.site, if e.u < tb[(sb + shift) as usize] { 1 } else { -1 });
        let now = a.get(dom, e.site) != b.get(dom, e.site);
        if now && first.is_none() {
            first = Some(e.time);
        }
        if now != was {
            if now {
                differing += 1;
            } else {
                differing -= 1;
            }
        }
    }
    debug_assert_eq!(differing, a.disagreements(dom, &b));
    BetaCompareReport {
        first_disagreement: first,
        disagreement_fraction: differing as f64 / dom.len() as f64,
        events,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{BoundaryField, Shape};

    fn cube(l: i32) -> Domain {
        Domain::new(Shape::Cube { dim: 2, half_width: l }, &BoundaryField::Plus).unwrap()
    }

    #[test]
    fn plus_state_is_absorbing() {
        let d = cube(3);
        let plus = SpinConfig::uniform(&d, 1);
        let t = simulate(&d, &plus, RateRule::Infinite, 20.0, 5, 1.0);
        assert_eq!(t.hitting.tau_plus, Some(0.0));
        assert!(t.samples.iter().all(|s| s.interface == 0));
        assert_eq!(t.final_state, plus);
        assert_eq!(t.samples.len(), 21);
    }

    #[test]
    fn horizon_zero_returns_initial_state() {
        let d = cube(2);
        let m = SpinConfig::uniform(&d, -1);
        let t = simulate(&d, &m, RateRule::Infinite, 0.0, 1, 0.0);
        assert_eq!(t.final_state, m);
        assert_eq!(t.hitting.events, 0);
    }

    #[test]
    fn deterministic_and_energy_monotone() {
        let d = cube(4);
        let m = SpinConfig::uniform(&d, -1);
        let a = simulate(&d, &m, RateRule::Infinite, 30.0, 11, 0.5);
        let b = simulate(&d, &m, RateRule::Infinite, 30.0, 11, 0.5);
        assert_eq!(a.samples, b.samples);
        assert_eq!(a.hitting, b.hitting);
        assert_eq!(a.energy_increases, 0);
        assert!(a.samples.windows(2).all(|w| w[1].energy <= w[0].energy));
    }

    #[test]
    fn single_site_exponential_mean() {
        let d = Domain::new(Shape::Sites { dim: 2, sites: vec![[0, 0, 0]] }, &BoundaryField::Plus).unwrap();
        let m = SpinConfig::uniform(&d, -1);
        let taus: Vec<f64> = (0..10_000)
            .map(|k| simulate(&d, &m, RateRule::Infinite, 100.0, k, 0.0).hitting.tau_plus.unwrap())
            .collect();
        let (mean, _) = crate::stats::mean_se(&taus);
        assert!((mean - 1.0).abs() < 0.03, "{mean}");
    }

    #[test]
    fn identical_beta_never_disagrees() {
        let d = cube(3);
        let m = SpinConfig::uniform(&d, -1);
        for seed in 0..20 {
            let r = beta_compare(&d, &m, RateRule::Infinite, 50.0, seed);
            assert_eq!(r.first_disagreement, None);
        }
        let r = beta_compare(&d, &m, RateRule::Finite(0.1), 5.0, 3);
        assert!(r.first_disagreement.is_some_and(|t| t < 1.0));
        assert!(r.disagreement_fraction > 0.1);
    }
}
