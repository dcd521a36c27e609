//! Hitting time of the all-plus state.
//!
//! At β = ∞ replicas run a rejection-free sampler: sites whose spin
//! disagrees with a nonzero neighbour sum flip at rate 1, sites with zero
//! neighbour sum flip at rate 1/2 and every other ring is a no-op, so only
//! effective flips are simulated. This has the same law as the rate-1
//! heat-bath dynamics.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::rule::RateRule;
use crate::lattice::{Domain, SpinConfig};
use crate::parallel::map_replicas;
use crate::rng::{derive_seed, exponential, rng_from_seed, EventStream};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TauRecord {
    pub replica: u64,
    /// `None` when censored at the horizon.
    pub tau: Option<f64>,
    pub events: u64,
    pub energy_increases: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TauPlusSample {
    pub records: Vec<TauRecord>,
}

impl TauPlusSample {
    pub fn uncensored(&self) -> Vec<f64> {
        self.records.iter().filter_map(|r| r.tau).collect()
    }

    pub fn censored(&self) -> usize {
        self.records.iter().filter(|r| r.tau.is_none()).count()
    }

    /// Sample median, treating censored values as `+∞`.
    pub fn median(&self) -> f64 {
        let mut v: Vec<f64> = self.records.iter().map(|r| r.tau.unwrap_or(f64::INFINITY)).collect();
        v.sort_by(|a, b| a.total_cmp(b));
        crate::stats::median(&v)
    }
}

/// Default flip budget `50 L^{d+1}`. In 3D the flat-facet coin flips make
/// the flip count grow faster than `L^3`.
pub fn default_horizon(dom: &Domain) -> u64 {
    let l = dom
        .scale()
        .map(|l| l.max(1) as f64)
        .unwrap_or_else(|| (dom.len() as f64).powf(1.0 / dom.dim() as f64).ceil());
    (50.0 * l.powi(dom.dim() as i32 + 1)) as u64
}

const NONE: u8 = 0;
const SURE: u8 = 1;
const COIN: u8 = 2;

struct ActiveSets {
    class: Vec<u8>,
    pos: Vec<u32>,
    sets: [Vec<u32>; 3],
}

impl ActiveSets {
    fn new(n: usize) -> Self {
        ActiveSets { class: vec![NONE; n], pos: vec![0; n], sets: [Vec::new(), Vec::new(), Vec::new()] }
    }

    fn set_class(&mut self, i: usize, c: u8) {
        let old = self.class[i];
        if old == c {
            return;
        }
        if old != NONE {
            let p = self.pos[i] as usize;
            let v = &mut self.sets[old as usize];
            let last = *v.last().unwrap();
            v.swap_remove(p);
            if last as usize != i {
                self.pos[last as usize] = p as u32;
            }
        }
        if c != NONE {
            self.pos[i] = self.sets[c as usize].len() as u32;
            self.sets[c as usize].push(i as u32);
        }
        self.class[i] = c;
    }
}

fn zero_temperature_class(sigma: &SpinConfig, dom: &Domain, i: usize) -> u8 {
    let s = sigma.neighbor_sum(dom, i);
    if s == 0 {
        COIN
    } else if s.signum() as i8 != sigma.get(dom, i) {
        SURE
    } else {
        NONE
    }
}

fn tau_zero_temperature(dom: &Domain, xi: &SpinConfig, max_events: u64, seed: u64) -> (Option<f64>, u64, u64) {
    let mut sigma = xi.clone();
    let mut sets = ActiveSets::new(dom.len());
    for i in 0..dom.len() {
        sets.set_class(i, zero_temperature_class(&sigma, dom, i));
    }
    let mut rng = rng_from_seed(seed);
    let mut t = 0.0;
    let mut events = 0;
    let mut increases = 0;
    let mut nbrs = Vec::with_capacity(6);
    while !sigma.is_all_plus() {
        let sure = sets.sets[SURE as usize].len() as f64;
        let rate = sure + 0.5 * sets.sets[COIN as usize].len() as f64;
        if rate == 0.0 || events >= max_events {
            return (None, events, increases);
        }
        t += exponential(&mut rng, rate);
        let r = rng.random::<f64>() * rate;
        let i = if r < sure {
            sets.sets[SURE as usize][r as usize]
        } else {
            let v = &sets.sets[COIN as usize];
            v[(((r - sure) * 2.0) as usize).min(v.len() - 1)]
        } as usize;
        if sigma.delta(dom, i) > 0 {
            increases += 1;
        }
        sigma.flip(dom, i);
        events += 1;
        nbrs.clear();
        let c = dom.site_cell(i) as isize;
        nbrs.push(i);
        nbrs.extend(dom.offsets().iter().filter_map(|&o| dom.site_at_cell((c + o) as usize)));
        for &j in &nbrs {
            sets.set_class(j, zero_temperature_class(&sigma, dom, j));
        }
    }
    (Some(t), events, increases)
}

fn tau_finite(dom: &Domain, xi: &SpinConfig, rule: RateRule, max_events: u64, seed: u64) -> (Option<f64>, u64) {
    let mut sigma = xi.clone();
    if sigma.is_all_plus() {
        return (Some(0.0), 0);
    }
    let table = rule.table(dom.dim());
    let shift = 2 * dom.dim() as i32;
    let mut stream = EventStream::new(seed, dom.len(), 1.0);
    let mut flips = 0;
    while flips < max_events {
        let e = stream.next_event();
        let s = sigma.neighbor_sum(dom, e.site);
        if sigma.set(dom, e.site, if e.u < table[(s + shift) as usize] { 1 } else { -1 }) {
            flips += 1;
            if sigma.is_all_plus() {
                return (Some(e.time), flips);
            }
        }
    }
    (None, max_events)
}

/// One replica from `ξ ≡ −`.
pub fn tau_plus_single(dom: &Domain, rule: RateRule, max_events: u64, seed: u64) -> TauRecord {
    let xi = SpinConfig::uniform(dom, -1);
    let (tau, events, inc) = match rule {
        RateRule::Infinite => tau_zero_temperature(dom, &xi, max_events, seed),
        RateRule::Finite(_) => {
            let (t, e) = tau_finite(dom, &xi, rule, max_events, seed);
            (t, e, 0)
        }
    };
    TauRecord { replica: 0, tau, events, energy_increases: inc }
}

/// Independent replicas of `τ₊` from `ξ ≡ −`. `horizon` is a budget of
/// spin flips, defaulting to `50 L^{d+1}`.
pub fn tau_plus(dom: &Domain, rule: RateRule, replicas: u64, horizon: Option<u64>, seed: u64) -> Result<TauPlusSample> {
    let max_events = horizon.unwrap_or_else(|| default_horizon(dom));
    let records = map_replicas(replicas, |k| TauRecord {
        replica: k,
        ..tau_plus_single(dom, rule, max_events, derive_seed(seed, k))
    });
    if !records.is_empty() && records.iter().all(|r| r.tau.is_none()) {
        return Err(Error::AllCensored);
    }
    Ok(TauPlusSample { records })
}

/// `inf{t : P̂(τ₊ > t) <= ε}` for an existing sample.
pub fn tmix_quantile_of(sample: &TauPlusSample, eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidArgument(format!("ε must lie in (0, 1), got {eps}")));
    }
    let mut v: Vec<f64> = sample.records.iter().map(|r| r.tau.unwrap_or(f64::INFINITY)).collect();
    if v.is_empty() {
        return Err(Error::InsufficientSample);
    }
    v.sort_by(|a, b| a.total_cmp(b));
    let n = v.len();
    let k = (eps * n as f64).floor() as usize;
    let q = v[n - k - 1];
    if q.is_finite() {
        Ok(q)
    } else {
        Err(Error::InsufficientSample)
    }
}

/// Empirical `(1 - ε)`-quantile of `τ₊` at β = ∞.
pub fn tmix_inf_quantile(dom: &Domain, eps: f64, replicas: u64, seed: u64) -> Result<f64> {
    let sample = match tau_plus(dom, RateRule::Infinite, replicas, None, seed) {
        Err(Error::AllCensored) => return Err(Error::InsufficientSample),
        r => r?,
    };
    tmix_quantile_of(&sample, eps)
}
