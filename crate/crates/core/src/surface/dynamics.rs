use rand::Rng;
use serde::{Deserialize, Serialize};

use super::partition::{BoxSpec, PlanePartition};
use crate::rng::{exponential, rng_from_seed, SimRng};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dynamics {
    /// Rate-1 clock per column, ±1 moves.
    Local,
    /// Rate-1 global clock, fair parity coin, full resampling of one parity.
    Column,
}

/// Column parity `(x - y) mod 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(x: usize, y: usize) -> Self {
        if (x + y) % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

pub fn parity_columns(b: &BoxSpec, parity: Parity) -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for x in 1..=b.a1 {
        for y in 1..=b.a2 {
            if Parity::of(x, y) == parity {
                v.push((x, y));
            }
        }
    }
    v
}

/// Visit counts of every partition of `b` (in the order of `enumerate`)
/// under `updates` steps, recorded every `thin` steps. A `Local` step is
/// one ±1 move at a uniform column; a `Column` step resamples a uniform
/// parity class.
pub fn occupation_counts(b: &BoxSpec, dynamics: Dynamics, updates: u64, thin: u64, seed: u64) -> crate::Result<Vec<(PlanePartition, u64)>> {
    let states = super::partition::enumerate(b, 100_000)?;
    let mut counts = vec![0u64; states.len()];
    let mut rng = rng_from_seed(seed);
    let mut v = b.floor();
    for n in 1..=updates {
        match dynamics {
            Dynamics::Local => {
                let x = rng.random_range(1..=b.a1);
                let y = rng.random_range(1..=b.a2);
                let u = rng.random::<f64>();
                local_update(&mut v, b, x, y, u);
            }
            Dynamics::Column => {
                let parity = if rng.random::<bool>() { Parity::Even } else { Parity::Odd };
                column_resample(&mut v, b, parity, &mut rng);
            }
        }
        if thin > 0 && n % thin == 0 {
            counts[states.binary_search(&v).expect("state is enumerated")] += 1;
        }
    }
    Ok(states.into_iter().zip(counts).collect())
}

/// Down-move if `u < 1/2`, else up-move; blocked moves leave `v` unchanged.
/// Returns whether the column changed.
#[inline]
pub fn local_update(v: &mut PlanePartition, b: &BoxSpec, x: usize, y: usize, u: f64) -> bool {
    let (lo, hi) = b.interval(v, x, y);
    let h = v.get(x, y);
    let new = if u < 0.5 { (h - 1).max(lo) } else { (h + 1).min(hi) };
    if new != h {
        v.set(x, y, new);
        true
    } else {
        false
    }
}

/// Resample every column of `parity` with `us[k]` driving column `k` of
/// [`parity_columns`]: the new height is `lo + floor(u (hi - lo + 1))`, which
/// is monotone in `(lo, hi)`.
pub fn column_resample_with(v: &mut PlanePartition, b: &BoxSpec, cols: &[(usize, usize)], us: &[f64]) {
    for (&(x, y), &u) in cols.iter().zip(us) {
        let (lo, hi) = b.interval(v, x, y);
        let n = hi - lo + 1;
        v.set(x, y, lo + ((u * n as f64) as i32).min(n - 1));
    }
}

pub fn column_resample<R: Rng + ?Sized>(v: &mut PlanePartition, b: &BoxSpec, parity: Parity, rng: &mut R) {
    let cols = parity_columns(b, parity);
    let us: Vec<f64> = cols.iter().map(|_| rng.random::<f64>()).collect();
    column_resample_with(v, b, &cols, &us);
}

/// Two copies driven by the same randomness; `lower` starts at the floor and
/// `upper` at the ceiling unless given otherwise.
#[derive(Clone, Debug)]
pub struct CoupledPair {
    pub b: BoxSpec,
    pub lower: PlanePartition,
    pub upper: PlanePartition,
    pub time: f64,
    pub updates: u64,
    dynamics: Dynamics,
    rng: SimRng,
    cols: [Vec<(usize, usize)>; 2],
    us: Vec<f64>,
    diff: usize,
}

impl CoupledPair {
    pub fn extremal(b: &BoxSpec, dynamics: Dynamics, seed: u64) -> Self {
        Self::new(b, b.floor(), b.ceil(), dynamics, seed)
    }

    pub fn new(b: &BoxSpec, lower: PlanePartition, upper: PlanePartition, dynamics: Dynamics, seed: u64) -> Self {
        let diff = lower.values().iter().zip(upper.values()).filter(|(a, c)| a != c).count();
        CoupledPair {
            b: b.clone(),
            lower,
            upper,
            time: 0.0,
            updates: 0,
            dynamics,
            rng: rng_from_seed(seed),
            cols: [parity_columns(b, Parity::Even), parity_columns(b, Parity::Odd)],
            us: Vec::new(),
            diff,
        }
    }

    pub fn coalesced(&self) -> bool {
        self.diff == 0
    }

    pub fn ordered(&self) -> bool {
        self.lower.le(&self.upper)
    }

    /// Time of the next event without applying it.
    fn advance_clock(&mut self) -> f64 {
        let rate = match self.dynamics {
            Dynamics::Local => (self.b.a1 * self.b.a2) as f64,
            Dynamics::Column => 1.0,
        };
        self.time + exponential(&mut self.rng, rate)
    }

    /// Applies events up to `t_end`; returns `false` if stopped early by
    /// coalescence.
    pub fn run_until(&mut self, t_end: f64, stop_on_coalescence: bool) -> bool {
        loop {
            if stop_on_coalescence && self.coalesced() {
                return false;
            }
            let t = self.advance_clock();
            if t > t_end {
                // memorylessness: discarding the overshoot keeps the law
                self.time = t_end;
                return true;
            }
            self.time = t;
            self.step();
        }
    }

    fn step(&mut self) {
        self.updates += 1;
        match self.dynamics {
            Dynamics::Local => {
                let k = self.rng.random_range(0..self.b.a1 * self.b.a2);
                let (x, y) = (k / self.b.a2 + 1, k % self.b.a2 + 1);
                let u = self.rng.random::<f64>();
                let was = self.lower.get(x, y) != self.upper.get(x, y);
                local_update(&mut self.lower, &self.b, x, y, u);
                local_update(&mut self.upper, &self.b, x, y, u);
                let now = self.lower.get(x, y) != self.upper.get(x, y);
                self.diff = self.diff + now as usize - was as usize;
            }
            Dynamics::Column => {
                let p = self.rng.random::<bool>() as usize;
                let n = self.cols[p].len();
                self.us.clear();
                for _ in 0..n {
                    self.us.push(self.rng.random::<f64>());
                }
                column_resample_with(&mut self.lower, &self.b, &self.cols[p], &self.us);
                column_resample_with(&mut self.upper, &self.b, &self.cols[p], &self.us);
                self.diff = self.lower.values().iter().zip(self.upper.values()).filter(|(a, c)| a != c).count();
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplingOutcome {
    /// Coalescence time of the extremal copies; `None` if the horizon was hit.
    pub time: Option<f64>,
    pub updates: u64,
    pub order_violations: u64,
}

pub fn coupling_time(b: &BoxSpec, dynamics: Dynamics, seed: u64, horizon: f64) -> CouplingOutcome {
    let mut pair = CoupledPair::extremal(b, dynamics, seed);
    let mut violations = 0;
    while !pair.coalesced() {
        let t = pair.advance_clock();
        if t > horizon {
            return CouplingOutcome { time: None, updates: pair.updates, order_violations: violations };
        }
        pair.time = t;
        pair.step();
        if !pair.ordered() {
            violations += 1;
        }
    }
    CouplingOutcome { time: Some(pair.time), updates: pair.updates, order_violations: violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::partition::enumerate;

    #[test]
    fn clamped_moves() {
        let b = BoxSpec::full(3, 3, 3).unwrap();
        let mut flat = PlanePartition::constant(3, 3, 2);
        assert!(!local_update(&mut flat, &b, 2, 2, 0.1));
        assert!(!local_update(&mut flat, &b, 2, 2, 0.9));
        assert!(local_update(&mut flat, &b, 3, 3, 0.1));
        assert_eq!(flat.get(3, 3), 1);
        assert!(local_update(&mut flat, &b, 1, 1, 0.9));
        assert_eq!(flat.get(1, 1), 3);
    }

    #[test]
    fn single_value_interval_is_deterministic() {
        let floor = PlanePartition::from_grid(&[vec![2, 1], vec![1, 1]]).unwrap();
        let b = BoxSpec::new(2, 2, 1, 2, floor.clone(), floor.clone()).unwrap();
        let mut v = floor.clone();
        let mut rng = rng_from_seed(1);
        column_resample(&mut v, &b, Parity::Even, &mut rng);
        column_resample(&mut v, &b, Parity::Odd, &mut rng);
        assert_eq!(v, floor);
        let o = coupling_time(&b, Dynamics::Column, 1, 10.0);
        assert_eq!(o.time, Some(0.0));
    }

    #[test]
    fn resampling_preserves_validity_and_order() {
        let b = BoxSpec::full(3, 4, 3).unwrap();
        let mut pair = CoupledPair::extremal(&b, Dynamics::Column, 3);
        for k in 1..200 {
            pair.run_until(k as f64, false);
            assert!(b.validate(&pair.lower).is_ok() && b.validate(&pair.upper).is_ok());
            assert!(pair.ordered());
        }
        let mut pair = CoupledPair::extremal(&b, Dynamics::Local, 3);
        for k in 1..200 {
            pair.run_until(k as f64 * 0.1, false);
            assert!(b.validate(&pair.lower).is_ok() && b.validate(&pair.upper).is_ok());
            assert!(pair.ordered());
        }
    }

    #[test]
    fn coupled_from_any_ordered_pair_stays_ordered() {
        let b = BoxSpec::full(2, 2, 2).unwrap();
        let all = enumerate(&b, 100).unwrap();
        for (i, lo) in all.iter().enumerate() {
            for hi in all.iter().filter(|h| lo.le(h)) {
                for dynamics in [Dynamics::Local, Dynamics::Column] {
                    let mut p = CoupledPair::new(&b, lo.clone(), hi.clone(), dynamics, i as u64);
                    for k in 1..30 {
                        p.run_until(k as f64 * 0.3, false);
                        assert!(p.ordered());
                    }
                }
            }
        }
    }

    #[test]
    fn small_box_coalesces() {
        let b = BoxSpec::full(2, 2, 2).unwrap();
        for seed in 0..50 {
            for d in [Dynamics::Local, Dynamics::Column] {
                let o = coupling_time(&b, d, seed, 1e4);
                assert!(o.time.is_some());
                assert_eq!(o.order_violations, 0);
            }
        }
    }
}
