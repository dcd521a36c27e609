//! Seeding and the merged Poisson event stream.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// One round of the splitmix64 finaliser.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for replica `index` of a run with master seed `master`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index.wrapping_mul(GOLDEN).wrapping_add(1)))
}

pub fn rng_from_seed(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform variate in the open interval (0, 1]; safe to pass to `ln`.
#[inline]
pub fn open_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    1.0 - rng.random::<f64>()
}

#[inline]
pub fn exponential<R: Rng + ?Sized>(rng: &mut R, rate: f64) -> f64 {
    -open_unit(rng).ln() / rate
}

/// A clock event: time, site index and the uniform variate driving the update.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Event {
    pub time: f64,
    pub site: usize,
    pub u: f64,
}

/// Superposition of `sites` independent Poisson clocks of rate `rate`,
/// realised as one exponential clock of rate `sites * rate` with a uniform
/// site choice.
#[derive(Clone, Debug)]
pub struct EventStream {
    rng: SimRng,
    time: f64,
    sites: usize,
    total_rate: f64,
}

impl EventStream {
    pub fn new(seed: u64, sites: usize, rate: f64) -> Self {
        Self {
            rng: rng_from_seed(seed),
            time: 0.0,
            sites,
            total_rate: sites as f64 * rate,
        }
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn next_event(&mut self) -> Event {
        self.time += exponential(&mut self.rng, self.total_rate);
        let site = self.rng.random_range(0..self.sites);
        let u = self.rng.random::<f64>();
        Event { time: self.time, site, u }
    }
}

impl Iterator for EventStream {
    type Item = Event;

    fn next(&mut self) -> Option<Event> {
        if self.sites == 0 {
            return None;
        }
        Some(self.next_event())
    }
}
