//! Monotone-set dynamics versus zero-temperature Ising dynamics on
//! `Λ = V⁺ \ V⁻`, with minus boundary on `V⁻` and on every point with a
//! non-positive coordinate and plus boundary elsewhere.

use serde::{Deserialize, Serialize};

use super::partition::{BoxSpec, PlanePartition};
use crate::glauber::RateRule;
use crate::lattice::{Coord, Domain, Shape, SpinConfig};
use crate::rng::EventStream;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingReport {
    pub sites: usize,
    pub events: u64,
    pub mismatches: u64,
    /// Visits per partition, in the order of `enumerate`, sampled every
    /// `thin` events.
    pub occupation: Vec<(PlanePartition, u64)>,
}

pub fn embedding_domain(b: &BoxSpec) -> Result<Domain> {
    let mut sites = Vec::new();
    for x in 1..=b.a1 {
        for y in 1..=b.a2 {
            for z in b.floor_at(x, y) + 1..=b.ceil_at(x, y) {
                sites.push([x as i32, y as i32, z]);
            }
        }
    }
    if sites.is_empty() {
        return Err(Error::EmptyDomain);
    }
    let floor = b.floor();
    Domain::with_boundary_fn(Shape::Sites { dim: 3, sites }, |c: Coord| {
        if c.iter().any(|&k| k <= 0) {
            return -1;
        }
        let (x, y) = (c[0] as usize, c[1] as usize);
        if x <= b.a1 && y <= b.a2 && c[2] <= floor.get(x, y) {
            -1
        } else {
            1
        }
    })
}

fn as_spins(v: &PlanePartition, dom: &Domain) -> SpinConfig {
    SpinConfig::from_fn(dom, |c| if c[2] <= v.get(c[0] as usize, c[1] as usize) { -1 } else { 1 })
}

/// Monotone-set move at cube `z`: remove it if it is a removable top and
/// `u < 1/2`, add it if it is addable and `u >= 1/2`.
pub fn monotone_set_update(v: &mut PlanePartition, b: &BoxSpec, z: Coord, u: f64) {
    let (x, y, k) = (z[0] as usize, z[1] as usize, z[2]);
    let h = v.get(x, y);
    let (lo, hi) = b.interval(v, x, y);
    if k == h && lo < h && u < 0.5 {
        v.set(x, y, h - 1);
    } else if k == h + 1 && h < hi && u >= 0.5 {
        v.set(x, y, h + 1);
    }
}

/// Runs both dynamics from `v0` on one event stream for `events` rings and
/// compares `M_t = {σ = -}` with the partition after every event.
pub fn embedding_check(b: &BoxSpec, v0: &PlanePartition, events: u64, seed: u64, thin: u64) -> Result<EmbeddingReport> {
    b.validate(v0)?;
    let dom = embedding_domain(b)?;
    let states = super::partition::enumerate(b, 100_000)?;
    let mut counts = vec![0u64; states.len()];
    let mut sigma = as_spins(v0, &dom);
    let mut v = v0.clone();
    let rule = RateRule::Infinite;
    let mut mismatches = 0;
    let mut stream = EventStream::new(seed, dom.len(), 1.0);
    for n in 1..=events {
        let e = stream.next_event();
        let s = sigma.neighbor_sum(&dom, e.site);
        sigma.set(&dom, e.site, rule.new_spin(s, e.u));
        monotone_set_update(&mut v, b, dom.site(e.site), e.u);
        if sigma != as_spins(&v, &dom) {
            mismatches += 1;
            sigma = as_spins(&v, &dom);
        }
        if thin > 0 && n % thin == 0 {
            let k = states.binary_search(&v).expect("state is enumerated");
            counts[k] += 1;
        }
    }
    Ok(EmbeddingReport { sites: dom.len(), events, mismatches, occupation: states.into_iter().zip(counts).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_box_is_two_state_chain() {
        let b = BoxSpec::full(1, 1, 1).unwrap();
        let r = embedding_check(&b, &b.floor(), 2000, 1, 1).unwrap();
        assert_eq!(r.sites, 1);
        assert_eq!(r.mismatches, 0);
        assert_eq!(r.occupation.len(), 2);
    }

    #[test]
    fn traces_agree_on_small_boxes() {
        for (a1, a2, h) in [(2, 2, 2), (2, 3, 2), (3, 2, 3)] {
            let b = BoxSpec::full(a1, a2, h).unwrap();
            let r = embedding_check(&b, &b.ceil(), 10_000, 7, 0).unwrap();
            assert_eq!(r.mismatches, 0);
        }
    }
}
