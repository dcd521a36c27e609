use serde::{Deserialize, Serialize};

use crate::lattice::{Coord, Domain, SpinConfig};
use crate::{Error, Result};

/// Inverse temperature.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum RateRule {
    Finite(f64),
    Infinite,
}

impl RateRule {
    pub fn from_beta(beta: Option<f64>) -> Result<Self> {
        match beta {
            None => Ok(RateRule::Infinite),
            Some(b) if b.is_infinite() && b > 0.0 => Ok(RateRule::Infinite),
            Some(b) if b > 0.0 => Ok(RateRule::Finite(b)),
            Some(b) => Err(Error::InvalidArgument(format!("β must be positive, got {b}"))),
        }
    }

    /// `π_{x,σ}(+1)` given the neighbour sum `s`.
    #[inline]
    pub fn plus_probability(&self, s: i32) -> f64 {
        match *self {
            RateRule::Infinite => match s.signum() {
                1 => 1.0,
                -1 => 0.0,
                _ => 0.5,
            },
            RateRule::Finite(beta) => 1.0 / (1.0 + (-2.0 * beta * s as f64).exp()),
        }
    }

    /// New spin for uniform `u`: `+1` iff `u < π(+1)`.
    #[inline]
    pub fn new_spin(&self, s: i32, u: f64) -> i8 {
        if u < self.plus_probability(s) {
            1
        } else {
            -1
        }
    }

    /// Lookup table of `π(+1)` indexed by `s + 2d`.
    pub fn table(&self, dim: usize) -> Vec<f64> {
        let m = 2 * dim as i32;
        (-m..=m).map(|s| self.plus_probability(s)).collect()
    }
}

/// Heat-bath update of site `x`, in place. Returns whether the spin changed.
pub fn heat_bath_update(sigma: &mut SpinConfig, dom: &Domain, x: Coord, u: f64, rule: RateRule) -> Result<bool> {
    let i = dom.index_of(x).ok_or(Error::SiteOutOfDomain(x))?;
    let s = sigma.neighbor_sum(dom, i);
    Ok(sigma.set(dom, i, rule.new_spin(s, u)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{BoundaryField, Shape};

    #[test]
    fn zero_temperature_rule() {
        let r = RateRule::Infinite;
        for u in [0.0, 0.3, 0.7, 0.999] {
            assert_eq!(r.new_spin(3, u), 1);
            assert_eq!(r.new_spin(-1, u), -1);
        }
        assert_eq!(r.new_spin(0, 0.7), -1);
        assert_eq!(r.new_spin(0, 0.3), 1);
        assert_eq!(r.new_spin(0, 0.5), -1);
    }

    #[test]
    fn finite_beta_probability() {
        let r = RateRule::Finite(3f64.ln() / 2.0);
        assert!((r.plus_probability(2) - 0.9).abs() < 1e-15);
        let p = |s: i32| {
            let b = 3f64.ln() / 2.0;
            (b * s as f64).exp() / ((b * s as f64).exp() + (-b * s as f64).exp())
        };
        for s in -4..=4 {
            assert!((r.plus_probability(s) - p(s)).abs() < 1e-15);
        }
    }

    #[test]
    fn update_rejects_outside_site() {
        let d = Domain::new(Shape::Rect { sides: vec![2, 2] }, &BoundaryField::Plus).unwrap();
        let mut s = SpinConfig::uniform(&d, -1);
        assert!(heat_bath_update(&mut s, &d, [9, 9, 0], 0.1, RateRule::Infinite).is_err());
        // corner of all-minus 2x2 with plus b.c. has S = 0
        assert!(heat_bath_update(&mut s, &d, [1, 1, 0], 0.1, RateRule::Infinite).unwrap());
        assert_eq!(s.energy(), 4);
    }

    #[test]
    fn rule_is_monotone_in_neighbours() {
        for rule in [RateRule::Infinite, RateRule::Finite(0.4), RateRule::Finite(3.0)] {
            for s in -6..6 {
                for k in 0..100 {
                    let u = k as f64 / 100.0;
                    assert!(rule.new_spin(s, u) <= rule.new_spin(s + 2, u));
                }
            }
        }
    }
}
