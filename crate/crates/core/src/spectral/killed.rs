use super::blocks::decompose_blocks;
use super::DENSE_LIMIT;
use crate::glauber::{heat_bath_update, RateRule};
use crate::lattice::{Domain, SpinConfig};
use crate::parallel::map_replicas;
use crate::rng::{derive_seed, EventStream};
use crate::stats::mean_se;
use crate::{Error, Result};

/// `e^{t U_∞^{(i)}}(η, η')` against the killed zero-temperature chain.
#[derive(Clone, Debug)]
pub struct KilledReport {
    pub exact: f64,
    /// Row sum of the block semigroup, `P(τ > t)`.
    pub survival: f64,
    pub estimate: f64,
    pub se: f64,
    pub z: f64,
    pub replicas: u64,
}

/// `eta` and `eta2` are state masks (bit `i` set means site `i` is `+`)
/// in the same equal-energy class.
pub fn killed_semigroup_check(dom: &Domain, eta: u64, eta2: u64, t: f64, replicas: u64, seed: u64) -> Result<KilledReport> {
    if !(t >= 0.0) {
        return Err(Error::InvalidArgument(format!("time must be non-negative, got {t}")));
    }
    let dec = decompose_blocks(dom)?;
    let (c1, c2) = (dec.class_of.get(eta as usize), dec.class_of.get(eta2 as usize));
    let class = match (c1, c2) {
        (Some(a), Some(b)) if a == b => *a as usize,
        _ => return Err(Error::InvalidArgument("states are not in one equal-energy class".into())),
    };
    let block = dec.block(class);
    if block.len() > DENSE_LIMIT {
        return Err(Error::Budget { states: block.len() as u64, budget: DENSE_LIMIT as u64 });
    }
    let sg = (block.dense() * t).exp();
    let (i, j) = (block.local_index(eta as u32).unwrap(), block.local_index(eta2 as u32).unwrap());
    let exact = sg[(i, j)];
    let survival = sg.row(i).sum();

    let start = SpinConfig::from_mask(dom, eta);
    let h0 = start.energy();
    let hits: Vec<f64> = map_replicas(replicas, |r| {
        let mut s = start.clone();
        let mut clock = EventStream::new(derive_seed(seed, r), dom.len(), 1.0);
        loop {
            let ev = clock.next_event();
            if ev.time > t {
                return if s.mask(dom) == eta2 { 1.0 } else { 0.0 };
            }
            heat_bath_update(&mut s, dom, dom.site(ev.site), ev.u, RateRule::Infinite).expect("site in domain");
            if s.energy() < h0 {
                return 0.0;
            }
        }
    });
    let (estimate, se) = mean_se(&hits);
    let z = if se > 0.0 {
        (estimate - exact) / se
    } else if (estimate - exact).abs() < 1e-12 {
        0.0
    } else {
        f64::INFINITY
    };
    Ok(KilledReport { exact, survival, estimate, se, z, replicas })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{BoundaryField, Shape};

    fn square2() -> Domain {
        Domain::new(Shape::Rect { sides: vec![2, 2] }, &BoundaryField::Plus).unwrap()
    }

    #[test]
    fn identity_at_zero() {
        let d = square2();
        let r = killed_semigroup_check(&d, 0, 0, 0.0, 10, 1).unwrap();
        assert!((r.exact - 1.0).abs() < 1e-14 && r.estimate == 1.0);
        let dec = decompose_blocks(&d).unwrap();
        let other = dec.classes[dec.class_of[0] as usize].iter().copied().find(|&m| m != 0).unwrap();
        let r = killed_semigroup_check(&d, 0, other as u64, 0.0, 10, 1).unwrap();
        assert!(r.exact.abs() < 1e-14 && r.estimate == 0.0);
    }

    #[test]
    fn all_minus_class_monte_carlo() {
        let d = square2();
        let dec = decompose_blocks(&d).unwrap();
        assert!(dec.block(dec.class_of[0] as usize).len() > 1);
        for target in dec.classes[dec.class_of[0] as usize].iter().take(3) {
            let r = killed_semigroup_check(&d, 0, *target as u64, 1.0, 100_000, 7 + *target as u64).unwrap();
            assert!(r.z.abs() <= 4.0, "{r:?}");
        }
    }

    #[test]
    fn survival_decreases() {
        let d = square2();
        let mut prev = 1.0;
        for t in [0.0, 0.5, 1.0, 2.0, 5.0, 10.0] {
            let s = killed_semigroup_check(&d, 0, 0, t, 1, 0).unwrap().survival;
            assert!(s <= prev + 1e-14 && s <= 1.0 + 1e-14);
            prev = s;
        }
    }
}
