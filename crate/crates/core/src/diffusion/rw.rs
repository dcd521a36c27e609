use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Depth of the artificial wall that stands in for `-∞`, in units of `L`.
pub const TRUNCATION: i64 = 8;

/// The four walk probabilities, each bounding the previous one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RwChain {
    pub l: usize,
    pub t: f64,
    /// `P₁`: on `1..=L` from `L`, `X_t ≤ L/2`.
    /// `P₂`: on `..=L` from `L`, `X_t ≤ L/2`.
    /// `P₃`: on `..=L` from `3L/4`, `X_t ≤ L/2`.
    /// `P₄`: on `ℤ` from `0`, `max_{s<t} |X_s| ≥ L/4`.
    pub p: [f64; 4],
    /// Bound on the change of `P₂`, `P₃` caused by the wall at `L - 8L`.
    pub truncation_error: f64,
    /// `2 exp(-θ L/4 + t (cosh θ - 1))`, `θ = asinh(L/(4t))`: a bound on `P₄`.
    pub chernoff: f64,
    /// `e^{-L²/(32t)}`.
    pub gaussian: f64,
    pub ordered: bool,
}

/// `log(e^{-t} t^n / n!)` for `n = 0..`, until the remaining mass is below
/// `1e-17`.
fn poisson_weights(t: f64) -> Vec<f64> {
    if t == 0.0 {
        return vec![1.0];
    }
    let mut out = Vec::new();
    let mut log_w = -t;
    let mut acc = 0.0;
    let mut n = 0usize;
    loop {
        let w = log_w.exp();
        out.push(w);
        acc += w;
        n += 1;
        if (n as f64 > t && 1.0 - acc < 1e-17) || n as f64 > t + 40.0 * t.sqrt() + 100.0 {
            break;
        }
        log_w += t.ln() - (n as f64).ln();
    }
    out
}

/// Law at time `t` of the rate-1 walk on `lo..=hi` started at `start`.
/// Jumps leaving the interval are rejected, or kill the walk if `absorb`.
fn walk_law(lo: i64, hi: i64, start: i64, t: f64, absorb: bool) -> Vec<f64> {
    let n = (hi - lo + 1) as usize;
    let mut p = vec![0.0; n];
    p[(start - lo) as usize] = 1.0;
    let mut law = vec![0.0; n];
    let mut next = vec![0.0; n];
    for w in poisson_weights(t) {
        for (a, b) in law.iter_mut().zip(&p) {
            *a += w * b;
        }
        next.iter_mut().for_each(|v| *v = 0.0);
        for i in 0..n {
            let m = 0.5 * p[i];
            if m == 0.0 {
                continue;
            }
            if i > 0 {
                next[i - 1] += m;
            } else if !absorb {
                next[i] += m;
            }
            if i + 1 < n {
                next[i + 1] += m;
            } else if !absorb {
                next[i] += m;
            }
        }
        std::mem::swap(&mut p, &mut next);
    }
    law
}

fn max_excursion_bound(a: f64, t: f64) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    let theta = (a / t).asinh();
    (-theta * a + t * (theta.cosh() - 1.0)).exp()
}

pub fn rw_tail_chain(l: usize, t: f64) -> Result<RwChain> {
    if l < 4 || l % 4 != 0 {
        return Err(Error::InvalidArgument(format!("L must be a positive multiple of 4, got {l}")));
    }
    if !(t >= 0.0) {
        return Err(Error::InvalidArgument(format!("t must be non-negative, got {t}")));
    }
    let li = l as i64;
    let half = li / 2;
    let below_half = |law: &[f64], lo: i64| -> f64 { law.iter().enumerate().filter(|(i, _)| lo + *i as i64 <= half).map(|(_, p)| p).sum() };

    let p1 = below_half(&walk_law(1, li, li, t, false), 1);
    let wall = li - TRUNCATION * li;
    let p2 = below_half(&walk_law(wall, li, li, t, false), wall);
    let p3 = below_half(&walk_law(wall, li, 3 * li / 4, t, false), wall);
    let inner = li / 4 - 1;
    let survive: f64 = walk_law(-inner, inner, 0, t, true).iter().sum();
    let p4 = (1.0 - survive).max(0.0);

    let truncation_error = max_excursion_bound((li - wall) as f64 - (li / 4) as f64, t);
    let lf = l as f64;
    let chernoff = (2.0 * max_excursion_bound(lf / 4.0, t)).min(1.0);
    let gaussian = if t > 0.0 { (-lf * lf / (32.0 * t)).exp() } else { 0.0 };
    let slack = 1e-12 + truncation_error;
    let ordered = p1 <= p2 + slack && p2 <= p3 + slack && p3 <= p4 + slack;
    Ok(RwChain { l, t, p: [p1, p2, p3, p4], truncation_error, chernoff, gaussian, ordered })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffusion::heat::heat_solve;

    #[test]
    fn poisson_mass() {
        for t in [0.5, 10.0, 300.0, 5000.0] {
            let s: f64 = poisson_weights(t).iter().sum();
            assert!((s - 1.0).abs() < 1e-12, "{t}: {s}");
        }
    }

    #[test]
    fn short_times_vanish() {
        let c = rw_tail_chain(16, 1e-3).unwrap();
        assert!(c.p.iter().all(|&p| p < 1e-12));
    }

    #[test]
    fn chain_ordered() {
        let c = rw_tail_chain(16, 64.0).unwrap();
        assert!(c.ordered, "{c:?}");
        assert!(c.p[3] <= c.chernoff);
        for l in [8, 16, 32] {
            for t in [1.0, 10.0, (l * l) as f64 / 8.0] {
                let c = rw_tail_chain(l, t).unwrap();
                assert!(c.ordered && c.p[3] <= c.chernoff, "{c:?}");
            }
        }
    }

    #[test]
    fn duality_with_heat() {
        // particle at L in the SSEP from the step ⇔ walk from L ends in the left half
        for (l, t) in [(16usize, 30.0), (32, 100.0), (24, 7.0)] {
            let c = rw_tail_chain(l, t).unwrap();
            let u = heat_solve(l, t).unwrap();
            assert!((c.p[0] - 0.5 * (1.0 - u.u[l - 1])).abs() < 1e-12);
        }
    }

    #[test]
    fn free_walk_excursion() {
        // P(max |X_s| ≥ 1) = 1 - e^{-t} for a rate-1 walk
        let law: f64 = walk_law(0, 0, 0, 0.7, true).iter().sum();
        assert!((law - (-0.7f64).exp()).abs() < 1e-14);
    }
}
