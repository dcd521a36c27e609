use serde::{Deserialize, Serialize};

use super::spec::DimerSpec;
use super::toeplitz::{symbol, BernoulliProfile};
use crate::stats::KahanSum;

/// `|a_0 (1 - a_0) - 2 Σ_{i=1}^{N} a_i²|`.
pub fn fourier_identity_residual(spec: &DimerSpec, cutoff: usize) -> f64 {
    let a0 = spec.pa();
    let mut s = KahanSum::default();
    for i in 1..=cutoff {
        let a = symbol(i, a0);
        s.add(a * a);
    }
    (a0 * (1.0 - a0) - 2.0 * s.value()).abs()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailReport {
    pub mean: f64,
    pub variance: f64,
    /// `P(𝒩 - E𝒩 >= Δ/4)`.
    pub exact: f64,
    /// `e^{-Δ/4} Π (q e^{1-q} + (1-q) e^{-q})`.
    pub chernoff_product: f64,
    /// `e^{-Δ/4 + Var}`.
    pub bound: f64,
}

/// Exact upper tail by convolution of the Bernoulli laws.
pub fn poisson_binomial_tail(profile: &BernoulliProfile, delta: f64) -> TailReport {
    let q = &profile.q;
    let mut pmf = vec![0.0; q.len() + 1];
    pmf[0] = 1.0;
    for (k, &p) in q.iter().enumerate() {
        for m in (1..=k + 1).rev() {
            pmf[m] = pmf[m] * (1.0 - p) + pmf[m - 1] * p;
        }
        pmf[0] *= 1.0 - p;
    }
    let mean = profile.mean();
    let threshold = mean + delta / 4.0;
    let mut tail = KahanSum::default();
    for (m, &w) in pmf.iter().enumerate() {
        if m as f64 >= threshold - 1e-12 {
            tail.add(w);
        }
    }
    let log_prod: f64 = q.iter().map(|&p| (p * (1.0 - p).exp() + (1.0 - p) * (-p).exp()).ln()).sum();
    let variance = profile.variance();
    TailReport {
        mean,
        variance,
        exact: tail.value().max(0.0),
        chernoff_product: (-delta / 4.0 + log_prod).exp(),
        bound: (-delta / 4.0 + variance).exp(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimer::toeplitz::build_a;
    use proptest::prelude::*;

    #[test]
    fn fourier_residual_decreases() {
        let half = DimerSpec::new(0.5, 0.25, 0.25).unwrap();
        let mut last = f64::INFINITY;
        for n in [1, 10, 100, 1000, 10_000] {
            let r = fourier_identity_residual(&half, n);
            assert!(r <= last);
            last = r;
        }
        // odd harmonics: 2 Σ_odd 1/(π² i²) = 1/4
        assert!(fourier_identity_residual(&half, 1_000_000) < 1e-6);
    }

    #[test]
    fn deterministic_profile_has_no_tail() {
        let p = BernoulliProfile { q: vec![0.0, 1.0, 1.0, 0.0] };
        let r = poisson_binomial_tail(&p, 0.5);
        assert_eq!(r.exact, 0.0);
    }

    #[test]
    fn single_variable_bound() {
        let q = 0.3;
        let r = poisson_binomial_tail(&BernoulliProfile { q: vec![q] }, 2.0);
        assert!((r.bound - (-0.5 + q * (1.0 - q) as f64).exp()).abs() < 1e-15);
        // 𝒩 ≥ 0.3 + 0.5 means 𝒩 = 1
        assert!((r.exact - q).abs() < 1e-15);
        assert!(r.exact <= r.chernoff_product && r.chernoff_product <= r.bound);
    }

    #[test]
    fn uniform_n20() {
        let (_, q) = build_a(20, &DimerSpec::uniform()).unwrap();
        let r = poisson_binomial_tail(&q, 8.0);
        assert!(r.exact <= r.bound);
        assert!((r.bound - (-2.0 + r.variance).exp()).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn exact_below_bounds(q in proptest::collection::vec(0.0f64..=1.0, 1..60), delta in 0.01f64..40.0) {
            let r = poisson_binomial_tail(&BernoulliProfile { q }, delta);
            prop_assert!(r.exact <= r.chernoff_product * (1.0 + 1e-12) + 1e-15);
            prop_assert!(r.chernoff_product <= r.bound * (1.0 + 1e-12));
        }
    }
}
