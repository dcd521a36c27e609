use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Slope `(p_a, p_b, p_c)` with edge weights from the triangle of perimeter
/// one whose angles are `π p_i`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimerSpec {
    pub p: [f64; 3],
    pub k: [f64; 3],
}

impl DimerSpec {
    pub fn new(pa: f64, pb: f64, pc: f64) -> Result<Self> {
        let p = [pa, pb, pc];
        if p.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
            return Err(Error::InvalidDimerSpec(format!("probabilities must be positive: {p:?}")));
        }
        if ((pa + pb + pc) - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidDimerSpec(format!("probabilities sum to {}", pa + pb + pc)));
        }
        let s: Vec<f64> = p.iter().map(|x| (PI * x).sin()).collect();
        let total: f64 = s.iter().sum();
        Ok(DimerSpec { p, k: [s[0] / total, s[1] / total, s[2] / total] })
    }

    pub fn uniform() -> Self {
        Self::new(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0).expect("valid")
    }

    pub fn pa(&self) -> f64 {
        self.p[0]
    }

    pub fn ka(&self) -> f64 {
        self.k[0]
    }

    pub fn kb(&self) -> f64 {
        self.k[1]
    }

    pub fn kc(&self) -> f64 {
        self.k[2]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_form_unit_triangle() {
        for p in [[0.5, 0.25, 0.25], [0.1, 0.3, 0.6], [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]] {
            let s = DimerSpec::new(p[0], p[1], p[2]).unwrap();
            assert!((s.k.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            // law of cosines: angle opposite side k_b is π p_b
            let cos_b = (s.ka().powi(2) + s.kc().powi(2) - s.kb().powi(2)) / (2.0 * s.ka() * s.kc());
            assert!((cos_b - (PI * p[1]).cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_degenerate() {
        assert!(DimerSpec::new(0.0, 0.5, 0.5).is_err());
        assert!(DimerSpec::new(0.2, 0.2, 0.2).is_err());
        assert!(DimerSpec::new(-0.1, 0.6, 0.5).is_err());
    }
}
