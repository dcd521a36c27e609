use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::spec::DimerSpec;
use crate::{Error, Result};

/// `A_{ij} = a_{i-j}`, stored by its symbol `a_0..a_{n-1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToeplitzA {
    pub n: usize,
    pub a: Vec<f64>,
}

/// Success probabilities of the independent Bernoulli variables whose sum
/// has the law of `𝒩_n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BernoulliProfile {
    pub q: Vec<f64>,
}

impl BernoulliProfile {
    pub fn mean(&self) -> f64 {
        self.q.iter().sum()
    }

    pub fn variance(&self) -> f64 {
        self.q.iter().map(|q| q * (1.0 - q)).sum()
    }
}

/// `a_k = (-1)^k sin(k π p_a) / (π k)`, `a_0 = p_a`.
pub fn symbol(k: usize, pa: f64) -> f64 {
    if k == 0 {
        return pa;
    }
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    sign * (k as f64 * PI * pa).sin() / (PI * k as f64)
}

impl ToeplitzA {
    pub fn new(n: usize, spec: &DimerSpec) -> Self {
        ToeplitzA { n, a: (0..n).map(|k| symbol(k, spec.pa())).collect() }
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.a[i.abs_diff(j)])
    }
}

const EIG_TOL: f64 = 1e-9;

pub fn build_a(n: usize, spec: &DimerSpec) -> Result<(ToeplitzA, BernoulliProfile)> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let a = ToeplitzA::new(n, spec);
    let eig = SymmetricEigen::new(a.matrix());
    let mut q: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    for v in &mut q {
        if *v < -EIG_TOL || *v > 1.0 + EIG_TOL {
            return Err(Error::EigenvalueOutOfRange { value: *v });
        }
        *v = v.clamp(0.0, 1.0);
    }
    q.sort_by(|a, b| a.total_cmp(b));
    Ok((a, BernoulliProfile { q }))
}

/// `Var(𝒩_n) = Tr A - Tr A²` from the symbol, in `O(n)`.
pub fn variance_nn(n: usize, spec: &DimerSpec) -> f64 {
    let a0 = spec.pa();
    let mut s = crate::stats::KahanSum::default();
    s.add(n as f64 * a0 * (1.0 - a0));
    for i in 1..n {
        let ai = symbol(i, a0);
        s.add(-2.0 * (n - i) as f64 * ai * ai);
    }
    s.value()
}

/// `Σ q_i (1 - q_i)` from the eigenvalues.
pub fn variance_eigen(n: usize, spec: &DimerSpec) -> Result<f64> {
    Ok(build_a(n, spec)?.1.variance())
}
