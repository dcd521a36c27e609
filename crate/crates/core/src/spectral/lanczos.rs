use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;

use crate::rng::rng_from_seed;
use crate::{Error, Result};

const KRYLOV: usize = 80;
const MAX_RESTARTS: usize = 200;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

fn project_out(w: &mut [f64], basis: &[Vec<f64>]) {
    for _ in 0..2 {
        for b in basis {
            let c = dot(w, b);
            axpy(w, -c, b);
        }
    }
}

fn normalize(w: &mut [f64]) -> f64 {
    let n = dot(w, w).sqrt();
    if n > 0.0 {
        w.iter_mut().for_each(|x| *x /= n);
    }
    n
}

/// Smallest eigenpair of a symmetric operator on the orthogonal complement
/// of `deflate` (orthonormal vectors). Restarted Lanczos with full
/// reorthogonalisation; stops when the residual norm drops below `tol`.
pub fn smallest_eigenpair<F>(n: usize, mut apply: F, deflate: &[Vec<f64>], tol: f64, seed: u64) -> Result<(f64, Vec<f64>)>
where
    F: FnMut(&[f64], &mut [f64]),
{
    if n <= deflate.len() {
        return Err(Error::Eigensolver("operator smaller than deflation space".into()));
    }
    let mut rng = rng_from_seed(seed);
    let mut v: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
    project_out(&mut v, deflate);
    normalize(&mut v);
    let m = KRYLOV.min(n - deflate.len());
    let mut w = vec![0.0; n];
    for _ in 0..MAX_RESTARTS {
        let mut basis: Vec<Vec<f64>> = vec![v.clone()];
        let mut alpha = Vec::with_capacity(m);
        let mut beta: Vec<f64> = Vec::with_capacity(m);
        for j in 0..m {
            apply(&basis[j], &mut w);
            let a = dot(&w, &basis[j]);
            alpha.push(a);
            let scale = dot(&w, &w).sqrt().max(f64::MIN_POSITIVE);
            for _ in 0..2 {
                project_out(&mut w, deflate);
                project_out(&mut w, &basis);
            }
            let b = normalize(&mut w);
            if j + 1 == m || b < 1e-10 * scale {
                break;
            }
            beta.push(b);
            basis.push(w.clone());
        }
        let k = alpha.len();
        let mut t = DMatrix::zeros(k, k);
        for i in 0..k {
            t[(i, i)] = alpha[i];
            if i + 1 < k {
                t[(i, i + 1)] = beta[i];
                t[(i + 1, i)] = beta[i];
            }
        }
        let eig = SymmetricEigen::new(t);
        let (idx, theta) = eig
            .eigenvalues
            .iter()
            .copied()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .ok_or_else(|| Error::Eigensolver("empty Krylov space".into()))?;
        let mut x = vec![0.0; n];
        for (i, b) in basis.iter().enumerate() {
            axpy(&mut x, eig.eigenvectors[(i, idx)], b);
        }
        project_out(&mut x, deflate);
        normalize(&mut x);
        apply(&x, &mut w);
        let rayleigh = dot(&x, &w);
        axpy(&mut w, -rayleigh, &x);
        project_out(&mut w, deflate);
        let res = dot(&w, &w).sqrt();
        if res < tol || (k < m && (rayleigh - theta).abs() < tol) {
            return Ok((rayleigh, x));
        }
        v = x;
    }
    Err(Error::Eigensolver("no convergence".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_laplacian() {
        // eigenvalues 2 - 2cos(kπ/(n+1))
        let n = 400;
        let lap = |x: &[f64], y: &mut [f64]| {
            for i in 0..x.len() {
                let l = if i > 0 { x[i - 1] } else { 0.0 };
                let r = if i + 1 < x.len() { x[i + 1] } else { 0.0 };
                y[i] = 2.0 * x[i] - l - r;
            }
        };
        let (l1, v1) = smallest_eigenpair(n, lap, &[], 1e-10, 1).unwrap();
        let exact = |k: f64| 2.0 - 2.0 * (k * std::f64::consts::PI / (n as f64 + 1.0)).cos();
        assert!((l1 - exact(1.0)).abs() < 1e-12);
        let (l2, _) = smallest_eigenpair(n, lap, &[v1], 1e-10, 2).unwrap();
        assert!((l2 - exact(2.0)).abs() < 1e-12);
    }
}
