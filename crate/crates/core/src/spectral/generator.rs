use nalgebra::{DMatrix, SymmetricEigen};

use super::lanczos::smallest_eigenpair;
use super::{DENSE_LIMIT, STATE_BUDGET};
use crate::lattice::{Domain, Neighbor};
use crate::{Error, Result};

/// Enumerated configurations of a domain with their energies.
#[derive(Clone, Debug)]
pub struct StateSpace {
    pub n_sites: usize,
    pub energies: Vec<i64>,
}

impl StateSpace {
    pub fn new(dom: &Domain) -> Result<Self> {
        let n = dom.len();
        let states = 1u64.checked_shl(n as u32).unwrap_or(u64::MAX);
        if n >= 64 || states > STATE_BUDGET {
            return Err(Error::Budget { states, budget: STATE_BUDGET });
        }
        let mut bonds = Vec::new();
        let mut field = vec![0i64; n];
        for i in 0..n {
            for nb in dom.neighbors(i) {
                match nb {
                    Neighbor::Site(j) if j > i => bonds.push((i, j)),
                    Neighbor::Boundary(s) => field[i] += s as i64,
                    _ => {}
                }
            }
        }
        let energies = (0..states)
            .map(|m| {
                let s = |i: usize| if (m >> i) & 1 == 1 { 1i64 } else { -1 };
                let bond: i64 = bonds.iter().map(|&(i, j)| s(i) * s(j)).sum();
                let ext: i64 = (0..n).map(|i| s(i) * field[i]).sum();
                -bond - ext
            })
            .collect();
        Ok(StateSpace { n_sites: n, energies })
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    /// `H(σ^i) - H(σ)`.
    #[inline]
    pub fn delta(&self, m: usize, i: usize) -> i64 {
        self.energies[m ^ (1 << i)] - self.energies[m]
    }

    pub fn all_plus(&self) -> usize {
        self.len() - 1
    }
}

/// Heat-bath generator `𝓛(σ, σ^x) = 1 / (1 + e^{β ΔH})`, stored implicitly.
#[derive(Clone, Debug)]
pub struct SparseGenerator {
    pub space: StateSpace,
    pub beta: f64,
    /// `log π(σ)`.
    pub log_pi: Vec<f64>,
}

impl SparseGenerator {
    #[inline]
    pub fn rate(&self, m: usize, i: usize) -> f64 {
        1.0 / (1.0 + (self.beta * self.space.delta(m, i) as f64).exp())
    }

    pub fn diagonal(&self, m: usize) -> f64 {
        -(0..self.space.n_sites).map(|i| self.rate(m, i)).sum::<f64>()
    }

    pub fn dense(&self) -> DMatrix<f64> {
        let n = self.space.len();
        let mut a = DMatrix::zeros(n, n);
        for m in 0..n {
            for i in 0..self.space.n_sites {
                a[(m, m ^ (1 << i))] = self.rate(m, i);
            }
            a[(m, m)] = self.diagonal(m);
        }
        a
    }

    /// Largest `|π(σ)𝓛(σ,σ') - π(σ')𝓛(σ',σ)|` relative to `π(σ)𝓛(σ,σ')`.
    pub fn detailed_balance_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for m in 0..self.space.len() {
            for i in 0..self.space.n_sites {
                let m2 = m ^ (1 << i);
                let a = self.log_pi[m] + self.rate(m, i).ln();
                let b = self.log_pi[m2] + self.rate(m2, i).ln();
                worst = worst.max((a - b).abs());
            }
        }
        worst
    }
}

pub fn build_generator(dom: &Domain, beta: f64) -> Result<SparseGenerator> {
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(Error::InvalidArgument(format!("β must be finite and non-negative, got {beta}")));
    }
    let space = StateSpace::new(dom)?;
    let logw: Vec<f64> = space.energies.iter().map(|&e| -beta * e as f64).collect();
    let max = logw.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let log_z = max + logw.iter().map(|w| (w - max).exp()).sum::<f64>().ln();
    let log_pi = logw.iter().map(|w| w - log_z).collect();
    Ok(SparseGenerator { space, beta, log_pi })
}

/// `U = √π 𝓛 / √π`; off-diagonal entries `1 / (2 cosh(β ΔH / 2))`.
#[derive(Clone, Debug)]
pub struct SymmetrizedMatrix {
    pub gen: SparseGenerator,
    diag: Vec<f64>,
}

pub fn symmetrize(gen: &SparseGenerator) -> Result<SymmetrizedMatrix> {
    if gen.log_pi.iter().any(|l| !l.is_finite()) {
        return Err(Error::NonPositiveWeight);
    }
    let diag = (0..gen.space.len()).map(|m| gen.diagonal(m)).collect();
    Ok(SymmetrizedMatrix { gen: gen.clone(), diag })
}

impl SymmetrizedMatrix {
    #[inline]
    pub fn entry(&self, m: usize, i: usize) -> f64 {
        let d = self.gen.beta * self.gen.space.delta(m, i) as f64;
        1.0 / (2.0 * (0.5 * d).cosh())
    }

    /// `U_∞` off-diagonal entry: `1/2` for equal-energy flips.
    #[inline]
    pub fn entry_inf(&self, m: usize, i: usize) -> f64 {
        if self.gen.space.delta(m, i) == 0 {
            0.5
        } else {
            0.0
        }
    }

    pub fn diagonal_inf(&self, m: usize) -> f64 {
        let s = &self.gen.space;
        -(0..s.n_sites)
            .map(|i| match s.delta(m, i) {
                0 => 0.5,
                d if d < 0 => 1.0,
                _ => 0.0,
            })
            .sum::<f64>()
    }

    pub fn dense(&self) -> DMatrix<f64> {
        let n = self.gen.space.len();
        let mut a = DMatrix::zeros(n, n);
        for m in 0..n {
            for i in 0..self.gen.space.n_sites {
                a[(m, m ^ (1 << i))] = self.entry(m, i);
            }
            a[(m, m)] = self.diag[m];
        }
        a
    }

    pub fn dense_inf(&self) -> DMatrix<f64> {
        let n = self.gen.space.len();
        let mut a = DMatrix::zeros(n, n);
        for m in 0..n {
            for i in 0..self.gen.space.n_sites {
                a[(m, m ^ (1 << i))] = self.entry_inf(m, i);
            }
            a[(m, m)] = self.diagonal_inf(m);
        }
        a
    }

    /// `y = -U x`.
    pub fn apply_neg(&self, x: &[f64], y: &mut [f64]) {
        let k = self.gen.space.n_sites;
        for m in 0..x.len() {
            let mut acc = self.diag[m] * x[m];
            for i in 0..k {
                acc += self.entry(m, i) * x[m ^ (1 << i)];
            }
            y[m] = -acc;
        }
    }

    /// Largest entry and largest absolute row sum of `R = U - U_∞`, the
    /// latter split into off-diagonal and diagonal parts.
    pub fn remainder_norms(&self) -> (f64, f64, f64) {
        let k = self.gen.space.n_sites;
        let (mut max_entry, mut max_off, mut max_row): (f64, f64, f64) = (0.0, 0.0, 0.0);
        for m in 0..self.gen.space.len() {
            let mut off = 0.0;
            for i in 0..k {
                let r = (self.entry(m, i) - self.entry_inf(m, i)).abs();
                max_entry = max_entry.max(r);
                off += r;
            }
            let d = (self.diag[m] - self.diagonal_inf(m)).abs();
            max_off = max_off.max(off);
            max_row = max_row.max(off + d);
        }
        (max_entry, max_off, max_row)
    }

    /// `√π`, normalised.
    pub fn ground_vector(&self) -> Vec<f64> {
        let v: Vec<f64> = self.gen.log_pi.iter().map(|l| (0.5 * l).exp()).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.into_iter().map(|x| x / n).collect()
    }
}

/// Second-smallest eigenvalue of `-𝓛`.
pub fn spectral_gap(dom: &Domain, beta: f64) -> Result<f64> {
    let gen = build_generator(dom, beta)?;
    let u = symmetrize(&gen)?;
    let n = gen.space.len();
    if n == 1 {
        return Ok(0.0);
    }
    if n <= DENSE_LIMIT {
        let mut ev: Vec<f64> = SymmetricEigen::new(-u.dense()).eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        return Ok(ev[1]);
    }
    let ground = u.ground_vector();
    let (lambda, _) = smallest_eigenpair(n, |x, y| u.apply_neg(x, y), &[ground], 1e-9, 17)?;
    Ok(lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::glauber::RateRule;
    use crate::lattice::{BoundaryField, Shape, SpinConfig};

    fn rect(a: i32, b: i32) -> Domain {
        Domain::new(Shape::Rect { sides: vec![a, b] }, &BoundaryField::Plus).unwrap()
    }

    #[test]
    fn one_site_generator() {
        let d = rect(1, 1);
        let g = build_generator(&d, 1.0).unwrap();
        let a = g.dense();
        assert!((a[(0, 1)] - 1.0 / (1.0 + (-8f64).exp())).abs() < 1e-15);
        assert!((a[(1, 0)] - 1.0 / (1.0 + 8f64.exp())).abs() < 1e-15);
        for beta in [0.3, 1.0, 4.0] {
            assert!((spectral_gap(&d, beta).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn energies_match_lattice() {
        let d = Domain::with_boundary_fn(Shape::Rect { sides: vec![3, 2] }, |c| if c[0] > 1 { 1 } else { -1 }).unwrap();
        let s = StateSpace::new(&d).unwrap();
        for m in 0..s.len() {
            assert_eq!(s.energies[m], SpinConfig::from_mask(&d, m as u64).energy());
        }
    }

    #[test]
    fn rows_balance_and_rates() {
        let d = rect(2, 3);
        for beta in [0.0, 0.7, 2.0] {
            let g = build_generator(&d, beta).unwrap();
            let a = g.dense();
            for r in 0..a.nrows() {
                assert!(a.row(r).sum().abs() < 1e-12);
            }
            let pi: Vec<f64> = g.log_pi.iter().map(|l| l.exp()).collect();
            let pl = nalgebra::DVector::from_vec(pi).transpose() * &a;
            assert!(pl.amax() < 1e-12);
            assert!(g.detailed_balance_error() < 1e-12);
            if beta == 0.0 {
                assert!((0..a.nrows()).all(|m| (0..6).all(|i| a[(m, m ^ (1 << i))] == 0.5)));
            }
            // rates agree with the heat-bath rule: 𝓛(σ, σ^x) = P(new spin = -σ_x)
            let rule = RateRule::Finite(beta.max(1e-300));
            for m in 0..a.nrows() {
                let sc = SpinConfig::from_mask(&d, m as u64);
                for i in 0..6 {
                    let p_plus = rule.plus_probability(sc.neighbor_sum(&d, i));
                    let p_flip = if sc.get(&d, i) > 0 { 1.0 - p_plus } else { p_plus };
                    assert!((a[(m, m ^ (1 << i))] - p_flip).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn symmetrised_spectrum_matches() {
        let d = rect(3, 3);
        let g = build_generator(&d, 2.0).unwrap();
        let u = symmetrize(&g).unwrap();
        let ud = u.dense();
        assert!((&ud - ud.transpose()).amax() < 1e-12);
        let small = rect(2, 3);
        let gs = build_generator(&small, 0.8).unwrap();
        let us = symmetrize(&gs).unwrap();
        let schur = gs.dense().eigenvalues().expect("real spectrum");
        let mut a: Vec<f64> = schur.iter().copied().collect();
        let mut b: Vec<f64> = SymmetricEigen::new(us.dense()).eigenvalues.iter().copied().collect();
        a.sort_by(|x, y| x.total_cmp(y));
        b.sort_by(|x, y| x.total_cmp(y));
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn energy_raising_entries() {
        let d = rect(3, 3);
        let beta = 3.0;
        let u = symmetrize(&build_generator(&d, beta).unwrap()).unwrap();
        let plus = u.gen.space.all_plus();
        // flipping a corner of all-plus costs ΔH = 8; find a ΔH = 4 flip instead
        let m = plus ^ 0b1;
        let i = 1;
        assert_eq!(u.gen.space.delta(m, i), 4);
        let expect = (-6f64).exp() / (1.0 + (-12f64).exp());
        assert!((u.entry(m, i) - expect).abs() < 1e-15);
        assert!(u.entry(m, i) <= (-2.0 * beta).exp());
    }

    #[test]
    fn lanczos_agrees_with_dense() {
        let d = rect(2, 5);
        for beta in [0.5, 2.0] {
            let gen = build_generator(&d, beta).unwrap();
            let u = symmetrize(&gen).unwrap();
            let mut ev: Vec<f64> = SymmetricEigen::new(-u.dense()).eigenvalues.iter().copied().collect();
            ev.sort_by(|a, b| a.total_cmp(b));
            let (l, _) = smallest_eigenpair(gen.space.len(), |x, y| u.apply_neg(x, y), &[u.ground_vector()], 1e-9, 3).unwrap();
            assert!((l - ev[1]).abs() < 1e-10, "{l} vs {}", ev[1]);
        }
    }

    #[test]
    fn budget_enforced() {
        let d = rect(5, 5);
        assert!(matches!(build_generator(&d, 1.0), Err(Error::Budget { .. })));
    }

    #[test]
    fn remainder_small_at_low_temperature() {
        for side in [2, 3] {
            let d = rect(side, side);
            let beta = 4.0 * (side as f64).ln() + 2.0;
            let u = symmetrize(&build_generator(&d, beta).unwrap()).unwrap();
            let (entry, off, row) = u.remainder_norms();
            let bound = d.len() as f64 * (-2.0 * beta).exp();
            assert!(entry <= (-2.0 * beta).exp());
            assert!(off <= bound);
            assert!(row <= bound, "side {side}: {row:e} > {bound:e}");
        }
    }

    #[test]
    fn gap_shrinks_with_side() {
        let g3 = spectral_gap(&rect(3, 3), 8.0 * 3f64.ln()).unwrap();
        let g4 = spectral_gap(&rect(4, 4), 8.0 * 4f64.ln()).unwrap();
        assert!(g4 < g3 && g4 > 0.0);
    }
}
