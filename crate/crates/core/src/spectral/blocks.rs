use nalgebra::{DMatrix, SymmetricEigen};

use super::generator::StateSpace;
use super::lanczos::smallest_eigenpair;
use super::DENSE_LIMIT;
use crate::lattice::Domain;
use crate::{Error, Result};

/// Connected classes of states under equal-energy flips.
#[derive(Clone, Debug)]
pub struct BlockDecomposition {
    pub space: StateSpace,
    /// Class index of every state.
    pub class_of: Vec<u32>,
    /// States of each class in increasing order; classes ordered by their
    /// smallest state.
    pub classes: Vec<Vec<u32>>,
}

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        let p = parent[parent[x as usize] as usize];
        parent[x as usize] = p;
        x = p;
    }
    x
}

pub fn decompose_blocks(dom: &Domain) -> Result<BlockDecomposition> {
    let space = StateSpace::new(dom)?;
    let n = space.len();
    let mut parent: Vec<u32> = (0..n as u32).collect();
    for m in 0..n {
        for i in 0..space.n_sites {
            let m2 = m ^ (1 << i);
            if m2 > m && space.energies[m] == space.energies[m2] {
                let (a, b) = (find(&mut parent, m as u32), find(&mut parent, m2 as u32));
                if a != b {
                    parent[a.max(b) as usize] = a.min(b);
                }
            }
        }
    }
    let mut class_of = vec![u32::MAX; n];
    let mut classes: Vec<Vec<u32>> = Vec::new();
    let mut root_class = vec![u32::MAX; n];
    for m in 0..n {
        let r = find(&mut parent, m as u32) as usize;
        if root_class[r] == u32::MAX {
            root_class[r] = classes.len() as u32;
            classes.push(Vec::new());
        }
        class_of[m] = root_class[r];
        classes[root_class[r] as usize].push(m as u32);
    }
    Ok(BlockDecomposition { space, class_of, classes })
}

impl BlockDecomposition {
    pub fn block(&self, class: usize) -> GeneratorBlock<'_> {
        GeneratorBlock { dec: self, class }
    }

    pub fn plus_class(&self) -> usize {
        self.class_of[self.space.all_plus()] as usize
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

/// Restriction of `U_∞` to one class.
#[derive(Clone, Copy, Debug)]
pub struct GeneratorBlock<'a> {
    dec: &'a BlockDecomposition,
    pub class: usize,
}

impl GeneratorBlock<'_> {
    pub fn states(&self) -> &[u32] {
        &self.dec.classes[self.class]
    }

    pub fn len(&self) -> usize {
        self.states().len()
    }

    pub fn is_empty(&self) -> bool {
        self.states().is_empty()
    }

    pub fn energy(&self) -> i64 {
        self.dec.space.energies[self.states()[0] as usize]
    }

    pub fn local_index(&self, state: u32) -> Option<usize> {
        self.states().binary_search(&state).ok()
    }

    fn diagonal(&self, m: usize) -> f64 {
        let s = &self.dec.space;
        -(0..s.n_sites)
            .map(|i| match s.delta(m, i) {
                0 => 0.5,
                d if d < 0 => 1.0,
                _ => 0.0,
            })
            .sum::<f64>()
    }

    pub fn dense(&self) -> DMatrix<f64> {
        let st = self.states();
        let s = &self.dec.space;
        let mut a = DMatrix::zeros(st.len(), st.len());
        for (k, &m) in st.iter().enumerate() {
            let m = m as usize;
            a[(k, k)] = self.diagonal(m);
            for i in 0..s.n_sites {
                if s.delta(m, i) == 0 {
                    let j = self.local_index((m ^ (1 << i)) as u32).expect("class closed under equal-energy flips");
                    a[(k, j)] = 0.5;
                }
            }
        }
        a
    }

    fn apply_neg(&self, nbrs: &[Vec<u32>], diag: &[f64], x: &[f64], y: &mut [f64]) {
        for k in 0..x.len() {
            let acc = diag[k] * x[k] + 0.5 * nbrs[k].iter().map(|&j| x[j as usize]).sum::<f64>();
            y[k] = -acc;
        }
    }
}

/// Lowest eigenvalue `λ_i` of `-U_∞` on a block with its Perron vector.
#[derive(Clone, Debug)]
pub struct PrincipalEigen {
    pub lambda: f64,
    pub vector: Vec<f64>,
    /// Distance to the next eigenvalue, when computed.
    pub separation: Option<f64>,
    pub min_component: f64,
}

pub fn principal_eigen(block: &GeneratorBlock<'_>) -> Result<PrincipalEigen> {
    principal_eigen_with(block, DENSE_LIMIT)
}

fn principal_eigen_with(block: &GeneratorBlock<'_>, dense_limit: usize) -> Result<PrincipalEigen> {
    let n = block.len();
    let (lambda, mut vector, separation) = if n <= dense_limit {
        let eig = SymmetricEigen::new(-block.dense());
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let v = eig.eigenvectors.column(order[0]).iter().copied().collect();
        let sep = (n > 1).then(|| eig.eigenvalues[order[1]] - eig.eigenvalues[order[0]]);
        (eig.eigenvalues[order[0]], v, sep)
    } else {
        let s = &block.dec.space;
        let st = block.states();
        let nbrs: Vec<Vec<u32>> = st
            .iter()
            .map(|&m| {
                (0..s.n_sites)
                    .filter(|&i| s.delta(m as usize, i) == 0)
                    .map(|i| block.local_index(m ^ (1 << i)).expect("closed class") as u32)
                    .collect()
            })
            .collect();
        let diag: Vec<f64> = st.iter().map(|&m| block.diagonal(m as usize)).collect();
        let (l0, v0) = smallest_eigenpair(n, |x, y| block.apply_neg(&nbrs, &diag, x, y), &[], 1e-10, 5)?;
        let (l1, _) = smallest_eigenpair(n, |x, y| block.apply_neg(&nbrs, &diag, x, y), &[v0.clone()], 1e-8, 6)?;
        (l0, v0, Some(l1 - l0))
    };
    if vector.iter().sum::<f64>() < 0.0 {
        vector.iter_mut().for_each(|x| *x = -*x);
    }
    let min_component = vector.iter().copied().fold(f64::INFINITY, f64::min);
    if !lambda.is_finite() {
        return Err(Error::Eigensolver("non-finite eigenvalue".into()));
    }
    Ok(PrincipalEigen { lambda, vector, separation, min_component })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{BoundaryField, Shape};
    use crate::spectral::generator::{build_generator, symmetrize};

    fn rect(a: i32, b: i32) -> Domain {
        Domain::new(Shape::Rect { sides: vec![a, b] }, &BoundaryField::Plus).unwrap()
    }

    #[test]
    fn blocks_partition_u_inf() {
        let d = rect(3, 3);
        let dec = decompose_blocks(&d).unwrap();
        let total: usize = dec.classes.iter().map(|c| c.len()).sum();
        assert_eq!(total, 512);
        assert_eq!(dec.block(dec.plus_class()).len(), 1);
        let u = symmetrize(&build_generator(&d, 1.0).unwrap()).unwrap();
        let full = u.dense_inf();
        // U_∞ has no entries between classes
        for m in 0..512 {
            for m2 in 0..512 {
                if dec.class_of[m] != dec.class_of[m2] {
                    assert_eq!(full[(m, m2)], 0.0);
                }
            }
        }
        // union of block spectra equals the full spectrum
        let mut all: Vec<f64> = Vec::new();
        let mut gap = f64::INFINITY;
        for c in 0..dec.len() {
            let b = dec.block(c);
            let mut ev: Vec<f64> = SymmetricEigen::new(-b.dense()).eigenvalues.iter().copied().collect();
            all.append(&mut ev);
            let p = principal_eigen(&b).unwrap();
            assert!(p.min_component > 0.0);
            if let Some(s) = p.separation {
                assert!(s > 1e-10);
            }
            if c != dec.plus_class() {
                gap = gap.min(p.lambda);
            }
        }
        let mut fullev: Vec<f64> = SymmetricEigen::new(-full).eigenvalues.iter().copied().collect();
        all.sort_by(|a, b| a.total_cmp(b));
        fullev.sort_by(|a, b| a.total_cmp(b));
        for (a, b) in all.iter().zip(&fullev) {
            assert!((a - b).abs() < 1e-10);
        }
        assert!(fullev[0].abs() < 1e-12);
        assert!((gap - fullev[1]).abs() < 1e-10);
    }

    #[test]
    fn sparse_path_matches_dense() {
        let d = Domain::new(Shape::Rect { sides: vec![3, 3] }, &BoundaryField::Minus).unwrap();
        let dec = decompose_blocks(&d).unwrap();
        let big = (0..dec.len()).max_by_key(|&c| dec.block(c).len()).unwrap();
        let b = dec.block(big);
        assert!(b.len() > 20);
        let dense = principal_eigen_with(&b, usize::MAX).unwrap();
        let sparse = principal_eigen_with(&b, 0).unwrap();
        assert!((dense.lambda - sparse.lambda).abs() < 1e-10, "{} {} {}", b.len(), dense.lambda, sparse.lambda);
        assert!((dense.separation.unwrap() - sparse.separation.unwrap()).abs() < 1e-6);
        let overlap: f64 = dense.vector.iter().zip(&sparse.vector).map(|(a, b)| a * b).sum();
        assert!((overlap - 1.0).abs() < 1e-8);
    }

    #[test]
    fn two_by_two_minus_class_by_search() {
        let d = rect(2, 2);
        let dec = decompose_blocks(&d).unwrap();
        // breadth-first search over equal-energy flips from σ ≡ -
        let e = |m: usize| crate::lattice::SpinConfig::from_mask(&d, m as u64).energy();
        let mut seen = vec![false; 16];
        let mut queue = std::collections::VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(m) = queue.pop_front() {
            for i in 0..4 {
                let m2 = m ^ (1 << i);
                if !seen[m2] && e(m2) == e(m) {
                    seen[m2] = true;
                    queue.push_back(m2);
                }
            }
        }
        let class: Vec<u32> = (0..16).filter(|&m| seen[m]).map(|m| m as u32).collect();
        assert_eq!(dec.classes[dec.class_of[0] as usize], class);
        // every corner flip of σ ≡ - is energy-neutral
        assert!((0..4).all(|i| dec.space.delta(0, i) == 0));
        assert!(class.len() > 4);
    }

    #[test]
    fn strip_blocks_match_dense() {
        for bf in [BoundaryField::Plus, BoundaryField::Minus] {
            let d = Domain::new(Shape::Rect { sides: vec![1, 2] }, &bf).unwrap();
            let dec = decompose_blocks(&d).unwrap();
            let p = principal_eigen(&dec.block(dec.plus_class())).unwrap();
            if matches!(bf, BoundaryField::Plus) {
                assert_eq!(p.lambda, 0.0);
            }
            for c in 0..dec.len() {
                let b = dec.block(c);
                let ev = SymmetricEigen::new(-b.dense()).eigenvalues.min();
                assert!((principal_eigen(&b).unwrap().lambda - ev).abs() < 1e-10);
            }
        }
    }
}
