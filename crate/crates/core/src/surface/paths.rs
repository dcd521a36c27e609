//! Level-line representation of a plane partition.
//!
//! Level `j` of `v` is the Young diagram `{(x, y) : v(x, y) >= j}`. Its
//! outer staircase runs from `(a1, 0)` to `(0, a2)` by unit north or west
//! steps; along it `s = X + Y` changes by ±1 and the core of path `j` is
//! `j - s`. Prepending `a1` forced down-steps from `j` and appending `a2`
//! forced up-steps back to `j` gives a path of length `2D'` with
//! `φ_0 = φ_{2D'} = j`. Column `(x, y)` affects position `2 a1 - (x - y)`,
//! so position parity equals column parity.

use serde::{Deserialize, Serialize};

use super::partition::{BoxSpec, PlanePartition};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticePathBundle {
    pub h1: i32,
    pub h2: i32,
    /// `paths[j - h1][x]` for `x = 0..=2D'`.
    pub paths: Vec<Vec<i32>>,
}

impl LatticePathBundle {
    pub fn len(&self) -> usize {
        self.paths.first().map_or(0, |p| p.len() - 1)
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    /// `Σ_j φ^{(j)}_x`.
    pub fn column_sum(&self, x: usize) -> i64 {
        self.paths.iter().map(|p| p[x] as i64).sum()
    }

    /// Pointwise `self ≤ other`.
    pub fn le(&self, other: &LatticePathBundle) -> bool {
        self.paths.iter().zip(&other.paths).all(|(a, b)| a.iter().zip(b).all(|(x, y)| x <= y))
    }
}

/// Position of column `(x, y)` along a padded path.
pub fn column_position(b: &BoxSpec, x: usize, y: usize) -> usize {
    (2 * b.a1 as i64 - (x as i64 - y as i64)) as usize
}

fn level_path(v: &PlanePartition, b: &BoxSpec, j: i32) -> Vec<i32> {
    let (a1, a2) = (b.a1, b.a2);
    let mut p = Vec::with_capacity(2 * (a1 + a2) + 1);
    for k in 0..a1 {
        p.push(j - k as i32);
    }
    let (mut x, mut y) = (a1, 0usize);
    p.push(j - (x + y) as i32);
    while (x, y) != (0, a2) {
        let north = y < a2 && (x == 0 || v.get(x, y + 1) >= j);
        if north {
            y += 1;
        } else {
            x -= 1;
        }
        p.push(j - (x + y) as i32);
    }
    for k in (0..a2).rev() {
        p.push(j - k as i32);
    }
    p
}

pub fn partition_to_paths(v: &PlanePartition, b: &BoxSpec) -> Result<LatticePathBundle> {
    b.validate(v)?;
    Ok(LatticePathBundle { h1: b.h1, h2: b.h2, paths: (b.h1..=b.h2).map(|j| level_path(v, b, j)).collect() })
}

pub fn paths_to_partition(phi: &LatticePathBundle, b: &BoxSpec) -> Result<PlanePartition> {
    let (a1, a2) = (b.a1, b.a2);
    let len = 2 * (a1 + a2);
    if phi.h1 != b.h1 || phi.h2 != b.h2 || phi.paths.len() != b.levels() {
        return Err(Error::InvalidPaths("level range does not match the box".into()));
    }
    let mut widths = vec![vec![0usize; a2 + 1]; phi.paths.len()];
    for (k, p) in phi.paths.iter().enumerate() {
        let j = b.h1 + k as i32;
        if p.len() != len + 1 {
            return Err(Error::InvalidPaths(format!("path {j} has length {}", p.len() - 1)));
        }
        for i in 0..a1 {
            if p[i] != j - i as i32 {
                return Err(Error::InvalidPaths(format!("path {j} leaves the forced prefix")));
            }
        }
        for i in 0..a2 {
            if p[len - i] != j - i as i32 {
                return Err(Error::InvalidPaths(format!("path {j} leaves the forced suffix")));
            }
        }
        let (mut x, mut y) = (a1, 0usize);
        for i in a1..a1 + a1 + a2 {
            match p[i + 1] - p[i] {
                -1 => {
                    if y == a2 {
                        return Err(Error::InvalidPaths(format!("path {j} exits the box")));
                    }
                    y += 1;
                    widths[k][y] = x;
                }
                1 => {
                    if x == 0 {
                        return Err(Error::InvalidPaths(format!("path {j} exits the box")));
                    }
                    x -= 1;
                }
                _ => return Err(Error::InvalidPaths(format!("path {j} has a non-unit step"))),
            }
        }
    }
    for k in 1..phi.paths.len() {
        if phi.paths[k].iter().zip(&phi.paths[k - 1]).any(|(hi, lo)| hi <= lo) {
            return Err(Error::InvalidPaths("paths are not strictly ordered".into()));
        }
    }
    let mut v = PlanePartition::constant(a1, a2, b.h1 - 1);
    for x in 1..=a1 {
        for y in 1..=a2 {
            let n = widths.iter().filter(|w| x <= w[y]).count() as i32;
            v.set(x, y, b.h1 - 1 + n);
        }
    }
    b.validate(&v).map_err(|e| Error::InvalidPaths(e.to_string()))?;
    Ok(v)
}
