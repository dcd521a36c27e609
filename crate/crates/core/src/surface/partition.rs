use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A box `{1..a1} x {1..a2}` of columns with heights in `[h1 - 1, h2]`,
/// squeezed between a floor and a ceiling partition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxSpec {
    pub a1: usize,
    pub a2: usize,
    pub h1: i32,
    pub h2: i32,
    floor: Vec<i32>,
    ceil: Vec<i32>,
}

/// Column heights, stored row-major with `x` as the row index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PlanePartition {
    pub a1: usize,
    pub a2: usize,
    v: Vec<i32>,
}

impl PlanePartition {
    pub fn constant(a1: usize, a2: usize, h: i32) -> Self {
        PlanePartition { a1, a2, v: vec![h; a1 * a2] }
    }

    pub fn from_grid(grid: &[Vec<i32>]) -> Result<Self> {
        let a1 = grid.len();
        let a2 = grid.first().map_or(0, Vec::len);
        if a1 == 0 || a2 == 0 || grid.iter().any(|r| r.len() != a2) {
            return Err(Error::InvalidPartition("ragged or empty grid".into()));
        }
        let p = PlanePartition { a1, a2, v: grid.concat() };
        p.check_monotone()?;
        Ok(p)
    }

    pub fn to_grid(&self) -> Vec<Vec<i32>> {
        self.v.chunks(self.a2).map(<[i32]>::to_vec).collect()
    }

    #[inline]
    pub fn idx(&self, x: usize, y: usize) -> usize {
        (x - 1) * self.a2 + (y - 1)
    }

    /// Height at column `(x, y)`, 1-based.
    #[inline]
    pub fn get(&self, x: usize, y: usize) -> i32 {
        self.v[self.idx(x, y)]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, h: i32) {
        let i = self.idx(x, y);
        self.v[i] = h;
    }

    pub fn values(&self) -> &[i32] {
        &self.v
    }

    pub fn volume(&self) -> i64 {
        self.v.iter().map(|&h| h as i64).sum()
    }

    /// Columnwise `self ≤ other`.
    pub fn le(&self, other: &PlanePartition) -> bool {
        self.v.iter().zip(&other.v).all(|(a, b)| a <= b)
    }

    fn check_monotone(&self) -> Result<()> {
        for x in 1..=self.a1 {
            for y in 1..=self.a2 {
                let h = self.get(x, y);
                if (x < self.a1 && self.get(x + 1, y) > h) || (y < self.a2 && self.get(x, y + 1) > h) {
                    return Err(Error::InvalidPartition(format!("increase after column ({x}, {y})")));
                }
            }
        }
        Ok(())
    }
}

impl BoxSpec {
    pub fn new(a1: usize, a2: usize, h1: i32, h2: i32, floor: PlanePartition, ceil: PlanePartition) -> Result<Self> {
        if a1 == 0 || a2 == 0 || h1 > h2 {
            return Err(Error::InvalidPartition("degenerate box".into()));
        }
        for p in [&floor, &ceil] {
            if p.a1 != a1 || p.a2 != a2 {
                return Err(Error::InvalidPartition("floor/ceiling shape mismatch".into()));
            }
            p.check_monotone()?;
            if p.v.iter().any(|&h| h < h1 - 1 || h > h2) {
                return Err(Error::InvalidPartition("floor/ceiling outside the height range".into()));
            }
        }
        if !floor.le(&ceil) {
            return Err(Error::InvalidPartition("floor above ceiling".into()));
        }
        Ok(BoxSpec { a1, a2, h1, h2, floor: floor.v, ceil: ceil.v })
    }

    /// The full `a1 x a2 x h` box: heights `0..=h`.
    pub fn full(a1: usize, a2: usize, h: i32) -> Result<Self> {
        Self::new(a1, a2, 1, h, PlanePartition::constant(a1, a2, 0), PlanePartition::constant(a1, a2, h))
    }

    /// `D' = a1 + a2`; paths have length `2D'`.
    pub fn d_prime(&self) -> usize {
        self.a1 + self.a2
    }

    /// Largest columnwise gap between ceiling and floor.
    pub fn height_gap(&self) -> i32 {
        self.floor.iter().zip(&self.ceil).map(|(f, c)| c - f).max().unwrap_or(0)
    }

    /// `|V⁺ \ V⁻|`.
    pub fn free_volume(&self) -> i64 {
        self.floor.iter().zip(&self.ceil).map(|(f, c)| (c - f) as i64).sum()
    }

    pub fn levels(&self) -> usize {
        (self.h2 - self.h1 + 1) as usize
    }

    pub fn floor(&self) -> PlanePartition {
        PlanePartition { a1: self.a1, a2: self.a2, v: self.floor.clone() }
    }

    pub fn ceil(&self) -> PlanePartition {
        PlanePartition { a1: self.a1, a2: self.a2, v: self.ceil.clone() }
    }

    #[inline]
    pub fn floor_at(&self, x: usize, y: usize) -> i32 {
        self.floor[(x - 1) * self.a2 + (y - 1)]
    }

    #[inline]
    pub fn ceil_at(&self, x: usize, y: usize) -> i32 {
        self.ceil[(x - 1) * self.a2 + (y - 1)]
    }

    /// Admissible heights of column `(x, y)` given its neighbours; columns
    /// outside the box read as `±∞`.
    #[inline]
    pub fn interval(&self, v: &PlanePartition, x: usize, y: usize) -> (i32, i32) {
        let mut lo = self.floor_at(x, y);
        let mut hi = self.ceil_at(x, y);
        if x < self.a1 {
            lo = lo.max(v.get(x + 1, y));
        }
        if y < self.a2 {
            lo = lo.max(v.get(x, y + 1));
        }
        if x > 1 {
            hi = hi.min(v.get(x - 1, y));
        }
        if y > 1 {
            hi = hi.min(v.get(x, y - 1));
        }
        (lo, hi)
    }

    pub fn validate(&self, v: &PlanePartition) -> Result<()> {
        if v.a1 != self.a1 || v.a2 != self.a2 {
            return Err(Error::InvalidPartition("shape mismatch".into()));
        }
        v.check_monotone()?;
        if !self.floor().le(v) || !v.le(&self.ceil()) {
            return Err(Error::InvalidPartition("outside floor/ceiling".into()));
        }
        Ok(())
    }
}

/// All partitions of the box, in lexicographic order of the row-major grid.
pub fn enumerate(b: &BoxSpec, budget: usize) -> Result<Vec<PlanePartition>> {
    fn rec(b: &BoxSpec, v: &mut PlanePartition, k: usize, out: &mut Vec<PlanePartition>, budget: usize) -> Result<()> {
        if k == b.a1 * b.a2 {
            if out.len() >= budget {
                return Err(Error::Budget { states: out.len() as u64 + 1, budget: budget as u64 });
            }
            out.push(v.clone());
            return Ok(());
        }
        let (x, y) = (k / b.a2 + 1, k % b.a2 + 1);
        let lo = b.floor_at(x, y);
        let mut hi = b.ceil_at(x, y);
        if x > 1 {
            hi = hi.min(v.get(x - 1, y));
        }
        if y > 1 {
            hi = hi.min(v.get(x, y - 1));
        }
        for h in lo..=hi {
            v.set(x, y, h);
            rec(b, v, k + 1, out, budget)?;
        }
        Ok(())
    }
    let mut out = Vec::new();
    let mut v = b.floor();
    rec(b, &mut v, 0, &mut out, budget)?;
    Ok(out)
}

/// Number of plane partitions in an `a x b x c` box.
pub fn macmahon(a: u64, b: u64, c: u64) -> f64 {
    let mut r = 1.0;
    for i in 1..=a {
        for j in 1..=b {
            for k in 1..=c {
                r *= (i + j + k - 1) as f64 / (i + j + k - 2) as f64;
            }
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_matches_product_formula() {
        for (a, b, c) in [(1, 1, 1), (2, 2, 2), (2, 3, 2), (3, 3, 3), (2, 2, 4)] {
            let bx = BoxSpec::full(a, b, c as i32).unwrap();
            let all = enumerate(&bx, 100_000).unwrap();
            assert_eq!(all.len() as f64, macmahon(a as u64, b as u64, c as u64).round());
            assert!(all.iter().all(|p| bx.validate(p).is_ok()));
        }
        assert_eq!(enumerate(&BoxSpec::full(2, 2, 2).unwrap(), 1000).unwrap().len(), 20);
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(enumerate(&BoxSpec::full(3, 3, 3).unwrap(), 100), Err(Error::Budget { .. })));
    }

    #[test]
    fn rejects_invalid() {
        assert!(PlanePartition::from_grid(&[vec![1, 2]]).is_err());
        let f = PlanePartition::constant(2, 2, 2);
        let c = PlanePartition::constant(2, 2, 1);
        assert!(BoxSpec::new(2, 2, 1, 2, f, c).is_err());
    }

    #[test]
    fn box_quantities() {
        let b = BoxSpec::full(4, 4, 3).unwrap();
        assert_eq!((b.d_prime(), b.height_gap(), b.free_volume()), (8, 3, 48));
        let v = PlanePartition::from_grid(&[vec![3, 1], vec![1, 0]]).unwrap();
        let b2 = BoxSpec::full(2, 2, 3).unwrap();
        assert_eq!(b2.interval(&v, 1, 2), (0, 3));
        assert_eq!(b2.interval(&v, 2, 1), (0, 3));
        assert_eq!(b2.interval(&v, 1, 1), (1, 3));
        assert_eq!(b2.interval(&v, 2, 2), (0, 1));
    }
}
