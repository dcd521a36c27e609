//! Lattice domains, boundary fields and spin configurations.
//!
//! A [`Domain`] linearises its bounding box (padded by two cells on every
//! side) row-major and tags every cell as a site, a boundary site or
//! outside. A [`SpinConfig`] stores one `i8` per padded cell: site cells
//! hold the spin, boundary cells hold the boundary field and all other
//! cells hold 0, so a neighbour sum is a plain sum over the `2d` offsets.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub type Coord = [i32; 3];

const PAD: i32 = 2;

/// Shape descriptor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Shape {
    /// `{-L, ..., L}^d`.
    Cube { dim: usize, half_width: i32 },
    /// `{1..n_1} x ... x {1..n_d}`.
    Rect { sides: Vec<i32> },
    /// `Z^d` intersected with the closed Euclidean ball of radius `r`.
    Ball { dim: usize, radius: f64 },
    /// `{x in {-L..L}^2 : |x1| + |x2| <= L + 1}`.
    Diamond { half_width: i32 },
    /// Explicit site list; in 2D the third coordinate must be 0.
    Sites { dim: usize, sites: Vec<Coord> },
}

impl Shape {
    pub fn dim(&self) -> usize {
        match self {
            Shape::Cube { dim, .. } | Shape::Ball { dim, .. } | Shape::Sites { dim, .. } => *dim,
            Shape::Rect { sides } => sides.len(),
            Shape::Diamond { .. } => 2,
        }
    }

    /// The linear size `L` for shapes that have one.
    pub fn scale(&self) -> Option<i32> {
        match self {
            Shape::Cube { half_width, .. } | Shape::Diamond { half_width } => Some(*half_width),
            _ => None,
        }
    }

    fn sites(&self) -> Result<Vec<Coord>> {
        let d = self.dim();
        if d != 2 && d != 3 {
            return Err(Error::Dimension(d));
        }
        let zr = |hi: i32| if d == 3 { hi } else { 0 };
        let mut out = Vec::new();
        match self {
            Shape::Cube { half_width: l, .. } => {
                if *l < 0 {
                    return Err(Error::InvalidDomain("negative half-width".into()));
                }
                for z in -zr(*l)..=zr(*l) {
                    for y in -l..=*l {
                        for x in -l..=*l {
                            out.push([x, y, z]);
                        }
                    }
                }
            }
            Shape::Rect { sides } => {
                if sides.iter().any(|&s| s <= 0) {
                    return Err(Error::InvalidDomain("non-positive side".into()));
                }
                let nz = if d == 3 { sides[2] } else { 1 };
                let z0 = if d == 3 { 1 } else { 0 };
                for z in z0..z0 + nz {
                    for y in 1..=sides[1] {
                        for x in 1..=sides[0] {
                            out.push([x, y, z]);
                        }
                    }
                }
            }
            Shape::Ball { radius, .. } => {
                if !(*radius >= 0.0) {
                    return Err(Error::InvalidDomain("negative radius".into()));
                }
                let r = radius.floor() as i32;
                let r2 = radius * radius;
                for z in -zr(r)..=zr(r) {
                    for y in -r..=r {
                        for x in -r..=r {
                            if ((x * x + y * y + z * z) as f64) <= r2 {
                                out.push([x, y, z]);
                            }
                        }
                    }
                }
            }
            Shape::Diamond { half_width: l } => {
                if *l < 0 {
                    return Err(Error::InvalidDomain("negative half-width".into()));
                }
                for y in -l..=*l {
                    for x in -l..=*l {
                        if x.abs() + y.abs() <= l + 1 {
                            out.push([x, y, 0]);
                        }
                    }
                }
            }
            Shape::Sites { sites, .. } => {
                if d == 2 && sites.iter().any(|s| s[2] != 0) {
                    return Err(Error::InvalidDomain("2D site with nonzero z".into()));
                }
                let mut s = sites.clone();
                s.sort_by_key(|c| (c[2], c[1], c[0]));
                s.dedup();
                out = s;
            }
        }
        if out.is_empty() {
            return Err(Error::EmptyDomain);
        }
        Ok(out)
    }
}

/// Boundary condition on `∂Λ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundaryField {
    Plus,
    Minus,
    /// Explicit values; boundary sites not listed take `default`, and the
    /// build fails if some site is unlisted and there is no default.
    Mixed {
        #[serde(default)]
        default: Option<i8>,
        values: Vec<(Coord, i8)>,
    },
}

impl BoundaryField {
    fn resolver(&self) -> Result<impl Fn(Coord) -> Option<i8> + '_> {
        if let BoundaryField::Mixed { values, default } = self {
            if values.iter().any(|(_, s)| *s != 1 && *s != -1) || default.is_some_and(|s| s != 1 && s != -1) {
                return Err(Error::InvalidDomain("boundary values must be +1 or -1".into()));
            }
        }
        Ok(move |c: Coord| match self {
            BoundaryField::Plus => Some(1),
            BoundaryField::Minus => Some(-1),
            BoundaryField::Mixed { values, default } => {
                values.iter().find(|(k, _)| *k == c).map(|(_, s)| *s).or(*default)
            }
        })
    }
}

const OUTSIDE: u8 = 0;
const SITE: u8 = 1;
const BOUNDARY: u8 = 2;

/// Neighbour of a site: another site or a boundary value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Neighbor {
    Site(usize),
    Boundary(i8),
}

#[derive(Clone, Debug)]
pub struct Domain {
    dim: usize,
    shape: Shape,
    lo: Coord,
    ext: [usize; 3],
    stride: [usize; 3],
    kind: Vec<u8>,
    cell_site: Vec<u32>,
    site_cells: Vec<usize>,
    boundary_cells: Vec<usize>,
    offsets: Vec<isize>,
    template: Vec<i8>,
}

impl Domain {
    pub fn new(shape: Shape, boundary: &BoundaryField) -> Result<Self> {
        let f = boundary.resolver()?;
        Self::build(shape, |c| f(c))
    }

    /// Build with a boundary value chosen per boundary coordinate.
    pub fn with_boundary_fn(shape: Shape, f: impl Fn(Coord) -> i8) -> Result<Self> {
        Self::build(shape, |c| Some(f(c)))
    }

    fn build(shape: Shape, f: impl Fn(Coord) -> Option<i8>) -> Result<Self> {
        let dim = shape.dim();
        let sites = shape.sites()?;
        let mut lo = [i32::MAX; 3];
        let mut hi = [i32::MIN; 3];
        for s in &sites {
            for k in 0..3 {
                lo[k] = lo[k].min(s[k]);
                hi[k] = hi[k].max(s[k]);
            }
        }
        let mut ext = [1usize; 3];
        for k in 0..dim {
            lo[k] -= PAD;
            hi[k] += PAD;
            ext[k] = (hi[k] - lo[k] + 1) as usize;
        }
        let stride = [1, ext[0], ext[0] * ext[1]];
        let total = ext[0] * ext[1] * ext[2];
        let mut offsets = Vec::with_capacity(2 * dim);
        for k in 0..dim {
            offsets.push(stride[k] as isize);
            offsets.push(-(stride[k] as isize));
        }
        let mut dom = Domain {
            dim,
            shape,
            lo,
            ext,
            stride,
            kind: vec![OUTSIDE; total],
            cell_site: vec![u32::MAX; total],
            site_cells: Vec::with_capacity(sites.len()),
            boundary_cells: Vec::new(),
            offsets,
            template: vec![0; total],
        };
        for (i, s) in sites.iter().enumerate() {
            let c = dom.cell(*s).expect("site inside padded box");
            dom.kind[c] = SITE;
            dom.cell_site[c] = i as u32;
            dom.site_cells.push(c);
        }
        for i in 0..sites.len() {
            let c = dom.site_cells[i];
            for k in 0..dom.offsets.len() {
                let n = (c as isize + dom.offsets[k]) as usize;
                if dom.kind[n] == OUTSIDE {
                    dom.kind[n] = BOUNDARY;
                    dom.boundary_cells.push(n);
                }
            }
        }
        dom.boundary_cells.sort_unstable();
        for &b in &dom.boundary_cells {
            let coord = dom.coord_of_cell(b);
            let v = f(coord).ok_or_else(|| {
                Error::InvalidDomain(format!("no boundary value for {coord:?}"))
            })?;
            if v != 1 && v != -1 {
                return Err(Error::InvalidDomain("boundary values must be +1 or -1".into()));
            }
            dom.template[b] = v;
        }
        Ok(dom)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn scale(&self) -> Option<i32> {
        self.shape.scale()
    }

    /// Number of sites `|Λ|`.
    pub fn len(&self) -> usize {
        self.site_cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.site_cells.is_empty()
    }

    pub fn boundary_len(&self) -> usize {
        self.boundary_cells.len()
    }

    pub fn cell(&self, c: Coord) -> Option<usize> {
        let mut idx = 0;
        for k in 0..3 {
            let r = c[k] - self.lo[k];
            if r < 0 || r as usize >= self.ext[k] {
                return None;
            }
            idx += r as usize * self.stride[k];
        }
        Some(idx)
    }

    pub fn coord_of_cell(&self, cell: usize) -> Coord {
        let x = cell % self.ext[0];
        let y = (cell / self.ext[0]) % self.ext[1];
        let z = cell / (self.ext[0] * self.ext[1]);
        [x as i32 + self.lo[0], y as i32 + self.lo[1], z as i32 + self.lo[2]]
    }

    pub fn site(&self, i: usize) -> Coord {
        self.coord_of_cell(self.site_cells[i])
    }

    pub fn index_of(&self, c: Coord) -> Option<usize> {
        self.cell(c).filter(|&k| self.kind[k] == SITE).map(|k| self.cell_site[k] as usize)
    }

    pub fn contains(&self, c: Coord) -> bool {
        self.index_of(c).is_some()
    }

    pub fn is_boundary(&self, c: Coord) -> bool {
        self.cell(c).is_some_and(|k| self.kind[k] == BOUNDARY)
    }

    /// Boundary sites with their field values.
    pub fn boundary(&self) -> Vec<(Coord, i8)> {
        self.boundary_cells.iter().map(|&b| (self.coord_of_cell(b), self.template[b])).collect()
    }

    pub fn boundary_value(&self, c: Coord) -> Option<i8> {
        self.cell(c).filter(|&k| self.kind[k] == BOUNDARY).map(|k| self.template[k])
    }

    pub fn site_cell(&self, i: usize) -> usize {
        self.site_cells[i]
    }

    pub fn site_at_cell(&self, cell: usize) -> Option<usize> {
        (self.kind.get(cell) == Some(&SITE)).then(|| self.cell_site[cell] as usize)
    }

    pub fn cell_is_boundary(&self, cell: usize) -> bool {
        self.kind.get(cell) == Some(&BOUNDARY)
    }

    pub fn grid_len(&self) -> usize {
        self.kind.len()
    }

    pub fn extents(&self) -> [usize; 3] {
        self.ext
    }

    pub fn strides(&self) -> [usize; 3] {
        self.stride
    }

    /// Neighbour offsets in the padded grid, `+e_k` then `-e_k` per axis.
    pub fn offsets(&self) -> &[isize] {
        &self.offsets
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = Neighbor> + '_ {
        let c = self.site_cells[i];
        self.offsets.iter().map(move |&o| {
            let n = (c as isize + o) as usize;
            match self.kind[n] {
                SITE => Neighbor::Site(self.cell_site[n] as usize),
                _ => Neighbor::Boundary(self.template[n]),
            }
        })
    }

    /// Sum of the boundary values adjacent to site `i`.
    pub fn field_sum(&self, i: usize) -> i32 {
        self.neighbors(i)
            .map(|n| match n {
                Neighbor::Boundary(s) => s as i32,
                Neighbor::Site(_) => 0,
            })
            .sum()
    }

    /// Copy of the domain with a different boundary field on the same sites.
    pub fn rebound(&self, boundary: &BoundaryField) -> Result<Self> {
        let f = boundary.resolver()?;
        let mut d = self.clone();
        for &b in &self.boundary_cells {
            let coord = self.coord_of_cell(b);
            d.template[b] =
                f(coord).ok_or_else(|| Error::InvalidDomain(format!("no boundary value for {coord:?}")))?;
        }
        Ok(d)
    }
}

/// Spin configuration on a domain, with cached energy and minus count.
#[derive(Clone, Debug)]
pub struct SpinConfig {
    grid: Vec<i8>,
    energy: i64,
    minus: usize,
    #[cfg(debug_assertions)]
    mutations: u64,
}

impl SpinConfig {
    pub fn uniform(dom: &Domain, s: i8) -> Self {
        Self::from_fn(dom, |_| s)
    }

    pub fn from_fn(dom: &Domain, f: impl Fn(Coord) -> i8) -> Self {
        let mut grid = dom.template.clone();
        for &c in &dom.site_cells {
            let s = f(dom.coord_of_cell(c));
            debug_assert!(s == 1 || s == -1);
            grid[c] = if s > 0 { 1 } else { -1 };
        }
        Self::from_grid(dom, grid)
    }

    pub fn from_spins(dom: &Domain, spins: &[i8]) -> Result<Self> {
        if spins.len() != dom.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} spins, got {}",
                dom.len(),
                spins.len()
            )));
        }
        let mut grid = dom.template.clone();
        for (i, &s) in spins.iter().enumerate() {
            if s != 1 && s != -1 {
                return Err(Error::InvalidArgument("spins must be +1 or -1".into()));
            }
            grid[dom.site_cells[i]] = s;
        }
        Ok(Self::from_grid(dom, grid))
    }

    /// Bit `i` of `mask` set means site `i` is `+`.
    pub fn from_mask(dom: &Domain, mask: u64) -> Self {
        let mut grid = dom.template.clone();
        for (i, &c) in dom.site_cells.iter().enumerate() {
            grid[c] = if (mask >> i) & 1 == 1 { 1 } else { -1 };
        }
        Self::from_grid(dom, grid)
    }

    fn from_grid(dom: &Domain, grid: Vec<i8>) -> Self {
        let energy = energy_of_grid(dom, &grid);
        let minus = dom.site_cells.iter().filter(|&&c| grid[c] < 0).count();
        SpinConfig {
            grid,
            energy,
            minus,
            #[cfg(debug_assertions)]
            mutations: 0,
        }
    }

    #[inline]
    pub fn get(&self, dom: &Domain, i: usize) -> i8 {
        self.grid[dom.site_cells[i]]
    }

    #[inline]
    pub fn at_cell(&self, cell: usize) -> i8 {
        self.grid[cell]
    }

    pub fn grid(&self) -> &[i8] {
        &self.grid
    }

    pub fn spins(&self, dom: &Domain) -> Vec<i8> {
        dom.site_cells.iter().map(|&c| self.grid[c]).collect()
    }

    pub fn mask(&self, dom: &Domain) -> u64 {
        dom.site_cells
            .iter()
            .enumerate()
            .fold(0u64, |m, (i, &c)| if self.grid[c] > 0 { m | (1 << i) } else { m })
    }

    /// Sum of the `2d` neighbour values, boundary included.
    #[inline]
    pub fn neighbor_sum(&self, dom: &Domain, i: usize) -> i32 {
        let c = dom.site_cells[i] as isize;
        dom.offsets.iter().map(|&o| self.grid[(c + o) as usize] as i32).sum()
    }

    /// `H(σ^x) - H(σ)` for site index `i`.
    #[inline]
    pub fn delta(&self, dom: &Domain, i: usize) -> i64 {
        2 * self.get(dom, i) as i64 * self.neighbor_sum(dom, i) as i64
    }

    pub fn energy(&self) -> i64 {
        self.energy
    }

    pub fn minus_count(&self) -> usize {
        self.minus
    }

    pub fn is_all_plus(&self) -> bool {
        self.minus == 0
    }

    pub fn magnetization(&self, dom: &Domain) -> f64 {
        let n = dom.len() as f64;
        (n - 2.0 * self.minus as f64) / n
    }

    #[inline]
    pub fn flip(&mut self, dom: &Domain, i: usize) {
        let d = self.delta(dom, i);
        let c = dom.site_cells[i];
        self.grid[c] = -self.grid[c];
        self.energy += d;
        if self.grid[c] < 0 {
            self.minus += 1;
        } else {
            self.minus -= 1;
        }
        #[cfg(debug_assertions)]
        {
            self.mutations += 1;
            if self.mutations % 4096 == 0 {
                debug_assert_eq!(self.energy, energy_of_grid(dom, &self.grid));
            }
        }
    }

    /// Set site `i` to `s`; returns whether the spin changed.
    #[inline]
    pub fn set(&mut self, dom: &Domain, i: usize, s: i8) -> bool {
        if self.get(dom, i) != s {
            self.flip(dom, i);
            true
        } else {
            false
        }
    }

    /// Replace the boundary layer with that of `other_dom` (same sites).
    pub fn with_boundary_of(&self, dom: &Domain, other_dom: &Domain) -> Self {
        let mut grid = other_dom.template.clone();
        for &c in &dom.site_cells {
            grid[c] = self.grid[c];
        }
        Self::from_grid(other_dom, grid)
    }

    /// Sitewise `self ≤ other`.
    pub fn le(&self, dom: &Domain, other: &SpinConfig) -> bool {
        dom.site_cells.iter().all(|&c| self.grid[c] <= other.grid[c])
    }

    /// Number of sites where the two configurations differ.
    pub fn disagreements(&self, dom: &Domain, other: &SpinConfig) -> usize {
        dom.site_cells.iter().filter(|&&c| self.grid[c] != other.grid[c]).count()
    }

    /// FNV-1a hash of the site spins, stable across runs.
    pub fn hash64(&self, dom: &Domain) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for &c in &dom.site_cells {
            h ^= (self.grid[c] > 0) as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
        h
    }

    /// Energy recomputed from scratch.
    pub fn recompute_energy(&self, dom: &Domain) -> i64 {
        energy_of_grid(dom, &self.grid)
    }
}

impl PartialEq for SpinConfig {
    fn eq(&self, other: &Self) -> bool {
        self.grid == other.grid
    }
}

impl Eq for SpinConfig {}

fn energy_of_grid(dom: &Domain, grid: &[i8]) -> i64 {
    let mut twice = 0i64;
    for &c in &dom.site_cells {
        let s = grid[c] as i64;
        for &o in &dom.offsets {
            let n = (c as isize + o) as usize;
            let w = if dom.kind[n] == SITE { 1 } else { 2 };
            twice += w * s * grid[n] as i64;
        }
    }
    -twice / 2
}

/// `H^η_Λ(σ)` from scratch.
pub fn energy(sigma: &SpinConfig, dom: &Domain) -> i64 {
    sigma.recompute_energy(dom)
}

/// `H(σ^x) - H(σ)` at coordinate `x`.
pub fn energy_delta(sigma: &SpinConfig, dom: &Domain, x: Coord) -> Result<i64> {
    let i = dom.index_of(x).ok_or(Error::SiteOutOfDomain(x))?;
    Ok(sigma.delta(dom, i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rect(sides: &[i32]) -> Domain {
        Domain::new(Shape::Rect { sides: sides.to_vec() }, &BoundaryField::Plus).unwrap()
    }

    #[test]
    fn box_and_ball_counts() {
        let d = Domain::new(Shape::Cube { dim: 2, half_width: 1 }, &BoundaryField::Plus).unwrap();
        assert_eq!((d.len(), d.boundary_len()), (9, 12));
        let b = Domain::new(Shape::Ball { dim: 3, radius: 1.0 }, &BoundaryField::Minus).unwrap();
        assert_eq!(b.len(), 7);
        assert!(b.boundary().iter().all(|(_, s)| *s == -1));
    }

    #[test]
    fn diamond_matches_enumeration() {
        let d = Domain::new(Shape::Diamond { half_width: 2 }, &BoundaryField::Plus).unwrap();
        let mut n = 0;
        for x in -2i32..=2 {
            for y in -2i32..=2 {
                if x.abs() + y.abs() <= 3 {
                    n += 1;
                    assert!(d.contains([x, y, 0]));
                }
            }
        }
        assert_eq!((d.len(), n), (21, 21));
    }

    #[test]
    fn boundary_is_exterior_neighbourhood() {
        let d = Domain::new(Shape::Ball { dim: 2, radius: 2.5 }, &BoundaryField::Plus).unwrap();
        for (c, _) in d.boundary() {
            assert!(!d.contains(c));
            let adj = [[1, 0], [-1, 0], [0, 1], [0, -1]]
                .iter()
                .any(|e| d.contains([c[0] + e[0], c[1] + e[1], 0]));
            assert!(adj);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            Domain::new(Shape::Cube { dim: 4, half_width: 1 }, &BoundaryField::Plus),
            Err(Error::Dimension(4))
        ));
        assert!(matches!(
            Domain::new(Shape::Sites { dim: 2, sites: vec![] }, &BoundaryField::Plus),
            Err(Error::EmptyDomain)
        ));
        let partial = BoundaryField::Mixed { default: None, values: vec![([0, 1, 0], 1)] };
        assert!(Domain::new(Shape::Sites { dim: 2, sites: vec![[0, 0, 0]] }, &partial).is_err());
    }

    #[test]
    fn energy_examples() {
        let single = Domain::new(Shape::Sites { dim: 2, sites: vec![[0, 0, 0]] }, &BoundaryField::Plus).unwrap();
        assert_eq!(SpinConfig::uniform(&single, 1).energy(), -4);
        assert_eq!(SpinConfig::uniform(&single, -1).energy(), 4);
        let b = rect(&[2, 2]);
        let minus = SpinConfig::uniform(&b, -1);
        let plus = SpinConfig::uniform(&b, 1);
        assert_eq!((minus.energy(), plus.energy()), (4, -12));
        assert_eq!(energy_delta(&plus, &b, [1, 1, 0]).unwrap(), 8);
        assert_eq!(energy_delta(&minus, &b, [1, 1, 0]).unwrap(), 0);
        assert!(energy_delta(&plus, &b, [5, 5, 0]).is_err());
    }

    #[test]
    fn brute_force_bond_count() {
        // independent oracle: enumerate unordered bonds by coordinates
        let b = Domain::with_boundary_fn(Shape::Rect { sides: vec![3, 2, 2] }, |c| {
            if (c[0] + c[1] + c[2]) % 2 == 0 { 1 } else { -1 }
        })
        .unwrap();
        let s = SpinConfig::from_fn(&b, |c| if c[0] == 2 { -1 } else { 1 });
        let val = |c: Coord| -> i64 {
            if let Some(i) = b.index_of(c) {
                s.get(&b, i) as i64
            } else {
                b.boundary_value(c).map_or(0, |v| v as i64)
            }
        };
        let mut h = 0;
        for i in 0..b.len() {
            let x = b.site(i);
            for k in 0..3 {
                for sgn in [-1, 1] {
                    let mut y = x;
                    y[k] += sgn;
                    if b.contains(y) {
                        if sgn == 1 {
                            h -= val(x) * val(y);
                        }
                    } else {
                        h -= val(x) * val(y);
                    }
                }
            }
        }
        assert_eq!(s.energy(), h);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn delta_matches_two_energies(
            a in 1i32..=8, b in 1i32..=8,
            bits in proptest::collection::vec(any::<bool>(), 64),
            site in 0usize..64,
        ) {
            let d = rect(&[a, b]);
            let spins: Vec<i8> = (0..d.len()).map(|i| if bits[i] { 1 } else { -1 }).collect();
            let s = SpinConfig::from_spins(&d, &spins).unwrap();
            let i = site % d.len();
            let mut t = s.clone();
            t.flip(&d, i);
            prop_assert_eq!(energy(&t, &d) - energy(&s, &d), s.delta(&d, i));
            prop_assert_eq!(t.energy(), energy(&t, &d));
        }
    }
}
