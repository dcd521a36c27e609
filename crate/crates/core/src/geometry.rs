//! Contours, the majority transform and the good set of 2D configurations.
//!
//! `M(σ)` is the set of minus sites. Its contour is the boundary of the union
//! of closed unit squares centred at `M(σ)`; vertices live at half-integer
//! points and are stored at the cell whose upper-right corner they are.
//! Extents are reported in half-lattice units (doubled coordinates) so that
//! they stay integral.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::lattice::{Domain, SpinConfig};

/// Radius fraction of the core region `D`.
pub const DEFAULT_CORE_FRACTION: f64 = 0.9;

const N: u8 = 1;
const S: u8 = 2;
const E: u8 = 4;
const W: u8 = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Contour {
    pub length: usize,
    pub simple: bool,
    /// Per axis, in doubled coordinates; zero when `M(σ)` is empty.
    pub u_max: [i32; 2],
    pub u_min: [i32; 2],
}

impl Contour {
    /// `|∂Γ| == 2 Σ (u_max - u_min)`, with the extents converted back to
    /// lattice units.
    pub fn length_identity(&self) -> bool {
        let sum: i32 = (0..2).map(|k| self.u_max[k] - self.u_min[k]).sum();
        self.length as i32 == sum
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeometryReport {
    pub contour: Contour,
    pub mountains: usize,
    /// Flippable plus sites adjacent to `M(σ)`, wherever they are.
    pub valleys: usize,
    /// Valleys that are sites of the domain.
    pub valleys_inside: usize,
    pub vertices: usize,
    pub core_in_m: bool,
    pub majority_fixed: bool,
    pub good: bool,
}

impl GeometryReport {
    pub fn lemma_sum(&self) -> i64 {
        self.mountains as i64 + self.vertices as i64 - self.valleys as i64
    }
}

#[inline]
fn in_m(sigma: &SpinConfig, dom: &Domain, cell: usize) -> bool {
    dom.site_at_cell(cell).is_some() && sigma.at_cell(cell) < 0
}

fn step(dom: &Domain) -> (isize, isize) {
    (1, dom.strides()[1] as isize)
}

/// Apply `p`: repeatedly flip minus sites with a strict majority of plus
/// neighbours, in place. Returns the number of flips.
pub fn majority_in_place(sigma: &mut SpinConfig, dom: &Domain, seeds: Option<&[usize]>) -> usize {
    let twod = dom.offsets().len() as i32;
    let mut queue: VecDeque<usize> = match seeds {
        Some(s) => s.iter().copied().collect(),
        None => (0..dom.len()).collect(),
    };
    let mut flips = 0;
    while let Some(i) = queue.pop_front() {
        if sigma.get(dom, i) > 0 {
            continue;
        }
        let c = dom.site_cell(i) as isize;
        let plus = dom.offsets().iter().filter(|&&o| sigma.at_cell((c + o) as usize) > 0).count() as i32;
        if 2 * plus > twod {
            sigma.flip(dom, i);
            flips += 1;
            for &o in dom.offsets() {
                if let Some(j) = dom.site_at_cell((c + o) as usize) {
                    if sigma.get(dom, j) < 0 {
                        queue.push_back(j);
                    }
                }
            }
        }
    }
    flips
}

/// Seeds for the worklist after site `i` changed: the site and its neighbours.
pub fn local_seeds(dom: &Domain, i: usize) -> Vec<usize> {
    let c = dom.site_cell(i) as isize;
    let mut v = vec![i];
    v.extend(dom.offsets().iter().filter_map(|&o| dom.site_at_cell((c + o) as usize)));
    v
}

pub fn majority_transform(sigma: &SpinConfig, dom: &Domain) -> SpinConfig {
    let mut s = sigma.clone();
    majority_in_place(&mut s, dom, None);
    s
}

/// `p(σ) == σ`.
pub fn is_majority_fixed(sigma: &SpinConfig, dom: &Domain) -> bool {
    let twod = dom.offsets().len() as i32;
    (0..dom.len()).all(|i| {
        if sigma.get(dom, i) > 0 {
            return true;
        }
        let c = dom.site_cell(i) as isize;
        let plus = dom.offsets().iter().filter(|&&o| sigma.at_cell((c + o) as usize) > 0).count() as i32;
        2 * plus <= twod
    })
}

pub fn contour(sigma: &SpinConfig, dom: &Domain) -> Contour {
    assert_eq!(dom.dim(), 2, "contours are two-dimensional");
    let (dx, dy) = step(dom);
    let mut deg = vec![0u8; dom.grid_len()];
    let mut length = 0usize;
    let mut u_max = [i32::MIN; 2];
    let mut u_min = [i32::MAX; 2];
    for i in 0..dom.len() {
        if sigma.get(dom, i) > 0 {
            continue;
        }
        let c = dom.site_cell(i) as isize;
        let x = dom.site(i);
        for k in 0..2 {
            u_max[k] = u_max[k].max(2 * x[k] + 1);
            u_min[k] = u_min[k].min(2 * x[k] - 1);
        }
        let ur = c as usize;
        let ul = (c - dx) as usize;
        let lr = (c - dy) as usize;
        let ll = (c - dx - dy) as usize;
        if !in_m(sigma, dom, (c + dx) as usize) {
            deg[lr] |= N;
            deg[ur] |= S;
            length += 1;
        }
        if !in_m(sigma, dom, (c - dx) as usize) {
            deg[ll] |= N;
            deg[ul] |= S;
            length += 1;
        }
        if !in_m(sigma, dom, (c + dy) as usize) {
            deg[ul] |= E;
            deg[ur] |= W;
            length += 1;
        }
        if !in_m(sigma, dom, (c - dy) as usize) {
            deg[ll] |= E;
            deg[lr] |= W;
            length += 1;
        }
    }
    if length == 0 {
        return Contour { length: 0, simple: false, u_max: [0; 2], u_min: [0; 2] };
    }
    let simple = deg.iter().all(|d| d.count_ones() == 0 || d.count_ones() == 2) && {
        let start = deg.iter().position(|&d| d != 0).unwrap();
        let mut v = start;
        let mut came = 0u8;
        let mut walked = 0usize;
        loop {
            let out = deg[v] & !came;
            let dir = out & out.wrapping_neg();
            let (next, back) = match dir {
                N => ((v as isize + dy) as usize, S),
                S => ((v as isize - dy) as usize, N),
                E => ((v as isize + dx) as usize, W),
                _ => ((v as isize - dx) as usize, E),
            };
            walked += 1;
            v = next;
            came = back;
            if v == start || walked > length {
                break;
            }
        }
        walked == length
    };
    Contour { length, simple, u_max, u_min }
}

/// Core region `D = {|x1| + |x2| <= f L}` as site indices; empty if the
/// domain has no scale.
pub fn core_sites(dom: &Domain, fraction: f64) -> Vec<usize> {
    let Some(l) = dom.scale() else { return Vec::new() };
    let r = fraction * l as f64;
    (0..dom.len())
        .filter(|&i| {
            let x = dom.site(i);
            ((x[0].abs() + x[1].abs()) as f64) <= r
        })
        .collect()
}

/// `D ∪ ∂D` restricted to sites of the domain.
pub fn core_closure(dom: &Domain, fraction: f64) -> Vec<usize> {
    let core = core_sites(dom, fraction);
    let mut mark = vec![false; dom.len()];
    for &i in &core {
        mark[i] = true;
        let c = dom.site_cell(i) as isize;
        for &o in dom.offsets() {
            if let Some(j) = dom.site_at_cell((c + o) as usize) {
                mark[j] = true;
            }
        }
    }
    (0..dom.len()).filter(|&i| mark[i]).collect()
}

fn core_in_m(sigma: &SpinConfig, dom: &Domain, core: &[usize]) -> bool {
    core.iter().all(|&i| sigma.get(dom, i) < 0)
}

fn good_with_core(sigma: &SpinConfig, dom: &Domain, core: &[usize]) -> bool {
    if !core_in_m(sigma, dom, core) || !is_majority_fixed(sigma, dom) {
        return false;
    }
    let c = contour(sigma, dom);
    c.simple && c.length_identity()
}

/// Membership in the good set.
pub fn in_good_set(sigma: &SpinConfig, dom: &Domain, fraction: f64) -> bool {
    good_with_core(sigma, dom, &core_sites(dom, fraction))
}

/// Two plus neighbours (cells outside `M`) at distance √2, two minus.
fn flippable(sigma: &SpinConfig, dom: &Domain, cell: usize) -> bool {
    let (dx, dy) = step(dom);
    let c = cell as isize;
    let px = [!in_m(sigma, dom, (c + dx) as usize), !in_m(sigma, dom, (c - dx) as usize)];
    let py = [!in_m(sigma, dom, (c + dy) as usize), !in_m(sigma, dom, (c - dy) as usize)];
    px[0] != px[1] && py[0] != py[1]
}

pub fn classify_geometry(sigma: &SpinConfig, dom: &Domain) -> GeometryReport {
    classify_geometry_with(sigma, dom, DEFAULT_CORE_FRACTION)
}

pub fn classify_geometry_with(sigma: &SpinConfig, dom: &Domain, fraction: f64) -> GeometryReport {
    let core = core_sites(dom, fraction);
    let cont = contour(sigma, dom);
    let fixed = is_majority_fixed(sigma, dom);
    let core_ok = core_in_m(sigma, dom, &core);
    let good = cont.simple && cont.length_identity() && core_ok && fixed;
    let (mut mountains, mut vertices) = (0, 0);
    for i in 0..dom.len() {
        if sigma.get(dom, i) > 0 || !flippable(sigma, dom, dom.site_cell(i)) {
            continue;
        }
        let mut t = sigma.clone();
        t.flip(dom, i);
        if good_with_core(&t, dom, &core) {
            mountains += 1;
        }
        if !is_majority_fixed(&t, dom) {
            vertices += 1;
        }
    }
    let (mut valleys, mut valleys_inside) = (0, 0);
    let (dx, dy) = step(dom);
    let mut seen = vec![false; dom.grid_len()];
    for i in 0..dom.len() {
        let c = dom.site_cell(i) as isize;
        if sigma.at_cell(c as usize) > 0 {
            continue;
        }
        for o in [dx, -dx, dy, -dy] {
            let n = (c + o) as usize;
            if seen[n] || in_m(sigma, dom, n) {
                continue;
            }
            seen[n] = true;
            if flippable(sigma, dom, n) {
                valleys += 1;
                if dom.site_at_cell(n).is_some() {
                    valleys_inside += 1;
                }
            }
        }
    }
    GeometryReport {
        contour: cont,
        mountains,
        valleys,
        valleys_inside,
        vertices,
        core_in_m: core_ok,
        majority_fixed: fixed,
        good,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{BoundaryField, Shape};
    use proptest::prelude::*;

    fn diamond(l: i32) -> Domain {
        Domain::new(Shape::Diamond { half_width: l }, &BoundaryField::Plus).unwrap()
    }

    fn rect(a: i32, b: i32) -> Domain {
        Domain::new(Shape::Rect { sides: vec![a, b] }, &BoundaryField::Plus).unwrap()
    }

    #[test]
    fn majority_examples() {
        let d = rect(5, 5);
        let plus = SpinConfig::uniform(&d, 1);
        assert_eq!(majority_transform(&plus, &d), plus);
        let lone = SpinConfig::from_fn(&d, |c| if c[0] == 3 && c[1] == 3 { -1 } else { 1 });
        assert_eq!(majority_transform(&lone, &d), plus);
    }

    #[test]
    fn vertex_pair_removes_two_sites() {
        let d = rect(7, 6);
        let block = |c: [i32; 3]| (2..=4).contains(&c[0]) && (2..=3).contains(&c[1]);
        let s = SpinConfig::from_fn(&d, |c| if block(c) { -1 } else { 1 });
        assert!(is_majority_fixed(&s, &d));
        let x = d.index_of([4, 3, 0]).unwrap();
        let mut t = s.clone();
        t.flip(&d, x);
        assert!(!is_majority_fixed(&t, &d));
        let p = majority_transform(&t, &d);
        let removed: Vec<_> = (0..d.len()).filter(|&i| s.get(&d, i) < 0 && p.get(&d, i) > 0).map(|i| d.site(i)).collect();
        assert_eq!(removed, vec![[4, 2, 0], [4, 3, 0]]);
    }

    #[test]
    fn contour_of_rectangle() {
        let d = rect(8, 8);
        let s = SpinConfig::from_fn(&d, |c| if (2..=5).contains(&c[0]) && (3..=4).contains(&c[1]) { -1 } else { 1 });
        let c = contour(&s, &d);
        assert_eq!(c.length, 12);
        assert!(c.simple && c.length_identity());
        assert_eq!((c.u_min, c.u_max), ([3, 5], [11, 9]));
    }

    #[test]
    fn pinched_contour_is_not_simple() {
        let d = rect(6, 6);
        let s = SpinConfig::from_fn(&d, |c| if c[..2] == [2, 2] || c[..2] == [3, 3] { -1 } else { 1 });
        let c = contour(&s, &d);
        assert_eq!(c.length, 8);
        assert!(!c.simple);
        let two = SpinConfig::from_fn(&d, |c| if c[..2] == [1, 1] || c[..2] == [4, 4] { -1 } else { 1 });
        assert!(!contour(&two, &d).simple);
    }

    #[test]
    fn empty_m_is_not_good() {
        let d = diamond(4);
        let r = classify_geometry(&SpinConfig::uniform(&d, 1), &d);
        assert_eq!(r.contour.length, 0);
        assert!(!r.contour.simple && !r.core_in_m && !r.good);
    }

    /// Exhaustive classification of σ≡− against a direct reading of the
    /// definitions on the enlarged grid.
    #[test]
    fn all_minus_diamond_satisfies_lemma() {
        for l in 2..=10 {
            let d = diamond(l);
            let s = SpinConfig::uniform(&d, -1);
            let r = classify_geometry(&s, &d);
            assert!(r.good, "L={l}");
            assert_eq!(r.lemma_sum(), 4, "L={l} {r:?}");
            assert!(r.vertices <= 8);
            let mut valleys = 0;
            let m = |x: i32, y: i32| d.contains([x, y, 0]);
            for x in -l - 2..=l + 2 {
                for y in -l - 2..=l + 2 {
                    if m(x, y) {
                        continue;
                    }
                    let nb = [m(x + 1, y), m(x - 1, y), m(x, y + 1), m(x, y - 1)];
                    if nb[0] != nb[1] && nb[2] != nb[3] {
                        valleys += 1;
                    }
                }
            }
            assert_eq!(r.valleys, valleys);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]
        #[test]
        fn majority_idempotent_and_monotone(
            a in proptest::collection::vec(any::<bool>(), 49),
            b in proptest::collection::vec(any::<bool>(), 49),
        ) {
            let d = rect(7, 7);
            let lo: Vec<i8> = a.iter().map(|&x| if x { 1 } else { -1 }).collect();
            let hi: Vec<i8> = lo.iter().zip(&b).map(|(&s, &up)| if up { 1 } else { s }).collect();
            let s = SpinConfig::from_spins(&d, &lo).unwrap();
            let t = SpinConfig::from_spins(&d, &hi).unwrap();
            let ps = majority_transform(&s, &d);
            prop_assert_eq!(majority_transform(&ps, &d), ps.clone());
            prop_assert!(is_majority_fixed(&ps, &d));
            prop_assert!(ps.le(&d, &majority_transform(&t, &d)));
            let mut rev: Vec<usize> = (0..d.len()).rev().collect();
            rev.rotate_left(7);
            let mut q = s.clone();
            majority_in_place(&mut q, &d, Some(&rev));
            majority_in_place(&mut q, &d, None);
            prop_assert_eq!(q, ps);
        }
    }
}
