//! The inverse Kasteleyn matrix and edge correlations.
//!
//! `G(x, y)` is the torus integral of `z^{-y} w^x / (k_c + k_a z + k_b w)`.
//! The integrand has poles on the torus because `k_a, k_b, k_c` form a
//! triangle, so the `w` integral is done by residues: with
//! `c = k_c + k_a e^{iθ}`, the inner integral is
//! `c^{-1} (-k_b / c)^{-x}` for `x <= 0` when `|c| > k_b` and
//! `k_b^{-1} (-c / k_b)^{x-1}` for `x >= 1` when `|c| < k_b`, and zero
//! otherwise. The remaining `θ` integral is piecewise smooth with breaks at
//! `|c| = k_b`, i.e. `θ = ±(π - π p_b)`, and is done by composite
//! Gauss–Legendre with panel doubling.

use std::collections::HashMap;
use std::f64::consts::PI;

use nalgebra::{Complex, DMatrix};
use serde::{Deserialize, Serialize};

use super::quad::gauss_legendre;
use super::spec::DimerSpec;
use crate::{Error, Result};

const MAX_OFFSET: i64 = 1000;
const TOL: f64 = 1e-11;
const MAX_PANELS: usize = 1 << 15;

/// Closed form of `K⁻¹(w_{0,0}, b_{n,-1})`.
pub fn kinv_closed(n: i64, spec: &DimerSpec) -> f64 {
    if n == 0 {
        return spec.pa() / spec.ka();
    }
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    sign * (n as f64 * PI * spec.pa()).sin() / (PI * n as f64 * spec.ka())
}

fn inner(theta: f64, x: i64, spec: &DimerSpec, outer_region: bool) -> Complex<f64> {
    let c = Complex::new(spec.kc(), 0.0) + Complex::from_polar(spec.ka(), theta);
    let kb = spec.kb();
    if !outer_region {
        if x > 0 {
            return Complex::new(0.0, 0.0);
        }
        c.inv() * (Complex::new(-kb, 0.0) / c).powi((-x) as i32)
    } else {
        if x < 1 {
            return Complex::new(0.0, 0.0);
        }
        (-c / kb).powi((x - 1) as i32) / kb
    }
}

fn integrate_piece(a: f64, b: f64, x: i64, y: i64, spec: &DimerSpec, outer_region: bool, rule: &(Vec<f64>, Vec<f64>)) -> Option<Complex<f64>> {
    let f = |t: f64| Complex::from_polar(1.0, -(y as f64) * t) * inner(t, x, spec, outer_region);
    let eval = |m: usize| {
        let h = (b - a) / m as f64;
        let mut s = Complex::new(0.0, 0.0);
        for k in 0..m {
            let mid = a + (k as f64 + 0.5) * h;
            for (xi, wi) in rule.0.iter().zip(&rule.1) {
                s += f(mid + 0.5 * h * xi) * (0.5 * h * wi);
            }
        }
        s
    };
    let mut m = 4;
    let mut prev = eval(m);
    while m < MAX_PANELS {
        m *= 2;
        let cur = eval(m);
        if (cur - prev).norm() < TOL {
            return Some(cur);
        }
        prev = cur;
    }
    None
}

/// `K⁻¹(w_{0,0}, b_{x,y})` by quadrature, for `|x|, |y| <= 1000`.
pub fn kinv_quadrature(x: i64, y: i64, spec: &DimerSpec) -> Result<f64> {
    if x.abs() > MAX_OFFSET || y.abs() > MAX_OFFSET {
        return Err(Error::InvalidArgument(format!("offset ({x}, {y}) exceeds the quadrature budget")));
    }
    let rule = gauss_legendre(20);
    let ts = PI - PI * spec.p[1];
    let pieces = [(-PI, -ts, true), (-ts, ts, false), (ts, PI, true)];
    let mut total = Complex::new(0.0, 0.0);
    for (a, b, outer_region) in pieces {
        if (outer_region && x < 1) || (!outer_region && x > 0) {
            continue;
        }
        total += integrate_piece(a, b, x, y, spec, outer_region, &rule).ok_or(Error::Quadrature { x, y })?;
    }
    let v = total / (2.0 * PI);
    debug_assert!(v.im.abs() < 1e-9, "imaginary part {}", v.im);
    Ok(v.re)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeType {
    A,
    B,
    C,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub white: (i64, i64),
    pub black: (i64, i64),
}

impl Edge {
    pub fn of_type(white: (i64, i64), t: EdgeType) -> Self {
        let (dx, dy) = match t {
            EdgeType::A => (0, -1),
            EdgeType::B => (1, 0),
            EdgeType::C => (0, 0),
        };
        Edge { white, black: (white.0 + dx, white.1 + dy) }
    }

    pub fn edge_type(&self) -> Result<EdgeType> {
        match (self.black.0 - self.white.0, self.black.1 - self.white.1) {
            (0, 0) => Ok(EdgeType::C),
            (0, -1) => Ok(EdgeType::A),
            (1, 0) => Ok(EdgeType::B),
            _ => Err(Error::MalformedEdge { white: self.white, black: self.black }),
        }
    }
}

/// Probability that every edge in `edges` is covered.
pub fn edge_probability(edges: &[Edge], spec: &DimerSpec) -> Result<f64> {
    if edges.len() > 12 {
        return Err(Error::InvalidArgument("at most 12 edges".into()));
    }
    let mut weight = 1.0;
    for e in edges {
        weight *= match e.edge_type()? {
            EdgeType::A => spec.ka(),
            EdgeType::B => spec.kb(),
            EdgeType::C => spec.kc(),
        };
    }
    let n = edges.len();
    let mut cache: HashMap<(i64, i64), f64> = HashMap::new();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let off = (edges[j].black.0 - edges[i].white.0, edges[j].black.1 - edges[i].white.1);
            let g = match cache.get(&off) {
                Some(&g) => g,
                None => {
                    let g = kinv_quadrature(off.0, off.1, spec)?;
                    cache.insert(off, g);
                    g
                }
            };
            m[(i, j)] = g;
        }
    }
    Ok(weight * if n == 0 { 1.0 } else { m.determinant() })
}
