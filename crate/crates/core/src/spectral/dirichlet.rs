use std::f64::consts::PI;

use crate::{Error, Result};

/// Dirichlet ratio of the cosine test function over `±1` bridges of length
/// `L` pinned at `0` on both ends.
#[derive(Clone, Debug)]
pub struct DirichletReport {
    pub l: usize,
    /// `ρ(g(-𝓛)g) / ρ(g²)`, every interior column included.
    pub ratio: f64,
    /// Sum over `x ≤ -1` of the peak and valley terms, which equals the
    /// contribution of all `x ≠ 0` by the reflection `x ↔ -x`.
    pub printed_sum: f64,
    /// Contribution of the middle column `x = 0`; `ratio = printed_sum + x0_term`.
    pub x0_term: f64,
    /// `(x, ρ(g² 1{∇_{x-1}=+, ∇_x=-}) / ρ(g²) / cos²(πx/L))` for `x` from
    /// `-L/2+1` to `-1`.
    pub normalized: Vec<(i64, f64)>,
    pub log_norm: f64,
}

/// `cos(πj/L)`, exactly zero at `j = ±L/2`.
fn cosine(j: i64, l: i64) -> f64 {
    if 2 * j.abs() == l {
        0.0
    } else {
        (PI * j as f64 / l as f64).cos()
    }
}

/// Factor of `g` contributed by the increment at `x`: `(w(+), w(-))`.
fn step_weights(x: i64, l: i64) -> (f64, f64) {
    if x < 0 {
        (1.0, cosine(x, l))
    } else {
        (cosine(x + 1, l), 1.0)
    }
}

/// Rows of a transfer table, each stored on `|h| ≤ min(k, L-k)` and scaled
/// to unit maximum; `scale[k]` holds the log of the factor removed.
struct Table {
    rows: Vec<Vec<f64>>,
    scale: Vec<f64>,
}

fn half_width(k: usize, l: usize) -> usize {
    k.min(l - k)
}

fn at(row: &[f64], h: i64) -> f64 {
    let m = (row.len() / 2) as i64;
    if h.abs() > m {
        0.0
    } else {
        row[(h + m) as usize]
    }
}

fn renormalize(row: &mut [f64]) -> f64 {
    let max = row.iter().copied().fold(0.0, f64::max);
    if max > 0.0 {
        row.iter_mut().for_each(|v| *v /= max);
        max.ln()
    } else {
        f64::NEG_INFINITY
    }
}

/// Squared weights per step index `k`, `x = k - L/2`.
fn squared_weights(l: usize) -> Vec<(f64, f64)> {
    let li = l as i64;
    (0..l)
        .map(|k| {
            let (p, m) = step_weights(k as i64 - li / 2, li);
            (p * p, m * m)
        })
        .collect()
}

fn forward(l: usize, w2: &[(f64, f64)]) -> Table {
    let mut rows = vec![vec![1.0]];
    let mut scale = vec![0.0];
    for k in 0..l {
        let m = half_width(k + 1, l) as i64;
        let prev = &rows[k];
        let mut row: Vec<f64> = (-m..=m).map(|h| at(prev, h - 1) * w2[k].0 + at(prev, h + 1) * w2[k].1).collect();
        let s = renormalize(&mut row);
        scale.push(scale[k] + s);
        rows.push(row);
    }
    Table { rows, scale }
}

fn backward(l: usize, w2: &[(f64, f64)]) -> Table {
    let mut rows = vec![Vec::new(); l + 1];
    let mut scale = vec![0.0; l + 1];
    rows[l] = vec![1.0];
    for k in (0..l).rev() {
        let m = half_width(k, l) as i64;
        let next = &rows[k + 1];
        let mut row: Vec<f64> = (-m..=m).map(|h| w2[k].0 * at(next, h + 1) + w2[k].1 * at(next, h - 1)).collect();
        let s = renormalize(&mut row);
        scale[k] = scale[k + 1] + s;
        rows[k] = row;
    }
    Table { rows, scale }
}

pub fn dirichlet_test_ratio(l: usize) -> Result<DirichletReport> {
    if l % 2 != 0 || !(4..=4096).contains(&l) {
        return Err(Error::InvalidArgument(format!("L must be even with 4 ≤ L ≤ 4096, got {l}")));
    }
    let li = l as i64;
    let half = li / 2;
    let w2 = squared_weights(l);
    let f = forward(l, &w2);
    let b = backward(l, &w2);
    let log_norm = f.scale[l] + f.rows[l][0].ln();

    // P_x: weight of paths with φ_{x-1} = φ_{x+1}, the two increments at x-1
    // and x removed from g², relative to ρ(g²).
    let pinned = |x: i64| -> f64 {
        let k = (x + half) as usize;
        let (fr, br) = (&f.rows[k - 1], &b.rows[k + 1]);
        let m = (fr.len() / 2) as i64;
        let s: f64 = (-m..=m).map(|h| at(fr, h) * at(br, h)).sum();
        if s == 0.0 {
            0.0
        } else {
            (f.scale[k - 1] + b.scale[k + 1] + s.ln() - log_norm).exp()
        }
    };

    let mut ratio = 0.0;
    let mut x0_term = 0.0;
    let mut printed_sum = 0.0;
    let mut normalized = Vec::new();
    for x in (-half + 1)..half {
        let p = pinned(x);
        let (ap, am) = step_weights(x - 1, li);
        let (bp, bm) = step_weights(x, li);
        let delta = ap * bm - am * bp;
        let term = 0.5 * p * delta * delta;
        ratio += term;
        if x == 0 {
            x0_term = term;
        }
        if x < 0 {
            let (c, c1) = (cosine(x, li), cosine(x - 1, li));
            let peak = ap * ap * bm * bm * p;
            let valley = am * am * bp * bp * p;
            let d2 = (c - c1) * (c - c1);
            let first = 0.5 * d2 * peak / (c * c);
            let second = if c1 == 0.0 { 0.5 * d2 * p } else { 0.5 * d2 * valley / (c1 * c1) };
            printed_sum += first + second;
            normalized.push((x, peak / (c * c)));
        }
    }
    Ok(DirichletReport { l, ratio, printed_sum, x0_term, normalized, log_norm })
}
