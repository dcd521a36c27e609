use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest `(1 - u(t, L-1)) / (L e^{-L²/(32t)})` seen over the calibration
/// sweep `L ∈ {16, ..., 256}`, `L ≤ t ≤ L²/4` (0.072 at `L = 16`), rounded
/// up. Below `t ≈ L` the Poisson tail of the first `L/2` jumps dominates the
/// Gaussian form and no constant works.
pub const HEAT_TAIL_CONSTANT: f64 = 0.1;

/// `u(t, x)` for `x = 0..=L`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeatState {
    pub l: usize,
    pub t: f64,
    pub u: Vec<f64>,
}

fn check_l(l: usize) -> Result<()> {
    if l < 2 || l % 2 != 0 {
        return Err(Error::InvalidArgument(format!("L must be even and at least 2, got {l}")));
    }
    Ok(())
}

pub fn tent(l: usize) -> Vec<f64> {
    (0..=l).map(|x| if x <= l / 2 { x as f64 } else { (l - x) as f64 }).collect()
}

/// `du/dt = (u(x+1) + u(x-1) - 2u(x)) / 2` with Dirichlet ends, by sine
/// expansion.
pub fn heat_solve(l: usize, t: f64) -> Result<HeatState> {
    check_l(l)?;
    if !(t >= 0.0) {
        return Err(Error::InvalidArgument(format!("t must be non-negative, got {t}")));
    }
    let u0 = tent(l);
    let lf = l as f64;
    let sines: Vec<f64> = (0..2 * l).map(|m| (PI * m as f64 / lf).sin()).collect();
    let s = |k: usize, x: usize| sines[(k * x) % (2 * l)];
    let mut u = vec![0.0; l + 1];
    for k in 1..l {
        let b: f64 = (1..l).map(|x| u0[x] * s(k, x)).sum::<f64>() * 2.0 / lf;
        let decay = (-(1.0 - (PI * k as f64 / lf).cos()) * t).exp();
        if decay == 0.0 {
            continue;
        }
        for x in 1..l {
            u[x] += b * decay * s(k, x);
        }
    }
    if t == 0.0 {
        u = u0;
    }
    Ok(HeatState { l, t, u })
}

/// Classical RK4 with step `h`, the last step shortened to land on `t`.
pub fn heat_rk4(l: usize, t: f64, h: f64) -> Result<HeatState> {
    check_l(l)?;
    let lap = |u: &[f64], out: &mut [f64]| {
        out[0] = 0.0;
        out[l] = 0.0;
        for x in 1..l {
            out[x] = 0.5 * (u[x + 1] + u[x - 1] - 2.0 * u[x]);
        }
    };
    let mut u = tent(l);
    let (mut k1, mut k2, mut k3, mut k4, mut tmp) = (vec![0.0; l + 1], vec![0.0; l + 1], vec![0.0; l + 1], vec![0.0; l + 1], vec![0.0; l + 1]);
    let mut now = 0.0;
    while now < t {
        let dt = h.min(t - now);
        lap(&u, &mut k1);
        tmp.iter_mut().zip(&u).zip(&k1).for_each(|((o, a), b)| *o = a + 0.5 * dt * b);
        lap(&tmp, &mut k2);
        tmp.iter_mut().zip(&u).zip(&k2).for_each(|((o, a), b)| *o = a + 0.5 * dt * b);
        lap(&tmp, &mut k3);
        tmp.iter_mut().zip(&u).zip(&k3).for_each(|((o, a), b)| *o = a + dt * b);
        lap(&tmp, &mut k4);
        for x in 0..=l {
            u[x] += dt / 6.0 * (k1[x] + 2.0 * k2[x] + 2.0 * k3[x] + k4[x]);
        }
        now += dt;
    }
    Ok(HeatState { l, t, u })
}

/// `1 - u(t, L-1)` against `L e^{-L²/(32t)}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeatTail {
    pub lhs: f64,
    pub scale: f64,
    pub ratio: f64,
    /// `t ≥ L`, where the constant is calibrated.
    pub diffusive: bool,
    pub holds: bool,
}

pub fn heat_tail_check(l: usize, t: f64) -> Result<HeatTail> {
    let u = heat_solve(l, t)?;
    let lhs = 1.0 - u.u[l - 1];
    let lf = l as f64;
    let scale = lf * (-lf * lf / (32.0 * t)).exp();
    let ratio = if scale > 0.0 { lhs / scale } else { 0.0 };
    Ok(HeatTail { lhs, scale, ratio, diffusive: t >= lf, holds: lhs <= HEAT_TAIL_CONSTANT * scale })
}
