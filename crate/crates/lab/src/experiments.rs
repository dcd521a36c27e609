use lifshitz_core::diffusion::{coldyn_profile, heat_solve, heat_tail_check, rw_tail_chain, ssep_simulate};
use lifshitz_core::dimer::{build_a, variance_nn, DimerSpec};
use lifshitz_core::glauber::{modified_2d_simulate, tau_plus, ModifiedOptions, RateRule};
use lifshitz_core::lattice::{BoundaryField, Domain, Shape};
use lifshitz_core::parallel::map_replicas;
use lifshitz_core::rng::derive_seed;
use lifshitz_core::spectral::{decompose_blocks, principal_eigen, spectral_gap};
use lifshitz_core::surface::{coupling_time, BoxSpec, Dynamics};

use crate::config::{ExperimentConfig, ExperimentKind};
use crate::error::{LabError, LabResult};
use crate::table::ResultTable;

/// Runs `cfg` and collects its rows. Deterministic given the config.
pub fn run_experiment(cfg: &ExperimentConfig) -> LabResult<ResultTable> {
    cfg.validate()?;
    let mut table = ResultTable::new(cfg);
    for &l in &cfg.sizes {
        let seed = derive_seed(cfg.seed, l as u64);
        match cfg.experiment {
            ExperimentKind::TauPlus => tau_plus_rows(cfg, l, seed, &mut table)?,
            ExperimentKind::Coupling => coupling_rows(cfg, l, seed, &mut table)?,
            ExperimentKind::Dimer => dimer_rows(cfg, l, &mut table)?,
            ExperimentKind::Spectrum => spectrum_rows(cfg, l, &mut table)?,
            ExperimentKind::Heat => heat_rows(cfg, l, seed, &mut table)?,
            ExperimentKind::Coldyn => coldyn_rows(cfg, l, seed, &mut table)?,
            ExperimentKind::Modified2d => modified_rows(cfg, l, seed, &mut table)?,
        }
    }
    Ok(table)
}

fn rule(cfg: &ExperimentConfig) -> LabResult<RateRule> {
    Ok(RateRule::from_beta(cfg.beta)?)
}

fn time_for(cfg: &ExperimentConfig, l: usize, default_factor: f64) -> f64 {
    cfg.params.time.unwrap_or_else(|| cfg.params.time_factor.unwrap_or(default_factor) * (l * l) as f64)
}

fn tau_plus_rows(cfg: &ExperimentConfig, l: usize, seed: u64, t: &mut ResultTable) -> LabResult<()> {
    let dom = Domain::new(Shape::Cube { dim: cfg.dim, half_width: l as i32 }, &BoundaryField::Plus)?;
    let budget = cfg.params.horizon.map(|h| h as u64);
    let sample = tau_plus(&dom, rule(cfg)?, cfg.replicas, budget, seed)?;
    for r in &sample.records {
        match r.tau {
            Some(tau) => t.push(l, r.replica, "tau_plus", tau, 0.0),
            None => t.push(l, r.replica, "tau_plus_censored", r.events as f64, 0.0),
        }
    }
    Ok(())
}

fn coupling_rows(cfg: &ExperimentConfig, l: usize, seed: u64, t: &mut ResultTable) -> LabResult<()> {
    let h = cfg.params.height.unwrap_or(l as i32);
    let b = BoxSpec::full(l, l, h)?;
    let dynamics = cfg.params.dynamics.unwrap_or(Dynamics::Local);
    let horizon = cfg.params.horizon.unwrap_or(1e4 * (l * l) as f64);
    let outcomes = map_replicas(cfg.replicas, |r| coupling_time(&b, dynamics, derive_seed(seed, r), horizon));
    for (r, o) in outcomes.iter().enumerate() {
        match o.time {
            Some(time) => t.push(l, r as u64, "coupling_time", time, 0.0),
            None => t.push(l, r as u64, "coupling_censored", horizon, 0.0),
        }
        t.push(l, r as u64, "order_violations", o.order_violations as f64, 0.0);
    }
    Ok(())
}

fn dimer_rows(cfg: &ExperimentConfig, n: usize, t: &mut ResultTable) -> LabResult<()> {
    let spec = match cfg.params.p {
        Some([a, b, c]) => DimerSpec::new(a, b, c)?,
        None => DimerSpec::uniform(),
    };
    let var = variance_nn(n, &spec);
    t.push(n, 0, "variance", var, 0.0);
    if n > 1 {
        t.push(n, 0, "variance_over_log", var / (n as f64).ln(), 0.0);
    }
    if n <= 2000 {
        let (_, profile) = build_a(n, &spec)?;
        t.push(n, 0, "mean", profile.mean(), 0.0);
        t.push(n, 0, "variance_eigen", profile.variance(), 0.0);
    }
    Ok(())
}

fn spectrum_rows(cfg: &ExperimentConfig, side: usize, t: &mut ResultTable) -> LabResult<()> {
    let dom = Domain::new(Shape::Rect { sides: vec![side as i32; cfg.dim] }, &BoundaryField::Plus)?;
    let dec = decompose_blocks(&dom)?;
    let plus = dec.plus_class();
    let mut gap_inf = f64::INFINITY;
    for c in 0..dec.len() {
        let block = dec.block(c);
        let p = principal_eigen(&block)?;
        t.push(side, c as u64, "block_lambda", p.lambda, 0.0);
        t.push(side, c as u64, "block_size", block.len() as f64, 0.0);
        if c != plus {
            gap_inf = gap_inf.min(p.lambda);
        }
    }
    t.push(side, plus as u64, "plus_block_lambda", principal_eigen(&dec.block(plus))?.lambda, 0.0);
    t.push(side, 0, "gap_u_inf", gap_inf, 0.0);
    if let Some(beta) = cfg.beta {
        t.push(side, 0, "gap", spectral_gap(&dom, beta)?, 0.0);
    }
    Ok(())
}

fn heat_rows(cfg: &ExperimentConfig, l: usize, seed: u64, t: &mut ResultTable) -> LabResult<()> {
    let time = time_for(cfg, l, 1.0 / 8.0);
    let u = heat_solve(l, time)?;
    for (x, v) in u.u.iter().enumerate() {
        t.push(l, x as u64, "heat_u", *v, 0.0);
    }
    let tail = heat_tail_check(l, time)?;
    t.push(l, 0, "tail_lhs", tail.lhs, 0.0);
    t.push(l, 0, "tail_ratio", tail.ratio, 0.0);
    if l % 4 == 0 {
        let chain = rw_tail_chain(l, time)?;
        for (k, p) in chain.p.iter().enumerate() {
            t.push(l, 0, &format!("rw_p{}", k + 1), *p, 0.0);
        }
    }
    if cfg.replicas > 1 {
        let s = ssep_simulate(l, time, cfg.replicas, seed)?;
        for x in 0..l {
            t.push(l, x as u64 + 1, "ssep_empirical", s.empirical[x], s.sigma[x]);
            t.push(l, x as u64 + 1, "ssep_analytic", s.analytic[x], 0.0);
        }
    }
    Ok(())
}

fn coldyn_rows(cfg: &ExperimentConfig, l: usize, seed: u64, t: &mut ResultTable) -> LabResult<()> {
    let time = time_for(cfg, l, 1.0 / 8.0);
    let r = coldyn_profile(l, time, cfg.replicas, seed)?;
    for x in 0..=l {
        t.push(l, x as u64, "h_empirical", r.empirical[x], r.sigma[x]);
        t.push(l, x as u64, "h_analytic", r.analytic[x], 0.0);
    }
    t.push(l, 0, "corner", r.corner, r.corner_sigma);
    t.push(l, 0, "corner_bound", r.corner_bound, 0.0);
    Ok(())
}

fn modified_rows(cfg: &ExperimentConfig, l: usize, seed: u64, t: &mut ResultTable) -> LabResult<()> {
    if cfg.dim != 2 {
        return Err(LabError::Config("modified-2d runs in two dimensions only".into()));
    }
    let mut opts = ModifiedOptions::default();
    if let Some(f) = cfg.params.core_fraction {
        opts.core_fraction = f;
    }
    let reports = map_replicas(cfg.replicas, |r| modified_2d_simulate(l as i32, derive_seed(seed, r), &opts));
    for (r, rep) in reports.into_iter().enumerate() {
        let rep = rep?;
        let r = r as u64;
        if let Some(tau) = rep.tau_d {
            t.push(l, r, "tau_d", tau, 0.0);
        }
        t.push(l, r, "m_drop", rep.m_drop() as f64, 0.0);
        t.push(l, r, "good_violations", rep.good_violations as f64, 0.0);
        t.push(l, r, "lemma_violations", rep.lemma_violations as f64, 0.0);
        t.push(l, r, "max_vertices", rep.max_vertices as f64, 0.0);
    }
    Ok(())
}
