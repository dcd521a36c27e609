use lifshitz_core::surface::{embedding_check, enumerate, macmahon, occupation_counts, BoxSpec, Dynamics};
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn uniform_p_value(counts: &[u64]) -> f64 {
    let n: u64 = counts.iter().sum();
    let e = n as f64 / counts.len() as f64;
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - e).powi(2) / e).sum();
    1.0 - ChiSquared::new((counts.len() - 1) as f64).unwrap().cdf(chi2)
}

#[test]
fn cube_has_twenty_states() {
    let b = BoxSpec::full(2, 2, 2).unwrap();
    assert_eq!(enumerate(&b, 1000).unwrap().len(), 20);
    assert_eq!(macmahon(2, 2, 2), 20.0);
}

#[test]
fn local_moves_are_uniform() {
    let b = BoxSpec::full(2, 2, 2).unwrap();
    let occ = occupation_counts(&b, Dynamics::Local, 1_000_000, 50, 2024).unwrap();
    let counts: Vec<u64> = occ.iter().map(|p| p.1).collect();
    assert!(uniform_p_value(&counts) > 0.01, "{counts:?}");
}

#[test]
fn column_resampling_is_uniform() {
    let b = BoxSpec::full(2, 2, 2).unwrap();
    let occ = occupation_counts(&b, Dynamics::Column, 1_000_000, 10, 77).unwrap();
    let counts: Vec<u64> = occ.iter().map(|p| p.1).collect();
    assert!(uniform_p_value(&counts) > 0.01, "{counts:?}");
}

#[test]
fn spin_embedding_is_uniform() {
    let b = BoxSpec::full(2, 2, 2).unwrap();
    let r = embedding_check(&b, &b.floor(), 1_000_000, 5, 50).unwrap();
    assert_eq!(r.mismatches, 0);
    let counts: Vec<u64> = r.occupation.iter().map(|p| p.1).collect();
    assert!(uniform_p_value(&counts) > 0.01, "{counts:?}");
}
