//! Replica fan-out.
//!
//! `map_replicas` evaluates a closure on every replica index and returns the
//! results ordered by index, so downstream reductions see the same sequence
//! whether or not the `parallel` feature is enabled.

/// Sequential evaluation, always available.
pub fn map_replicas_seq<T, F>(n: u64, f: F) -> Vec<T>
where
    F: Fn(u64) -> T,
{
    (0..n).map(f).collect()
}

/// Data-parallel evaluation over the rayon global pool.
#[cfg(feature = "parallel")]
pub fn map_replicas_par<T, F>(n: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map_replicas<T, F>(n: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    map_replicas_par(n, f)
}

#[cfg(not(feature = "parallel"))]
pub fn map_replicas<T, F>(n: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    map_replicas_seq(n, f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn results_are_index_ordered() {
        let v = map_replicas(257, |i| i * i);
        assert_eq!(v, (0..257).map(|i| i * i).collect::<Vec<_>>());
        assert_eq!(map_replicas_seq(257, |i| i * i), v);
    }
}
