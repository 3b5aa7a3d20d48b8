//! Parallel verification over many index tuples.
//!
//! Each tuple gets its own generator seeded from the run seed and the tuple
//! itself, so results do not depend on the worker count or scheduling.
//! Output order is the input order.

use kronecker_core::combinatorics::IndexTuple;
use kronecker_core::engine::{verify_tuple, VerificationReport, VerifyOptions};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub const WORKERS_ENV: &str = "KRONECKER_WORKERS";

/// Explicit count, else `KRONECKER_WORKERS`, else one per core (`0`).
pub fn resolve_workers(explicit: Option<usize>) -> Result<usize, String> {
    if let Some(n) = explicit {
        return Ok(n);
    }
    match std::env::var(WORKERS_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| format!("{} must be a nonnegative integer, got {:?}", WORKERS_ENV, s)),
        Err(_) => Ok(0),
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for one tuple: depends on the run seed, `m` and the entries only.
pub fn tuple_seed(seed: u64, p: &IndexTuple) -> u64 {
    let mut h = splitmix(seed ^ u64::from(p.m()));
    h = splitmix(h ^ p.entries().len() as u64);
    for &e in p.entries() {
        h = splitmix(h ^ u64::from(e));
    }
    h
}

pub fn tuple_rng(seed: u64, p: &IndexTuple) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(tuple_seed(seed, p))
}

/// Run `f` over `items` on a pool of `workers` threads (`0`: one per core),
/// keeping input order.
pub fn par_map<T, U, F>(items: &[T], workers: usize, f: F) -> Result<Vec<U>, String>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| format!("worker pool: {}", e))?;
    Ok(pool.install(|| items.par_iter().map(&f).collect()))
}

pub fn verify_batch(
    tuples: &[IndexTuple],
    opts: &VerifyOptions,
    seed: u64,
    workers: usize,
) -> Result<Vec<kronecker_core::Result<VerificationReport>>, String> {
    par_map(tuples, workers, |p| verify_tuple(p, opts, &mut tuple_rng(seed, p)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use kronecker_core::combinatorics::enumerate_tuples;

    #[test]
    fn seeds_separate_tuples() {
        let ps = enumerate_tuples(7).unwrap();
        let mut seeds: Vec<u64> = ps.iter().map(|p| tuple_seed(3, p)).collect();
        seeds.sort_unstable();
        seeds.dedup();
        assert_eq!(seeds.len(), ps.len());
        assert_ne!(tuple_seed(3, &ps[4]), tuple_seed(4, &ps[4]));
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let ps = enumerate_tuples(6).unwrap();
        let opts = VerifyOptions { trials: 3, ..Default::default() };
        let one = verify_batch(&ps, &opts, 9, 1).unwrap();
        let four = verify_batch(&ps, &opts, 9, 4).unwrap();
        assert_eq!(one, four);
    }
}
