//! Deterministic Monte Carlo engine.
//!
//! Every realization gets its own substream derived from `(master_seed,
//! index)`, so the result vector depends only on the inputs — never on
//! scheduling. With the `parallel` feature (default) the indexed jobs run on
//! the rayon pool; without it the same API degrades to a sequential loop.
//! [`run_indexed_serial`] is always available, which is what the benches use
//! to compare the two paths.

use crate::stream::{derive_stream, RandomStream};

/// Runs `count` independent jobs, job `i` drawing from substream `i`.
///
/// Output is identical to [`run_indexed_serial`] for any thread count.
pub fn run_indexed<T, F>(count: usize, master_seed: u64, job: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, &mut RandomStream) -> T + Sync,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..count)
            .into_par_iter()
            .map(|i| {
                let mut stream = derive_stream(master_seed, i as u64);
                job(i, &mut stream)
            })
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        run_indexed_serial(count, master_seed, job)
    }
}

/// Sequential reference implementation of [`run_indexed`].
pub fn run_indexed_serial<T, F>(count: usize, master_seed: u64, job: F) -> Vec<T>
where
    F: Fn(usize, &mut RandomStream) -> T,
{
    (0..count)
        .map(|i| {
            let mut stream = derive_stream(master_seed, i as u64);
            job(i, &mut stream)
        })
        .collect()
}
