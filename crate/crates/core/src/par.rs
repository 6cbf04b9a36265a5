//! Execution policy for the data-parallel loops.
//!
//! With the `parallel` feature the loops below dispatch to rayon; without it
//! every policy runs sequentially. Element-wise maps produce identical output
//! under both paths, and reductions are always folded sequentially so results
//! are bit-for-bit reproducible.

/// Below this many elements `Exec::Auto` stays sequential.
pub const AUTO_MIN_LEN: usize = 16_384;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Exec {
    /// Parallel when the workload is large and more than one worker exists.
    #[default]
    Auto,
    Sequential,
    Parallel,
}

impl Exec {
    pub fn is_parallel(self, len: usize) -> bool {
        #[cfg(feature = "parallel")]
        {
            match self {
                Exec::Sequential => false,
                Exec::Parallel => true,
                Exec::Auto => len >= AUTO_MIN_LEN && rayon::current_num_threads() > 1,
            }
        }
        #[cfg(not(feature = "parallel"))]
        {
            let _ = (self, len);
            false
        }
    }
}

/// `out[i] = f(i)` for `i in 0..out.len()`.
pub fn fill_indexed<T, F>(exec: Exec, out: &mut [T], f: F)
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel(out.len()) {
        use rayon::prelude::*;
        out.par_iter_mut()
            .with_min_len(1024)
            .enumerate()
            .for_each(|(i, slot)| *slot = f(i));
        return;
    }
    let _ = exec;
    for (i, slot) in out.iter_mut().enumerate() {
        *slot = f(i);
    }
}

/// Maps `f` over `items`, preserving order.
pub fn map<I, T, F>(exec: Exec, items: &[I], f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel(items.len()) {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// Coarse-grained map for independent jobs (whole runs, fuzz cases). Any
/// policy other than `Sequential` parallelises regardless of job count.
pub fn map_jobs<I, T, F>(exec: Exec, jobs: Vec<I>, f: F) -> Vec<T>
where
    I: Send,
    T: Send,
    F: Fn(I) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec != Exec::Sequential {
        use rayon::prelude::*;
        return jobs.into_par_iter().map(f).collect();
    }
    let _ = exec;
    jobs.into_iter().map(f).collect()
}
