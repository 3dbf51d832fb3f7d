use descent_core::counter::Executor;
use rayon::prelude::*;
use rayon::ThreadPool;

/// Block folds on a rayon pool. Results equal [`descent_core::counter::Serial`]
/// because every combine used by the counters is associative.
pub struct Parallel {
    pool: ThreadPool,
}

impl Parallel {
    /// `workers = None` uses rayon's default thread count.
    pub fn new(workers: Option<usize>) -> Result<Self, rayon::ThreadPoolBuildError> {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(w) = workers {
            b = b.num_threads(w.max(1));
        }
        Ok(Self { pool: b.build()? })
    }

    pub fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        self.pool.install(f)
    }
}

impl Executor for Parallel {
    fn fold_blocks<T, I, M, R>(&self, blocks: u64, identity: I, map: M, combine: R) -> T
    where
        T: Send,
        I: Fn() -> T + Sync + Send,
        M: Fn(u64) -> T + Sync + Send,
        R: Fn(T, T) -> T + Sync + Send,
    {
        self.pool.install(|| (0..blocks).into_par_iter().map(&map).reduce(&identity, &combine))
    }
}
