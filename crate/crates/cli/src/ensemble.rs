//! Parallel ensembles with results delivered in realization order.

use frag_core::engine::{run_fragmentation, FragmentationRun};
use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::error::{CliError, Result};

/// Worker pool of a fixed size.
pub struct Ensemble {
    pool: rayon::ThreadPool,
    parallelism: usize,
}

impl Ensemble {
    pub fn new(parallelism: usize) -> Result<Self> {
        if parallelism == 0 {
            return Err(CliError::Usage("parallelism must be at least 1".into()));
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(parallelism)
            .build()
            .map_err(|e| CliError::Usage(format!("cannot start {parallelism} workers: {e}")))?;
        Ok(Self { pool, parallelism })
    }

    /// One worker per available core.
    pub fn default_parallelism() -> usize {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    }

    pub fn parallelism(&self) -> usize {
        self.parallelism
    }

    /// Run `work` on `0..n` in batches of `parallelism` items and feed the
    /// results to `sink` in index order. At most one batch is held in
    /// memory.
    pub fn ordered<T, W, S>(&self, n: u64, work: W, mut sink: S) -> Result<()>
    where
        T: Send,
        W: Fn(u64) -> Result<T> + Sync,
        S: FnMut(u64, T) -> Result<()>,
    {
        let batch = self.parallelism as u64;
        let mut start = 0;
        while start < n {
            let end = (start + batch).min(n);
            let results: Vec<Result<T>> = self
                .pool
                .install(|| (start..end).into_par_iter().map(&work).collect());
            for (k, r) in (start..end).zip(results) {
                sink(k, r?)?;
            }
            start = end;
        }
        Ok(())
    }

    /// Map `work` over `0..n` and collect in index order.
    pub fn map<T, W>(&self, n: u64, work: W) -> Result<Vec<T>>
    where
        T: Send,
        W: Fn(u64) -> Result<T> + Sync,
    {
        let mut out = Vec::with_capacity(n as usize);
        self.ordered(n, work, |_, t| {
            out.push(t);
            Ok(())
        })?;
        Ok(out)
    }

    /// Simulate every realization of `cfg`, handing each run to `sink`.
    pub fn run<S>(&self, cfg: &ExperimentConfig, sink: S) -> Result<()>
    where
        S: FnMut(u64, FragmentationRun) -> Result<()>,
    {
        self.ordered(
            cfg.realizations,
            |i| Ok(run_fragmentation(&cfg.run_config(i))?),
            sink,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_independent_of_workers() {
        let work = |i: u64| Ok(frag_core::random::mix_seed(9, i));
        let one = Ensemble::new(1).unwrap().map(37, work).unwrap();
        let four = Ensemble::new(4).unwrap().map(37, work).unwrap();
        assert_eq!(one, four);
        assert_eq!(one.len(), 37);
        assert!(Ensemble::new(0).is_err());
    }

    #[test]
    fn first_error_wins() {
        let e = Ensemble::new(3).unwrap();
        let r = e.map(10, |i| if i >= 4 { Err(CliError::Usage(format!("{i}"))) } else { Ok(i) });
        assert_eq!(r.unwrap_err().to_string(), "4");
    }
}
