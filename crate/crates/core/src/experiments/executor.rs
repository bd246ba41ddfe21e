//! Index-ordered map over trials, parallel when the `parallel` feature is on.
//!
//! Output order is the index order regardless of thread count, and each task
//! sees only its own index, so results never depend on scheduling.

use crate::error::{Error, Result};

pub struct Executor {
    #[cfg(feature = "parallel")]
    pool: Option<rayon::ThreadPool>,
}

impl Executor {
    /// `parallelism = 1` runs inline; `0` uses every available core.
    pub fn new(parallelism: usize) -> Result<Self> {
        #[cfg(feature = "parallel")]
        {
            let pool = if parallelism == 1 {
                None
            } else {
                Some(
                    rayon::ThreadPoolBuilder::new()
                        .num_threads(parallelism)
                        .build()
                        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?,
                )
            };
            Ok(Self { pool })
        }
        #[cfg(not(feature = "parallel"))]
        {
            let _ = parallelism;
            let _ = Error::EmptyGrid;
            Ok(Self {})
        }
    }

    pub fn map<T, F>(&self, n: u64, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if let Some(pool) = &self.pool {
            use rayon::prelude::*;
            return pool.install(|| (0..n).into_par_iter().map(&f).collect());
        }
        (0..n).map(f).collect()
    }
}
