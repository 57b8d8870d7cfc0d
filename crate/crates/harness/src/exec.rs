use artin_core::Executor;
use rayon::prelude::*;

/// Runs `map` on the current rayon pool. Output order follows input order,
/// so every reduction downstream sees the same sequence for any thread count.
#[derive(Clone, Copy, Debug, Default)]
pub struct Rayon;

impl Executor for Rayon {
    fn map<I, O, F>(&self, items: &[I], f: F) -> Vec<O>
    where
        I: Sync,
        O: Send,
        F: Fn(&I) -> O + Sync + Send,
    {
        items.par_iter().map(f).collect()
    }
}
