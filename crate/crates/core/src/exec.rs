//! Pluggable data-parallel map.
//!
//! Heavy loops in this crate hand their work items to an [`Executor`]. The
//! output order always matches the input order, and every reduction sorts by a
//! canonical key before summing, so results do not depend on the executor.

use alloc::vec::Vec;

pub trait Executor: Sync {
    fn map<I, O, F>(&self, items: &[I], f: F) -> Vec<O>
    where
        I: Sync,
        O: Send,
        F: Fn(&I) -> O + Sync + Send;
}

/// Runs everything on the calling thread.
#[derive(Clone, Copy, Debug, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn map<I, O, F>(&self, items: &[I], f: F) -> Vec<O>
    where
        I: Sync,
        O: Send,
        F: Fn(&I) -> O + Sync + Send,
    {
        items.iter().map(f).collect()
    }
}
