use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::Instant;

use crate::error::{Error, Result};

/// Shared flag that aborts long computations when set.
#[derive(Debug, Clone, Default)]
pub struct CancelToken(Arc<AtomicBool>);

impl CancelToken {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cancel(&self) {
        self.0.store(true, Ordering::Relaxed);
    }

    pub fn is_cancelled(&self) -> bool {
        self.0.load(Ordering::Relaxed)
    }
}

/// Resource guards consulted by every product, game and search construction.
#[derive(Debug, Clone)]
pub struct Limits {
    pub max_product_states: usize,
    pub max_subset_search: usize,
    pub max_dag_colors: usize,
    pub deadline: Option<Instant>,
    pub cancel: Option<CancelToken>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_product_states: 2_000_000,
            max_subset_search: 18,
            max_dag_colors: 20,
            deadline: None,
            cancel: None,
        }
    }
}

impl Limits {
    /// Checks the deadline and the cancellation flag.
    pub fn tick(&self) -> Result<()> {
        if let Some(c) = &self.cancel {
            if c.is_cancelled() {
                return Err(Error::Cancelled);
            }
        }
        if let Some(d) = self.deadline {
            if Instant::now() >= d {
                return Err(Error::DeadlineExceeded);
            }
        }
        Ok(())
    }

    /// Fails once a construction has produced more than `max_product_states` states.
    pub fn check_states(&self, what: &str, count: usize) -> Result<()> {
        if count > self.max_product_states {
            return Err(Error::ResourceLimit {
                what: what.to_string(),
                limit: self.max_product_states,
            });
        }
        if count % 4096 == 0 {
            self.tick()?;
        }
        Ok(())
    }
}
