//! Budgets for potentially unbounded searches.
//!
//! Reversing sequences and word-problem breadth-first searches can run
//! forever on adversarial inputs. Every such loop takes a [`Budget`] and
//! reports exhaustion explicitly instead of looping or truncating.

use serde::Serialize;

/// Step limits for the two unbounded search families.
///
/// The `WORKBENCH_BUDGET` environment variable, when set to an unsigned
/// integer, replaces both limits. Individual operations accept explicit
/// budgets that override the environment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Budget {
    /// Maximum number of reversing steps per reversing run.
    pub reversing_steps: u64,
    /// Maximum number of expanded states per breadth-first search.
    pub bfs_states: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            reversing_steps: 100_000,
            bfs_states: 1_000_000,
        }
    }
}

impl Budget {
    /// Default budget, with `WORKBENCH_BUDGET` applied when present.
    pub fn from_env() -> Self {
        let mut budget = Budget::default();
        if let Ok(raw) = std::env::var("WORKBENCH_BUDGET") {
            if let Ok(n) = raw.trim().parse::<u64>() {
                budget.reversing_steps = n;
                budget.bfs_states = n;
            }
        }
        budget
    }

    /// Budget with both limits set to `n`.
    pub fn uniform(n: u64) -> Self {
        Budget {
            reversing_steps: n,
            bfs_states: n,
        }
    }
}

/// Counts consumed steps against a limit.
#[derive(Debug, Clone)]
pub struct Meter {
    limit: u64,
    used: u64,
}

impl Meter {
    pub fn new(limit: u64) -> Self {
        Meter { limit, used: 0 }
    }

    /// Consumes one step; returns false when the limit is exhausted.
    pub fn tick(&mut self) -> bool {
        if self.used >= self.limit {
            return false;
        }
        self.used += 1;
        true
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn exhausted(&self) -> bool {
        self.used >= self.limit
    }
}
