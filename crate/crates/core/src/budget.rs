use std::fmt;
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

/// Resource caps for the exact searches.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of candidate subsets probed by one call.
    pub max_probes: u64,
    pub max_time: Duration,
    /// Maximum number of free (non-mandatory) alternatives a search may enumerate over.
    pub max_free: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_probes: 1 << 30,
            max_time: Duration::from_secs(30 * 60),
            max_free: 30,
        }
    }
}

impl Budget {
    pub fn with_probes(mut self, probes: u64) -> Self {
        self.max_probes = probes;
        self
    }

    pub fn with_time(mut self, time: Duration) -> Self {
        self.max_time = time;
        self
    }

    pub fn with_max_free(mut self, n: usize) -> Self {
        self.max_free = n;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BudgetDimension {
    Probes,
    Time,
    Alternatives,
}

impl fmt::Display for BudgetDimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BudgetDimension::Probes => "subset probes",
            BudgetDimension::Time => "wall time (ms)",
            BudgetDimension::Alternatives => "free alternatives",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("budget exceeded: {dimension} needs {required}, limit is {limit}")]
pub struct BudgetExceeded {
    pub dimension: BudgetDimension,
    pub limit: u64,
    pub required: u64,
}

/// Running account of one search against its budget.
#[derive(Debug)]
pub(crate) struct Meter {
    pub budget: Budget,
    pub probes: u64,
    started: Instant,
}

impl Meter {
    pub fn new(budget: &Budget) -> Self {
        Meter { budget: budget.clone(), probes: 0, started: Instant::now() }
    }

    pub fn elapsed(&self) -> Duration {
        self.started.elapsed()
    }

    /// Reserves `count` probes up front, so exhaustion is detected before any work.
    pub fn reserve(&self, count: u64) -> Result<(), BudgetExceeded> {
        let required = self.probes.saturating_add(count);
        if required > self.budget.max_probes {
            return Err(BudgetExceeded {
                dimension: BudgetDimension::Probes,
                limit: self.budget.max_probes,
                required,
            });
        }
        Ok(())
    }

    /// Lifts the free-alternative cap; the probe budget alone bounds the work.
    pub fn relaxed_free(mut self) -> Self {
        self.budget.max_free = 63;
        self
    }

    pub fn check_free(&self, free: usize) -> Result<(), BudgetExceeded> {
        if free > self.budget.max_free || free > 63 {
            return Err(BudgetExceeded {
                dimension: BudgetDimension::Alternatives,
                limit: self.budget.max_free.min(63) as u64,
                required: free as u64,
            });
        }
        Ok(())
    }

    pub fn check_time(&self) -> Result<(), BudgetExceeded> {
        let elapsed = self.started.elapsed();
        if elapsed > self.budget.max_time {
            return Err(BudgetExceeded {
                dimension: BudgetDimension::Time,
                limit: self.budget.max_time.as_millis() as u64,
                required: elapsed.as_millis() as u64,
            });
        }
        Ok(())
    }
}
