use crate::exec::ExecMode;
use crate::{Error, Result};

/// Size ceilings and execution mode for the exact solvers. The ceilings guard
/// against accidentally launching an astronomically large search; callers that
/// know what they are doing raise them explicitly.
#[derive(Clone, Debug)]
pub struct SolverConfig {
    /// Maximum agent count for set-partition enumeration (existence oracle,
    /// stable-network enumeration, welfare optima, stable-coloring search).
    pub partition_limit: usize,
    /// Maximum node count for the exact maximum-independent-set solver.
    pub mis_limit: usize,
    /// Maximum node count for the exact chromatic-number solver.
    pub coloring_limit: usize,
    pub exec: ExecMode,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            partition_limit: 14,
            mis_limit: 48,
            coloring_limit: 40,
            exec: ExecMode::default(),
        }
    }
}

impl SolverConfig {
    pub fn with_partition_limit(mut self, n: usize) -> Self {
        self.partition_limit = n;
        self
    }

    pub fn with_mis_limit(mut self, n: usize) -> Self {
        self.mis_limit = n;
        self
    }

    pub fn with_coloring_limit(mut self, n: usize) -> Self {
        self.coloring_limit = n;
        self
    }

    pub fn with_exec(mut self, exec: ExecMode) -> Self {
        self.exec = exec;
        self
    }

    /// Raise every ceiling by scaling the default with `factor`. Used by the
    /// CLI `--oracle-bound` override, which scales the partition limit and
    /// moves the other ceilings in proportion.
    pub fn with_oracle_bound(mut self, bound: usize) -> Self {
        self.partition_limit = bound;
        self.mis_limit = self.mis_limit.max(bound);
        self.coloring_limit = self.coloring_limit.max(bound);
        self
    }

    pub(crate) fn check_partition(&self, n: usize) -> Result<()> {
        if n > self.partition_limit {
            Err(Error::BoundExceeded {
                n,
                bound: self.partition_limit,
            })
        } else {
            Ok(())
        }
    }

    pub(crate) fn check_mis(&self, n: usize) -> Result<()> {
        if n > self.mis_limit {
            Err(Error::BoundExceeded {
                n,
                bound: self.mis_limit,
            })
        } else {
            Ok(())
        }
    }

    pub(crate) fn check_coloring(&self, n: usize) -> Result<()> {
        if n > self.coloring_limit {
            Err(Error::BoundExceeded {
                n,
                bound: self.coloring_limit,
            })
        } else {
            Ok(())
        }
    }
}
