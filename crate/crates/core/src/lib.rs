//! Exact minimal and minimum-size upward/downward covering sets in dominance
//! graphs, the SAT gadget constructions that make them hard, and a harness
//! that checks those constructions' structural properties on small instances.

pub mod budget;
pub mod cnf;
pub mod covering;
pub mod graph;
pub mod harness;
pub mod mcgarvey;
pub mod reductions;
mod search;
pub mod set;
pub mod solver;

use thiserror::Error;

pub use budget::{Budget, BudgetDimension, BudgetExceeded};
pub use cnf::{Cnf, CnfError, Literal};
pub use covering::Direction;
pub use graph::{DominanceGraph, GraphError};
pub use set::AltSet;
pub use solver::{Notion, ProblemKind, SolveAnswer};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Cnf(#[from] CnfError),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
    #[error(transparent)]
    Reduction(#[from] reductions::ReductionError),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    /// Exhausted budgets and oversized inputs, as opposed to malformed input.
    pub fn is_resource(&self) -> bool {
        matches!(
            self,
            Error::Budget(_)
                | Error::Graph(GraphError::TooLarge { .. })
                | Error::Cnf(CnfError::TooManyVariables { .. })
                | Error::Reduction(reductions::ReductionError::TooLarge { .. })
                | Error::Reduction(reductions::ReductionError::Formula(CnfError::TooManyVariables { .. }))
        )
    }
}
