//! Directed and partially directed graphs, d-separation, ground-truth
//! neighbourhoods, and CPDAG machinery.
//!
//! Nodes are identified by index everywhere inside the crate; names are only
//! consulted at I/O boundaries.

mod dag;
mod dsep;
mod local;
mod meek;
mod pdag;
mod skeleton;
mod text;

use thiserror::Error;

pub use dag::{topological_order, Dag};
pub use dsep::{active_trail_length, d_separated};
pub use local::{true_local, LocalStructure};
pub use meek::{apply_meek_rules, apply_meek_rules_with, dag_to_cpdag};
pub use pdag::Pdag;
pub use skeleton::Skeleton;
pub use text::{parse_graph_text, GraphText};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("unknown node '{0}'")]
    UnknownNode(String),
    #[error("node index {0} out of range for a graph with {1} nodes")]
    NodeOutOfRange(usize, usize),
    #[error("duplicate node name '{0}'")]
    DuplicateName(String),
    #[error("self-loop on node '{0}'")]
    SelfLoop(String),
    #[error("more than one edge between '{0}' and '{1}'")]
    DuplicateEdge(String, String),
    #[error("edges contain a directed cycle")]
    Cycle,
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error("partially directed graph has no consistent DAG extension")]
    NotExtendable,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("node sets differ: {0}")]
    UniverseMismatch(String),
}

pub(crate) fn check_names(names: &[String]) -> Result<(), GraphError> {
    let mut seen = std::collections::HashSet::with_capacity(names.len());
    for n in names {
        if !seen.insert(n.as_str()) {
            return Err(GraphError::DuplicateName(n.clone()));
        }
    }
    Ok(())
}
