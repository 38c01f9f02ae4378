//! Causal discovery toolkit.
//!
//! Three layers, bottom to top:
//!
//! * data: [`bn`] parses discrete (BIF) and linear-Gaussian networks, draws
//!   forward samples and reads/writes tab-separated datasets; [`networks`]
//!   bundles the small benchmark networks.
//! * algorithms: [`mb`] (15 Markov blanket learners), [`local`] (4 local
//!   structure learners) and [`global`] (7 whole-graph learners), all driven
//!   by the conditional-independence layer in [`ci`] and the decomposable
//!   scores in [`score`].
//! * evaluation: [`metrics`] compares learned sets and graphs with ground
//!   truth extracted through [`graph`].

pub mod algorithm;
pub mod bn;
pub mod ci;
pub mod error;
pub mod global;
pub mod graph;
pub mod local;
pub mod mb;
pub mod metrics;
pub mod networks;
pub mod parallel;
pub mod score;
mod subsets;

pub use algorithm::{Algorithm, Family};
pub use error::{Error, Result};
pub use graph::{Dag, GraphError, LocalStructure, Pdag};
