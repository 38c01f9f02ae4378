//! Parameterised Bayesian networks, network-file parsing, exact marginals
//! for small networks, forward sampling and dataset text I/O.

mod bif;
mod dataset;
mod discrete;
mod exact;
mod gaussian;
mod sample;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Dag, GraphError};

pub use bif::parse_discrete_network;
pub use dataset::{read_dataset, write_dataset, Column, ColumnKind, Dataset, DatasetError};
pub use discrete::{Cpt, DiscreteBn};
pub use exact::{exact_marginal, exact_marginals, MAX_JOINT_STATES};
pub use gaussian::{parse_gaussian_network, GaussianBn};
pub use sample::{forward_sample, forward_sample_with, row_rng};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BnError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid network: {0}")]
    Validation(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("joint state space of {0} states exceeds the enumeration limit")]
    TooLarge(f64),
    #[error("sample count must be at least 1")]
    ZeroSamples,
}

/// Name and size of a network, as listed in benchmark tables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BnDescriptor {
    pub name: String,
    pub node_count: usize,
    pub arc_count: usize,
}

/// Either kind of parameterised network.
#[derive(Debug, Clone, PartialEq)]
pub enum Network {
    Discrete(DiscreteBn),
    Gaussian(GaussianBn),
}

impl Network {
    pub fn graph(&self) -> &Dag {
        match self {
            Network::Discrete(bn) => bn.graph(),
            Network::Gaussian(bn) => bn.graph(),
        }
    }

    pub fn descriptor(&self) -> BnDescriptor {
        match self {
            Network::Discrete(bn) => bn.descriptor(),
            Network::Gaussian(bn) => bn.descriptor(),
        }
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self, Network::Discrete(_))
    }

    /// Parses either format, choosing by content: descriptors consist of
    /// `node`/`arc` lines, everything else is treated as BIF.
    pub fn parse(text: &str) -> Result<Network, BnError> {
        let first = text
            .lines()
            .map(str::trim)
            .find(|l| !l.is_empty() && !l.starts_with('#') && !l.starts_with("//"));
        let is_descriptor = first
            .map(|l| {
                let word = l.split_whitespace().next().unwrap_or("");
                word == "node" || word == "arc" || (word == "network" && !l.contains('{'))
            })
            .unwrap_or(false);
        if is_descriptor {
            parse_gaussian_network(text).map(Network::Gaussian)
        } else {
            parse_discrete_network(text).map(Network::Discrete)
        }
    }
}

impl From<DiscreteBn> for Network {
    fn from(bn: DiscreteBn) -> Self {
        Network::Discrete(bn)
    }
}

impl From<GaussianBn> for Network {
    fn from(bn: GaussianBn) -> Self {
        Network::Gaussian(bn)
    }
}
