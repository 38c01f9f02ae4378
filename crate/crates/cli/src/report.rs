//! The JSON document written by `learn` and read back by `evaluate`.

use std::collections::BTreeSet;

use causalkit::metrics::{EfficiencyMetrics, SetMetrics, StructureMetrics};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    /// Arguments as given, program name excluded.
    pub command: Vec<String>,
    pub algorithm: String,
    pub family: String,
    pub parameters: Parameters,
    pub inputs: Vec<InputDigest>,
    pub variables: Vec<String>,
    pub result: Payload,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure_metrics: Option<StructureMetrics>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub set_metrics: Option<SetMetrics>,
    pub efficiency: EfficiencyMetrics,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Parameters {
    pub alpha: f64,
    pub data_type: String,
    /// Effective conditioning-set cap.
    pub max_cond: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub score: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ess: Option<f64>,
    pub fbed_k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_visited: Option<usize>,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDigest {
    pub role: String,
    pub path: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn of(role: &str, path: &str, bytes: &[u8]) -> Self {
        InputDigest {
            role: role.into(),
            path: path.into(),
            sha256: hex::encode(Sha256::digest(bytes)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    /// Whole-graph result in the graph text format.
    Structure {
        graph: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dag: Option<String>,
    },
    Local {
        target: String,
        parents: Vec<String>,
        children: Vec<String>,
        undirected: Vec<String>,
        spouses: Vec<String>,
        visited: Vec<String>,
    },
    Blanket {
        target: String,
        markov_blanket: Vec<String>,
        #[serde(default)]
        parents_and_children: Vec<String>,
    },
}

pub fn names_of(set: &BTreeSet<usize>, names: &[String]) -> Vec<String> {
    set.iter().map(|&i| names[i].clone()).collect()
}

impl RunReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialise");
        s.push('\n');
        s
    }

    /// The report with timing removed, for comparing repeated runs.
    pub fn without_timing(&self) -> RunReport {
        let mut r = self.clone();
        r.efficiency.elapsed_seconds = 0.0;
        r
    }
}
