//! Decomposable network scores (BDeu and BIC) and a caching scorer used by
//! the score-based searches.

mod bdeu;
mod bic;

use std::collections::HashMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bn::Dataset;
use crate::graph::Dag;

pub use bdeu::bdeu_local;
pub use bic::bic_local;

/// Default BDeu equivalent sample size.
pub const DEFAULT_ESS: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScoreError {
    #[error("column {0} is not discrete")]
    NotDiscrete(usize),
    #[error("dataset mixes discrete and continuous columns")]
    MixedData,
    #[error("node {0} cannot be its own parent")]
    SelfParent(usize),
    #[error("parent {0} listed twice")]
    DuplicateParent(usize),
    #[error("variable {0} out of range")]
    UnknownVariable(usize),
    #[error("equivalent sample size must be positive, got {0}")]
    Ess(f64),
    #[error("regression of node {0} on its parents is degenerate")]
    Degenerate(usize),
    #[error("graph has {graph} nodes but the dataset has {data} columns")]
    Mismatch { graph: usize, data: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ScoreKind {
    Bdeu { ess: f64 },
    Bic,
}

impl ScoreKind {
    pub fn name(self) -> &'static str {
        match self {
            ScoreKind::Bdeu { .. } => "bdeu",
            ScoreKind::Bic => "bic",
        }
    }

    /// BDeu for discrete data, BIC otherwise.
    pub fn default_for(data: &Dataset) -> ScoreKind {
        if data.all_discrete() {
            ScoreKind::Bdeu { ess: DEFAULT_ESS }
        } else {
            ScoreKind::Bic
        }
    }
}

/// The score contribution of one node given a parent set (log scale).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalScore {
    pub node: usize,
    pub parents: Vec<usize>,
    pub value: f64,
}

pub(crate) fn check_family(
    n_cols: usize,
    node: usize,
    parents: &[usize],
) -> Result<Vec<usize>, ScoreError> {
    if node >= n_cols {
        return Err(ScoreError::UnknownVariable(node));
    }
    let mut sorted = parents.to_vec();
    sorted.sort_unstable();
    for (i, &p) in sorted.iter().enumerate() {
        if p >= n_cols {
            return Err(ScoreError::UnknownVariable(p));
        }
        if p == node {
            return Err(ScoreError::SelfParent(node));
        }
        if i > 0 && sorted[i - 1] == p {
            return Err(ScoreError::DuplicateParent(p));
        }
    }
    Ok(sorted)
}

/// Local-score evaluator with a cache keyed by `(node, sorted parents)`.
#[derive(Debug)]
pub struct Scorer<'a> {
    data: &'a Dataset,
    kind: ScoreKind,
    cov: Option<DMatrix<f64>>,
    cache: HashMap<(usize, Vec<usize>), f64>,
    evals: u64,
    hits: u64,
}

impl<'a> Scorer<'a> {
    pub fn new(data: &'a Dataset, kind: ScoreKind) -> Result<Self, ScoreError> {
        let cov = match kind {
            ScoreKind::Bdeu { ess } => {
                if !(ess > 0.0) || !ess.is_finite() {
                    return Err(ScoreError::Ess(ess));
                }
                if let Some(c) = (0..data.n_cols()).find(|&c| data.discrete(c).is_none()) {
                    return Err(ScoreError::NotDiscrete(c));
                }
                None
            }
            ScoreKind::Bic if data.all_discrete() => None,
            ScoreKind::Bic if data.all_continuous() => {
                let all: Vec<usize> = (0..data.n_cols()).collect();
                Some(bic::covariance(data, &all))
            }
            ScoreKind::Bic => return Err(ScoreError::MixedData),
        };
        Ok(Scorer {
            data,
            kind,
            cov,
            cache: HashMap::new(),
            evals: 0,
            hits: 0,
        })
    }

    pub fn data(&self) -> &'a Dataset {
        self.data
    }

    pub fn kind(&self) -> ScoreKind {
        self.kind
    }

    /// Distinct local-score computations so far.
    pub fn n_evals(&self) -> u64 {
        self.evals
    }

    pub fn cache_hits(&self) -> u64 {
        self.hits
    }

    pub fn local(&mut self, node: usize, parents: &[usize]) -> Result<f64, ScoreError> {
        let parents = check_family(self.data.n_cols(), node, parents)?;
        let key = (node, parents);
        if let Some(&v) = self.cache.get(&key) {
            self.hits += 1;
            return Ok(v);
        }
        let v = self.compute(key.0, &key.1)?;
        self.evals += 1;
        self.cache.insert(key, v);
        Ok(v)
    }

    fn compute(&self, node: usize, parents: &[usize]) -> Result<f64, ScoreError> {
        match (self.kind, &self.cov) {
            (ScoreKind::Bdeu { ess }, _) => bdeu::bdeu_value(self.data, node, parents, ess),
            (ScoreKind::Bic, Some(cov)) => {
                bic::gaussian_bic(cov, self.data.n_rows(), node, parents)
            }
            (ScoreKind::Bic, None) => bic::discrete_bic(self.data, node, parents),
        }
    }

    /// Sum of local scores over all nodes of `g`.
    pub fn score_dag(&mut self, g: &Dag) -> Result<f64, ScoreError> {
        if g.n_nodes() != self.data.n_cols() {
            return Err(ScoreError::Mismatch {
                graph: g.n_nodes(),
                data: self.data.n_cols(),
            });
        }
        (0..g.n_nodes()).map(|v| self.local(v, g.parents(v))).sum()
    }
}

/// Scores a whole DAG with a fresh scorer.
pub fn score_dag(data: &Dataset, g: &Dag, kind: ScoreKind) -> Result<f64, ScoreError> {
    Scorer::new(data, kind)?.score_dag(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bn::Column;

    fn data() -> Dataset {
        let a: Vec<u32> = (0..60).map(|i| (i % 3 == 0) as u32).collect();
        let b: Vec<u32> = (0..60)
            .map(|i| ((i % 3 == 0) ^ (i % 7 == 0)) as u32)
            .collect();
        let c: Vec<u32> = (0..60).map(|i| (i % 2) as u32).collect();
        let columns = [a, b, c]
            .into_iter()
            .map(|values| Column::Discrete {
                cardinality: 2,
                values,
            })
            .collect();
        Dataset::new(vec!["A".into(), "B".into(), "C".into()], columns).unwrap()
    }

    #[test]
    fn cache_is_transparent() {
        let d = data();
        let mut s = Scorer::new(&d, ScoreKind::Bdeu { ess: 1.0 }).unwrap();
        let first = s.local(1, &[2, 0]).unwrap();
        let again = s.local(1, &[0, 2]).unwrap();
        assert_eq!(first.to_bits(), again.to_bits());
        assert_eq!((s.n_evals(), s.cache_hits()), (1, 1));
        let fresh = bdeu_local(&d, 1, &[0, 2], 1.0).unwrap().value;
        assert_eq!(first.to_bits(), fresh.to_bits());
    }

    #[test]
    fn decomposes() {
        let d = data();
        let g = Dag::from_named_edges(&["A", "B", "C"], &[("A", "B"), ("C", "B")]).unwrap();
        let kind = ScoreKind::Bic;
        let total = score_dag(&d, &g, kind).unwrap();
        let parts = bic_local(&d, 0, &[]).unwrap().value
            + bic_local(&d, 1, &[0, 2]).unwrap().value
            + bic_local(&d, 2, &[]).unwrap().value;
        assert_eq!(total, parts);
    }

    #[test]
    fn rejects_bad_families() {
        let d = data();
        let mut s = Scorer::new(&d, ScoreKind::Bic).unwrap();
        assert_eq!(s.local(1, &[1]), Err(ScoreError::SelfParent(1)));
        assert_eq!(s.local(1, &[0, 0]), Err(ScoreError::DuplicateParent(0)));
        assert!(matches!(
            Scorer::new(&d, ScoreKind::Bdeu { ess: 0.0 }),
            Err(ScoreError::Ess(_))
        ));
    }
}
