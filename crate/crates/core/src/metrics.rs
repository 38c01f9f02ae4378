//! Accuracy and efficiency metrics.
//!
//! Set outputs (blankets, parents-and-children) are scored with
//! [`SetMetrics`]; graph outputs with the ten [`StructureMetrics`] fields,
//! always against the true equivalence class rather than the true DAG.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::ci::CiCounter;
use crate::graph::{dag_to_cpdag, Dag, GraphError, Pdag};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SetMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Euclidean distance from the perfect point `(1, 1)`.
    pub distance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StructureMetrics {
    pub ar_precision: f64,
    pub ar_recall: f64,
    pub ar_f1: f64,
    pub ad_precision: f64,
    pub ad_recall: f64,
    pub ad_f1: f64,
    pub shd: usize,
    pub extra_edges: usize,
    pub missing_edges: usize,
    pub reversed_edges: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EfficiencyMetrics {
    pub elapsed_seconds: f64,
    /// CI tests for constraint-based runs, score evaluations otherwise.
    pub n_ci_tests_or_score_evals: u64,
}

/// `hits / total`, with an empty denominator scoring 1 when the other side
/// is empty too and 0 otherwise.
fn ratio(hits: usize, total: usize, other_total: usize) -> f64 {
    match (total, other_total) {
        (0, 0) => 1.0,
        (0, _) => 0.0,
        _ => hits as f64 / total as f64,
    }
}

fn f1(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

fn prf<T: Ord>(learned: &BTreeSet<T>, truth: &BTreeSet<T>) -> (f64, f64, f64) {
    let hits = learned.intersection(truth).count();
    let p = ratio(hits, learned.len(), truth.len());
    let r = ratio(hits, truth.len(), learned.len());
    (p, r, f1(p, r))
}

pub fn compare_sets(learned: &BTreeSet<usize>, truth: &BTreeSet<usize>) -> SetMetrics {
    let (precision, recall, f1) = prf(learned, truth);
    let distance = ((1.0 - precision).powi(2) + (1.0 - recall).powi(2)).sqrt();
    SetMetrics {
        precision,
        recall,
        f1,
        distance,
    }
}

/// Compares a learned graph with the equivalence class of `truth`.
///
/// Node names must agree as sets; `learned` is reordered to match `truth`.
pub fn compare_structure(learned: &Pdag, truth: &Dag) -> Result<StructureMetrics, GraphError> {
    compare_pdags(learned, &dag_to_cpdag(truth))
}

/// Compares two partially directed graphs edge by edge.
///
/// Each unordered pair is in one of four states: absent, `a → b`, `b → a`
/// or `a − b`. The SHD counts the pairs whose states differ, which is the
/// least number of single-edge additions, removals and orientation changes
/// that turn one graph into the other.
pub fn compare_pdags(learned: &Pdag, truth: &Pdag) -> Result<StructureMetrics, GraphError> {
    let learned = learned.relabel_to(truth.names())?;
    let ad_l = learned.skeleton_pairs();
    let ad_t = truth.skeleton_pairs();
    let (ad_precision, ad_recall, ad_f1) = prf(&ad_l, &ad_t);
    let (ar_precision, ar_recall, ar_f1) = prf(learned.directed_edges(), truth.directed_edges());

    let extra_edges = ad_l.difference(&ad_t).count();
    let missing_edges = ad_t.difference(&ad_l).count();
    let state = |p: &Pdag, a: usize, b: usize| {
        (
            p.has_directed(a, b),
            p.has_directed(b, a),
            p.has_undirected(a, b),
        )
    };
    let reversed_edges = ad_l
        .intersection(&ad_t)
        .filter(|&&(a, b)| state(&learned, a, b) != state(truth, a, b))
        .count();
    Ok(StructureMetrics {
        ar_precision,
        ar_recall,
        ar_f1,
        ad_precision,
        ad_recall,
        ad_f1,
        shd: extra_edges + missing_edges + reversed_edges,
        extra_edges,
        missing_edges,
        reversed_edges,
    })
}

/// Snapshot of the two efficiency values for a finished run.
pub fn record_efficiency(n_tests_or_evals: u64, elapsed_seconds: f64) -> EfficiencyMetrics {
    EfficiencyMetrics {
        elapsed_seconds,
        n_ci_tests_or_score_evals: n_tests_or_evals,
    }
}

pub fn record_ci_efficiency(counter: &CiCounter, elapsed_seconds: f64) -> EfficiencyMetrics {
    record_efficiency(counter.total_tests, elapsed_seconds)
}
