//! Decomposable scores: equivalence-class invariance, a direct BDeu
//! computation, and monotone GES phases.

mod common;

use std::collections::HashMap;
use std::sync::Arc;

use causalkit::bn::{forward_sample, Column, Dataset};
use causalkit::global::ges;
use causalkit::graph::{dag_to_cpdag, GraphText};
use causalkit::networks::load_bundled;
use causalkit::score::{bdeu_local, score_dag, ScoreKind, Scorer};
use causalkit::Dag;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use statrs::function::gamma::ln_gamma;

/// Discrete data with some dependence between neighbouring columns.
fn discrete_data(k: usize, seed: u64) -> Dataset {
    let mut rng = common::rng(seed);
    let n = 300;
    let cards: Vec<u32> = (0..k).map(|i| 2 + (i as u32 % 2)).collect();
    let mut cols: Vec<Vec<u32>> = Vec::new();
    for i in 0..k {
        let col = (0..n)
            .map(|r| {
                if i > 0 && rng.random::<f64>() < 0.6 {
                    cols[i - 1][r] % cards[i]
                } else {
                    rng.random_range(0..cards[i])
                }
            })
            .collect();
        cols.push(col);
    }
    let names = common::names(k);
    let columns = cols
        .into_iter()
        .zip(&cards)
        .map(|(values, &cardinality)| Column::Discrete {
            cardinality,
            values,
        })
        .collect();
    Dataset::new(names, columns).unwrap()
}

fn continuous_data(k: usize, seed: u64) -> Dataset {
    let mut rng = common::rng(seed);
    let n = 300;
    let mut cols: Vec<Vec<f64>> = Vec::new();
    for i in 0..k {
        let col = (0..n)
            .map(|r| {
                let e: f64 = StandardNormal.sample(&mut rng);
                if i > 0 {
                    0.7 * cols[i - 1][r] + e
                } else {
                    e
                }
            })
            .collect();
        cols.push(col);
    }
    Dataset::new(
        common::names(k),
        cols.into_iter().map(Column::Continuous).collect(),
    )
    .unwrap()
}

fn check_equivalence(data: &Dataset, kind: ScoreKind) {
    let k = data.n_cols();
    let mut scorer = Scorer::new(data, kind).unwrap();
    let mut by_class: HashMap<String, Vec<f64>> = HashMap::new();
    for g in common::all_dags(k) {
        let s = scorer.score_dag(&g).unwrap();
        by_class
            .entry(dag_to_cpdag(&g).to_text())
            .or_default()
            .push(s);
    }
    for scores in by_class.values() {
        for s in scores {
            assert!((s - scores[0]).abs() <= 1e-8, "{kind:?}: {scores:?}");
        }
    }
}

#[test]
fn equivalent_dags_score_equally() {
    for k in [3, 4] {
        for seed in 0..3 {
            let d = discrete_data(k, seed);
            check_equivalence(&d, ScoreKind::Bdeu { ess: 1.0 });
            check_equivalence(&d, ScoreKind::Bdeu { ess: 10.0 });
            check_equivalence(&d, ScoreKind::Bic);
            check_equivalence(&continuous_data(k, 100 + seed), ScoreKind::Bic);
        }
    }
}

/// BDeu over every nominal parent configuration, empty ones included.
fn bdeu_direct(data: &Dataset, node: usize, parents: &[usize], ess: f64) -> f64 {
    let r = data.cardinality(node).unwrap() as usize;
    let cards: Vec<usize> = parents
        .iter()
        .map(|&p| data.cardinality(p).unwrap() as usize)
        .collect();
    let q: usize = cards.iter().product();
    let mut counts = vec![vec![0.0; r]; q];
    for row in 0..data.n_rows() {
        let j = parents.iter().zip(&cards).fold(0, |acc, (&p, &c)| {
            acc * c + data.discrete(p).unwrap()[row] as usize
        });
        counts[j][data.discrete(node).unwrap()[row] as usize] += 1.0;
    }
    let (aj, ajk) = (ess / q as f64, ess / (q * r) as f64);
    counts
        .iter()
        .map(|c| {
            let nj: f64 = c.iter().sum();
            ln_gamma(aj) - ln_gamma(aj + nj)
                + c.iter()
                    .map(|&n| ln_gamma(ajk + n) - ln_gamma(ajk))
                    .sum::<f64>()
        })
        .sum()
}

#[test]
fn bdeu_matches_direct_formula() {
    let data = discrete_data(4, 42);
    for (node, parents) in [
        (0, vec![]),
        (1, vec![0]),
        (3, vec![0, 2]),
        (2, vec![0, 1, 3]),
    ] {
        for ess in [0.5, 1.0, 7.0] {
            let lib = bdeu_local(&data, node, &parents, ess).unwrap().value;
            let direct = bdeu_direct(&data, node, &parents, ess);
            assert!(
                (lib - direct).abs() < 1e-8,
                "{node} {parents:?}: {lib} vs {direct}"
            );
        }
    }
}

#[test]
fn ges_trace_is_monotone_and_ends_at_the_dag_score() {
    let cases: Vec<(Arc<Dataset>, ScoreKind)> = vec![
        (
            Arc::new(forward_sample(&load_bundled("asia").unwrap().unwrap(), 2000, 3).unwrap()),
            ScoreKind::Bdeu { ess: 1.0 },
        ),
        (
            Arc::new(forward_sample(&load_bundled("sachs").unwrap().unwrap(), 2000, 4).unwrap()),
            ScoreKind::Bic,
        ),
        (Arc::new(continuous_data(6, 77)), ScoreKind::Bic),
    ];
    for (data, kind) in cases {
        let mut scorer = Scorer::new(&data, kind).unwrap();
        let out = ges(&mut scorer).unwrap();
        let empty = score_dag(&data, &Dag::empty(data.names().to_vec()).unwrap(), kind).unwrap();
        assert!((out.trace[0] - empty).abs() < 1e-6);
        assert!(
            out.trace.windows(2).all(|w| w[1] >= w[0]),
            "{:?}",
            out.trace
        );
        let last = *out.trace.last().unwrap();
        assert!((score_dag(&data, &out.dag, kind).unwrap() - last).abs() < 1e-6);
        assert_eq!(dag_to_cpdag(&out.dag), out.cpdag);
        assert!(out.n_forward < out.trace.len());
    }
}
