#![allow(dead_code)]

use std::sync::Arc;

use causalkit::networks::BUNDLED;
use causalkit::Dag;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("X{i}")).collect()
}

/// Every labelled DAG on `n` nodes: each unordered pair is absent, forward
/// or backward, and cyclic combinations are discarded.
pub fn all_dags(n: usize) -> Vec<Dag> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect();
    let total = 3usize.pow(pairs.len() as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut c = code;
        let mut edges = Vec::new();
        for &(a, b) in &pairs {
            match c % 3 {
                1 => edges.push((a, b)),
                2 => edges.push((b, a)),
                _ => {}
            }
            c /= 3;
        }
        if let Ok(g) = Dag::new(names(n), edges) {
            out.push(g);
        }
    }
    out
}

/// Random DAG: a random node order, each forward pair present with
/// probability `p`.
pub fn random_dag(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Dag {
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.random_range(0..=i));
    }
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < p {
                edges.push((order[i], order[j]));
            }
        }
    }
    Dag::new(names(n), edges).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The bundled discrete networks' graphs.
pub fn discrete_graphs() -> Vec<(&'static str, Arc<Dag>)> {
    BUNDLED
        .iter()
        .filter(|b| b.discrete)
        .map(|b| (b.name, Arc::new(b.load().unwrap().graph().clone())))
        .collect()
}

/// Every bundled network's graph.
pub fn all_graphs() -> Vec<(&'static str, Arc<Dag>)> {
    BUNDLED
        .iter()
        .map(|b| (b.name, Arc::new(b.load().unwrap().graph().clone())))
        .collect()
}
