//! Whole-graph structure learners.
//!
//! * constraint-based: PC and PC-stable ([`pc_skeleton`] then collider
//!   orientation and Meek closure);
//! * blanket composition: GSBN (grow–shrink blankets) and F2SL-c (FBED
//!   blankets), which assemble a skeleton from per-node results and orient
//!   it like PC;
//! * score-based and hybrid: GES over equivalence classes, and MMHC and
//!   F2SL-s, which hill-climb inside a constraint-based skeleton.

pub mod orient;
mod pc;
mod search;

use std::collections::BTreeSet;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::algorithm::{Algorithm, Family};
use crate::ci::CiSession;
use crate::error::{Error, Result};
use crate::graph::{dag_to_cpdag, Dag, Pdag, Skeleton};
use crate::mb::{blanket, learn_pc_set, split_blanket, MbOptions, PcVariant};
use crate::parallel::{map_range, Execution};
use crate::score::{ScoreKind, Scorer};
use crate::subsets::find_subset_up_to;

pub use orient::{orient_colliders, SepsetMap};
pub use pc::{orient_colliders_majority, pc_skeleton, PcSkeleton};
pub use search::{
    apply_operator, ges, ges_operators, hill_climb_restricted, GesOperator, GesOutcome,
    OperatorKind, MAX_STALE_STEPS, MIN_IMPROVEMENT, TABU_LENGTH,
};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct GlobalOptions {
    /// Score for GES, MMHC and F2SL-s; `None` picks BDeu for discrete data
    /// and BIC for continuous data.
    pub score: Option<ScoreKind>,
    pub mb: MbOptions,
    #[serde(skip)]
    pub execution: Execution,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StructureResult {
    /// The learned class (constraint-based) or the class of `dag`.
    pub graph: Pdag,
    /// The DAG found by score-based learners.
    pub dag: Option<Dag>,
    pub algorithm: Algorithm,
    pub n_ci_tests: u64,
    pub n_score_evals: u64,
    pub elapsed: f64,
}

/// Runs one of the seven whole-graph learners.
///
/// Score-based learners read the dataset behind `session` and fail on an
/// oracle session.
pub fn learn_global(
    session: &mut CiSession,
    algorithm: Algorithm,
    opts: &GlobalOptions,
) -> Result<StructureResult> {
    if algorithm.family() != Family::Global {
        return Err(Error::InvalidParameter(format!(
            "{algorithm} is not a whole-graph learner"
        )));
    }
    if algorithm.uses_score() && session.is_oracle() {
        return Err(Error::OracleUnsupported(algorithm.name()));
    }
    let start = Instant::now();
    let before = session.counter().total_tests;
    let names = session.var_names().to_vec();
    let mut n_score_evals = 0;
    let mut dag = None;
    let graph = if names.len() < 2 {
        if algorithm.uses_score() {
            dag = Some(Dag::empty(names.clone())?);
        }
        Pdag::empty(names)
    } else {
        match algorithm {
            Algorithm::Pc | Algorithm::PcStable => {
                let stable = algorithm == Algorithm::PcStable;
                let sk = pc_skeleton(session, stable, opts.execution)?;
                if stable {
                    orient_colliders_majority(session, names, &sk)?
                } else {
                    orient_colliders(names, &sk.skeleton, &sk.sepsets)
                }
            }
            Algorithm::Gsbn | Algorithm::F2slC => {
                let sk = composed_skeleton(session, algorithm, opts)?;
                orient_colliders(names, &sk.skeleton, &sk.sepsets)
            }
            _ => {
                let data = session
                    .tester()
                    .dataset()
                    .cloned()
                    .expect("oracle sessions were rejected above");
                let kind = opts.score.unwrap_or_else(|| ScoreKind::default_for(&data));
                let mut scorer = Scorer::new(&data, kind)?;
                let learned = if algorithm == Algorithm::Ges {
                    ges(&mut scorer)?.dag
                } else {
                    let sk = composed_skeleton(session, algorithm, opts)?;
                    hill_climb_restricted(&mut scorer, &sk.skeleton)?
                };
                n_score_evals = scorer.n_evals();
                let cpdag = dag_to_cpdag(&learned);
                dag = Some(learned);
                cpdag
            }
        }
    };
    Ok(StructureResult {
        graph,
        dag,
        algorithm,
        n_ci_tests: session.counter().total_tests - before,
        n_score_evals,
        elapsed: start.elapsed().as_secs_f64(),
    })
}

/// Per-node neighbourhood used to assemble a skeleton.
struct NodeView {
    /// Variables this node keeps as candidate neighbours.
    candidates: BTreeSet<usize>,
    /// The node's blanket, when one was learned.
    blanket: Option<BTreeSet<usize>>,
    sepsets: crate::mb::Sepsets,
}

fn node_view(
    session: &mut CiSession,
    v: usize,
    algorithm: Algorithm,
    mb: MbOptions,
) -> Result<NodeView> {
    Ok(match algorithm {
        Algorithm::Mmhc => {
            let set = learn_pc_set(session, v, PcVariant::Mmpc)?;
            NodeView {
                candidates: set.pc,
                blanket: None,
                sepsets: set.sepsets,
            }
        }
        Algorithm::Gsbn => {
            let b = blanket(session, v, Algorithm::Gs, mb)?.mb;
            NodeView {
                candidates: b.clone(),
                blanket: Some(b),
                sepsets: Default::default(),
            }
        }
        _ => {
            let b = blanket(session, v, Algorithm::Fbed, mb)?.mb;
            let (pc, sepsets) = split_blanket(session, v, &b)?;
            NodeView {
                candidates: pc,
                blanket: Some(b),
                sepsets,
            }
        }
    })
}

/// Skeleton from per-node results by the AND rule: `x − y` survives only
/// when each lists the other. GSBN lists blanket members and additionally
/// drops the pair when a subset of the smaller blanket separates it.
fn composed_skeleton(
    session: &mut CiSession,
    algorithm: Algorithm,
    opts: &GlobalOptions,
) -> Result<PcSkeleton> {
    let n = session.n_vars();
    let parent = &*session;
    let runs = map_range(opts.execution, n, |v| {
        let mut fork = parent.fork();
        let view = node_view(&mut fork, v, algorithm, opts.mb);
        (fork, view)
    });
    let mut views = Vec::with_capacity(n);
    for (fork, view) in runs {
        session.absorb(fork);
        views.push(view?);
    }
    let cap = session.max_cond();
    let mut skeleton = Skeleton::empty(n);
    let mut sepsets = SepsetMap::new();
    for x in 0..n {
        for y in x + 1..n {
            let listed = views[x].candidates.contains(&y) && views[y].candidates.contains(&x);
            let mut sep = None;
            if listed && algorithm == Algorithm::Gsbn {
                let bx = views[x].blanket.as_ref().expect("blanket learned");
                let by = views[y].blanket.as_ref().expect("blanket learned");
                let smaller = if by.len() < bx.len() { by } else { bx };
                let pool: Vec<usize> = smaller
                    .iter()
                    .copied()
                    .filter(|&v| v != x && v != y)
                    .collect();
                sep = find_subset_up_to(&pool, cap, |s| session.independent(x, y, s))?;
            }
            if listed && sep.is_none() {
                skeleton.add(x, y);
                continue;
            }
            let z = sep
                .or_else(|| recorded_sepset(&views, x, y))
                .or_else(|| recorded_sepset(&views, y, x));
            if let Some(z) = z {
                sepsets.insert((x, y), z);
            }
        }
    }
    Ok(PcSkeleton { skeleton, sepsets })
}

fn recorded_sepset(views: &[NodeView], a: usize, b: usize) -> Option<Vec<usize>> {
    let v = &views[a];
    if let Some(z) = v.sepsets.get(&b) {
        return Some(z.clone());
    }
    v.blanket
        .as_ref()
        .filter(|m| !m.contains(&b))
        .map(|m| m.iter().copied().collect())
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;

    #[test]
    fn oracle_recovers_collider_chain_class() {
        let g = Arc::new(
            Dag::from_named_edges(
                &["A", "B", "C", "D", "E"],
                &[("A", "C"), ("B", "C"), ("C", "D"), ("D", "E")],
            )
            .unwrap(),
        );
        let truth = dag_to_cpdag(&g);
        for a in [
            Algorithm::Pc,
            Algorithm::PcStable,
            Algorithm::Gsbn,
            Algorithm::F2slC,
        ] {
            let mut s = CiSession::oracle(Arc::clone(&g));
            let r = learn_global(&mut s, a, &GlobalOptions::default()).unwrap();
            assert_eq!(r.graph, truth, "{a}");
            assert!(r.n_ci_tests > 0);
        }
    }

    #[test]
    fn score_learners_reject_the_oracle() {
        let g = Arc::new(Dag::from_named_edges(&["A", "B"], &[("A", "B")]).unwrap());
        for a in [Algorithm::Ges, Algorithm::Mmhc, Algorithm::F2slS] {
            let mut s = CiSession::oracle(Arc::clone(&g));
            assert_eq!(
                learn_global(&mut s, a, &GlobalOptions::default()),
                Err(Error::OracleUnsupported(a.name()))
            );
        }
    }
}
