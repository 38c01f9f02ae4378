use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::graph::{dag_to_cpdag, Dag, GraphError, Pdag, Skeleton};
use crate::score::{ScoreError, Scorer};

/// Moves must improve the score by more than this to be taken.
pub const MIN_IMPROVEMENT: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Move {
    Add,
    Delete,
    Reverse,
}

fn reaches(parents: &[BTreeSet<usize>], from: usize, to: usize) -> bool {
    // walk parent links backwards from `to`
    let mut seen = vec![false; parents.len()];
    let mut stack = vec![to];
    while let Some(v) = stack.pop() {
        if v == from {
            return true;
        }
        for &p in &parents[v] {
            if !seen[p] {
                seen[p] = true;
                stack.push(p);
            }
        }
    }
    false
}

fn with(set: &BTreeSet<usize>, add: Option<usize>, drop: Option<usize>) -> Vec<usize> {
    set.iter()
        .copied()
        .filter(|&v| Some(v) != drop)
        .chain(add)
        .collect()
}

/// Recently visited structures a tabu step may not return to.
pub const TABU_LENGTH: usize = 100;
/// Consecutive steps without a new best score before the search stops.
pub const MAX_STALE_STEPS: usize = 15;

fn edge_list(parents: &[BTreeSet<usize>]) -> Vec<(usize, usize)> {
    parents
        .iter()
        .enumerate()
        .flat_map(|(y, ps)| ps.iter().map(move |&x| (x, y)))
        .collect()
}

/// The edge list after applying `m` to `x → y`, sorted by child.
fn after(parents: &[BTreeSet<usize>], x: usize, y: usize, m: Move) -> Vec<(usize, usize)> {
    let mut next = parents.to_vec();
    match m {
        Move::Add => {
            next[y].insert(x);
        }
        Move::Delete => {
            next[y].remove(&x);
        }
        Move::Reverse => {
            next[y].remove(&x);
            next[x].insert(y);
        }
    }
    edge_list(&next)
}

/// Search from the empty graph over single-edge additions (only along
/// `skeleton` edges), deletions and reversals.
///
/// Each step takes the move with the largest score gain whose result is not
/// among the last [`TABU_LENGTH`] structures; equal gains go to the first
/// move in `(from, to, add < delete < reverse)` order. Steps continue
/// through non-improving moves and the search stops after
/// [`MAX_STALE_STEPS`] steps without beating the best score by more than
/// [`MIN_IMPROVEMENT`]. The best structure seen is returned.
pub fn hill_climb_restricted(
    scorer: &mut Scorer<'_>,
    skeleton: &Skeleton,
) -> Result<Dag, ScoreError> {
    let data = scorer.data();
    let n = data.n_cols();
    if skeleton.n_nodes() != n {
        return Err(ScoreError::Mismatch {
            graph: skeleton.n_nodes(),
            data: n,
        });
    }
    let mut parents: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    let mut local: Vec<f64> = (0..n)
        .map(|v| scorer.local(v, &[]))
        .collect::<Result<_, _>>()?;
    let mut tabu: VecDeque<Vec<(usize, usize)>> = VecDeque::from([Vec::new()]);
    let mut best_edges = Vec::new();
    let mut best_score: f64 = local.iter().sum();
    let mut stale = 0;
    while stale < MAX_STALE_STEPS {
        let mut best: Option<(f64, usize, usize, Move)> = None;
        let mut moves = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if x == y {
                    continue;
                }
                if parents[y].contains(&x) {
                    let gain = scorer.local(y, &with(&parents[y], None, Some(x)))? - local[y];
                    moves.push((gain, x, y, Move::Delete));
                    // reversal is legal unless another path x ⇝ y remains
                    parents[y].remove(&x);
                    let cyclic = reaches(&parents, x, y);
                    parents[y].insert(x);
                    if !cyclic {
                        let gain =
                            gain + scorer.local(x, &with(&parents[x], Some(y), None))? - local[x];
                        moves.push((gain, x, y, Move::Reverse));
                    }
                } else if !parents[x].contains(&y)
                    && skeleton.adjacent(x, y)
                    && !reaches(&parents, y, x)
                {
                    let gain = scorer.local(y, &with(&parents[y], Some(x), None))? - local[y];
                    moves.push((gain, x, y, Move::Add));
                }
            }
        }
        for (gain, x, y, m) in moves {
            if best.is_none_or(|b| gain > b.0) && !tabu.contains(&after(&parents, x, y, m)) {
                best = Some((gain, x, y, m));
            }
        }
        let Some((_, x, y, m)) = best else { break };
        match m {
            Move::Add => {
                parents[y].insert(x);
            }
            Move::Delete => {
                parents[y].remove(&x);
            }
            Move::Reverse => {
                parents[y].remove(&x);
                parents[x].insert(y);
                local[x] = scorer.local(x, &with(&parents[x], None, None))?;
            }
        }
        local[y] = scorer.local(y, &with(&parents[y], None, None))?;
        let edges = edge_list(&parents);
        let score: f64 = local.iter().sum();
        if score > best_score + MIN_IMPROVEMENT {
            best_score = score;
            best_edges = edges.clone();
            stale = 0;
        } else {
            stale += 1;
        }
        if tabu.len() == TABU_LENGTH {
            tabu.pop_front();
        }
        tabu.push_back(edges);
    }
    Ok(Dag::new(data.names().to_vec(), best_edges)
        .expect("every accepted move keeps the graph acyclic"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OperatorKind {
    Insert,
    Delete,
}

/// One equivalence-class move: `Insert(x, y, T)` adds `x → y` and directs
/// `t → y` for `t ∈ T`; `Delete(x, y, H)` removes the `x`–`y` edge and
/// directs `y → h` and `x → h` for `h ∈ H`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GesOperator {
    pub kind: OperatorKind,
    pub x: usize,
    pub y: usize,
    pub set: Vec<usize>,
    pub delta: f64,
}

fn undirected_nbrs(p: &Pdag, v: usize) -> BTreeSet<usize> {
    p.neighbors(v).into_iter().collect()
}

fn is_clique(p: &Pdag, set: &BTreeSet<usize>) -> bool {
    let v: Vec<usize> = set.iter().copied().collect();
    v.iter()
        .enumerate()
        .all(|(i, &a)| v[i + 1..].iter().all(|&b| p.adjacent(a, b)))
}

/// Whether every semi-directed path from `from` to `to` meets `blocked`.
fn paths_blocked(p: &Pdag, from: usize, to: usize, blocked: &BTreeSet<usize>) -> bool {
    let mut seen = vec![false; p.n_nodes()];
    seen[from] = true;
    let mut stack = vec![from];
    while let Some(v) = stack.pop() {
        for w in p.children(v).into_iter().chain(p.neighbors(v)) {
            if w == to {
                return false;
            }
            if !seen[w] && !blocked.contains(&w) {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    true
}

fn subsets(items: &[usize]) -> impl Iterator<Item = BTreeSet<usize>> + '_ {
    assert!(
        items.len() < 32,
        "operator subset enumeration is limited to 31 candidates"
    );
    (0u32..(1 << items.len())).map(move |mask| {
        items
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &v)| v)
            .collect()
    })
}

fn family(
    p: &Pdag,
    y: usize,
    extra: &BTreeSet<usize>,
    add: Option<usize>,
    drop: Option<usize>,
) -> Vec<usize> {
    let mut s: BTreeSet<usize> = p.parents(y).into_iter().collect();
    s.extend(extra);
    s.extend(add);
    if let Some(d) = drop {
        s.remove(&d);
    }
    s.into_iter().collect()
}

/// Every valid insert and delete operator on the class `state`, with score
/// deltas, ordered by `(x, y)` and then subset bitmask; inserts first.
pub fn ges_operators(
    state: &Pdag,
    scorer: &mut Scorer<'_>,
) -> Result<Vec<GesOperator>, ScoreError> {
    let n = state.n_nodes();
    let mut out = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if x == y || state.adjacent(x, y) {
                continue;
            }
            let ny = undirected_nbrs(state, y);
            let na: BTreeSet<usize> = ny
                .iter()
                .copied()
                .filter(|&t| state.adjacent(t, x))
                .collect();
            let t0: Vec<usize> = ny
                .iter()
                .copied()
                .filter(|&t| !state.adjacent(t, x))
                .collect();
            for t in subsets(&t0) {
                let clique: BTreeSet<usize> = na.union(&t).copied().collect();
                if !is_clique(state, &clique) || !paths_blocked(state, y, x, &clique) {
                    continue;
                }
                let delta = scorer.local(y, &family(state, y, &clique, Some(x), None))?
                    - scorer.local(y, &family(state, y, &clique, None, None))?;
                out.push(GesOperator {
                    kind: OperatorKind::Insert,
                    x,
                    y,
                    set: t.into_iter().collect(),
                    delta,
                });
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            let edge = state.has_directed(x, y) || state.has_undirected(x, y);
            if !edge {
                continue;
            }
            let na: Vec<usize> = undirected_nbrs(state, y)
                .into_iter()
                .filter(|&h| h != x && state.adjacent(h, x))
                .collect();
            for h in subsets(&na) {
                let rest: BTreeSet<usize> = na.iter().copied().filter(|v| !h.contains(v)).collect();
                if !is_clique(state, &rest) {
                    continue;
                }
                let delta = scorer.local(y, &family(state, y, &rest, None, Some(x)))?
                    - scorer.local(y, &family(state, y, &rest, Some(x), None))?;
                out.push(GesOperator {
                    kind: OperatorKind::Delete,
                    x,
                    y,
                    set: h.into_iter().collect(),
                    delta,
                });
            }
        }
    }
    Ok(out)
}

/// Applies `op` and returns the completed class.
pub fn apply_operator(state: &Pdag, op: &GesOperator) -> Result<Pdag, GraphError> {
    let mut p = state.clone();
    match op.kind {
        OperatorKind::Insert => {
            p.add_directed(op.x, op.y);
            for &t in &op.set {
                p.orient(t, op.y);
            }
        }
        OperatorKind::Delete => {
            p.remove_edge(op.x, op.y);
            for &h in &op.set {
                p.orient(op.y, h);
                p.orient(op.x, h);
            }
        }
    }
    Ok(dag_to_cpdag(&p.to_dag()?))
}

/// Greedy equivalence search output.
#[derive(Debug, Clone, PartialEq)]
pub struct GesOutcome {
    pub cpdag: Pdag,
    pub dag: Dag,
    /// Score after each applied operator, starting from the empty graph.
    pub trace: Vec<f64>,
    pub n_forward: usize,
}

fn best(ops: Vec<GesOperator>, kind: OperatorKind) -> Option<GesOperator> {
    let mut best: Option<GesOperator> = None;
    for op in ops
        .into_iter()
        .filter(|o| o.kind == kind && o.delta > MIN_IMPROVEMENT)
    {
        if best.as_ref().is_none_or(|b| op.delta > b.delta) {
            best = Some(op);
        }
    }
    best
}

/// Forward insertions while one improves the score, then backward
/// deletions likewise.
pub fn ges(scorer: &mut Scorer<'_>) -> Result<GesOutcome, ScoreError> {
    let names = scorer.data().names().to_vec();
    let mut state = Pdag::empty(names.clone());
    let empty = Dag::empty(names).expect("dataset names are valid");
    let mut trace = vec![scorer.score_dag(&empty)?];
    let mut n_forward = 0;
    for kind in [OperatorKind::Insert, OperatorKind::Delete] {
        while let Some(op) = best(ges_operators(&state, scorer)?, kind) {
            state = apply_operator(&state, &op).expect("valid operators keep the class extendable");
            let dag = state.to_dag().expect("a completed class is extendable");
            trace.push(scorer.score_dag(&dag)?);
            if kind == OperatorKind::Insert {
                n_forward += 1;
            }
        }
    }
    let dag = state.to_dag().expect("a completed class is extendable");
    Ok(GesOutcome {
        cpdag: state,
        dag,
        trace,
        n_forward,
    })
}
