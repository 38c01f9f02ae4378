//! Graph primitives against brute-force definitions.

mod common;

use std::collections::BTreeSet;

use causalkit::graph::{active_trail_length, apply_meek_rules, d_separated, dag_to_cpdag};
use causalkit::{Dag, Pdag};
use rand::Rng;

/// Every simple path between `x` and `y` in the skeleton.
fn simple_paths(g: &Dag, x: usize, y: usize) -> Vec<Vec<usize>> {
    fn walk(g: &Dag, path: &mut Vec<usize>, y: usize, out: &mut Vec<Vec<usize>>) {
        let last = *path.last().unwrap();
        if last == y {
            out.push(path.clone());
            return;
        }
        for v in g.neighbors(last) {
            if !path.contains(&v) {
                path.push(v);
                walk(g, path, y, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    walk(g, &mut vec![x], y, &mut out);
    out
}

fn descendants(g: &Dag, v: usize) -> BTreeSet<usize> {
    let mut seen = BTreeSet::from([v]);
    let mut stack = vec![v];
    while let Some(u) = stack.pop() {
        for &c in g.children(u) {
            if seen.insert(c) {
                stack.push(c);
            }
        }
    }
    seen
}

/// Path blocking read straight off the definition.
fn connected_by_paths(g: &Dag, x: usize, y: usize, z: &[usize]) -> bool {
    simple_paths(g, x, y).iter().any(|p| {
        p.windows(3).all(|w| {
            let (a, m, b) = (w[0], w[1], w[2]);
            if g.has_edge(a, m) && g.has_edge(b, m) {
                descendants(g, m).iter().any(|d| z.contains(d))
            } else {
                !z.contains(&m)
            }
        })
    })
}

fn check_dsep(g: &Dag) {
    let n = g.n_nodes();
    for x in 0..n {
        for y in 0..n {
            if x == y {
                continue;
            }
            let rest: Vec<usize> = (0..n).filter(|&v| v != x && v != y).collect();
            for mask in 0..1u32 << rest.len() {
                let z: Vec<usize> = rest
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &v)| v)
                    .collect();
                let expected = !connected_by_paths(g, x, y, &z);
                assert_eq!(
                    d_separated(g, x, y, &z).unwrap(),
                    expected,
                    "{:?} {x} {y} {z:?}",
                    g.edges()
                );
                let len = active_trail_length(g, x, y, &z).unwrap();
                assert_eq!(len.is_none(), expected);
                if let Some(l) = len {
                    assert_eq!(l == 1, g.adjacent(x, y));
                }
            }
        }
    }
}

#[test]
fn dsep_matches_path_definition_on_all_small_dags() {
    for n in 1..=4 {
        for g in common::all_dags(n) {
            check_dsep(&g);
        }
    }
}

#[test]
fn dsep_matches_path_definition_on_random_dags() {
    let mut rng = common::rng(5);
    for _ in 0..40 {
        let n = rng.random_range(5..=7);
        check_dsep(&common::random_dag(n, 0.35, &mut rng));
    }
}

/// The equivalence class by brute force: every orientation of the skeleton
/// that is acyclic and has the same v-structures.
fn class_members(g: &Dag) -> Vec<Dag> {
    let pairs: Vec<(usize, usize)> = g.skeleton_pairs().into_iter().collect();
    let target = g.v_structures();
    let mut out = Vec::new();
    for mask in 0..1u32 << pairs.len() {
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| if mask >> i & 1 == 1 { (b, a) } else { (a, b) })
            .collect();
        if let Ok(h) = Dag::new(g.names().to_vec(), edges) {
            if h.v_structures() == target {
                out.push(h);
            }
        }
    }
    out
}

fn cpdag_by_enumeration(g: &Dag) -> Pdag {
    let members = class_members(g);
    let mut p = Pdag::empty(g.names().to_vec());
    for (a, b) in g.skeleton_pairs() {
        if members.iter().all(|h| h.has_edge(a, b)) {
            p.add_directed(a, b);
        } else if members.iter().all(|h| h.has_edge(b, a)) {
            p.add_directed(b, a);
        } else {
            p.add_undirected(a, b);
        }
    }
    p
}

#[test]
fn cpdag_matches_class_enumeration() {
    let mut graphs: Vec<Dag> = (1..=4).flat_map(common::all_dags).collect();
    let mut rng = common::rng(9);
    for _ in 0..150 {
        let n = rng.random_range(5..=7);
        let g = common::random_dag(n, 0.4, &mut rng);
        if g.n_edges() <= 13 {
            graphs.push(g);
        }
    }
    for g in &graphs {
        let cp = dag_to_cpdag(g);
        assert_eq!(cp, cpdag_by_enumeration(g), "{:?}", g.edges());
        let member = cp.to_dag().unwrap();
        assert_eq!(dag_to_cpdag(&member), cp);
    }
}

fn pattern(g: &Dag) -> Pdag {
    let mut p = Pdag::empty(g.names().to_vec());
    let heads: BTreeSet<(usize, usize)> = g
        .v_structures()
        .into_iter()
        .flat_map(|(a, m, b)| [(a, m), (b, m)])
        .collect();
    for (a, b) in g.edges() {
        if heads.contains(&(a, b)) {
            p.add_directed(a, b);
        } else {
            p.add_undirected(a, b);
        }
    }
    p
}

#[test]
fn meek_closure_is_order_invariant() {
    let mut rng = common::rng(21);
    for _ in 0..200 {
        let n = rng.random_range(4..=9);
        let g = common::random_dag(n, 0.35, &mut rng);
        let p = pattern(&g);
        let closed = apply_meek_rules(&p);
        assert_eq!(closed, dag_to_cpdag(&g));
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, rng.random_range(0..=i));
        }
        assert_eq!(apply_meek_rules(&p.permuted(&perm)), closed.permuted(&perm));
    }
}
