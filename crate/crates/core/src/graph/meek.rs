use std::collections::BTreeMap;

use super::{Dag, Pdag};

/// Closes `p` under the four Meek orientation rules.
pub fn apply_meek_rules(p: &Pdag) -> Pdag {
    apply_meek_rules_with(p, |_, _| true)
}

/// Meek closure where a missing edge only counts as a known non-adjacency
/// when `known_nonadjacent(a, b)` agrees. Local learners use this to avoid
/// firing rules on pairs whose adjacency was never examined.
///
/// Each round computes every orientation the rules imply on the current
/// graph and applies them together; an edge implied in both directions is
/// left undirected. The result therefore does not depend on the order in
/// which edges are visited.
pub fn apply_meek_rules_with<F>(p: &Pdag, known_nonadjacent: F) -> Pdag
where
    F: Fn(usize, usize) -> bool,
{
    let mut out = p.clone();
    let n = out.n_nodes();
    loop {
        let (dir, und) = out.dense();
        let d = |a: usize, b: usize| dir[a * n + b];
        let u = |a: usize, b: usize| und[a * n + b];
        let adj = |a: usize, b: usize| d(a, b) || d(b, a) || u(a, b);
        let nonadj = |a: usize, b: usize| a != b && !adj(a, b) && known_nonadjacent(a, b);

        let fires = |a: usize, b: usize| -> bool {
            // R1: c → a − b, c and b nonadjacent
            if (0..n).any(|c| d(c, a) && nonadj(c, b)) {
                return true;
            }
            // R2: a → c → b
            if (0..n).any(|c| d(a, c) && d(c, b)) {
                return true;
            }
            // R3: c − a − d, c → b ← d, c and d nonadjacent
            let kites: Vec<usize> = (0..n).filter(|&c| u(c, a) && d(c, b)).collect();
            for (i, &c) in kites.iter().enumerate() {
                if kites[i + 1..].iter().any(|&e| nonadj(c, e)) {
                    return true;
                }
            }
            // R4: a ~ c → e → b with a ~ e, c and b nonadjacent
            for c in 0..n {
                if c == b || !adj(a, c) || !nonadj(c, b) {
                    continue;
                }
                if (0..n).any(|e| e != a && d(c, e) && d(e, b) && adj(a, e)) {
                    return true;
                }
            }
            false
        };

        let mut implied: BTreeMap<(usize, usize), (bool, bool)> = BTreeMap::new();
        for &(x, y) in out.undirected_edges() {
            let fwd = fires(x, y);
            let back = fires(y, x);
            if fwd || back {
                implied.insert((x, y), (fwd, back));
            }
        }
        let mut changed = false;
        for ((x, y), (fwd, back)) in implied {
            match (fwd, back) {
                (true, false) => changed |= out.orient(x, y),
                (false, true) => changed |= out.orient(y, x),
                _ => {}
            }
        }
        if !changed {
            return out;
        }
    }
}

/// The CPDAG of `g`'s Markov equivalence class: skeleton, v-structures,
/// then Meek closure.
pub fn dag_to_cpdag(g: &Dag) -> Pdag {
    let mut p = Pdag::empty(g.names().to_vec());
    for (a, b) in g.skeleton_pairs() {
        p.add_undirected(a, b);
    }
    for (a, c, b) in g.v_structures() {
        p.orient(a, c);
        p.orient(b, c);
    }
    apply_meek_rules(&p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("X{i}")).collect()
    }

    #[test]
    fn rule_one() {
        let p = Pdag::new(names(3), [(0, 1)], [(1, 2)]).unwrap();
        let q = apply_meek_rules(&p);
        assert!(q.has_directed(1, 2));
    }

    #[test]
    fn undirected_triangle_unchanged() {
        let p = Pdag::new(names(3), [], [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(apply_meek_rules(&p), p);
    }

    #[test]
    fn rule_two() {
        // 0 → 1 → 2, 0 − 2  ⇒  0 → 2
        let p = Pdag::new(names(3), [(0, 1), (1, 2)], [(0, 2)]).unwrap();
        assert!(apply_meek_rules(&p).has_directed(0, 2));
    }

    #[test]
    fn rule_three() {
        // 1 − 0 − 2, 1 → 3 ← 2, 0 − 3, 1 and 2 nonadjacent  ⇒  0 → 3
        let p = Pdag::new(names(4), [(1, 3), (2, 3)], [(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(apply_meek_rules(&p).has_directed(0, 3));
    }

    #[test]
    fn rule_four() {
        // a=0, b=3, c=1, e=2: 0 − 1 → 2 → 3, 0 − 2, 0 − 3, 1 and 3 nonadjacent
        let p = Pdag::new(names(4), [(1, 2), (2, 3)], [(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(apply_meek_rules(&p).has_directed(0, 3));
    }

    #[test]
    fn unknown_nonadjacency_suppresses_rule_one() {
        let p = Pdag::new(names(3), [(0, 1)], [(1, 2)]).unwrap();
        let q = apply_meek_rules_with(&p, |_, _| false);
        assert!(q.has_undirected(1, 2));
    }

    #[test]
    fn cpdag_of_chain_and_collider() {
        let chain = Dag::from_named_edges(&["A", "B", "C"], &[("A", "B"), ("B", "C")]).unwrap();
        let c = dag_to_cpdag(&chain);
        assert!(c.directed_edges().is_empty());
        assert_eq!(c.undirected_edges().len(), 2);

        let coll = Dag::from_named_edges(&["A", "B", "C"], &[("A", "C"), ("B", "C")]).unwrap();
        let c = dag_to_cpdag(&coll);
        assert!(c.has_directed(0, 2) && c.has_directed(1, 2));
    }

    #[test]
    fn idempotent_on_small_case() {
        let g = Dag::from_named_edges(
            &["A", "B", "C", "D", "E"],
            &[("A", "C"), ("B", "C"), ("C", "D"), ("D", "E"), ("B", "E")],
        )
        .unwrap();
        let c = dag_to_cpdag(&g);
        assert_eq!(apply_meek_rules(&c), c);
    }
}
