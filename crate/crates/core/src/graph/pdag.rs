use std::collections::BTreeSet;

use super::{check_names, Dag, GraphError};

/// A partially directed graph: some edges oriented, the rest undirected.
///
/// Equality is structural (sorted edge sets plus names), which is what the
/// metrics and tests compare.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pdag {
    names: Vec<String>,
    directed: BTreeSet<(usize, usize)>,
    /// Stored as `(min, max)`.
    undirected: BTreeSet<(usize, usize)>,
}

impl Pdag {
    pub fn new<D, U>(names: Vec<String>, directed: D, undirected: U) -> Result<Self, GraphError>
    where
        D: IntoIterator<Item = (usize, usize)>,
        U: IntoIterator<Item = (usize, usize)>,
    {
        check_names(&names)?;
        let mut p = Pdag::empty(names);
        let n = p.n_nodes();
        let check = |a: usize, b: usize, names: &[String]| -> Result<(), GraphError> {
            if a >= n {
                return Err(GraphError::NodeOutOfRange(a, n));
            }
            if b >= n {
                return Err(GraphError::NodeOutOfRange(b, n));
            }
            if a == b {
                return Err(GraphError::SelfLoop(names[a].clone()));
            }
            Ok(())
        };
        for (a, b) in directed {
            check(a, b, &p.names)?;
            if p.adjacent(a, b) {
                return Err(GraphError::DuplicateEdge(
                    p.names[a].clone(),
                    p.names[b].clone(),
                ));
            }
            p.directed.insert((a, b));
        }
        for (a, b) in undirected {
            check(a, b, &p.names)?;
            if p.adjacent(a, b) {
                return Err(GraphError::DuplicateEdge(
                    p.names[a].clone(),
                    p.names[b].clone(),
                ));
            }
            p.undirected.insert((a.min(b), a.max(b)));
        }
        Ok(p)
    }

    pub fn empty(names: Vec<String>) -> Self {
        Pdag {
            names,
            directed: BTreeSet::new(),
            undirected: BTreeSet::new(),
        }
    }

    /// Every edge of `g`, directed.
    pub fn from_dag(g: &Dag) -> Self {
        Pdag {
            names: g.names().to_vec(),
            directed: g.edges().into_iter().collect(),
            undirected: BTreeSet::new(),
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn directed_edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.directed
    }

    pub fn undirected_edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.undirected
    }

    pub fn n_edges(&self) -> usize {
        self.directed.len() + self.undirected.len()
    }

    pub fn has_directed(&self, a: usize, b: usize) -> bool {
        self.directed.contains(&(a, b))
    }

    pub fn has_undirected(&self, a: usize, b: usize) -> bool {
        self.undirected.contains(&(a.min(b), a.max(b)))
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.has_directed(a, b) || self.has_directed(b, a) || self.has_undirected(a, b)
    }

    pub fn add_directed(&mut self, a: usize, b: usize) {
        self.remove_edge(a, b);
        self.directed.insert((a, b));
    }

    pub fn add_undirected(&mut self, a: usize, b: usize) {
        self.remove_edge(a, b);
        self.undirected.insert((a.min(b), a.max(b)));
    }

    /// Turns `a − b` into `a → b`; no-op unless the edge is undirected.
    pub fn orient(&mut self, a: usize, b: usize) -> bool {
        if self.undirected.remove(&(a.min(b), a.max(b))) {
            self.directed.insert((a, b));
            true
        } else {
            false
        }
    }

    pub fn remove_edge(&mut self, a: usize, b: usize) {
        self.directed.remove(&(a, b));
        self.directed.remove(&(b, a));
        self.undirected.remove(&(a.min(b), a.max(b)));
    }

    /// Nodes `p` with `p → v`.
    pub fn parents(&self, v: usize) -> Vec<usize> {
        self.directed
            .iter()
            .filter(|e| e.1 == v)
            .map(|e| e.0)
            .collect()
    }

    /// Nodes `c` with `v → c`.
    pub fn children(&self, v: usize) -> Vec<usize> {
        self.directed
            .range((v, 0)..(v + 1, 0))
            .map(|e| e.1)
            .collect()
    }

    /// Nodes joined to `v` by an undirected edge.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .undirected
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Every node adjacent to `v`, sorted.
    pub fn adjacents(&self, v: usize) -> Vec<usize> {
        let mut out = self.parents(v);
        out.extend(self.children(v));
        out.extend(self.neighbors(v));
        out.sort_unstable();
        out
    }

    /// Unordered adjacent pairs `(min, max)`.
    pub fn skeleton_pairs(&self) -> BTreeSet<(usize, usize)> {
        self.directed
            .iter()
            .map(|&(a, b)| (a.min(b), a.max(b)))
            .chain(self.undirected.iter().copied())
            .collect()
    }

    /// Dense adjacency snapshot: `(directed[a*n+b], undirected[a*n+b])`.
    pub(crate) fn dense(&self) -> (Vec<bool>, Vec<bool>) {
        let n = self.n_nodes();
        let mut dir = vec![false; n * n];
        let mut und = vec![false; n * n];
        for &(a, b) in &self.directed {
            dir[a * n + b] = true;
        }
        for &(a, b) in &self.undirected {
            und[a * n + b] = true;
            und[b * n + a] = true;
        }
        (dir, und)
    }

    /// A consistent DAG extension (Dor & Tarsi): repeatedly removes a sink
    /// whose undirected neighbours are adjacent to all its other neighbours,
    /// orienting those undirected edges into it.
    pub fn to_dag(&self) -> Result<Dag, GraphError> {
        let n = self.n_nodes();
        let (mut dir, mut und) = self.dense();
        let mut alive = vec![true; n];
        let mut oriented: Vec<(usize, usize)> = self.directed.iter().copied().collect();
        let adj = |dir: &[bool], und: &[bool], a: usize, b: usize| {
            dir[a * n + b] || dir[b * n + a] || und[a * n + b]
        };
        for _ in 0..n {
            let mut picked = None;
            'cand: for x in 0..n {
                if !alive[x] {
                    continue;
                }
                if (0..n).any(|y| alive[y] && dir[x * n + y]) {
                    continue;
                }
                let nbrs: Vec<usize> = (0..n).filter(|&y| alive[y] && und[x * n + y]).collect();
                let adjs: Vec<usize> = (0..n)
                    .filter(|&y| alive[y] && y != x && adj(&dir, &und, x, y))
                    .collect();
                for &y in &nbrs {
                    for &z in &adjs {
                        if z != y && !adj(&dir, &und, y, z) {
                            continue 'cand;
                        }
                    }
                }
                picked = Some((x, nbrs));
                break;
            }
            let (x, nbrs) = picked.ok_or(GraphError::NotExtendable)?;
            for y in nbrs {
                oriented.push((y, x));
                und[x * n + y] = false;
                und[y * n + x] = false;
            }
            for y in 0..n {
                dir[y * n + x] = false;
                dir[x * n + y] = false;
            }
            alive[x] = false;
        }
        Dag::new(self.names.clone(), oriented).map_err(|_| GraphError::NotExtendable)
    }

    /// Node `i` of the result is node `perm[i]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Pdag {
        let mut inverse = vec![usize::MAX; self.n_nodes()];
        for (new, &old) in perm.iter().enumerate() {
            inverse[old] = new;
        }
        let names = perm.iter().map(|&o| self.names[o].clone()).collect();
        let directed = self
            .directed
            .iter()
            .map(|&(a, b)| (inverse[a], inverse[b]))
            .collect();
        let undirected = self
            .undirected
            .iter()
            .map(|&(a, b)| (inverse[a].min(inverse[b]), inverse[a].max(inverse[b])))
            .collect();
        Pdag {
            names,
            directed,
            undirected,
        }
    }

    /// Reindexes onto `names` (same node set, possibly different order).
    pub fn relabel_to(&self, names: &[String]) -> Result<Pdag, GraphError> {
        if names.len() != self.n_nodes() {
            return Err(GraphError::UniverseMismatch(format!(
                "{} nodes vs {} nodes",
                self.n_nodes(),
                names.len()
            )));
        }
        let mut perm = Vec::with_capacity(names.len());
        for name in names {
            perm.push(self.index_of(name).ok_or_else(|| {
                GraphError::UniverseMismatch(format!("node '{name}' missing from graph"))
            })?);
        }
        Ok(self.permuted(&perm))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("X{i}")).collect()
    }

    #[test]
    fn rejects_pair_in_both_sets() {
        assert!(matches!(
            Pdag::new(names(2), [(0, 1)], [(1, 0)]),
            Err(GraphError::DuplicateEdge(..))
        ));
        assert!(matches!(
            Pdag::new(names(2), [], [(1, 1)]),
            Err(GraphError::SelfLoop(_))
        ));
    }

    #[test]
    fn neighbourhood_queries() {
        let p = Pdag::new(names(4), [(0, 1), (1, 2)], [(3, 1)]).unwrap();
        assert_eq!(p.parents(1), vec![0]);
        assert_eq!(p.children(1), vec![2]);
        assert_eq!(p.neighbors(1), vec![3]);
        assert_eq!(p.adjacents(1), vec![0, 2, 3]);
        assert!(p.has_undirected(1, 3));
    }

    #[test]
    fn extension_keeps_orientation_and_skeleton() {
        let p = Pdag::new(names(4), [(0, 2), (1, 2)], [(2, 3)]).unwrap();
        let g = p.to_dag().unwrap();
        assert!(g.has_edge(0, 2) && g.has_edge(1, 2));
        // 2 − 3 must become 2 → 3 to avoid a new collider at 2
        assert!(g.has_edge(2, 3));
    }

    #[test]
    fn non_extendable_detected() {
        // a − b − c − d − a chordless cycle has no consistent extension
        let p = Pdag::new(names(4), [], [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(p.to_dag(), Err(GraphError::NotExtendable));
    }
}
