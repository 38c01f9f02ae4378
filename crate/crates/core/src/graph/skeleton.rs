use std::collections::BTreeSet;

/// An undirected adjacency structure over `n` nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Skeleton {
    adj: Vec<BTreeSet<usize>>,
}

impl Skeleton {
    pub fn empty(n: usize) -> Self {
        Skeleton {
            adj: vec![BTreeSet::new(); n],
        }
    }

    pub fn complete(n: usize) -> Self {
        Skeleton {
            adj: (0..n)
                .map(|v| (0..n).filter(|&w| w != v).collect())
                .collect(),
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.adj.len()
    }

    pub fn add(&mut self, a: usize, b: usize) {
        if a != b {
            self.adj[a].insert(b);
            self.adj[b].insert(a);
        }
    }

    pub fn remove(&mut self, a: usize, b: usize) {
        self.adj[a].remove(&b);
        self.adj[b].remove(&a);
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a].contains(&b)
    }

    pub fn neighbors(&self, v: usize) -> &BTreeSet<usize> {
        &self.adj[v]
    }

    /// Pairs `(a, b)` with `a < b`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(a, s)| s.iter().filter(move |&&b| b > a).map(move |&b| (a, b)))
            .collect()
    }

    pub fn n_edges(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).sum::<usize>() / 2
    }
}
