use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{Dag, GraphError};

/// The neighbourhood of one target: oriented parents and children, adjacent
/// nodes whose orientation is undetermined, and spouses.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalStructure {
    pub target: usize,
    pub parents: BTreeSet<usize>,
    pub children: BTreeSet<usize>,
    pub undirected_neighbors: BTreeSet<usize>,
    pub spouses: BTreeSet<usize>,
}

impl LocalStructure {
    pub fn new(target: usize) -> Self {
        LocalStructure {
            target,
            ..Default::default()
        }
    }

    /// Parents, children and undirected neighbours.
    pub fn adjacent(&self) -> BTreeSet<usize> {
        self.parents
            .iter()
            .chain(&self.children)
            .chain(&self.undirected_neighbors)
            .copied()
            .collect()
    }

    pub fn markov_blanket(&self) -> BTreeSet<usize> {
        let mut mb = self.adjacent();
        mb.extend(&self.spouses);
        mb
    }

    /// The four sets are pairwise disjoint and exclude the target.
    pub fn is_well_formed(&self) -> bool {
        let sets = [
            &self.parents,
            &self.children,
            &self.undirected_neighbors,
            &self.spouses,
        ];
        let total: usize = sets.iter().map(|s| s.len()).sum();
        let union: BTreeSet<usize> = sets.iter().flat_map(|s| s.iter().copied()).collect();
        union.len() == total && !union.contains(&self.target)
    }
}

/// Parents, children and spouses of `t` read off the true graph.
pub fn true_local(g: &Dag, t: usize) -> Result<LocalStructure, GraphError> {
    g.check(t)?;
    let mut out = LocalStructure::new(t);
    out.parents = g.parents(t).iter().copied().collect();
    out.children = g.children(t).iter().copied().collect();
    for &c in g.children(t) {
        for &p in g.parents(c) {
            if p != t && !out.parents.contains(&p) && !out.children.contains(&p) {
                out.spouses.insert(p);
            }
        }
    }
    Ok(out)
}
