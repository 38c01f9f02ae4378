use super::{BnDescriptor, BnError};
use crate::graph::Dag;

/// Tolerance on CPT row sums.
pub(crate) const ROW_SUM_TOL: f64 = 1e-9;

/// Conditional probability table of one node.
///
/// Rows are indexed by parent configuration in mixed-radix order over the
/// parents sorted by node index, the last parent varying fastest. Each row
/// holds one probability per state of the node.
#[derive(Debug, Clone, PartialEq)]
pub struct Cpt {
    parents: Vec<usize>,
    parent_cards: Vec<usize>,
    card: usize,
    table: Vec<f64>,
}

impl Cpt {
    pub fn parents(&self) -> &[usize] {
        &self.parents
    }

    pub fn cardinality(&self) -> usize {
        self.card
    }

    pub fn n_rows(&self) -> usize {
        self.table.len() / self.card
    }

    pub fn row(&self, config: usize) -> &[f64] {
        &self.table[config * self.card..(config + 1) * self.card]
    }

    /// Row index for parent values listed in `parents()` order.
    pub fn config_index(&self, parent_values: &[u32]) -> usize {
        parent_values
            .iter()
            .zip(&self.parent_cards)
            .fold(0, |acc, (&v, &c)| acc * c + v as usize)
    }

    /// Row index read from a full assignment indexed by node.
    pub fn config_of(&self, assignment: &[u32]) -> usize {
        self.parents
            .iter()
            .zip(&self.parent_cards)
            .fold(0, |acc, (&p, &c)| acc * c + assignment[p] as usize)
    }
}

/// A discrete Bayesian network: a DAG, per-node state names, and CPTs.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteBn {
    name: String,
    graph: Dag,
    states: Vec<Vec<String>>,
    cpts: Vec<Cpt>,
}

impl DiscreteBn {
    /// `tables[v]` is the flattened row-major CPT of node `v` in canonical
    /// parent-configuration order.
    pub fn new(
        name: impl Into<String>,
        graph: Dag,
        states: Vec<Vec<String>>,
        tables: Vec<Vec<f64>>,
    ) -> Result<Self, BnError> {
        let n = graph.n_nodes();
        if states.len() != n || tables.len() != n {
            return Err(BnError::Validation(format!(
                "{n} nodes but {} state lists and {} tables",
                states.len(),
                tables.len()
            )));
        }
        let cards: Vec<usize> = states.iter().map(Vec::len).collect();
        let mut cpts = Vec::with_capacity(n);
        for (v, table) in tables.into_iter().enumerate() {
            let node = graph.name(v);
            let card = cards[v];
            if card == 0 {
                return Err(BnError::Validation(format!("node '{node}' has no states")));
            }
            let parents = graph.parents(v).to_vec();
            let parent_cards: Vec<usize> = parents.iter().map(|&p| cards[p]).collect();
            let rows: usize = parent_cards.iter().product();
            if table.len() != rows * card {
                return Err(BnError::Validation(format!(
                    "node '{node}': expected {rows} rows of {card} entries, found {} entries",
                    table.len()
                )));
            }
            for (j, row) in table.chunks(card).enumerate() {
                if row.iter().any(|&p| !(p >= 0.0) || !p.is_finite()) {
                    return Err(BnError::Validation(format!(
                        "node '{node}': row {j} has a negative or non-finite entry"
                    )));
                }
                let sum: f64 = row.iter().sum();
                if (sum - 1.0).abs() > ROW_SUM_TOL {
                    return Err(BnError::Validation(format!(
                        "node '{node}': row {j} sums to {sum}"
                    )));
                }
            }
            cpts.push(Cpt {
                parents,
                parent_cards,
                card,
                table,
            });
        }
        Ok(DiscreteBn {
            name: name.into(),
            graph,
            states,
            cpts,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn graph(&self) -> &Dag {
        &self.graph
    }

    pub fn n_nodes(&self) -> usize {
        self.graph.n_nodes()
    }

    pub fn cardinality(&self, v: usize) -> usize {
        self.cpts[v].card
    }

    pub fn states(&self, v: usize) -> &[String] {
        &self.states[v]
    }

    pub fn cpt(&self, v: usize) -> &Cpt {
        &self.cpts[v]
    }

    pub fn descriptor(&self) -> BnDescriptor {
        BnDescriptor {
            name: self.name.clone(),
            node_count: self.n_nodes(),
            arc_count: self.graph.n_edges(),
        }
    }

    /// Probability of a full assignment.
    pub fn joint_probability(&self, assignment: &[u32]) -> f64 {
        self.cpts
            .iter()
            .enumerate()
            .map(|(v, cpt)| cpt.row(cpt.config_of(assignment))[assignment[v] as usize])
            .product()
    }
}
