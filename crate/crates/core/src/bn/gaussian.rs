//! Linear-Gaussian networks and their plain-text descriptor format:
//!
//! ```text
//! # comment
//! network <name>
//! node <name> <intercept> <sigma>
//! arc <parent> <child> <coefficient>
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;

use nalgebra::DMatrix;

use super::{BnDescriptor, BnError};
use crate::graph::Dag;

/// `X_v = intercept_v + Σ coef · X_parent + N(0, sigma_v²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianBn {
    name: String,
    graph: Dag,
    intercepts: Vec<f64>,
    sigmas: Vec<f64>,
    coefs: Vec<Vec<f64>>,
}

impl GaussianBn {
    /// `coefs[v]` is aligned with `graph.parents(v)` (sorted by index).
    pub fn new(
        name: impl Into<String>,
        graph: Dag,
        intercepts: Vec<f64>,
        sigmas: Vec<f64>,
        coefs: Vec<Vec<f64>>,
    ) -> Result<Self, BnError> {
        let n = graph.n_nodes();
        if intercepts.len() != n || sigmas.len() != n || coefs.len() != n {
            return Err(BnError::Validation(format!(
                "parameter vectors do not match {n} nodes"
            )));
        }
        for v in 0..n {
            let node = graph.name(v);
            if !(sigmas[v] > 0.0) || !sigmas[v].is_finite() {
                return Err(BnError::Validation(format!(
                    "node '{node}': sigma must be positive, got {}",
                    sigmas[v]
                )));
            }
            if !intercepts[v].is_finite() || coefs[v].iter().any(|c| !c.is_finite()) {
                return Err(BnError::Validation(format!(
                    "node '{node}': non-finite parameter"
                )));
            }
            if coefs[v].len() != graph.parents(v).len() {
                return Err(BnError::Validation(format!(
                    "node '{node}': {} coefficients for {} parents",
                    coefs[v].len(),
                    graph.parents(v).len()
                )));
            }
        }
        Ok(GaussianBn {
            name: name.into(),
            graph,
            intercepts,
            sigmas,
            coefs,
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

    pub fn intercept(&self, v: usize) -> f64 {
        self.intercepts[v]
    }

    pub fn sigma(&self, v: usize) -> f64 {
        self.sigmas[v]
    }

    pub fn coefficients(&self, v: usize) -> &[f64] {
        &self.coefs[v]
    }

    pub fn descriptor(&self) -> BnDescriptor {
        BnDescriptor {
            name: self.name.clone(),
            node_count: self.graph.n_nodes(),
            arc_count: self.graph.n_edges(),
        }
    }

    /// Model-implied mean vector.
    pub fn mean(&self) -> Vec<f64> {
        let mut mu = vec![0.0; self.n_nodes()];
        for &v in self.graph.topological_order() {
            mu[v] = self.intercepts[v]
                + self
                    .graph
                    .parents(v)
                    .iter()
                    .zip(&self.coefs[v])
                    .map(|(&p, c)| c * mu[p])
                    .sum::<f64>();
        }
        mu
    }

    /// Model-implied covariance `(I - B)⁻¹ D (I - B)⁻ᵀ`.
    pub fn covariance(&self) -> DMatrix<f64> {
        let n = self.n_nodes();
        let mut b = DMatrix::zeros(n, n);
        for v in 0..n {
            for (&p, &c) in self.graph.parents(v).iter().zip(&self.coefs[v]) {
                b[(v, p)] = c;
            }
        }
        let a = (DMatrix::identity(n, n) - b)
            .try_inverse()
            .expect("I - B is unit triangular up to permutation");
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            n,
            self.sigmas.iter().map(|s| s * s),
        ));
        &a * d * a.transpose()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "network {}", self.name);
        for v in 0..self.n_nodes() {
            let _ = writeln!(
                out,
                "node {} {:?} {:?}",
                self.graph.name(v),
                self.intercepts[v],
                self.sigmas[v]
            );
        }
        for v in 0..self.n_nodes() {
            for (&p, c) in self.graph.parents(v).iter().zip(&self.coefs[v]) {
                let _ = writeln!(
                    out,
                    "arc {} {} {:?}",
                    self.graph.name(p),
                    self.graph.name(v),
                    c
                );
            }
        }
        out
    }
}

fn number(tok: &str, line: usize, what: &str) -> Result<f64, BnError> {
    tok.parse().map_err(|_| BnError::Parse {
        line,
        message: format!("invalid {what} '{tok}'"),
    })
}

/// Parses the node/arc descriptor format.
pub fn parse_gaussian_network(text: &str) -> Result<GaussianBn, BnError> {
    let mut name = String::from("unknown");
    let mut names = Vec::new();
    let mut index = HashMap::new();
    let mut intercepts = Vec::new();
    let mut sigmas = Vec::new();
    let mut arcs: Vec<(usize, usize, f64, usize)> = Vec::new();
    let mut pending_arcs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let toks: Vec<&str> = body.split_whitespace().collect();
        let perr = |message: String| BnError::Parse { line, message };
        match toks[0] {
            "network" if toks.len() == 2 => name = toks[1].to_string(),
            "node" if toks.len() == 4 => {
                if index.insert(toks[1].to_string(), names.len()).is_some() {
                    return Err(perr(format!("node '{}' declared twice", toks[1])));
                }
                names.push(toks[1].to_string());
                intercepts.push(number(toks[2], line, "intercept")?);
                sigmas.push(number(toks[3], line, "sigma")?);
            }
            "arc" if toks.len() == 4 => {
                pending_arcs.push((
                    toks[1].to_string(),
                    toks[2].to_string(),
                    number(toks[3], line, "coefficient")?,
                    line,
                ));
            }
            other => return Err(perr(format!("unrecognised line starting with '{other}'"))),
        }
    }
    for (p, c, w, line) in pending_arcs {
        let lookup = |s: &str| {
            index.get(s).copied().ok_or_else(|| BnError::Parse {
                line,
                message: format!("unknown node '{s}'"),
            })
        };
        arcs.push((lookup(&p)?, lookup(&c)?, w, line));
    }
    let graph = Dag::new(names, arcs.iter().map(|&(p, c, _, _)| (p, c)))?;
    let mut coefs: Vec<Vec<f64>> = (0..graph.n_nodes())
        .map(|v| vec![0.0; graph.parents(v).len()])
        .collect();
    for (p, c, w, _) in arcs {
        let k = graph
            .parents(c)
            .binary_search(&p)
            .expect("edge is in the graph");
        coefs[c][k] = w;
    }
    GaussianBn::new(name, graph, intercepts, sigmas, coefs)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TEXT: &str = "# tiny
network g3
node A 1.0 1.0
node C 0.0 0.5
node B -2 2
arc A B 0.5
arc B C 2.0   # trailing comment
arc A C -1.0
";

    #[test]
    fn parse_and_round_trip() {
        let bn = parse_gaussian_network(TEXT).unwrap();
        assert_eq!(bn.name(), "g3");
        assert_eq!(bn.descriptor().arc_count, 3);
        // parents of C are A (0) and B (2), in index order
        assert_eq!(bn.coefficients(1), &[-1.0, 2.0]);
        let again = parse_gaussian_network(&bn.to_text()).unwrap();
        assert_eq!(again, bn);
    }

    #[test]
    fn implied_moments() {
        let bn = parse_gaussian_network(TEXT).unwrap();
        let mu = bn.mean();
        assert_eq!(mu, vec![1.0, -1.0 + 2.0 * -1.5, -1.5]);
        let s = bn.covariance();
        // Var(B) = 0.25 * 1 + 4
        assert!((s[(2, 2)] - 4.25).abs() < 1e-12);
        // Cov(A, C) = -1 + 2 * 0.5
        assert!(s[(0, 1)].abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            parse_gaussian_network(&TEXT.replace("0.0 0.5", "0.0 0")),
            Err(BnError::Validation(m)) if m.contains("'C'")
        ));
        assert!(matches!(
            parse_gaussian_network(&TEXT.replace("arc A B", "arc A Z")),
            Err(BnError::Parse { line: 6, .. })
        ));
        assert!(matches!(
            parse_gaussian_network(&TEXT.replace("node B -2 2", "node B -2 x")),
            Err(BnError::Parse { line: 5, .. })
        ));
        assert!(matches!(
            parse_gaussian_network("node A 0 1\narc A A 1"),
            Err(BnError::Graph(_))
        ));
    }
}
