//! Exact single-node marginals by enumerating the joint distribution.

use super::{BnError, DiscreteBn};

/// Largest joint state space that will be enumerated.
pub const MAX_JOINT_STATES: f64 = 1e7;

/// Marginals of every node; `out[v][s] = P(X_v = s)`.
pub fn exact_marginals(bn: &DiscreteBn) -> Result<Vec<Vec<f64>>, BnError> {
    let n = bn.n_nodes();
    let cards: Vec<usize> = (0..n).map(|v| bn.cardinality(v)).collect();
    let size: f64 = cards.iter().map(|&c| c as f64).product();
    if size > MAX_JOINT_STATES {
        return Err(BnError::TooLarge(size));
    }
    let mut out: Vec<Vec<f64>> = cards.iter().map(|&c| vec![0.0; c]).collect();
    let mut assignment = vec![0u32; n];
    loop {
        let p = bn.joint_probability(&assignment);
        if p > 0.0 {
            for (v, &s) in assignment.iter().enumerate() {
                out[v][s as usize] += p;
            }
        }
        // odometer, last node fastest
        let mut v = n;
        loop {
            if v == 0 {
                return Ok(out);
            }
            v -= 1;
            assignment[v] += 1;
            if (assignment[v] as usize) < cards[v] {
                break;
            }
            assignment[v] = 0;
        }
    }
}

pub fn exact_marginal(bn: &DiscreteBn, v: usize) -> Result<Vec<f64>, BnError> {
    exact_marginals(bn).map(|mut m| m.swap_remove(v))
}
