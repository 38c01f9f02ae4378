//! Conditional-independence tests and the session object every learner
//! queries.
//!
//! Three testers sit behind one interface: the G² likelihood-ratio test for
//! discrete data, Fisher's z test of partial correlation for Gaussian data,
//! and an exact d-separation oracle over a known DAG. A [`CiSession`] adds
//! the significance level, the conditioning-size cap, a decision cache and
//! the test counters reported as an efficiency metric.

mod fisher;
mod g2;
mod session;

use thiserror::Error;

use crate::graph::{active_trail_length, Dag, GraphError};

pub use fisher::{correlation_matrix, fisher_z_from_correlation, fisher_z_test, R_CLAMP};
pub use g2::{g2_test, RELIABILITY_FACTOR};
pub use session::{CiCounter, CiSession, CiTester};

/// Default significance level.
pub const DEFAULT_ALPHA: f64 = 0.05;
/// Default conditioning-size cap for sample-based tests.
pub const DEFAULT_MAX_COND: usize = 3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CiError {
    #[error("column {0} is not discrete")]
    NotDiscrete(usize),
    #[error("column {0} is not continuous")]
    NotContinuous(usize),
    #[error("dataset mixes discrete and continuous columns")]
    MixedData,
    #[error("alpha must lie strictly between 0 and 1, got {0}")]
    Alpha(f64),
    #[error("x and y must differ and lie outside the conditioning set")]
    InvalidQuery,
    #[error("variable {0} out of range")]
    UnknownVariable(usize),
    #[error("correlation submatrix is singular")]
    Singular,
    #[error("{n} samples are too few for a conditioning set of size {cond}")]
    InsufficientSamples { n: usize, cond: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Outcome of one independence test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CiDecision {
    pub statistic: f64,
    pub p_value: f64,
    pub dof: usize,
    pub independent: bool,
    /// False when the sample is too small for the test to be trusted; such
    /// decisions always report independence.
    pub reliable: bool,
}

impl CiDecision {
    pub(crate) fn from_p(statistic: f64, p_value: f64, dof: usize, alpha: f64) -> Self {
        let p_value = p_value.clamp(0.0, 1.0);
        CiDecision {
            statistic,
            p_value,
            dof,
            independent: p_value > alpha,
            reliable: true,
        }
    }

    pub(crate) fn unreliable(statistic: f64, p_value: f64, dof: usize) -> Self {
        CiDecision {
            statistic,
            p_value: p_value.clamp(0.0, 1.0),
            dof,
            independent: true,
            reliable: false,
        }
    }

    /// Association strength: `1 - p`, or 0 for unreliable tests.
    pub fn strength(&self) -> f64 {
        if self.reliable {
            1.0 - self.p_value
        } else {
            0.0
        }
    }

    /// Sort key for "stronger association first" comparisons: strength,
    /// then absolute statistic.
    pub fn association(&self) -> Association {
        Association {
            strength: self.strength(),
            statistic: if self.reliable {
                self.statistic.abs()
            } else {
                0.0
            },
        }
    }
}

/// Comparable association measure; ties beyond this are broken by node
/// index at the call site.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Association {
    pub strength: f64,
    pub statistic: f64,
}

impl Association {
    pub const NONE: Association = Association {
        strength: 0.0,
        statistic: 0.0,
    };
}

pub(crate) fn check_query(n: usize, x: usize, y: usize, z: &[usize]) -> Result<(), CiError> {
    for &v in [x, y].iter().chain(z) {
        if v >= n {
            return Err(CiError::UnknownVariable(v));
        }
    }
    if x == y || z.contains(&x) || z.contains(&y) {
        return Err(CiError::InvalidQuery);
    }
    Ok(())
}

pub(crate) fn check_alpha(alpha: f64) -> Result<(), CiError> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(CiError::Alpha(alpha))
    }
}

/// Exact test: independent iff `x` and `y` are d-separated by `z`.
pub fn oracle_ci(graph: &Dag, x: usize, y: usize, z: &[usize]) -> Result<CiDecision, CiError> {
    check_query(graph.n_nodes(), x, y, z)?;
    let len = active_trail_length(graph, x, y, z)?;
    let sep = len.is_none();
    // shorter active trails read as stronger association
    Ok(CiDecision {
        statistic: len.map_or(0.0, |l| 1.0 / l as f64),
        p_value: if sep { 1.0 } else { 0.0 },
        dof: 1,
        independent: sep,
        reliable: true,
    })
}

/// Association strength of `x` and `y` given `z` under the test matching
/// the data kind.
pub fn assoc_strength(
    data: &crate::bn::Dataset,
    x: usize,
    y: usize,
    z: &[usize],
) -> Result<f64, CiError> {
    let d = if data.all_discrete() {
        g2_test(data, x, y, z, DEFAULT_ALPHA)?
    } else if data.all_continuous() {
        fisher_z_test(data, x, y, z, DEFAULT_ALPHA)?
    } else {
        return Err(CiError::MixedData);
    };
    Ok(d.strength())
}
