use nalgebra::DMatrix;

use super::bdeu::family_counts;
use super::{check_family, LocalScore, ScoreError};
use crate::bn::Dataset;

/// Maximum-likelihood covariance (divisor `n`) of the listed columns.
pub(super) fn covariance(data: &Dataset, cols: &[usize]) -> DMatrix<f64> {
    let n = data.n_rows().max(1) as f64;
    let centred: Vec<Vec<f64>> = cols
        .iter()
        .map(|&c| {
            let v = data.continuous(c).expect("continuous column");
            let mean = v.iter().sum::<f64>() / n;
            v.iter().map(|x| x - mean).collect()
        })
        .collect();
    let k = cols.len();
    DMatrix::from_fn(k, k, |i, j| {
        let (a, b) = if i <= j {
            (&centred[i], &centred[j])
        } else {
            (&centred[j], &centred[i])
        };
        a.iter().zip(b).map(|(p, q)| p * q).sum::<f64>() / n
    })
}

/// Gaussian BIC from a covariance matrix indexed by variable.
pub(super) fn gaussian_bic(
    cov: &DMatrix<f64>,
    n: usize,
    node: usize,
    parents: &[usize],
) -> Result<f64, ScoreError> {
    let nf = n as f64;
    let mut var = cov[(node, node)];
    if !parents.is_empty() {
        let s = cov.select_rows(parents).select_columns(parents);
        let c = DMatrix::from_fn(parents.len(), 1, |i, _| cov[(parents[i], node)]);
        let chol = s.cholesky().ok_or(ScoreError::Degenerate(node))?;
        let beta = chol.solve(&c);
        var -= (c.transpose() * beta)[(0, 0)];
    }
    if !(var > 0.0) || !var.is_finite() {
        return Err(ScoreError::Degenerate(node));
    }
    let loglik = -0.5 * nf * ((2.0 * std::f64::consts::PI * var).ln() + 1.0);
    Ok(loglik - 0.5 * nf.ln() * (parents.len() + 2) as f64)
}

pub(super) fn discrete_bic(
    data: &Dataset,
    node: usize,
    parents: &[usize],
) -> Result<f64, ScoreError> {
    let (counts, r, q) = family_counts(data, node, parents)?;
    let mut loglik = 0.0;
    for row in counts.chunks(r) {
        let n_j: u64 = row.iter().sum();
        for &n_jk in row {
            if n_jk > 0 {
                loglik += n_jk as f64 * (n_jk as f64 / n_j as f64).ln();
            }
        }
    }
    let n = data.n_rows();
    let penalty = if n > 0 {
        0.5 * (n as f64).ln() * (r as f64 - 1.0) * q
    } else {
        0.0
    };
    Ok(loglik - penalty)
}

/// BIC of `node` given `parents`: maximised log-likelihood minus
/// `0.5 ln(n)` per free parameter. Discrete nodes use multinomial rows;
/// continuous nodes a least-squares regression with intercept and noise
/// variance.
pub fn bic_local(data: &Dataset, node: usize, parents: &[usize]) -> Result<LocalScore, ScoreError> {
    let parents = check_family(data.n_cols(), node, parents)?;
    let value = if data.continuous(node).is_some() {
        let mut cols = parents.clone();
        cols.push(node);
        if cols.iter().any(|&c| data.continuous(c).is_none()) {
            return Err(ScoreError::MixedData);
        }
        let cov = covariance(data, &cols);
        let local: Vec<usize> = (0..parents.len()).collect();
        gaussian_bic(&cov, data.n_rows(), parents.len(), &local)
            .map_err(|_| ScoreError::Degenerate(node))?
    } else {
        discrete_bic(data, node, &parents)?
    };
    Ok(LocalScore {
        node,
        parents,
        value,
    })
}
