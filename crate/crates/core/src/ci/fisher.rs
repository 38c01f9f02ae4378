use nalgebra::DMatrix;
use statrs::distribution::{ContinuousCDF, Normal};

use super::{check_alpha, check_query, CiDecision, CiError};
use crate::bn::Dataset;

/// Partial correlations are clamped to `±R_CLAMP` before the z-transform.
pub const R_CLAMP: f64 = 1.0 - 1e-12;

/// Pearson correlation matrix of the chosen columns (all columns when
/// `cols` is `None`). Constant columns get zero correlation with the rest.
pub fn correlation_matrix(data: &Dataset, cols: Option<&[usize]>) -> Result<DMatrix<f64>, CiError> {
    let all: Vec<usize>;
    let cols = match cols {
        Some(c) => c,
        None => {
            all = (0..data.n_cols()).collect();
            &all
        }
    };
    let n = data.n_rows() as f64;
    let centred = cols
        .iter()
        .map(|&c| {
            let v = data.continuous(c).ok_or(CiError::NotContinuous(c))?;
            let mean = v.iter().sum::<f64>() / n;
            let d: Vec<f64> = v.iter().map(|x| x - mean).collect();
            let norm = d.iter().map(|x| x * x).sum::<f64>().sqrt();
            Ok((d, norm))
        })
        .collect::<Result<Vec<_>, CiError>>()?;
    let k = cols.len();
    let mut m = DMatrix::identity(k, k);
    for i in 0..k {
        for j in (i + 1)..k {
            let (a, na) = &centred[i];
            let (b, nb) = &centred[j];
            let r = if *na > 0.0 && *nb > 0.0 {
                (a.iter().zip(b).map(|(p, q)| p * q).sum::<f64>() / (na * nb)).clamp(-1.0, 1.0)
            } else {
                0.0
            };
            m[(i, j)] = r;
            m[(j, i)] = r;
        }
    }
    Ok(m)
}

/// Fisher's z test given a precomputed correlation matrix over all
/// variables and the sample size it was estimated from.
pub fn fisher_z_from_correlation(
    corr: &DMatrix<f64>,
    n: usize,
    x: usize,
    y: usize,
    z: &[usize],
    alpha: f64,
) -> Result<CiDecision, CiError> {
    check_alpha(alpha)?;
    check_query(corr.nrows(), x, y, z)?;
    if n <= z.len() + 3 {
        return Err(CiError::InsufficientSamples { n, cond: z.len() });
    }
    let r = if z.is_empty() {
        corr[(x, y)]
    } else {
        let idx: Vec<usize> = [x, y].iter().chain(z).copied().collect();
        let sub = corr.select_rows(&idx).select_columns(&idx);
        let prec = sub.cholesky().ok_or(CiError::Singular)?.inverse();
        let denom = (prec[(0, 0)] * prec[(1, 1)]).sqrt();
        if !(denom > 0.0) || !denom.is_finite() {
            return Err(CiError::Singular);
        }
        -prec[(0, 1)] / denom
    };
    let r = r.clamp(-R_CLAMP, R_CLAMP);
    let stat = 0.5 * ((1.0 + r) / (1.0 - r)).ln() * ((n - z.len() - 3) as f64).sqrt();
    let p = 2.0 * Normal::standard().sf(stat.abs());
    // z² is chi-squared with one degree of freedom
    Ok(CiDecision::from_p(stat, p, 1, alpha))
}

/// Fisher's z test of `x ⟂ y | z` on continuous data.
pub fn fisher_z_test(
    data: &Dataset,
    x: usize,
    y: usize,
    z: &[usize],
    alpha: f64,
) -> Result<CiDecision, CiError> {
    check_alpha(alpha)?;
    check_query(data.n_cols(), x, y, z)?;
    let idx: Vec<usize> = [x, y].iter().chain(z).copied().collect();
    let corr = correlation_matrix(data, Some(&idx))?;
    let local: Vec<usize> = (2..idx.len()).collect();
    fisher_z_from_correlation(&corr, data.n_rows(), 0, 1, &local, alpha)
}
