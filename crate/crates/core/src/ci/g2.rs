use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::{check_alpha, check_query, CiDecision, CiError};
use crate::bn::Dataset;

/// A discrete test is trusted only with at least this many samples per
/// nominal degree of freedom.
pub const RELIABILITY_FACTOR: f64 = 5.0;

fn columns<'a>(data: &'a Dataset, vars: &[usize]) -> Result<Vec<(&'a [u32], usize)>, CiError> {
    vars.iter()
        .map(|&v| {
            let col = data.discrete(v).ok_or(CiError::NotDiscrete(v))?;
            Ok((col, data.cardinality(v).unwrap_or(0) as usize))
        })
        .collect()
}

/// `(r_x - 1)(r_y - 1) Π r_z` as a float, so huge tables cannot overflow.
pub(crate) fn nominal_dof(data: &Dataset, x: usize, y: usize, z: &[usize]) -> f64 {
    let card = |v: usize| data.cardinality(v).unwrap_or(1) as f64;
    (card(x) - 1.0).max(0.0)
        * (card(y) - 1.0).max(0.0)
        * z.iter().map(|&v| card(v)).product::<f64>()
}

pub(crate) fn g2_reliable(data: &Dataset, x: usize, y: usize, z: &[usize]) -> bool {
    data.n_rows() as f64 >= RELIABILITY_FACTOR * nominal_dof(data, x, y, z)
}

/// G² test of `x ⟂ y | z` on discrete data.
///
/// Cells with zero count are skipped in the sum, and each stratum
/// contributes `(rows - 1)(cols - 1)` degrees of freedom counting only
/// non-empty rows and columns. Tests with fewer than
/// [`RELIABILITY_FACTOR`] samples per nominal degree of freedom are marked
/// unreliable and report independence without being evaluated.
pub fn g2_test(
    data: &Dataset,
    x: usize,
    y: usize,
    z: &[usize],
    alpha: f64,
) -> Result<CiDecision, CiError> {
    check_alpha(alpha)?;
    check_query(data.n_cols(), x, y, z)?;
    let xy = columns(data, &[x, y])?;
    let zs = columns(data, z)?;
    let (xs, rx) = xy[0];
    let (ys, ry) = xy[1];
    if rx < 2 || ry < 2 {
        return Ok(CiDecision::from_p(0.0, 1.0, 1, alpha));
    }
    let nominal = nominal_dof(data, x, y, z);
    if !g2_reliable(data, x, y, z) {
        return Ok(CiDecision::unreliable(
            0.0,
            1.0,
            nominal.min(usize::MAX as f64).max(1.0) as usize,
        ));
    }

    // reliability bounds the stratum count by n / 5, so a dense table fits
    let n_strata: usize = zs.iter().map(|&(_, c)| c).product();
    let cell = rx * ry;
    let mut counts = vec![0u32; n_strata * cell];
    for r in 0..data.n_rows() {
        let s = zs
            .iter()
            .fold(0usize, |acc, &(col, c)| acc * c + col[r] as usize);
        counts[s * cell + xs[r] as usize * ry + ys[r] as usize] += 1;
    }

    let mut g = 0.0;
    let mut dof = 0usize;
    let mut row = vec![0u64; rx];
    let mut colsum = vec![0u64; ry];
    for table in counts.chunks(cell) {
        row.iter_mut().for_each(|v| *v = 0);
        colsum.iter_mut().for_each(|v| *v = 0);
        for i in 0..rx {
            for j in 0..ry {
                let o = table[i * ry + j] as u64;
                row[i] += o;
                colsum[j] += o;
            }
        }
        let total: u64 = row.iter().sum();
        if total == 0 {
            continue;
        }
        let nz_rows = row.iter().filter(|&&v| v > 0).count();
        let nz_cols = colsum.iter().filter(|&&v| v > 0).count();
        dof += (nz_rows - 1) * (nz_cols - 1);
        for i in 0..rx {
            for j in 0..ry {
                let o = table[i * ry + j] as f64;
                if o > 0.0 {
                    g += o * (o * total as f64 / (row[i] as f64 * colsum[j] as f64)).ln();
                }
            }
        }
    }
    let g = (2.0 * g).max(0.0);
    let dof = dof.max(1);
    let p = ChiSquared::new(dof as f64).expect("dof >= 1").sf(g);
    Ok(CiDecision::from_p(g, p, dof, alpha))
}
