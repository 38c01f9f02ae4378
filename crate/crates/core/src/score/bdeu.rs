use statrs::function::gamma::ln_gamma;

use super::{check_family, LocalScore, ScoreError};
use crate::bn::Dataset;

/// Counts `n_jk` for the observed parent configurations only; each row of
/// the returned table has `r` entries. Also returns `r` and the nominal
/// configuration count `q`.
pub(super) fn family_counts(
    data: &Dataset,
    node: usize,
    parents: &[usize],
) -> Result<(Vec<u64>, usize, f64), ScoreError> {
    let col = |v: usize| data.discrete(v).ok_or(ScoreError::NotDiscrete(v));
    let xs = col(node)?;
    let r = data.cardinality(node).unwrap_or(0) as usize;
    let n = data.n_rows();
    let mut ids = vec![0u64; n];
    let mut bound = 1u64;
    let mut q = 1.0f64;
    for &p in parents {
        let vals = col(p)?;
        let card = data.cardinality(p).unwrap_or(1) as u64;
        q *= card as f64;
        if bound.checked_mul(card).is_none_or(|b| b > 1 << 40) {
            bound = compress(&mut ids);
        }
        for (id, &v) in ids.iter_mut().zip(vals) {
            *id = *id * card + v as u64;
        }
        bound *= card;
    }
    let m = compress(&mut ids) as usize;
    let mut counts = vec![0u64; m * r];
    for (&id, &x) in ids.iter().zip(xs) {
        counts[id as usize * r + x as usize] += 1;
    }
    Ok((counts, r, q))
}

/// Replaces ids by their rank among the distinct values; returns the
/// number of distinct values.
fn compress(ids: &mut [u64]) -> u64 {
    let mut distinct = ids.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    for id in ids.iter_mut() {
        *id = distinct.binary_search(id).expect("present") as u64;
    }
    distinct.len().max(1) as u64
}

pub(super) fn bdeu_value(
    data: &Dataset,
    node: usize,
    parents: &[usize],
    ess: f64,
) -> Result<f64, ScoreError> {
    let (counts, r, q) = family_counts(data, node, parents)?;
    let a_j = ess / q;
    let a_jk = ess / (q * r as f64);
    let lg_a_j = ln_gamma(a_j);
    let lg_a_jk = ln_gamma(a_jk);
    let mut score = 0.0;
    // unobserved configurations contribute exactly zero
    for row in counts.chunks(r) {
        let n_j: u64 = row.iter().sum();
        if n_j == 0 {
            continue;
        }
        score += lg_a_j - ln_gamma(a_j + n_j as f64);
        for &n_jk in row {
            if n_jk > 0 {
                score += ln_gamma(a_jk + n_jk as f64) - lg_a_jk;
            }
        }
    }
    Ok(score)
}

/// Log BDeu score of `node` given `parents` with equivalent sample size
/// `ess` and a uniform structure prior.
pub fn bdeu_local(
    data: &Dataset,
    node: usize,
    parents: &[usize],
    ess: f64,
) -> Result<LocalScore, ScoreError> {
    if !(ess > 0.0) || !ess.is_finite() {
        return Err(ScoreError::Ess(ess));
    }
    let parents = check_family(data.n_cols(), node, parents)?;
    let value = bdeu_value(data, node, &parents, ess)?;
    Ok(LocalScore {
        node,
        parents,
        value,
    })
}
