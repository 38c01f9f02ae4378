//! Forward (ancestral) sampling.
//!
//! Row `r` draws from its own ChaCha8 stream (`seed`, stream `r`), so the
//! output depends only on the seed and never on how rows are scheduled.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{BnError, Column, Dataset, DiscreteBn, GaussianBn, Network};
use crate::parallel::{map_range, Execution};

const CHUNK: usize = 512;

/// The random stream used for sample row `row`.
pub fn row_rng(seed: u64, row: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(row);
    rng
}

fn draw_state(row: &[f64], u: f64) -> u32 {
    let mut acc = 0.0;
    let mut last = 0;
    for (s, &p) in row.iter().enumerate() {
        if p > 0.0 {
            acc += p;
            last = s;
            if u < acc {
                return s as u32;
            }
        }
    }
    last as u32
}

fn sample_discrete_row(bn: &DiscreteBn, rng: &mut ChaCha8Rng, out: &mut [u32]) {
    for &v in bn.graph().topological_order() {
        let cpt = bn.cpt(v);
        let cfg = cpt.config_of(out);
        out[v] = draw_state(cpt.row(cfg), rng.random::<f64>());
    }
}

fn sample_gaussian_row(bn: &GaussianBn, rng: &mut ChaCha8Rng, out: &mut [f64]) {
    for &v in bn.graph().topological_order() {
        let parents = bn.graph().parents(v);
        let mean = bn.intercept(v)
            + parents
                .iter()
                .zip(bn.coefficients(v))
                .map(|(&p, c)| c * out[p])
                .sum::<f64>();
        let z: f64 = rng.sample(StandardNormal);
        out[v] = mean + bn.sigma(v) * z;
    }
}

fn chunked<T, F>(exec: Execution, n_rows: usize, width: usize, fill: F) -> Vec<Vec<T>>
where
    T: Copy + Default + Send,
    F: Fn(u64, &mut [T]) + Sync + Send,
{
    let n_chunks = n_rows.div_ceil(CHUNK);
    let chunks = map_range(exec, n_chunks, |c| {
        let start = c * CHUNK;
        let end = (start + CHUNK).min(n_rows);
        let mut rows = vec![T::default(); (end - start) * width];
        for (i, row) in rows.chunks_mut(width).enumerate() {
            fill((start + i) as u64, row);
        }
        rows
    });
    let mut cols = vec![Vec::with_capacity(n_rows); width];
    for chunk in chunks {
        for row in chunk.chunks(width) {
            for (col, &x) in cols.iter_mut().zip(row) {
                col.push(x);
            }
        }
    }
    cols
}

/// Draws `n` rows with the default execution mode.
pub fn forward_sample(network: &Network, n: usize, seed: u64) -> Result<Dataset, BnError> {
    forward_sample_with(network, n, seed, Execution::default())
}

pub fn forward_sample_with(
    network: &Network,
    n: usize,
    seed: u64,
    exec: Execution,
) -> Result<Dataset, BnError> {
    if n == 0 {
        return Err(BnError::ZeroSamples);
    }
    let names = network.graph().names().to_vec();
    let width = names.len();
    let columns = match network {
        Network::Discrete(bn) => {
            let cols = chunked(exec, n, width, |r, row| {
                sample_discrete_row(bn, &mut row_rng(seed, r), row)
            });
            cols.into_iter()
                .enumerate()
                .map(|(v, values)| Column::Discrete {
                    cardinality: bn.cardinality(v) as u32,
                    values,
                })
                .collect()
        }
        Network::Gaussian(bn) => {
            let cols = chunked(exec, n, width, |r, row| {
                sample_gaussian_row(bn, &mut row_rng(seed, r), row)
            });
            cols.into_iter().map(Column::Continuous).collect()
        }
    };
    Dataset::new(names, columns).map_err(|e| BnError::Validation(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bn::parse_gaussian_network;
    use crate::graph::Dag;

    fn coin() -> Network {
        let g = Dag::from_named_edges(&["A", "B"], &[("A", "B")]).unwrap();
        let states = vec![vec!["0".into(), "1".into()]; 2];
        DiscreteBn::new(
            "coin",
            g,
            states,
            vec![vec![0.3, 0.7], vec![1.0, 0.0, 0.1, 0.9]],
        )
        .unwrap()
        .into()
    }

    #[test]
    fn zero_samples_rejected() {
        assert_eq!(
            forward_sample(&coin(), 0, 1).unwrap_err(),
            BnError::ZeroSamples
        );
    }

    #[test]
    fn deterministic_and_schedule_independent() {
        let a = forward_sample_with(&coin(), 2000, 9, Execution::Sequential).unwrap();
        let b = forward_sample(&coin(), 2000, 9).unwrap();
        assert_eq!(a, b);
        let c = forward_sample(&coin(), 2000, 10).unwrap();
        assert_ne!(a, c);
        // prefix property: the first rows do not depend on n
        assert_eq!(forward_sample(&coin(), 10, 9).unwrap(), a.head(10));
    }

    #[test]
    fn zero_probability_states_never_drawn() {
        let d = forward_sample(&coin(), 5000, 3).unwrap();
        let a = d.discrete(0).unwrap();
        let b = d.discrete(1).unwrap();
        assert!(a.iter().zip(b).all(|(&x, &y)| x == 1 || y == 0));
        let ones = a.iter().filter(|&&x| x == 1).count() as f64 / 5000.0;
        assert!((ones - 0.7).abs() < 0.03);
    }

    #[test]
    fn gaussian_rows_are_finite() {
        let bn = parse_gaussian_network("node A 0 1\nnode B 1 0.5\narc A B 2").unwrap();
        let d = forward_sample(&bn.into(), 3000, 4).unwrap();
        let b = d.continuous(1).unwrap();
        let mean = b.iter().sum::<f64>() / b.len() as f64;
        assert!((mean - 1.0).abs() < 0.15);
    }
}
