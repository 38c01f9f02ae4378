//! Type-I error of the data tests under true independence, and the G²
//! statistic against a direct computation.

mod common;

use std::collections::HashMap;

use causalkit::bn::{Column, Dataset};
use causalkit::ci::{fisher_z_test, g2_test};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use statrs::distribution::{ChiSquared, ContinuousCDF};

const RUNS: u64 = 1000;
const ALPHA: f64 = 0.05;

fn discrete(cols: Vec<Vec<u32>>, cards: &[u32]) -> Dataset {
    let names = (0..cols.len()).map(|i| format!("V{i}")).collect();
    let columns = cols
        .into_iter()
        .zip(cards)
        .map(|(values, &cardinality)| Column::Discrete {
            cardinality,
            values,
        })
        .collect();
    Dataset::new(names, columns).unwrap()
}

fn continuous(cols: Vec<Vec<f64>>) -> Dataset {
    let names = (0..cols.len()).map(|i| format!("V{i}")).collect();
    Dataset::new(names, cols.into_iter().map(Column::Continuous).collect()).unwrap()
}

fn assert_calibrated(label: &str, rejections: u64) {
    let rate = rejections as f64 / RUNS as f64;
    assert!(
        (0.03..=0.07).contains(&rate),
        "{label}: type-I error {rate}"
    );
}

#[test]
fn g2_type_one_error() {
    let mut marginal = 0;
    let mut conditional = 0;
    for seed in 0..RUNS {
        let mut rng = common::rng(seed);
        let n = 1000;
        let z: Vec<u32> = (0..n).map(|_| rng.random_range(0..2)).collect();
        // x and y depend on z but not on each other
        let x: Vec<u32> = z
            .iter()
            .map(|&s| u32::from(rng.random::<f64>() < 0.3 + 0.4 * s as f64))
            .collect();
        let y: Vec<u32> = z
            .iter()
            .map(|&s| {
                if rng.random::<f64>() < 0.5 {
                    s * 2
                } else {
                    rng.random_range(0..3)
                }
            })
            .collect();
        let w: Vec<u32> = (0..n).map(|_| rng.random_range(0..3)).collect();
        let data = discrete(vec![x, y, z, w], &[2, 3, 2, 3]);
        if !g2_test(&data, 0, 3, &[], ALPHA).unwrap().independent {
            marginal += 1;
        }
        if !g2_test(&data, 0, 1, &[2], ALPHA).unwrap().independent {
            conditional += 1;
        }
    }
    assert_calibrated("G2 marginal", marginal);
    assert_calibrated("G2 conditional", conditional);
}

#[test]
fn fisher_z_type_one_error() {
    let mut marginal = 0;
    let mut conditional = 0;
    for seed in 0..RUNS {
        let mut rng = common::rng(10_000 + seed);
        let n = 300;
        let mut noise = || -> f64 { StandardNormal.sample(&mut rng) };
        let z: Vec<f64> = (0..n).map(|_| noise()).collect();
        let x: Vec<f64> = z.iter().map(|&v| 0.8 * v + noise()).collect();
        let y: Vec<f64> = z.iter().map(|&v| -1.2 * v + noise()).collect();
        let w: Vec<f64> = (0..n).map(|_| noise()).collect();
        let data = continuous(vec![x, y, z, w]);
        if !fisher_z_test(&data, 0, 3, &[], ALPHA).unwrap().independent {
            marginal += 1;
        }
        if !fisher_z_test(&data, 0, 1, &[2], ALPHA).unwrap().independent {
            conditional += 1;
        }
    }
    assert_calibrated("Fisher-z marginal", marginal);
    assert_calibrated("Fisher-z conditional", conditional);
}

/// G² summed stratum by stratum from hash-map counts.
fn g2_direct(x: &[u32], y: &[u32], z: &[u32]) -> (f64, usize) {
    let mut strata: HashMap<u32, Vec<(u32, u32)>> = HashMap::new();
    for i in 0..x.len() {
        strata.entry(z[i]).or_default().push((x[i], y[i]));
    }
    let mut g = 0.0;
    let mut dof = 0;
    for rows in strata.values() {
        let n = rows.len() as f64;
        let mut nxy: HashMap<(u32, u32), f64> = HashMap::new();
        let mut nx: HashMap<u32, f64> = HashMap::new();
        let mut ny: HashMap<u32, f64> = HashMap::new();
        for &(a, b) in rows {
            *nxy.entry((a, b)).or_default() += 1.0;
            *nx.entry(a).or_default() += 1.0;
            *ny.entry(b).or_default() += 1.0;
        }
        for (&(a, b), &o) in &nxy {
            g += 2.0 * o * (o / (nx[&a] * ny[&b] / n)).ln();
        }
        dof += (nx.len() - 1) * (ny.len() - 1);
    }
    (g, dof)
}

#[test]
fn g2_statistic_matches_direct_sum() {
    for seed in 0..50 {
        let mut rng = common::rng(500 + seed);
        let n = 800;
        let z: Vec<u32> = (0..n).map(|_| rng.random_range(0..2)).collect();
        let x: Vec<u32> = z
            .iter()
            .map(|&s| (s + rng.random_range(0..2)) % 3)
            .collect();
        let y: Vec<u32> = x
            .iter()
            .map(|&a| {
                if rng.random::<f64>() < 0.2 {
                    a
                } else {
                    rng.random_range(0..3)
                }
            })
            .collect();
        let data = discrete(vec![x.clone(), y.clone(), z.clone()], &[3, 3, 2]);
        let d = g2_test(&data, 0, 1, &[2], ALPHA).unwrap();
        let (g, dof) = g2_direct(&x, &y, &z);
        assert!(
            (d.statistic - g).abs() < 1e-8 * g.max(1.0),
            "{} vs {g}",
            d.statistic
        );
        assert_eq!(d.dof, dof.max(1));
        let p = 1.0 - ChiSquared::new(dof.max(1) as f64).unwrap().cdf(g);
        assert!((d.p_value - p).abs() < 1e-9);
    }
}
