//! Forward sampling against exact distributions.

use std::collections::HashMap;

use causalkit::bn::{
    exact_marginal, forward_sample, read_dataset, write_dataset, DiscreteBn, Network,
};
use causalkit::networks::{load_bundled, BUNDLED};

fn discrete(name: &str) -> (Network, DiscreteBn) {
    let net = load_bundled(name).unwrap().unwrap();
    let Network::Discrete(bn) = net.clone() else {
        panic!("{name} is not discrete")
    };
    (net, bn)
}

/// Joint distribution built by the chain rule, one node at a time in
/// topological order; keys are partial assignments indexed by node.
fn joint_by_chain_rule(bn: &DiscreteBn) -> HashMap<Vec<u32>, f64> {
    let n = bn.n_nodes();
    let mut joint: HashMap<Vec<u32>, f64> = HashMap::from([(vec![u32::MAX; n], 1.0)]);
    for &v in bn.graph().topological_order() {
        let cpt = bn.cpt(v);
        let mut next = HashMap::new();
        for (a, p) in joint {
            let pv: Vec<u32> = cpt.parents().iter().map(|&q| a[q]).collect();
            let row = cpt.row(cpt.config_index(&pv));
            for (s, &ps) in row.iter().enumerate() {
                let mut b = a.clone();
                b[v] = s as u32;
                *next.entry(b).or_insert(0.0) += p * ps;
            }
        }
        joint = next;
    }
    joint
}

fn marginal_of(joint: &HashMap<Vec<u32>, f64>, v: usize, card: usize) -> Vec<f64> {
    let mut m = vec![0.0; card];
    for (a, p) in joint {
        m[a[v] as usize] += p;
    }
    m
}

#[test]
fn exact_marginals_match_chain_rule() {
    for name in ["cancer", "earthquake", "survey", "asia", "sachs"] {
        let (_, bn) = discrete(name);
        let joint = joint_by_chain_rule(&bn);
        for v in 0..bn.n_nodes() {
            let lib = exact_marginal(&bn, v).unwrap();
            assert!((lib.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            for (a, b) in lib.iter().zip(marginal_of(&joint, v, bn.cardinality(v))) {
                assert!((a - b).abs() < 1e-12, "{name} node {v}");
            }
        }
    }
}

#[test]
fn empirical_marginals_within_total_variation() {
    for (name, seed) in [("cancer", 1), ("earthquake", 2), ("survey", 3)] {
        let (net, bn) = discrete(name);
        let joint = joint_by_chain_rule(&bn);
        let data = forward_sample(&net, 100_000, seed).unwrap();
        for v in 0..bn.n_nodes() {
            let exact = marginal_of(&joint, v, bn.cardinality(v));
            let mut counts = vec![0.0; bn.cardinality(v)];
            for &x in data.discrete(v).unwrap() {
                counts[x as usize] += 1.0;
            }
            let tv: f64 = counts
                .iter()
                .zip(&exact)
                .map(|(c, p)| (c / 100_000.0 - p).abs())
                .sum::<f64>()
                / 2.0;
            assert!(tv <= 0.01, "{name} node {v}: tv {tv}");
        }
    }
}

#[test]
fn conditional_frequencies_converge_to_cpt_rows() {
    for (name, seed) in [("cancer", 4), ("earthquake", 5), ("survey", 6)] {
        let (net, bn) = discrete(name);
        let data = forward_sample(&net, 200_000, seed).unwrap();
        for v in 0..bn.n_nodes() {
            let cpt = bn.cpt(v);
            let cols: Vec<&[u32]> = (0..bn.n_nodes())
                .map(|u| data.discrete(u).unwrap())
                .collect();
            let mut counts = vec![vec![0.0; cpt.cardinality()]; cpt.n_rows()];
            for r in 0..data.n_rows() {
                let pv: Vec<u32> = cpt.parents().iter().map(|&p| cols[p][r]).collect();
                counts[cpt.config_index(&pv)][cols[v][r] as usize] += 1.0;
            }
            for (row, c) in counts.iter().enumerate() {
                let total: f64 = c.iter().sum();
                if total < 2_000.0 {
                    continue;
                }
                for (s, &k) in c.iter().enumerate() {
                    let dev = (k / total - cpt.row(row)[s]).abs();
                    assert!(dev <= 0.02, "{name} node {v} row {row}: deviation {dev}");
                }
            }
        }
    }
}

#[test]
fn gaussian_slope_within_three_standard_errors() {
    let text = "network pair\nnode A 0.0 1.0\nnode B 0.5 1.0\narc A B 2.0\n";
    let net = Network::parse(text).unwrap();
    let data = forward_sample(&net, 100_000, 17).unwrap();
    let a = data.continuous(0).unwrap();
    let b = data.continuous(1).unwrap();
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let sxx: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
    let sxy: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let slope = sxy / sxx;
    let intercept = mb - slope * ma;
    let rss: f64 = a
        .iter()
        .zip(b)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let se = (rss / (n - 2.0) / sxx).sqrt();
    assert!((slope - 2.0).abs() <= 3.0 * se, "slope {slope}, se {se}");
}

#[test]
fn bundled_counts() {
    for b in BUNDLED {
        let d = b.load().unwrap().descriptor();
        assert_eq!((d.node_count, d.arc_count), (b.nodes, b.arcs), "{}", b.name);
    }
    let table = [
        ("cancer", 5, 4),
        ("earthquake", 5, 4),
        ("survey", 6, 6),
        ("asia", 8, 8),
        ("sachs", 11, 17),
        ("child", 20, 25),
        ("insurance", 27, 52),
        ("alarm", 37, 46),
        ("magic-niab", 44, 66),
    ];
    for (name, nodes, arcs) in table {
        let d = load_bundled(name).unwrap().unwrap().descriptor();
        assert_eq!((d.node_count, d.arc_count), (nodes, arcs), "{name}");
    }
}

#[test]
fn generated_data_round_trips() {
    let net = load_bundled("asia").unwrap().unwrap();
    let data = forward_sample(&net, 1000, 7).unwrap();
    assert_eq!((data.n_cols(), data.n_rows()), (8, 1000));
    let text = write_dataset(&data);
    assert_eq!(read_dataset(&text).unwrap(), data);
    assert_eq!(write_dataset(&forward_sample(&net, 1000, 7).unwrap()), text);
}
