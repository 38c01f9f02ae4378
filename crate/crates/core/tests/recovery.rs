//! Sample-based runs: large-sample recovery, order invariance and
//! determinism.

use std::sync::Arc;

use causalkit::bn::{forward_sample, Dataset};
use causalkit::ci::CiSession;
use causalkit::global::{learn_global, GlobalOptions};
use causalkit::local::{learn_local, LocalOptions};
use causalkit::mb::{learn_mb, MbOptions};
use causalkit::metrics::compare_structure;
use causalkit::networks::load_bundled;
use causalkit::{Algorithm, Family};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sample(name: &str, n: usize, seed: u64) -> (causalkit::bn::Network, Arc<Dataset>) {
    let net = load_bundled(name).unwrap().unwrap();
    let data = Arc::new(forward_sample(&net, n, seed).unwrap());
    (net, data)
}

#[test]
fn ges_and_mmhc_recover_cancer() {
    let (net, data) = sample("cancer", 50_000, 2024);
    for a in [Algorithm::Ges, Algorithm::Mmhc] {
        let mut s = CiSession::for_data(Arc::clone(&data), 0.05).unwrap();
        let r = learn_global(&mut s, a, &GlobalOptions::default()).unwrap();
        assert_eq!(
            compare_structure(&r.graph, net.graph()).unwrap().shd,
            0,
            "{a}"
        );
        assert!(r.n_score_evals > 0);
    }
}

#[test]
fn pc_stable_ignores_column_order() {
    let (_, data) = sample("alarm", 5000, 99);
    let run = |d: Arc<Dataset>| {
        let mut s = CiSession::for_data(d, 0.05).unwrap();
        learn_global(&mut s, Algorithm::PcStable, &GlobalOptions::default())
            .unwrap()
            .graph
    };
    let reference = run(Arc::clone(&data));
    assert!(reference.n_edges() > 0);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let mut perm: Vec<usize> = (0..data.n_cols()).collect();
        perm.shuffle(&mut rng);
        let learned = run(Arc::new(data.select(&perm)));
        assert_eq!(
            learned.relabel_to(reference.names()).unwrap(),
            reference,
            "permutation {perm:?}"
        );
    }
}

#[test]
fn every_learner_is_deterministic() {
    let (_, data) = sample("asia", 3000, 5);
    let t = data.index_of("either").unwrap();
    for &a in Algorithm::ALL {
        let run = || {
            let mut s = CiSession::for_data(Arc::clone(&data), 0.05).unwrap();
            match a.family() {
                Family::Global => {
                    let r = learn_global(&mut s, a, &GlobalOptions::default()).unwrap();
                    format!(
                        "{:?} {:?} {} {}",
                        r.graph, r.dag, r.n_ci_tests, r.n_score_evals
                    )
                }
                Family::Local => {
                    let r = learn_local(&mut s, t, a, LocalOptions::default()).unwrap();
                    format!("{:?} {:?} {}", r.structure, r.visited, r.n_ci_tests)
                }
                Family::Mb => {
                    let r = learn_mb(&mut s, t, a, MbOptions::default()).unwrap();
                    format!("{:?} {:?} {}", r.mb, r.pc, r.n_ci_tests)
                }
            }
        };
        assert_eq!(run(), run(), "{a}");
    }
}

#[test]
fn continuous_data_runs_every_learner() {
    let (_, data) = sample("magic-niab", 500, 8);
    for &a in Algorithm::ALL {
        let mut s = CiSession::for_data(Arc::clone(&data), 0.05).unwrap();
        match a.family() {
            Family::Global => assert!(
                learn_global(&mut s, a, &GlobalOptions::default()).is_ok(),
                "{a}"
            ),
            Family::Local => assert!(
                learn_local(&mut s, 0, a, LocalOptions::default()).is_ok(),
                "{a}"
            ),
            Family::Mb => assert!(learn_mb(&mut s, 0, a, MbOptions::default()).is_ok(), "{a}"),
        }
    }
}
