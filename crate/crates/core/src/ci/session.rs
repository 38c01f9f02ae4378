use std::collections::HashMap;
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::fisher::{correlation_matrix, fisher_z_from_correlation};
use super::g2::{g2_reliable, g2_test};
use super::{
    check_alpha, check_query, oracle_ci, Association, CiDecision, CiError, DEFAULT_MAX_COND,
};
use crate::bn::Dataset;
use crate::graph::Dag;

/// The statistical (or exact) test behind a session.
#[derive(Debug)]
pub enum CiTester {
    GSquare(Arc<Dataset>),
    FisherZ {
        data: Arc<Dataset>,
        corr: DMatrix<f64>,
    },
    Oracle(Arc<Dag>),
}

impl CiTester {
    /// G² for all-discrete data, Fisher's z for all-continuous data.
    pub fn for_data(data: Arc<Dataset>) -> Result<Self, CiError> {
        if data.all_discrete() {
            Ok(CiTester::GSquare(data))
        } else if data.all_continuous() {
            let corr = correlation_matrix(&data, None)?;
            Ok(CiTester::FisherZ { data, corr })
        } else {
            Err(CiError::MixedData)
        }
    }

    pub fn n_vars(&self) -> usize {
        match self {
            CiTester::GSquare(d) => d.n_cols(),
            CiTester::FisherZ { corr, .. } => corr.nrows(),
            CiTester::Oracle(g) => g.n_nodes(),
        }
    }

    pub fn var_names(&self) -> &[String] {
        match self {
            CiTester::GSquare(d) => d.names(),
            CiTester::FisherZ { data, .. } => data.names(),
            CiTester::Oracle(g) => g.names(),
        }
    }

    /// The data behind a statistical tester.
    pub fn dataset(&self) -> Option<&Arc<Dataset>> {
        match self {
            CiTester::GSquare(d) | CiTester::FisherZ { data: d, .. } => Some(d),
            CiTester::Oracle(_) => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CiTester::GSquare(_) => "g2",
            CiTester::FisherZ { .. } => "fisher-z",
            CiTester::Oracle(_) => "oracle",
        }
    }

    pub fn is_oracle(&self) -> bool {
        matches!(self, CiTester::Oracle(_))
    }

    pub fn test(&self, x: usize, y: usize, z: &[usize], alpha: f64) -> Result<CiDecision, CiError> {
        match self {
            CiTester::GSquare(d) => g2_test(d, x, y, z, alpha),
            CiTester::FisherZ { data, corr } => {
                fisher_z_from_correlation(corr, data.n_rows(), x, y, z, alpha)
            }
            CiTester::Oracle(g) => oracle_ci(g, x, y, z),
        }
    }

    /// Whether a test would be trusted, without running it.
    pub fn reliable(&self, x: usize, y: usize, z: &[usize]) -> bool {
        match self {
            CiTester::GSquare(d) => g2_reliable(d, x, y, z),
            CiTester::FisherZ { data, .. } => data.n_rows() > z.len() + 3,
            CiTester::Oracle(_) => true,
        }
    }
}

/// Test accounting for one run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CiCounter {
    /// Distinct statistic evaluations (cache hits excluded).
    pub total_tests: u64,
    /// `tests_by_conditioning_size[k]` counts evaluations with `|z| = k`.
    pub tests_by_conditioning_size: Vec<u64>,
    pub cache_hits: u64,
}

impl CiCounter {
    fn record(&mut self, size: usize) {
        self.total_tests += 1;
        if self.tests_by_conditioning_size.len() <= size {
            self.tests_by_conditioning_size.resize(size + 1, 0);
        }
        self.tests_by_conditioning_size[size] += 1;
    }

    pub fn merge(&mut self, other: &CiCounter) {
        self.total_tests += other.total_tests;
        self.cache_hits += other.cache_hits;
        if self.tests_by_conditioning_size.len() < other.tests_by_conditioning_size.len() {
            self.tests_by_conditioning_size
                .resize(other.tests_by_conditioning_size.len(), 0);
        }
        for (a, b) in self
            .tests_by_conditioning_size
            .iter_mut()
            .zip(&other.tests_by_conditioning_size)
        {
            *a += b;
        }
    }
}

/// A tester plus run settings, a decision cache and counters.
///
/// Sessions are confined to one thread. Per-node work that runs in
/// parallel takes a [`fork`](CiSession::fork) each and the parent
/// [`absorb`](CiSession::absorb)s them back in a fixed order, so counts do
/// not depend on scheduling.
#[derive(Debug, Clone)]
pub struct CiSession {
    tester: Arc<CiTester>,
    alpha: f64,
    max_cond: Option<usize>,
    caching: bool,
    cache: HashMap<Vec<usize>, CiDecision>,
    counter: CiCounter,
}

impl CiSession {
    pub fn new(tester: Arc<CiTester>, alpha: f64) -> Result<Self, CiError> {
        check_alpha(alpha)?;
        Ok(CiSession {
            tester,
            alpha,
            max_cond: None,
            caching: true,
            cache: HashMap::new(),
            counter: CiCounter::default(),
        })
    }

    pub fn for_data(data: Arc<Dataset>, alpha: f64) -> Result<Self, CiError> {
        CiSession::new(Arc::new(CiTester::for_data(data)?), alpha)
    }

    /// Oracle sessions start with caching off: a d-separation query is
    /// cheaper than storing its answer.
    pub fn oracle(graph: Arc<Dag>) -> Self {
        CiSession::new(Arc::new(CiTester::Oracle(graph)), super::DEFAULT_ALPHA)
            .expect("default alpha is valid")
            .with_caching(false)
    }

    /// `None` restores the default cap (3 for data, unlimited for the oracle).
    pub fn with_max_cond(mut self, max_cond: Option<usize>) -> Self {
        self.max_cond = max_cond;
        self
    }

    pub fn with_caching(mut self, caching: bool) -> Self {
        self.caching = caching;
        self
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Effective conditioning-size cap for subset searches.
    pub fn max_cond(&self) -> usize {
        match (self.max_cond, self.tester.is_oracle()) {
            (Some(k), _) => k,
            (None, true) => usize::MAX,
            (None, false) => DEFAULT_MAX_COND,
        }
    }

    pub fn tester(&self) -> &Arc<CiTester> {
        &self.tester
    }

    pub fn n_vars(&self) -> usize {
        self.tester.n_vars()
    }

    pub fn var_names(&self) -> &[String] {
        self.tester.var_names()
    }

    pub fn is_oracle(&self) -> bool {
        self.tester.is_oracle()
    }

    pub fn counter(&self) -> &CiCounter {
        &self.counter
    }

    pub fn test(&mut self, x: usize, y: usize, z: &[usize]) -> Result<CiDecision, CiError> {
        check_query(self.n_vars(), x, y, z)?;
        let mut zs = z.to_vec();
        zs.sort_unstable();
        let (a, b) = (x.min(y), x.max(y));
        let key: Vec<usize> = if self.caching {
            let key: Vec<usize> = [a, b].into_iter().chain(zs.iter().copied()).collect();
            if let Some(d) = self.cache.get(&key) {
                self.counter.cache_hits += 1;
                return Ok(*d);
            }
            key
        } else {
            Vec::new()
        };
        let d = self.tester.test(a, b, &zs, self.alpha)?;
        self.counter.record(zs.len());
        if self.caching {
            self.cache.insert(key, d);
        }
        Ok(d)
    }

    pub fn independent(&mut self, x: usize, y: usize, z: &[usize]) -> Result<bool, CiError> {
        Ok(self.test(x, y, z)?.independent)
    }

    pub fn association(&mut self, x: usize, y: usize, z: &[usize]) -> Result<Association, CiError> {
        Ok(self.test(x, y, z)?.association())
    }

    /// Whether the test of `x ⟂ y | z` would be reliable. Not counted.
    pub fn reliable(&self, x: usize, y: usize, z: &[usize]) -> bool {
        self.tester.reliable(x, y, z)
    }

    /// A session with the same tester and settings but an empty cache and
    /// zeroed counters.
    pub fn fork(&self) -> CiSession {
        CiSession {
            tester: Arc::clone(&self.tester),
            alpha: self.alpha,
            max_cond: self.max_cond,
            caching: self.caching,
            cache: HashMap::new(),
            counter: CiCounter::default(),
        }
    }

    /// Folds a fork's counters and cached decisions into this session.
    pub fn absorb(&mut self, other: CiSession) {
        self.counter.merge(&other.counter);
        if self.caching {
            self.cache.extend(other.cache);
        }
    }
}
