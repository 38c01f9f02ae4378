//! Experiment grids.
//!
//! A config file holds one or more `run` blocks of `key = value` lines:
//!
//! ```text
//! # comment
//! run
//! network = asia            # bundled name or network file
//! n = 1000, 5000            # sample sizes; `oracle` uses d-separation
//! algorithms = PC, IAMB
//! seeds = 1, 2
//! alpha = 0.05              # optional, default 0.05
//! targets = either, dysp    # optional, default every node
//! max_cond = 3              # optional
//! ```
//!
//! Every (network, n, algorithm, seed, target) combination becomes one CSV
//! row; whole-graph learners get a single row with an empty target.
//! Failures are recorded in the `error` column and the grid carries on.

use std::path::Path;
use std::sync::Arc;

use causalkit::bn::forward_sample;
use causalkit::ci::{CiSession, DEFAULT_ALPHA};
use causalkit::metrics::{EfficiencyMetrics, SetMetrics, StructureMetrics};
use causalkit::parallel::{map_slice, Execution};
use causalkit::{Algorithm, Dag};

use crate::{execute, load_network, parse_algorithm, score_against, CliError, Outcome, Settings};

pub const CSV_HEADER: [&str; 22] = [
    "network",
    "n",
    "algorithm",
    "seed",
    "target",
    "ar_precision",
    "ar_recall",
    "ar_f1",
    "ad_precision",
    "ad_recall",
    "ad_f1",
    "shd",
    "extra_edges",
    "missing_edges",
    "reversed_edges",
    "precision",
    "recall",
    "f1",
    "distance",
    "elapsed_seconds",
    "n_tests",
    "error",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleSize {
    Oracle,
    Rows(usize),
}

impl SampleSize {
    fn label(self) -> String {
        match self {
            SampleSize::Oracle => "oracle".into(),
            SampleSize::Rows(n) => n.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunBlock {
    pub network: String,
    pub sizes: Vec<SampleSize>,
    pub algorithms: Vec<Algorithm>,
    pub seeds: Vec<u64>,
    pub alpha: f64,
    pub targets: Option<Vec<String>>,
    pub max_cond: Option<usize>,
}

fn list(value: &str) -> impl Iterator<Item = &str> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty())
}

pub fn parse_config(text: &str) -> Result<Vec<RunBlock>, CliError> {
    let mut blocks: Vec<Vec<(usize, String, String)>> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if line == "run" {
            blocks.push(Vec::new());
            continue;
        }
        let err = |m: &str| CliError::usage(format!("config line {}: {m}", i + 1));
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| err("expected key = value"))?;
        blocks
            .last_mut()
            .ok_or_else(|| err("setting outside a run block"))?
            .push((i + 1, k.trim().into(), v.trim().into()));
    }
    if blocks.is_empty() {
        return Err(CliError::usage("config has no run blocks"));
    }
    blocks.into_iter().map(|kv| parse_block(&kv)).collect()
}

fn parse_block(kv: &[(usize, String, String)]) -> Result<RunBlock, CliError> {
    let mut b = RunBlock {
        network: String::new(),
        sizes: Vec::new(),
        algorithms: Vec::new(),
        seeds: Vec::new(),
        alpha: DEFAULT_ALPHA,
        targets: None,
        max_cond: None,
    };
    for (line, k, v) in kv {
        let err = |m: String| CliError::usage(format!("config line {line}: {m}"));
        let num = |s: &str| {
            s.parse::<u64>()
                .map_err(|_| err(format!("'{s}' is not a whole number")))
        };
        match k.as_str() {
            "network" => b.network = v.clone(),
            "n" => {
                for s in list(v) {
                    b.sizes.push(if s.eq_ignore_ascii_case("oracle") {
                        SampleSize::Oracle
                    } else {
                        match num(s)? {
                            0 => return Err(err("sample sizes must be positive".into())),
                            n => SampleSize::Rows(n as usize),
                        }
                    });
                }
            }
            "algorithms" => {
                for s in list(v) {
                    b.algorithms
                        .push(parse_algorithm(s).map_err(|e| err(e.message))?);
                }
            }
            "seeds" => b.seeds = list(v).map(num).collect::<Result<_, _>>()?,
            "alpha" => {
                b.alpha = v
                    .parse()
                    .ok()
                    .filter(|a: &f64| *a > 0.0 && *a < 1.0)
                    .ok_or_else(|| err(format!("bad alpha '{v}'")))?
            }
            "targets" => b.targets = Some(list(v).map(String::from).collect()),
            "max_cond" => b.max_cond = Some(num(v)? as usize),
            other => return Err(err(format!("unknown key '{other}'"))),
        }
    }
    let first = kv.first().map_or(0, |e| e.0);
    let missing =
        |what: &str| CliError::usage(format!("run block at line {first}: missing {what}"));
    if b.network.is_empty() {
        return Err(missing("network"));
    }
    if b.sizes.is_empty() {
        return Err(missing("n"));
    }
    if b.algorithms.is_empty() {
        return Err(missing("algorithms"));
    }
    if b.seeds.is_empty() {
        return Err(missing("seeds"));
    }
    Ok(b)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub network: String,
    pub n: String,
    pub algorithm: String,
    pub seed: u64,
    pub target: String,
    pub structure: Option<StructureMetrics>,
    pub set: Option<SetMetrics>,
    pub efficiency: Option<EfficiencyMetrics>,
    pub error: String,
}

impl Row {
    fn fields(&self) -> Vec<String> {
        let opt = |v: Option<String>| v.unwrap_or_default();
        let s = self.structure;
        let m = self.set;
        let e = self.efficiency;
        vec![
            self.network.clone(),
            self.n.clone(),
            self.algorithm.clone(),
            self.seed.to_string(),
            self.target.clone(),
            opt(s.map(|s| s.ar_precision.to_string())),
            opt(s.map(|s| s.ar_recall.to_string())),
            opt(s.map(|s| s.ar_f1.to_string())),
            opt(s.map(|s| s.ad_precision.to_string())),
            opt(s.map(|s| s.ad_recall.to_string())),
            opt(s.map(|s| s.ad_f1.to_string())),
            opt(s.map(|s| s.shd.to_string())),
            opt(s.map(|s| s.extra_edges.to_string())),
            opt(s.map(|s| s.missing_edges.to_string())),
            opt(s.map(|s| s.reversed_edges.to_string())),
            opt(m.map(|m| m.precision.to_string())),
            opt(m.map(|m| m.recall.to_string())),
            opt(m.map(|m| m.f1.to_string())),
            opt(m.map(|m| m.distance.to_string())),
            opt(e.map(|e| e.elapsed_seconds.to_string())),
            opt(e.map(|e| e.n_ci_tests_or_score_evals.to_string())),
            self.error.clone(),
        ]
    }
}

struct Job {
    algorithm: Algorithm,
    /// Empty for whole-graph learners.
    target: String,
}

/// Runs every block and returns the rows in config order.
pub fn run_blocks(blocks: &[RunBlock], exec: Execution) -> Vec<Row> {
    let mut rows = Vec::new();
    for b in blocks {
        for &size in &b.sizes {
            for &seed in &b.seeds {
                rows.extend(run_cell(b, size, seed, exec));
            }
        }
    }
    rows
}

fn run_cell(b: &RunBlock, size: SampleSize, seed: u64, exec: Execution) -> Vec<Row> {
    let row = |algorithm: Algorithm, target: String| Row {
        network: b.network.clone(),
        n: size.label(),
        algorithm: algorithm.name().into(),
        seed,
        target,
        structure: None,
        set: None,
        efficiency: None,
        error: String::new(),
    };
    let failed = |message: String| -> Vec<Row> {
        b.algorithms
            .iter()
            .map(|&a| Row {
                error: message.clone(),
                ..row(a, String::new())
            })
            .collect()
    };
    let net = match load_network(&b.network) {
        Ok((net, _)) => net,
        Err(e) => return failed(e.message),
    };
    let truth: &Dag = net.graph();
    let names = truth.names().to_vec();
    let base = match size {
        SampleSize::Oracle => CiSession::oracle(Arc::new(truth.clone())),
        SampleSize::Rows(n) => {
            let session = forward_sample(&net, n, seed)
                .map_err(|e| e.to_string())
                .and_then(|d| CiSession::for_data(Arc::new(d), b.alpha).map_err(|e| e.to_string()));
            match session {
                Ok(s) => s,
                Err(e) => return failed(e),
            }
        }
    };
    let base = base.with_max_cond(b.max_cond);

    let mut jobs = Vec::new();
    for &algorithm in &b.algorithms {
        if !algorithm.needs_target() {
            jobs.push(Job {
                algorithm,
                target: String::new(),
            });
            continue;
        }
        for target in b.targets.clone().unwrap_or_else(|| names.clone()) {
            jobs.push(Job { algorithm, target });
        }
    }
    map_slice(exec, &jobs, |job| {
        let mut r = row(job.algorithm, job.target.clone());
        let target = match job.target.as_str() {
            "" => None,
            t => match names.iter().position(|n| n == t) {
                Some(i) => Some(i),
                None => {
                    r.error = format!("unknown target '{t}'");
                    return r;
                }
            },
        };
        let mut session = base.fork();
        let outcome = execute(&mut session, job.algorithm, target, &Settings::default()).and_then(
            |learned| score_against(&learned, &names, truth).map(|m| (m, learned.efficiency())),
        );
        match outcome {
            Ok(((structure, set), eff)) => {
                r.structure = structure;
                r.set = set;
                r.efficiency = Some(eff);
            }
            Err(e) => r.error = e.message,
        }
        r
    })
}

pub fn write_csv(rows: &[Row]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for r in rows {
        w.write_record(r.fields()).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("CSV is UTF-8")
}

pub fn cmd_benchmark(config: &Path, out: Option<&Path>) -> Result<Outcome, CliError> {
    let text = std::fs::read_to_string(config)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", config.display())))?;
    let blocks = parse_config(&text)?;
    let rows = run_blocks(&blocks, Execution::default());
    let failures = rows.iter().filter(|r| !r.error.is_empty()).count();
    let summary = format!("{} rows, {failures} failed\n", rows.len());
    crate::write_or_print(out, write_csv(&rows), summary)
}
