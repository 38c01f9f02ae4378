//! Command-line front-end: `generate`, `learn`, `evaluate`, `benchmark`.
//!
//! [`run`] executes one invocation in-process and returns the exit code
//! with everything that would have gone to standard output and standard
//! error; the binary is a thin wrapper around it.

pub mod benchmark;
pub mod error;
pub mod report;

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use causalkit::bn::{forward_sample, read_dataset, write_dataset, Dataset, Network};
use causalkit::ci::CiSession;
use causalkit::global::{learn_global, GlobalOptions, StructureResult};
use causalkit::graph::{parse_graph_text, true_local, GraphText};
use causalkit::local::{learn_local, LocalOptions, LocalResult};
use causalkit::mb::{learn_mb, MbOptions, MbResult, DEFAULT_FBED_K};
use causalkit::metrics::{
    compare_sets, compare_structure, record_efficiency, EfficiencyMetrics, SetMetrics,
    StructureMetrics,
};
use causalkit::networks::bundled;
use causalkit::score::{ScoreKind, DEFAULT_ESS};
use causalkit::{Algorithm, Dag, Family};
use clap::{Args, Parser, Subcommand};

pub use error::CliError;
use report::{names_of, InputDigest, Parameters, Payload, RunReport};

#[derive(Debug, Parser)]
#[command(
    name = "causalkit",
    version,
    about = "Simulate Bayesian-network data, learn causal structure, evaluate results"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Draw samples from a network and write them as a dataset.
    Generate {
        /// Network file (BIF or linear-Gaussian descriptor), or a bundled network name.
        network: String,
        /// Number of samples.
        #[arg(short = 'n', long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one learner on a dataset and print a JSON report.
    Learn(LearnArgs),
    /// Score a learn report against a ground-truth network.
    Evaluate {
        result: PathBuf,
        /// Network file or bundled network name.
        truth: String,
    },
    /// Run a grid of experiments from a config file and print CSV.
    Benchmark {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct LearnArgs {
    /// Learner name, e.g. PC-stable, IAMB, CMB.
    pub algorithm: String,
    /// Dataset file.
    pub data: PathBuf,
    /// `dis` (discrete) or `con` (continuous).
    pub data_type: String,
    /// Significance level of the independence tests.
    pub alpha: f64,
    /// Target variable (name or column index); required by blanket and local learners.
    #[arg(long)]
    pub target: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Largest conditioning set; 3 when omitted.
    #[arg(long)]
    pub max_cond: Option<usize>,
    /// `bdeu` or `bic` for the score-based learners.
    #[arg(long)]
    pub score: Option<String>,
    /// BDeu equivalent sample size.
    #[arg(long, default_value_t = DEFAULT_ESS)]
    pub ess: f64,
    /// Extra FBED forward runs.
    #[arg(long, default_value_t = DEFAULT_FBED_K)]
    pub fbed_k: usize,
    /// Visit limit for the local learners.
    #[arg(long)]
    pub max_visited: Option<usize>,
    /// Recorded in the report; the learners themselves are deterministic.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Ground-truth network; adds accuracy metrics to the report.
    #[arg(long)]
    pub truth: Option<String>,
}

/// What one invocation produced.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn failed(e: CliError) -> Self {
        Outcome {
            code: e.code,
            stdout: String::new(),
            stderr: format!("{e}\n"),
        }
    }
}

/// Runs one command line (without the program name).
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(
        std::iter::once("causalkit".to_string()).chain(args.iter().cloned()),
    ) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { error::USAGE } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let result = match cli.command {
        Command::Generate {
            network,
            n,
            seed,
            out,
        } => generate(&network, n, seed, out.as_deref()),
        Command::Learn(a) => cmd_learn(&a, args),
        Command::Evaluate { result, truth } => evaluate(&result, &truth),
        Command::Benchmark { config, out } => benchmark::cmd_benchmark(&config, out.as_deref()),
    };
    result.unwrap_or_else(Outcome::failed)
}

fn read_file(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))
}

fn write_or_print(out: Option<&Path>, text: String, summary: String) -> Result<Outcome, CliError> {
    match out {
        Some(p) => {
            std::fs::write(p, &text)
                .map_err(|e| CliError::usage(format!("cannot write {}: {e}", p.display())))?;
            Ok(Outcome {
                code: 0,
                stdout: String::new(),
                stderr: summary,
            })
        }
        None => Ok(Outcome {
            code: 0,
            stdout: text,
            stderr: summary,
        }),
    }
}

/// A network from a file path, or failing that from the bundled set.
/// Returns the network with the bytes it was parsed from.
pub fn load_network(spec: &str) -> Result<(Network, Vec<u8>), CliError> {
    let path = Path::new(spec);
    let bytes = if path.exists() {
        read_file(path)?
    } else if let Some(b) = bundled(spec) {
        b.text.as_bytes().to_vec()
    } else {
        return Err(CliError::usage(format!(
            "'{spec}' is neither a file nor a bundled network"
        )));
    };
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| CliError::usage(format!("{spec}: not UTF-8 text")))?;
    let net = Network::parse(&text).map_err(|e| CliError::usage(format!("{spec}: {e}")))?;
    Ok((net, bytes))
}

fn generate(network: &str, n: usize, seed: u64, out: Option<&Path>) -> Result<Outcome, CliError> {
    if n == 0 {
        return Err(CliError::usage("sample size n must be at least 1"));
    }
    let (net, _) = load_network(network)?;
    let data = forward_sample(&net, n, seed).map_err(|e| CliError::usage(e.to_string()))?;
    let summary = format!(
        "generated {} rows x {} columns (seed {seed})\n",
        data.n_rows(),
        data.n_cols()
    );
    write_or_print(out, write_dataset(&data), summary)
}

/// Learner settings shared by `learn` and `benchmark`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Settings {
    pub score: Option<ScoreKind>,
    pub mb: MbOptions,
    pub max_visited: Option<usize>,
}

pub enum Learned {
    Structure(StructureResult),
    Local(LocalResult),
    Blanket(MbResult),
}

impl Learned {
    pub fn efficiency(&self) -> EfficiencyMetrics {
        match self {
            Learned::Structure(r) if r.algorithm.uses_score() => {
                record_efficiency(r.n_score_evals, r.elapsed)
            }
            Learned::Structure(r) => record_efficiency(r.n_ci_tests, r.elapsed),
            Learned::Local(r) => record_efficiency(r.n_ci_tests, r.elapsed),
            Learned::Blanket(r) => record_efficiency(r.n_ci_tests, r.elapsed),
        }
    }

    pub fn payload(&self, names: &[String]) -> Payload {
        match self {
            Learned::Structure(r) => Payload::Structure {
                graph: r.graph.to_text(),
                dag: r.dag.as_ref().map(|d| d.to_text()),
            },
            Learned::Local(r) => {
                let s = &r.structure;
                Payload::Local {
                    target: names[s.target].clone(),
                    parents: names_of(&s.parents, names),
                    children: names_of(&s.children, names),
                    undirected: names_of(&s.undirected_neighbors, names),
                    spouses: names_of(&s.spouses, names),
                    visited: r.visited.iter().map(|&v| names[v].clone()).collect(),
                }
            }
            Learned::Blanket(r) => Payload::Blanket {
                target: names[r.target].clone(),
                markov_blanket: names_of(&r.mb, names),
                parents_and_children: names_of(&r.pc, names),
            },
        }
    }
}

/// Runs `algorithm`; `target` must be set for blanket and local learners.
pub fn execute(
    session: &mut CiSession,
    algorithm: Algorithm,
    target: Option<usize>,
    settings: &Settings,
) -> Result<Learned, CliError> {
    let need = |t: Option<usize>| {
        t.ok_or_else(|| CliError::missing_target(format!("{algorithm} needs --target")))
    };
    Ok(match algorithm.family() {
        Family::Global => {
            let opts = GlobalOptions {
                score: settings.score,
                mb: settings.mb,
                ..Default::default()
            };
            Learned::Structure(learn_global(session, algorithm, &opts)?)
        }
        Family::Local => {
            let opts = LocalOptions {
                max_visited: settings.max_visited,
                mb: settings.mb,
            };
            Learned::Local(learn_local(session, need(target)?, algorithm, opts)?)
        }
        Family::Mb => Learned::Blanket(learn_mb(session, need(target)?, algorithm, settings.mb)?),
    })
}

pub fn parse_algorithm(name: &str) -> Result<Algorithm, CliError> {
    name.parse::<Algorithm>().map_err(|_| {
        let known: Vec<&str> = Algorithm::ALL.iter().map(|a| a.name()).collect();
        CliError::usage(format!(
            "unknown algorithm '{name}'; known: {}",
            known.join(", ")
        ))
    })
}

/// `dis`/`discrete` → true, `con`/`continuous` → false.
fn parse_data_type(s: &str) -> Result<bool, CliError> {
    match s.to_ascii_lowercase().as_str() {
        "dis" | "discrete" => Ok(true),
        "con" | "continuous" => Ok(false),
        _ => Err(CliError::usage(format!(
            "data type must be dis or con, got '{s}'"
        ))),
    }
}

fn resolve_target(spec: &str, names: &[String]) -> Result<usize, CliError> {
    if let Some(i) = names.iter().position(|n| n == spec) {
        return Ok(i);
    }
    match spec.parse::<usize>() {
        Ok(i) if i < names.len() => Ok(i),
        _ => Err(CliError::mismatch(format!(
            "target '{spec}' is not a column of the data"
        ))),
    }
}

/// Accuracy of `learned` against `truth`, matched by variable name.
pub fn score_against(
    learned: &Learned,
    names: &[String],
    truth: &Dag,
) -> Result<(Option<StructureMetrics>, Option<SetMetrics>), CliError> {
    let truth_names: BTreeSet<&String> = truth.names().iter().collect();
    if truth_names != names.iter().collect() {
        return Err(CliError::mismatch(
            "data columns and truth network nodes differ",
        ));
    }
    let map = |s: &BTreeSet<usize>| -> BTreeSet<usize> {
        s.iter()
            .map(|&i| truth.index_of(&names[i]).expect("same names"))
            .collect()
    };
    Ok(match learned {
        Learned::Structure(r) => (
            Some(
                compare_structure(&r.graph, truth)
                    .map_err(|e| CliError::mismatch(e.to_string()))?,
            ),
            None,
        ),
        Learned::Local(r) => {
            let t = truth
                .index_of(&names[r.structure.target])
                .expect("same names");
            let want = true_local(truth, t).expect("valid target").adjacent();
            (
                None,
                Some(compare_sets(&map(&r.structure.adjacent()), &want)),
            )
        }
        Learned::Blanket(r) => {
            let t = truth.index_of(&names[r.target]).expect("same names");
            let want = true_local(truth, t).expect("valid target").markov_blanket();
            (None, Some(compare_sets(&map(&r.mb), &want)))
        }
    })
}

fn cmd_learn(a: &LearnArgs, command: Vec<String>) -> Result<Outcome, CliError> {
    let report = learn(a, command)?;
    let summary = format!(
        "{}: {} tests/evaluations in {:.3}s\n",
        report.algorithm,
        report.efficiency.n_ci_tests_or_score_evals,
        report.efficiency.elapsed_seconds
    );
    write_or_print(a.out.as_deref(), report.to_json(), summary)
}

/// Validates the arguments, runs the learner and assembles the report.
pub fn learn(a: &LearnArgs, command: Vec<String>) -> Result<RunReport, CliError> {
    let algorithm = parse_algorithm(&a.algorithm)?;
    if !(a.alpha > 0.0 && a.alpha < 1.0) {
        return Err(CliError::usage(format!(
            "alpha must lie strictly between 0 and 1, got {}",
            a.alpha
        )));
    }
    let discrete = parse_data_type(&a.data_type)?;
    if algorithm.needs_target() && a.target.is_none() {
        return Err(CliError::missing_target(format!(
            "{algorithm} needs --target"
        )));
    }
    let score = match a.score.as_deref().map(str::to_ascii_lowercase).as_deref() {
        None => None,
        Some("bdeu") => Some(ScoreKind::Bdeu { ess: a.ess }),
        Some("bic") => Some(ScoreKind::Bic),
        Some(other) => {
            return Err(CliError::usage(format!(
                "score must be bdeu or bic, got '{other}'"
            )))
        }
    };
    if !(a.ess > 0.0 && a.ess.is_finite()) {
        return Err(CliError::usage("ess must be positive"));
    }

    let bytes = read_file(&a.data)?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| CliError::usage("data file is not UTF-8 text"))?;
    let data: Dataset =
        read_dataset(&text).map_err(|e| CliError::usage(format!("{}: {e}", a.data.display())))?;
    let matches = if discrete {
        data.all_discrete()
    } else {
        data.all_continuous()
    };
    if !matches || data.n_cols() == 0 {
        return Err(CliError::mismatch(format!(
            "data type '{}' does not match the columns of {}",
            a.data_type,
            a.data.display()
        )));
    }
    if matches!(score, Some(ScoreKind::Bdeu { .. })) && !discrete {
        return Err(CliError::mismatch("BDeu needs discrete data"));
    }
    let names = data.names().to_vec();
    let target = a
        .target
        .as_deref()
        .map(|t| resolve_target(t, &names))
        .transpose()?;
    let mut inputs = vec![InputDigest::of(
        "data",
        &a.data.display().to_string(),
        &bytes,
    )];
    let truth = match &a.truth {
        Some(spec) => {
            let (net, tb) = load_network(spec)?;
            inputs.push(InputDigest::of("truth", spec, &tb));
            Some(net.graph().clone())
        }
        None => None,
    };

    let data = Arc::new(data);
    let mut session = CiSession::for_data(Arc::clone(&data), a.alpha)
        .map_err(|e| CliError::mismatch(e.to_string()))?
        .with_max_cond(a.max_cond);
    let settings = Settings {
        score,
        mb: MbOptions { fbed_k: a.fbed_k },
        max_visited: a.max_visited,
    };
    let learned = execute(&mut session, algorithm, target, &settings)?;
    let (structure_metrics, set_metrics) = match &truth {
        Some(t) => score_against(&learned, &names, t)?,
        None => (None, None),
    };
    let effective_score = algorithm
        .uses_score()
        .then(|| score.unwrap_or_else(|| ScoreKind::default_for(&data)));
    Ok(RunReport {
        command,
        algorithm: algorithm.name().into(),
        family: family_name(algorithm.family()).into(),
        parameters: Parameters {
            alpha: a.alpha,
            data_type: if discrete { "dis" } else { "con" }.into(),
            max_cond: session.max_cond(),
            score: effective_score.map(|s| s.name().into()),
            ess: match effective_score {
                Some(ScoreKind::Bdeu { ess }) => Some(ess),
                _ => None,
            },
            fbed_k: a.fbed_k,
            max_visited: a.max_visited,
            seed: a.seed,
            target: target.map(|t| names[t].clone()),
        },
        inputs,
        result: learned.payload(&names),
        variables: names,
        structure_metrics,
        set_metrics,
        efficiency: learned.efficiency(),
    })
}

pub fn family_name(f: Family) -> &'static str {
    match f {
        Family::Global => "global",
        Family::Local => "local",
        Family::Mb => "mb",
    }
}

#[derive(serde::Serialize)]
struct Evaluation {
    #[serde(skip_serializing_if = "Option::is_none")]
    structure_metrics: Option<StructureMetrics>,
    #[serde(skip_serializing_if = "Option::is_none")]
    set_metrics: Option<SetMetrics>,
}

fn evaluate(result: &Path, truth: &str) -> Result<Outcome, CliError> {
    let text = String::from_utf8(read_file(result)?)
        .map_err(|_| CliError::usage("report is not UTF-8 text"))?;
    let report: RunReport = serde_json::from_str(&text)
        .map_err(|e| CliError::usage(format!("{}: {e}", result.display())))?;
    let (net, _) = load_network(truth)?;
    let g = net.graph();
    let index = |name: &String| {
        g.index_of(name)
            .ok_or_else(|| CliError::mismatch(format!("node '{name}' is not in the truth network")))
    };
    let set = |names: &[String]| {
        names
            .iter()
            .map(index)
            .collect::<Result<BTreeSet<usize>, _>>()
    };
    let eval = match &report.result {
        Payload::Structure { graph, .. } => {
            let p = parse_graph_text(graph)
                .map_err(|e| CliError::usage(format!("report graph: {e}")))?;
            let m = compare_structure(&p, g).map_err(|e| CliError::mismatch(e.to_string()))?;
            Evaluation {
                structure_metrics: Some(m),
                set_metrics: None,
            }
        }
        Payload::Local {
            target,
            parents,
            children,
            undirected,
            ..
        } => {
            let t = index(target)?;
            let mut adj = set(parents)?;
            adj.extend(set(children)?);
            adj.extend(set(undirected)?);
            let want = true_local(g, t).expect("valid target").adjacent();
            Evaluation {
                structure_metrics: None,
                set_metrics: Some(compare_sets(&adj, &want)),
            }
        }
        Payload::Blanket {
            target,
            markov_blanket,
            ..
        } => {
            let t = index(target)?;
            let want = true_local(g, t).expect("valid target").markov_blanket();
            Evaluation {
                structure_metrics: None,
                set_metrics: Some(compare_sets(&set(markov_blanket)?, &want)),
            }
        }
    };
    let mut out = serde_json::to_string_pretty(&eval).expect("metrics serialise");
    out.push('\n');
    Ok(Outcome {
        code: 0,
        stdout: out,
        stderr: String::new(),
    })
}
