//! Local causal structure around one target.
//!
//! All four learners share one expansion engine. Starting from the target,
//! nodes are visited breadth-first; each visit learns the node's parents
//! and children together with separating sets for the variables it rules
//! out. After every visit the known edges are assembled into a partially
//! directed graph over the visited nodes and their neighbours, colliders
//! are oriented and the Meek rules propagate. Expansion stops once every
//! edge at the target is directed or nothing is left to visit.
//!
//! The learners differ in how a visit finds a neighbourhood:
//!
//! | learner    | neighbourhood                                   |
//! |------------|-------------------------------------------------|
//! | PCD-by-PCD | symmetric max-min parents-and-children search   |
//! | MB-by-MB   | IAMB blanket, then split inside the blanket     |
//! | CMB        | symmetric HITON search plus spouses (blanket)   |
//! | LCS-FS     | FBED blanket, then split inside the blanket     |
//!
//! Two nodes count as known to be nonadjacent only once a visited endpoint
//! has ruled the other out, so the orientation rules never fire on pairs
//! nobody has looked at.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::algorithm::{Algorithm, Family};
use crate::ci::CiSession;
use crate::error::{Error, Result};
use crate::global::orient::collider_pass;
use crate::graph::{apply_meek_rules_with, LocalStructure, Pdag};
use crate::mb::Routine;
use crate::mb::{blanket, check_target, find_spouses, split_blanket, MbOptions, PcSearch, Sepsets};

pub use crate::mb::{learn_pc_set, PcSet, PcVariant};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct LocalOptions {
    /// Stop after this many visits; `None` allows every node.
    pub max_visited: Option<usize>,
    pub mb: MbOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalResult {
    pub structure: LocalStructure,
    pub algorithm: Algorithm,
    /// Nodes in the order they were visited, target first.
    pub visited: Vec<usize>,
    pub n_ci_tests: u64,
    pub elapsed: f64,
}

struct Neighbourhood {
    pc: BTreeSet<usize>,
    sepsets: Sepsets,
    blanket: Option<BTreeSet<usize>>,
}

impl Neighbourhood {
    fn sepset(&self, x: usize) -> Option<Vec<usize>> {
        if self.pc.contains(&x) {
            return None;
        }
        if let Some(z) = self.sepsets.get(&x) {
            return Some(z.clone());
        }
        // a blanket separates its owner from everything outside it
        self.blanket
            .as_ref()
            .filter(|b| !b.contains(&x))
            .map(|b| b.iter().copied().collect())
    }
}

enum Discovery<'s> {
    /// Memoised symmetric search; `spouses` also records the blanket.
    Pcd { search: PcSearch<'s>, spouses: bool },
    Blanket {
        session: &'s mut CiSession,
        algorithm: Algorithm,
        opts: MbOptions,
    },
}

impl Discovery<'_> {
    fn session(&mut self) -> &mut CiSession {
        match self {
            Discovery::Pcd { search, .. } => search.session(),
            Discovery::Blanket { session, .. } => session,
        }
    }

    fn visit(&mut self, v: usize) -> Result<Neighbourhood> {
        match self {
            Discovery::Pcd { search, spouses } => {
                let set = search.symmetric_set(v)?;
                let blanket = if *spouses {
                    let mut mb = find_spouses(search, v, &set.pc)?;
                    mb.extend(&set.pc);
                    Some(mb)
                } else {
                    None
                };
                Ok(Neighbourhood {
                    pc: set.pc,
                    sepsets: set.sepsets,
                    blanket,
                })
            }
            Discovery::Blanket {
                session,
                algorithm,
                opts,
            } => {
                let mb = blanket(session, v, *algorithm, *opts)?.mb;
                let (pc, sepsets) = split_blanket(session, v, &mb)?;
                Ok(Neighbourhood {
                    pc,
                    sepsets,
                    blanket: Some(mb),
                })
            }
        }
    }
}

struct Expansion {
    known: BTreeMap<usize, Neighbourhood>,
}

impl Expansion {
    /// An edge stands when every visited endpoint lists the other.
    fn has_edge(&self, a: usize, b: usize) -> bool {
        let lists = |u: usize, w: usize| self.known.get(&u).is_none_or(|k| k.pc.contains(&w));
        lists(a, b) && lists(b, a) && (self.known.contains_key(&a) || self.known.contains_key(&b))
    }

    fn sepset(&self, a: usize, b: usize) -> Option<Vec<usize>> {
        let from = |u: usize, w: usize| self.known.get(&u).and_then(|k| k.sepset(w));
        from(a, b).or_else(|| from(b, a))
    }

    /// Orients the known edges and reads off the target's neighbourhood.
    fn classify(&self, target: usize) -> LocalStructure {
        let mut nodes: BTreeSet<usize> = BTreeSet::new();
        for (&v, k) in &self.known {
            nodes.insert(v);
            nodes.extend(&k.pc);
        }
        let nodes: Vec<usize> = nodes.into_iter().collect();
        let local_names = nodes.iter().map(|v| v.to_string()).collect();
        let mut p = Pdag::empty(local_names);
        for (i, &a) in nodes.iter().enumerate() {
            for (j, &b) in nodes.iter().enumerate().skip(i + 1) {
                if self.has_edge(a, b) {
                    p.add_undirected(i, j);
                }
            }
        }
        let decided = collider_pass::<std::convert::Infallible>(&p, |x, z, y| {
            Ok(self
                .sepset(nodes[x], nodes[y])
                .map(|s| !s.contains(&nodes[z])))
        });
        let p = match decided {
            Ok(p) => p,
            Err(e) => match e {},
        };
        let p = apply_meek_rules_with(&p, |a, b| self.sepset(nodes[a], nodes[b]).is_some());

        let mut out = LocalStructure::new(target);
        let Ok(t) = nodes.binary_search(&target) else {
            return out;
        };
        out.parents = p.parents(t).into_iter().map(|i| nodes[i]).collect();
        out.children = p.children(t).into_iter().map(|i| nodes[i]).collect();
        out.undirected_neighbors = p.neighbors(t).into_iter().map(|i| nodes[i]).collect();
        if let Some(mb) = self.known.get(&target).and_then(|k| k.blanket.as_ref()) {
            let adjacent = out.adjacent();
            out.spouses = mb
                .iter()
                .copied()
                .filter(|v| !adjacent.contains(v))
                .collect();
        }
        out
    }
}

/// Runs one of the four local learners on `target`.
pub fn learn_local(
    session: &mut CiSession,
    target: usize,
    algorithm: Algorithm,
    opts: LocalOptions,
) -> Result<LocalResult> {
    if algorithm.family() != Family::Local {
        return Err(Error::InvalidParameter(format!(
            "{algorithm} is not a local structure learner"
        )));
    }
    check_target(session, target)?;
    let start = Instant::now();
    let before = session.counter().total_tests;
    let mut discovery = match algorithm {
        Algorithm::PcdByPcd => Discovery::Pcd {
            search: PcSearch::new(session, Routine::MaxMin),
            spouses: false,
        },
        Algorithm::MbByMb => Discovery::Blanket {
            session,
            algorithm: Algorithm::Iamb,
            opts: opts.mb,
        },
        Algorithm::Cmb => Discovery::Pcd {
            search: PcSearch::new(session, Routine::Hiton),
            spouses: true,
        },
        _ => Discovery::Blanket {
            session,
            algorithm: Algorithm::Fbed,
            opts: opts.mb,
        },
    };
    let limit = opts.max_visited.unwrap_or(usize::MAX).max(1);
    let mut ex = Expansion {
        known: BTreeMap::new(),
    };
    let mut visited = Vec::new();
    let mut queue = VecDeque::from([target]);
    let mut queued: BTreeSet<usize> = BTreeSet::from([target]);
    let mut structure = LocalStructure::new(target);
    while let Some(v) = queue.pop_front() {
        let hood = discovery.visit(v)?;
        for &x in &hood.pc {
            if queued.insert(x) {
                queue.push_back(x);
            }
        }
        ex.known.insert(v, hood);
        visited.push(v);
        structure = ex.classify(target);
        if structure.undirected_neighbors.is_empty() || visited.len() >= limit {
            break;
        }
    }
    let n_ci_tests = discovery.session().counter().total_tests - before;
    Ok(LocalResult {
        structure,
        algorithm,
        visited,
        n_ci_tests,
        elapsed: start.elapsed().as_secs_f64(),
    })
}
