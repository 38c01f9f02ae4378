//! Markov blanket learners.
//!
//! Two families share the [`CiSession`] plumbing:
//!
//! * grow–shrink learners ([`grow_shrink_mb`]): GS, IAMB, interIAMB,
//!   IAMBnPC, interIAMBnPC, Fast-IAMB and FBED admit variables that are
//!   dependent on the target given the current estimate and then drop those
//!   that turn out independent;
//! * topology learners ([`topology_mb`]): MMMB, HITON-MB, PCMB, IPCMB,
//!   MBOR, STMB, BAMB and EEMB find parents and children first and then
//!   spouses.
//!
//! Candidate orderings break association ties by ascending node index.

mod grow_shrink;
mod pc;
mod topology;

use std::collections::BTreeSet;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::algorithm::{Algorithm, Family};
use crate::ci::{CiError, CiSession};
use crate::error::{Error, Result};

pub use grow_shrink::{grow_shrink_mb, GsVariant};
pub use pc::{find_spouses, learn_pc_set, PcSearch, PcSet, PcVariant, Sepsets};
pub(crate) use pc::{level_wise_over, Routine};
pub use topology::{topology_mb, TopologyVariant};

/// Default number of extra FBED forward runs.
pub const DEFAULT_FBED_K: usize = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MbOptions {
    /// Number of FBED forward runs after the first.
    pub fbed_k: usize,
}

impl Default for MbOptions {
    fn default() -> Self {
        MbOptions {
            fbed_k: DEFAULT_FBED_K,
        }
    }
}

/// A learned Markov blanket.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MbResult {
    pub target: usize,
    pub mb: BTreeSet<usize>,
    /// Parents and children, when the algorithm separates them out.
    pub pc: BTreeSet<usize>,
    pub algorithm: Algorithm,
    pub n_ci_tests: u64,
    pub elapsed: f64,
}

/// Blanket estimate plus the parents-and-children subset when known.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Blanket {
    pub mb: BTreeSet<usize>,
    pub pc: Option<BTreeSet<usize>>,
}

pub(crate) fn check_target(session: &CiSession, target: usize) -> std::result::Result<(), CiError> {
    if target >= session.n_vars() {
        Err(CiError::UnknownVariable(target))
    } else {
        Ok(())
    }
}

/// Runs any of the 15 learners, timing it and recording the tests it
/// issues on `session`.
pub fn learn_mb(
    session: &mut CiSession,
    target: usize,
    algorithm: Algorithm,
    opts: MbOptions,
) -> Result<MbResult> {
    let start = Instant::now();
    let before = session.counter().total_tests;
    let blanket = blanket(session, target, algorithm, opts)?;
    Ok(MbResult {
        target,
        mb: blanket.mb,
        pc: blanket.pc.unwrap_or_default(),
        algorithm,
        n_ci_tests: session.counter().total_tests - before,
        elapsed: start.elapsed().as_secs_f64(),
    })
}

pub(crate) fn blanket(
    session: &mut CiSession,
    target: usize,
    algorithm: Algorithm,
    opts: MbOptions,
) -> Result<Blanket> {
    if algorithm.family() != Family::Mb {
        return Err(Error::InvalidParameter(format!(
            "{algorithm} is not a Markov blanket learner"
        )));
    }
    check_target(session, target)?;
    if let Some(v) = GsVariant::from_algorithm(algorithm) {
        return Ok(grow_shrink_mb(session, target, v, opts)?);
    }
    let v = TopologyVariant::from_algorithm(algorithm).expect("every MB learner has a family");
    Ok(topology_mb(session, target, v)?)
}

/// Removes, in index order, members of `mb` outside `keep` that are
/// independent of the target given the rest. Returns whether anything was
/// removed.
pub(crate) fn shrink(
    session: &mut CiSession,
    target: usize,
    mb: &mut BTreeSet<usize>,
    keep: &BTreeSet<usize>,
) -> std::result::Result<bool, CiError> {
    let mut removed = false;
    let members: Vec<usize> = mb.iter().copied().collect();
    for x in members {
        if keep.contains(&x) {
            continue;
        }
        let rest: Vec<usize> = mb.iter().copied().filter(|&v| v != x).collect();
        if session.independent(target, x, &rest)? {
            mb.remove(&x);
            removed = true;
        }
    }
    Ok(removed)
}

/// Turns a blanket superset into the blanket by dropping members
/// independent of the target given the rest, then splits out the parents
/// and children with [`split_blanket`].
pub(crate) fn refine(
    session: &mut CiSession,
    target: usize,
    mut mb: BTreeSet<usize>,
) -> std::result::Result<Blanket, CiError> {
    shrink(session, target, &mut mb, &BTreeSet::new())?;
    let (pc, _) = split_blanket(session, target, &mb)?;
    Ok(Blanket { mb, pc: Some(pc) })
}

/// Splits a blanket into parents and children plus a separating set for
/// every other member.
///
/// A level-wise pass restricted to the blanket gives a superset of the parents
/// and children; each survivor `x` is kept only if the same pass run from
/// `x` over its own IAMB blanket keeps the target. A non-adjacent member is
/// separated by the target's parents when it is not a descendant of the
/// target, and otherwise by its own parents, so one of the two passes
/// drops it.
pub(crate) fn split_blanket(
    session: &mut CiSession,
    target: usize,
    mb: &BTreeSet<usize>,
) -> std::result::Result<(BTreeSet<usize>, Sepsets), CiError> {
    let members: Vec<usize> = mb.iter().copied().collect();
    let own = level_wise_over(session, target, &members)?;
    let mut sepsets = own.sepsets;
    let mut pc = BTreeSet::new();
    for x in own.pc {
        let theirs = grow_shrink_mb(session, x, GsVariant::Iamb, MbOptions::default())?.mb;
        if !theirs.contains(&target) {
            sepsets.insert(x, theirs.into_iter().collect());
            continue;
        }
        let scope: Vec<usize> = theirs.into_iter().collect();
        match level_wise_over(session, x, &scope)?.sepsets.remove(&target) {
            Some(z) => {
                sepsets.insert(x, z);
            }
            None => {
                pc.insert(x);
            }
        }
    }
    Ok((pc, sepsets))
}
