use std::collections::BTreeSet;

use super::pc::{find_spouses, run_routine, PcSearch, Routine, Sepsets};
use super::{check_target, refine, Blanket};
use crate::algorithm::Algorithm;
use crate::ci::{CiError, CiSession};
use crate::subsets::find_subset_up_to;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TopologyVariant {
    Mmmb,
    HitonMb,
    Pcmb,
    Ipcmb,
    Mbor,
    Stmb,
    Bamb,
    Eemb,
}

impl TopologyVariant {
    pub fn from_algorithm(a: Algorithm) -> Option<Self> {
        Some(match a {
            Algorithm::Mmmb => TopologyVariant::Mmmb,
            Algorithm::HitonMb => TopologyVariant::HitonMb,
            Algorithm::Pcmb => TopologyVariant::Pcmb,
            Algorithm::Ipcmb => TopologyVariant::Ipcmb,
            Algorithm::Mbor => TopologyVariant::Mbor,
            Algorithm::Stmb => TopologyVariant::Stmb,
            Algorithm::Bamb => TopologyVariant::Bamb,
            Algorithm::Eemb => TopologyVariant::Eemb,
            _ => return None,
        })
    }
}

/// `x` is a spouse candidate through `y` when adding `y` to the separating
/// set of `x` makes `x` dependent on the target.
fn activates(
    session: &mut CiSession,
    target: usize,
    x: usize,
    z: &[usize],
    y: usize,
) -> Result<bool, CiError> {
    if z.contains(&y) {
        return Ok(false);
    }
    let mut cond = z.to_vec();
    cond.push(y);
    Ok(!session.independent(target, x, &cond)?)
}

fn spouse_candidates(
    session: &mut CiSession,
    target: usize,
    pcs: &BTreeSet<usize>,
    sep: &Sepsets,
) -> Result<BTreeSet<usize>, CiError> {
    let mut out = BTreeSet::new();
    for (&x, z) in sep {
        if pcs.contains(&x) {
            continue;
        }
        for &y in pcs {
            if activates(session, target, x, z, y)? {
                out.insert(x);
                break;
            }
        }
    }
    Ok(out)
}

/// Parents-and-children superset from tests with at most one conditioning
/// variable, widened by the OR rule: `x` is also kept when the target
/// survives the same search run from `x`.
fn mbor(session: &mut CiSession, target: usize) -> Result<Blanket, CiError> {
    let mut low = session
        .fork()
        .with_max_cond(Some(session.max_cond().min(1)));
    let own = run_routine(&mut low, target, Routine::LevelWise)?;
    let mut pcs = own.pc.clone();
    for (&x, z) in &own.sepsets {
        if !z.is_empty()
            && run_routine(&mut low, x, Routine::LevelWise)?
                .pc
                .contains(&target)
        {
            pcs.insert(x);
        }
    }
    session.absorb(low);
    let sps = spouse_candidates(session, target, &pcs, &own.sepsets)?;
    refine(session, target, pcs.union(&sps).copied().collect())
}

/// Full level-wise separation sweep, then spouse candidates from every
/// separated variable at once.
fn stmb(session: &mut CiSession, target: usize) -> Result<Blanket, CiError> {
    let own = run_routine(session, target, Routine::LevelWise)?;
    let sps = spouse_candidates(session, target, &own.pc, &own.sepsets)?;
    refine(session, target, own.pc.union(&sps).copied().collect())
}

/// HITON-style admission that tracks spouse candidates as it goes: every
/// new member is tried as the common child of already separated variables,
/// and every newly separated variable is tried against the current members.
fn bamb(session: &mut CiSession, target: usize) -> Result<Blanket, CiError> {
    let cap = session.max_cond();
    let mut sep = Sepsets::new();
    let mut queue = Vec::new();
    for x in (0..session.n_vars()).filter(|&x| x != target) {
        let d = session.test(target, x, &[])?;
        if d.independent {
            sep.insert(x, Vec::new());
        } else {
            queue.push((x, d.association()));
        }
    }
    queue.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(std::cmp::Ordering::Equal));
    let mut cpc: Vec<usize> = Vec::new();
    let mut sps = BTreeSet::new();
    for (x, _) in queue {
        cpc.push(x);
        for (&y, z) in &sep {
            if !sps.contains(&y) && activates(session, target, y, z, x)? {
                sps.insert(y);
            }
        }
        for y in cpc.clone() {
            let pool: Vec<usize> = cpc.iter().copied().filter(|&v| v != y).collect();
            let found = find_subset_up_to(&pool, cap, |s| {
                if y != x && !s.contains(&x) {
                    return Ok(false);
                }
                session.independent(target, y, s)
            })?;
            if let Some(z) = found {
                cpc.retain(|&v| v != y);
                for &c in &cpc {
                    if activates(session, target, y, &z, c)? {
                        sps.insert(y);
                        break;
                    }
                }
                sep.insert(y, z);
            }
        }
    }
    let mbs: BTreeSet<usize> = cpc.into_iter().chain(sps).collect();
    refine(session, target, mbs)
}

/// A parents-and-children pass, then a spouse pass per member; candidates
/// of a member that are independent of the target given that member's
/// whole candidate scope are dropped again.
fn eemb(session: &mut CiSession, target: usize) -> Result<Blanket, CiError> {
    let own = run_routine(session, target, Routine::Hiton)?;
    let mut mbs = own.pc.clone();
    for &y in &own.pc {
        let mut cands = BTreeSet::new();
        for (&x, z) in &own.sepsets {
            if activates(session, target, x, z, y)? {
                cands.insert(x);
            }
        }
        let scope: BTreeSet<usize> = own.pc.union(&cands).copied().collect();
        for &x in &cands {
            let rest: Vec<usize> = scope.iter().copied().filter(|&v| v != x).collect();
            if !session.independent(target, x, &rest)? {
                mbs.insert(x);
            }
        }
    }
    refine(session, target, mbs)
}

fn symmetric_with_spouses(
    session: &mut CiSession,
    target: usize,
    routine: Routine,
) -> Result<Blanket, CiError> {
    let mut search = PcSearch::new(session, routine);
    let pc = search.symmetric(target)?;
    let spouses = find_spouses(&mut search, target, &pc)?;
    Ok(Blanket {
        mb: pc.union(&spouses).copied().collect(),
        pc: Some(pc),
    })
}

/// Topology family. MMMB, HITON-MB, PCMB and IPCMB use symmetry-corrected
/// parents-and-children searches (max–min, HITON, interleaved max–min and
/// level-wise respectively) followed by [`find_spouses`]. MBOR, STMB, BAMB
/// and EEMB each build a blanket superset in their own way and finish with
/// the same refinement step.
pub fn topology_mb(
    session: &mut CiSession,
    target: usize,
    variant: TopologyVariant,
) -> Result<Blanket, CiError> {
    check_target(session, target)?;
    match variant {
        TopologyVariant::Mmmb => symmetric_with_spouses(session, target, Routine::MaxMin),
        TopologyVariant::HitonMb => symmetric_with_spouses(session, target, Routine::Hiton),
        TopologyVariant::Pcmb => {
            symmetric_with_spouses(session, target, Routine::MaxMinInterleaved)
        }
        TopologyVariant::Ipcmb => symmetric_with_spouses(session, target, Routine::LevelWise),
        TopologyVariant::Mbor => mbor(session, target),
        TopologyVariant::Stmb => stmb(session, target),
        TopologyVariant::Bamb => bamb(session, target),
        TopologyVariant::Eemb => eemb(session, target),
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::graph::Dag;

    const ALL: [TopologyVariant; 8] = [
        TopologyVariant::Mmmb,
        TopologyVariant::HitonMb,
        TopologyVariant::Pcmb,
        TopologyVariant::Ipcmb,
        TopologyVariant::Mbor,
        TopologyVariant::Stmb,
        TopologyVariant::Bamb,
        TopologyVariant::Eemb,
    ];

    #[test]
    fn collider_target_has_no_spouses() {
        let g =
            Arc::new(Dag::from_named_edges(&["A", "T", "B"], &[("A", "T"), ("B", "T")]).unwrap());
        for v in ALL {
            let mut s = CiSession::oracle(Arc::clone(&g));
            let b = topology_mb(&mut s, 1, v).unwrap();
            assert_eq!(b.mb, [0, 2].into(), "{v:?}");
            assert_eq!(b.pc, Some([0, 2].into()), "{v:?}");
        }
    }

    #[test]
    fn grandchild_is_not_a_member() {
        let g = Arc::new(
            Dag::from_named_edges(
                &["T", "B", "C", "D"],
                &[("T", "B"), ("C", "B"), ("B", "D"), ("C", "D")],
            )
            .unwrap(),
        );
        for v in ALL {
            let mut s = CiSession::oracle(Arc::clone(&g));
            let b = topology_mb(&mut s, 0, v).unwrap();
            assert_eq!(b.mb, [1, 2].into(), "{v:?}");
            assert_eq!(b.pc, Some([1].into()), "{v:?}");
        }
    }
}
