use std::collections::{BTreeSet, HashSet};

use super::{check_target, refine, shrink, Blanket, MbOptions};
use crate::algorithm::Algorithm;
use crate::ci::{CiDecision, CiError, CiSession};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GsVariant {
    Gs,
    Iamb,
    InterIamb,
    IambNPc,
    InterIambNPc,
    FastIamb,
    Fbed,
}

impl GsVariant {
    pub fn from_algorithm(a: Algorithm) -> Option<Self> {
        Some(match a {
            Algorithm::Gs => GsVariant::Gs,
            Algorithm::Iamb => GsVariant::Iamb,
            Algorithm::InterIamb => GsVariant::InterIamb,
            Algorithm::IambNPc => GsVariant::IambNPc,
            Algorithm::InterIambNPc => GsVariant::InterIambNPc,
            Algorithm::FastIamb => GsVariant::FastIamb,
            Algorithm::Fbed => GsVariant::Fbed,
            _ => return None,
        })
    }
}

fn as_vec(s: &BTreeSet<usize>) -> Vec<usize> {
    s.iter().copied().collect()
}

fn outside(n: usize, target: usize, mb: &BTreeSet<usize>) -> Vec<usize> {
    (0..n)
        .filter(|&x| x != target && !mb.contains(&x))
        .collect()
}

/// Tests every candidate given `cond` and returns them with their decisions.
fn score_candidates(
    session: &mut CiSession,
    target: usize,
    candidates: &[usize],
    cond: &[usize],
) -> Result<Vec<(usize, CiDecision)>, CiError> {
    candidates
        .iter()
        .map(|&x| Ok((x, session.test(target, x, cond)?)))
        .collect()
}

/// Strongest dependent candidate; ties go to the lower index.
fn strongest(scored: &[(usize, CiDecision)]) -> Option<usize> {
    let mut best: Option<(usize, CiDecision)> = None;
    for &(x, d) in scored {
        if d.independent {
            continue;
        }
        if best.is_none_or(|(_, b)| d.association() > b.association()) {
            best = Some((x, d));
        }
    }
    best.map(|b| b.0)
}

/// IAMB growth: admit the strongest dependent candidate until none is left.
fn iamb_grow(
    session: &mut CiSession,
    target: usize,
    mb: &mut BTreeSet<usize>,
) -> Result<(), CiError> {
    loop {
        let cond = as_vec(mb);
        let scored = score_candidates(
            session,
            target,
            &outside(session.n_vars(), target, mb),
            &cond,
        )?;
        match strongest(&scored) {
            Some(x) => {
                mb.insert(x);
            }
            None => return Ok(()),
        }
    }
}

fn backward(
    session: &mut CiSession,
    target: usize,
    mb: &mut BTreeSet<usize>,
    with_pc: bool,
) -> Result<Option<BTreeSet<usize>>, CiError> {
    if with_pc {
        Ok(refine(session, target, std::mem::take(mb)).map(|b| {
            *mb = b.mb;
            b.pc
        })?)
    } else {
        shrink(session, target, mb, &BTreeSet::new())?;
        Ok(None)
    }
}

/// Interleaved admission and removal. A repeated estimate means the
/// interleaving cycles; the search then finishes as plain IAMB.
fn interleaved(session: &mut CiSession, target: usize, with_pc: bool) -> Result<Blanket, CiError> {
    let mut mb = BTreeSet::new();
    let mut seen = HashSet::new();
    loop {
        let cond = as_vec(&mb);
        let scored = score_candidates(
            session,
            target,
            &outside(session.n_vars(), target, &mb),
            &cond,
        )?;
        let Some(x) = strongest(&scored) else { break };
        mb.insert(x);
        shrink(session, target, &mut mb, &BTreeSet::new())?;
        if !seen.insert(mb.clone()) {
            iamb_grow(session, target, &mut mb)?;
            shrink(session, target, &mut mb, &BTreeSet::new())?;
            break;
        }
    }
    let pc = if with_pc {
        backward(session, target, &mut mb, true)?
    } else {
        None
    };
    Ok(Blanket { mb, pc })
}

fn fast_iamb(session: &mut CiSession, target: usize) -> Result<BTreeSet<usize>, CiError> {
    let mut mb = BTreeSet::new();
    let mut seen = HashSet::new();
    loop {
        let cond = as_vec(&mb);
        let mut scored = score_candidates(
            session,
            target,
            &outside(session.n_vars(), target, &mb),
            &cond,
        )?;
        scored.retain(|(_, d)| !d.independent);
        if scored.is_empty() {
            break;
        }
        // stable sort keeps index order among equal associations
        scored.sort_by(|a, b| {
            b.1.association()
                .partial_cmp(&a.1.association())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let mut grown = mb.clone();
        for (i, &(x, _)) in scored.iter().enumerate() {
            if i > 0 && !session.reliable(target, x, &as_vec(&grown)) {
                break;
            }
            grown.insert(x);
        }
        mb = grown;
        shrink(session, target, &mut mb, &BTreeSet::new())?;
        if !seen.insert(mb.clone()) {
            iamb_grow(session, target, &mut mb)?;
            shrink(session, target, &mut mb, &BTreeSet::new())?;
            break;
        }
    }
    Ok(mb)
}

/// Forward runs with early dropping, then one backward pass.
fn fbed(
    session: &mut CiSession,
    target: usize,
    extra_runs: usize,
) -> Result<BTreeSet<usize>, CiError> {
    let mut mb = BTreeSet::new();
    for _ in 0..=extra_runs {
        let mut pool = outside(session.n_vars(), target, &mb);
        let mut added = false;
        loop {
            let cond = as_vec(&mb);
            let scored = score_candidates(session, target, &pool, &cond)?;
            pool = scored
                .iter()
                .filter(|(_, d)| !d.independent)
                .map(|&(x, _)| x)
                .collect();
            let Some(x) = strongest(&scored) else { break };
            mb.insert(x);
            pool.retain(|&v| v != x);
            added = true;
        }
        if !added {
            break;
        }
    }
    shrink(session, target, &mut mb, &BTreeSet::new())?;
    Ok(mb)
}

fn gs(session: &mut CiSession, target: usize) -> Result<BTreeSet<usize>, CiError> {
    let mut mb = BTreeSet::new();
    loop {
        let mut changed = false;
        for x in outside(session.n_vars(), target, &mb) {
            if !session.independent(target, x, &as_vec(&mb))? {
                mb.insert(x);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    shrink(session, target, &mut mb, &BTreeSet::new())?;
    Ok(mb)
}

/// Grow–shrink family.
///
/// IAMBnPC and interIAMBnPC follow the shrink step with a subset search
/// over the estimate (up to the conditioning cap) that separates parents
/// and children from spouses, and report the parents-and-children set.
pub fn grow_shrink_mb(
    session: &mut CiSession,
    target: usize,
    variant: GsVariant,
    opts: MbOptions,
) -> Result<Blanket, CiError> {
    check_target(session, target)?;
    let plain = |mb| Blanket { mb, pc: None };
    Ok(match variant {
        GsVariant::Gs => plain(gs(session, target)?),
        GsVariant::Iamb | GsVariant::IambNPc => {
            let mut mb = BTreeSet::new();
            iamb_grow(session, target, &mut mb)?;
            let pc = backward(session, target, &mut mb, variant == GsVariant::IambNPc)?;
            Blanket { mb, pc }
        }
        GsVariant::InterIamb => interleaved(session, target, false)?,
        GsVariant::InterIambNPc => interleaved(session, target, true)?,
        GsVariant::FastIamb => plain(fast_iamb(session, target)?),
        GsVariant::Fbed => plain(fbed(session, target, opts.fbed_k)?),
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::graph::Dag;

    const ALL: [GsVariant; 7] = [
        GsVariant::Gs,
        GsVariant::Iamb,
        GsVariant::InterIamb,
        GsVariant::IambNPc,
        GsVariant::InterIambNPc,
        GsVariant::FastIamb,
        GsVariant::Fbed,
    ];

    #[test]
    fn isolated_target() {
        let g = Arc::new(Dag::empty(vec!["A".into(), "B".into(), "C".into()]).unwrap());
        for v in ALL {
            let mut s = CiSession::oracle(Arc::clone(&g));
            assert!(grow_shrink_mb(&mut s, 0, v, MbOptions::default())
                .unwrap()
                .mb
                .is_empty());
        }
    }

    #[test]
    fn npc_variants_report_pc() {
        let g = Arc::new(
            Dag::from_named_edges(&["A", "T", "B", "C"], &[("A", "T"), ("T", "B"), ("C", "B")])
                .unwrap(),
        );
        for v in [GsVariant::IambNPc, GsVariant::InterIambNPc] {
            let mut s = CiSession::oracle(Arc::clone(&g));
            let b = grow_shrink_mb(&mut s, 1, v, MbOptions::default()).unwrap();
            assert_eq!(b.pc, Some([0, 2].into()));
            assert_eq!(b.mb, [0, 2, 3].into());
        }
    }

    #[test]
    fn fbed_needs_a_second_run_for_spouses() {
        // the spouse C is marginally independent of T, so the first run drops it
        let g =
            Arc::new(Dag::from_named_edges(&["T", "B", "C"], &[("T", "B"), ("C", "B")]).unwrap());
        let mut s = CiSession::oracle(Arc::clone(&g));
        assert_eq!(
            grow_shrink_mb(&mut s, 0, GsVariant::Fbed, MbOptions { fbed_k: 0 })
                .unwrap()
                .mb,
            [1].into()
        );
        let mut s = CiSession::oracle(g);
        assert_eq!(
            grow_shrink_mb(&mut s, 0, GsVariant::Fbed, MbOptions { fbed_k: 1 })
                .unwrap()
                .mb,
            [1, 2].into()
        );
    }
}
