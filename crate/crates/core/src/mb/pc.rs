use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::check_target;
use crate::ci::{Association, CiError, CiSession};
use crate::subsets::{find_subset, find_subset_up_to};

/// Separating sets found for one target, keyed by the separated variable.
pub type Sepsets = BTreeMap<usize, Vec<usize>>;

/// Parents-and-children estimate for one target.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PcSet {
    pub target: usize,
    pub pc: BTreeSet<usize>,
    pub sepsets: Sepsets,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PcVariant {
    /// Max–min heuristic with a backward removal phase.
    Mmpc,
    /// Interleaved admission and elimination.
    HitonPc,
    /// HITON-PC with the symmetry filter.
    GetPc,
}

/// The one-sided parents-and-children searches behind the topology learners.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) enum Routine {
    /// MMPC: max–min forward phase, then backward removal.
    MaxMin,
    /// HITON-PC.
    Hiton,
    /// Max–min forward phase with elimination after every admission.
    MaxMinInterleaved,
    /// Level-wise removal over the whole candidate set, by increasing
    /// conditioning size.
    LevelWise,
}

fn record(sep: &mut Sepsets, x: usize, z: &[usize]) {
    sep.insert(x, z.to_vec());
}

/// Subsets of `pool` that contain `must`, up to `cap` elements, searched by
/// increasing size.
fn find_subset_with<E>(
    pool: &[usize],
    must: usize,
    cap: usize,
    mut visit: impl FnMut(&[usize]) -> Result<bool, E>,
) -> Result<Option<Vec<usize>>, E> {
    if cap == 0 {
        return Ok(None);
    }
    let rest: Vec<usize> = pool.iter().copied().filter(|&v| v != must).collect();
    let mut buf = Vec::new();
    find_subset_up_to(&rest, cap - 1, |s| {
        buf.clear();
        buf.extend_from_slice(s);
        buf.push(must);
        visit(&buf)
    })
    .map(|found| {
        found.map(|mut s| {
            s.push(must);
            s
        })
    })
}

/// Drops members of `cpc` separated from the target by a subset of the rest.
/// With `fresh = Some(m)`, only subsets containing the new member `m` are
/// tried for the older members.
fn eliminate(
    session: &mut CiSession,
    target: usize,
    cpc: &mut Vec<usize>,
    sep: &mut Sepsets,
    fresh: Option<usize>,
) -> Result<(), CiError> {
    let cap = session.max_cond();
    for y in cpc.clone() {
        if !cpc.contains(&y) {
            continue;
        }
        let pool: Vec<usize> = cpc.iter().copied().filter(|&v| v != y).collect();
        let found = match fresh {
            Some(m) if m != y => {
                find_subset_with(&pool, m, cap, |s| session.independent(target, y, s))?
            }
            _ => find_subset_up_to(&pool, cap, |s| session.independent(target, y, s))?,
        };
        if let Some(z) = found {
            cpc.retain(|&v| v != y);
            record(sep, y, &z);
        }
    }
    Ok(())
}

fn max_min(session: &mut CiSession, target: usize, interleave: bool) -> Result<PcSet, CiError> {
    let cap = session.max_cond();
    let mut sep = Sepsets::new();
    let mut cpc: Vec<usize> = Vec::new();
    let mut open: Vec<(usize, Association)> = Vec::new();
    for x in (0..session.n_vars()).filter(|&x| x != target) {
        let d = session.test(target, x, &[])?;
        if d.independent {
            record(&mut sep, x, &[]);
        } else {
            open.push((x, d.association()));
        }
    }
    while let Some(pos) = best(&open) {
        let (m, _) = open.remove(pos);
        cpc.push(m);
        if interleave {
            eliminate(session, target, &mut cpc, &mut sep, Some(m))?;
        }
        // update the running minimum over subsets that contain m
        let mut kept = Vec::with_capacity(open.len());
        for (x, mut assoc) in open {
            if !cpc.contains(&m) {
                kept.push((x, assoc));
                continue;
            }
            let mut separated = None;
            find_subset_with(&cpc, m, cap, |s| {
                let d = session.test(target, x, s)?;
                if d.independent {
                    separated = Some(s.to_vec());
                    return Ok::<bool, CiError>(true);
                }
                if d.association() < assoc {
                    assoc = d.association();
                }
                Ok(false)
            })?;
            match separated {
                Some(z) => record(&mut sep, x, &z),
                None => kept.push((x, assoc)),
            }
        }
        open = kept;
    }
    if !interleave {
        for y in cpc.clone() {
            let pool: Vec<usize> = cpc.iter().copied().filter(|&v| v != y).collect();
            if let Some(z) = find_subset_up_to(&pool, cap, |s| session.independent(target, y, s))? {
                cpc.retain(|&v| v != y);
                record(&mut sep, y, &z);
            }
        }
    }
    Ok(PcSet {
        target,
        pc: cpc.into_iter().collect(),
        sepsets: sep,
    })
}

/// Position of the strongest entry; ties go to the lower node index.
fn best(open: &[(usize, Association)]) -> Option<usize> {
    let mut out: Option<usize> = None;
    for (i, &(x, a)) in open.iter().enumerate() {
        match out {
            None => out = Some(i),
            Some(j) => {
                let (y, b) = open[j];
                if a > b || (a == b && x < y) {
                    out = Some(i);
                }
            }
        }
    }
    out
}

fn hiton(session: &mut CiSession, target: usize) -> Result<PcSet, CiError> {
    let all: Vec<usize> = (0..session.n_vars()).filter(|&x| x != target).collect();
    hiton_over(session, target, &all)
}

/// HITON admission and elimination restricted to `candidates`.
fn hiton_over(
    session: &mut CiSession,
    target: usize,
    candidates: &[usize],
) -> Result<PcSet, CiError> {
    let mut sep = Sepsets::new();
    let mut queue = Vec::new();
    for &x in candidates {
        let d = session.test(target, x, &[])?;
        if d.independent {
            record(&mut sep, x, &[]);
        } else {
            queue.push((x, d.association()));
        }
    }
    queue.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(std::cmp::Ordering::Equal));
    let mut cpc = Vec::new();
    for (x, _) in queue {
        cpc.push(x);
        eliminate(session, target, &mut cpc, &mut sep, Some(x))?;
    }
    Ok(PcSet {
        target,
        pc: cpc.into_iter().collect(),
        sepsets: sep,
    })
}

fn level_wise(session: &mut CiSession, target: usize) -> Result<PcSet, CiError> {
    let all: Vec<usize> = (0..session.n_vars()).filter(|&x| x != target).collect();
    level_wise_over(session, target, &all)
}

/// Level-wise removal restricted to `candidates`: every candidate is tried
/// against subsets of size 0, then 1, and so on, of the surviving rest.
pub(crate) fn level_wise_over(
    session: &mut CiSession,
    target: usize,
    candidates: &[usize],
) -> Result<PcSet, CiError> {
    let cap = session.max_cond();
    let mut sep = Sepsets::new();
    let mut can: Vec<usize> = candidates.to_vec();
    let mut k = 0;
    while k <= cap && k < can.len() {
        for x in can.clone() {
            if !can.contains(&x) {
                continue;
            }
            let pool: Vec<usize> = can.iter().copied().filter(|&v| v != x).collect();
            if let Some(z) = find_subset(&pool, k, |s| session.independent(target, x, s))? {
                can.retain(|&v| v != x);
                record(&mut sep, x, &z);
            }
        }
        k += 1;
    }
    Ok(PcSet {
        target,
        pc: can.into_iter().collect(),
        sepsets: sep,
    })
}

pub(crate) fn run_routine(
    session: &mut CiSession,
    target: usize,
    routine: Routine,
) -> Result<PcSet, CiError> {
    match routine {
        Routine::MaxMin => max_min(session, target, false),
        Routine::MaxMinInterleaved => max_min(session, target, true),
        Routine::Hiton => hiton(session, target),
        Routine::LevelWise => level_wise(session, target),
    }
}

/// Memoised one-sided searches over many targets, with the symmetry
/// correction (`x ∈ PC(t)` only if also `t ∈ PC(x)`).
pub struct PcSearch<'s> {
    session: &'s mut CiSession,
    routine: Routine,
    raw: HashMap<usize, PcSet>,
}

impl<'s> PcSearch<'s> {
    pub(crate) fn new(session: &'s mut CiSession, routine: Routine) -> Self {
        PcSearch {
            session,
            routine,
            raw: HashMap::new(),
        }
    }

    pub fn session(&mut self) -> &mut CiSession {
        &mut *self.session
    }

    /// One-sided estimate for `v`.
    pub fn raw(&mut self, v: usize) -> Result<&PcSet, CiError> {
        if !self.raw.contains_key(&v) {
            let r = run_routine(self.session, v, self.routine)?;
            self.raw.insert(v, r);
        }
        Ok(&self.raw[&v])
    }

    pub fn symmetric(&mut self, v: usize) -> Result<BTreeSet<usize>, CiError> {
        let one_sided = self.raw(v)?.pc.clone();
        let mut out = BTreeSet::new();
        for x in one_sided {
            if self.raw(x)?.pc.contains(&v) {
                out.insert(x);
            }
        }
        Ok(out)
    }

    /// A recorded separating set for `a` and `b`, from either side.
    pub fn sepset(&mut self, a: usize, b: usize) -> Result<Option<Vec<usize>>, CiError> {
        if let Some(z) = self.raw(a)?.sepsets.get(&b) {
            return Ok(Some(z.clone()));
        }
        Ok(self.raw(b)?.sepsets.get(&a).cloned())
    }

    /// Symmetric estimate together with separating sets for every variable
    /// left out.
    pub fn symmetric_set(&mut self, v: usize) -> Result<PcSet, CiError> {
        let pc = self.symmetric(v)?;
        let mut sepsets = self.raw(v)?.sepsets.clone();
        for x in self.raw(v)?.pc.clone() {
            if !pc.contains(&x) {
                if let Some(z) = self.raw(x)?.sepsets.get(&v) {
                    sepsets.insert(x, z.clone());
                }
            }
        }
        Ok(PcSet {
            target: v,
            pc,
            sepsets,
        })
    }
}

/// Parents-and-children discovery with separating sets for every rejected
/// variable.
pub fn learn_pc_set(
    session: &mut CiSession,
    target: usize,
    variant: PcVariant,
) -> Result<PcSet, CiError> {
    check_target(session, target)?;
    match variant {
        PcVariant::Mmpc => run_routine(session, target, Routine::MaxMin),
        PcVariant::HitonPc => run_routine(session, target, Routine::Hiton),
        PcVariant::GetPc => PcSearch::new(session, Routine::Hiton).symmetric_set(target),
    }
}

/// Spouses of `target` given its parents and children `pc`: for each
/// `y ∈ pc` and each `x ∈ PC(y)` outside `pc`, `x` is a spouse when adding
/// `y` to a recorded separating set of `x` and the target makes them
/// dependent.
pub fn find_spouses(
    search: &mut PcSearch<'_>,
    target: usize,
    pc: &BTreeSet<usize>,
) -> Result<BTreeSet<usize>, CiError> {
    let mut spouses = BTreeSet::new();
    for &y in pc {
        for x in search.symmetric(y)? {
            if x == target || pc.contains(&x) || spouses.contains(&x) {
                continue;
            }
            let Some(mut z) = search.sepset(target, x)? else {
                continue;
            };
            if z.contains(&y) {
                continue;
            }
            z.push(y);
            if !search.session().independent(target, x, &z)? {
                spouses.insert(x);
            }
        }
    }
    Ok(spouses)
}
