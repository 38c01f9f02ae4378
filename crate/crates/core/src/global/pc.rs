use crate::ci::{CiError, CiSession};
use crate::graph::{apply_meek_rules, Pdag, Skeleton};
use crate::parallel::{map_slice, Execution};
use crate::subsets::find_subset;

use super::orient::{collider_pass, pair, SepsetMap};

/// Skeleton search output.
#[derive(Debug, Clone, PartialEq)]
pub struct PcSkeleton {
    pub skeleton: Skeleton,
    pub sepsets: SepsetMap,
}

/// The level-wise edge removal shared by PC and PC-stable.
///
/// At level `l` an edge `x − y` goes when some `l`-subset of the adjacencies
/// of `x` (or of `y`), other than the edge partner, separates them. The
/// stable variant reads adjacencies from a snapshot taken at the start of
/// each level, so the removals of one level are independent of each other
/// and of the order variables are numbered in. Levels stop at the session's
/// conditioning cap.
pub fn pc_skeleton(
    session: &mut CiSession,
    stable: bool,
    exec: Execution,
) -> Result<PcSkeleton, CiError> {
    let n = session.n_vars();
    let cap = session.max_cond();
    let mut skeleton = Skeleton::complete(n);
    let mut sepsets = SepsetMap::new();
    let mut level = 0;
    while level <= cap {
        let edges = skeleton.edges();
        let wide = |sk: &Skeleton, x: usize, y: usize| {
            sk.neighbors(x).len() > level || sk.neighbors(y).len() > level
        };
        if !edges.iter().any(|&(x, y)| wide(&skeleton, x, y)) {
            break;
        }
        if stable {
            let frozen = &skeleton;
            let parent = &*session;
            let found = map_slice(exec, &edges, |&(x, y)| {
                let mut fork = parent.fork();
                let r = separate(&mut fork, frozen, x, y, level);
                (fork, r)
            });
            let mut removals = Vec::new();
            for (&(x, y), (fork, r)) in edges.iter().zip(found) {
                session.absorb(fork);
                if let Some(z) = r? {
                    removals.push((x, y, z));
                }
            }
            for (x, y, z) in removals {
                skeleton.remove(x, y);
                sepsets.insert(pair(x, y), z);
            }
        } else {
            for (x, y) in edges {
                if !skeleton.adjacent(x, y) {
                    continue;
                }
                if let Some(z) = separate(session, &skeleton, x, y, level)? {
                    skeleton.remove(x, y);
                    sepsets.insert(pair(x, y), z);
                }
            }
        }
        level += 1;
    }
    Ok(PcSkeleton { skeleton, sepsets })
}

fn separate(
    session: &mut CiSession,
    sk: &Skeleton,
    x: usize,
    y: usize,
    level: usize,
) -> Result<Option<Vec<usize>>, CiError> {
    for (a, b) in [(x, y), (y, x)] {
        let pool: Vec<usize> = sk
            .neighbors(a)
            .iter()
            .copied()
            .filter(|&v| v != b)
            .collect();
        if let Some(z) = find_subset(&pool, level, |s| session.independent(x, y, s))? {
            return Ok(Some(z));
        }
    }
    Ok(None)
}

/// Collider orientation by majority vote over every separating set drawn
/// from the final adjacencies of either endpoint (up to the conditioning
/// cap), then Meek closure.
///
/// `z` is a collider on `x − z − y` when it lies in fewer than half of the
/// separating sets found and a non-collider when it lies in more; a tie
/// leaves the triple alone. The vote does not depend on which separating
/// set the skeleton search happened to find first.
pub fn orient_colliders_majority(
    session: &mut CiSession,
    names: Vec<String>,
    result: &PcSkeleton,
) -> Result<Pdag, CiError> {
    let cap = session.max_cond();
    let sk = &result.skeleton;
    let mut p = Pdag::empty(names);
    for (a, b) in sk.edges() {
        p.add_undirected(a, b);
    }
    let p = collider_pass(&p, |x, z, y| -> Result<Option<bool>, CiError> {
        let mut seps: Vec<Vec<usize>> = Vec::new();
        for a in [x, y] {
            let other = if a == x { y } else { x };
            let pool: Vec<usize> = sk
                .neighbors(a)
                .iter()
                .copied()
                .filter(|&v| v != other)
                .collect();
            for k in 0..=cap.min(pool.len()) {
                find_subset(&pool, k, |s| {
                    if !seps.iter().any(|t| t.as_slice() == s) && session.independent(x, y, s)? {
                        seps.push(s.to_vec());
                    }
                    Ok::<_, CiError>(false)
                })?;
            }
        }
        if seps.is_empty() {
            return Ok(result.sepsets.get(&pair(x, y)).map(|s| !s.contains(&z)));
        }
        let with = seps.iter().filter(|s| s.contains(&z)).count();
        let without = seps.len() - with;
        Ok(match with.cmp(&without) {
            std::cmp::Ordering::Less => Some(true),
            std::cmp::Ordering::Greater => Some(false),
            std::cmp::Ordering::Equal => None,
        })
    })?;
    Ok(apply_meek_rules(&p))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::graph::{dag_to_cpdag, Dag};

    #[test]
    fn independent_pair_is_edgeless() {
        let g = Arc::new(Dag::from_named_edges(&["A", "B"], &[]).unwrap());
        for stable in [false, true] {
            let mut s = CiSession::oracle(Arc::clone(&g));
            let r = pc_skeleton(&mut s, stable, Execution::Sequential).unwrap();
            assert_eq!(r.skeleton.n_edges(), 0);
            assert_eq!(s.counter().total_tests, 1);
        }
    }

    #[test]
    fn majority_orients_collider() {
        let g = Arc::new(
            Dag::from_named_edges(&["A", "B", "C", "D"], &[("A", "C"), ("B", "C"), ("C", "D")])
                .unwrap(),
        );
        let mut s = CiSession::oracle(Arc::clone(&g));
        let r = pc_skeleton(&mut s, true, Execution::Sequential).unwrap();
        let p = orient_colliders_majority(&mut s, g.names().to_vec(), &r).unwrap();
        assert_eq!(p, dag_to_cpdag(&g));
    }
}
