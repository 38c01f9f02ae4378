use std::collections::{BTreeMap, BTreeSet};
use std::convert::Infallible;

use crate::graph::{apply_meek_rules, Pdag, Skeleton};

/// Separating sets keyed by `(min, max)` node pair.
pub type SepsetMap = BTreeMap<(usize, usize), Vec<usize>>;

pub(crate) fn pair(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Orients the v-structures of an undirected `p`.
///
/// `decide(x, z, y)` is asked about every triple `x − z − y` with `x < y`
/// nonadjacent in `p`; `Some(true)` makes `z` a collider, `None` leaves the
/// triple alone. Arrowheads are collected over all triples first. An edge
/// that would receive arrowheads at both ends stays undirected, so the
/// result does not depend on the order triples are visited.
pub(crate) fn collider_pass<E>(
    p: &Pdag,
    mut decide: impl FnMut(usize, usize, usize) -> Result<Option<bool>, E>,
) -> Result<Pdag, E> {
    let n = p.n_nodes();
    let mut heads: BTreeSet<(usize, usize)> = BTreeSet::new();
    for z in 0..n {
        let nb = p.neighbors(z);
        for (i, &x) in nb.iter().enumerate() {
            for &y in &nb[i + 1..] {
                if p.adjacent(x, y) {
                    continue;
                }
                if decide(x, z, y)? == Some(true) {
                    heads.insert((x, z));
                    heads.insert((y, z));
                }
            }
        }
    }
    let mut out = p.clone();
    for &(a, b) in &heads {
        if !heads.contains(&(b, a)) {
            out.orient(a, b);
        }
    }
    Ok(out)
}

/// Collider orientation from recorded separating sets, then Meek closure.
///
/// A triple `x − z − y` is a collider when `z` is outside the separating
/// set of `x` and `y`; pairs with no recorded set are left alone.
pub fn orient_colliders(names: Vec<String>, skeleton: &Skeleton, sepsets: &SepsetMap) -> Pdag {
    let mut p = Pdag::empty(names);
    for (a, b) in skeleton.edges() {
        p.add_undirected(a, b);
    }
    let oriented = collider_pass::<Infallible>(&p, |x, z, y| {
        Ok(sepsets.get(&pair(x, y)).map(|s| !s.contains(&z)))
    });
    match oriented {
        Ok(p) => apply_meek_rules(&p),
        Err(e) => match e {},
    }
}
