use std::collections::VecDeque;

use super::{Dag, GraphError};

/// d-separation of `x` and `y` given `z`, by reachability over
/// (node, direction-of-arrival) states.
///
/// A trail may pass through a node reached from a child only if the node is
/// unobserved, and may turn around at a node reached from a parent only if
/// the node is an ancestor of (or in) `z`.
pub fn d_separated(g: &Dag, x: usize, y: usize, z: &[usize]) -> Result<bool, GraphError> {
    Ok(active_trail_length(g, x, y, z)?.is_none())
}

/// Length in edges of the shortest trail from `x` to `y` that is active
/// given `z`, or `None` when they are d-separated.
pub fn active_trail_length(
    g: &Dag,
    x: usize,
    y: usize,
    z: &[usize],
) -> Result<Option<usize>, GraphError> {
    g.check(x)?;
    g.check(y)?;
    for &v in z {
        g.check(v)?;
    }
    if x == y {
        return Err(GraphError::InvalidQuery(format!(
            "x and y are both '{}'",
            g.name(x)
        )));
    }
    if z.contains(&x) || z.contains(&y) {
        return Err(GraphError::InvalidQuery(
            "x or y appears in the conditioning set".into(),
        ));
    }
    let n = g.n_nodes();
    let mut observed = vec![false; n];
    for &v in z {
        observed[v] = true;
    }
    let anc = g.ancestors_of(z);
    // visited[2v] = arrived from a child (moving up), visited[2v+1] = from a parent
    let mut visited = vec![false; 2 * n];
    let mut queue = VecDeque::new();
    queue.push_back((x, true, 0usize));
    while let Some((v, up, d)) = queue.pop_front() {
        let slot = 2 * v + usize::from(!up);
        if visited[slot] {
            continue;
        }
        visited[slot] = true;
        if v == y {
            return Ok(Some(d));
        }
        if up {
            if !observed[v] {
                queue.extend(g.parents(v).iter().map(|&p| (p, true, d + 1)));
                queue.extend(g.children(v).iter().map(|&c| (c, false, d + 1)));
            }
        } else {
            if !observed[v] {
                queue.extend(g.children(v).iter().map(|&c| (c, false, d + 1)));
            }
            if anc[v] {
                queue.extend(g.parents(v).iter().map(|&p| (p, true, d + 1)));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn collider() -> Dag {
        Dag::from_named_edges(&["A", "B", "C"], &[("A", "C"), ("B", "C")]).unwrap()
    }

    #[test]
    fn collider_blocks_until_observed() {
        let g = collider();
        assert!(d_separated(&g, 0, 1, &[]).unwrap());
        assert!(!d_separated(&g, 0, 1, &[2]).unwrap());
    }

    #[test]
    fn trail_length_counts_edges() {
        let g = Dag::from_named_edges(
            &["A", "B", "C", "D"],
            &[("A", "B"), ("B", "C"), ("A", "D"), ("D", "C")],
        )
        .unwrap();
        assert_eq!(active_trail_length(&g, 0, 2, &[]).unwrap(), Some(2));
        assert_eq!(active_trail_length(&g, 0, 2, &[1]).unwrap(), Some(2));
        assert_eq!(active_trail_length(&g, 0, 2, &[1, 3]).unwrap(), None);
    }

    #[test]
    fn descendant_of_collider_opens() {
        let g = Dag::from_named_edges(&["A", "B", "C", "D"], &[("A", "C"), ("B", "C"), ("C", "D")])
            .unwrap();
        assert!(!d_separated(&g, 0, 1, &[3]).unwrap());
    }

    #[test]
    fn chain_and_fork_block_when_observed() {
        let chain = Dag::from_named_edges(&["A", "B", "C"], &[("A", "B"), ("B", "C")]).unwrap();
        assert!(!d_separated(&chain, 0, 2, &[]).unwrap());
        assert!(d_separated(&chain, 0, 2, &[1]).unwrap());
        let fork = Dag::from_named_edges(&["A", "B", "C"], &[("B", "A"), ("B", "C")]).unwrap();
        assert!(d_separated(&fork, 0, 2, &[1]).unwrap());
    }

    #[test]
    fn invalid_queries() {
        let g = collider();
        assert!(matches!(
            d_separated(&g, 0, 0, &[]),
            Err(GraphError::InvalidQuery(_))
        ));
        assert!(matches!(
            d_separated(&g, 0, 1, &[0]),
            Err(GraphError::InvalidQuery(_))
        ));
        assert!(matches!(
            d_separated(&g, 0, 9, &[]),
            Err(GraphError::NodeOutOfRange(9, 3))
        ));
    }
}
