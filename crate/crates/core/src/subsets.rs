//! Fixed-size subset enumeration in lexicographic order of positions.

/// Calls `visit` on every `k`-subset of `pool` (in pool order) until it
/// returns `true`; returns the accepted subset.
pub(crate) fn find_subset<E>(
    pool: &[usize],
    k: usize,
    mut visit: impl FnMut(&[usize]) -> Result<bool, E>,
) -> Result<Option<Vec<usize>>, E> {
    if k > pool.len() {
        return Ok(None);
    }
    let mut idx: Vec<usize> = (0..k).collect();
    let mut buf: Vec<usize> = Vec::with_capacity(k);
    loop {
        buf.clear();
        buf.extend(idx.iter().map(|&i| pool[i]));
        if visit(&buf)? {
            return Ok(Some(buf));
        }
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            if idx[i] != i + pool.len() - k {
                break;
            }
            if i == 0 {
                return Ok(None);
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Searches subsets of `pool` by increasing size up to `max_size` (inclusive).
pub(crate) fn find_subset_up_to<E>(
    pool: &[usize],
    max_size: usize,
    mut visit: impl FnMut(&[usize]) -> Result<bool, E>,
) -> Result<Option<Vec<usize>>, E> {
    for k in 0..=max_size.min(pool.len()) {
        if let Some(s) = find_subset(pool, k, &mut visit)? {
            return Ok(Some(s));
        }
    }
    Ok(None)
}
