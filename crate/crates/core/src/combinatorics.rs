/// `C(n, k)`, saturating.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Number of one-hop views `(x, Γ)` over `[1, N]` with `lo <= |Γ| <= hi`.
pub fn view_count(id_space: u64, lo: usize, hi: usize) -> u128 {
    (lo..=hi)
        .map(|d| (id_space as u128).saturating_mul(binomial(id_space.saturating_sub(1), d as u64)))
        .fold(0u128, u128::saturating_add)
}

/// Calls `f` with every `size`-subset of `pool`, in lexicographic order of
/// positions.
pub(crate) fn for_each_subset<T: Copy>(pool: &[T], size: usize, mut f: impl FnMut(&[T])) {
    if size > pool.len() {
        return;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    let mut buf: Vec<T> = idx.iter().map(|&i| pool[i]).collect();
    loop {
        f(&buf);
        let mut pos = size;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            if idx[pos] != pos + pool.len() - size {
                break;
            }
            if pos == 0 && idx[0] == pool.len() - size {
                return;
            }
        }
        idx[pos] += 1;
        for j in pos + 1..size {
            idx[j] = idx[j - 1] + 1;
        }
        for j in pos..size {
            buf[j] = pool[idx[j]];
        }
    }
}
