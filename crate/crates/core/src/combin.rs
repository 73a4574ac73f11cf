/// All `k`-subsets of `items`, in lexicographic order of positions.
pub(crate) fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let n = items.len();
    if k > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// `floor(log2(m))` for `m >= 1`, and 0 for `m = 0`.
pub(crate) fn floor_log2(m: usize) -> usize {
    if m == 0 {
        0
    } else {
        (usize::BITS - 1 - m.leading_zeros()) as usize
    }
}
