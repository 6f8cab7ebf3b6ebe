//! Deterministic pair enumeration over a finite sample.
//!
//! Pairs `(i, j)` of sample indices are visited by anti-diagonal: first by
//! `i + j`, then by `i`. With the integer order `0, 1, -1, 2, -2, ...` this
//! puts pairs of small elements first, so the first failure found is also a
//! small one.

/// Sort key realizing the diagonal order.
pub fn diagonal_key(i: usize, j: usize) -> (usize, usize) {
    (i + j, i)
}

/// All of `0..len × 0..len` in diagonal order.
pub fn diagonal_pairs(len: usize) -> impl Iterator<Item = (usize, usize)> {
    let diagonals = (2 * len).saturating_sub(1);
    (0..diagonals).flat_map(move |s| {
        let lo = s.saturating_sub(len - 1);
        let hi = s.min(len - 1);
        (lo..=hi).map(move |i| (i, s - i))
    })
}
