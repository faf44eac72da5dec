//! Data-parallel helpers; sequential when the `parallel` feature is off.

use crate::numeric::Ring;

/// Below this many products a sum is evaluated sequentially.
pub const PAR_THRESHOLD: usize = 24;

/// Fixed-size chunks summed in index order, so the result does not depend on
/// the thread count.
#[cfg(feature = "parallel")]
const CHUNK: usize = 16;

#[cfg(feature = "parallel")]
pub fn sum_map<R, F>(range: std::ops::Range<usize>, zero: &R, f: F) -> R
where
    R: Ring,
    F: Fn(usize, &mut R) + Sync + Send,
{
    use rayon::prelude::*;
    if range.len() < PAR_THRESHOLD {
        return sum_map_seq(range, zero, f);
    }
    let start = range.start;
    let end = range.end;
    let chunks = (range.len() + CHUNK - 1) / CHUNK;
    let parts: Vec<R> = (0..chunks)
        .into_par_iter()
        .map(|c| sum_map_seq(start + c * CHUNK..(start + (c + 1) * CHUNK).min(end), zero, &f))
        .collect();
    let mut acc = zero.zero_like();
    for p in &parts {
        acc = acc.add(p);
    }
    acc
}

#[cfg(not(feature = "parallel"))]
pub fn sum_map<R, F>(range: std::ops::Range<usize>, zero: &R, f: F) -> R
where
    R: Ring,
    F: Fn(usize, &mut R) + Sync + Send,
{
    sum_map_seq(range, zero, f)
}

/// Sequential reference accumulation: f(i, acc) adds the i-th contribution into acc.
pub fn sum_map_seq<R, F>(range: std::ops::Range<usize>, zero: &R, f: F) -> R
where
    R: Ring,
    F: Fn(usize, &mut R),
{
    let mut acc = zero.zero_like();
    for i in range {
        f(i, &mut acc);
    }
    acc
}

#[cfg(feature = "parallel")]
pub fn map_collect<T, F>(range: std::ops::Range<usize>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    range.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_collect<T, F>(range: std::ops::Range<usize>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    range.map(f).collect()
}
