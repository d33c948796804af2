//! Deterministic reductions. Chunk boundaries are fixed, so a parallel run
//! produces the same bits as a sequential one.

use num_complex::Complex;
use rayon::prelude::*;

use crate::Real;

pub(crate) const CHUNK: usize = 4096;

pub(crate) fn chunked_sum<T: Real>(values: &[T]) -> T {
    let partials: Vec<T> = values
        .par_chunks(CHUNK)
        .map(|c| c.iter().fold(T::zero(), |acc, &v| acc + v))
        .collect();
    partials.into_iter().fold(T::zero(), |acc, v| acc + v)
}

/// Sum of `f(i)` for `i` in `0..len`, reduced over fixed chunks.
pub(crate) fn chunked_sum_by<T, F>(len: usize, f: F) -> T
where
    T: Copy + Send + Sync + std::ops::Add<Output = T> + num_traits::Zero,
    F: Fn(usize) -> T + Sync,
{
    let chunks = len.div_ceil(CHUNK);
    let partials: Vec<T> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(len);
            (lo..hi).fold(T::zero(), |acc, i| acc + f(i))
        })
        .collect();
    partials.into_iter().fold(T::zero(), |acc, v| acc + v)
}

/// `e(x) = exp(2πi x)` for `x` already reduced to `[0, 1)`.
pub(crate) fn unit<T: Real>(frac: f64) -> Complex<T> {
    let (s, c) = (std::f64::consts::TAU * frac).sin_cos();
    Complex::new(T::of(c), T::of(s))
}

/// `(a * b) mod m` without overflow.
#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}
