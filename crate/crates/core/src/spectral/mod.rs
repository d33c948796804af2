//! Fourier transforms `f̂(α) = Σ f(n) e(nα)` of sparse weighted indicators, on
//! exact rational grids `α = j/M` and at arbitrary points, together with the
//! quantities measured from them: moments, Fourier decay of `ν`, large
//! spectra, and additive energy.
//!
//! On a grid the phase of term `n` at frequency `j` is `e((n·j mod M)/M)`,
//! with the residue computed in integer arithmetic, so the moment identities
//! hold to rounding error regardless of how large `n·j` gets.

mod decay;
mod energy;
mod spectrum;

pub use decay::{decay_exponent_fit, decay_sup, decay_target_slope, DecayScan, DecaySample};
pub use energy::{
    additive_energy, additive_energy_of, energy_exponent_fit, energy_target_slope, EnergyOptions, EnergyScan,
};
pub use spectrum::{large_spectrum_measure, restriction_profile, RestrictionProfile, RestrictionRow, SpectrumSample};

use num_complex::Complex;
use num_traits::Zero;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::numeric::{chunked_sum_by, mul_mod, unit};
use crate::{Error, Real, Result, WeightedIndicator};

/// Sample points `j/M`, `j = 0..M`, on the circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FrequencyGrid {
    m: u64,
    oversample: u64,
}

impl FrequencyGrid {
    /// Grid of `m` points for functions supported in `[1, cap]`; needs `m ≥ cap + 1`.
    pub fn new(m: u64, cap: u64) -> Result<Self> {
        let required = cap + 1;
        if m < required {
            return Err(Error::GridTooSmall { m, required });
        }
        Ok(FrequencyGrid { m, oversample: m / required })
    }

    /// `M = K·(cap + 1)`.
    pub fn oversampled(cap: u64, k: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("oversampling factor must be positive"));
        }
        Self::new(k * (cap + 1), cap)
    }

    /// Smallest grid on which the even moment of order `t` is an exact mean: `M = t·cap + 1`.
    pub fn exact_for_moment(cap: u64, t: u64) -> Result<Self> {
        Self::new((t.max(1) * cap + 1).max(cap + 1), cap)
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn oversample(&self) -> u64 {
        self.oversample
    }

    /// The frequency `j/M`.
    pub fn alpha(&self, j: u64) -> f64 {
        j as f64 / self.m as f64
    }

    fn check_cap(&self, cap: u64) -> Result<()> {
        if self.m < cap + 1 {
            return Err(Error::GridTooSmall { m: self.m, required: cap + 1 });
        }
        Ok(())
    }
}

/// `e(k/M)` for `k = 0..M`, built so that entry `M-k` is the exact conjugate of entry `k`.
pub(crate) fn phase_table<T: Real>(m: u64) -> Vec<Complex<T>> {
    let len = m as usize;
    let mut table = vec![Complex::new(T::one(), T::zero()); len];
    let half = len / 2;
    table.par_iter_mut().enumerate().take(half + 1).skip(1).for_each(|(k, slot)| {
        *slot = unit::<T>(k as f64 / m as f64);
    });
    for k in half + 1..len {
        table[k] = table[len - k].conj();
    }
    table
}

/// `f̂(α)` at an arbitrary real `α` (reduced mod 1 in double precision).
pub fn transform_at<T: Real>(f: &WeightedIndicator<T>, alpha: f64) -> Complex<T> {
    let a = alpha.rem_euclid(1.0);
    let support = f.support();
    let weights = f.weights();
    chunked_sum_by(f.len(), |i| {
        let frac = (support[i] as f64 * a).rem_euclid(1.0);
        unit::<T>(frac) * weights[i]
    })
}

const GRID_BLOCK: usize = 1024;

/// `f̂(j/M)` for every `j`, by direct summation with integer phase indexing.
pub fn transform_grid<T: Real>(f: &WeightedIndicator<T>, grid: &FrequencyGrid) -> Result<Vec<Complex<T>>> {
    grid.check_cap(f.cap())?;
    let table = phase_table::<T>(grid.m());
    Ok(transform_grid_with(f, grid.m(), &table))
}

pub(crate) fn transform_grid_with<T: Real>(f: &WeightedIndicator<T>, m: u64, table: &[Complex<T>]) -> Vec<Complex<T>> {
    let mut out = vec![Complex::<T>::zero(); m as usize];
    out.par_chunks_mut(GRID_BLOCK).enumerate().for_each(|(b, chunk)| {
        let j0 = (b * GRID_BLOCK) as u64;
        for (n, w) in f.iter() {
            let step = n % m;
            let mut idx = mul_mod(step, j0, m);
            for slot in chunk.iter_mut() {
                *slot = *slot + table[idx as usize] * w;
                idx += step;
                if idx >= m {
                    idx -= m;
                }
            }
        }
    });
    out
}

/// `f̂(j/M)` for every `j` via a length-`M` FFT of the dense coefficient vector.
///
/// Same values as [`transform_grid`] up to rounding; far cheaper when the
/// support is dense relative to `log M`.
pub fn transform_grid_fft<T: Real>(f: &WeightedIndicator<T>, grid: &FrequencyGrid) -> Result<Vec<Complex<T>>> {
    grid.check_cap(f.cap())?;
    Ok(transform_fft_len(f, grid.m()))
}

pub(crate) fn transform_fft_len<T: Real>(f: &WeightedIndicator<T>, m: u64) -> Vec<Complex<T>> {
    let mut buf = vec![Complex::<T>::zero(); m as usize];
    for (n, w) in f.iter() {
        let slot = &mut buf[(n % m) as usize];
        slot.re = slot.re + w;
    }
    // The inverse transform carries the e(+nj/M) sign convention, unnormalised.
    FftPlanner::<T>::new().plan_fft_inverse(m as usize).process(&mut buf);
    buf
}

/// Picks the cheaper of the two grid routes; both give the same values up to rounding.
pub(crate) fn transform_auto<T: Real>(f: &WeightedIndicator<T>, m: u64) -> Vec<Complex<T>> {
    let log_m = 64 - u64::from(m.leading_zeros());
    if (f.len() as u64) <= 4 * log_m {
        transform_grid_with(f, m, &phase_table::<T>(m))
    } else {
        transform_fft_len(f, m)
    }
}

/// `1̂_[N](α) = Σ_{n ≤ N} e(nα)` in closed form.
pub fn interval_transform<T: Real>(n: u64, alpha: f64) -> Complex<T> {
    let a = alpha.rem_euclid(1.0);
    if a == 0.0 {
        return Complex::new(T::of_u64(n), T::zero());
    }
    let pi = std::f64::consts::PI;
    // Σ e(nα) = e((N+1)α/2)·sin(πNα)/sin(πα)
    let ratio = (pi * (n as f64 * a).rem_euclid(2.0)).sin() / (pi * a).sin();
    let phase = ((n as f64 + 1.0) * a / 2.0).rem_euclid(1.0);
    unit::<T>(phase) * T::of(ratio)
}

/// `1̂_[N](j/M)` with the phases reduced in integer arithmetic.
pub fn interval_transform_grid<T: Real>(n: u64, j: u64, m: u64) -> Complex<T> {
    let j = j % m;
    if j == 0 {
        return Complex::new(T::of_u64(n), T::zero());
    }
    let pi = std::f64::consts::PI;
    let two_m = 2 * m;
    let num = (pi * mul_mod(n, j, two_m) as f64 / m as f64).sin();
    let den = (pi * j as f64 / m as f64).sin();
    let phase = mul_mod(n + 1, j, two_m) as f64 / two_m as f64;
    unit::<T>(phase) * T::of(num / den)
}

/// `(1/M)·Σ_j |f̂(j/M)|^t`, the grid mean of the `t`-th moment.
///
/// For even integer `t` and `M ≥ t·N + 1` this equals `∫_𝕋 |f̂|^t` exactly.
pub fn moment_mean<T: Real>(f: &WeightedIndicator<T>, t: f64, grid: &FrequencyGrid) -> Result<T> {
    if !(t >= 1.0 && t.is_finite()) {
        return Err(Error::invalid(format!("moment order must be at least 1, got {t}")));
    }
    let values = transform_grid(f, grid)?;
    Ok(moment_of_values(&values, t))
}

pub(crate) fn moment_of_values<T: Real>(values: &[Complex<T>], t: f64) -> T {
    let half = T::of(t / 2.0);
    let sum = chunked_sum_by(values.len(), |j| {
        let sq = values[j].norm_sqr();
        if t == 2.0 {
            sq
        } else if t == 4.0 {
            sq * sq
        } else {
            sq.powf(half)
        }
    });
    sum / T::of_u64(values.len() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ps_core::{nu_vector, PSParams};

    fn close(a: Complex<f64>, b: Complex<f64>, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    fn nu(c: f64, n: u64) -> WeightedIndicator<f64> {
        nu_vector(&PSParams::new(c, n).unwrap()).unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(FrequencyGrid::new(5, 5).is_err());
        assert_eq!(FrequencyGrid::new(6, 5).unwrap().oversample(), 1);
        assert_eq!(FrequencyGrid::oversampled(12, 4).unwrap().m(), 52);
        assert_eq!(FrequencyGrid::exact_for_moment(11, 4).unwrap().m(), 45);
        let f = WeightedIndicator::<f64>::indicator(&[1, 9], 9).unwrap();
        let small = FrequencyGrid::new(9, 8).unwrap();
        assert!(matches!(transform_grid(&f, &small), Err(Error::GridTooSmall { .. })));
    }

    #[test]
    fn single_point() {
        let one = WeightedIndicator::<f64>::indicator(&[1], 3).unwrap();
        let a = 0.3;
        assert!(close(transform_at(&one, a), unit::<f64>(a), 1e-15));
        let g = transform_grid(&one, &FrequencyGrid::new(4, 3).unwrap()).unwrap();
        let want = [Complex::new(1.0, 0.0), Complex::new(0.0, 1.0), Complex::new(-1.0, 0.0), Complex::new(0.0, -1.0)];
        for (x, y) in g.iter().zip(want) {
            assert!(close(*x, y, 1e-15));
        }
    }

    #[test]
    fn nu_at_half() {
        let f = nu(1.5, 12);
        // weights at 1,5,11 enter with sign -1, at 2,8 with +1
        let oracle: f64 = f.iter().map(|(n, w)| if n % 2 == 0 { w } else { -w }).sum();
        assert!((oracle - (-2.511)).abs() < 1e-3);
        assert!(close(transform_at(&f, 0.5), Complex::new(oracle, 0.0), 1e-12));
        let g = transform_grid(&f, &FrequencyGrid::new(16, 12).unwrap()).unwrap();
        assert!(close(g[8], Complex::new(oracle, 0.0), 1e-12));
        assert!(close(g[0], Complex::new(f.l1(), 0.0), 1e-12));
        assert!(close(transform_at(&f, 0.0), Complex::new(f.l1(), 0.0), 1e-12));
    }

    #[test]
    fn fft_matches_direct() {
        let f = nu(1.3, 3000);
        let grid = FrequencyGrid::oversampled(3000, 3).unwrap();
        let direct = transform_grid(&f, &grid).unwrap();
        let fft = transform_grid_fft(&f, &grid).unwrap();
        let tol = 1e-10 * f.l1();
        for (a, b) in direct.iter().zip(&fft) {
            assert!(close(*a, *b, tol));
        }
    }

    #[test]
    fn conjugate_symmetry_is_exact() {
        let f = nu(1.7, 500);
        let grid = FrequencyGrid::new(1237, 500).unwrap();
        let g = transform_grid(&f, &grid).unwrap();
        let m = g.len();
        for j in 1..m {
            assert_eq!(g[j].norm_sqr(), g[m - j].norm_sqr());
        }
    }

    #[test]
    fn interval_examples() {
        let z: Complex<f64> = interval_transform(7, 0.0);
        assert_eq!(z, Complex::new(7.0, 0.0));
        assert!(interval_transform::<f64>(2, 0.5).norm() < 1e-12);
        assert!(interval_transform::<f64>(100, 0.25).norm() < 1e-12);
        assert_eq!(interval_transform_grid::<f64>(9, 0, 40), Complex::new(9.0, 0.0));
    }

    #[test]
    fn interval_matches_direct_sum_and_bound() {
        for &(n, a) in &[(1u64, 0.37), (10, 0.01), (57, 0.731), (1000, 0.5003), (333, 0.999)] {
            let direct: Complex<f64> = (1..=n).map(|k| unit::<f64>((k as f64 * a).rem_euclid(1.0))).sum();
            let closed: Complex<f64> = interval_transform(n, a);
            assert!(close(direct, closed, 1e-9 * n as f64), "n={n} a={a}");
            let dist = a.min(1.0 - a);
            assert!(closed.norm() <= (n as f64).min(1.0 / (2.0 * dist)) + 1e-9);
        }
        let m = 97;
        for j in 0..m {
            let a: Complex<f64> = interval_transform_grid(40, j, m);
            let b: Complex<f64> = interval_transform(40, j as f64 / m as f64);
            assert!(close(a, b, 1e-10));
        }
    }

    #[test]
    fn moments() {
        let f = nu(1.5, 12);
        let grid = FrequencyGrid::new(32, 12).unwrap();
        let m2 = moment_mean(&f, 2.0, &grid).unwrap();
        let oracle = 2.25 * (1.0 + 2f64.powf(2.0 / 3.0) + 5f64.powf(2.0 / 3.0) + 4.0 + 11f64.powf(2.0 / 3.0));
        assert!((oracle - 32.529).abs() < 1e-3);
        assert!((m2 - oracle).abs() < 1e-10);
        assert!((f.sum_of_squares() - oracle).abs() < 1e-10);

        let one = WeightedIndicator::<f64>::indicator(&[1], 5).unwrap();
        for t in [1.0, 2.5, 4.0, 7.0] {
            let g = FrequencyGrid::new(13, 5).unwrap();
            assert!((moment_mean(&one, t, &g).unwrap() - 1.0).abs() < 1e-12);
        }
        assert!(moment_mean(&one, 0.5, &FrequencyGrid::new(13, 5).unwrap()).is_err());

        let ind = WeightedIndicator::<f64>::indicator(&[1, 2, 5, 8, 11], 11).unwrap();
        let g = FrequencyGrid::new(45, 11).unwrap();
        assert!((moment_mean(&ind, 4.0, &g).unwrap() - 61.0).abs() < 1e-9);
    }
}
