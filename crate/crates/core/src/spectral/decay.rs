use num_complex::Complex;

use crate::fit::{check_scan_sizes, ExponentFit};
use crate::ps_core::{nu_vector, PSParams};
use crate::{Error, Real, Result};

use super::{interval_transform_grid, transform_grid, FrequencyGrid};

/// Grid maximum of `|ν̂(α) - 1̂_[N](α)|`.
///
/// A lower bound for the supremum over the whole circle; the grid has
/// `K·(N+1)` points.
#[derive(Clone, Debug, PartialEq)]
pub struct DecaySample<T> {
    pub n: u64,
    pub m: u64,
    pub value: T,
    pub argmax_j: u64,
    pub l1: T,
}

impl<T: Real> DecaySample<T> {
    pub fn argmax_alpha(&self) -> f64 {
        self.argmax_j as f64 / self.m as f64
    }
}

pub fn decay_sup<T: Real>(params: &PSParams, oversample: u64) -> Result<DecaySample<T>> {
    params.require_analytic()?;
    if oversample < 2 {
        return Err(Error::invalid(format!("oversampling factor must be at least 2, got {oversample}")));
    }
    let nu = nu_vector::<T>(params)?;
    let grid = FrequencyGrid::oversampled(params.n(), oversample)?;
    let values = transform_grid(&nu, &grid)?;
    let m = grid.m();
    let mut best = (T::zero(), 0u64);
    for (j, v) in values.iter().enumerate() {
        let d: Complex<T> = *v - interval_transform_grid::<T>(params.n(), j as u64, m);
        let mag = d.norm();
        if mag > best.0 {
            best = (mag, j as u64);
        }
    }
    Ok(DecaySample { n: params.n(), m, value: best.0, argmax_j: best.1, l1: nu.l1() })
}

/// Exponent `6/5 - 2/(5c)` of the decay bound.
pub fn decay_target_slope(c: f64) -> f64 {
    6.0 / 5.0 - 2.0 / (5.0 * c)
}

#[derive(Clone, Debug)]
pub struct DecayScan {
    pub c: f64,
    pub samples: Vec<DecaySample<f64>>,
    pub fit: ExponentFit,
    pub target_slope: f64,
}

/// Slope of `log D(N)` against `log N` over the given caps.
pub fn decay_exponent_fit(c: f64, ns: &[u64], oversample: u64) -> Result<DecayScan> {
    check_scan_sizes(ns)?;
    let base = PSParams::new(c, ns[0])?;
    let samples = ns
        .iter()
        .map(|&n| decay_sup::<f64>(&base.with_n(n)?, oversample))
        .collect::<Result<Vec<_>>>()?;
    let points: Vec<(f64, f64)> = samples.iter().map(|s| (s.n as f64, s.value)).collect();
    let fit = ExponentFit::from_samples(&points)?;
    Ok(DecayScan { c, samples, fit, target_slope: decay_target_slope(c) })
}
