//! Saw-tooth decomposition of `ν̂ - 1̂_[N]` into dyadic exponential-sum blocks,
//! the phase sums `U_m`, `T_m`, and numerical audits of the bounds they obey.
//!
//! Everything here is computed by direct summation over the integers in the
//! relevant range; these routines are oracles, not fast paths.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::numeric::{chunked_sum_by, unit};
use crate::ps_core::{nu_vector, Exponent, PSParams};
use crate::spectral::{interval_transform, transform_at};
use crate::{Error, Real, Result, Violation};

/// `ψ(x) = x - ⌊x⌋ - 1/2`. At integers this is `-1/2`.
pub fn sawtooth<T: Real>(x: T) -> T {
    x - x.floor() - T::of(0.5)
}

/// Truncated Fourier series of the saw-tooth and its error at `t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SawtoothApprox {
    pub value: f64,
    /// `|ψ(t) - value|`
    pub error: f64,
}

/// `Σ_{0<|m|≤M} e(-mt)/(2πim) = -Σ_{m=1}^{M} sin(2πmt)/(πm)`, for `M ≥ 2`.
pub fn sawtooth_partial(t: f64, m: u32) -> Result<SawtoothApprox> {
    if m < 2 {
        return Err(Error::invalid(format!("truncation order must be at least 2, got {m}")));
    }
    Ok(truncated_series(t, m))
}

fn truncated_series(t: f64, m: u32) -> SawtoothApprox {
    let frac = t.rem_euclid(1.0);
    let pi = std::f64::consts::PI;
    let value = -(1..=m)
        .map(|k| (std::f64::consts::TAU * (k as f64 * frac).rem_euclid(1.0)).sin() / (pi * k as f64))
        .sum::<f64>();
    SawtoothApprox { value, error: (sawtooth(t) - value).abs() }
}

/// Distance from `t` to the nearest integer.
pub fn dist_to_int(t: f64) -> f64 {
    let f = t.rem_euclid(1.0);
    f.min(1.0 - f)
}

/// Largest `|ψ(t) - partial(t, M)| / min{1, (M‖t‖)^{-1}}` over a sweep.
pub fn truncation_constant(ts: &[f64], orders: &[u32]) -> Result<f64> {
    let mut worst = 0.0f64;
    for &m in orders {
        for &t in ts {
            let approx = sawtooth_partial(t, m)?;
            let d = dist_to_int(t);
            let shape = if d == 0.0 { 1.0 } else { (1.0 / (m as f64 * d)).min(1.0) };
            worst = worst.max(approx.error / shape);
        }
    }
    Ok(worst)
}

/// `ψ(-φ(n))` with `⌊-φ(n)⌋ = -⌈n^{1/c}⌉` taken exactly.
fn psi_neg_phi(n: u64, e: &Exponent, gamma: f64) -> f64 {
    let phi = (n as f64).powf(gamma);
    e.ceil_root(n) as f64 - phi - 0.5
}

/// Summand of the dyadic blocks at `n`, before the phase `e(nα)`.
fn block_coefficient(n: u64, e: &Exponent, gamma: f64) -> f64 {
    let diff = psi_neg_phi(n + 1, e, gamma) - psi_neg_phi(n, e, gamma);
    let dphi = gamma * (n as f64).powf(gamma - 1.0);
    diff / dphi
}

/// Integers of `(P, 2P] ∩ [1, N]`.
fn block_range(p: f64, cap: u64) -> (u64, u64) {
    let lo = p.floor() as u64 + 1;
    let hi = ((2.0 * p).floor() as u64).min(cap);
    (lo, hi)
}

/// `S(P; α) = Σ_{P<n≤2P, n≤N} (ψ(-φ(n+1)) - ψ(-φ(n)))/φ'(n) · e(nα)`.
pub fn dyadic_block(p: f64, alpha: f64, params: &PSParams) -> Result<Complex64> {
    params.require_analytic()?;
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::invalid(format!("block start must be at least 1, got {p}")));
    }
    let (lo, hi) = block_range(p, params.n());
    Ok(range_sum(lo, hi, alpha, params))
}

fn range_sum(lo: u64, hi: u64, alpha: f64, params: &PSParams) -> Complex64 {
    if hi < lo {
        return Complex64::new(0.0, 0.0);
    }
    let e = params.exponent();
    let gamma = params.gamma();
    let a = alpha.rem_euclid(1.0);
    chunked_sum_by((hi - lo + 1) as usize, |i| {
        let n = lo + i as u64;
        unit::<f64>((n as f64 * a).rem_euclid(1.0)) * block_coefficient(n, e, gamma)
    })
}

/// `((c-1)/(2c))·(1 + ln N) + c`: Taylor remainder summed over `n ≤ N` plus the `n = 1` term.
pub fn residual_bound(params: &PSParams) -> f64 {
    let c = params.c();
    (c - 1.0) / (2.0 * c) * (1.0 + (params.n() as f64).ln()) + c
}

/// `ν̂(α) - 1̂_[N](α)` against the sum of its dyadic blocks.
#[derive(Clone, Debug, PartialEq)]
pub struct DyadicDecomposition {
    pub params: PSParams,
    pub alpha: f64,
    /// `(P, S(P; α))` for `P = N/2^k`, `k = 1..=⌊log₂ N⌋`.
    pub blocks: Vec<(f64, Complex64)>,
    pub difference: Complex64,
    pub reconstructed: Complex64,
    pub residual: f64,
    pub residual_bound: f64,
}

/// Decomposes `ν̂ - 1̂_[N]` at `α` and checks `|difference - Σ S| ≤ residual_bound`.
///
/// A breach is returned as [`Error::Violation`] carrying the numbers involved.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn reconstruct_difference(alpha: f64, params: &PSParams) -> Result<DyadicDecomposition> {
    params.require_analytic()?;
    let n = params.n();
    let levels = 63 - n.leading_zeros() as u64;
    let mut blocks = Vec::with_capacity(levels as usize);
    for k in 1..=levels {
        let p = n as f64 / (1u64 << k) as f64;
        blocks.push((p, dyadic_block(p, alpha, params)?));
    }
    let reconstructed = blocks.iter().fold(Complex64::new(0.0, 0.0), |acc, b| acc + b.1);
    let nu = nu_vector::<f64>(params)?;
    let difference = transform_at(&nu, alpha) - interval_transform::<f64>(n, alpha);
    let residual = (difference - reconstructed).norm();
    let bound = residual_bound(params);
    if !(residual <= bound) {
        return Err(Error::Violation(Box::new(Violation {
            check: "dyadic_reconstruction",
            message: "|ν̂ - 1̂_[N] - Σ_k S(N/2^k)| exceeds the explicit bound".into(),
            values: vec![
                ("c".into(), params.c()),
                ("N".into(), n as f64),
                ("alpha".into(), alpha),
                ("residual".into(), residual),
                ("bound".into(), bound),
            ],
        })));
    }
    Ok(DyadicDecomposition {
        params: params.clone(),
        alpha,
        blocks,
        difference,
        reconstructed,
        residual,
        residual_bound: bound,
    })
}

/// Direct sum of the block summand over `(N/2^K, N]`, `K = ⌊log₂ N⌋`: what the blocks add up to.
pub fn block_span_sum(alpha: f64, params: &PSParams) -> Result<Complex64> {
    params.require_analytic()?;
    let n = params.n();
    let levels = 63 - n.leading_zeros();
    let lo = (n as f64 / (1u64 << levels) as f64).floor() as u64 + 1;
    Ok(range_sum(lo, n, alpha, params))
}

/// `U_m(x) = Σ_{P<n≤x} e(nα + m·n^{1/c})`; with `α = 0`, `x = 2P` this is `T_m(P)`.
pub fn phase_sum(p: f64, x: f64, m: i64, alpha: f64, params: &PSParams) -> Result<Complex64> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::invalid(format!("P must be at least 1, got {p}")));
    }
    if x > 2.0 * p {
        return Err(Error::invalid(format!("x = {x} exceeds 2P = {}", 2.0 * p)));
    }
    let lo = p.floor() as u64 + 1;
    let hi = x.floor() as u64;
    Ok(phase_partial_sums(lo, hi, m, alpha, params.gamma()).0)
}

/// Final value and running maximum of the partial sums of `e(nα + m n^γ)` over `lo..=hi`.
fn phase_partial_sums(lo: u64, hi: u64, m: i64, alpha: f64, gamma: f64) -> (Complex64, f64) {
    let a = alpha.rem_euclid(1.0);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut peak = 0.0f64;
    if hi < lo {
        return (acc, peak);
    }
    let mf = m as f64;
    for n in lo..=hi {
        let phase = (n as f64 * a).rem_euclid(1.0) + (mf * (n as f64).powf(gamma)).rem_euclid(1.0);
        acc += unit::<f64>(phase.rem_euclid(1.0));
        peak = peak.max(acc.norm());
    }
    (acc, peak)
}

/// `min{P, |m|^{-1}P^{1-γ} + (|m|P^γ)^{1/2}}`
pub fn lemma_bound(p: f64, m: i64, gamma: f64) -> f64 {
    if m == 0 {
        return p;
    }
    let am = m.unsigned_abs() as f64;
    p.min(p.powf(1.0 - gamma) / am + (am * p.powf(gamma)).sqrt())
}

/// `|m|^{1/2}P^{1/(2c)} + P^{1-1/(2c)}|m|^{-1/2}`, the second-derivative bound for `U_m`.
pub fn second_derivative_bound(p: f64, m: i64, c: f64) -> f64 {
    let am = m.unsigned_abs() as f64;
    am.sqrt() * p.powf(1.0 / (2.0 * c)) + p.powf(1.0 - 1.0 / (2.0 * c)) / am.sqrt()
}

/// `P^{6/5 - 2γ/5}`, the block bound without its `ε` and constant.
pub fn block_bound(p: f64, gamma: f64) -> f64 {
    p.powf(6.0 / 5.0 - 2.0 * gamma / 5.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AuditFamily {
    /// `|T_m(P)|` against [`lemma_bound`].
    Lemma,
    /// `sup_x |U_m(x)|` against [`second_derivative_bound`].
    SecondDerivative,
    /// `|S(P; α)|` against [`block_bound`].
    Block,
}

impl AuditFamily {
    pub fn name(self) -> &'static str {
        match self {
            AuditFamily::Lemma => "lemma",
            AuditFamily::SecondDerivative => "second_derivative",
            AuditFamily::Block => "block",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AuditRow {
    pub family: AuditFamily,
    pub p: f64,
    /// Frequency `m` (zero for block rows).
    pub m: i64,
    pub alpha: f64,
    pub value: f64,
    pub bound: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AuditTable {
    pub c: f64,
    pub rows: Vec<AuditRow>,
}

impl AuditTable {
    /// Fitted constant of a family: the largest ratio observed.
    pub fn c_fit(&self, family: AuditFamily) -> f64 {
        self.rows.iter().filter(|r| r.family == family).map(|r| r.ratio).fold(0.0, f64::max)
    }

    pub fn all_finite(&self) -> bool {
        self.rows.iter().all(|r| r.value.is_finite() && r.bound.is_finite() && r.ratio.is_finite())
    }
}

/// Direct evaluation of `T_m`, `U_m` and `S(P)` over a sweep, with the ratio
/// of each to its bound.
///
/// `m` runs over `-m_max..=m_max` for `T_m` (with `m = 0` included) and over
/// nonzero `m` for `U_m`; each `α` in `alphas` gives its own `U_m` and `S(P)`
/// rows. Blocks are truncated at `params.n()`.
pub fn audit_bounds(params: &PSParams, ps: &[f64], m_max: i64, alphas: &[f64]) -> Result<AuditTable> {
    params.require_analytic()?;
    if m_max < 0 {
        return Err(Error::invalid("m_max must be nonnegative"));
    }
    let c = params.c();
    let gamma = params.gamma();
    let mut rows = Vec::new();
    for &p in ps {
        if !(p >= 1.0 && p.is_finite()) {
            return Err(Error::invalid(format!("P must be at least 1, got {p}")));
        }
        let lo = p.floor() as u64 + 1;
        let hi = (2.0 * p).floor() as u64;
        let roots: Vec<f64> = (lo..=hi).map(|n| (n as f64).powf(gamma)).collect();
        // T_{-m} = conj(T_m) and U_{-m} = conj(U_m) at α = 0, so nonnegative m suffice there.
        let at_zero: Vec<(Complex64, f64)> =
            (0..=m_max).into_par_iter().map(|m| tabled_partial_sums(lo, &roots, m, 0.0)).collect();
        let t_rows: Vec<AuditRow> = at_zero
            .iter()
            .enumerate()
            .map(|(m, s)| {
                let m = m as i64;
                let value = s.0.norm();
                let bound = lemma_bound(p, m, gamma);
                AuditRow { family: AuditFamily::Lemma, p, m, alpha: 0.0, value, bound, ratio: value / bound }
            })
            .collect();
        for r in t_rows.iter().rev().filter(|r| r.m > 0) {
            rows.push(AuditRow { m: -r.m, ..r.clone() });
        }
        rows.extend(t_rows);
        for &alpha in alphas {
            let frequencies: Vec<i64> = (-m_max..=m_max).filter(|&m| m != 0).collect();
            let peaks: Vec<f64> = if alpha.rem_euclid(1.0) == 0.0 {
                frequencies.iter().map(|&m| at_zero[m.unsigned_abs() as usize].1).collect()
            } else {
                frequencies.par_iter().map(|&m| tabled_partial_sums(lo, &roots, m, alpha).1).collect()
            };
            for (&m, value) in frequencies.iter().zip(peaks) {
                let bound = second_derivative_bound(p, m, c);
                rows.push(AuditRow {
                    family: AuditFamily::SecondDerivative,
                    p,
                    m,
                    alpha,
                    value,
                    bound,
                    ratio: value / bound,
                });
            }
            let value = dyadic_block(p, alpha, params)?.norm();
            let bound = block_bound(p, gamma);
            rows.push(AuditRow { family: AuditFamily::Block, p, m: 0, alpha, value, bound, ratio: value / bound });
        }
    }
    Ok(AuditTable { c, rows })
}

/// As [`phase_partial_sums`] with `n^γ` read from `roots`, where `roots[i] = (lo + i)^γ`.
fn tabled_partial_sums(lo: u64, roots: &[f64], m: i64, alpha: f64) -> (Complex64, f64) {
    let a = alpha.rem_euclid(1.0);
    let mf = m as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut peak = 0.0f64;
    for (i, &r) in roots.iter().enumerate() {
        let n = lo + i as u64;
        let phase = (n as f64 * a).rem_euclid(1.0) + (mf * r).rem_euclid(1.0);
        acc += unit::<f64>(phase.rem_euclid(1.0));
        peak = peak.max(acc.norm_sqr());
    }
    (acc, peak.sqrt())
}
