use num_complex::Complex;

use super::{set_partitions, LinearForm};
use crate::numeric::{chunked_sum_by, mul_mod};
use crate::ps_core::{is_member, member_weight, nu_vector, PSParams};
use crate::spectral::transform_auto;
use crate::{Error, Real, Result, WeightedIndicator};

/// Largest arity for the distinct-coordinate counts (52 set partitions at `s = 5`).
pub const MAX_DISTINCT_ARITY: usize = 5;

/// `T(f, …, f) = Σ_{c·n = 0} Π f(nᵢ)`, as the grid mean `(1/M) Σ_j Π f̂(cᵢ j/M)`.
///
/// Exact up to rounding when `M ≥ Σ|cᵢ|·N + 1`; smaller grids are rejected.
pub fn solution_count<T: Real>(form: &LinearForm, f: &WeightedIndicator<T>, m: u64) -> Result<T> {
    let fs = vec![f; form.s()];
    solution_count_multi(form, &fs, m)
}

/// `T(f₁, …, f_s) = Σ_{c·n = 0} f₁(n₁)⋯f_s(n_s)`.
pub fn solution_count_multi<T: Real>(form: &LinearForm, fs: &[&WeightedIndicator<T>], m: u64) -> Result<T> {
    if fs.len() != form.s() {
        return Err(Error::invalid(format!("{} functions for a form of arity {}", fs.len(), form.s())));
    }
    let cap = fs.iter().map(|f| f.cap()).max().unwrap_or(1);
    let required = form.degree_bound(cap)? + 1;
    if m < required {
        return Err(Error::GridTooSmall { m, required });
    }
    // one transform per distinct function
    let mut cache: Vec<(&WeightedIndicator<T>, Vec<Complex<T>>)> = Vec::new();
    let mut index = Vec::with_capacity(fs.len());
    for &f in fs {
        match cache.iter().position(|(g, _)| std::ptr::eq(*g, f)) {
            Some(i) => index.push(i),
            None => {
                cache.push((f, transform_auto(f, m)));
                index.push(cache.len() - 1);
            }
        }
    }
    let tables: Vec<&[Complex<T>]> = index.iter().map(|&i| cache[i].1.as_slice()).collect();
    let total = grid_product_sum(form.coeffs(), &tables, m);
    real_mean(total, m)
}

/// `Σ_j Π_i tables[i][cᵢ j mod M]`.
fn grid_product_sum<T: Real>(coeffs: &[i64], tables: &[&[Complex<T>]], m: u64) -> Complex<T> {
    let steps: Vec<u64> = coeffs.iter().map(|&c| c.rem_euclid(m as i64) as u64).collect();
    let narrow = m <= 1 << 32;
    chunked_sum_by(m as usize, |j| {
        let mut acc = Complex::new(T::one(), T::zero());
        for (t, &step) in tables.iter().zip(&steps) {
            let idx = if narrow { step * j as u64 % m } else { mul_mod(step, j as u64, m) };
            acc = acc * t[idx as usize];
        }
        acc
    })
}

fn real_mean<T: Real>(total: Complex<T>, m: u64) -> Result<T> {
    let mean = total / T::of_u64(m);
    let scale = mean.re.abs().max(T::one());
    // 1e-6 in double precision, looser for narrower scalars
    let tol = T::of(1e-6).max(T::epsilon() * T::of(1e3));
    if mean.im.abs() > tol * scale {
        return Err(Error::Numerical(format!(
            "solution count has imaginary part {} against real part {}",
            mean.im, mean.re
        )));
    }
    Ok(mean.re)
}

/// Smallest power of two that is an exact grid for the form on `[1, cap]`.
fn exact_grid(form: &LinearForm, cap: u64) -> Result<u64> {
    let required = form.degree_bound(cap)? + 1;
    required
        .checked_next_power_of_two()
        .ok_or_else(|| Error::Range(format!("grid of size {required} is too large")))
}

/// `Σ_π μ(0̂, π)·T_π` over set partitions `π` of the coordinates, restricted
/// to `π ≠ 0̂` when `skip_finest` is set.
///
/// `T_π` counts solutions constant on the blocks of `π`: a block `B` becomes one
/// variable with coefficient `Σ_{i∈B} cᵢ` and weight `f^{|B|}`. A zero merged
/// coefficient reads `f̂^{|B|}(0) = Σ f^{|B|}`, the free-variable factor.
fn partition_sum<T: Real>(form: &LinearForm, f: &WeightedIndicator<T>, skip_finest: bool) -> Result<T> {
    let s = form.s();
    if s > MAX_DISTINCT_ARITY {
        return Err(Error::invalid(format!("distinct-coordinate counts support s ≤ {MAX_DISTINCT_ARITY}, got {s}")));
    }
    if f.is_empty() {
        return Ok(T::zero());
    }
    let m = exact_grid(form, f.cap())?;
    let unit_weights = f.weights().iter().all(|&w| w == T::one());
    // transform of f^k for k = 1..=s
    let mut powers: Vec<Vec<Complex<T>>> = Vec::with_capacity(s);
    for k in 1..=s {
        if unit_weights && k > 1 {
            break;
        }
        powers.push(transform_auto(&f.powi(k as i32), m));
    }
    let table = |k: usize| -> &[Complex<T>] { if unit_weights { &powers[0] } else { &powers[k - 1] } };
    let c = form.coeffs();
    let mut total = Complex::new(T::zero(), T::zero());
    for labels in set_partitions(s) {
        let blocks = labels.iter().max().map_or(0, |&b| b + 1);
        if skip_finest && blocks == s {
            continue;
        }
        let mut merged = vec![0i64; blocks];
        let mut sizes = vec![0usize; blocks];
        for (i, &b) in labels.iter().enumerate() {
            merged[b] += c[i];
            sizes[b] += 1;
        }
        // μ(0̂, π) = Π (-1)^{|B|-1} (|B|-1)!
        let mu: i64 = sizes
            .iter()
            .map(|&k| {
                let sign = if k % 2 == 1 { 1 } else { -1 };
                sign * (1..k as i64).product::<i64>()
            })
            .product();
        let tables: Vec<&[Complex<T>]> = sizes.iter().map(|&k| table(k)).collect();
        total = total + grid_product_sum(&merged, &tables, m) * T::of(mu as f64);
    }
    real_mean(total, m)
}

/// Ordered solutions with pairwise-distinct coordinates in `set`, by Möbius
/// inversion over the partition lattice.
///
/// Each term is a grid mean, so the result is the nearest integer to a
/// floating-point sum; it is exact while the accumulated rounding stays below 1/2.
pub fn nontrivial_count(form: &LinearForm, set: &[u64]) -> Result<u128> {
    let cap = set.iter().copied().max().unwrap_or(1);
    let f = WeightedIndicator::<f64>::indicator(set, cap)?;
    let v = partition_sum(form, &f, false)?;
    if v < -0.5 {
        return Err(Error::Numerical(format!("distinct-solution count came out negative: {v}")));
    }
    Ok(v.round().max(0.0) as u128)
}

/// `Σ_{c·n = 0, nᵢ pairwise distinct} Π f(nᵢ)`.
pub fn nontrivial_count_weighted<T: Real>(form: &LinearForm, f: &WeightedIndicator<T>) -> Result<T> {
    partition_sum(form, f, false)
}

/// Weighted count of solutions with some `nᵢ = n_j`, against `N^{s-1-η}`, `η = 2/c - 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrivialCount {
    pub value: f64,
    pub eta: f64,
    pub target: f64,
    pub ratio: f64,
}

/// `Σ_{n ∈ K} Π ν(nᵢ)` where `K` is the set of solutions with a repeated coordinate.
pub fn trivial_weighted_count(form: &LinearForm, params: &PSParams) -> Result<TrivialCount> {
    params.require_analytic()?;
    let nu = nu_vector::<f64>(params)?;
    // the finest partition is the full count; dropping it leaves -(trivial part)
    let value = -partition_sum(form, &nu, true)?;
    let eta = 2.0 / params.c() - 1.0;
    let target = (params.n() as f64).powf(form.s() as f64 - 1.0 - eta);
    Ok(TrivialCount { value, eta, target, ratio: value / target })
}

/// `Σ_{n∈A} ν(n)` against `|A|^c`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityCheck {
    pub weighted_sum: f64,
    pub lower_bound: f64,
    pub ok: bool,
}

/// Checks `Σ_{n∈A} ν(n) ≥ |A|^c` for `A ⊆ PS_c(N)`.
pub fn density_weight_check(a: &[u64], params: &PSParams) -> Result<DensityCheck> {
    let mut sorted = a.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::invalid("subset has repeated elements"));
    }
    if let Some(&bad) = sorted.iter().find(|&&n| n == 0 || n > params.n() || !is_member(n, params)) {
        return Err(Error::NotMember(bad));
    }
    let weighted_sum = sorted.iter().map(|&n| member_weight::<f64>(n, params)).sum::<f64>();
    let lower_bound = (sorted.len() as f64).powf(params.c());
    // both sides carry a few ulps of rounding
    let ok = weighted_sum >= lower_bound * (1.0 - 1e-12);
    Ok(DensityCheck { weighted_sum, lower_bound, ok })
}
