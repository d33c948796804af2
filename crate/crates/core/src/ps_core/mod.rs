//! Generation of `PS_c(N) = {⌊m^c⌋ : m ≥ 1} ∩ [1, N]`, membership, and the
//! weight `ν(n) = c·n^{1-1/c}` (the reciprocal derivative of `n ↦ n^{1/c}`).

mod power;

pub use power::{floor_power, Exponent, GUARD};

use rayon::prelude::*;

use crate::numeric::chunked_sum;
use crate::{Error, Real, Result};

/// Exponent `c > 1` and cap `N ≥ 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct PSParams {
    exponent: Exponent,
    n: u64,
    gamma: f64,
}

impl PSParams {
    pub fn new(c: f64, n: u64) -> Result<Self> {
        if !(c.is_finite() && c > 1.0) {
            return Err(Error::invalid(format!("c must exceed 1, got {c}")));
        }
        if n == 0 {
            return Err(Error::invalid("N must be at least 1"));
        }
        Ok(PSParams { exponent: Exponent::new(c)?, n, gamma: 1.0 / c })
    }

    pub fn c(&self) -> f64 {
        self.exponent.value()
    }

    /// `γ = 1/c`.
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn exponent(&self) -> &Exponent {
        &self.exponent
    }

    /// Same exponent, different cap.
    pub fn with_n(&self, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("N must be at least 1"));
        }
        Ok(PSParams { n, ..self.clone() })
    }

    /// `1 < c < 2`, where the decay and restriction theory applies.
    pub fn analytic_regime(&self) -> bool {
        self.c() < 2.0
    }

    pub(crate) fn require_analytic(&self) -> Result<()> {
        if self.analytic_regime() {
            Ok(())
        } else {
            Err(Error::invalid(format!("operation needs 1 < c < 2, got c = {}", self.c())))
        }
    }
}

/// A finitely supported real function on the positive integers, stored
/// sparsely. Holds `ν`, its restriction to a colour class, or any `ψ` with
/// `|ψ| ≤ ν`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedIndicator<T> {
    support: Vec<u64>,
    weights: Vec<T>,
    cap: u64,
    l1: T,
}

impl<T: Real> WeightedIndicator<T> {
    pub fn new(support: Vec<u64>, weights: Vec<T>, cap: u64) -> Result<Self> {
        if support.len() != weights.len() {
            return Err(Error::invalid("support and weights differ in length"));
        }
        if let Some(&first) = support.first() {
            if first == 0 {
                return Err(Error::invalid("support must be positive integers"));
            }
        }
        if support.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("support must be strictly increasing"));
        }
        if support.last().is_some_and(|&l| l > cap) {
            return Err(Error::invalid(format!("support exceeds the cap {cap}")));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::invalid("weights must be finite"));
        }
        let l1 = chunked_sum(&weights);
        Ok(WeightedIndicator { support, weights, cap, l1 })
    }

    /// 0/1 indicator of `set`.
    pub fn indicator(set: &[u64], cap: u64) -> Result<Self> {
        Self::new(set.to_vec(), vec![T::one(); set.len()], cap)
    }

    pub fn support(&self) -> &[u64] {
        &self.support
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// The ambient cap `N`.
    pub fn cap(&self) -> u64 {
        self.cap
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    /// Signed sum of the weights (the `ℓ¹` norm for nonnegative weights).
    pub fn l1(&self) -> T {
        self.l1
    }

    pub fn sum_of_squares(&self) -> T {
        let sq: Vec<T> = self.weights.iter().map(|&w| w * w).collect();
        chunked_sum(&sq)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, T)> + '_ {
        self.support.iter().copied().zip(self.weights.iter().copied())
    }

    /// Value at `n` (zero off the support).
    pub fn get(&self, n: u64) -> T {
        match self.support.binary_search(&n) {
            Ok(i) => self.weights[i],
            Err(_) => T::zero(),
        }
    }

    /// Pointwise power `f(n)^k`.
    pub fn powi(&self, k: i32) -> Self {
        let weights: Vec<T> = self.weights.iter().map(|w| w.powi(k)).collect();
        let l1 = chunked_sum(&weights);
        WeightedIndicator { support: self.support.clone(), weights, cap: self.cap, l1 }
    }

    /// Restriction to the members of `subset` (which must lie in the support).
    pub fn restrict(&self, subset: &[u64]) -> Result<Self> {
        let weights = subset
            .iter()
            .map(|&n| self.support.binary_search(&n).map(|i| self.weights[i]).map_err(|_| Error::NotMember(n)))
            .collect::<Result<Vec<T>>>()?;
        Self::new(subset.to_vec(), weights, self.cap)
    }
}

/// `PS_c(N)` in increasing order.
pub fn members(params: &PSParams) -> Result<Vec<u64>> {
    let e = params.exponent();
    let n = params.n();
    // The count is about N^{1/c}; evaluate in blocks of m and stop at the first block past N.
    let estimate = ((n as f64).powf(params.gamma()) as u64).max(1) + 2;
    let block = 1u64 << 14;
    let mut out = Vec::with_capacity(estimate as usize);
    let mut start = 1u64;
    loop {
        // An overflowing power is past any u64 cap.
        let values: Vec<u64> = (start..start + block)
            .into_par_iter()
            .map(|m| match e.floor_power(m) {
                Err(Error::Range(_)) => Ok(u64::MAX),
                other => other,
            })
            .collect::<Result<Vec<_>>>()?;
        for v in values {
            if v > n {
                return Ok(out);
            }
            out.push(v);
        }
        start += block;
    }
}

/// Membership in `PS_c` via `⌊-φ(n)⌋ - ⌊-φ(n+1)⌋ = 1`, `φ(n) = n^{1/c}`.
pub fn is_member(n: u64, params: &PSParams) -> bool {
    is_member_exp(n, params.exponent())
}

pub(crate) fn is_member_exp(n: u64, e: &Exponent) -> bool {
    if n == 0 {
        return false;
    }
    // ⌊-x⌋ = -⌈x⌉
    e.ceil_root(n + 1) - e.ceil_root(n) == 1
}

/// `ν(n)`: `c·n^{1-1/c}` on members of `PS_c(N)`, zero elsewhere.
pub fn weight<T: Real>(n: u64, params: &PSParams) -> T {
    if n == 0 || n > params.n() || !is_member(n, params) {
        return T::zero();
    }
    member_weight(n, params)
}

pub(crate) fn member_weight<T: Real>(n: u64, params: &PSParams) -> T {
    T::of(params.c()) * T::of_u64(n).powf(T::of(1.0 - params.gamma()))
}

/// `ν` as a sparse vector over `PS_c(N)`.
pub fn nu_vector<T: Real>(params: &PSParams) -> Result<WeightedIndicator<T>> {
    let support = members(params)?;
    let weights = support.iter().map(|&n| member_weight(n, params)).collect();
    WeightedIndicator::new(support, weights, params.n())
}

/// The unweighted indicator of `PS_c(N)`.
pub fn ps_indicator<T: Real>(params: &PSParams) -> Result<WeightedIndicator<T>> {
    WeightedIndicator::indicator(&members(params)?, params.n())
}
