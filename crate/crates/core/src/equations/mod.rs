//! Linear forms `c₁x₁ + … + c_sx_s`: Rado's condition, the exponent
//! thresholds `c*(s)`, `c†(s)` with their admissible exponent witnesses, and
//! exact solution counting on frequency grids.

mod counting;
mod exponents;
pub mod oracle;

pub use counting::{
    density_weight_check, nontrivial_count, nontrivial_count_weighted, solution_count, solution_count_multi,
    trivial_weighted_count, DensityCheck, TrivialCount, MAX_DISTINCT_ARITY,
};
pub use exponents::{admissible_exponents, thresholds, AdmissibleExponents, Route, Thresholds};

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// Largest arity accepted by [`rado_check`].
pub const RADO_MAX_ARITY: usize = 30;

/// Nonzero integer coefficients `(c₁, …, c_s)`, `s ≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearForm {
    coeffs: Vec<i64>,
}

impl LinearForm {
    pub fn new(coeffs: Vec<i64>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::invalid(format!("a form needs at least 2 coefficients, got {}", coeffs.len())));
        }
        if coeffs.contains(&0) {
            return Err(Error::invalid("coefficients must be nonzero"));
        }
        if coeffs.contains(&i64::MIN) {
            return Err(Error::invalid("coefficient out of range"));
        }
        Ok(LinearForm { coeffs })
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// Arity `s`.
    pub fn s(&self) -> usize {
        self.coeffs.len()
    }

    /// `Σ|cᵢ|`.
    pub fn abs_sum(&self) -> u64 {
        self.coeffs.iter().map(|c| c.unsigned_abs()).sum()
    }

    /// `D = Σ|cᵢ|·N`, the degree of `Π f̂(cᵢα)` for `f` supported on `[1, N]`.
    pub fn degree_bound(&self, n: u64) -> Result<u64> {
        self.abs_sum()
            .checked_mul(n)
            .filter(|&d| d < u64::MAX)
            .ok_or_else(|| Error::Range(format!("degree bound Σ|cᵢ|·{n} overflows")))
    }

    /// `Σ cᵢxᵢ` in exact arithmetic.
    pub fn evaluate(&self, x: &[u64]) -> i128 {
        self.coeffs.iter().zip(x).map(|(&c, &v)| c as i128 * v as i128).sum()
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for LinearForm {
    type Err = Error;

    /// Comma-separated coefficients, e.g. `"1,1,-1"`.
    fn from_str(s: &str) -> Result<Self> {
        let coeffs = s
            .split(',')
            .map(|t| t.trim().parse::<i64>().map_err(|_| Error::invalid(format!("bad coefficient {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        LinearForm::new(coeffs)
    }
}

/// Rado's single-equation condition: some nonempty set of coefficients sums to zero.
pub fn rado_check(form: &LinearForm) -> Result<bool> {
    let c = form.coeffs();
    if c.len() > RADO_MAX_ARITY {
        return Err(Error::invalid(format!("rado_check supports s ≤ {RADO_MAX_ARITY}, got {}", c.len())));
    }
    if c.len() <= 20 {
        return Ok((1u32..1 << c.len()).any(|mask| masked_sum(c, mask) == 0));
    }
    // meet in the middle over the two halves
    let (a, b) = c.split_at(c.len() / 2);
    let left: HashSet<i128> = (1u32..1 << a.len()).map(|m| masked_sum(a, m)).collect();
    if left.contains(&0) {
        return Ok(true);
    }
    Ok((1u32..1 << b.len()).map(|m| masked_sum(b, m)).any(|s| s == 0 || left.contains(&-s)))
}

fn masked_sum(c: &[i64], mask: u32) -> i128 {
    c.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v as i128).sum()
}

/// All set partitions of `{0, …, s-1}` as block-label vectors (restricted growth strings).
pub(crate) fn set_partitions(s: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut labels = vec![0usize; s];
    fn go(i: usize, blocks: usize, labels: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == labels.len() {
            out.push(labels.clone());
            return;
        }
        for b in 0..=blocks {
            labels[i] = b;
            go(i + 1, blocks.max(b + 1), labels, out);
        }
    }
    if s > 0 {
        go(0, 0, &mut labels, &mut out);
    }
    out
}
