//! Exact floors of real powers `⌊m^c⌋` and ceilings of roots `⌈n^{1/c}⌉`.
//!
//! The exponent is taken as the decimal literal it was written as, i.e. the
//! rational `p/q`. Double precision decides almost every case; when the
//! computed value lies within `1e-6` of an integer (or is too large for the
//! guard to be meaningful) the comparison `m^c ≥ k` is settled exactly as
//! `m^p ≥ k^q` in big-integer arithmetic, or with 192-bit floats when `p`, `q`
//! are too large for that.

use std::cmp::Ordering;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigUint;
use num_integer::Integer;

use crate::{Error, Result};

/// Width of the near-integer band that triggers the precise path.
pub const GUARD: f64 = 1e-6;

/// Above this magnitude an f64 ulp is no longer small against `GUARD`.
const FAST_LIMIT: f64 = 4_294_967_296.0; // 2^32

/// Largest operand (in bits) for the exact big-integer comparison.
const EXACT_BITS: u64 = 1 << 16;

/// Working precision of the big-float fallback, about 57 decimal digits.
const FALLBACK_PREC: usize = 192;

const TWO_POW_64: f64 = 18_446_744_073_709_551_616.0;

/// A real exponent together with its exact decimal value `num/den`.
#[derive(Clone, Debug, PartialEq)]
pub struct Exponent {
    value: f64,
    literal: String,
    /// Reduced fraction, `None` when the literal does not fit in `u64`.
    ratio: Option<(u64, u64)>,
}

impl Exponent {
    /// Exponent equal to the shortest decimal literal that round-trips to `value`.
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() || value <= 0.0 {
            return Err(Error::invalid(format!("exponent must be positive and finite, got {value}")));
        }
        let literal = format!("{value}");
        let ratio = decimal_ratio(&literal);
        Ok(Exponent { value, literal, ratio })
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn literal(&self) -> &str {
        &self.literal
    }

    /// `(p, q)` with `c = p/q` in lowest terms, when representable.
    pub fn ratio(&self) -> Option<(u64, u64)> {
        self.ratio
    }

    /// `⌊m^c⌋`.
    pub fn floor_power(&self, m: u64) -> Result<u64> {
        if m == 0 {
            return Err(Error::invalid("floor_power needs m ≥ 1"));
        }
        let x = (m as f64).powf(self.value);
        if !x.is_finite() || x >= TWO_POW_64 {
            return Err(Error::Range(format!("{m}^{} does not fit in u64", self.literal)));
        }
        let fl = x.floor();
        let frac = x - fl;
        if x < FAST_LIMIT && frac > GUARD && frac < 1.0 - GUARD {
            return Ok(fl as u64);
        }
        // Largest k with m^c ≥ k, searched in a window around the estimate.
        let slack = (x * 4.0 * f64::EPSILON).ceil() as u64 + 2;
        let est = fl as u64;
        let mut lo = est.saturating_sub(slack).max(1);
        while lo > 1 && self.cmp_power(m, lo) == Ordering::Less {
            lo = lo.saturating_sub(slack).max(1);
        }
        let mut hi = est.saturating_add(slack);
        while self.cmp_power(m, hi) != Ordering::Less {
            if hi == u64::MAX {
                return Err(Error::Range(format!("{m}^{} does not fit in u64", self.literal)));
            }
            hi = hi.saturating_add(slack);
        }
        // invariant: m^c ≥ lo, m^c < hi
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.cmp_power(m, mid) == Ordering::Less {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(lo)
    }

    /// Smallest `k ≥ 1` with `k^c ≥ n`, i.e. `⌈n^{1/c}⌉` for `n ≥ 1`.
    pub fn ceil_root(&self, n: u64) -> u64 {
        if n <= 1 {
            return 1;
        }
        let g = (n as f64).powf(1.0 / self.value);
        let fl = g.floor();
        let frac = g - fl;
        if g < FAST_LIMIT && frac > GUARD && frac < 1.0 - GUARD {
            return fl as u64 + 1;
        }
        let slack = (g * 4.0 * f64::EPSILON).ceil() as u64 + 2;
        let est = g.ceil() as u64;
        let mut lo = est.saturating_sub(slack).max(1);
        while lo > 1 && self.cmp_power(lo, n) != Ordering::Less {
            lo = lo.saturating_sub(slack).max(1);
        }
        if self.cmp_power(lo, n) != Ordering::Less {
            return lo;
        }
        let mut hi = est.saturating_add(slack);
        while self.cmp_power(hi, n) == Ordering::Less {
            hi = hi.saturating_add(slack);
        }
        // invariant: lo^c < n ≤ hi^c
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.cmp_power(mid, n) == Ordering::Less {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    }

    /// Exact ordering of `m^c` against the integer `k`.
    pub fn cmp_power(&self, m: u64, k: u64) -> Ordering {
        if m == 0 || k == 0 {
            return if m == 0 { 0.cmp(&k) } else { Ordering::Greater };
        }
        if let Some((p, q)) = self.ratio {
            let m_bits = 64 - u64::from(m.leading_zeros());
            let k_bits = 64 - u64::from(k.leading_zeros());
            if p.saturating_mul(m_bits) <= EXACT_BITS && q.saturating_mul(k_bits) <= EXACT_BITS {
                let lhs = BigUint::from(m).pow(p as u32);
                let rhs = BigUint::from(k).pow(q as u32);
                return lhs.cmp(&rhs);
            }
        }
        self.cmp_power_bigfloat(m, k)
    }

    fn cmp_power_bigfloat(&self, m: u64, k: u64) -> Ordering {
        let rm = RoundingMode::ToEven;
        let mut cc = Consts::new().expect("astro-float constant cache");
        let c = BigFloat::parse(&self.literal, Radix::Dec, FALLBACK_PREC, rm, &mut cc);
        let base = BigFloat::from_word(m as _, FALLBACK_PREC);
        let y = base.pow(&c, FALLBACK_PREC, rm, &mut cc);
        let kb = BigFloat::from_word(k as _, FALLBACK_PREC);
        let diff = y.sub(&kb, FALLBACK_PREC, rm);
        // Agreement to ~150 bits is taken as equality (m^c an exact integer).
        let tol = kb.mul(&BigFloat::from_f64(2f64.powi(-150), FALLBACK_PREC), FALLBACK_PREC, rm);
        let mut abs = diff.clone();
        if abs.is_negative() {
            abs.inv_sign();
        }
        if abs.cmp(&tol).is_some_and(|o| o <= 0) {
            return Ordering::Equal;
        }
        if diff.is_negative() {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

/// Parse a plain decimal literal such as `"1.05"` into a reduced fraction.
fn decimal_ratio(literal: &str) -> Option<(u64, u64)> {
    let (int_part, frac_part) = match literal.split_once('.') {
        Some((i, f)) => (i, f),
        None => (literal, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let digits = frac_part.len() as u32;
    let den = 10u64.checked_pow(digits)?;
    let int: u64 = if int_part.is_empty() { 0 } else { int_part.parse().ok()? };
    let frac: u64 = if frac_part.is_empty() { 0 } else { frac_part.parse().ok()? };
    let num = int.checked_mul(den)?.checked_add(frac)?;
    let g = num.gcd(&den);
    if g == 0 {
        return None;
    }
    let (p, q) = (num / g, den / g);
    if p > u32::MAX as u64 || q > u32::MAX as u64 {
        return None;
    }
    Some((p, q))
}

/// `⌊m^c⌋` for a single call; build an [`Exponent`] once for repeated use.
pub fn floor_power(m: u64, c: f64) -> Result<u64> {
    if c <= 1.0 {
        return Err(Error::invalid(format!("floor_power needs c > 1, got {c}")));
    }
    Exponent::new(c)?.floor_power(m)
}
