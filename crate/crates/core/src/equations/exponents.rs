use crate::{Error, Rational, Result};

/// `c*(s) = (2s+6)/(s+8)` and `c†(s)`, which is `c*(s)` for `s ∈ {3, 4}` and `2` beyond.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Thresholds {
    pub s: u32,
    pub c_star: Rational,
    pub c_dagger: Rational,
}

pub fn thresholds(s: u32) -> Result<Thresholds> {
    if s < 3 {
        return Err(Error::invalid(format!("thresholds need s ≥ 3, got {s}")));
    }
    let s64 = i64::from(s);
    let c_star = Rational::new(2 * s64 + 6, s64 + 8);
    let c_dagger = if s <= 4 { c_star } else { Rational::from_integer(2) };
    Ok(Thresholds { s, c_star, c_dagger })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Route {
    /// `s ∈ {3, 4}`: `χ = 2(1-1/c)/(t₀-2)` with `s-1 < t₀ < t < s`.
    SmallS,
    /// `s ≥ 5`: a restriction exponent `t ∈ (max(4, s-1), s)`.
    LargeS,
}

impl Route {
    pub fn name(self) -> &'static str {
        match self {
            Route::SmallS => "small-s",
            Route::LargeS => "large-s",
        }
    }
}

/// A witness `(χ, t₀, t)` for the exponent conditions at `(s, c)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdmissibleExponents {
    pub chi: f64,
    pub t0: f64,
    pub t: f64,
    pub route: Route,
}

/// `2/(5c) - 1/5`
fn chi_sup(c: f64) -> f64 {
    2.0 / (5.0 * c) - 0.2
}

/// `t₀ = 2 + 2(1-1/c)/χ`
fn t0_of(chi: f64, c: f64) -> f64 {
    2.0 + 2.0 * (1.0 - 1.0 / c) / chi
}

/// Canonical witness, or `None` when `c ≥ c†(s)`, `c ∉ (1, 2)` or `s < 3`.
///
/// The first choice is `χ = 0.9·χ_sup`. If its `t₀` leaves `(s-1, s)`, `t₀`
/// moves to the midpoint of the feasible interval and `χ` is solved back from it.
/// Then `t = (t₀ + s)/2`.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn admissible_exponents(s: u32, c: f64) -> Option<AdmissibleExponents> {
    if s < 3 || !(c > 1.0 && c < 2.0) {
        return None;
    }
    let sf = f64::from(s);
    let sup = chi_sup(c);
    if s >= 5 {
        let lo = 4f64.max(sf - 1.0);
        return Some(AdmissibleExponents { chi: 0.9 * sup, t0: 4.0, t: (lo + sf) / 2.0, route: Route::LargeS });
    }
    // infimum of t₀ over χ < χ_sup
    let t0_inf = t0_of(sup, c);
    let lo = t0_inf.max(sf - 1.0);
    if !(lo < sf) {
        return None;
    }
    let mut chi = 0.9 * sup;
    let mut t0 = t0_of(chi, c);
    if !(t0 > lo && t0 < sf) {
        t0 = (lo + sf) / 2.0;
        chi = 2.0 * (1.0 - 1.0 / c) / (t0 - 2.0);
    }
    if !(chi > 0.0 && chi < sup && t0 > sf - 1.0 && t0 < sf) {
        return None;
    }
    Some(AdmissibleExponents { chi, t0, t: (t0 + sf) / 2.0, route: Route::SmallS })
}
