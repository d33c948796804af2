use crate::fit::{check_scan_sizes, ExponentFit};
use crate::ps_core::{members, PSParams};
use crate::{Error, Result};

/// Memory policy for the sum histogram.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnergyOptions {
    /// Largest histogram allocation, in bytes.
    pub max_histogram_bytes: usize,
    /// Above the cap, sweep the sums in windows instead of failing.
    pub chunked_fallback: bool,
}

impl Default for EnergyOptions {
    fn default() -> Self {
        EnergyOptions { max_histogram_bytes: 1 << 30, chunked_fallback: true }
    }
}

/// `E_c(N) = #{(n₁,…,n₄) ∈ PS_c(N)⁴ : n₁ + n₂ = n₃ + n₄}`.
pub fn additive_energy(params: &PSParams) -> Result<u64> {
    additive_energy_of(&members(params)?, EnergyOptions::default())
}

/// Additive energy of a strictly increasing set of positive integers, as
/// `Σ_s r(s)²` with `r(s)` the number of ordered pairs summing to `s`.
pub fn additive_energy_of(set: &[u64], opts: EnergyOptions) -> Result<u64> {
    if set.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("set must be strictly increasing"));
    }
    let Some(&max) = set.last() else { return Ok(0) };
    let span = 2 * max as usize + 1;
    let bytes = span.saturating_mul(std::mem::size_of::<u32>());
    if bytes <= opts.max_histogram_bytes {
        return finish(energy_window(set, 0, span as u64));
    }
    if !opts.chunked_fallback {
        return Err(Error::Resource(format!(
            "sum histogram needs {bytes} bytes, cap is {}",
            opts.max_histogram_bytes
        )));
    }
    let window = (opts.max_histogram_bytes / std::mem::size_of::<u32>()) as u64;
    if window == 0 {
        return Err(Error::Resource("histogram cap below one entry".into()));
    }
    let mut total = 0u128;
    let mut lo = 0u64;
    while lo < span as u64 {
        let hi = (lo + window).min(span as u64);
        total += energy_window(set, lo, hi);
        lo = hi;
    }
    finish(total)
}

fn finish(total: u128) -> Result<u64> {
    u64::try_from(total).map_err(|_| Error::Range(format!("energy {total} exceeds u64")))
}

/// `Σ r(s)²` over sums `s ∈ [lo, hi)`.
fn energy_window(set: &[u64], lo: u64, hi: u64) -> u128 {
    let mut hist = vec![0u32; (hi - lo) as usize];
    for (i, &a) in set.iter().enumerate() {
        // partners b ≥ a with lo ≤ a + b < hi
        let from = set[i..].partition_point(|&b| a + b < lo) + i;
        for &b in &set[from..] {
            let s = a + b;
            if s >= hi {
                break;
            }
            hist[(s - lo) as usize] += if b == a { 1 } else { 2 };
        }
    }
    hist.iter().map(|&r| (r as u128) * (r as u128)).sum()
}

/// Exponent `4/c - 1` of the energy bound.
pub fn energy_target_slope(c: f64) -> f64 {
    4.0 / c - 1.0
}

#[derive(Clone, Debug)]
pub struct EnergyScan {
    pub c: f64,
    /// `(N, |PS_c(N)|, E_c(N))`
    pub samples: Vec<(u64, usize, u64)>,
    pub fit: ExponentFit,
    pub target_slope: f64,
}

pub fn energy_exponent_fit(c: f64, ns: &[u64]) -> Result<EnergyScan> {
    check_scan_sizes(ns)?;
    let base = PSParams::new(c, ns[0])?;
    base.require_analytic()?;
    let mut samples = Vec::with_capacity(ns.len());
    for &n in ns {
        let set = members(&base.with_n(n)?)?;
        let e = additive_energy_of(&set, EnergyOptions::default())?;
        samples.push((n, set.len(), e));
    }
    let points: Vec<(f64, f64)> = samples.iter().map(|&(n, _, e)| (n as f64, e as f64)).collect();
    let fit = ExponentFit::from_samples(&points)?;
    Ok(EnergyScan { c, samples, fit, target_slope: energy_target_slope(c) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(set: &[u64]) -> u64 {
        let mut e = 0;
        for &a in set {
            for &b in set {
                for &c in set {
                    for &d in set {
                        if a + b == c + d {
                            e += 1;
                        }
                    }
                }
            }
        }
        e
    }

    #[test]
    fn examples() {
        let o = EnergyOptions::default();
        assert_eq!(additive_energy_of(&[1], o).unwrap(), 1);
        assert_eq!(additive_energy_of(&[1, 2], o).unwrap(), 6);
        assert_eq!(brute(&[1, 2, 5, 8, 11]), 61);
        assert_eq!(additive_energy(&PSParams::new(1.5, 11).unwrap()).unwrap(), 61);
        assert_eq!(additive_energy_of(&[], o).unwrap(), 0);
        assert!(additive_energy_of(&[2, 1], o).is_err());
    }

    #[test]
    fn windowed_sweep_matches_histogram() {
        let set = members(&PSParams::new(1.3, 5000).unwrap()).unwrap();
        let full = additive_energy_of(&set, EnergyOptions::default()).unwrap();
        let tight = EnergyOptions { max_histogram_bytes: 4 * 777, chunked_fallback: true };
        assert_eq!(additive_energy_of(&set, tight).unwrap(), full);
        let strict = EnergyOptions { max_histogram_bytes: 4 * 777, chunked_fallback: false };
        assert!(matches!(additive_energy_of(&set, strict), Err(Error::Resource(_))));
        let zero = EnergyOptions { max_histogram_bytes: 0, chunked_fallback: true };
        assert!(matches!(additive_energy_of(&set, zero), Err(Error::Resource(_))));
    }

    #[test]
    fn target_slopes() {
        assert!((energy_target_slope(1.5) - 1.666_666_666_7).abs() < 1e-9);
        assert!((energy_target_slope(1.05) - 2.809_523_8).abs() < 1e-6);
    }
}
