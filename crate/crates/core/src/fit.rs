//! Least-squares power-law fits in log-log coordinates.

use crate::{Error, Result};

/// `ln y ≈ slope·ln x + intercept`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// `(ln x, ln y)` pairs the fit was computed from.
    pub points: Vec<(f64, f64)>,
}

impl ExponentFit {
    /// Fit `y ≈ C·x^slope` through positive samples.
    pub fn from_samples(samples: &[(f64, f64)]) -> Result<Self> {
        if samples.len() < 3 {
            return Err(Error::DegenerateFit(format!("need at least 3 points, got {}", samples.len())));
        }
        let mut points = Vec::with_capacity(samples.len());
        for &(x, y) in samples {
            if !(x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite()) {
                return Err(Error::DegenerateFit(format!("sample ({x}, {y}) is not positive and finite")));
            }
            points.push((x.ln(), y.ln()));
        }
        let n = points.len() as f64;
        let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
        let my = points.iter().map(|p| p.1).sum::<f64>() / n;
        let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
        if sxx <= 1e-24 * (1.0 + mx * mx) {
            return Err(Error::DegenerateFit("all x values coincide".into()));
        }
        let slope = sxy / sxx;
        let intercept = my - slope * mx;
        let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0) };
        Ok(ExponentFit { slope, intercept, r_squared, points })
    }

    /// Value of the fitted power law at `x`.
    pub fn predict(&self, x: f64) -> f64 {
        (self.intercept + self.slope * x.ln()).exp()
    }
}

/// Checks shared by the scan fits: at least four distinct sizes covering two octaves.
pub(crate) fn check_scan_sizes(ns: &[u64]) -> Result<()> {
    if ns.len() < 4 {
        return Err(Error::DegenerateFit(format!("need at least 4 values of N, got {}", ns.len())));
    }
    let mut sorted = ns.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != ns.len() {
        return Err(Error::DegenerateFit("values of N must be distinct".into()));
    }
    let (lo, hi) = (sorted[0] as f64, *sorted.last().unwrap() as f64);
    if hi < 4.0 * lo {
        return Err(Error::DegenerateFit(format!("N range {lo}..{hi} spans less than two octaves")));
    }
    Ok(())
}
