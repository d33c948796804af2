use crate::{Error, Real, Result, WeightedIndicator};

use super::{transform_grid, FrequencyGrid};

/// Magnitudes `|f̂(j/M)|` kept for repeated level-set queries.
#[derive(Clone, Debug)]
pub struct SpectrumSample {
    magnitudes: Vec<f64>,
    cap: u64,
}

impl SpectrumSample {
    pub fn new<T: Real>(f: &WeightedIndicator<T>, grid: &FrequencyGrid) -> Result<Self> {
        let magnitudes = transform_grid(f, grid)?.iter().map(|v| v.norm().to_f64_lossy()).collect();
        Ok(SpectrumSample { magnitudes, cap: f.cap() })
    }

    /// Fraction of grid points with `|f̂| > δN`.
    pub fn measure(&self, delta: f64) -> Result<f64> {
        check_delta(delta)?;
        let threshold = delta * self.cap as f64;
        let hits = self.magnitudes.iter().filter(|&&v| v > threshold).count();
        Ok(hits as f64 / self.magnitudes.len() as f64)
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::invalid(format!("δ must lie in (0, 1], got {delta}")));
    }
    Ok(())
}

/// Grid estimate of `meas{α : |f̂(α)| > δN}`.
pub fn large_spectrum_measure<T: Real>(f: &WeightedIndicator<T>, delta: f64, grid: &FrequencyGrid) -> Result<f64> {
    check_delta(delta)?;
    SpectrumSample::new(f, grid)?.measure(delta)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RestrictionRow {
    pub delta: f64,
    pub measure: f64,
    /// `measure · δ^t · N`; bounded in δ when the level-set estimate holds.
    pub scaled: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RestrictionProfile {
    pub t: f64,
    pub rows: Vec<RestrictionRow>,
    /// Largest value of the scaled column.
    pub fitted_c: f64,
}

/// Tabulates `meas(R_δ)·δ^t·N` across `deltas` to test `meas(R_δ) ≤ C·δ^{-t}/N`.
pub fn restriction_profile<T: Real>(
    f: &WeightedIndicator<T>,
    t: f64,
    deltas: &[f64],
    grid: &FrequencyGrid,
) -> Result<RestrictionProfile> {
    if deltas.len() < 4 {
        return Err(Error::invalid(format!("need at least 4 values of δ, got {}", deltas.len())));
    }
    for &d in deltas {
        check_delta(d)?;
    }
    let sample = SpectrumSample::new(f, grid)?;
    let n = f.cap() as f64;
    let rows = deltas
        .iter()
        .map(|&delta| {
            let measure = sample.measure(delta)?;
            Ok(RestrictionRow { delta, measure, scaled: measure * delta.powf(t) * n })
        })
        .collect::<Result<Vec<_>>>()?;
    let fitted_c = rows.iter().map(|r| r.scaled).fold(0.0, f64::max);
    Ok(RestrictionProfile { t, rows, fitted_c })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ps_core::{nu_vector, PSParams};
    use crate::spectral::transform_at;

    #[test]
    fn measure_examples() {
        let nu = nu_vector::<f64>(&PSParams::new(1.5, 12).unwrap()).unwrap();
        let grid = FrequencyGrid::oversampled(12, 4).unwrap();
        // δN above ‖ν‖₁: empty level set
        assert_eq!(large_spectrum_measure(&nu, 1.0 - 1e-12, &grid).unwrap(), 1.0 / 52.0);
        let big = WeightedIndicator::<f64>::indicator(&[1, 2, 3], 3).unwrap();
        let g3 = FrequencyGrid::oversampled(3, 4).unwrap();
        assert_eq!(large_spectrum_measure(&big, 1.0, &g3).unwrap(), 0.0);
        // small δ keeps α = 0
        assert!(large_spectrum_measure(&nu, 1e-9, &grid).unwrap() >= 1.0 / 52.0);

        // brute-force count at δ = 1/2 with pointwise evaluation
        let hits = (0..52).filter(|&j| transform_at(&nu, j as f64 / 52.0).norm() > 6.0).count();
        let got = large_spectrum_measure(&nu, 0.5, &grid).unwrap();
        assert_eq!(got, hits as f64 / 52.0);
        assert!(large_spectrum_measure(&nu, 0.0, &grid).is_err());
        assert!(large_spectrum_measure(&nu, 1.5, &grid).is_err());
    }

    #[test]
    fn profile_consistency_and_chebyshev() {
        let params = PSParams::new(1.5, 2000).unwrap();
        let nu = nu_vector::<f64>(&params).unwrap();
        let grid = FrequencyGrid::oversampled(2000, 4).unwrap();
        let deltas = [0.02, 0.05, 0.1, 0.2, 0.5, 1.0];
        let prof = restriction_profile(&nu, 2.0, &deltas, &grid).unwrap();
        let sum_sq = nu.sum_of_squares();
        for row in &prof.rows {
            assert_eq!(row.measure, large_spectrum_measure(&nu, row.delta, &grid).unwrap());
            // grid Parseval plus Chebyshev
            assert!(row.scaled <= sum_sq / 2000.0 * (1.0 + 1e-9));
        }
        assert!(prof.fitted_c >= prof.rows[0].scaled);
        assert!(restriction_profile(&nu, 2.0, &deltas[..3], &grid).is_err());
    }
}
