//! Piatetski-Shapiro sets `{⌊m^c⌋ : m ≥ 1}` and the analytic quantities used to
//! study linear equations over them: the weight `ν(n) = c·n^{1-1/c}` on members,
//! Fourier transforms on exact rational grids, moments, large spectra, additive
//! energy, saw-tooth and dyadic exponential-sum decompositions, and exact
//! solution counts for `c₁x₁ + … + c_sx_s = 0`.
//!
//! Most numeric routines are generic over the scalar type through [`Real`];
//! the aliases below fix the common `f64` instantiations.

pub mod equations;
mod error;
pub mod experiments;
pub mod expsums;
pub mod fit;
mod numeric;
pub mod ps_core;
mod scalar;
pub mod spectral;

pub use error::{Error, Result, Violation};
pub use fit::ExponentFit;
pub use ps_core::{Exponent, PSParams, WeightedIndicator};
pub use scalar::Real;
pub use spectral::FrequencyGrid;

/// Complex value in double precision.
pub type Complex64 = num_complex::Complex<f64>;

/// Weighted indicator with `f64` weights, the default for every experiment.
pub type Weights = WeightedIndicator<f64>;

/// Weighted indicator with `f32` weights.
pub type Weights32 = WeightedIndicator<f32>;

/// Exact rational used for the exponent thresholds.
pub type Rational = num_rational::Ratio<i64>;
