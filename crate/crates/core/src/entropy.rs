//! The bosonic entropy function and Von Neumann entropy of Gaussian states.
//!
//! All logarithms are natural, so entropies are in nats.

use crate::error::{Error, Result};

/// How far below 1 an argument may stray before it is rejected rather than
/// clamped.
pub const ENTROPY_DOMAIN_TOL: f64 = 1e-9;

/// Entropy of a single-mode thermal state with symplectic eigenvalue `x`:
///
/// `f(x) = ((x+1)/2) ln((x+1)/2) - ((x-1)/2) ln((x-1)/2)`.
///
/// Evaluated as `ln(1+y) + y ln(1 + 1/y)` with `y = (x-1)/2`, which stays
/// accurate both at `x -> 1` and for very large `x` where the two terms of
/// the textbook form cancel.
pub fn entropy_f(x: f64) -> Result<f64> {
    if !(x >= 1.0 - ENTROPY_DOMAIN_TOL) {
        return Err(Error::EntropyDomain(x));
    }
    Ok(entropy_f_clamped(x))
}

/// [`entropy_f`] without the domain check; arguments below 1 are treated as 1.
pub fn entropy_f_clamped(x: f64) -> f64 {
    entropy_g(0.5 * (x - 1.0))
}

/// `f` in terms of the mean occupation `y = (x-1)/2`:
/// `g(y) = (y+1) ln(y+1) - y ln y`. Takes `y` directly so that callers
/// holding a tiny excess over the vacuum do not lose it to `1 + 2y`.
pub fn entropy_g(y: f64) -> f64 {
    if !(y > 0.0) {
        return 0.0;
    }
    if y.is_infinite() {
        return f64::INFINITY;
    }
    y.ln_1p() + y * (1.0 / y).ln_1p()
}

/// Von Neumann entropy `sum_i f(nu_i)` from a symplectic spectrum.
pub fn entropy_of_spectrum(spectrum: &[f64]) -> Result<f64> {
    spectrum.iter().map(|&nu| entropy_f(nu)).sum()
}
