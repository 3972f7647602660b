//! Named two-mode state families and the three-party eavesdropping
//! scenario built from two-mode squeezed states and a beam splitter.

use serde::{Deserialize, Serialize};

use crate::cm::CovarianceMatrix;
use crate::discord::{discord, Direction};
use crate::entanglement::{geof_three_mode_duality, GeofResult};
use crate::error::{Error, Result};
use crate::symplectic::{beam_splitter, symplectic_eigenvalues};
use crate::two_mode::{SymplecticInvariants, TwoModeStandardForm};

fn domain(ok: bool, what: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Domain(what()))
    }
}

fn finite(params: &[(&str, f64)]) -> Result<()> {
    for (name, v) in params {
        domain(v.is_finite(), || format!("{name} = {v} is not finite"))?;
    }
    Ok(())
}

/// Two-mode squeezed vacuum: `a = b = cosh 2s`, `c = −d = sinh 2s`.
pub fn two_mode_squeezed_sf(s: f64) -> Result<TwoModeStandardForm> {
    finite(&[("s", s)])?;
    domain(s >= 0.0, || format!("squeezing s = {s} must be >= 0"))?;
    let (a, c) = ((2.0 * s).cosh(), (2.0 * s).sinh());
    TwoModeStandardForm::new(a, a, c, -c)
}

pub fn two_mode_squeezed(s: f64) -> Result<CovarianceMatrix> {
    Ok(two_mode_squeezed_sf(s)?.to_cm())
}

/// Squeezed thermal state `a = cosh 2s`, `b = cosh² r cosh 2s + sinh² r`,
/// `c = −d = cosh r sinh 2s`; `r = 0` is the two-mode squeezed vacuum.
pub fn squeezed_thermal_sf(r: f64, s: f64) -> Result<TwoModeStandardForm> {
    finite(&[("r", r), ("s", s)])?;
    domain(r >= 0.0, || format!("r = {r} must be >= 0"))?;
    domain(s >= 0.0, || format!("s = {s} must be >= 0"))?;
    let (ch, sh) = (r.cosh(), r.sinh());
    let a = (2.0 * s).cosh();
    let b = ch * ch * a + sh * sh;
    let c = ch * (2.0 * s).sinh();
    TwoModeStandardForm::new(a, b, c, -c)
}

pub fn squeezed_thermal(r: f64, s: f64) -> Result<CovarianceMatrix> {
    Ok(squeezed_thermal_sf(r, s)?.to_cm())
}

/// States with `A = D = a²`, `B = b²`, `C = (1 − B)/2`, for
/// `1 ≤ b ≤ 2a − 1`. One normal mode is the vacuum (`ν₋ = 1`).
pub fn family_eq5_sf(a: f64, b: f64) -> Result<TwoModeStandardForm> {
    finite(&[("a", a), ("b", b)])?;
    domain(b >= 1.0, || format!("b = {b} violates 1 <= b"))?;
    domain(b <= 2.0 * a - 1.0, || format!("b = {b} violates b <= 2a - 1 = {}", 2.0 * a - 1.0))?;
    let (big_a, big_b) = (a * a, b * b);
    let inv = SymplecticInvariants::from_determinants(big_a, big_b, 0.5 * (1.0 - big_b), big_a);
    let sf = TwoModeStandardForm::from_invariants(&inv)?;
    TwoModeStandardForm::new(a, b, sf.c, sf.d)
}

pub fn family_eq5(a: f64, b: f64) -> Result<CovarianceMatrix> {
    Ok(family_eq5_sf(a, b)?.to_cm())
}

/// Separable squeezed thermal state with the largest correlation
/// determinant at given `a, b`: `C = cd = 1 + ab − a − b`, `c = d`.
pub fn separable_extremal_sf(a: f64, b: f64) -> Result<TwoModeStandardForm> {
    finite(&[("a", a), ("b", b)])?;
    domain(a >= 1.0, || format!("a = {a} violates a >= 1"))?;
    domain(b >= 1.0, || format!("b = {b} violates b >= 1"))?;
    let c = ((a - 1.0) * (b - 1.0)).sqrt();
    TwoModeStandardForm::new(a, b, c, c)
}

pub fn separable_extremal(a: f64, b: f64) -> Result<CovarianceMatrix> {
    Ok(separable_extremal_sf(a, b)?.to_cm())
}

/// Product of thermal states with symplectic eigenvalues `n1, n2 ≥ 1`.
pub fn product_thermal(n1: f64, n2: f64) -> Result<CovarianceMatrix> {
    finite(&[("n1", n1), ("n2", n2)])?;
    domain(n1 >= 1.0 && n2 >= 1.0, || format!("thermal eigenvalues ({n1}, {n2}) must be >= 1"))?;
    Ok(CovarianceMatrix::thermal(&[n1, n2]))
}

/// Eavesdropping scenario on modes `(A, B, S, T)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioResult {
    pub s: f64,
    pub n: f64,
    pub t: f64,
    pub sigma_abst: CovarianceMatrix,
    /// Modes `(A, S, T)`.
    pub sigma_ast: CovarianceMatrix,
    pub sigma_ab: CovarianceMatrix,
    pub spectrum_ast: Vec<f64>,
    pub geof_a_st: GeofResult,
    pub discord_ab_left: f64,
}

/// Largest deviation from 1 of the symplectic spectrum accepted for the
/// global four-mode state.
pub const SCENARIO_PURITY_TOL: f64 = 1e-8;

/// Sally and Tom share a two-mode squeezed state with `a = b = s` on
/// `(S, T)`; Eve holds one with `a = b = n` on `(A, B)` and mixes `A` into
/// `S` on a beam splitter of transmittivity `t`.
pub fn eavesdrop_scenario(s: f64, n: f64, t: f64) -> Result<ScenarioResult> {
    finite(&[("s", s), ("n", n), ("t", t)])?;
    domain(s >= 1.0, || format!("s = {s} violates s >= 1"))?;
    domain(n >= 1.0, || format!("n = {n} violates n >= 1"))?;
    domain((0.0..=1.0).contains(&t), || format!("t = {t} violates 0 <= t <= 1"))?;
    let tms = |x: f64| {
        let c = (x * x - 1.0).sqrt();
        TwoModeStandardForm { a: x, b: x, c, d: -c }.to_cm()
    };
    let input = tms(n).direct_sum(&tms(s));
    let bs = beam_splitter(t, 0, 2, 4)?;
    let sigma_abst = input.transform_unchecked(&bs);
    let spectrum = symplectic_eigenvalues(&sigma_abst)?;
    let worst = spectrum.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
    // the rounded entries perturb the spectrum by about ε‖σ‖², which
    // dominates the fixed tolerance once s, n reach ~10⁴
    let tol = SCENARIO_PURITY_TOL.max(16.0 * f64::EPSILON * sigma_abst.matrix().amax().powi(2));
    if worst > tol {
        return Err(Error::Inconsistent(format!("four-mode state not pure: spectrum {spectrum:?}")));
    }
    let sigma_ast = sigma_abst.partial_trace(&[0, 2, 3])?;
    let sigma_ab = sigma_abst.partial_trace(&[0, 1])?;
    let spectrum_ast = symplectic_eigenvalues(&sigma_ast)?;
    let geof_a_st = geof_three_mode_duality(&sigma_ast)?;
    let discord_ab_left = discord(&sigma_ab, Direction::Left)?;
    Ok(ScenarioResult { s, n, t, sigma_abst, sigma_ast, sigma_ab, spectrum_ast, geof_a_st, discord_ab_left })
}
