//! Gaussian quantum discord and one-way classical correlations of two-mode
//! states.
//!
//! A pure single-mode Gaussian measurement on mode B with seed covariance
//! `σ₀ = R(θ) diag(λ, 1/λ) R(θ)ᵀ` leaves mode A with covariance
//! `ε = α − γ (β + σ₀)⁻¹ γᵀ`, independent of the outcome. The discord and
//! classical correlations follow from the infimum of `det ε`, which has a
//! closed form in the local invariants ([`emin_closed`]). [`emin_numeric`]
//! is an independent brute-force minimizer over `(λ, θ)` used to check it.

use std::f64::consts::PI;

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::cm::CovarianceMatrix;
use crate::entropy::entropy_f_clamped as f;
use crate::error::{Error, Result};
use crate::optimize::{golden_section, nelder_mead, NelderMeadOptions};
use crate::symplectic::rotation;
use crate::two_mode::{standard_form, SymplecticInvariants, TwoModeStandardForm};

/// Relative slack under which the two cases of the closed form are treated
/// as tied.
pub const BRANCH_TIE_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasurementKind {
    Heterodyne,
    HomodyneX,
    HomodyneP,
    General,
}

/// Pure single-mode Gaussian POVM seed. Homodyne measurements are the
/// `λ → 0` limit and are carried symbolically (`lambda` is 0 and `theta`
/// selects the measured quadrature).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementSpec {
    pub lambda: f64,
    pub theta: f64,
    pub kind: MeasurementKind,
}

impl MeasurementSpec {
    /// Finite squeezing `λ > 0` at angle `θ` (reduced to `[0, π)`).
    pub fn general(lambda: f64, theta: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::Domain(format!("measurement squeezing {lambda} must be positive")));
        }
        let kind = if lambda == 1.0 { MeasurementKind::Heterodyne } else { MeasurementKind::General };
        let theta = if kind == MeasurementKind::Heterodyne { 0.0 } else { theta.rem_euclid(PI) };
        Ok(Self { lambda, theta, kind })
    }

    pub fn heterodyne() -> Self {
        Self { lambda: 1.0, theta: 0.0, kind: MeasurementKind::Heterodyne }
    }

    pub fn homodyne_x() -> Self {
        Self { lambda: 0.0, theta: 0.0, kind: MeasurementKind::HomodyneX }
    }

    pub fn homodyne_p() -> Self {
        Self { lambda: 0.0, theta: PI / 2.0, kind: MeasurementKind::HomodyneP }
    }

    /// `σ₀`, or `None` for the infinitely squeezed homodyne limit.
    pub fn seed_cm(&self) -> Option<Matrix2<f64>> {
        match self.kind {
            MeasurementKind::HomodyneX | MeasurementKind::HomodyneP => None,
            _ => {
                let r = rotation(self.theta);
                Some(r * Matrix2::new(self.lambda, 0.0, 0.0, 1.0 / self.lambda) * r.transpose())
            }
        }
    }

    /// `det ε` obtained with this measurement on mode B.
    pub fn conditional_det(&self, sf: &TwoModeStandardForm) -> f64 {
        match self.kind {
            MeasurementKind::HomodyneX | MeasurementKind::HomodyneP => homodyne_limit(sf, self.theta),
            _ => conditional_det_matrix(sf, self.lambda, self.theta),
        }
    }
}

/// Which case of the closed-form infimum applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EminCase {
    /// Interior stationary point (finite squeezing, including heterodyne).
    GeneralCase,
    /// Boundary `λ → 0`: homodyne detection is optimal.
    HomodyneCase,
}

/// Which mode is measured.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// `←`: measure B, condition A.
    Left,
    /// `→`: measure A, condition B.
    Right,
}

/// `E(λ, θ) = det ε` as a rational function of the standard-form
/// parameters.
pub fn conditional_det(sf: &TwoModeStandardForm, lambda: f64, theta: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::Domain(format!("measurement squeezing {lambda} must be positive")));
    }
    let TwoModeStandardForm { a, b, c, d } = *sf;
    let (c2, d2) = (c * c, d * d);
    let den = 2.0 * (b + lambda) * (1.0 + b * lambda);
    let num = 2.0 * a * a * (b + lambda) * (1.0 + b * lambda)
        - a * (c2 + d2) * (2.0 * b * lambda + lambda * lambda + 1.0)
        + a * (c2 - d2) * (lambda * lambda - 1.0) * (2.0 * theta).cos()
        + 2.0 * c2 * d2 * lambda;
    if !(den > 0.0) {
        return Err(Error::Inconsistent("singular beta + sigma_0".into()));
    }
    Ok(num / den)
}

/// `det(α − γ (β + σ₀)⁻¹ γᵀ)` evaluated with 2x2 matrices. Since `β = bI`
/// commutes with rotations, `(β + σ₀)⁻¹ = R diag(1/(b+λ), λ/(1+bλ)) Rᵀ`,
/// which stays finite for any `λ > 0`.
pub fn conditional_det_matrix(sf: &TwoModeStandardForm, lambda: f64, theta: f64) -> f64 {
    let r = rotation(theta);
    let inv = r * Matrix2::new(1.0 / (sf.b + lambda), 0.0, 0.0, lambda / (1.0 + sf.b * lambda)) * r.transpose();
    let gamma = Matrix2::new(sf.c, 0.0, 0.0, sf.d);
    let eps = Matrix2::identity() * sf.a - gamma * inv * gamma.transpose();
    eps.determinant()
}

/// Conditional covariance `ε = α − γ (β + σ₀)⁻¹ γᵀ` for arbitrary blocks.
pub fn conditional_cm(
    alpha: &Matrix2<f64>,
    beta: &Matrix2<f64>,
    gamma: &Matrix2<f64>,
    sigma0: &Matrix2<f64>,
) -> Result<Matrix2<f64>> {
    let inv = (beta + sigma0)
        .try_inverse()
        .ok_or_else(|| Error::Inconsistent("singular beta + sigma_0".into()))?;
    Ok(alpha - gamma * inv * gamma.transpose())
}

/// `lim_{λ→0} E(λ, θ) = a − (c² + d² + (c² − d²) cos 2θ)/(2b)`, times `a`.
pub fn homodyne_limit(sf: &TwoModeStandardForm, theta: f64) -> f64 {
    let TwoModeStandardForm { a, b, c, d } = *sf;
    let (c2, d2) = (c * c, d * d);
    a * (2.0 * a * b - (c2 + d2) - (c2 - d2) * (2.0 * theta).cos()) / (2.0 * b)
}

/// Positive root of `∂_λ E(λ, 0) = 0`, when it exists.
pub fn lambda2(sf: &TwoModeStandardForm) -> Option<f64> {
    let TwoModeStandardForm { a, b, c, d } = *sf;
    let (c2, d2) = (c * c, d * d);
    let den = a * b * b * c2 - (a + b * c2) * d2;
    let rad = (a - a * b * b + b * c2) * (a - a * b * b + b * d2);
    if den.abs() < 1e-12 || rad < 0.0 {
        return None;
    }
    let l = (a * b * (d2 - c2) + c * d.abs() * rad.sqrt()) / den;
    (l > 0.0 && l.is_finite()).then_some(l)
}

/// Closed-form infimum of `det ε` over Gaussian measurements on B.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Emin {
    pub value: f64,
    pub case: EminCase,
    /// Optimal measurement, in the frame of the standard form.
    pub measurement: MeasurementSpec,
}

/// Both case expressions of the closed-form infimum, evaluated literally in
/// the invariants; the first is `None` when `B = 1`, where it is undefined.
/// [`emin_closed`] uses algebraically identical factored forms instead.
#[allow(non_snake_case)]
pub fn emin_branches(inv: &SymplecticInvariants) -> (Option<f64>, f64) {
    let (A, B, C, D) = (inv.det_alpha, inv.det_beta, inv.det_gamma, inv.det_sigma);
    let c2 = C * C;
    let first = (B - 1.0 > 1e-9).then(|| {
        let x = (B - 1.0) * (D - A);
        let inner = (c2 + x).max(0.0);
        (2.0 * c2 + x + 2.0 * C.abs() * inner.sqrt()) / ((B - 1.0) * (B - 1.0))
    });
    let disc = (c2 * c2 + (D - A * B).powi(2) - 2.0 * c2 * (A * B + D)).max(0.0);
    let second = (A * B - c2 + D - disc.sqrt()) / (2.0 * B);
    (first, second)
}

// In standard-form parameters the radicands factor:
//   C² + (B − 1)(D − A)          = (a(b² − 1) − bc²)(a(b² − 1) − bd²)
//   C⁴ + (D − AB)² − 2C²(AB + D) = (ab(c² − d²))²
//   (1 + B)C²(A + D) − (D − AB)² = (ab²c² − ad² − bc²d²)(ab²d² − ac² − bc²d²)
// so the second case is exactly a(ab − c²)/b = E(0, 0), and none of the
// square roots amplifies rounding near pure or squeezed thermal states.
#[allow(non_snake_case)]
struct Branches {
    first: Option<f64>,
    second: f64,
    /// `(1 + B)C²(A + D) − (D − AB)²`; the first case holds when `≥ 0`.
    condition: f64,
    scale: f64,
}

#[allow(non_snake_case)]
fn factored_branches(sf: &TwoModeStandardForm, inv: &SymplecticInvariants) -> Branches {
    let TwoModeStandardForm { a, b, c, d } = *sf;
    let (A, B, C, D) = (inv.det_alpha, inv.det_beta, inv.det_gamma, inv.det_sigma);
    let (c2, d2) = (c * c, d * d);
    let first = (B - 1.0 > 1e-9).then(|| {
        let base = a * (b * b - 1.0);
        let inner = ((base - b * c2) * (base - b * d2)).max(0.0);
        let x = (B - 1.0) * (D - A);
        (2.0 * C * C + x + 2.0 * C.abs() * inner.sqrt()) / ((B - 1.0) * (B - 1.0))
    });
    let second = a * (a * b - c2) / b;
    let bcd = b * c2 * d2;
    let condition = (a * b * b * c2 - a * d2 - bcd) * (a * b * b * d2 - a * c2 - bcd);
    let scale = (D - A * B).powi(2).max((1.0 + B) * C * C * (A + D));
    Branches { first, second, condition, scale }
}

/// Infimum of `det ε` over all pure Gaussian measurements on mode B, and
/// the measurement attaining it.
pub fn emin_closed(inv: &SymplecticInvariants) -> Result<Emin> {
    inv.require_physical()?;
    emin_standard_form(&TwoModeStandardForm::from_invariants(inv)?)
}

/// [`emin_closed`] for a state given in standard form; avoids recovering
/// `c, d` from the invariants, which loses accuracy when `|c| ≈ |d|`.
pub fn emin_standard_form(sf: &TwoModeStandardForm) -> Result<Emin> {
    let inv = sf.invariants();
    inv.require_physical()?;
    let br = factored_branches(sf, &inv);
    let tied = br.scale == 0.0 || br.condition.abs() <= BRANCH_TIE_TOL * br.scale;
    let pick_first = match br.first {
        None => false,
        Some(v) if tied => v <= br.second * (1.0 + BRANCH_TIE_TOL),
        Some(_) => br.condition >= 0.0,
    };
    // conditioning a pure state with a pure measurement leaves a pure state
    let pure = inv.is_pure();
    if pick_first {
        let value = if pure { 1.0 } else { br.first.unwrap_or(br.second) };
        let measurement = optimal_general_measurement(sf, value);
        Ok(Emin { value, case: EminCase::GeneralCase, measurement })
    } else {
        let value = if pure { 1.0 } else { br.second };
        Ok(Emin { value, case: EminCase::HomodyneCase, measurement: MeasurementSpec::homodyne_x() })
    }
}

// λ₂ when it reproduces the closed value, otherwise a 1-D search along θ = 0.
fn optimal_general_measurement(sf: &TwoModeStandardForm, value: f64) -> MeasurementSpec {
    let tol = 1e-9 * value.abs().max(1.0);
    let mut lambda = lambda2(sf).filter(|&l| (conditional_det_matrix(sf, l, 0.0) - value).abs() <= tol);
    if lambda.is_none() {
        let (t, _) = golden_section(|t| conditional_det_matrix(sf, t.exp(), 0.0), -40.0, 40.0, 1e-10);
        lambda = Some(t.exp());
    }
    let lambda = lambda.unwrap_or(1.0);
    if (lambda.ln()).abs() < 1e-6 {
        MeasurementSpec::heterodyne()
    } else {
        MeasurementSpec { lambda, theta: 0.0, kind: MeasurementKind::General }
    }
}

/// Grid and polish settings for [`emin_numeric`].
#[derive(Clone, Copy, Debug)]
pub struct EminNumericOptions {
    /// Log-spaced `λ` samples in `[lambda_min, 1]`; `λ > 1` is covered by
    /// `E(λ, θ) = E(1/λ, θ + π/2)`.
    pub lambda_points: usize,
    pub lambda_min: f64,
    pub theta_points: usize,
    pub polish: NelderMeadOptions,
}

impl Default for EminNumericOptions {
    fn default() -> Self {
        Self {
            lambda_points: 128,
            lambda_min: 1e-6,
            theta_points: 128,
            polish: NelderMeadOptions { ftol: 1e-12, xtol: 1e-9, max_evals: 4000, restarts: 1 },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EminNumeric {
    pub value: f64,
    pub lambda: f64,
    pub theta: f64,
    pub converged: bool,
    pub evaluations: usize,
}

// ln λ is clamped here; E(e^{-60}, θ) equals the homodyne limit to rounding.
const LOG_LAMBDA_BOUND: f64 = 60.0;

/// Brute-force minimum of `E(λ, θ)`: a log-spaced grid followed by a simplex
/// polish in `(ln λ, θ)`. Shares no code with the closed form.
pub fn emin_numeric(sf: &TwoModeStandardForm, opts: &EminNumericOptions) -> EminNumeric {
    let eval = |t: f64, theta: f64| conditional_det_matrix(sf, t.clamp(-LOG_LAMBDA_BOUND, LOG_LAMBDA_BOUND).exp(), theta);
    let nl = opts.lambda_points.max(2);
    let nt = opts.theta_points.max(1);
    let t_min = opts.lambda_min.ln();
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 0..nl {
        let t = t_min * (1.0 - i as f64 / (nl - 1) as f64);
        for j in 0..nt {
            let theta = PI * j as f64 / nt as f64;
            let v = eval(t, theta);
            if v < best.0 {
                best = (v, t, theta);
            }
        }
    }
    let m = nelder_mead(|x| eval(x[0], x[1]), &[best.1, best.2], &[0.5, 0.2], opts.polish);
    let evaluations = nl * nt + m.evals;
    let (value, t, theta) = if m.f < best.0 { (m.f, m.x[0], m.x[1]) } else { best };
    EminNumeric {
        value,
        lambda: t.clamp(-LOG_LAMBDA_BOUND, LOG_LAMBDA_BOUND).exp(),
        theta: theta.rem_euclid(PI),
        converged: m.converged,
        evaluations,
    }
}

/// All correlation quantities of a two-mode state, in nats.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub mutual_information: f64,
    pub j_left: f64,
    pub j_right: f64,
    pub d_left: f64,
    pub d_right: f64,
    pub emin_left: f64,
    pub emin_right: f64,
    pub meas_left: MeasurementSpec,
    pub meas_right: MeasurementSpec,
    pub case_left: EminCase,
    pub case_right: EminCase,
}

/// One-way quantities for measurements on B.
#[derive(Clone, Copy, Debug)]
pub struct OneWay {
    pub emin: Emin,
    pub classical: f64,
    pub discord: f64,
    pub mutual_information: f64,
}

/// `D← = f(√B) − f(ν₋) − f(ν₊) + f(√E_min)`, `J← = f(√A) − f(√E_min)`.
pub fn one_way(sf: &TwoModeStandardForm) -> Result<OneWay> {
    let inv = sf.invariants();
    let emin = emin_standard_form(sf)?;
    let cond = f(emin.value.sqrt());
    let (sa, sb) = (f(sf.a), f(sf.b));
    let global = f(inv.nu_minus) + f(inv.nu_plus);
    Ok(OneWay {
        emin,
        classical: sa - cond,
        discord: sb - global + cond,
        mutual_information: sa + sb - global,
    })
}

fn directed(sf: TwoModeStandardForm, direction: Direction) -> TwoModeStandardForm {
    match direction {
        Direction::Left => sf,
        Direction::Right => sf.swapped(),
    }
}

/// Gaussian quantum discord of a physical two-mode state.
pub fn discord(cm: &CovarianceMatrix, direction: Direction) -> Result<f64> {
    Ok(one_way(&directed(standard_form(cm)?, direction))?.discord)
}

/// One-way classical correlations of a physical two-mode state.
pub fn classical_correlations(cm: &CovarianceMatrix, direction: Direction) -> Result<f64> {
    Ok(one_way(&directed(standard_form(cm)?, direction))?.classical)
}

/// `I = S(A) + S(B) − S(AB)`.
pub fn mutual_information(cm: &CovarianceMatrix) -> Result<f64> {
    Ok(one_way(&standard_form(cm)?)?.mutual_information)
}

pub fn full_report(cm: &CovarianceMatrix) -> Result<CorrelationReport> {
    report_standard_form(&standard_form(cm)?)
}

/// [`full_report`] from the invariants alone.
pub fn report_from_invariants(inv: &SymplecticInvariants) -> Result<CorrelationReport> {
    inv.require_physical()?;
    report_standard_form(&TwoModeStandardForm::from_invariants(inv)?)
}

/// [`full_report`] for a state already in standard form.
pub fn report_standard_form(sf: &TwoModeStandardForm) -> Result<CorrelationReport> {
    let left = one_way(sf)?;
    let right = one_way(&sf.swapped())?;
    Ok(CorrelationReport {
        mutual_information: left.mutual_information,
        j_left: left.classical,
        j_right: right.classical,
        d_left: left.discord,
        d_right: right.discord,
        emin_left: left.emin.value,
        emin_right: right.emin.value,
        meas_left: left.emin.measurement,
        meas_right: right.emin.measurement,
        case_left: left.emin.case,
        case_right: right.emin.case,
    })
}

/// Product states are the only two-mode Gaussian states with zero discord;
/// this tests `‖γ‖∞ < tol`.
pub fn is_zero_discord(cm: &CovarianceMatrix, tol: f64) -> Result<bool> {
    if cm.n_modes() != 2 {
        return Err(Error::ModeCount { expected: 2, got: cm.n_modes() });
    }
    Ok(cm.block(0, 1).amax() < tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_sf<R: Rng>(rng: &mut R) -> TwoModeStandardForm {
        loop {
            let a: f64 = rng.random_range(1.0..10.0);
            let b = rng.random_range(1.0..10.0);
            let lim = (a * b).sqrt();
            if let Ok(sf) = TwoModeStandardForm::normalized(a, b, rng.random_range(-lim..lim), rng.random_range(-lim..lim)) {
                return sf;
            }
        }
    }

    fn tms(s: f64) -> TwoModeStandardForm {
        let (a, c) = ((2.0 * s).cosh(), (2.0 * s).sinh());
        TwoModeStandardForm { a, b: a, c, d: -c }
    }

    #[test]
    fn rational_and_matrix_routes_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..2000 {
            let sf = random_sf(&mut rng);
            let lambda = 10f64.powf(rng.random_range(-4.0..4.0));
            let theta = rng.random_range(0.0..PI);
            let p = conditional_det(&sf, lambda, theta).unwrap();
            let m = conditional_det_matrix(&sf, lambda, theta);
            assert!((p - m).abs() <= 1e-12 * m.abs().max(1.0) * 10.0, "{p} {m} {sf:?}");
            // generic 2x2 inverse
            let seed = MeasurementSpec::general(lambda, theta).unwrap().seed_cm().unwrap();
            let eps = conditional_cm(
                &(Matrix2::identity() * sf.a),
                &(Matrix2::identity() * sf.b),
                &Matrix2::new(sf.c, 0.0, 0.0, sf.d),
                &seed,
            )
            .unwrap();
            assert!((eps.determinant() - m).abs() <= 1e-10 * m.abs().max(1.0));
        }
    }

    #[test]
    fn conditional_det_special_points() {
        let sf = TwoModeStandardForm::new(3.0, 2.0, 1.5, -0.7).unwrap();
        let het = (sf.a - sf.c * sf.c / (sf.b + 1.0)) * (sf.a - sf.d * sf.d / (sf.b + 1.0));
        for theta in [0.0, 0.4, 2.0] {
            assert!((conditional_det(&sf, 1.0, theta).unwrap() - het).abs() < 1e-13);
        }
        let hom = sf.a * (sf.a * sf.b - sf.c * sf.c) / sf.b;
        assert!((homodyne_limit(&sf, 0.0) - hom).abs() < 1e-13);
        assert!((conditional_det(&sf, 1e-12, 0.0).unwrap() - hom).abs() < 1e-10);
        let prod = TwoModeStandardForm::new(2.5, 4.0, 0.0, 0.0).unwrap();
        assert!((conditional_det(&prod, 0.3, 1.1).unwrap() - 6.25).abs() < 1e-13);
        assert!(conditional_det(&sf, 0.0, 0.0).is_err());
    }

    #[test]
    fn emin_product_and_pure() {
        let prod = TwoModeStandardForm::new(2.5, 4.0, 0.0, 0.0).unwrap();
        let e = emin_closed(&prod.invariants()).unwrap();
        assert!((e.value - 6.25).abs() < 1e-12);

        let pure = tms(0.8);
        let (first, second) = emin_branches(&pure.invariants());
        assert!((first.unwrap() - 1.0).abs() < 1e-9 && (second - 1.0).abs() < 1e-9);
        let e = emin_closed(&pure.invariants()).unwrap();
        assert!((e.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn squeezed_thermal_is_heterodyne() {
        let (r, s): (f64, f64) = (0.6, 0.9);
        let a = (2.0 * s).cosh();
        let b = r.cosh().powi(2) * a + r.sinh().powi(2);
        let c = r.cosh() * (2.0 * s).sinh();
        let sf = TwoModeStandardForm::new(a, b, c, -c).unwrap();
        let e = emin_closed(&sf.invariants()).unwrap();
        assert_eq!(e.case, EminCase::GeneralCase);
        assert_eq!(e.measurement.kind, MeasurementKind::Heterodyne);
        assert!((lambda2(&sf).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn partial_minimum_uncertainty_is_homodyne() {
        let (a, b): (f64, f64) = (3.0, 4.0);
        let inv = SymplecticInvariants::from_determinants(a * a, b * b, (1.0 - b * b) / 2.0, a * a);
        let e = emin_closed(&inv).unwrap();
        assert_eq!(e.case, EminCase::HomodyneCase);
        assert_eq!(e.measurement.kind, MeasurementKind::HomodyneX);
    }

    #[test]
    fn sign_of_c_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..500 {
            let inv = random_sf(&mut rng).invariants();
            let flipped = SymplecticInvariants::from_determinants(inv.det_alpha, inv.det_beta, -inv.det_gamma, inv.det_sigma);
            let (f1, s1) = emin_branches(&inv);
            let (f2, s2) = emin_branches(&flipped);
            assert_eq!(f1, f2);
            assert_eq!(s1, s2);
        }
    }

    #[test]
    fn measurement_reproduces_value() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..2000 {
            let sf = random_sf(&mut rng);
            let e = emin_closed(&sf.invariants()).unwrap();
            assert!(e.value >= 1.0 - 1e-9);
            let back = e.measurement.conditional_det(&sf);
            assert!((back - e.value).abs() <= 1e-9 * e.value, "{sf:?} {e:?} {back}");
        }
    }

    #[test]
    fn closed_form_matches_oracle_sample() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let opts = EminNumericOptions::default();
        for _ in 0..200 {
            let sf = random_sf(&mut rng);
            let closed = emin_closed(&sf.invariants()).unwrap().value;
            let num = emin_numeric(&sf, &opts);
            assert!((num.value - closed).abs() <= 1e-7 * closed, "{sf:?}: {} vs {closed}", num.value);
        }
        let num = emin_numeric(&tms(0.5), &opts);
        assert!((num.value - 1.0).abs() < 1e-9);
        let prod = TwoModeStandardForm::new(2.5, 4.0, 0.0, 0.0).unwrap();
        assert!((emin_numeric(&prod, &opts).value - 6.25).abs() < 1e-12);
    }

    #[test]
    fn saddle_and_boundary_structure() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let mut checked = 0;
        while checked < 500 {
            let sf = random_sf(&mut rng);
            let Some(l2) = lambda2(&sf) else { continue };
            let e1 = conditional_det_matrix(&sf, 1.0, 0.0);
            let e2 = conditional_det_matrix(&sf, l2, 0.0);
            let e0 = homodyne_limit(&sf, 0.0);
            assert!(e1 >= e2 - 1e-12 * e1);
            assert!(e2 <= e0 + 1e-12 * e0);
            checked += 1;
        }
    }

    #[test]
    fn report_on_simple_states() {
        let rep = full_report(&CovarianceMatrix::thermal(&[2.0, 3.0])).unwrap();
        for v in [rep.mutual_information, rep.d_left, rep.d_right, rep.j_left, rep.j_right] {
            assert!(v.abs() < 1e-12);
        }
        let s: f64 = 0.7;
        let rep = full_report(&tms(s).to_cm()).unwrap();
        let ent = f((2.0 * s).cosh());
        for v in [rep.d_left, rep.d_right, rep.j_left, rep.j_right] {
            assert!((v - ent).abs() < 1e-9);
        }
        assert!((rep.mutual_information - 2.0 * ent).abs() < 1e-9);
        assert!(discord(&CovarianceMatrix::thermal(&[0.5, 2.0]), Direction::Left).is_err());
    }

    #[test]
    fn zero_discord_predicate() {
        assert!(is_zero_discord(&CovarianceMatrix::thermal(&[2.0, 3.0]), 1e-12).unwrap());
        let sf = TwoModeStandardForm::new(2.0, 3.0, 1e-3, 0.0).unwrap();
        assert!(!is_zero_discord(&sf.to_cm(), 1e-12).unwrap());
        assert!(discord(&sf.to_cm(), Direction::Left).unwrap() > 0.0);
        assert!(!is_zero_discord(&tms(0.3).to_cm(), 1e-12).unwrap());
    }

    #[test]
    fn report_serializes() {
        let rep = full_report(&tms(0.3).to_cm()).unwrap();
        let json = serde_json::to_string(&rep).unwrap();
        assert!(json.contains("\"case_left\":\"general_case\""));
        let back: CorrelationReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, rep);
    }
}
