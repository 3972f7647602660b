//! Entanglement of two- and three-mode Gaussian states: the PPT test,
//! Gaussian entanglement of formation, and the bounds it places on discord.
//!
//! The Gaussian EoF of `σ` is the least entanglement `f(√det α′)` of a pure
//! CM `σ′ ≤ σ`. Two independent numerical routes are provided:
//!
//! * [`geof_two_mode_numeric`] measures the ancillas of a purification of
//!   `σ` with a pure Gaussian seed. Every outcome leaves `AB` in the same
//!   pure state `σ′ ≤ σ`, and every pure Gaussian decomposition arises this
//!   way, so minimizing `det α′` over the seed gives the infimum. The
//!   objective is smooth, which lets a simplex reach it to near machine
//!   precision.
//! * [`feasibility_bisection`] bisects on the squeezing `r` of
//!   `σ′ = (S_A ⊕ S_B) σ_TMS(r) (S_A ⊕ S_B)ᵀ`, deciding feasibility of
//!   `σ − σ′ ≥ 0` by maximizing its least eigenvalue over the six local
//!   parameters.
//!
//! For three-mode states with symplectic spectrum `{1, 1, b}` the EoF across
//! `A × (ST)` follows in closed form from the discord machinery
//! ([`geof_three_mode_duality`]).

use nalgebra::{Cholesky, DMatrix, Matrix2, Matrix4, SymmetricEigen, Vector2, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cm::CovarianceMatrix;
use crate::discord::emin_standard_form;
use crate::entropy::{entropy_f_clamped as f, entropy_g};
use crate::error::{Error, Result};
use crate::optimize::{nelder_mead, NelderMeadOptions};
use crate::symplectic::{purify, rotation, single_mode_symplectic, symplectic_eigenvalues};
use crate::two_mode::{physical_invariants, standard_form};

/// A state is entangled when `ν̃₋ < 1 − PPT_TOL`.
pub const PPT_TOL: f64 = 1e-9;
/// Tolerance on `det σ = 1` accepted by [`geof_pure`].
pub const PURE_DET_TOL: f64 = 1e-8;
/// Tolerance on the two unit symplectic eigenvalues in
/// [`geof_three_mode_duality`].
pub const DUALITY_SPECTRUM_TOL: f64 = 1e-6;

/// Smallest symplectic eigenvalue of the partial transpose, and whether
/// the state is entangled (`ν̃₋ < 1`).
pub fn ppt_test(cm: &CovarianceMatrix) -> Result<(f64, bool)> {
    let inv = physical_invariants(cm)?;
    Ok((inv.nu_tilde_minus, inv.nu_tilde_minus < 1.0 - PPT_TOL))
}

/// Entropy of entanglement `f(√A)` of a pure two-mode state.
pub fn geof_pure(cm: &CovarianceMatrix) -> Result<f64> {
    let inv = physical_invariants(cm)?;
    if (inv.det_sigma - 1.0).abs() > PURE_DET_TOL {
        return Err(Error::NotPure(inv.det_sigma));
    }
    Ok(f(inv.det_alpha.sqrt()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeofMethod {
    PureClosedForm,
    NumericMinimizer,
    Duality,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeofResult {
    /// Nats.
    pub value: f64,
    pub method: GeofMethod,
    pub witness: GeofWitness,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeofWitness {
    Pure { det_alpha: f64 },
    Numeric(NumericWitness),
    Duality(DualityWitness),
}

/// Optimal pure CM `σ′ = (S_A ⊕ S_B) σ_TMS(r) (S_A ⊕ S_B)ᵀ` below `σ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericWitness {
    pub r: f64,
    /// Euler angles `(φ1, z, φ2)` of `S_A` followed by those of `S_B`.
    pub local_params: [f64; 6],
    pub pure_cm: CovarianceMatrix,
    /// Least eigenvalue of `σ − σ′`; nonnegative up to rounding.
    pub min_eigenvalue: f64,
    /// `det α′ = cosh² 2r`.
    pub det_alpha: f64,
    pub converged: bool,
    pub evaluations: usize,
    /// True when the value came from the PPT criterion (separable input).
    pub separable: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualityWitness {
    /// Pure four-mode purification, modes ordered `(A, S, T, B)`: the
    /// ancilla `B` is appended after the input modes.
    pub purification: CovarianceMatrix,
    pub mode_labels: Vec<String>,
    /// Marginal of `(A, B)` whose `E_min` gives the EoF.
    pub sigma_ab: CovarianceMatrix,
    pub emin: f64,
    /// `J←(σ_AB) + E_G(A|ST) − f(√det α_A)`.
    pub duality_residual: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct GeofOptions {
    /// Random starts of the simplex, in addition to the heterodyne seed.
    pub starts: usize,
    /// Stop early once this many starts reach the incumbent minimum to
    /// within `1e-10` relative (0 disables).
    pub agreement: usize,
    pub seed: u64,
    pub simplex: NelderMeadOptions,
    /// Return 0 straight away for PPT states instead of minimizing.
    pub ppt_shortcut: bool,
    /// `λ_min(σ − σ′) ≥ −feasibility_tol` counts as feasible.
    pub feasibility_tol: f64,
}

impl Default for GeofOptions {
    fn default() -> Self {
        Self {
            starts: 8,
            agreement: 3,
            seed: 0x5eed,
            simplex: NelderMeadOptions { ftol: 1e-15, xtol: 1e-10, max_evals: 20_000, restarts: 2 },
            ppt_shortcut: true,
            feasibility_tol: 1e-9,
        }
    }
}

// Squeezing of the measurement seed is clamped here; e^{-60} is far below
// rounding, so the clamp only matters for homodyne-like optima.
const SEED_SQUEEZE_BOUND: f64 = 30.0;

/// Seed measurement on the purifying modes, in the frame where the seed is
/// diagonal: `σ₀ = O diag(e^{−2z_k}, e^{2z_k}) Oᵀ`.
enum Seed {
    One(Matrix2<f64>, Vector2<f64>),
    Two(Matrix4<f64>, Vector4<f64>),
}

fn seed_from_params(k: usize, p: &[f64]) -> Seed {
    let clamp = |z: f64| z.clamp(-SEED_SQUEEZE_BOUND, SEED_SQUEEZE_BOUND);
    match k {
        1 => {
            let z = clamp(p[0]);
            Seed::One(rotation(p[1]), Vector2::new((-2.0 * z).exp(), (2.0 * z).exp()))
        }
        _ => {
            let (z1, z2) = (clamp(p[0]), clamp(p[1]));
            let outer = block_rotation(p[2], p[3]);
            let inner = block_rotation(p[4], p[5]);
            let (c, s) = (p[6].cos(), p[6].sin());
            let mut mix = Matrix4::zeros();
            for q in 0..2 {
                mix[(q, q)] = c;
                mix[(q, 2 + q)] = s;
                mix[(2 + q, q)] = -s;
                mix[(2 + q, 2 + q)] = c;
            }
            let diag = Vector4::new((-2.0 * z1).exp(), (2.0 * z1).exp(), (-2.0 * z2).exp(), (2.0 * z2).exp());
            Seed::Two(outer * mix * inner, diag)
        }
    }
}

fn block_rotation(a: f64, b: f64) -> Matrix4<f64> {
    let (ra, rb) = (rotation(a), rotation(b));
    let mut m = Matrix4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(&ra);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(&rb);
    m
}

/// Pure two-mode state left on `AB` by measuring the ancillas of `pure`
/// (modes `2..`) with a pure Gaussian seed.
struct Conditioner {
    sigma_ab: Matrix4<f64>,
    /// Only the first `2k` columns (and rows of `sigma_p`) are used.
    gamma: Matrix4<f64>,
    sigma_p: Matrix4<f64>,
    k: usize,
}

impl Conditioner {
    fn new(pure: &CovarianceMatrix) -> Self {
        let m = pure.matrix();
        let k = pure.n_modes() - 2;
        let mut gamma = Matrix4::zeros();
        let mut sigma_p = Matrix4::zeros();
        gamma.view_mut((0, 0), (4, 2 * k)).copy_from(&m.view((0, 4), (4, 2 * k)));
        sigma_p.view_mut((0, 0), (2 * k, 2 * k)).copy_from(&m.view((4, 4), (2 * k, 2 * k)));
        Self { sigma_ab: m.fixed_view::<4, 4>(0, 0).into_owned(), gamma, sigma_p, k }
    }

    // `O (Oᵀ σ_P O + diag)⁻¹ Oᵀ = (σ_P + σ₀)⁻¹`; factoring in the seed
    // frame keeps the Cholesky accurate however strong the squeezing.
    fn correction(&self, p: &[f64]) -> Option<Matrix4<f64>> {
        match seed_from_params(self.k, p) {
            Seed::One(o, diag) => {
                let x = o.transpose() * self.sigma_p.fixed_view::<2, 2>(0, 0) * o + Matrix2::from_diagonal(&diag);
                let g = self.gamma.fixed_view::<4, 2>(0, 0) * o;
                let y = Cholesky::new(x)?.solve(&g.transpose());
                Some(g * y)
            }
            Seed::Two(o, diag) => {
                let x = o.transpose() * self.sigma_p * o + Matrix4::from_diagonal(&diag);
                let g = self.gamma * o;
                let y = Cholesky::new(x)?.solve(&g.transpose());
                Some(g * y)
            }
        }
    }

    fn det_alpha(&self, p: &[f64]) -> f64 {
        match self.correction(p) {
            Some(c) => (self.sigma_ab.fixed_view::<2, 2>(0, 0) - c.fixed_view::<2, 2>(0, 0)).determinant(),
            None => f64::INFINITY,
        }
    }

    fn conditional(&self, p: &[f64]) -> Option<Matrix4<f64>> {
        let m = self.sigma_ab - self.correction(p)?;
        Some((m + m.transpose()) * 0.5)
    }

    fn n_params(&self) -> usize {
        if self.k == 1 {
            2
        } else {
            7
        }
    }
}

fn min_eigenvalue(m: &Matrix4<f64>) -> f64 {
    SymmetricEigen::new(*m).eigenvalues.min()
}

fn to_matrix4(cm: &CovarianceMatrix) -> Matrix4<f64> {
    cm.matrix().fixed_view::<4, 4>(0, 0).into_owned()
}

/// Gaussian EoF of a two-mode state by minimizing over measurements on a
/// purification. The witness is the optimal pure `σ′ ≤ σ`.
pub fn geof_two_mode_numeric(cm: &CovarianceMatrix, opts: &GeofOptions) -> Result<GeofResult> {
    let inv = physical_invariants(cm)?;
    let sigma = to_matrix4(cm);
    let entangled = inv.nu_tilde_minus < 1.0 - PPT_TOL;

    if opts.ppt_shortcut && !entangled {
        let fit = maximize_feasibility(&sigma, 0.0, &[], opts);
        let pure = tms_with_locals(0.0, &fit.params);
        let witness = numeric_witness(&sigma, pure, fit.evaluations, fit.value >= -opts.feasibility_tol, true);
        return Ok(GeofResult { value: 0.0, method: GeofMethod::NumericMinimizer, witness: GeofWitness::Numeric(witness) });
    }

    let purification = purify(cm)?;
    if purification.n_modes() == 2 {
        let witness = numeric_witness(&sigma, sigma, 0, true, false);
        let value = f(inv.det_alpha.sqrt());
        return Ok(GeofResult { value, method: GeofMethod::NumericMinimizer, witness: GeofWitness::Numeric(witness) });
    }

    let cond = Conditioner::new(&purification);
    let n = cond.n_params();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut best: Option<crate::optimize::Minimum> = None;
    let mut evaluations = 0;
    let mut agreeing = 0;
    for start in 0..=opts.starts {
        let x0: Vec<f64> = if start == 0 {
            vec![0.0; n]
        } else {
            (0..n)
                .map(|i| {
                    let squeeze = i < if n == 2 { 1 } else { 2 };
                    if squeeze {
                        rng.random_range(-2.0..2.0)
                    } else {
                        rng.random_range(0.0..std::f64::consts::TAU)
                    }
                })
                .collect()
        };
        let m = nelder_mead(|p| cond.det_alpha(p), &x0, &vec![0.5; n], opts.simplex);
        evaluations += m.evals;
        match &best {
            Some(b) if (m.f - b.f).abs() <= 1e-10 * b.f.abs() => {
                agreeing += 1;
                if m.f < b.f {
                    best = Some(m);
                }
            }
            Some(b) if m.f > b.f => {}
            _ => {
                best = Some(m);
                agreeing = 1;
            }
        }
        if opts.agreement > 0 && agreeing >= opts.agreement {
            break;
        }
    }
    let best = best.expect("at least one start");
    let pure = cond.conditional(&best.x).ok_or(Error::NotPositiveDefinite)?;
    let witness = numeric_witness(&sigma, pure, evaluations, best.converged, false);
    let value = entropy_g(0.5 * (witness.det_alpha.max(1.0).sqrt() - 1.0));
    Ok(GeofResult { value, method: GeofMethod::NumericMinimizer, witness: GeofWitness::Numeric(witness) })
}

fn numeric_witness(sigma: &Matrix4<f64>, pure: Matrix4<f64>, evaluations: usize, converged: bool, separable: bool) -> NumericWitness {
    let alpha = pure.fixed_view::<2, 2>(0, 0).into_owned();
    let det_alpha = alpha.determinant();
    let r = 0.5 * det_alpha.max(1.0).sqrt().acosh();
    let local_params = pure_state_locals(&pure, r);
    NumericWitness {
        r,
        local_params,
        pure_cm: CovarianceMatrix::new(DMatrix::from_fn(4, 4, |i, j| pure[(i, j)])).expect("symmetric by construction"),
        min_eigenvalue: min_eigenvalue(&(sigma - pure)),
        det_alpha,
        converged,
        evaluations,
        separable,
    }
}

/// `σ_TMS(r)` with `γ = sinh 2r · diag(1, −1)`.
fn tms_matrix(r: f64) -> Matrix4<f64> {
    let (a, c) = ((2.0 * r).cosh(), (2.0 * r).sinh());
    let mut m = Matrix4::identity() * a;
    m[(0, 2)] = c;
    m[(2, 0)] = c;
    m[(1, 3)] = -c;
    m[(3, 1)] = -c;
    m
}

/// `(S_A ⊕ S_B) σ_TMS(r) (S_A ⊕ S_B)ᵀ` with Euler parameters `p`
/// (an empty slice means identity locals).
pub fn tms_with_locals(r: f64, p: &[f64]) -> Matrix4<f64> {
    if p.is_empty() {
        return tms_matrix(r);
    }
    let mut s = Matrix4::zeros();
    s.fixed_view_mut::<2, 2>(0, 0).copy_from(&single_mode_symplectic(p[0], p[1], p[2]));
    s.fixed_view_mut::<2, 2>(2, 2).copy_from(&single_mode_symplectic(p[3], p[4], p[5]));
    s * tms_matrix(r) * s.transpose()
}

/// Euler parameters `(φ1, z, φ2)` with `s = R(φ1) Sq(z) R(φ2)`, for `det s = 1`.
pub fn euler_params(s: &Matrix2<f64>) -> (f64, f64, f64) {
    let eig = SymmetricEigen::new(s * s.transpose());
    let (i_small, i_big) = if eig.eigenvalues[0] <= eig.eigenvalues[1] { (0, 1) } else { (1, 0) };
    let z = 0.25 * (eig.eigenvalues[i_big] / eig.eigenvalues[i_small]).ln();
    let v = eig.eigenvectors.column(i_small);
    // first column of R(φ1) is (cos φ1, −sin φ1)
    let phi1 = (-v[1]).atan2(v[0]);
    let rest = squeeze_inv(z) * rotation(phi1).transpose() * s;
    let phi2 = rest[(0, 1)].atan2(rest[(0, 0)]);
    (phi1, z, phi2)
}

fn squeeze_inv(z: f64) -> Matrix2<f64> {
    Matrix2::new(z.exp(), 0.0, 0.0, (-z).exp())
}

// S_A from α′ = cosh 2r · S_A S_Aᵀ (choosing the free rotation on the right
// to be zero), then S_B from γ′ = sinh 2r · S_A Z S_Bᵀ, or from β′ when the
// state is a product.
fn pure_state_locals(pure: &Matrix4<f64>, r: f64) -> [f64; 6] {
    let alpha = pure.fixed_view::<2, 2>(0, 0).into_owned();
    let beta = pure.fixed_view::<2, 2>(2, 2).into_owned();
    let gamma = pure.fixed_view::<2, 2>(0, 2).into_owned();
    let ch = (2.0 * r).cosh();
    let from_gram = |m: &Matrix2<f64>| {
        let (phi, z, _) = euler_params(&sqrt_spd(&(m / ch)));
        single_mode_symplectic(phi, z, 0.0)
    };
    let s_a = from_gram(&alpha);
    let s_b = if r > 1e-8 {
        let z = Matrix2::new(1.0, 0.0, 0.0, -1.0);
        let inv_a = s_a.try_inverse().unwrap_or_else(Matrix2::identity);
        (z * inv_a * gamma / (2.0 * r).sinh()).transpose()
    } else {
        from_gram(&beta)
    };
    let (a1, a2, a3) = euler_params(&s_a);
    let (b1, b2, b3) = euler_params(&s_b);
    [a1, a2, a3, b1, b2, b3]
}

fn sqrt_spd(m: &Matrix2<f64>) -> Matrix2<f64> {
    let eig = SymmetricEigen::new(*m);
    let d = Matrix2::from_diagonal(&eig.eigenvalues.map(|v| v.max(0.0).sqrt()));
    eig.eigenvectors * d * eig.eigenvectors.transpose()
}

struct Feasibility {
    value: f64,
    params: Vec<f64>,
    evaluations: usize,
}

// Maximizes λ_min(σ − σ′(r, p)) over the six local parameters, stopping at
// the first start that reaches feasibility. `warm` seeds the first start.
fn maximize_feasibility(sigma: &Matrix4<f64>, r: f64, warm: &[f64], opts: &GeofOptions) -> Feasibility {
    let objective = |p: &[f64]| -min_eigenvalue(&(sigma - tms_with_locals(r, p)));
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ r.to_bits());
    let mut best = Feasibility { value: f64::NEG_INFINITY, params: vec![0.0; 6], evaluations: 0 };
    let simplex = NelderMeadOptions { ftol: 1e-13, xtol: 1e-10, max_evals: 6000, restarts: 2 };
    for start in 0..opts.starts.max(1) {
        let x0: Vec<f64> = if start == 0 && warm.len() == 6 {
            warm.to_vec()
        } else if start == 0 {
            vec![0.0; 6]
        } else {
            (0..6)
                .map(|i| if i % 3 == 1 { rng.random_range(-1.5..1.5) } else { rng.random_range(0.0..std::f64::consts::TAU) })
                .collect()
        };
        let m = nelder_mead(objective, &x0, &[0.4; 6], simplex);
        best.evaluations += m.evals;
        if -m.f > best.value {
            best.value = -m.f;
            best.params = m.x;
        }
        if best.value >= -opts.feasibility_tol {
            break;
        }
    }
    best
}

/// Outcome of [`feasibility_bisection`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BisectionReport {
    /// Largest squeezing found infeasible.
    pub lo: f64,
    /// Smallest squeezing certified feasible.
    pub hi: f64,
    pub local_params: [f64; 6],
    pub iterations: usize,
    pub evaluations: usize,
    /// Feasibility re-checked from cold starts at squeezings between `hi`
    /// and the starting point; an infeasible probe means the bracket
    /// inverted.
    pub probes: Vec<(f64, bool)>,
    pub inverted: bool,
}

impl BisectionReport {
    /// `f(cosh 2 hi)`, an upper bound on the Gaussian EoF certified by the
    /// feasible witness.
    pub fn value(&self) -> f64 {
        f((2.0 * self.hi).cosh())
    }
}

/// Bisection on `r` for the smallest squeezing of a feasible pure
/// `σ′ ≤ σ`. The upper end starts at `r_hi`, which must be feasible
/// (e.g. the squeezing of the [`geof_two_mode_numeric`] witness, or any
/// `r` with `cosh 2r ≥ ‖σ‖`).
pub fn feasibility_bisection(cm: &CovarianceMatrix, r_hi: f64, r_tol: f64, opts: &GeofOptions) -> Result<BisectionReport> {
    physical_invariants(cm)?;
    let sigma = to_matrix4(cm);
    let mut evaluations = 0;
    let top = maximize_feasibility(&sigma, r_hi, &[], opts);
    evaluations += top.evaluations;
    if top.value < -opts.feasibility_tol {
        return Err(Error::NoConvergence { lo: 0.0, hi: r_hi });
    }
    let mut warm = top.params;
    let (mut lo, mut hi) = (0.0, r_hi);
    let bottom = maximize_feasibility(&sigma, 0.0, &warm, opts);
    evaluations += bottom.evaluations;
    let mut iterations = 0;
    if bottom.value >= -opts.feasibility_tol {
        hi = 0.0;
        warm = bottom.params;
    }
    while hi - lo > r_tol {
        let mid = 0.5 * (lo + hi);
        let fit = maximize_feasibility(&sigma, mid, &warm, opts);
        evaluations += fit.evaluations;
        iterations += 1;
        if fit.value >= -opts.feasibility_tol {
            hi = mid;
            warm = fit.params;
        } else {
            lo = mid;
        }
    }
    // feasible squeezings form an interval, so everything between `hi` and
    // the feasible starting point must test feasible again
    let probes: Vec<(f64, bool)> = [0.25, 0.5, 0.75]
        .iter()
        .map(|&step| {
            let r = hi + step * (r_hi - hi);
            let fit = maximize_feasibility(&sigma, r, &[], opts);
            evaluations += fit.evaluations;
            (r, fit.value >= -opts.feasibility_tol)
        })
        .collect();
    let inverted = lo > hi || probes.iter().any(|&(_, ok)| !ok);
    let mut local_params = [0.0; 6];
    local_params.copy_from_slice(&warm);
    Ok(BisectionReport { lo, hi, local_params, iterations, evaluations, probes, inverted })
}

/// Gaussian EoF across `A × (ST)` of a three-mode state (modes ordered
/// `A, S, T`) whose symplectic spectrum is `{1, 1, b}`: append the ancilla
/// `B` that purifies it, then `E_G = f(√E_min(σ_AB))`.
pub fn geof_three_mode_duality(cm: &CovarianceMatrix) -> Result<GeofResult> {
    if cm.n_modes() != 3 {
        return Err(Error::ModeCount { expected: 3, got: cm.n_modes() });
    }
    let spectrum = symplectic_eigenvalues(cm)?;
    for (index, &value) in spectrum.iter().enumerate().skip(1) {
        if (value - 1.0).abs() > DUALITY_SPECTRUM_TOL {
            return Err(Error::Spectrum { index, value });
        }
    }
    if spectrum[0] < 1.0 - DUALITY_SPECTRUM_TOL {
        return Err(Error::Spectrum { index: 0, value: spectrum[0] });
    }
    let mut purification = purify(cm)?;
    if purification.n_modes() == 3 {
        // already pure: a vacuum ancilla keeps the construction uniform
        purification = purification.direct_sum(&CovarianceMatrix::vacuum(1));
    }
    if purification.n_modes() != 4 {
        return Err(Error::Spectrum { index: 1, value: spectrum[1] });
    }
    let sigma_ab = purification.partial_trace(&[0, 3])?;
    let sf = standard_form(&sigma_ab)?;
    let emin = emin_standard_form(&sf)?.value;
    let value = f(emin.sqrt());
    let marginal = f(cm.block(0, 0).determinant().sqrt());
    let classical = f(sf.a) - f(emin.sqrt());
    let witness = DualityWitness {
        purification,
        mode_labels: ["A", "S", "T", "B"].iter().map(|s| s.to_string()).collect(),
        sigma_ab,
        emin,
        duality_residual: classical + value - marginal,
    };
    Ok(GeofResult { value, method: GeofMethod::Duality, witness: GeofWitness::Duality(witness) })
}

/// Discord bounds at fixed Gaussian EoF, with `r` defined by
/// `E_G = f(1 + 2/sinh² r)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscordBounds {
    pub r: f64,
    /// `2 ln coth r`
    pub lower: f64,
    /// `max{E_G, 2 cosh² r ln coth r}`
    pub upper: f64,
}

/// `ln coth r`, accurate for small and large `r`.
pub fn ln_coth(r: f64) -> f64 {
    let e = (-2.0 * r).exp();
    e.ln_1p() - (-e).ln_1p()
}

/// `f(1 + 2/sinh² r)`, the Gaussian EoF of the symmetric state that
/// defines `r`.
pub fn geof_of_r(r: f64) -> f64 {
    entropy_g(1.0 / r.sinh().powi(2))
}

pub fn discord_bounds_given_geof(e_g: f64) -> Result<DiscordBounds> {
    if !(e_g > 0.0) || !e_g.is_finite() {
        return Err(Error::Domain(format!("Gaussian EoF must be positive and finite, got {e_g}")));
    }
    // geof_of_r decreases in r; bisect in ln r
    let (mut lo, mut hi) = (-40.0_f64, 5.0_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if geof_of_r(mid.exp()) > e_g {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * mid.abs().max(1.0) {
            break;
        }
    }
    let r = (0.5 * (lo + hi)).exp();
    let lc = ln_coth(r);
    Ok(DiscordBounds { r, lower: 2.0 * lc, upper: e_g.max(2.0 * r.cosh().powi(2) * lc) })
}
