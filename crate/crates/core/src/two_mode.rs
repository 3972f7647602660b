//! Two-mode states: local symplectic invariants and the standard form.

use nalgebra::{Cholesky, Matrix2, Matrix4};
use serde::{Deserialize, Serialize};

use crate::cm::CovarianceMatrix;
use crate::error::{Error, Result};
use crate::symplectic::PHYSICALITY_TOL;

/// Standard form `α = a I`, `β = b I`, `γ = diag(c, d)` with `c ≥ |d|`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoModeStandardForm {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

/// Local symplectic invariants of a two-mode state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymplecticInvariants {
    /// `A = det α`
    pub det_alpha: f64,
    /// `B = det β`
    pub det_beta: f64,
    /// `C = det γ`
    pub det_gamma: f64,
    /// `D = det σ`
    pub det_sigma: f64,
    /// `Δ = A + B + 2C`
    pub delta: f64,
    pub nu_minus: f64,
    pub nu_plus: f64,
    /// Smallest symplectic eigenvalue of the partial transpose (`C -> -C`).
    pub nu_tilde_minus: f64,
}

/// `(ν₋, ν₊)` from `2ν±² = Δ ± √(Δ² − 4D)`, with `ν₋² = D/ν₊²` to avoid
/// cancellation.
pub fn symplectic_pair(delta: f64, det_sigma: f64) -> (f64, f64) {
    let disc = (delta * delta - 4.0 * det_sigma).max(0.0);
    let plus2 = 0.5 * (delta + disc.sqrt());
    if !(plus2 > 0.0) {
        return (0.0, 0.0);
    }
    let minus2 = det_sigma / plus2;
    (minus2.max(0.0).sqrt(), plus2.sqrt())
}

// `(ν₋, ν₊)` from a precomputed `Δ² − 4D`.
fn pair_from_discriminant(delta: f64, disc: f64, det_sigma: f64) -> (f64, f64) {
    let plus2 = 0.5 * (delta + disc.max(0.0).sqrt());
    if !(plus2 > 0.0) {
        return (0.0, 0.0);
    }
    ((det_sigma / plus2).max(0.0).sqrt(), plus2.sqrt())
}

impl SymplecticInvariants {
    pub fn from_determinants(det_alpha: f64, det_beta: f64, det_gamma: f64, det_sigma: f64) -> Self {
        let delta = det_alpha + det_beta + 2.0 * det_gamma;
        let tilde = det_alpha + det_beta - 2.0 * det_gamma;
        Self::assemble(
            [det_alpha, det_beta, det_gamma, det_sigma],
            delta * delta - 4.0 * det_sigma,
            tilde * tilde - 4.0 * det_sigma,
        )
    }

    // Symplectic eigenvalues within rounding of 1 are set to 1: the entries
    // of the CM carry a relative error of order ε, which moves `ν` by about
    // `ε max(√(AB), |C|)`, and near 1 the entropy is steep enough to turn
    // that into a visible error.
    fn assemble(dets: [f64; 4], disc: f64, disc_tilde: f64) -> Self {
        let [det_alpha, det_beta, det_gamma, det_sigma] = dets;
        let delta = det_alpha + det_beta + 2.0 * det_gamma;
        let floor = 4.0 * f64::EPSILON * (det_alpha * det_beta).sqrt().max(det_gamma.abs()).max(1.0);
        let snap = |nu: f64| if (nu - 1.0).abs() <= floor { 1.0 } else { nu };
        let (nu_minus, nu_plus) = pair_from_discriminant(delta, disc, det_sigma);
        let (nu_tilde_minus, _) = pair_from_discriminant(det_alpha + det_beta - 2.0 * det_gamma, disc_tilde, det_sigma);
        Self {
            det_alpha,
            det_beta,
            det_gamma,
            det_sigma,
            delta,
            nu_minus: snap(nu_minus),
            nu_plus: snap(nu_plus),
            nu_tilde_minus: snap(nu_tilde_minus),
        }
    }

    /// Both symplectic eigenvalues equal to 1.
    pub fn is_pure(&self) -> bool {
        self.nu_minus == 1.0 && self.nu_plus == 1.0
    }

    /// Invariants with the roles of the two modes exchanged.
    pub fn swapped(&self) -> Self {
        Self { det_alpha: self.det_beta, det_beta: self.det_alpha, ..*self }
    }

    /// `A, B ≥ 1` and `ν₋ ≥ 1`, within `tol`.
    pub fn is_physical(&self, tol: f64) -> bool {
        self.det_alpha >= 1.0 - tol && self.det_beta >= 1.0 - tol && self.nu_minus >= 1.0 - tol
    }

    pub(crate) fn require_physical(&self) -> Result<()> {
        if self.is_physical(PHYSICALITY_TOL) {
            Ok(())
        } else {
            Err(Error::Unphysical(format!(
                "A = {}, B = {}, nu_- = {}",
                self.det_alpha, self.det_beta, self.nu_minus
            )))
        }
    }
}

/// Invariants of an arbitrary (not necessarily standard-form) two-mode CM.
pub fn invariants(cm: &CovarianceMatrix) -> Result<SymplecticInvariants> {
    if cm.n_modes() != 2 {
        return Err(Error::ModeCount { expected: 2, got: cm.n_modes() });
    }
    let (alpha, beta, gamma) = (cm.block(0, 0), cm.block(1, 1), cm.block(0, 1));
    let det_alpha = alpha.determinant();
    Ok(SymplecticInvariants::from_determinants(
        det_alpha,
        beta.determinant(),
        gamma.determinant(),
        det_sigma(&alpha, &beta, &gamma, det_alpha),
    ))
}

// det σ = det α · det(β − γᵀ α⁻¹ γ); far more accurate than cofactor
// expansion when the entries are large and nearly cancel.
fn det_sigma(alpha: &Matrix2<f64>, beta: &Matrix2<f64>, gamma: &Matrix2<f64>, det_alpha: f64) -> f64 {
    if det_alpha.abs() < f64::MIN_POSITIVE {
        let m = Matrix4::from_fn(|r, c| match (r < 2, c < 2) {
            (true, true) => alpha[(r, c)],
            (true, false) => gamma[(r, c - 2)],
            (false, true) => gamma[(c, r - 2)],
            (false, false) => beta[(r - 2, c - 2)],
        });
        return m.determinant();
    }
    let adj = Matrix2::new(alpha[(1, 1)], -alpha[(0, 1)], -alpha[(1, 0)], alpha[(0, 0)]);
    let schur = beta - gamma.transpose() * adj * gamma / det_alpha;
    det_alpha * schur.determinant()
}

impl TwoModeStandardForm {
    /// Validates the normalization `c ≥ |d|` and physicality.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let sf = Self { a, b, c, d };
        if [a, b, c, d].iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("non-finite standard-form parameter".into()));
        }
        if c < d.abs() - 1e-12 * c.abs().max(1.0) {
            return Err(Error::Domain(format!("standard form needs c >= |d|, got c = {c}, d = {d}")));
        }
        sf.require_physical()?;
        Ok(sf)
    }

    /// Brings arbitrary diagonal-block parameters to the `c ≥ |d|`,
    /// `sign(d) = sign(cd)` convention. Both moves (swapping `c, d` and
    /// flipping both signs) are local rotations.
    pub fn normalized(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let (big, small) = if c.abs() >= d.abs() { (c, d) } else { (d, c) };
        let sign = if big * small < 0.0 { -1.0 } else { 1.0 };
        Self::new(a, b, big.abs(), sign * small.abs())
    }

    /// Recovers `(a, b, c, d)` from the four invariants: `a = √A`, `b = √B`
    /// and `c², d²` are the roots of `t² − ((AB + C² − D)/√(AB)) t + C² = 0`.
    pub fn from_invariants(inv: &SymplecticInvariants) -> Result<Self> {
        let (big_a, big_b, big_c, big_d) = (inv.det_alpha, inv.det_beta, inv.det_gamma, inv.det_sigma);
        if !(big_a > 0.0 && big_b > 0.0) {
            return Err(Error::Unphysical(format!("A = {big_a}, B = {big_b}")));
        }
        let a = big_a.sqrt();
        let b = big_b.sqrt();
        let sum = ((big_a * big_b + big_c * big_c - big_d) / (a * b)).max(0.0);
        let prod = big_c * big_c;
        let mut disc = sum * sum - 4.0 * prod;
        if disc < 0.0 {
            if disc < -1e-9 * sum.max(1.0).powi(2) {
                return Err(Error::Inconsistent(format!(
                    "complex roots for c^2, d^2 (discriminant {disc:e})"
                )));
            }
            disc = 0.0;
        }
        let u = 0.5 * (sum + disc.sqrt());
        let v = if u > 0.0 { prod / u } else { 0.0 };
        let c = u.sqrt();
        let d = big_c.signum() * v.sqrt();
        Ok(Self { a, b, c, d: if big_c == 0.0 { 0.0 } else { d } })
    }

    /// Exact invariants `A = a²`, `B = b²`, `C = cd`, `D = (ab − c²)(ab − d²)`.
    /// The symplectic eigenvalues use the factored discriminant
    /// `Δ² − 4D = (a² − b²)² + 4(ac + bd)(ad + bc)`, which stays accurate
    /// when `ν₊ ≈ ν₋`.
    pub fn invariants(&self) -> SymplecticInvariants {
        let Self { a, b, c, d } = *self;
        let ab = a * b;
        let split = (a * a - b * b).powi(2);
        SymplecticInvariants::assemble(
            [a * a, b * b, c * d, (ab - c * c) * (ab - d * d)],
            split + 4.0 * (a * c + b * d) * (a * d + b * c),
            split + 4.0 * (a * c - b * d) * (b * c - a * d),
        )
    }

    pub fn is_physical(&self) -> bool {
        let ab = self.a * self.b;
        self.a > 0.0
            && self.b > 0.0
            && ab > self.c * self.c
            && ab > self.d * self.d
            && self.invariants().is_physical(PHYSICALITY_TOL)
    }

    fn require_physical(&self) -> Result<()> {
        if self.is_physical() {
            Ok(())
        } else {
            Err(Error::Unphysical(format!("standard form {self:?}")))
        }
    }

    /// The same state with modes A and B exchanged.
    pub fn swapped(&self) -> Self {
        Self { a: self.b, b: self.a, ..*self }
    }

    pub fn to_cm(&self) -> CovarianceMatrix {
        let Self { a, b, c, d } = *self;
        CovarianceMatrix::from_row_slice(
            2,
            &[a, 0., c, 0., 0., a, 0., d, c, 0., b, 0., 0., d, 0., b],
        )
        .expect("standard form is symmetric")
    }
}

/// Standard form of a physical two-mode CM (deterministic: `c ≥ |d| ≥ 0`
/// and `sign(d) = sign(C)`).
///
/// Computed by explicit local operations rather than from the invariants:
/// `S = (α/√det α)^{-1/2}` turns `α` into `aI` (likewise for `β`), and a
/// rotation-only SVD of the transformed `γ` gives `diag(c, d)`. Singular
/// values stay well conditioned when `|c| = |d|`, where solving for `c², d²`
/// from the invariants would lose half the digits.
pub fn standard_form(cm: &CovarianceMatrix) -> Result<TwoModeStandardForm> {
    if cm.n_modes() != 2 {
        return Err(Error::ModeCount { expected: 2, got: cm.n_modes() });
    }
    let m: Matrix4<f64> = cm.matrix().fixed_view::<4, 4>(0, 0).into_owned();
    if Cholesky::new(m).is_none() {
        return Err(Error::NotPositiveDefinite);
    }
    let (alpha, beta, gamma) = (cm.block(0, 0), cm.block(1, 1), cm.block(0, 1));
    let (a, s_a) = local_normalizer(&alpha);
    let (b, s_b) = local_normalizer(&beta);
    let g = s_a * gamma * s_b.transpose();
    let svd = g.svd(true, true);
    let (mut u, mut v_t) = (svd.u.expect("requested"), svd.v_t.expect("requested"));
    let mut sv = svd.singular_values;
    if u.determinant() < 0.0 {
        u.set_column(1, &(-u.column(1)));
        sv[1] = -sv[1];
    }
    if v_t.determinant() < 0.0 {
        v_t.set_row(1, &(-v_t.row(1)));
        sv[1] = -sv[1];
    }
    let (c, d) = (sv[0], sv[1]);
    let sf = TwoModeStandardForm { a, b, c, d: if c == 0.0 { 0.0 } else { d } };
    sf.require_physical()?;
    Ok(sf)
}

// `(√det m, (m/√det m)^{-1/2})`.
fn local_normalizer(m: &Matrix2<f64>) -> (f64, Matrix2<f64>) {
    let scale = m.determinant().sqrt();
    let eig = nalgebra::SymmetricEigen::new(m / scale);
    let inv_sqrt = Matrix2::from_diagonal(&eig.eigenvalues.map(|v| 1.0 / v.sqrt()));
    (scale, eig.eigenvectors * inv_sqrt * eig.eigenvectors.transpose())
}

/// Invariants of a CM that is checked to be positive definite and
/// physical, evaluated through its [`standard_form`].
pub fn physical_invariants(cm: &CovarianceMatrix) -> Result<SymplecticInvariants> {
    Ok(standard_form(cm)?.invariants())
}
