//! Symplectic spectra, Williamson normal modes, purification and the
//! elementary symplectic transformations used to build states.

use nalgebra::{Cholesky, DMatrix, Matrix2, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;

use crate::cm::{omega, symplectic_residual, CovarianceMatrix};
use crate::error::{Error, Result};

/// Tolerance on `nu >= 1` when deciding physicality.
pub const PHYSICALITY_TOL: f64 = 1e-9;
/// Residual tolerance for the Williamson decomposition.
pub const DECOMPOSITION_TOL: f64 = 1e-10;
/// Symplectic eigenvalues within this distance of 1 count as vacuum normal
/// modes when purifying.
pub const PURE_MODE_TOL: f64 = 1e-9;

/// Symplectic eigenvalues in descending order.
///
/// Computed as the square roots of the (doubly degenerate) eigenvalues of
/// `-K²` with `K = Lᵀ Ω L` and `σ = L Lᵀ`; `iK` is similar to `iΩσ`.
pub fn symplectic_eigenvalues(cm: &CovarianceMatrix) -> Result<Vec<f64>> {
    let m = cm.matrix();
    let chol = Cholesky::new(m.clone()).ok_or(Error::NotPositiveDefinite)?;
    let l = chol.l();
    let k = l.transpose() * omega(cm.n_modes()) * &l;
    let k2 = -(&k * &k);
    let k2 = (&k2 + k2.transpose()) * 0.5;
    let mut ev: Vec<f64> = k2.symmetric_eigenvalues().iter().map(|v| v.max(0.0).sqrt()).collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    // each value appears twice; average the pairs
    Ok(ev.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect())
}

/// Whether `cm` is a valid quantum covariance matrix: positive definite with
/// all symplectic eigenvalues `>= 1 - tol`. For two modes the local
/// determinants must also be `>= 1 - tol`.
pub fn is_physical(cm: &CovarianceMatrix) -> bool {
    is_physical_tol(cm, PHYSICALITY_TOL)
}

/// `tol` is widened to `16 ε ‖σ‖²` when larger: rounding the entries of a
/// physical `σ` moves its symplectic eigenvalues by about `ε ‖σ‖ ‖σ⁻¹‖`,
/// and `‖σ⁻¹‖ ≤ ‖σ‖` for physical states.
pub fn is_physical_tol(cm: &CovarianceMatrix, tol: f64) -> bool {
    let Ok(spec) = symplectic_eigenvalues(cm) else {
        return false;
    };
    let tol = tol.max(16.0 * f64::EPSILON * cm.matrix().amax().powi(2));
    if spec.iter().any(|&nu| !(nu >= 1.0 - tol)) {
        return false;
    }
    if cm.n_modes() == 2 {
        let a = cm.block(0, 0).determinant();
        let b = cm.block(1, 1).determinant();
        if a < 1.0 - tol || b < 1.0 - tol {
            return false;
        }
    }
    true
}

/// Von Neumann entropy `S(σ) = Σ f(ν_i)` in nats.
pub fn von_neumann_entropy(cm: &CovarianceMatrix) -> Result<f64> {
    let spec = symplectic_eigenvalues(cm)?;
    if let Some((i, &nu)) = spec.iter().enumerate().find(|(_, &nu)| nu < 1.0 - PHYSICALITY_TOL) {
        return Err(Error::Unphysical(format!("symplectic eigenvalue {nu} < 1 at position {i}")));
    }
    crate::entropy::entropy_of_spectrum(&spec)
}

/// Normal-mode decomposition `S σ Sᵀ = diag(ν1, ν1, ..., νn, νn)`.
#[derive(Clone, Debug)]
pub struct WilliamsonDecomposition {
    /// Symplectic matrix bringing the state to normal-mode form.
    pub s: DMatrix<f64>,
    /// Symplectic eigenvalues, descending.
    pub spectrum: Vec<f64>,
}

impl WilliamsonDecomposition {
    /// `S⁻¹ = Ω Sᵀ Ωᵀ`.
    pub fn s_inverse(&self) -> DMatrix<f64> {
        let om = omega(self.spectrum.len());
        &om * self.s.transpose() * om.transpose()
    }
}

/// Williamson decomposition of a positive-definite covariance matrix.
///
/// With `σ = L Lᵀ`, the antisymmetric `K = L⁻¹ Ω L⁻ᵀ` is brought to
/// `⊕ ω_k J` by an orthogonal `O` built from the eigenvectors of the
/// Hermitian matrix `iK`; then `S = diag(ν)^{1/2} Oᵀ L⁻¹` with `ν_k = 1/ω_k`.
/// Degenerate spectra need no special handling since the Hermitian
/// eigensolver returns an orthonormal basis of each eigenspace.
pub fn williamson(cm: &CovarianceMatrix) -> Result<WilliamsonDecomposition> {
    let n = cm.n_modes();
    let m = cm.matrix();
    let chol = Cholesky::new(m.clone()).ok_or(Error::NotPositiveDefinite)?;
    let l_inv = chol
        .l()
        .try_inverse()
        .ok_or(Error::NotPositiveDefinite)?;
    let k = &l_inv * omega(n) * l_inv.transpose();
    let ik = DMatrix::from_fn(2 * n, 2 * n, |r, c| Complex64::new(0.0, k[(r, c)]));
    let eig = SymmetricEigen::new(ik);

    let mut pos: Vec<usize> = (0..2 * n).filter(|&i| eig.eigenvalues[i] > 0.0).collect();
    if pos.len() != n {
        return Err(Error::Decomposition(f64::INFINITY));
    }
    // ascending ω  <=>  descending ν
    pos.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let mut o = DMatrix::zeros(2 * n, 2 * n);
    let mut spectrum = Vec::with_capacity(n);
    let sqrt2 = std::f64::consts::SQRT_2;
    for (mode, &i) in pos.iter().enumerate() {
        let mut w = eig.eigenvectors.column(i).into_owned();
        // phase gauge: the leading component becomes +i|w_r|, so that states
        // already in normal-mode form get S = identity
        let max = w.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if let Some(lead) = w.iter().find(|z| z.norm() >= 0.999 * max).copied() {
            let phase = Complex64::new(0.0, 1.0) * lead.conj() / lead.norm();
            w *= phase;
        }
        for r in 0..2 * n {
            // K x = ω y, K y = -ω x  for w = x + i y
            o[(r, 2 * mode)] = sqrt2 * w[r].im;
            o[(r, 2 * mode + 1)] = sqrt2 * w[r].re;
        }
        spectrum.push(1.0 / eig.eigenvalues[i]);
    }
    let mut scale = DMatrix::zeros(2 * n, 2 * n);
    for (mode, &nu) in spectrum.iter().enumerate() {
        scale[(2 * mode, 2 * mode)] = nu.sqrt();
        scale[(2 * mode + 1, 2 * mode + 1)] = nu.sqrt();
    }
    let s = scale * o.transpose() * l_inv;
    let dec = WilliamsonDecomposition { s, spectrum };
    let res = williamson_residual(cm, &dec);
    if res > DECOMPOSITION_TOL * residual_scale(cm, &dec) {
        return Err(Error::Decomposition(res));
    }
    Ok(dec)
}

/// Max of `‖SΩSᵀ−Ω‖∞` and `‖SσSᵀ − diag(ν)‖∞`.
pub fn williamson_residual(cm: &CovarianceMatrix, dec: &WilliamsonDecomposition) -> f64 {
    let sym = symplectic_residual(&dec.s);
    let d = &dec.s * cm.matrix() * dec.s.transpose();
    let mut off = 0.0f64;
    for r in 0..d.nrows() {
        for c in 0..d.ncols() {
            let target = if r == c { dec.spectrum[r / 2] } else { 0.0 };
            off = off.max((d[(r, c)] - target).abs());
        }
    }
    sym.max(off)
}

// Rounding in S grows with its condition number; the tolerance is absolute
// for states of unit scale.
fn residual_scale(cm: &CovarianceMatrix, dec: &WilliamsonDecomposition) -> f64 {
    let s_norm = dec.s.amax().max(1.0);
    (s_norm * s_norm * cm.matrix().amax().max(1.0)).max(1.0)
}

/// Pure Gaussian purification: one ancilla mode is appended (after the
/// original modes, in normal-mode order) for every symplectic eigenvalue
/// above 1. The original block is copied verbatim, so tracing out the
/// ancillas returns the input exactly.
pub fn purify(cm: &CovarianceMatrix) -> Result<CovarianceMatrix> {
    let dec = williamson(cm)?;
    if let Some((i, &nu)) = dec.spectrum.iter().enumerate().find(|(_, &nu)| nu < 1.0 - PHYSICALITY_TOL) {
        return Err(Error::Unphysical(format!("symplectic eigenvalue {nu} < 1 at position {i}")));
    }
    let n = cm.n_modes();
    let mixed: Vec<usize> = (0..n).filter(|&k| dec.spectrum[k] > 1.0 + PURE_MODE_TOL).collect();
    if mixed.is_empty() {
        return Ok(cm.clone());
    }
    let total = n + mixed.len();
    // normal-mode form with each mixed mode replaced by a two-mode squeezed
    // vacuum on (mode, ancilla)
    let mut normal = DMatrix::identity(2 * total, 2 * total);
    for (j, &k) in mixed.iter().enumerate() {
        let nu = dec.spectrum[k];
        let sh = (nu * nu - 1.0).max(0.0).sqrt();
        let anc = n + j;
        for q in 0..2 {
            normal[(2 * k + q, 2 * k + q)] = nu;
            normal[(2 * anc + q, 2 * anc + q)] = nu;
        }
        let sign = [1.0, -1.0];
        for q in 0..2 {
            normal[(2 * k + q, 2 * anc + q)] = sign[q] * sh;
            normal[(2 * anc + q, 2 * k + q)] = sign[q] * sh;
        }
    }
    let mut t = DMatrix::identity(2 * total, 2 * total);
    t.view_mut((0, 0), (2 * n, 2 * n)).copy_from(&dec.s_inverse());
    let mut out = &t * normal * t.transpose();
    out = (&out + out.transpose()) * 0.5;
    out.view_mut((0, 0), (2 * n, 2 * n)).copy_from(cm.matrix());
    CovarianceMatrix::new(out)
}

/// Rotation `R(θ) = ((cos θ, sin θ), (−sin θ, cos θ))`.
pub fn rotation(theta: f64) -> Matrix2<f64> {
    let (s, c) = theta.sin_cos();
    Matrix2::new(c, s, -s, c)
}

/// Single-mode squeezer `diag(e^{−z}, e^{z})`.
pub fn squeezer(z: f64) -> Matrix2<f64> {
    Matrix2::new((-z).exp(), 0.0, 0.0, z.exp())
}

/// Euler form `R(φ1) Sq(z) R(φ2)`; every single-mode symplectic has this form.
pub fn single_mode_symplectic(phi1: f64, z: f64, phi2: f64) -> Matrix2<f64> {
    rotation(phi1) * squeezer(z) * rotation(phi2)
}

/// Embeds single-mode symplectics as a block-diagonal local transform.
pub fn local_symplectic(blocks: &[Matrix2<f64>]) -> DMatrix<f64> {
    let n = blocks.len();
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for (k, b) in blocks.iter().enumerate() {
        m.fixed_view_mut::<2, 2>(2 * k, 2 * k).copy_from(b);
    }
    m
}

/// Beam splitter of transmittivity `t` on modes `(i, j)` of an `n`-mode
/// system, in the reflection convention
/// `((√t I, √(1−t) I), (√(1−t) I, −√t I))`.
pub fn beam_splitter(t: f64, i: usize, j: usize, n_modes: usize) -> Result<DMatrix<f64>> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("transmittivity {t} outside [0, 1]")));
    }
    for &m in &[i, j] {
        if m >= n_modes {
            return Err(Error::BadModeIndex { index: m, n_modes });
        }
    }
    if i == j {
        return Err(Error::Domain("beam splitter needs two distinct modes".into()));
    }
    let (ct, st) = (t.sqrt(), (1.0 - t).sqrt());
    let mut m = DMatrix::identity(2 * n_modes, 2 * n_modes);
    for q in 0..2 {
        m[(2 * i + q, 2 * i + q)] = ct;
        m[(2 * i + q, 2 * j + q)] = st;
        m[(2 * j + q, 2 * i + q)] = st;
        m[(2 * j + q, 2 * j + q)] = -ct;
    }
    Ok(m)
}

/// Passive phase-preserving beam splitter `((√t, √(1−t)), (−√(1−t), √t))`
/// with a phase on mode `j`.
fn mixer(t: f64, phase: f64, i: usize, j: usize, n_modes: usize) -> DMatrix<f64> {
    let (ct, st) = (t.sqrt(), (1.0 - t).sqrt());
    let r = rotation(phase);
    let mut m = DMatrix::identity(2 * n_modes, 2 * n_modes);
    m.fixed_view_mut::<2, 2>(2 * i, 2 * i).copy_from(&(Matrix2::identity() * ct));
    m.fixed_view_mut::<2, 2>(2 * i, 2 * j).copy_from(&(r * st));
    m.fixed_view_mut::<2, 2>(2 * j, 2 * i).copy_from(&(-r.transpose() * st));
    m.fixed_view_mut::<2, 2>(2 * j, 2 * j).copy_from(&(Matrix2::identity() * ct));
    m
}

/// Random symplectic matrix: layers of random local Euler symplectics and
/// random mixers on every pair of modes. `max_squeeze` bounds each local
/// squeezing parameter.
pub fn random_symplectic<R: Rng + ?Sized>(n_modes: usize, max_squeeze: f64, rng: &mut R) -> DMatrix<f64> {
    let tau = std::f64::consts::TAU;
    let local = |rng: &mut R| {
        let blocks: Vec<Matrix2<f64>> = (0..n_modes)
            .map(|_| {
                single_mode_symplectic(
                    rng.random::<f64>() * tau,
                    rng.random_range(-max_squeeze..=max_squeeze),
                    rng.random::<f64>() * tau,
                )
            })
            .collect();
        local_symplectic(&blocks)
    };
    let mut s = local(rng);
    for _ in 0..2 {
        for i in 0..n_modes {
            for j in i + 1..n_modes {
                s = mixer(rng.random(), rng.random::<f64>() * tau, i, j, n_modes) * s;
            }
        }
        s = local(rng) * s;
    }
    s
}

/// Random physical state `S diag(ν) Sᵀ` with `ν_k` uniform in `[1, max_nu]`.
pub fn random_physical<R: Rng + ?Sized>(
    n_modes: usize,
    max_nu: f64,
    max_squeeze: f64,
    rng: &mut R,
) -> CovarianceMatrix {
    let nus: Vec<f64> = (0..n_modes).map(|_| rng.random_range(1.0..=max_nu)).collect();
    let s = random_symplectic(n_modes, max_squeeze, rng);
    CovarianceMatrix::thermal(&nus).transform_unchecked(&s)
}

/// Random pure state `S Sᵀ`.
pub fn random_pure<R: Rng + ?Sized>(n_modes: usize, max_squeeze: f64, rng: &mut R) -> CovarianceMatrix {
    let s = random_symplectic(n_modes, max_squeeze, rng);
    CovarianceMatrix::vacuum(n_modes).transform_unchecked(&s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tms(s: f64) -> CovarianceMatrix {
        let (a, c) = ((2.0 * s).cosh(), (2.0 * s).sinh());
        CovarianceMatrix::from_row_slice(
            2,
            &[a, 0., c, 0., 0., a, 0., -c, c, 0., a, 0., 0., -c, 0., a],
        )
        .unwrap()
    }

    #[test]
    fn spectra_of_simple_states() {
        for n in 1..=4 {
            let v = symplectic_eigenvalues(&CovarianceMatrix::vacuum(n)).unwrap();
            assert!(v.iter().all(|&x| (x - 1.0).abs() < 1e-14));
        }
        let v = symplectic_eigenvalues(&tms(0.7)).unwrap();
        assert!(v.iter().all(|&x| (x - 1.0).abs() < 1e-12), "{v:?}");
        let v = symplectic_eigenvalues(&CovarianceMatrix::thermal(&[2.5, 4.0])).unwrap();
        assert!((v[0] - 4.0).abs() < 1e-14 && (v[1] - 2.5).abs() < 1e-14);
    }

    #[test]
    fn physicality() {
        assert!(is_physical(&CovarianceMatrix::vacuum(2)));
        assert!(!is_physical(&CovarianceMatrix::thermal(&[0.5, 1.0])));
        let mut m = DMatrix::identity(2, 2);
        m[(0, 0)] = -1.0;
        assert!(!is_physical(&CovarianceMatrix::new(m).unwrap()));
    }

    #[test]
    fn entropy_additivity_and_purity() {
        let a = CovarianceMatrix::thermal(&[3.0]);
        assert!((von_neumann_entropy(&a).unwrap() - 2.0 * 2f64.ln()).abs() < 1e-14);
        let b = CovarianceMatrix::thermal(&[1.7]);
        let sab = von_neumann_entropy(&a.direct_sum(&b)).unwrap();
        let sum = von_neumann_entropy(&a).unwrap() + von_neumann_entropy(&b).unwrap();
        assert!((sab - sum).abs() < 1e-12);
        assert!(von_neumann_entropy(&tms(1.3)).unwrap().abs() < 1e-10);
        assert!(von_neumann_entropy(&CovarianceMatrix::thermal(&[0.5])).is_err());
    }

    #[test]
    fn williamson_trivial_cases() {
        let dec = williamson(&CovarianceMatrix::vacuum(2)).unwrap();
        assert!(dec.spectrum.iter().all(|&x| (x - 1.0).abs() < 1e-14));
        let dec = williamson(&CovarianceMatrix::thermal(&[2.0])).unwrap();
        assert!((dec.s.abs() - DMatrix::identity(2, 2)).amax() < 1e-12);
        assert!((dec.spectrum[0] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn williamson_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=4 {
            for _ in 0..200 {
                let cm = random_physical(n, 5.0, 1.0, &mut rng);
                let dec = williamson(&cm).unwrap();
                assert!(symplectic_residual(&dec.s) < 1e-10);
                assert!(williamson_residual(&cm, &dec) < 1e-10 * residual_scale(&cm, &dec));
                let direct = symplectic_eigenvalues(&cm).unwrap();
                for (x, y) in direct.iter().zip(&dec.spectrum) {
                    assert!((x - y).abs() < 1e-9 * x);
                }
            }
        }
    }

    #[test]
    fn williamson_degenerate_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let s = random_symplectic(3, 0.8, &mut rng);
        let cm = CovarianceMatrix::thermal(&[2.0, 2.0, 2.0]).transform_unchecked(&s);
        let dec = williamson(&cm).unwrap();
        assert!(williamson_residual(&cm, &dec) < 1e-10 * residual_scale(&cm, &dec));
    }

    #[test]
    fn purification_of_thermal_mode_is_tms() {
        let b = 2.5;
        let p = purify(&CovarianceMatrix::thermal(&[b])).unwrap();
        let s = 0.5 * b.acosh();
        let expected = tms(s);
        assert!(p.max_abs_diff(&expected) < 1e-12, "{}", p.matrix());
        let pure = tms(0.4);
        assert_eq!(purify(&pure).unwrap(), pure);
    }

    #[test]
    fn purification_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=3 {
            for _ in 0..100 {
                let cm = random_physical(n, 4.0, 0.8, &mut rng);
                let p = purify(&cm).unwrap();
                let spec = symplectic_eigenvalues(&p).unwrap();
                assert!(spec.iter().all(|&x| (x - 1.0).abs() < 1e-8), "{spec:?}");
                let keep: Vec<usize> = (0..n).collect();
                assert!(p.partial_trace(&keep).unwrap().max_abs_diff(&cm) < 1e-9);
            }
        }
    }

    #[test]
    fn beam_splitter_limits() {
        let bs1 = beam_splitter(1.0, 0, 1, 2).unwrap();
        assert!(symplectic_residual(&bs1) < 1e-15);
        for k in 0..4 {
            assert_eq!(bs1[(k, k)].abs(), 1.0);
        }
        let bs0 = beam_splitter(0.0, 0, 1, 2).unwrap();
        let v = CovarianceMatrix::thermal(&[2.0, 5.0]);
        let swapped = v.apply_symplectic(&bs0, 1e-10).unwrap();
        assert!(swapped.max_abs_diff(&CovarianceMatrix::thermal(&[5.0, 2.0])) < 1e-14);
        let bs = beam_splitter(0.3, 0, 2, 4).unwrap();
        assert!(symplectic_residual(&bs) < 1e-15);
        let vac = CovarianceMatrix::vacuum(4).apply_symplectic(&bs, 1e-10).unwrap();
        assert!(vac.max_abs_diff(&CovarianceMatrix::vacuum(4)) < 1e-15);
        assert!(beam_splitter(1.2, 0, 1, 2).is_err());
    }

    #[test]
    fn symplectic_transforms_preserve_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let cm = random_physical(3, 3.0, 0.5, &mut rng);
            let s = random_symplectic(3, 0.5, &mut rng);
            assert!(symplectic_residual(&s) < 1e-12);
            let out = cm.apply_symplectic(&s, 1e-10).unwrap();
            let a = symplectic_eigenvalues(&cm).unwrap();
            let b = symplectic_eigenvalues(&out).unwrap();
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-9 * x);
            }
        }
    }
}
