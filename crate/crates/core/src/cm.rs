//! Covariance matrices of Gaussian states.
//!
//! Quadratures are ordered `(x1, p1, x2, p2, ...)` and normalized so that
//! the vacuum covariance matrix is the identity.

use std::io::{Read, Write};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute symmetry tolerance, scaled by the largest entry for states with
/// large energies.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Real symmetric `2n x 2n` covariance matrix of an `n`-mode Gaussian state.
#[derive(Clone, Debug, PartialEq)]
pub struct CovarianceMatrix {
    entries: DMatrix<f64>,
}

/// The symplectic form `Omega = ⊕ ((0, 1), (-1, 0))` on `n` modes.
pub fn omega(n_modes: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(2 * n_modes, 2 * n_modes);
    for k in 0..n_modes {
        m[(2 * k, 2 * k + 1)] = 1.0;
        m[(2 * k + 1, 2 * k)] = -1.0;
    }
    m
}

impl CovarianceMatrix {
    /// Wraps a symmetric even-dimensional matrix. Asymmetry below tolerance is
    /// removed by symmetrizing.
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        let (rows, cols) = entries.shape();
        if rows != cols || rows == 0 || rows % 2 != 0 {
            return Err(Error::BadShape { rows, cols });
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::Parse("non-finite entry".into()));
        }
        let scale = entries.amax().max(1.0);
        let asym = (&entries - entries.transpose()).amax();
        if asym > SYMMETRY_TOL * scale {
            return Err(Error::NotSymmetric(asym));
        }
        let entries = if asym == 0.0 {
            entries
        } else {
            (&entries + entries.transpose()) * 0.5
        };
        Ok(Self { entries })
    }

    pub fn from_row_slice(n_modes: usize, data: &[f64]) -> Result<Self> {
        let dim = 2 * n_modes;
        if data.len() != dim * dim {
            return Err(Error::BadShape { rows: data.len(), cols: 1 });
        }
        Self::new(DMatrix::from_row_slice(dim, dim, data))
    }

    pub fn vacuum(n_modes: usize) -> Self {
        Self { entries: DMatrix::identity(2 * n_modes, 2 * n_modes) }
    }

    /// Product of single-mode thermal states `diag(n1, n1, n2, n2, ...)`.
    pub fn thermal(occupations: &[f64]) -> Self {
        let diag: Vec<f64> = occupations.iter().flat_map(|&n| [n, n]).collect();
        Self { entries: DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag)) }
    }

    pub fn n_modes(&self) -> usize {
        self.entries.nrows() / 2
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.entries
    }

    /// The `2x2` block coupling modes `i` and `j`.
    pub fn block(&self, i: usize, j: usize) -> nalgebra::Matrix2<f64> {
        self.entries.fixed_view::<2, 2>(2 * i, 2 * j).into_owned()
    }

    /// Principal submatrix on the kept modes, in the order given.
    pub fn partial_trace(&self, keep_modes: &[usize]) -> Result<Self> {
        let n = self.n_modes();
        if keep_modes.is_empty() {
            return Err(Error::Domain("partial trace must keep at least one mode".into()));
        }
        for (k, &m) in keep_modes.iter().enumerate() {
            if m >= n {
                return Err(Error::BadModeIndex { index: m, n_modes: n });
            }
            if keep_modes[..k].contains(&m) {
                return Err(Error::Domain(format!("mode {m} listed twice")));
            }
        }
        let idx: Vec<usize> = keep_modes.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect();
        let dim = idx.len();
        let entries = DMatrix::from_fn(dim, dim, |r, c| self.entries[(idx[r], idx[c])]);
        Ok(Self { entries })
    }

    /// Block-diagonal direct sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let (d1, d2) = (self.entries.nrows(), other.entries.nrows());
        let mut m = DMatrix::zeros(d1 + d2, d1 + d2);
        m.view_mut((0, 0), (d1, d1)).copy_from(&self.entries);
        m.view_mut((d1, d1), (d2, d2)).copy_from(&other.entries);
        Self { entries: m }
    }

    /// `S σ Sᵀ`. `S` must be symplectic within `tol`.
    pub fn apply_symplectic(&self, s: &DMatrix<f64>, tol: f64) -> Result<Self> {
        let dim = self.entries.nrows();
        if s.shape() != (dim, dim) {
            return Err(Error::BadShape { rows: s.nrows(), cols: s.ncols() });
        }
        let res = symplectic_residual(s);
        if res > tol {
            return Err(Error::NotSymplectic(res));
        }
        Ok(self.transform_unchecked(s))
    }

    /// `M σ Mᵀ` without checking `M`, symmetrized.
    pub(crate) fn transform_unchecked(&self, m: &DMatrix<f64>) -> Self {
        let out = m * &self.entries * m.transpose();
        Self { entries: (&out + out.transpose()) * 0.5 }
    }

    /// Swaps the order of the modes of a state.
    pub fn permute_modes(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.n_modes() {
            return Err(Error::ModeCount { expected: self.n_modes(), got: order.len() });
        }
        self.partial_trace(order)
    }

    /// Maximum absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.entries.shape() != other.entries.shape() {
            return f64::INFINITY;
        }
        (&self.entries - &other.entries).amax()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&CmWire::from(self))?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let wire: CmWire = serde_json::from_str(s)?;
        wire.try_into()
    }

    /// One CSV row per matrix row, floats in shortest round-trip form.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::WriterBuilder::new().has_headers(false).from_writer(w);
        for row in self.entries.row_iter() {
            wtr.write_record(row.iter().map(|v| v.to_string()))?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(r);
        let mut data = Vec::new();
        let mut n_rows = 0;
        for rec in rdr.records() {
            let rec = rec?;
            for field in rec.iter() {
                data.push(field.parse::<f64>().map_err(|e| Error::Parse(format!("{field:?}: {e}")))?);
            }
            n_rows += 1;
        }
        if n_rows == 0 || data.len() != n_rows * n_rows {
            return Err(Error::BadShape { rows: n_rows, cols: data.len() / n_rows.max(1) });
        }
        Self::new(DMatrix::from_row_slice(n_rows, n_rows, &data))
    }
}

/// `‖S Ω Sᵀ − Ω‖∞` (max-entry norm).
pub fn symplectic_residual(s: &DMatrix<f64>) -> f64 {
    if s.nrows() != s.ncols() || !s.nrows().is_multiple_of(2) {
        return f64::INFINITY;
    }
    let om = omega(s.nrows() / 2);
    (s * &om * s.transpose() - om).amax()
}

/// JSON shape: `{"n_modes": n, "entries": [[row0], [row1], ...]}`.
#[derive(Serialize, Deserialize)]
struct CmWire {
    n_modes: usize,
    entries: Vec<Vec<f64>>,
}

impl From<&CovarianceMatrix> for CmWire {
    fn from(cm: &CovarianceMatrix) -> Self {
        Self {
            n_modes: cm.n_modes(),
            entries: cm.entries.row_iter().map(|r| r.iter().copied().collect()).collect(),
        }
    }
}

impl TryFrom<CmWire> for CovarianceMatrix {
    type Error = Error;

    fn try_from(w: CmWire) -> Result<Self> {
        let dim = 2 * w.n_modes;
        if w.entries.len() != dim || w.entries.iter().any(|r| r.len() != dim) {
            return Err(Error::BadShape {
                rows: w.entries.len(),
                cols: w.entries.first().map_or(0, Vec::len),
            });
        }
        let flat: Vec<f64> = w.entries.into_iter().flatten().collect();
        CovarianceMatrix::new(DMatrix::from_row_slice(dim, dim, &flat))
    }
}

impl Serialize for CovarianceMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CmWire::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for CovarianceMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        CmWire::deserialize(d)?.try_into().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_bad_shapes_and_asymmetry() {
        assert!(matches!(
            CovarianceMatrix::new(DMatrix::identity(3, 3)),
            Err(Error::BadShape { .. })
        ));
        let mut m = DMatrix::identity(2, 2);
        m[(0, 1)] = 1e-3;
        assert!(matches!(CovarianceMatrix::new(m), Err(Error::NotSymmetric(_))));
    }

    #[test]
    fn partial_trace_and_direct_sum() {
        let a = CovarianceMatrix::thermal(&[2.0]);
        let b = CovarianceMatrix::thermal(&[3.0, 4.0]);
        let ab = a.direct_sum(&b);
        assert_eq!(ab.n_modes(), 3);
        assert_eq!(ab.partial_trace(&[0]).unwrap(), a);
        assert_eq!(ab.partial_trace(&[1, 2]).unwrap(), b);
        assert_eq!(ab.partial_trace(&[0, 1, 2]).unwrap(), ab);
        assert!(matches!(ab.partial_trace(&[3]), Err(Error::BadModeIndex { .. })));
        assert!(ab.partial_trace(&[1, 1]).is_err());
    }

    #[test]
    fn json_shape() {
        let cm = CovarianceMatrix::thermal(&[1.5]);
        assert_eq!(cm.to_json().unwrap(), r#"{"n_modes":1,"entries":[[1.5,0.0],[0.0,1.5]]}"#);
        assert!(CovarianceMatrix::from_json(r#"{"n_modes":2,"entries":[[1,0],[0,1]]}"#).is_err());
    }

    #[test]
    fn non_symplectic_rejected() {
        let cm = CovarianceMatrix::vacuum(1);
        let s = DMatrix::from_diagonal_element(2, 2, 2.0);
        assert!(matches!(cm.apply_symplectic(&s, 1e-10), Err(Error::NotSymplectic(_))));
    }

    proptest! {
        #[test]
        fn json_and_csv_round_trip_bit_exact(vals in proptest::collection::vec(-1e6f64..1e6, 10)) {
            // symmetric 4x4 from 10 upper-triangular entries
            let mut m = DMatrix::zeros(4, 4);
            let mut k = 0;
            for i in 0..4 {
                for j in i..4 {
                    m[(i, j)] = vals[k];
                    m[(j, i)] = vals[k];
                    k += 1;
                }
            }
            let cm = CovarianceMatrix::new(m).unwrap();
            let back = CovarianceMatrix::from_json(&cm.to_json().unwrap()).unwrap();
            prop_assert_eq!(&back, &cm);
            let mut buf = Vec::new();
            cm.write_csv(&mut buf).unwrap();
            let back = CovarianceMatrix::read_csv(buf.as_slice()).unwrap();
            prop_assert_eq!(&back, &cm);
        }
    }
}
