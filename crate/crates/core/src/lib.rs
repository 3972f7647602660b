//! Quantum and classical correlations of Gaussian states.
//!
//! Covariance-matrix algebra, Gaussian quantum discord and one-way classical
//! correlations of two-mode states, Gaussian entanglement of formation, the
//! named state families, and Monte Carlo checks of the inequalities relating
//! them.

// negated comparisons deliberately reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cm;
pub mod discord;
pub mod entanglement;
pub mod entropy;
pub mod error;
pub mod experiments;
pub mod families;
pub mod optimize;
pub mod symplectic;
pub mod two_mode;

pub use cm::CovarianceMatrix;
pub use error::{Error, Result};
