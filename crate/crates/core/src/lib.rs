//! Numerical laboratory for Bohr-type inequalities of power series with
//! square-matrix coefficients.
//!
//! The building blocks are the operator norm ([`linalg`]), truncated
//! one-variable series and their majorant functionals ([`series`]), the
//! closed-form extremals ([`extremals`]), radius equations ([`radii`]),
//! inequality checks with sharpness sweeps ([`inequality`]), seeded samplers
//! of contractive series ([`sampler`]) and the several-variable layer on
//! circular domains ([`multidim`]). [`report`] assembles the tables printed
//! by the `bohr` binary.

pub mod error;
pub mod extremals;
pub mod inequality;
pub mod linalg;
pub mod multidim;
pub mod radii;
pub mod report;
pub mod sampler;
pub mod series;

pub use error::{BohrError, Result};
pub use linalg::{operator_norm, ComplexMatrix};
pub use series::{MatrixSeries1D, ScalarSeries};
