//! Numerical laboratory for ρ-generalized Baskakov operators.
//!
//! The crate evaluates the classical Baskakov operators, their ρ-generalized
//! form, and the ρ-Szász–Mirakyan comparison family with certified series
//! truncation; computes exact and series ρ-moments; measures weighted-space
//! error norms and the weighted modulus of continuity; verifies the
//! quantitative convergence bounds and the Voronovskaya limit; and simulates
//! A-statistical convergence under summability matrices.
//!
//! All numerics are generic over a [`real::Real`] scalar; the aliases at the
//! crate root pin the default `f64` pipeline used by the CLI and the
//! verification suite.

pub mod astat;
pub mod error;
pub mod moments;
pub mod operator;
pub mod real;
pub mod rho;
pub mod suite;
pub mod weighted;

pub use error::{Error, Result};
pub use real::Real;

/// Default double-precision aliases.
pub type RhoMap64 = rho::RhoMap<f64>;
pub type OperatorSpec64 = operator::OperatorSpec<f64>;
pub type TruncationPolicy64 = operator::TruncationPolicy<f64>;
pub type WeightTable64 = operator::WeightTable<f64>;
pub type Evaluation64 = operator::Evaluation<f64>;
pub type WeightedSpace64 = weighted::WeightedSpace<f64>;
pub type SupGrid64 = weighted::SupGrid<f64>;
pub type FunctionInSpace64 = weighted::FunctionInSpace<f64>;
pub type SummabilityMatrix64 = astat::SummabilityMatrix<f64>;
pub type IndexSet64 = astat::IndexSet;
