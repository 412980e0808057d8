//! Exact verification of invariant contact Calabi–Yau geometry on Lie algebras.
//!
//! Everything is generic over a [`scalar::Scalar`]; verification runs over
//! [`Rational`]. Floating point appears only in comass sampling.

pub mod algdsl;
pub mod cealg;
pub mod classify;
pub mod curvature;
pub mod deform;
pub mod error;
pub mod exterior;
pub mod legendrian;
pub mod linalg;
pub mod poly;
pub mod presets;
pub mod report;
pub mod scalar;
pub mod structures;

pub use error::{CheckFailure, Error, FailureKind, Result};
pub use scalar::Rational;

/// Exact forms, vectors and algebras.
pub type QForm = exterior::KForm<Rational>;
pub type QComplexForm = exterior::ComplexKForm<Rational>;
pub type QVector = exterior::Vector<Rational>;
pub type QEndo = exterior::Endo<Rational>;
pub type QMetric = exterior::Metric<Rational>;
pub type QMatrix = linalg::Matrix<Rational>;
pub type QAlgebra = cealg::LieAlgebra<Rational>;
