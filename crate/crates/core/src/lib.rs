//! Computation and verification kernel for spinor bundles over round spheres
//! and their antipodal quotients.
//!
//! The crate is organized in layers: exact scalars and small matrices
//! ([`scalar`], [`matrix`]), abstract Clifford algebras and their gamma-matrix
//! models ([`clifford`], [`gamma`]), polynomial spinor fields on the ambient
//! space with the sphere's harmonic calculus ([`poly`], [`field`]), the bundle
//! geometry — lifts, quotient sections, connection, curvature, splitting —
//! ([`bundle`]), and the Dirac operator with its spectra ([`spectrum`]).
//! [`suites`] packages the named verification suites shared by the CLI and the
//! integration tests; [`report`] holds the serializable result types.

pub mod bundle;
pub mod clifford;
pub mod error;
pub mod field;
pub mod gamma;
pub mod matrix;
pub mod poly;
pub mod report;
pub mod scalar;
pub mod spectrum;
pub mod suites;

pub use error::{Error, Result};
