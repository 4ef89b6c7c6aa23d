//! CD-type tests for cross-section dependence in panel residuals, the
//! estimators that produce those residuals, and a Monte Carlo harness.

pub mod cli;
pub mod dgp;
pub mod error;
pub mod estimators;
pub mod linalg;
pub mod mc_harness;
pub mod panel;
pub mod random;
pub mod references;
