//! Numerics for proper-time localization of a spinless relativistic particle.

pub mod charts;
pub mod classical;
pub mod specfun;
pub mod operators;
pub mod extensions;
pub mod povm;
pub mod error;
pub mod measure;
pub mod params;
pub mod quadrature;

#[cfg(test)]
mod proptests;

pub use charts::{
    lambda_to_Lambda, to_hyperbolic, CartesianMomentum, HyperbolicMomentum, Lambda_to_lambda,
    SphericalMomentum,
};
pub use error::{Error, Result};
pub use measure::{Measure, MeasureKind};
pub use params::{ModelParams, Sign};
pub use quadrature::{Integral, QuadConfig, DEFAULT_TOL};
