//! Exact harmonic analysis for the Z2^3 Dunkl Laplacian on the 2-sphere.

pub mod bi_poly;
pub mod bi_rep;
pub mod error;
pub mod harmonics;
pub mod identity;
pub mod linalg;
pub mod operator;
pub mod poly;
pub mod rational;

pub use error::{Error, Result};
pub use operator::Operator;
pub use poly::{Axis, Monomial, Params, TriPoly};
pub use rational::Rational;
