use thiserror::Error;

use crate::poly::Axis;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("polynomial has a term with zero exponent on axis {axis}; not divisible by that coordinate")]
    NotDivisible { axis: Axis },

    #[error("term of degree {term_degree} cannot be lifted to degree {target_degree} by powers of r^2")]
    ParityMismatch { term_degree: u32, target_degree: u32 },

    #[error("operator carries an odd power ({power}) of sqrt(2); its image is not rational")]
    IrrationalScale { power: i32 },

    #[error("cannot add operators whose sqrt(2) powers differ in parity ({left} vs {right})")]
    MixedScale { left: i32, right: i32 },

    #[error("recurrence denominator vanishes at n = {n}")]
    DegenerateDenominator { n: usize },

    #[error("negative radicand in {what}: {value}")]
    NegativeRadicand { what: String, value: String },

    #[error("inadmissible harmonic index (N={big_n}, n={n}, e=({e1},{e2},{e3}))")]
    InadmissibleIndex { big_n: u32, n: u32, e1: u8, e2: u8, e3: u8 },

    #[error("index {index} out of range 0..={max}")]
    IndexOutOfRange { index: u32, max: u32 },

    #[error("harmonic {index} of degree {degree} is not an Omega eigenvector with eigenvalue {expected}")]
    SpectralMismatch { degree: u32, index: usize, expected: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("cannot parse rational from {0:?}")]
    ParseRational(String),

    #[error("cannot parse polynomial: {0}")]
    ParsePoly(String),

    #[error("gamma function pole at {0}")]
    GammaPole(String),

    #[error("terms of a basis function are not rationally related: {0}")]
    IrrationalCombination(String),
}

pub type Result<T> = std::result::Result<T, Error>;
