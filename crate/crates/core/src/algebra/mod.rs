//! Exact arithmetic substrate: rationals, polynomials, pair-power Laurent
//! monomials, truncated power series, special values and linear solving.

pub mod laurent;
pub mod linsolve;
pub mod poly;
pub mod rational;
pub mod series;
pub mod special;

use thiserror::Error;

pub use laurent::{FactoredLaurent, Pair, PairMonomial, PairSum};
pub use linsolve::{linear_solve_exact, LinearSolution};
pub use poly::{Monomial, MultiPoly};
pub use rational::{parse_rational, q, qq, Rational};
pub use series::TruncatedSeries;
pub use special::{gauss2f1_coeff, legendre, pochhammer};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("symbol lists differ: {left:?} vs {right:?}")]
    VariableMismatch { left: Vec<String>, right: Vec<String> },
    #[error("unknown symbol {0}")]
    UnknownSymbol(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("2F1 series has a pole: (c)_{order} = 0 for c = {c}")]
    HypergeometricPole { c: String, order: u32 },
    #[error("cannot reorient x{}{} with non-integer exponent {exponent}", pair.0, pair.1)]
    SignOfNonIntegerPower { pair: (usize, usize), exponent: String },
    #[error("coincidence limit of x{}{} is singular (exponent {exponent})", pair.0, pair.1)]
    SingularCoincidence { pair: (usize, usize), exponent: String },
    #[error(
        "exponent offset {0} is not a non-negative integer; sums are not comparable as rational functions"
    )]
    NonIntegralOffset(String),
    #[error("numerator must be constant for this conversion")]
    NonConstantNumerator,
    #[error("series has no multiplicative inverse (zero constant term)")]
    NotInvertible,
    #[error("parse error: {0}")]
    Parse(String),
}
