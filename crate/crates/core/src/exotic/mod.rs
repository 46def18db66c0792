//! The six-point structures with double poles, their 2D restriction, the
//! biharmonic series `g`, channel reduction coefficients, the chiral 4-point
//! amplitude expansion and the positivity blocks built from them.

pub mod amplitudes;
pub mod channel;
pub mod gseries;
pub mod positivity;
pub mod structures;

use thiserror::Error;

use crate::algebra::AlgebraError;

pub use amplitudes::{pw4_expand, pw4_residual, AmplitudeMatrix};
pub use channel::{
    c_ah, channel_coefficient, channel_coefficient_via_g, expected_channel_coefficient, f_polynomial,
    g_b_at_one, reduce_sixpoint, ChannelStructure, FourPointW, SixPointReduction, Weighting,
};
pub use gseries::{g_coefficient, g_series, verify_g_biharmonic, BiharmonicResidual, GMethod, GSeries};
pub use positivity::{inertia, positivity_report, Block, Inertia, PositivityReport};
pub use structures::{
    build_structure, chiral_factor_series, closed_form_2d, common_prefactor, double_sum_form,
    e6_numerator_expanded, restrict_2d, ClosedForm2d, Restricted2d, SixPointStructure, StructureName,
    XMonomial,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExoticError {
    #[error("chiral weights must be >= 1, got {0}")]
    WeightBelowOne(i64),
    #[error("series cap {cap} is too small, need at least {min}")]
    CapTooSmall { cap: u32, min: u32 },
    #[error("structure {0} has no 4D monomial form")]
    NoMonomialForm(String),
    #[error("reduced structure is not conformally invariant at point {0}")]
    NonzeroWeight(usize),
    #[error("assembled block for k = ({0}, {1}) is not symmetric")]
    AsymmetricBlock(String, String),
    #[error("positivity cutoffs need hmax >= 2, got {0}")]
    BadCutoff(u32),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
