//! Intertwining differential operators: chiral closed forms, the
//! four-dimensional tensor construction, and channel reduction of chiral
//! correlators and waves.

pub mod chiral;
pub mod ctable;
pub mod fdelta;
pub mod reduction;
pub mod tensor;

use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::waves::WaveError;

pub use chiral::{chiral_d, chiral_e, chiral_pde_residual, ChiralIntertwiner, ChiralKind};
pub use ctable::{c_table_kernel, solve_c_table, CTable};
pub use fdelta::{a_minus, a_plus, f_delta, FDelta};
pub use reduction::{
    apply_bare_reduction, apply_chiral_reduction, reduce_wave, ReductionOutcome, WavePair, WaveReduction,
};
pub use tensor::{
    assemble_tensor_intertwiner, box_v, harmonic_project, solve_intertwiner_space, tensor_pde_residual,
    TensorIntertwiner,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IntertwinerError {
    #[error("invalid operator order: {0}")]
    InvalidOrder(String),
    #[error(
        "d1 - d2 = {0} is not an even integer; the scalar ansatz applies only when \
         d1 - d2 is even and would have to be modified otherwise"
    )]
    OddDimensionDifference(String),
    #[error("homogeneity violated: {0}")]
    NotHomogeneous(String),
    #[error("f(kappa={kappa}, L={l}, delta={delta}) is degenerate and no raising/lowering chain reaches it")]
    UnresolvableDegeneracy { kappa: u32, l: u32, delta: i64 },
    #[error("the recursions for kappa = {kappa}, L = {l} have no solution with c00 = seed")]
    InconsistentCTable { kappa: u32, l: u32 },
    #[error("points {0} and {1} are not an adjacent end pair")]
    NonAdjacentPair(usize, usize),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error(transparent)]
    Wave(#[from] WaveError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
