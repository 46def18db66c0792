//! Exact conformal partial waves in two dimensions, intertwining
//! differential operators, and the six-point positivity data built from them.
//!
//! Everything is computed over arbitrary-precision rationals; series are
//! formal and truncated at an explicit total degree.

pub mod algebra;
pub mod exotic;
pub mod intertwiners;
pub mod waves;
