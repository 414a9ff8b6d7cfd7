//! Numerical lab for the radial relativistic membrane in (u, v) variables:
//! blow-up simulation by characteristics-aware finite volumes, plus checks of
//! the characteristic identities and invariant-region bounds.

// `!(x > 0.0)` is used on purpose so NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod charcalc;
pub mod initdata;
pub mod profile;
pub mod solver;
pub mod tracer;
pub mod transform;
pub mod types;
pub mod verify;

pub use types::*;
