//! Convergence-rate estimation by Richardson extrapolation for linear advection of
//! a discontinuity.
//!
//! The crate bundles five explicit advection schemes, the three-solution rate
//! estimator in each of its orderings, and the modified-equation similarity
//! profiles that predict which ordering recovers the `p / (p + 1)` rate.

pub mod error;
pub mod grid;
pub mod harness;
pub mod richardson;
pub mod schemes;
pub mod similarity;

pub use error::{Error, Result};
pub use grid::{coincident_difference, l1_distance, l1_norm, make_jump_function, Grid1D, GridFunction1D, JumpIC};
pub use richardson::{estimate_all_orderings, norm_ratio, solve_rate, Ordering, RateEstimate, RefinementTriple};
pub use schemes::{integrate_to, minmod, smooth_convergence_order, step, SchemeKind, SchemeSpec};
