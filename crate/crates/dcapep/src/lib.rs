//! Worst-case analysis toolkit for the difference-of-convex algorithm.
//!
//! The crate bundles, behind one library API:
//!
//! * [`instances`] — a DC-instance model (component oracles, an exact
//!   subproblem solver, declared function-class parameters, a known lower
//!   bound) plus the built-in families: convex quadratics, the
//!   one-dimensional family on which the gradient-gap rate is attained
//!   exactly, the nonsmooth decomposition on which the gradient-gap
//!   stopping rule never fires, and a quadratic family with linear
//!   convergence of objective values.
//! * [`dca`] — the algorithm itself with both stopping rules
//!   (gradient gap and model decrease), recording complete traces.
//! * [`analysis`] — interpolation-condition checking for smooth strongly
//!   convex classes, and the extended descent lemma.
//! * [`bounds`] — every closed-form worst-case bound, with exact symbolic
//!   handling of infinite smoothness moduli.
//! * [`pep`] — the Gram-matrix semidefinite performance-estimation
//!   problems behind those bounds: building, solving, SDPA export/import,
//!   and feasible points extracted from real runs.
//! * [`sdpsolve`] — a self-contained dense primal-dual interior-point
//!   solver sized for these problems.
//! * [`certify`] — machine verification of the proofs' dual certificates:
//!   multiplier formulas, nonnegativity on parameter grids, and the
//!   completion-of-squares identities checked by randomized evaluation.
//!
//! Runnable walkthroughs for each capability live in `examples/`; the thin
//! `dcapep` binary exposes the same operations as subcommands.

pub mod analysis;
pub mod bounds;
pub mod certify;
pub mod config;
pub mod dca;
mod error;
pub mod instances;
pub mod params;
pub mod pep;
pub mod sdpsolve;

pub use error::{Error, Result};
pub use params::{ExtReal, FunctionClassParams, Smoothness};
