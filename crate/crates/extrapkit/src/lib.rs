//! Exact calculus of rearrangements, K/J-functionals and extrapolation
//! functors on piecewise-constant functions.
//!
//! The crate is organized around a single carrier type, [`StepFn`], a
//! nonnegative piecewise-constant function on a finite interval `(0, L]`.
//! Everything downstream is built so that integrals of step data are exact
//! (piecewise closed forms) and quadrature only enters where a weight has no
//! antiderivative in elementary terms.
//!
//! Modules:
//! - [`stepfn`]: rearrangements, K/J-functionals for the pair `(L^1, L^inf)`,
//!   near-optimal truncation decompositions.
//! - [`norms`]: endpoint and limiting-space norms (Lorentz, Zygmund,
//!   Marcinkiewicz, grand Lebesgue, ...).
//! - [`envelope`]: the concave envelope `tau(t) = inf_theta M(theta) t^theta`,
//!   representing measures and the Calderon-type transform they induce.
//! - [`functors`]: sum/intersection/lattice extrapolation functor norms over
//!   the `L^p` scale and scale K-functionals.
//! - [`operators`]: Hardy-type model operators, operator-norm lower bounds and
//!   endpoint inequality checks.
//! - [`bilinear`]: multiplicative convolution of K-curves and bilinear
//!   extrapolation bounds.
//! - [`schatten`]: the non-commutative specialization on finite matrices.
//! - [`verify`]: the acceptance harness run by the CLI `verify` subcommand.

pub mod bilinear;
pub mod config;
pub mod envelope;
pub mod functors;
pub mod grid;
pub mod norms;
pub mod operators;
pub mod quad;
pub mod report;
pub mod schatten;
pub mod stepfn;
pub mod testfn;
pub mod verify;

mod error;

pub use config::Config;
pub use error::{Error, Result};
pub use stepfn::{KCurve, StepFn};
