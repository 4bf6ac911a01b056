//! Compile systems of polynomial equations into finite normal-form games
//! whose totally mixed Nash equilibria reproduce the solution set.
//!
//! The crate is organised bottom-up:
//!
//! - [`polysys`]: exact multivariate polynomials, parsing, Horner trees,
//!   interval bounds and the change of variables into the unit simplex.
//! - [`game`]: normal-form games with exact payoff tensors, expected
//!   payoffs and indifference residuals.
//! - [`synth`]: payoff synthesis from prescribed multilinear indifference
//!   equations, and its inverse.
//! - [`encoders`]: the three-player Horner-chain encoding, the binary-player
//!   encoding, and the compact univariate encoding, each with a replayable
//!   witness.
//! - [`verify`]: desk-scale oracles (point checks, real-root isolation,
//!   grid completeness, winding numbers).

pub mod encoders;
pub mod error;
pub mod game;
pub mod polysys;
pub mod rational;
pub mod synth;
pub mod verify;

pub use error::{Error, Result};
pub use rational::{Rational, Scalar};
