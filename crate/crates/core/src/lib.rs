//! Active subspaces of airfoil shape parameterizations.
//!
//! Shapes are built from PARSEC or CST parameters ([`parsec`], [`cst`]) on a
//! shared polynomial-in-`sqrt(l)` representation ([`geometry`]). Samples are
//! drawn uniformly from a parameter box in normalized coordinates
//! ([`sampling`]), mapped through a quantity of interest ([`qoi`]), and fit
//! with a global quadratic whose gradient outer product yields the active
//! subspace ([`activesubspace`]). [`analysis`] covers shadow plots, link
//! functions and the lift/drag trade-off segment.

// `!(a < b)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod activesubspace;
pub mod analysis;
pub mod cst;
pub mod error;
pub mod geometry;
pub mod io;
pub mod linalg;
pub mod parsec;
pub mod qoi;
pub mod sampling;
pub mod seeding;

pub use error::{Error, Result};
