//! Spin-1 (qutrit) states as a Bloch vector plus an ellipsoid.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod io;
pub mod linalg;
pub mod purestates;
pub mod sampling;
pub mod spin1;
pub mod state;
pub mod tol;
