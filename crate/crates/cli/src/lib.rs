//! Command-line front end of the singular boundary integral solver: run
//! configuration, builtin exact solutions, table readers, the `solve` and
//! `convergence` commands, and the verification suites.

// `!(x > 0.0)` style guards are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod builtin;
pub mod check;
pub mod commands;
pub mod config;
pub mod error;
pub mod oracles;
pub mod suites;
pub mod tables;
