//! Verification, output formats and command line for the Steklov solvers in
//! [`steklov_core`].
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod output;
pub mod verify;
