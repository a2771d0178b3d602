//! Optimal rescaling of finite frames and edge reweighting of graphs.
//!
//! A frame is a spanning family of vectors `f_1, ..., f_M` in `R^N`, stored as
//! the `N x M` matrix whose columns are the vectors. Rescaling each vector by
//! a nonnegative weight `u_i` (the squared scale) changes the frame operator
//! to `S_u = sum_i u_i f_i f_i^T`. The [`conditioners`] module finds weights
//! that minimize
//!
//! * the operator-norm distance `||I - S_u||_2`, equivalently the condition
//!   number of `S_u` ([`conditioners::solve_sdp1`], [`conditioners::solve_sdp2`]),
//! * the spectral gap `lambda_max - lambda_min` at unit average eigenvalue
//!   ([`conditioners::solve_sdp3`]),
//! * the Frobenius distance `||I - S_u||_F` ([`conditioners::solve_qp4`]).
//!
//! The [`graphs`] module applies the same machinery to the columns of a
//! graph incidence matrix restricted to the complement of the constant
//! vector, producing edge weights for which the nonzero Laplacian spectrum
//! is as well conditioned as possible.

pub mod cli;
pub mod conditioners;
pub mod error;
pub mod frames;
pub mod graphs;
pub mod spectral;

pub use error::{Error, Result};
