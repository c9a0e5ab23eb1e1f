//! Secure C-RAN downlink design.
//!
//! A control unit encodes confidential per-UE messages, linearly precodes
//! them, and compresses the baseband signals for transfer to radio units
//! over capacity-limited fronthaul links. Quantization noise added by the
//! compression step doubles as artificial noise against eavesdropping
//! UEs. This crate jointly optimizes the transmit covariances and the
//! (possibly correlated, i.e. multivariate) quantization-noise covariance
//! to maximize the weighted secrecy sum-rate under per-RU fronthaul and
//! power constraints, using a concave-convex procedure whose convex
//! subproblems are solved by a log-barrier Newton method.
//!
//! Start from [`model::SystemConfig`] and [`strategies::run_strategy`] for
//! single designs, or [`experiments::run_sweep`] for Monte Carlo
//! comparisons of the four design strategies (secure/non-secure x
//! multivariate/point-to-point compression). The `examples/` directory
//! has one runnable example per capability; the `secran` binary exposes
//! the same flows as `simulate`, `sweep`, `plot` and `selftest`
//! subcommands.

pub mod cmatrix;
pub mod error;
pub mod hermitian;
pub mod model;
pub mod rates;
pub mod subproblem;
pub mod cccp;
pub mod strategies;
pub mod experiments;
pub mod plot;
pub mod selftest;

pub use error::{Error, Result};
