//! Robust long-term growth rates of leveraged ETFs.
//!
//! A leveraged ETF holds a constant multiple `β` of a reference index and
//! finances the rest at the short rate. Given an uncertainty box for the
//! reference model's parameters and a power utility `x^p`, this crate
//! computes the worst-case long-run growth rate
//! `Λ(β) = lim (1/T) log inf_α E[L_T^p]`, finds the leverage that maximizes it,
//! and checks both against a Monte-Carlo oracle.
//!
//! * [`types`]: intervals, parameter boxes, result records, validation.
//! * [`analytic`]: closed-form `Λ(β)` and worst-case selectors.
//! * [`optimizer`]: `β*` by closed form, candidate set or certified grid.
//! * [`mc`]: SDE simulation of `E[L_T^p]` and dominance checks.
//! * [`search`]: grid plus golden-section maximization used by the inner solves.

// `!(x > 0.0)` is used on purpose so NaN is rejected with the invalid values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod error;
pub mod mc;
pub mod optimizer;
pub mod search;
pub mod types;

pub use error::{Error, Result};
pub use types::*;
