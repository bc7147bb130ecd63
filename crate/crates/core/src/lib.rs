//! Means, penalty minimisers and robust estimators, with sampling checks for monotonicity along the diagonal.
//!
//! The crate collects mean families ([`means`]), penalty-based means and
//! their minimiser ([`penalty`]), robust location estimators
//! ([`robust`]), a sampling-based property checker ([`verify`]),
//! constructions on aggregators ([`transforms`]) and spatial-tonal image
//! filters ([`filter`]).
//!
//! A function `F` is *weakly monotone* when `F(x + a·1) ≥ F(x)` for every
//! `a > 0`: it need not increase when a single input increases, only when
//! all inputs increase together. Every shift-invariant function is weakly
//! monotone, which covers the mode, the shorth and the other robust
//! estimators here even though none of them is monotone.
//!
//! ```
//! use weakmean::robust::mode;
//!
//! // Adding the same vector to the inputs can lower the mode...
//! assert_eq!(mode(&[1.0, 1.0, 2.0, 2.0, 3.0, 3.0, 3.0]).unwrap(), 3.0);
//! assert_eq!(mode(&[2.0, 2.0, 2.0, 2.0, 3.0, 3.0, 3.0]).unwrap(), 2.0);
//! // ...but shifting every input by one shifts the mode by one.
//! assert_eq!(mode(&[2.0, 2.0, 3.0, 3.0, 4.0, 4.0, 4.0]).unwrap(), 4.0);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod domain;
pub mod error;
pub mod filter;
pub mod means;
pub mod penalty;
pub mod robust;
pub mod transforms;
pub mod verify;

pub use domain::{InputVector, Interval, ScalarFunction, WeightVector};
pub use error::{Error, Result};
