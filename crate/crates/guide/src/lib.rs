//! The guide in `book/`, compiled so its examples run as doc-tests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/means.md")]
pub mod means {}

#[doc = include_str!("../../../book/src/weak-monotonicity.md")]
pub mod weak_monotonicity {}

#[doc = include_str!("../../../book/src/penalties.md")]
pub mod penalties {}

#[doc = include_str!("../../../book/src/robust.md")]
pub mod robust {}

#[doc = include_str!("../../../book/src/transforms.md")]
pub mod transforms {}

#[doc = include_str!("../../../book/src/filter.md")]
pub mod filter {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
