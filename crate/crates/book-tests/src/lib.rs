//! The guide's code listings, compiled and run as doc-tests.

#[doc = include_str!("../../../book/src/overview.md")]
pub mod overview {}

#[doc = include_str!("../../../book/src/scenarios.md")]
pub mod scenarios {}

#[doc = include_str!("../../../book/src/macro.md")]
pub mod macro_models {}

#[doc = include_str!("../../../book/src/cell_psi.md")]
pub mod cell_psi {}

#[doc = include_str!("../../../book/src/correctors.md")]
pub mod correctors {}

#[doc = include_str!("../../../book/src/reference.md")]
pub mod reference {}

#[doc = include_str!("../../../book/src/harness.md")]
pub mod harness {}

#[doc = include_str!("../../../book/src/config.md")]
pub mod config {}
