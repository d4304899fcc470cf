//! The guide's chapters, compiled as documentation so their examples run as
//! doc-tests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/sensing.md")]
pub mod sensing {}

#[doc = include_str!("../../../book/src/partition.md")]
pub mod partition {}

#[doc = include_str!("../../../book/src/objective.md")]
pub mod objective {}

#[doc = include_str!("../../../book/src/control.md")]
pub mod control {}

#[doc = include_str!("../../../book/src/simulation.md")]
pub mod simulation {}
