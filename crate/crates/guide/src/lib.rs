//! The book chapters, compiled as doctests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/representations.md")]
pub mod representations {}

#[doc = include_str!("../../../book/src/fixed-points.md")]
pub mod fixed_points {}

#[doc = include_str!("../../../book/src/moment-graphs.md")]
pub mod moment_graphs {}

#[doc = include_str!("../../../book/src/cohomology.md")]
pub mod cohomology {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
