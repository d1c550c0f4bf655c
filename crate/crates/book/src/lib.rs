//! The guide's chapters, compiled so every snippet runs as a doctest.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/neighbors.md")]
pub mod neighbors {}

#[doc = include_str!("../../../book/src/mle.md")]
pub mod mle {}

#[doc = include_str!("../../../book/src/geomle.md")]
pub mod geomle {}

#[doc = include_str!("../../../book/src/regression.md")]
pub mod regression {}

#[doc = include_str!("../../../book/src/manifolds.md")]
pub mod manifolds {}

#[doc = include_str!("../../../book/src/benchmarks.md")]
pub mod benchmarks {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
