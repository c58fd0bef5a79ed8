//! The chapters of the guide in `book/src`, included so that every Rust
//! snippet runs under `cargo test`.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/gf2.md")]
pub mod gf2 {}

#[doc = include_str!("../../../book/src/codes.md")]
pub mod codes {}

#[doc = include_str!("../../../book/src/coset-graphs.md")]
pub mod coset_graphs {}

#[doc = include_str!("../../../book/src/conditions.md")]
pub mod conditions {}

#[doc = include_str!("../../../book/src/bounds.md")]
pub mod bounds {}

#[doc = include_str!("../../../book/src/recovery.md")]
pub mod recovery {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
