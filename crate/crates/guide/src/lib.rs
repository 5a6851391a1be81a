//! Compiles the chapters under `book/src` as doctests so that every code
//! listing in the guide is checked by `cargo test`.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/threshold.md")]
pub mod threshold {}
#[doc = include_str!("../../../book/src/closed_form.md")]
pub mod closed_form {}
#[doc = include_str!("../../../book/src/simulation.md")]
pub mod simulation {}
#[doc = include_str!("../../../book/src/experiments.md")]
pub mod experiments {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
