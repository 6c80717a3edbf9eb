//! Long-form guide to the crate, mirrored from the rendered book under
//! `book/`.
//!
//! Each submodule's documentation is one chapter, included verbatim from
//! the book's markdown source. Because the chapters live in doc comments,
//! every code block in the book compiles and runs as a doc-test — the book
//! cannot silently drift away from the library.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/architectures.md")]
pub mod architectures {}

#[doc = include_str!("../../../book/src/noise_anatomy.md")]
pub mod noise_anatomy {}

#[doc = include_str!("../../../book/src/phase_noise.md")]
pub mod phase_noise {}

#[doc = include_str!("../../../book/src/monte_carlo.md")]
pub mod monte_carlo {}

#[doc = include_str!("../../../book/src/experiments.md")]
pub mod experiments {}
