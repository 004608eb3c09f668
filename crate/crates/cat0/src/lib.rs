//! Toolkit for free-group presentations whose 2-complexes are candidate
//! non-positively curved square complexes.
//!
//! The crate provides, in rough dependency order:
//!
//! - [`word`]: reduced words, cyclic words and free-group endomorphisms;
//! - [`presentation`]: finite presentations, abelianization, mapping tori,
//!   the zero-exponent conjugate rewriting and the zigzag relator family;
//! - [`cancel`]: symmetrized sets, pieces and the metric small cancellation
//!   conditions;
//! - [`npc`]: the length-4 relator curvature test, both as subword
//!   conditions and as link-graph girth;
//! - [`squarify`]: turning even-length relators into all-length-4
//!   presentations, by the anchored template or by schedule search;
//! - [`bns`]: relator walks, convex hulls and character classification for
//!   two-generator one-relator groups;
//! - [`hnn`]: immersions, bounded periodic-conjugacy searches, fixed-word
//!   prefix scans and the random endomorphism experiment.
//!
//! Everything is deterministic: random subcommands take explicit seeds and
//! use a portable stream cipher generator.
//!
//! The `cat0` binary wires these up as subcommands; the `examples/`
//! directory has one runnable walkthrough per capability.

pub mod bns;
pub mod cancel;
pub mod cli;
pub mod hnn;
pub mod npc;
pub mod presentation;
pub mod samples;
pub mod snf;
pub mod squarify;
pub mod word;

pub use presentation::Presentation;
pub use word::{Alphabet, CyclicWord, Endomorphism, Letter, Sign, Word};
