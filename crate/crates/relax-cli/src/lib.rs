//! Descriptor-driven experiment runner on top of `relax-core`.
//!
//! - [`descriptor`]: the TOML experiment schema and its validation.
//! - [`run`]: executes a descriptor on one of the engines.
//! - [`compare`]: z-score comparison of two series files.
//! - [`output`]: output files and the provenance sidecar.

pub mod compare;
pub mod descriptor;
pub mod output;
pub mod run;
