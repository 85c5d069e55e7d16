//! A proof checker for higher-order Tarski-Grothendieck set theory.
//!
//! The crate is organized around a small trusted core and untrusted
//! conveniences layered on top:
//!
//! - [`term`]: types, de Bruijn terms, substitution, beta-eta normalization
//!   and convertibility.
//! - [`kernel`]: the fixed axiom set, proof-term verification and the
//!   append-only signature of definitions and theorems.
//! - [`canonical`]: deterministic serialization of checked signatures;
//!   importing re-checks everything, so the import path is an independent
//!   re-verifier.
//! - [`syntax`]: lexer, parser and pretty-printer for the `.hotg` article
//!   language.
//! - [`script`]: deterministic elaboration of proof scripts into kernel
//!   proof terms. The elaborator is untrusted; the kernel re-checks its
//!   output.
//! - [`cli`]: the batch driver behind the `hotg` binary: import resolution,
//!   article checking, reports, digests and canonical exports.
//! - [`hf`]: a brute-force hereditarily-finite-set model used by the test
//!   suite as an independent oracle for first-order instances. Never used
//!   by the kernel.
//!
//! See the `examples/` directory for runnable tours of each capability.

pub mod canonical;
pub mod cli;
pub mod hf;
pub mod kernel;
pub mod script;
pub mod syntax;
pub mod term;
