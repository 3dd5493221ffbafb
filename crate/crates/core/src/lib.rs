//! Core library for proofmill: obligation-set proof states, a deterministic
//! toy interactive theorem prover over Peano naturals, prompt serialization,
//! guided proof search, proof-tree analytics, dataset extraction, and
//! pass@k / bootstrap evaluation.
//!
//! This crate is `no_std` (with `alloc`). Everything that touches processes,
//! sockets, or the filesystem lives in the companion `proofmill` crate; the
//! search and extraction code here is written against the small
//! [`kernel::EnvironmentBackend`], [`search::StatePool`], and
//! [`search::Stopwatch`] traits so it can be driven either by the in-process
//! toy prover or by external prover processes.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod eval;
pub mod extract;
pub mod generate;
pub mod kernel;
pub mod mini;
pub mod prompt;
pub mod search;
pub mod tree;

pub use kernel::{
    BackendError, EnvironmentBackend, Obligation, ProofScript, ProofState, Tactic, TheoremSpec,
    TransitionOutcome,
};
