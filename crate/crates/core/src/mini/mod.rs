//! A fully deterministic toy interactive theorem prover over Peano naturals.
//!
//! It exists so the rest of the pipeline — extraction, prompting, search,
//! evaluation — is testable end to end without a real prover installation,
//! and it doubles as the reference implementation of the prover wire
//! protocol (the `mini-itp` binary in the companion crate wraps
//! [`MiniBackend`] behind that protocol).

pub mod corpus;
pub mod rewrite;
pub mod syntax;
pub mod tactics;

pub use corpus::{CorpusError, TheoremEntry, TheoremFile};
pub use syntax::{parse_statement, print_statement, Statement, SyntaxError, Term};
pub use tactics::{apply_state, enumerate_applicable_tactics, parse_tactic, MiniTactic};

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::kernel::{
    BackendError, EnvironmentBackend, Obligation, ProofState, Tactic, TheoremSpec,
    TransitionOutcome,
};

/// The in-process backend. Pure and stateless: states are values, so any
/// well-formed state can be applied to, and identical inputs always produce
/// identical outcomes.
#[derive(Debug, Clone, Copy, Default)]
pub struct MiniBackend;

impl MiniBackend {
    pub fn new() -> Self {
        MiniBackend
    }

    /// The initial state for a statement: a single obligation with no
    /// hypotheses, printed in canonical form.
    pub fn initial_state(statement: &str) -> Result<ProofState, BackendError> {
        let stmt = parse_statement(statement.trim())
            .map_err(|e| BackendError::InitFailed(format!("{e}")))?;
        Ok(ProofState::new(vec![Obligation {
            hypotheses: Vec::new(),
            goal: print_statement(&stmt),
        }]))
    }
}

impl EnvironmentBackend for MiniBackend {
    fn init(&mut self, theorem: &TheoremSpec) -> Result<ProofState, BackendError> {
        MiniBackend::initial_state(&theorem.statement)
    }

    fn apply(
        &mut self,
        state: &ProofState,
        tactic: &Tactic,
    ) -> Result<TransitionOutcome, BackendError> {
        Ok(apply_state(state, tactic))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{apply_tactic_sequence, ProofScript};

    #[test]
    fn worked_derivation_zero_add() {
        // forall n, Z + n = n  by  intro n; induction n; simp; simp; rw IH.
        // After induction the state has two obligations; the first simp
        // closes Z + Z = Z, the second simp and rw IH close the step case.
        let mut env = MiniBackend::new();
        let theorem = TheoremSpec::new("zero_add", "forall n, Z + n = n");
        let state = env.init(&theorem).unwrap();
        let script =
            ProofScript::parse(&["intro n", "induction n", "simp", "simp", "rw IH"]).unwrap();

        let mut current = state;
        let mut seen = Vec::new();
        for step in &script.steps {
            match env.apply(&current, step).unwrap() {
                TransitionOutcome::Applied(next) => {
                    seen.push((step.text().to_string(), next.canonical_key()));
                    current = next;
                }
                TransitionOutcome::Failed(msg) => panic!("step `{step}` failed: {msg}"),
            }
        }
        assert!(current.is_qed());
        // After induction: two obligations, base first.
        let after_induction = &seen[1].1;
        assert!(after_induction.starts_with("Z + Z = Z"));
        assert!(after_induction.contains("---"));
        // After the first simp only the step case remains.
        assert!(seen[2].1.starts_with("Z + S n' = S n'"));
    }

    #[test]
    fn sequence_replay_via_kernel_fold() {
        let mut env = MiniBackend::new();
        let state = MiniBackend::initial_state("forall n, n + Z = n").unwrap();
        let script = ProofScript::parse(&["intro n", "simp"]).unwrap();
        let out = apply_tactic_sequence(&mut env, &state, &script).unwrap();
        assert!(out.reached_qed_exactly());
    }

    #[test]
    fn init_rejects_garbage() {
        let mut env = MiniBackend::new();
        let err = env.init(&TheoremSpec::new("bad", "not a statement"));
        assert!(matches!(err, Err(BackendError::InitFailed(_))));
    }
}
