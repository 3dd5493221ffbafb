//! The formal model of tactic proving: obligation-set states, tactics, and
//! the transition function over a pluggable prover backend.
//!
//! A proof state is an ordered list of [`Obligation`]s; the empty list is the
//! QED state. Applying a tactic either produces a new state or fails, and a
//! failed application leaves the caller's state untouched (the identity
//! transition). Backend faults (process death, protocol violations) are typed
//! separately from tactic failure so callers can respawn instead of
//! mis-recording a failed tactic.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

/// One goal together with the hypotheses available to prove it.
///
/// Hypotheses are rendered `"name : statement"`; the name is everything
/// before the first `:`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Obligation {
    pub hypotheses: Vec<String>,
    pub goal: String,
}

impl Obligation {
    pub fn new(goal: impl Into<String>, hypotheses: Vec<String>) -> Result<Self, InvalidState> {
        let ob = Obligation {
            hypotheses,
            goal: goal.into(),
        };
        ob.validate()?;
        Ok(ob)
    }

    /// Checks the structural invariants: non-empty goal, unique hypothesis
    /// names.
    pub fn validate(&self) -> Result<(), InvalidState> {
        if self.goal.trim().is_empty() {
            return Err(InvalidState::EmptyGoal);
        }
        let mut seen: Vec<&str> = Vec::new();
        for hyp in &self.hypotheses {
            let name = hypothesis_name(hyp);
            if seen.contains(&name) {
                return Err(InvalidState::DuplicateHypothesis(name.to_string()));
            }
            seen.push(name);
        }
        Ok(())
    }
}

/// The name part of a `"name : statement"` hypothesis line.
pub fn hypothesis_name(hyp: &str) -> &str {
    match hyp.split_once(':') {
        Some((name, _)) => name.trim(),
        None => hyp.trim(),
    }
}

/// An ordered list of obligations. Index 0 is the focused obligation; the
/// order is semantic and is preserved by every operation.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProofState {
    pub obligations: Vec<Obligation>,
}

impl ProofState {
    pub fn new(obligations: Vec<Obligation>) -> Self {
        ProofState { obligations }
    }

    /// The QED state: nothing left to prove.
    pub fn qed() -> Self {
        ProofState {
            obligations: Vec::new(),
        }
    }

    pub fn is_qed(&self) -> bool {
        self.obligations.is_empty()
    }

    /// Deterministic serialization: obligations joined by `"\n---\n"`, each
    /// obligation as its goal line followed by its hypothesis lines in order.
    ///
    /// Two states with identical obligation lists have identical keys, and
    /// (for single-line goals and hypotheses, which every supported backend
    /// produces) distinct obligation lists have distinct keys.
    pub fn canonical_key(&self) -> String {
        let mut out = String::new();
        for (i, ob) in self.obligations.iter().enumerate() {
            if i > 0 {
                out.push_str("\n---\n");
            }
            out.push_str(&ob.goal);
            for hyp in &ob.hypotheses {
                out.push('\n');
                out.push_str(hyp);
            }
        }
        out
    }

    pub fn validate(&self) -> Result<(), InvalidState> {
        for ob in &self.obligations {
            ob.validate()?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InvalidState {
    #[error("obligation goal is empty")]
    EmptyGoal,
    #[error("duplicate hypothesis name `{0}`")]
    DuplicateHypothesis(String),
}

/// A single proof step. The text is whitespace-trimmed, non-empty, and has no
/// embedded newline.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Tactic(String);

impl Tactic {
    pub fn new(text: impl AsRef<str>) -> Result<Self, InvalidTactic> {
        let trimmed = text.as_ref().trim();
        if trimmed.is_empty() {
            return Err(InvalidTactic::Empty);
        }
        if trimmed.contains('\n') || trimmed.contains('\r') {
            return Err(InvalidTactic::EmbeddedNewline);
        }
        Ok(Tactic(trimmed.to_string()))
    }

    pub fn text(&self) -> &str {
        &self.0
    }
}

impl core::fmt::Display for Tactic {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Tactic {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        Tactic::new(&text).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InvalidTactic {
    #[error("tactic text is empty")]
    Empty,
    #[error("tactic text contains a newline")]
    EmbeddedNewline,
}

/// An ordered sequence of tactics.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProofScript {
    pub steps: Vec<Tactic>,
}

impl ProofScript {
    pub fn new(steps: Vec<Tactic>) -> Self {
        ProofScript { steps }
    }

    /// Parses one tactic per element; convenience for tests and loaders.
    pub fn parse(texts: &[&str]) -> Result<Self, InvalidTactic> {
        let steps = texts.iter().map(Tactic::new).collect::<Result<_, _>>()?;
        Ok(ProofScript { steps })
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// The result of applying one tactic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum TransitionOutcome {
    /// The tactic applied; an empty obligation list denotes QED.
    Applied(ProofState),
    /// The tactic did not apply. The caller's state is unchanged — this is
    /// the identity transition.
    Failed(String),
}

impl TransitionOutcome {
    pub fn is_applied(&self) -> bool {
        matches!(self, TransitionOutcome::Applied(_))
    }

    pub fn applied(&self) -> Option<&ProofState> {
        match self {
            TransitionOutcome::Applied(s) => Some(s),
            TransitionOutcome::Failed(_) => None,
        }
    }
}

/// A named theorem statement, as handed to a backend's `init`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremSpec {
    pub name: String,
    pub statement: String,
}

impl TheoremSpec {
    pub fn new(name: impl Into<String>, statement: impl Into<String>) -> Self {
        TheoremSpec {
            name: name.into(),
            statement: statement.into(),
        }
    }
}

/// A fault in the prover backend itself. Distinct from tactic failure: a
/// fault means the answer is unknown, not that the tactic was inapplicable.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BackendError {
    #[error("backend rejected theorem: {0}")]
    InitFailed(String),
    #[error("backend protocol violation: {0}")]
    Protocol(String),
    #[error("backend terminated: {0}")]
    Terminated(String),
    #[error("state not known to backend: {0}")]
    UnknownState(String),
}

/// A prover that can start a theorem and execute single proof steps.
///
/// One backend handle must not receive concurrent commands; all state values
/// are immutable and freely shareable.
pub trait EnvironmentBackend {
    /// Starts a proof of `theorem` and returns the initial state (a single
    /// obligation derived from the statement).
    fn init(&mut self, theorem: &TheoremSpec) -> Result<ProofState, BackendError>;

    /// Applies `tactic` at `state`. `state` must have been produced by this
    /// backend (or be its initial state).
    fn apply(&mut self, state: &ProofState, tactic: &Tactic)
        -> Result<TransitionOutcome, BackendError>;
}

impl<B: EnvironmentBackend + ?Sized> EnvironmentBackend for &mut B {
    fn init(&mut self, theorem: &TheoremSpec) -> Result<ProofState, BackendError> {
        (**self).init(theorem)
    }

    fn apply(
        &mut self,
        state: &ProofState,
        tactic: &Tactic,
    ) -> Result<TransitionOutcome, BackendError> {
        (**self).apply(state, tactic)
    }
}

/// Applies one tactic. On `Failed` the caller's state is unchanged.
pub fn apply_tactic<B: EnvironmentBackend + ?Sized>(
    env: &mut B,
    state: &ProofState,
    tactic: &Tactic,
) -> Result<TransitionOutcome, BackendError> {
    env.apply(state, tactic)
}

/// The end state of a tactic sequence, with the indices of steps that failed.
///
/// A failing step contributes the identity transition and the fold continues,
/// so the outcome is always a state; `failed_steps` lets callers that need
/// exact replays (e.g. data extraction) reject sequences that diverged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceOutcome {
    pub end_state: ProofState,
    pub failed_steps: Vec<usize>,
}

impl SequenceOutcome {
    pub fn reached_qed_exactly(&self) -> bool {
        self.end_state.is_qed() && self.failed_steps.is_empty()
    }
}

/// Folds [`apply_tactic`] left-to-right over `script`.
pub fn apply_tactic_sequence<B: EnvironmentBackend + ?Sized>(
    env: &mut B,
    state: &ProofState,
    script: &ProofScript,
) -> Result<SequenceOutcome, BackendError> {
    let mut current = state.clone();
    let mut failed_steps = Vec::new();
    for (i, step) in script.steps.iter().enumerate() {
        match env.apply(&current, step)? {
            TransitionOutcome::Applied(next) => current = next,
            TransitionOutcome::Failed(_) => failed_steps.push(i),
        }
    }
    Ok(SequenceOutcome {
        end_state: current,
        failed_steps,
    })
}
