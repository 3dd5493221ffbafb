//! Serialization of proof states into model prompts and parsing of model
//! responses back into tactics.
//!
//! The prompt grammar (format `v1`) is normative and byte-stable:
//!
//! ```text
//! Goals to prove:
//! [GOALS]
//! [GOAL] 1
//!  <goal text>
//! [HYPOTHESES] 1
//! [HYPOTHESIS] <hypothesis>
//! ...
//! [GOAL] 2
//! ...
//! [END]
//! ```
//!
//! Responses wrap a single tactic between `[RUN TACTIC]` and `[END]`.
//!
//! Nothing in a prompt identifies the prover or problem domain that produced
//! the state: two states with identical goals and hypotheses serialize to
//! identical bytes no matter which backend they came from.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::kernel::{InvalidTactic, Obligation, ProofState, Tactic};

/// Version tag recorded in every result file that carries prompts.
pub const PROMPT_FORMAT_VERSION: &str = "v1";

pub const GOALS_HEADER: &str = "Goals to prove:";
pub const GOALS_MARKER: &str = "[GOALS]";
pub const GOAL_MARKER: &str = "[GOAL]";
pub const HYPOTHESES_MARKER: &str = "[HYPOTHESES]";
pub const HYPOTHESIS_MARKER: &str = "[HYPOTHESIS]";
pub const END_MARKER: &str = "[END]";
pub const RUN_TACTIC_MARKER: &str = "[RUN TACTIC]";

/// A rendered prompt. Byte-stable for a given state and budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prompt {
    text: String,
}

impl Prompt {
    pub fn as_str(&self) -> &str {
        &self.text
    }

    pub fn into_string(self) -> String {
        self.text
    }

    /// Hex SHA-256 of the prompt bytes; the key under which replay stores
    /// record candidates.
    pub fn sha256_hex(&self) -> String {
        use sha2::{Digest, Sha256};
        let digest = Sha256::digest(self.text.as_bytes());
        let mut out = String::with_capacity(64);
        for byte in digest {
            out.push_str(&alloc::format!("{byte:02x}"));
        }
        out
    }
}

impl core::fmt::Display for Prompt {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(&self.text)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PromptError {
    #[error("cannot format a prompt for the QED state")]
    EmptyState,
    #[error("character budget {max_chars} is too small for the goals alone (need {needed})")]
    BudgetTooSmall { needed: usize, max_chars: usize },
}

fn render(obligations: &[Obligation], hyps_kept: &[usize]) -> String {
    let mut out = String::new();
    out.push_str(GOALS_HEADER);
    out.push('\n');
    out.push_str(GOALS_MARKER);
    for (i, ob) in obligations.iter().enumerate() {
        let k = i + 1;
        out.push('\n');
        out.push_str(&alloc::format!("{GOAL_MARKER} {k}\n {}", ob.goal));
        out.push_str(&alloc::format!("\n{HYPOTHESES_MARKER} {k}"));
        for hyp in ob.hypotheses.iter().take(hyps_kept[i]) {
            out.push_str(&alloc::format!("\n{HYPOTHESIS_MARKER} {hyp}"));
        }
    }
    out.push('\n');
    out.push_str(END_MARKER);
    out
}

/// Formats `state` within a character budget. When over budget, hypothesis
/// lines are dropped — last obligation first, and within an obligation from
/// its last hypothesis upward — until the prompt fits; goal lines are never
/// dropped.
pub fn format_prompt(state: &ProofState, max_chars: usize) -> Result<Prompt, PromptError> {
    if state.is_qed() {
        return Err(PromptError::EmptyState);
    }
    let mut kept: Vec<usize> = state
        .obligations
        .iter()
        .map(|ob| ob.hypotheses.len())
        .collect();
    loop {
        let text = render(&state.obligations, &kept);
        if text.len() <= max_chars {
            return Ok(Prompt { text });
        }
        // Drop the lowest-priority hypothesis still present.
        match kept.iter().rposition(|&k| k > 0) {
            Some(i) => kept[i] -= 1,
            None => {
                return Err(PromptError::BudgetTooSmall {
                    needed: text.len(),
                    max_chars,
                })
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ResponseParseError {
    #[error("response has no `[RUN TACTIC]` marker")]
    MissingRunTactic,
    #[error("response has no `[END]` marker after `[RUN TACTIC]`")]
    MissingEnd,
    #[error("tactic between the markers is invalid: {0}")]
    InvalidTactic(#[from] InvalidTactic),
}

/// Extracts the tactic between the first `[RUN TACTIC]` and the next
/// `[END]`. Multi-line content is joined with single spaces.
pub fn parse_response(text: &str) -> Result<Tactic, ResponseParseError> {
    let start = text
        .find(RUN_TACTIC_MARKER)
        .ok_or(ResponseParseError::MissingRunTactic)?
        + RUN_TACTIC_MARKER.len();
    let rest = &text[start..];
    let end = rest.find(END_MARKER).ok_or(ResponseParseError::MissingEnd)?;
    let content = &rest[..end];
    let mut joined = String::new();
    for line in content.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if !joined.is_empty() {
            joined.push(' ');
        }
        joined.push_str(line);
    }
    Ok(Tactic::new(joined)?)
}

/// Renders a tactic in the response format; `parse_response(wrap_tactic(t))`
/// recovers `t` for any tactic not containing the marker substrings.
pub fn wrap_tactic(tactic: &Tactic) -> String {
    alloc::format!("{RUN_TACTIC_MARKER}\n {}\n{END_MARKER}", tactic.text())
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed prompt at line {line}: {message}")]
pub struct PromptStateError {
    pub line: usize,
    pub message: String,
}

fn perr<T>(line: usize, message: impl Into<String>) -> Result<T, PromptStateError> {
    Err(PromptStateError {
        line,
        message: message.into(),
    })
}

/// Reconstructs the proof state a `v1` prompt was rendered from (single-line
/// goals and hypotheses, which is everything the supported backends emit).
/// The inverse of [`format_prompt`] whenever no hypothesis was dropped for
/// budget.
pub fn parse_prompt_state(text: &str) -> Result<ProofState, PromptStateError> {
    let mut lines = text.lines().enumerate().peekable();
    match lines.next() {
        Some((_, l)) if l == GOALS_HEADER => {}
        other => return perr(other.map(|(i, _)| i + 1).unwrap_or(1), "expected header"),
    }
    match lines.next() {
        Some((_, l)) if l == GOALS_MARKER => {}
        other => {
            return perr(
                other.map(|(i, _)| i + 1).unwrap_or(2),
                "expected `[GOALS]`",
            )
        }
    }
    let mut obligations = Vec::new();
    loop {
        let Some((i, line)) = lines.next() else {
            return perr(0, "missing `[END]`");
        };
        if line == END_MARKER {
            break;
        }
        if !line.starts_with(GOAL_MARKER) {
            return perr(i + 1, "expected `[GOAL] k`");
        }
        let Some((gi, goal_line)) = lines.next() else {
            return perr(i + 1, "missing goal text");
        };
        let goal = goal_line.strip_prefix(' ').unwrap_or(goal_line).to_string();
        if goal.is_empty() {
            return perr(gi + 1, "empty goal text");
        }
        match lines.next() {
            Some((_, l)) if l.starts_with(HYPOTHESES_MARKER) => {}
            other => {
                return perr(
                    other.map(|(i, _)| i + 1).unwrap_or(gi + 2),
                    "expected `[HYPOTHESES] k`",
                )
            }
        }
        let mut hypotheses = Vec::new();
        while let Some((_, l)) = lines.peek() {
            if let Some(h) = l.strip_prefix(HYPOTHESIS_MARKER) {
                hypotheses.push(h.strip_prefix(' ').unwrap_or(h).to_string());
                lines.next();
            } else {
                break;
            }
        }
        obligations.push(Obligation { hypotheses, goal });
    }
    if obligations.is_empty() {
        return perr(0, "prompt lists no goals");
    }
    Ok(ProofState::new(obligations))
}
