//! Pluggable proof-step generation: the probability model behind the search,
//! scored by negative log-likelihood (lower is more likely).
//!
//! Three conformant generators exist: the oracle (backed by the toy prover's
//! tactic enumeration), replay (recorded candidates keyed by prompt hash),
//! and — in the companion crate — a remote HTTP client. All of them feed
//! through [`normalize_candidates`], so output is always deduplicated,
//! sorted, and capped.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::kernel::Tactic;
use crate::mini;
use crate::prompt::{parse_prompt_state, Prompt};

/// Hard cap on candidate fan-out, guarding the execution pool.
pub const MAX_CANDIDATES: usize = 256;

/// A generated tactic with its negative log-likelihood score.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredCandidate {
    pub tactic: Tactic,
    pub neg_log_likelihood: f64,
}

impl ScoredCandidate {
    pub fn new(tactic: Tactic, neg_log_likelihood: f64) -> Result<Self, InvalidCandidate> {
        if !neg_log_likelihood.is_finite() || neg_log_likelihood < 0.0 {
            return Err(InvalidCandidate {
                neg_log_likelihood,
            });
        }
        Ok(ScoredCandidate {
            tactic,
            neg_log_likelihood,
        })
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("negative log-likelihood must be finite and non-negative, got {neg_log_likelihood}")]
pub struct InvalidCandidate {
    pub neg_log_likelihood: f64,
}

/// Which generator to run, with the sampling knobs that are passed through
/// to it. `temperature` only matters to the remote service; the oracle and
/// replay generators are deterministic and ignore it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub temperature: f64,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum GeneratorKind {
    Oracle,
    Replay(String),
    Remote(String),
}

impl GeneratorSpec {
    pub fn validate(&self) -> Result<(), InvalidGeneratorSpec> {
        if !(self.temperature > 0.0) {
            return Err(InvalidGeneratorSpec::Temperature(self.temperature));
        }
        if self.n == 0 || self.n > MAX_CANDIDATES {
            return Err(InvalidGeneratorSpec::SampleCount(self.n));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum InvalidGeneratorSpec {
    #[error("temperature must be > 0, got {0}")]
    Temperature(f64),
    #[error("sample count must be in 1..={MAX_CANDIDATES}, got {0}")]
    SampleCount(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeneratorError {
    /// The generator could not be reached or replied out of protocol. The
    /// search treats the affected state as unexpandable.
    #[error("generator transport error: {0}")]
    Transport(String),
    /// The prompt could not be interpreted (oracle only).
    #[error("generator could not interpret the prompt: {0}")]
    MalformedPrompt(String),
}

/// A proof-step generator. Implementations must tolerate concurrent
/// `generate` calls for different prompts.
pub trait ProofStepGenerator {
    fn generate(&self, prompt: &Prompt) -> Result<Vec<ScoredCandidate>, GeneratorError>;
}

impl<G: ProofStepGenerator + ?Sized> ProofStepGenerator for &G {
    fn generate(&self, prompt: &Prompt) -> Result<Vec<ScoredCandidate>, GeneratorError> {
        (**self).generate(prompt)
    }
}

/// Deduplicates by tactic text keeping the lowest score, sorts ascending by
/// (score, text), and truncates to `n`.
pub fn normalize_candidates(
    candidates: Vec<ScoredCandidate>,
    n: usize,
) -> Vec<ScoredCandidate> {
    let mut best: BTreeMap<String, f64> = BTreeMap::new();
    for c in candidates {
        let entry = best
            .entry(c.tactic.text().to_string())
            .or_insert(c.neg_log_likelihood);
        if c.neg_log_likelihood < *entry {
            *entry = c.neg_log_likelihood;
        }
    }
    let mut out: Vec<ScoredCandidate> = best
        .into_iter()
        .map(|(text, nll)| ScoredCandidate {
            tactic: Tactic::new(&text).expect("deduplicated tactic text stays valid"),
            neg_log_likelihood: nll,
        })
        .collect();
    out.sort_by(|a, b| {
        a.neg_log_likelihood
            .total_cmp(&b.neg_log_likelihood)
            .then_with(|| a.tactic.text().cmp(b.tactic.text()))
    });
    out.truncate(n.min(MAX_CANDIDATES));
    out
}

/// Reads the state back out of the prompt and proposes every tactic the toy
/// prover can actually apply, scored `ln(rank + 1)` in enumeration order.
/// Deterministic, and complete along any replayable proof.
#[derive(Debug, Clone)]
pub struct OracleGenerator {
    pub n: usize,
}

impl OracleGenerator {
    pub fn new(n: usize) -> Self {
        OracleGenerator { n }
    }
}

impl ProofStepGenerator for OracleGenerator {
    fn generate(&self, prompt: &Prompt) -> Result<Vec<ScoredCandidate>, GeneratorError> {
        let state = parse_prompt_state(prompt.as_str())
            .map_err(|e| GeneratorError::MalformedPrompt(e.to_string()))?;
        let candidates = mini::enumerate_applicable_tactics(&state)
            .into_iter()
            .enumerate()
            .map(|(rank, tactic)| ScoredCandidate {
                tactic,
                neg_log_likelihood: libm::log((rank + 1) as f64),
            })
            .collect();
        Ok(normalize_candidates(candidates, self.n))
    }
}

/// One line of a replay store file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplayEntry {
    pub prompt_sha256: String,
    pub candidates: Vec<ScoredCandidate>,
}

/// Returns recorded candidates keyed by prompt hash; unknown prompts yield
/// an empty candidate list (the state is simply unexpandable).
#[derive(Debug, Clone, Default)]
pub struct ReplayGenerator {
    store: BTreeMap<String, Vec<ScoredCandidate>>,
    n: usize,
}

impl ReplayGenerator {
    pub fn new(entries: Vec<ReplayEntry>, n: usize) -> Self {
        let mut store: BTreeMap<String, Vec<ScoredCandidate>> = BTreeMap::new();
        for e in entries {
            store.entry(e.prompt_sha256).or_default().extend(e.candidates);
        }
        ReplayGenerator { store, n }
    }

    pub fn len(&self) -> usize {
        self.store.len()
    }

    pub fn is_empty(&self) -> bool {
        self.store.is_empty()
    }
}

impl ProofStepGenerator for ReplayGenerator {
    fn generate(&self, prompt: &Prompt) -> Result<Vec<ScoredCandidate>, GeneratorError> {
        match self.store.get(&prompt.sha256_hex()) {
            Some(cands) => Ok(normalize_candidates(cands.clone(), self.n)),
            None => Ok(Vec::new()),
        }
    }
}

/// Request body of the remote generator protocol (`POST {endpoint}/generate`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerateRequest {
    pub prompt: String,
    pub n: usize,
    pub temperature: f64,
    pub max_new_chars: usize,
}

/// Reply body of the remote generator protocol.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerateReply {
    pub candidates: Vec<WireCandidate>,
}

/// A candidate as it crosses the wire; unvalidated until converted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WireCandidate {
    pub text: String,
    pub neg_log_likelihood: f64,
}

impl WireCandidate {
    /// Validates the wire form. Multi-line text is joined with single
    /// spaces, mirroring response parsing; empty text is rejected.
    pub fn into_candidate(self) -> Result<ScoredCandidate, String> {
        let joined = self
            .text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .collect::<Vec<_>>()
            .join(" ");
        let tactic = Tactic::new(&joined).map_err(|e| e.to_string())?;
        ScoredCandidate::new(tactic, self.neg_log_likelihood).map_err(|e| e.to_string())
    }
}
