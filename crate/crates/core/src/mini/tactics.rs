//! The six tactics of the toy prover and their deterministic semantics.
//!
//! Tactics act on the focused obligation only (index 0); closing it removes
//! it from the list. `intro` is the only tactic that touches a goal with a
//! remaining binder prefix — everything else reports failure until the
//! binders have been introduced. All failures leave the state untouched.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::kernel::{Obligation, ProofState, Tactic, TransitionOutcome};

use super::rewrite::{normalize, occurs_free_in_statement, replace_first, subst};
use super::syntax::{
    is_valid_name, parse_hypothesis, parse_statement, print_hypothesis, print_statement, HypBody,
    Hypothesis, Statement, Term,
};

/// A parsed tactic invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MiniTactic {
    Intro(String),
    Refl,
    Simp,
    Rw(String),
    Exact(String),
    Induction(String),
}

impl MiniTactic {
    pub fn render(&self) -> String {
        match self {
            MiniTactic::Intro(x) => format!("intro {x}"),
            MiniTactic::Refl => "refl".to_string(),
            MiniTactic::Simp => "simp".to_string(),
            MiniTactic::Rw(h) => format!("rw {h}"),
            MiniTactic::Exact(h) => format!("exact {h}"),
            MiniTactic::Induction(x) => format!("induction {x}"),
        }
    }
}

pub fn parse_tactic(text: &str) -> Result<MiniTactic, String> {
    let text = text.trim();
    match text {
        "refl" => return Ok(MiniTactic::Refl),
        "simp" => return Ok(MiniTactic::Simp),
        _ => {}
    }
    let Some((head, arg)) = text.split_once(char::is_whitespace) else {
        return Err(format!("unknown tactic `{text}`"));
    };
    let arg = arg.trim();
    let wrap = |mk: fn(String) -> MiniTactic| -> Result<MiniTactic, String> {
        if is_valid_name(arg) {
            Ok(mk(arg.to_string()))
        } else {
            Err(format!("malformed tactic argument `{arg}`"))
        }
    };
    match head {
        "intro" => wrap(MiniTactic::Intro),
        "rw" => wrap(MiniTactic::Rw),
        "exact" => wrap(MiniTactic::Exact),
        "induction" => wrap(MiniTactic::Induction),
        _ => Err(format!("unknown tactic `{text}`")),
    }
}

/// The focused obligation in parsed form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedObligation {
    pub stmt: Statement,
    pub hyps: Vec<Hypothesis>,
}

pub fn parse_obligation(ob: &Obligation) -> Result<ParsedObligation, String> {
    let stmt = parse_statement(&ob.goal).map_err(|e| format!("goal: {e}"))?;
    let mut hyps = Vec::with_capacity(ob.hypotheses.len());
    for h in &ob.hypotheses {
        hyps.push(parse_hypothesis(h).map_err(|e| format!("hypothesis `{h}`: {e}"))?);
    }
    Ok(ParsedObligation { stmt, hyps })
}

pub fn print_obligation(ob: &ParsedObligation) -> Obligation {
    Obligation {
        hypotheses: ob.hyps.iter().map(print_hypothesis).collect(),
        goal: print_statement(&ob.stmt),
    }
}

fn find_hyp<'a>(ob: &'a ParsedObligation, name: &str) -> Option<&'a Hypothesis> {
    ob.hyps.iter().find(|h| h.name == name)
}

fn require_no_binders(ob: &ParsedObligation, tactic: &str) -> Result<(), String> {
    if ob.stmt.binders.is_empty() {
        Ok(())
    } else {
        Err(format!("{tactic}: goal has unintroduced binders"))
    }
}

/// Applies a tactic to the focused obligation. `Ok` returns the obligations
/// that replace it: empty when it was closed, one when transformed, two for
/// the base and step cases of induction.
pub fn apply_to_obligation(
    ob: &ParsedObligation,
    tactic: &MiniTactic,
) -> Result<Vec<ParsedObligation>, String> {
    match tactic {
        MiniTactic::Intro(x) => {
            let Some(first) = ob.stmt.binders.first() else {
                return Err("intro: goal has no leading binder".to_string());
            };
            if first != x {
                return Err(format!("intro: leading binder is `{first}`, not `{x}`"));
            }
            if find_hyp(ob, x).is_some() {
                return Err(format!("intro: hypothesis `{x}` already exists"));
            }
            let mut next = ob.clone();
            next.stmt.binders.remove(0);
            next.hyps.push(Hypothesis {
                name: x.clone(),
                body: HypBody::Nat,
            });
            Ok(vec![next])
        }
        MiniTactic::Refl => {
            require_no_binders(ob, "refl")?;
            if ob.stmt.lhs == ob.stmt.rhs {
                Ok(vec![])
            } else {
                Err("refl: sides are not syntactically identical".to_string())
            }
        }
        MiniTactic::Simp => {
            require_no_binders(ob, "simp")?;
            let (lhs, fired_l) = normalize(&ob.stmt.lhs);
            let (rhs, fired_r) = normalize(&ob.stmt.rhs);
            if lhs == rhs {
                return Ok(vec![]);
            }
            if fired_l + fired_r == 0 {
                return Err("simp: no rewrite applies and sides differ".to_string());
            }
            let mut next = ob.clone();
            next.stmt.lhs = lhs;
            next.stmt.rhs = rhs;
            Ok(vec![next])
        }
        MiniTactic::Rw(h) => {
            require_no_binders(ob, "rw")?;
            let Some(hyp) = find_hyp(ob, h) else {
                return Err(format!("rw: no such hypothesis `{h}`"));
            };
            let HypBody::Stmt(eq) = &hyp.body else {
                return Err(format!("rw: `{h}` is not an equality"));
            };
            if !eq.binders.is_empty() {
                return Err(format!("rw: `{h}` is not an equality"));
            }
            let (pattern, replacement) = (&eq.lhs, &eq.rhs);
            let rewritten = match replace_first(&ob.stmt.lhs, pattern, replacement) {
                Some(lhs) => Statement {
                    binders: Vec::new(),
                    lhs,
                    rhs: ob.stmt.rhs.clone(),
                },
                None => match replace_first(&ob.stmt.rhs, pattern, replacement) {
                    Some(rhs) => Statement {
                        binders: Vec::new(),
                        lhs: ob.stmt.lhs.clone(),
                        rhs,
                    },
                    None => {
                        return Err(format!(
                            "rw: no occurrence of the left-hand side of `{h}`"
                        ))
                    }
                },
            };
            if rewritten.lhs == rewritten.rhs {
                Ok(vec![])
            } else {
                Ok(vec![ParsedObligation {
                    stmt: rewritten,
                    hyps: ob.hyps.clone(),
                }])
            }
        }
        MiniTactic::Exact(h) => {
            let Some(hyp) = find_hyp(ob, h) else {
                return Err(format!("no such hypothesis `{h}`"));
            };
            match &hyp.body {
                HypBody::Stmt(s) if *s == ob.stmt => Ok(vec![]),
                _ => Err(format!("exact: hypothesis `{h}` does not match the goal")),
            }
        }
        MiniTactic::Induction(x) => {
            require_no_binders(ob, "induction")?;
            match find_hyp(ob, x) {
                Some(Hypothesis {
                    body: HypBody::Nat, ..
                }) => {}
                _ => return Err(format!("induction: no hypothesis `{x} : nat`")),
            }
            for hyp in &ob.hyps {
                if let HypBody::Stmt(s) = &hyp.body {
                    if occurs_free_in_statement(s, x) {
                        return Err(format!(
                            "induction: `{x}` occurs in hypothesis `{}`",
                            hyp.name
                        ));
                    }
                }
            }
            let fresh = format!("{x}'");
            if find_hyp(ob, &fresh).is_some() {
                return Err(format!("induction: fresh name `{fresh}` already in use"));
            }
            if find_hyp(ob, "IH").is_some() {
                return Err("induction: hypothesis `IH` already in use".to_string());
            }

            let remaining: Vec<Hypothesis> = ob
                .hyps
                .iter()
                .filter(|h| h.name != *x)
                .cloned()
                .collect();

            let subst_goal = |replacement: &Term| Statement {
                binders: Vec::new(),
                lhs: subst(&ob.stmt.lhs, x, replacement),
                rhs: subst(&ob.stmt.rhs, x, replacement),
            };

            let base = ParsedObligation {
                stmt: subst_goal(&Term::Zero),
                hyps: remaining.clone(),
            };

            let step_var = Term::var(fresh.clone());
            let mut step_hyps = remaining;
            step_hyps.push(Hypothesis {
                name: fresh,
                body: HypBody::Nat,
            });
            step_hyps.push(Hypothesis {
                name: "IH".to_string(),
                body: HypBody::Stmt(subst_goal(&step_var)),
            });
            let step = ParsedObligation {
                stmt: subst_goal(&Term::succ(step_var)),
                hyps: step_hyps,
            };

            Ok(vec![base, step])
        }
    }
}

/// Applies a tactic string to a full proof state. Acts on obligation 0 only;
/// closing it removes it from the list. Any precondition violation is a
/// `Failed` outcome naming it.
pub fn apply_state(state: &ProofState, tactic: &Tactic) -> TransitionOutcome {
    if state.is_qed() {
        return TransitionOutcome::Failed("no open obligations".to_string());
    }
    let parsed = match parse_obligation(&state.obligations[0]) {
        Ok(p) => p,
        Err(msg) => return TransitionOutcome::Failed(format!("malformed obligation: {msg}")),
    };
    let mini = match parse_tactic(tactic.text()) {
        Ok(t) => t,
        Err(msg) => return TransitionOutcome::Failed(msg),
    };
    match apply_to_obligation(&parsed, &mini) {
        Ok(replacement) => {
            let mut obligations: Vec<Obligation> =
                replacement.iter().map(print_obligation).collect();
            obligations.extend(state.obligations[1..].iter().cloned());
            TransitionOutcome::Applied(ProofState::new(obligations))
        }
        Err(msg) => TransitionOutcome::Failed(msg),
    }
}

/// Every tactic applicable at `state`, in a fixed deterministic order:
/// `intro` of the leading binder, `refl`, `simp`, `exact h` in hypothesis
/// order, `rw h` in hypothesis order, `induction x` in declaration order.
/// Empty for QED or malformed states.
pub fn enumerate_applicable_tactics(state: &ProofState) -> Vec<Tactic> {
    if state.is_qed() {
        return Vec::new();
    }
    let Ok(parsed) = parse_obligation(&state.obligations[0]) else {
        return Vec::new();
    };
    let mut candidates: Vec<MiniTactic> = Vec::new();
    if let Some(b) = parsed.stmt.binders.first() {
        candidates.push(MiniTactic::Intro(b.clone()));
    }
    candidates.push(MiniTactic::Refl);
    candidates.push(MiniTactic::Simp);
    for h in &parsed.hyps {
        candidates.push(MiniTactic::Exact(h.name.clone()));
    }
    for h in &parsed.hyps {
        candidates.push(MiniTactic::Rw(h.name.clone()));
    }
    for h in &parsed.hyps {
        if h.body == HypBody::Nat {
            candidates.push(MiniTactic::Induction(h.name.clone()));
        }
    }
    candidates
        .into_iter()
        .filter(|t| apply_to_obligation(&parsed, t).is_ok())
        .map(|t| Tactic::new(t.render()).expect("rendered tactic is valid"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state(goal: &str, hyps: &[&str]) -> ProofState {
        ProofState::new(vec![Obligation {
            hypotheses: hyps.iter().map(|h| h.to_string()).collect(),
            goal: goal.to_string(),
        }])
    }

    fn tac(text: &str) -> Tactic {
        Tactic::new(text).unwrap()
    }

    fn applied(outcome: TransitionOutcome) -> ProofState {
        match outcome {
            TransitionOutcome::Applied(s) => s,
            TransitionOutcome::Failed(msg) => panic!("expected Applied, got Failed({msg})"),
        }
    }

    #[test]
    fn intro_moves_binder_to_hypothesis() {
        let s = state("forall n, n + Z = n", &[]);
        let next = applied(apply_state(&s, &tac("intro n")));
        assert_eq!(next.obligations[0].goal, "n + Z = n");
        assert_eq!(next.obligations[0].hypotheses, vec!["n : nat".to_string()]);
        assert!(matches!(
            apply_state(&s, &tac("intro m")),
            TransitionOutcome::Failed(_)
        ));
    }

    #[test]
    fn simp_single_step_case() {
        // One R2 application; no rule matches Z + n'.
        let s = state("Z + S n' = S n'", &["n' : nat", "IH : Z + n' = n'"]);
        let next = applied(apply_state(&s, &tac("simp")));
        assert_eq!(next.obligations[0].goal, "S (Z + n') = S n'");
        // Leftmost replacement, then syntactic equality: auto-closed.
        let closed = applied(apply_state(&next, &tac("rw IH")));
        assert!(closed.is_qed());
    }

    #[test]
    fn simp_closes_by_normalization() {
        let s = state("n + Z = n", &["n : nat"]);
        assert!(applied(apply_state(&s, &tac("simp"))).is_qed());
        // No rewrite fires and sides differ: failure.
        let stuck = state("n = m", &["n : nat", "m : nat"]);
        assert!(matches!(
            apply_state(&stuck, &tac("simp")),
            TransitionOutcome::Failed(_)
        ));
    }

    #[test]
    fn closing_tactics_require_introduced_binders() {
        let s = state("forall n, n + Z = n", &[]);
        for t in ["refl", "simp", "rw IH", "induction n"] {
            assert!(
                matches!(apply_state(&s, &tac(t)), TransitionOutcome::Failed(_)),
                "{t} should fail under a binder"
            );
        }
    }

    #[test]
    fn exact_requires_identical_statement() {
        let s = state("Z * n' = Z", &["n' : nat", "IH : Z * n' = Z"]);
        assert!(applied(apply_state(&s, &tac("exact IH"))).is_qed());
        let s = state("n + Z = n", &["n : nat"]);
        let out = apply_state(&s, &tac("exact missing"));
        match out {
            TransitionOutcome::Failed(msg) => assert!(msg.contains("no such hypothesis")),
            _ => panic!("expected failure"),
        }
    }

    #[test]
    fn induction_splits_into_base_and_step() {
        let s = state("Z + n = n", &["n : nat"]);
        let next = applied(apply_state(&s, &tac("induction n")));
        assert_eq!(next.obligations.len(), 2);
        assert_eq!(next.obligations[0].goal, "Z + Z = Z");
        assert!(next.obligations[0].hypotheses.is_empty());
        assert_eq!(next.obligations[1].goal, "Z + S n' = S n'");
        assert_eq!(
            next.obligations[1].hypotheses,
            vec!["n' : nat".to_string(), "IH : Z + n' = n'".to_string()]
        );
    }

    #[test]
    fn induction_blocked_when_variable_pinned_by_equality() {
        let s = state(
            "S n' = S (S n')",
            &["n' : nat", "IH : n' = S n'"],
        );
        let out = apply_state(&s, &tac("induction n'"));
        assert!(matches!(out, TransitionOutcome::Failed(msg) if msg.contains("occurs")));
    }

    #[test]
    fn tactics_touch_only_the_focused_obligation() {
        let s = ProofState::new(vec![
            Obligation {
                hypotheses: vec![],
                goal: "Z + Z = Z".to_string(),
            },
            Obligation {
                hypotheses: vec!["k : nat".to_string()],
                goal: "k = k".to_string(),
            },
        ]);
        let next = applied(apply_state(&s, &tac("simp")));
        assert_eq!(next.obligations.len(), 1);
        assert_eq!(next.obligations[0].goal, "k = k");
    }

    #[test]
    fn enumerate_fresh_theorem_offers_only_intro() {
        let s = state("forall n, n + Z = n", &[]);
        let tactics: Vec<String> = enumerate_applicable_tactics(&s)
            .iter()
            .map(|t| t.text().to_string())
            .collect();
        assert_eq!(tactics, vec!["intro n".to_string()]);
    }

    #[test]
    fn enumerate_orders_refl_first_on_trivial_goal() {
        let s = state("n = n", &["n : nat"]);
        let tactics: Vec<String> = enumerate_applicable_tactics(&s)
            .iter()
            .map(|t| t.text().to_string())
            .collect();
        assert_eq!(tactics[0], "refl");
        assert!(tactics.contains(&"simp".to_string()));
    }

    #[test]
    fn enumerate_empty_when_stuck_or_qed() {
        assert!(enumerate_applicable_tactics(&ProofState::qed()).is_empty());
        // Base case of the unprovable `forall n, n = S n`.
        let s = state("Z = S Z", &[]);
        assert!(enumerate_applicable_tactics(&s).is_empty());
    }

    #[test]
    fn determinism_identical_inputs_identical_outcomes() {
        let s = state("Z + S n' = S n'", &["n' : nat", "IH : Z + n' = n'"]);
        for t in ["simp", "rw IH", "refl", "exact IH", "induction n'"] {
            assert_eq!(apply_state(&s, &tac(t)), apply_state(&s, &tac(t)));
        }
    }
}
