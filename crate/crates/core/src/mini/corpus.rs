//! The theorem-file format: named statements with their recorded proof
//! scripts, one stand-in for a formal proof repository.
//!
//! ```text
//! -- comment lines are ignored
//! theorem add_zero : forall n, n + Z = n.
//!   intro n.
//!   simp.
//! qed.
//! ```
//!
//! Every tactic line carries a trailing `.` and `qed.` closes the proof.
//! Theorem names are unique per file.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::kernel::{ProofScript, Tactic, TheoremSpec};

use super::syntax::{is_valid_name, parse_statement, print_statement, Statement};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremEntry {
    pub name: String,
    pub statement: Statement,
    pub proof: ProofScript,
}

impl TheoremEntry {
    pub fn spec(&self) -> TheoremSpec {
        TheoremSpec::new(self.name.clone(), print_statement(&self.statement))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TheoremFile {
    pub theorems: Vec<TheoremEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CorpusError {
    #[error("line {line}, column {col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("line {line}: duplicate theorem name `{name}`")]
    DuplicateName { line: usize, name: String },
}

fn syntax(line: usize, col: usize, message: impl Into<String>) -> CorpusError {
    CorpusError::Syntax {
        line,
        col,
        message: message.into(),
    }
}

fn is_ignored(line: &str) -> bool {
    let t = line.trim();
    t.is_empty() || t.starts_with("--")
}

impl TheoremFile {
    pub fn parse(text: &str) -> Result<Self, CorpusError> {
        let mut theorems: Vec<TheoremEntry> = Vec::new();
        let mut lines = text.lines().enumerate().peekable();

        while let Some((idx, raw)) = lines.next() {
            let lineno = idx + 1;
            if is_ignored(raw) {
                continue;
            }
            let line = raw.trim();
            let Some(rest) = line.strip_prefix("theorem") else {
                return Err(syntax(lineno, 1, "expected `theorem`"));
            };
            if !rest.starts_with(char::is_whitespace) {
                return Err(syntax(lineno, 1, "expected `theorem`"));
            }
            let rest = rest.trim_start();
            let Some((name, after_name)) = rest.split_once(':') else {
                return Err(syntax(lineno, 1, "expected `:` after theorem name"));
            };
            let name = name.trim();
            if !is_valid_name(name) {
                return Err(syntax(lineno, 1, format!("invalid theorem name `{name}`")));
            }
            if theorems.iter().any(|t| t.name == name) {
                return Err(CorpusError::DuplicateName {
                    line: lineno,
                    name: name.to_string(),
                });
            }
            let Some(stmt_text) = after_name.trim().strip_suffix('.') else {
                return Err(syntax(lineno, raw.len(), "statement must end with `.`"));
            };
            let statement = parse_statement(stmt_text)
                .map_err(|e| syntax(lineno, e.col, e.message.clone()))?;

            let mut steps: Vec<Tactic> = Vec::new();
            let mut closed = false;
            for (pidx, praw) in lines.by_ref() {
                let plineno = pidx + 1;
                if is_ignored(praw) {
                    continue;
                }
                let pline = praw.trim();
                if pline == "qed." {
                    closed = true;
                    break;
                }
                let Some(tactic_text) = pline.strip_suffix('.') else {
                    return Err(syntax(plineno, praw.len(), "tactic line must end with `.`"));
                };
                let tactic = Tactic::new(tactic_text)
                    .map_err(|e| syntax(plineno, 1, format!("{e}")))?;
                steps.push(tactic);
            }
            if !closed {
                return Err(syntax(lineno, 1, "theorem is missing its `qed.` line"));
            }
            theorems.push(TheoremEntry {
                name: name.to_string(),
                statement,
                proof: ProofScript::new(steps),
            });
        }

        Ok(TheoremFile { theorems })
    }

    /// Canonical text form; `parse(render(file)) == file`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, t) in self.theorems.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            out.push_str(&format!(
                "theorem {} : {}.\n",
                t.name,
                print_statement(&t.statement)
            ));
            for step in &t.proof.steps {
                out.push_str(&format!("  {}.\n", step.text()));
            }
            out.push_str("qed.\n");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_single_theorem() {
        let file =
            TheoremFile::parse("theorem add_zero : forall n, n + Z = n.\n intro n.\n simp.\nqed.")
                .unwrap();
        assert_eq!(file.theorems.len(), 1);
        let t = &file.theorems[0];
        assert_eq!(t.name, "add_zero");
        assert_eq!(t.proof.len(), 2);
        assert_eq!(t.spec().statement, "forall n, n + Z = n");
    }

    #[test]
    fn duplicate_names_rejected() {
        let text = "theorem t1 : Z = Z.\n refl.\nqed.\ntheorem t1 : Z = Z.\n refl.\nqed.";
        match TheoremFile::parse(text) {
            Err(CorpusError::DuplicateName { name, line }) => {
                assert_eq!(name, "t1");
                assert_eq!(line, 4);
            }
            other => panic!("expected duplicate-name error, got {other:?}"),
        }
    }

    #[test]
    fn reports_line_and_column() {
        let text = "theorem t : Z = Z.\n refl.\nqed.\n\ntheorem u : Z = ?.\n refl.\nqed.";
        match TheoremFile::parse(text) {
            Err(CorpusError::Syntax { line, col, .. }) => {
                assert_eq!(line, 5);
                assert!(col > 1);
            }
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn comments_and_blank_lines_ignored() {
        let text = "-- header\n\ntheorem t : Z = Z.\n-- inside proof\n refl.\n\nqed.\n";
        let file = TheoremFile::parse(text).unwrap();
        assert_eq!(file.theorems.len(), 1);
        assert_eq!(file.theorems[0].proof.len(), 1);
    }

    #[test]
    fn missing_qed_is_an_error() {
        assert!(TheoremFile::parse("theorem t : Z = Z.\n refl.\n").is_err());
    }

    #[test]
    fn render_parse_fixpoint() {
        let text = "theorem a : forall n, n + Z = n.\n intro n.\n simp.\nqed.\ntheorem b : Z = Z.\n refl.\nqed.";
        let file = TheoremFile::parse(text).unwrap();
        let rendered = file.render();
        let reparsed = TheoremFile::parse(&rendered).unwrap();
        assert_eq!(reparsed, file);
        assert_eq!(reparsed.render(), rendered);
    }

    #[test]
    fn empty_proof_allowed() {
        // Statements without recorded proofs are valid search targets.
        let file = TheoremFile::parse("theorem open1 : forall n, n = S n.\nqed.").unwrap();
        assert!(file.theorems[0].proof.is_empty());
    }
}
