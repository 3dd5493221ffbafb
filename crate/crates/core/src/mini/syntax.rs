//! Concrete syntax of the toy prover: Peano terms, equational goals with a
//! `forall` binder prefix, and `name : statement` hypotheses.
//!
//! Grammar (the pretty-printer emits the canonical form, the parser accepts
//! redundant parentheses on top of it):
//!
//! ```text
//! statement := [ "forall" NAME { "," NAME } "," ] term "=" term
//! term      := factor { "+" factor }            (left-assoc)
//! factor    := atom { "*" atom }                (left-assoc, binds tighter)
//! atom      := "Z" | "S" atom | NAME | "(" term ")"
//! NAME      := [a-zA-Z][a-zA-Z0-9']*   except the reserved words
//! ```
//!
//! Reserved words: `Z`, `S`, `forall`, `nat`.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

/// A Peano natural-number term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Zero,
    Succ(Box<Term>),
    Var(String),
    Add(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
}

impl Term {
    pub fn succ(t: Term) -> Term {
        Term::Succ(Box::new(t))
    }

    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn add(l: Term, r: Term) -> Term {
        Term::Add(Box::new(l), Box::new(r))
    }

    pub fn mul(l: Term, r: Term) -> Term {
        Term::Mul(Box::new(l), Box::new(r))
    }

    /// Number of AST nodes; used by size-bounded test generators.
    pub fn size(&self) -> usize {
        match self {
            Term::Zero | Term::Var(_) => 1,
            Term::Succ(t) => 1 + t.size(),
            Term::Add(l, r) | Term::Mul(l, r) => 1 + l.size() + r.size(),
        }
    }
}

/// An equational goal with an optional leading `forall` binder prefix.
/// Binder names are distinct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Statement {
    pub binders: Vec<String>,
    pub lhs: Term,
    pub rhs: Term,
}

/// The body of a hypothesis: either the `nat` declaration of a variable or a
/// statement assumed to hold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HypBody {
    Nat,
    Stmt(Statement),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypothesis {
    pub name: String,
    pub body: HypBody,
}

pub const RESERVED: [&str; 4] = ["Z", "S", "forall", "nat"];

/// `[a-zA-Z][a-zA-Z0-9']*` and not a reserved word.
pub fn is_valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    if !chars.all(|c| c.is_ascii_alphanumeric() || c == '\'') {
        return false;
    }
    !RESERVED.contains(&s)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("column {col}: {message}")]
pub struct SyntaxError {
    /// 1-based column of the offending character or token.
    pub col: usize,
    pub message: String,
}

fn err<T>(col: usize, message: impl Into<String>) -> Result<T, SyntaxError> {
    Err(SyntaxError {
        col,
        message: message.into(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Plus,
    Star,
    Eq,
    Comma,
    LParen,
    RParen,
}

struct Lexed {
    toks: Vec<(Tok, usize)>,
    end_col: usize,
}

fn lex(text: &str) -> Result<Lexed, SyntaxError> {
    let mut toks = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let col = i + 1;
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                toks.push((Tok::Plus, col));
                i += 1;
            }
            '*' => {
                toks.push((Tok::Star, col));
                i += 1;
            }
            '=' => {
                toks.push((Tok::Eq, col));
                i += 1;
            }
            ',' => {
                toks.push((Tok::Comma, col));
                i += 1;
            }
            '(' => {
                toks.push((Tok::LParen, col));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, col));
                i += 1;
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] as char == '\'')
                {
                    i += 1;
                }
                toks.push((Tok::Ident(text[start..i].to_string()), col));
            }
            other => return err(col, format!("unexpected character `{other}`")),
        }
    }
    Ok(Lexed {
        toks,
        end_col: bytes.len() + 1,
    })
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|(_, c)| *c)
            .unwrap_or(self.end_col)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), SyntaxError> {
        let col = self.col();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            Some(_) | None => err(col, format!("expected {what}")),
        }
    }

    fn atom(&mut self) -> Result<Term, SyntaxError> {
        let col = self.col();
        match self.bump() {
            Some(Tok::Ident(id)) if id == "Z" => Ok(Term::Zero),
            Some(Tok::Ident(id)) if id == "S" => Ok(Term::succ(self.atom()?)),
            Some(Tok::Ident(id)) => {
                if is_valid_name(&id) {
                    Ok(Term::Var(id))
                } else {
                    err(col, format!("`{id}` cannot be used as a variable name"))
                }
            }
            Some(Tok::LParen) => {
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            Some(_) | None => err(col, "expected a term"),
        }
    }

    fn factor(&mut self) -> Result<Term, SyntaxError> {
        let mut t = self.atom()?;
        while self.peek() == Some(&Tok::Star) {
            self.bump();
            t = Term::mul(t, self.atom()?);
        }
        Ok(t)
    }

    fn term(&mut self) -> Result<Term, SyntaxError> {
        let mut t = self.factor()?;
        while self.peek() == Some(&Tok::Plus) {
            self.bump();
            t = Term::add(t, self.factor()?);
        }
        Ok(t)
    }

    fn binder_name(&mut self) -> Result<String, SyntaxError> {
        let col = self.col();
        match self.bump() {
            Some(Tok::Ident(id)) if is_valid_name(&id) => Ok(id),
            Some(Tok::Ident(id)) => err(col, format!("`{id}` cannot be used as a binder name")),
            Some(_) | None => err(col, "expected a binder name"),
        }
    }

    fn statement(&mut self) -> Result<Statement, SyntaxError> {
        let mut binders = Vec::new();
        if self.peek() == Some(&Tok::Ident("forall".to_string())) {
            self.bump();
            let col = self.col();
            binders.push(self.binder_name()?);
            self.expect(Tok::Comma, "`,` after binder")?;
            // Further binders: an identifier directly followed by a comma.
            while matches!(self.peek(), Some(Tok::Ident(id)) if is_valid_name(id))
                && self.peek2() == Some(&Tok::Comma)
            {
                binders.push(self.binder_name()?);
                self.bump(); // comma
            }
            for (i, b) in binders.iter().enumerate() {
                if binders[..i].contains(b) {
                    return err(col, format!("duplicate binder `{b}`"));
                }
            }
        }
        let lhs = self.term()?;
        self.expect(Tok::Eq, "`=`")?;
        let rhs = self.term()?;
        Ok(Statement { binders, lhs, rhs })
    }

    fn finish(&self) -> Result<(), SyntaxError> {
        if self.pos < self.toks.len() {
            err(self.col(), "unexpected trailing input")
        } else {
            Ok(())
        }
    }
}

fn parser_for(text: &str) -> Result<Parser, SyntaxError> {
    let lexed = lex(text)?;
    Ok(Parser {
        toks: lexed.toks,
        pos: 0,
        end_col: lexed.end_col,
    })
}

pub fn parse_statement(text: &str) -> Result<Statement, SyntaxError> {
    let mut p = parser_for(text)?;
    let s = p.statement()?;
    p.finish()?;
    Ok(s)
}

pub fn parse_term(text: &str) -> Result<Term, SyntaxError> {
    let mut p = parser_for(text)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

/// Parses a `name : body` hypothesis where the body is `nat` or a statement.
pub fn parse_hypothesis(text: &str) -> Result<Hypothesis, SyntaxError> {
    let Some((name_part, body_part)) = text.split_once(':') else {
        return err(1, "expected `name : statement`");
    };
    let name = name_part.trim();
    if !is_valid_name(name) {
        return err(1, format!("invalid hypothesis name `{name}`"));
    }
    let body_text = body_part.trim();
    let body = if body_text == "nat" {
        HypBody::Nat
    } else {
        HypBody::Stmt(parse_statement(body_text)?)
    };
    Ok(Hypothesis {
        name: name.to_string(),
        body,
    })
}

fn term_prec(t: &Term) -> u8 {
    match t {
        Term::Add(..) => 1,
        Term::Mul(..) => 2,
        Term::Zero | Term::Var(_) | Term::Succ(..) => 3,
    }
}

fn print_term_into(t: &Term, min_prec: u8, out: &mut String) {
    let needs_parens = term_prec(t) < min_prec;
    if needs_parens {
        out.push('(');
    }
    match t {
        Term::Zero => out.push('Z'),
        Term::Var(name) => out.push_str(name),
        Term::Succ(arg) => {
            out.push_str("S ");
            match &**arg {
                Term::Zero | Term::Var(_) => print_term_into(arg, 3, out),
                _ => {
                    out.push('(');
                    print_term_into(arg, 0, out);
                    out.push(')');
                }
            }
        }
        Term::Add(l, r) => {
            print_term_into(l, 1, out);
            out.push_str(" + ");
            print_term_into(r, 2, out);
        }
        Term::Mul(l, r) => {
            print_term_into(l, 2, out);
            out.push_str(" * ");
            print_term_into(r, 3, out);
        }
    }
    if needs_parens {
        out.push(')');
    }
}

pub fn print_term(t: &Term) -> String {
    let mut out = String::new();
    print_term_into(t, 0, &mut out);
    out
}

pub fn print_statement(s: &Statement) -> String {
    let mut out = String::new();
    if !s.binders.is_empty() {
        out.push_str("forall ");
        for (i, b) in s.binders.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            out.push_str(b);
        }
        out.push_str(", ");
    }
    print_term_into(&s.lhs, 0, &mut out);
    out.push_str(" = ");
    print_term_into(&s.rhs, 0, &mut out);
    out
}

pub fn print_hypothesis(h: &Hypothesis) -> String {
    let body = match &h.body {
        HypBody::Nat => "nat".to_string(),
        HypBody::Stmt(s) => print_statement(s),
    };
    format!("{} : {}", h.name, body)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn roundtrips(text: &str) -> String {
        print_statement(&parse_statement(text).unwrap())
    }

    #[test]
    fn parses_canonical_forms() {
        assert_eq!(roundtrips("forall n, n + Z = n"), "forall n, n + Z = n");
        assert_eq!(
            roundtrips("forall n, m, S n + m = S (n + m)"),
            "forall n, m, S n + m = S (n + m)"
        );
        assert_eq!(roundtrips("Z = Z"), "Z = Z");
        assert_eq!(
            roundtrips("S (S Z) + S (S Z) = S (S (S (S Z)))"),
            "S (S Z) + S (S Z) = S (S (S (S Z)))"
        );
    }

    #[test]
    fn precedence_and_associativity() {
        // `*` binds tighter than `+`, both left-assoc, `S` takes an atom.
        let s = parse_statement("a + b * c + d = S a * b").unwrap();
        assert_eq!(print_statement(&s), "a + b * c + d = S a * b");
        let t = parse_term("a + (b + c)").unwrap();
        assert_eq!(t, Term::add(Term::var("a"), Term::add(Term::var("b"), Term::var("c"))));
        assert_eq!(print_term(&t), "a + (b + c)");
        assert_eq!(
            parse_term("a + b + c").unwrap(),
            Term::add(Term::add(Term::var("a"), Term::var("b")), Term::var("c"))
        );
        // `S S Z` is accepted, printed canonically as `S (S Z)`.
        assert_eq!(print_term(&parse_term("S S Z").unwrap()), "S (S Z)");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_statement("forall n, n + Z").is_err());
        assert!(parse_statement("forall Z, Z = Z").is_err());
        assert!(parse_statement("forall n, n, n = n").is_err());
        assert!(parse_statement("n = ").is_err());
        assert!(parse_statement("n = m extra").is_err());
        assert!(parse_statement("n ? m").is_err());
        let e = parse_statement("n = $").unwrap_err();
        assert_eq!(e.col, 5);
    }

    #[test]
    fn hypothesis_forms() {
        let h = parse_hypothesis("n : nat").unwrap();
        assert_eq!(h.body, HypBody::Nat);
        assert_eq!(print_hypothesis(&h), "n : nat");
        let h = parse_hypothesis("IH : Z + n' = n'").unwrap();
        assert!(matches!(h.body, HypBody::Stmt(_)));
        assert_eq!(print_hypothesis(&h), "IH : Z + n' = n'");
        assert!(parse_hypothesis("just text").is_err());
        assert!(parse_hypothesis("2x : nat").is_err());
    }

    fn arb_term() -> impl Strategy<Value = Term> {
        let leaf = prop_oneof![
            Just(Term::Zero),
            prop_oneof![Just("a"), Just("b"), Just("n'"), Just("x0")]
                .prop_map(|v| Term::var(v)),
        ];
        leaf.prop_recursive(6, 48, 3, |inner| {
            prop_oneof![
                inner.clone().prop_map(Term::succ),
                (inner.clone(), inner.clone()).prop_map(|(l, r)| Term::add(l, r)),
                (inner.clone(), inner).prop_map(|(l, r)| Term::mul(l, r)),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_is_identity(t in arb_term()) {
            let printed = print_term(&t);
            let reparsed = parse_term(&printed).unwrap();
            prop_assert_eq!(reparsed, t);
        }
    }
}
