//! The rewrite system behind `simp`, plus term substitution and the
//! leftmost-occurrence replacement used by `rw`.
//!
//! Rules, applied leftmost-innermost to a fixpoint:
//!
//! ```text
//! R1:  t + Z    ->  t
//! R2:  t + S u  ->  S (t + u)
//! R3:  t * Z    ->  Z
//! R4:  t * S u  ->  (t * u) + t
//! ```
//!
//! Each rule strictly decreases the interpretation [Z] = [x] = 2,
//! [S t] = [t] + 1, [t + u] = [t] + 2[u], [t * u] = [t]·[u]², so
//! normalization terminates on every term.

use super::syntax::Term;

/// Applies one of R1–R4 at the root, if any matches.
fn rule_at_root(t: &Term) -> Option<Term> {
    match t {
        Term::Add(l, r) => match &**r {
            Term::Zero => Some((**l).clone()),
            Term::Succ(u) => Some(Term::succ(Term::Add(l.clone(), u.clone()))),
            _ => None,
        },
        Term::Mul(l, r) => match &**r {
            Term::Zero => Some(Term::Zero),
            Term::Succ(u) => Some(Term::add(Term::Mul(l.clone(), u.clone()), (**l).clone())),
            _ => None,
        },
        _ => None,
    }
}

/// Rewrites the leftmost-innermost redex, if any: children are tried before
/// their parent, left child before right.
pub fn rewrite_step(t: &Term) -> Option<Term> {
    match t {
        Term::Zero | Term::Var(_) => None,
        Term::Succ(u) => rewrite_step(u).map(Term::succ),
        Term::Add(l, r) => rewrite_step(l)
            .map(|l2| Term::Add(alloc::boxed::Box::new(l2), r.clone()))
            .or_else(|| rewrite_step(r).map(|r2| Term::Add(l.clone(), alloc::boxed::Box::new(r2))))
            .or_else(|| rule_at_root(t)),
        Term::Mul(l, r) => rewrite_step(l)
            .map(|l2| Term::Mul(alloc::boxed::Box::new(l2), r.clone()))
            .or_else(|| rewrite_step(r).map(|r2| Term::Mul(l.clone(), alloc::boxed::Box::new(r2))))
            .or_else(|| rule_at_root(t)),
    }
}

/// Rewrites to the normal form, returning it with the number of steps fired.
pub fn normalize(t: &Term) -> (Term, usize) {
    let mut current = t.clone();
    let mut fired = 0;
    while let Some(next) = rewrite_step(&current) {
        current = next;
        fired += 1;
    }
    (current, fired)
}

/// Capture-free substitution of `var` (terms have no binders).
pub fn subst(t: &Term, var: &str, replacement: &Term) -> Term {
    match t {
        Term::Zero => Term::Zero,
        Term::Var(name) if name == var => replacement.clone(),
        Term::Var(name) => Term::Var(name.clone()),
        Term::Succ(u) => Term::succ(subst(u, var, replacement)),
        Term::Add(l, r) => Term::add(subst(l, var, replacement), subst(r, var, replacement)),
        Term::Mul(l, r) => Term::mul(subst(l, var, replacement), subst(r, var, replacement)),
    }
}

pub fn occurs(t: &Term, var: &str) -> bool {
    match t {
        Term::Zero => false,
        Term::Var(name) => name == var,
        Term::Succ(u) => occurs(u, var),
        Term::Add(l, r) | Term::Mul(l, r) => occurs(l, var) || occurs(r, var),
    }
}

pub fn occurs_free_in_statement(s: &super::syntax::Statement, var: &str) -> bool {
    if s.binders.iter().any(|b| b == var) {
        // Shadowed by the statement's own binder prefix.
        return false;
    }
    occurs(&s.lhs, var) || occurs(&s.rhs, var)
}

/// Replaces the leftmost (pre-order) occurrence of `pattern` with
/// `replacement`. Returns `None` when `pattern` does not occur.
pub fn replace_first(t: &Term, pattern: &Term, replacement: &Term) -> Option<Term> {
    if t == pattern {
        return Some(replacement.clone());
    }
    match t {
        Term::Zero | Term::Var(_) => None,
        Term::Succ(u) => replace_first(u, pattern, replacement).map(Term::succ),
        Term::Add(l, r) => replace_first(l, pattern, replacement)
            .map(|l2| Term::add(l2, (**r).clone()))
            .or_else(|| {
                replace_first(r, pattern, replacement).map(|r2| Term::add((**l).clone(), r2))
            }),
        Term::Mul(l, r) => replace_first(l, pattern, replacement)
            .map(|l2| Term::mul(l2, (**r).clone()))
            .or_else(|| {
                replace_first(r, pattern, replacement).map(|r2| Term::mul((**l).clone(), r2))
            }),
    }
}

/// Renders a numeral for tests: `numeral(2)` is `S (S Z)`.
pub fn numeral(n: usize) -> Term {
    let mut t = Term::Zero;
    for _ in 0..n {
        t = Term::succ(t);
    }
    t
}

/// Evaluates a closed term; `None` when a variable occurs. Independent
/// reference semantics for checking the rewrite rules.
pub fn eval_closed(t: &Term) -> Option<u64> {
    match t {
        Term::Zero => Some(0),
        Term::Var(_) => None,
        Term::Succ(u) => eval_closed(u).map(|v| v + 1),
        Term::Add(l, r) => Some(eval_closed(l)? + eval_closed(r)?),
        Term::Mul(l, r) => Some(eval_closed(l)? * eval_closed(r)?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mini::syntax::{parse_term, print_term};
    use proptest::prelude::*;

    #[test]
    fn single_step_is_leftmost_innermost() {
        // Z + S n' has exactly one redex (R2); Z + n' has none.
        let t = parse_term("Z + S n'").unwrap();
        let stepped = rewrite_step(&t).unwrap();
        assert_eq!(print_term(&stepped), "S (Z + n')");
        assert!(rewrite_step(&parse_term("Z + n'").unwrap()).is_none());

        // Innermost first: in (n + Z) + (m + Z) the left child rewrites.
        let t = parse_term("(n + Z) + (m + Z)").unwrap();
        assert_eq!(print_term(&rewrite_step(&t).unwrap()), "n + (m + Z)");
    }

    #[test]
    fn normalizes_worked_examples() {
        let cases = [
            ("n + Z", "n"),
            ("n + S Z", "S n"),
            ("Z + S n'", "S (Z + n')"),
            ("S (S Z) + S (S Z)", "S (S (S (S Z)))"),
            ("S (S Z) * S (S Z)", "S (S (S (S Z)))"),
            ("n * S Z", "Z + n"),
            ("Z * S n'", "Z * n'"),
        ];
        for (input, expected) in cases {
            let (normal, fired) = normalize(&parse_term(input).unwrap());
            assert_eq!(print_term(&normal), expected, "normalize({input})");
            assert!(fired > 0);
        }
    }

    #[test]
    fn replace_first_is_leftmost() {
        let t = parse_term("(Z + Z) + (Z + Z)").unwrap();
        let pat = parse_term("Z + Z").unwrap();
        let rep = parse_term("q").unwrap();
        assert_eq!(
            print_term(&replace_first(&t, &pat, &rep).unwrap()),
            "q + (Z + Z)"
        );
        assert!(replace_first(&parse_term("a").unwrap(), &pat, &rep).is_none());
    }

    fn arb_term() -> impl Strategy<Value = Term> {
        let leaf = prop_oneof![
            Just(Term::Zero),
            prop_oneof![Just("a"), Just("b"), Just("c")].prop_map(Term::var),
        ];
        leaf.prop_recursive(8, 50, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(Term::succ),
                (inner.clone(), inner.clone()).prop_map(|(l, r)| Term::add(l, r)),
                (inner.clone(), inner).prop_map(|(l, r)| Term::mul(l, r)),
            ]
        })
    }

    proptest! {
        // Termination on every term up to size ~50, with a generous step
        // bound; rules strictly decrease the documented measure.
        #[test]
        fn normalization_terminates(t in arb_term()) {
            prop_assume!(t.size() <= 50);
            let mut current = t;
            for _ in 0..200_000 {
                match rewrite_step(&current) {
                    Some(next) => current = next,
                    None => return Ok(()),
                }
            }
            prop_assert!(false, "normalization did not terminate");
        }

        // Rewriting preserves the value of closed terms.
        #[test]
        fn rewriting_preserves_value(t in arb_term()) {
            if let Some(v) = eval_closed(&t) {
                let (normal, _) = normalize(&t);
                prop_assert_eq!(eval_closed(&normal), Some(v));
            }
        }
    }
}
