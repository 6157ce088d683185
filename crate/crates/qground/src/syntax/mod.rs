//! Terms and formulas of the Q-Grounding language.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

#[cfg(test)]
pub(crate) mod arb;
mod dag;
pub mod ext;
mod parse;
mod print;

pub use dag::{DagError, DagNode, DagTerm};
pub use parse::{parse_formula, parse_term, ParseError};

/// The three built-in constants.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Const {
    C0,
    C1,
    C2,
}

impl Const {
    pub const ALL: [Const; 3] = [Const::C0, Const::C1, Const::C2];

    pub fn value(self) -> u64 {
        match self {
            Const::C0 => 0,
            Const::C1 => 1,
            Const::C2 => 2,
        }
    }

    pub fn from_value(v: u64) -> Option<Const> {
        match v {
            0 => Some(Const::C0),
            1 => Some(Const::C1),
            2 => Some(Const::C2),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Const::C0 => "C0",
            Const::C1 => "C1",
            Const::C2 => "C2",
        }
    }
}

/// The seven function symbols.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Func {
    Sub,
    Div,
    Max,
    Root,
    Log,
    Count,
    Theta,
}

impl Func {
    pub const ALL: [Func; 7] = [
        Func::Sub,
        Func::Div,
        Func::Max,
        Func::Root,
        Func::Log,
        Func::Count,
        Func::Theta,
    ];

    pub fn arity(self) -> usize {
        match self {
            Func::Log | Func::Theta => 1,
            _ => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Sub => "sub",
            Func::Div => "div",
            Func::Max => "max",
            Func::Root => "root",
            Func::Log => "log",
            Func::Count => "count",
            Func::Theta => "theta",
        }
    }

    pub fn from_name(s: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == s)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Rel {
    Eq,
    Leq,
}

/// Proof-recognizer atoms used by the reflection and diagonal axioms.
/// `HilbPrf(theorem, proof)` and `SubstPrf(formula, theorem, proof)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Recognizer {
    HilbPrf,
    SubstPrf,
}

impl Recognizer {
    pub fn arity(self) -> usize {
        match self {
            Recognizer::HilbPrf => 2,
            Recognizer::SubstPrf => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Recognizer::HilbPrf => "HilbPrf",
            Recognizer::SubstPrf => "SubstPrf",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Const(Const),
    Var(u32),
    App(Func, Vec<Term>),
    /// A ground term stored with shared subterms.
    Dag(Arc<DagTerm>),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(Rel, Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    ForAll(u32, Box<Formula>),
    Exists(u32, Box<Formula>),
    Proves(Recognizer, Vec<Term>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SyntaxError {
    #[error("{name} expects {expected} argument(s), got {got}")]
    Arity {
        name: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("substituting for v{var} would capture a variable of the replacement term")]
    Capture { var: u32 },
}

pub fn c0() -> Term {
    Term::Const(Const::C0)
}
pub fn c1() -> Term {
    Term::Const(Const::C1)
}
pub fn c2() -> Term {
    Term::Const(Const::C2)
}
pub fn var(i: u32) -> Term {
    Term::Var(i)
}

impl Term {
    pub fn apply(f: Func, args: Vec<Term>) -> Result<Term, SyntaxError> {
        if args.len() != f.arity() {
            return Err(SyntaxError::Arity {
                name: f.name(),
                expected: f.arity(),
                got: args.len(),
            });
        }
        Ok(Term::App(f, args))
    }

    pub fn sub(a: Term, b: Term) -> Term {
        Term::App(Func::Sub, vec![a, b])
    }
    pub fn div(a: Term, b: Term) -> Term {
        Term::App(Func::Div, vec![a, b])
    }
    pub fn max(a: Term, b: Term) -> Term {
        Term::App(Func::Max, vec![a, b])
    }
    pub fn root(a: Term, b: Term) -> Term {
        Term::App(Func::Root, vec![a, b])
    }
    pub fn log(a: Term) -> Term {
        Term::App(Func::Log, vec![a])
    }
    pub fn count(a: Term, b: Term) -> Term {
        Term::App(Func::Count, vec![a, b])
    }
    pub fn theta(a: Term) -> Term {
        Term::App(Func::Theta, vec![a])
    }

    /// `Pred(t)`, i.e. `t - C1`.
    pub fn pred(t: Term) -> Term {
        Term::sub(t, c1())
    }

    /// `Half(t)`, i.e. `t ÷ C2`.
    pub fn half(t: Term) -> Term {
        Term::div(t, c2())
    }

    pub fn pred_n(t: Term, n: usize) -> Term {
        (0..n).fold(t, |acc, _| Term::pred(acc))
    }

    pub fn half_n(t: Term, n: usize) -> Term {
        (0..n).fold(t, |acc, _| Term::half(acc))
    }

    pub fn theta_n(t: Term, n: usize) -> Term {
        (0..n).fold(t, |acc, _| Term::theta(acc))
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Const(_) | Term::Dag(_) => true,
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn contains_var(&self, v: u32) -> bool {
        match self {
            Term::Var(w) => *w == v,
            Term::App(_, args) => args.iter().any(|a| a.contains_var(v)),
            _ => false,
        }
    }

    pub fn contains_theta(&self) -> bool {
        match self {
            Term::Const(_) | Term::Var(_) => false,
            Term::App(f, args) => *f == Func::Theta || args.iter().any(Term::contains_theta),
            Term::Dag(d) => d.nodes().iter().any(|n| matches!(n, DagNode::Op(Func::Theta, _))),
        }
    }

    pub fn vars_into(&self, out: &mut BTreeSet<u32>) {
        match self {
            Term::Var(v) => {
                out.insert(*v);
            }
            Term::App(_, args) => args.iter().for_each(|a| a.vars_into(out)),
            _ => {}
        }
    }

    pub fn vars(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        self.vars_into(&mut out);
        out
    }

    /// Number of function and constant symbol occurrences (shared DAG
    /// nodes are counted once per node).
    pub fn symbol_count(&self) -> usize {
        match self {
            Term::Const(_) => 1,
            Term::Var(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::symbol_count).sum::<usize>(),
            Term::Dag(d) => d.node_count(),
        }
    }

    /// Replace every occurrence of `v` by `t`.
    pub fn replace_var(&self, v: u32, t: &Term) -> Term {
        match self {
            Term::Var(w) if *w == v => t.clone(),
            Term::App(f, args) => Term::App(*f, args.iter().map(|a| a.replace_var(v, t)).collect()),
            _ => self.clone(),
        }
    }
}

impl Formula {
    pub fn eq(a: Term, b: Term) -> Formula {
        Formula::Atom(Rel::Eq, a, b)
    }
    pub fn leq(a: Term, b: Term) -> Formula {
        Formula::Atom(Rel::Leq, a, b)
    }
    pub fn neq(a: Term, b: Term) -> Formula {
        Formula::not(Formula::eq(a, b))
    }
    /// `a < b`, written as `¬(b ≤ a)`.
    pub fn lt(a: Term, b: Term) -> Formula {
        Formula::not(Formula::leq(b, a))
    }
    pub fn not(a: Formula) -> Formula {
        Formula::Not(Box::new(a))
    }
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }
    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }
    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }
    pub fn forall(v: u32, body: Formula) -> Formula {
        Formula::ForAll(v, Box::new(body))
    }
    pub fn exists(v: u32, body: Formula) -> Formula {
        Formula::Exists(v, Box::new(body))
    }
    /// `∀v ≤ bound. body`.
    pub fn forall_le(v: u32, bound: Term, body: Formula) -> Formula {
        Formula::forall(v, Formula::implies(Formula::leq(Term::Var(v), bound), body))
    }
    /// `∃v ≤ bound. body`.
    pub fn exists_le(v: u32, bound: Term, body: Formula) -> Formula {
        Formula::exists(v, Formula::and(Formula::leq(Term::Var(v), bound), body))
    }
    /// Right-nested conjunction; `None` for an empty list.
    pub fn and_all(parts: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        let mut parts: Vec<Formula> = parts.into_iter().collect();
        let mut acc = parts.pop()?;
        while let Some(p) = parts.pop() {
            acc = Formula::and(p, acc);
        }
        Some(acc)
    }
    pub fn forall_many(vars: &[u32], body: Formula) -> Formula {
        vars.iter().rev().fold(body, |acc, v| Formula::forall(*v, acc))
    }

    /// If this is `∀v (v ≤ t ⇒ body)`, return `(v, t, body)`.
    pub fn as_bounded_forall(&self) -> Option<(u32, &Term, &Formula)> {
        if let Formula::ForAll(v, inner) = self {
            if let Formula::Implies(guard, body) = inner.as_ref() {
                if let Formula::Atom(Rel::Leq, Term::Var(w), bound) = guard.as_ref() {
                    if w == v && !bound.contains_var(*v) {
                        return Some((*v, bound, body));
                    }
                }
            }
        }
        None
    }

    /// If this is `∃v (v ≤ t ∧ body)`, return `(v, t, body)`.
    pub fn as_bounded_exists(&self) -> Option<(u32, &Term, &Formula)> {
        if let Formula::Exists(v, inner) = self {
            if let Formula::And(guard, body) = inner.as_ref() {
                if let Formula::Atom(Rel::Leq, Term::Var(w), bound) = guard.as_ref() {
                    if w == v && !bound.contains_var(*v) {
                        return Some((*v, bound, body));
                    }
                }
            }
        }
        None
    }

    pub fn free_vars(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        self.free_vars_into(&mut Vec::new(), &mut out);
        out
    }

    fn free_vars_into(&self, bound: &mut Vec<u32>, out: &mut BTreeSet<u32>) {
        let mut add_term = |t: &Term, bound: &Vec<u32>| {
            for v in t.vars() {
                if !bound.contains(&v) {
                    out.insert(v);
                }
            }
        };
        match self {
            Formula::Atom(_, a, b) => {
                add_term(a, bound);
                add_term(b, bound);
            }
            Formula::Proves(_, args) => args.iter().for_each(|a| add_term(a, bound)),
            Formula::Not(a) => a.free_vars_into(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.free_vars_into(bound, out);
                b.free_vars_into(bound, out);
            }
            Formula::ForAll(v, body) | Formula::Exists(v, body) => {
                bound.push(*v);
                body.free_vars_into(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_free(&self, v: u32) -> bool {
        match self {
            Formula::Atom(_, a, b) => a.contains_var(v) || b.contains_var(v),
            Formula::Proves(_, args) => args.iter().any(|a| a.contains_var(v)),
            Formula::Not(a) => a.is_free(v),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.is_free(v) || b.is_free(v)
            }
            Formula::ForAll(w, body) | Formula::Exists(w, body) => *w != v && body.is_free(v),
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// True iff no free occurrence of `v` lies under a binder of a variable of `t`.
    pub fn substitutable(&self, v: u32, t: &Term) -> bool {
        let tv = t.vars();
        self.substitutable_under(v, &tv, false)
    }

    fn substitutable_under(&self, v: u32, tv: &BTreeSet<u32>, captured: bool) -> bool {
        match self {
            Formula::Atom(..) | Formula::Proves(..) => !(captured && self.is_free(v)),
            Formula::Not(a) => a.substitutable_under(v, tv, captured),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.substitutable_under(v, tv, captured) && b.substitutable_under(v, tv, captured)
            }
            Formula::ForAll(w, body) | Formula::Exists(w, body) => {
                if *w == v {
                    true
                } else {
                    body.substitutable_under(v, tv, captured || tv.contains(w))
                }
            }
        }
    }

    /// Replace the free occurrences of `v` by `t`.
    pub fn substitute(&self, v: u32, t: &Term) -> Result<Formula, SyntaxError> {
        if !self.substitutable(v, t) {
            return Err(SyntaxError::Capture { var: v });
        }
        Ok(self.subst_unchecked(v, t))
    }

    /// Substitution without the capture check.
    pub fn subst_unchecked(&self, v: u32, t: &Term) -> Formula {
        match self {
            Formula::Atom(r, a, b) => Formula::Atom(*r, a.replace_var(v, t), b.replace_var(v, t)),
            Formula::Proves(r, args) => {
                Formula::Proves(*r, args.iter().map(|a| a.replace_var(v, t)).collect())
            }
            Formula::Not(a) => Formula::not(a.subst_unchecked(v, t)),
            Formula::And(a, b) => Formula::and(a.subst_unchecked(v, t), b.subst_unchecked(v, t)),
            Formula::Or(a, b) => Formula::or(a.subst_unchecked(v, t), b.subst_unchecked(v, t)),
            Formula::Implies(a, b) => {
                Formula::implies(a.subst_unchecked(v, t), b.subst_unchecked(v, t))
            }
            Formula::ForAll(w, body) if *w != v => Formula::forall(*w, body.subst_unchecked(v, t)),
            Formula::Exists(w, body) if *w != v => Formula::exists(*w, body.subst_unchecked(v, t)),
            Formula::ForAll(..) | Formula::Exists(..) => self.clone(),
        }
    }

    /// Rewrite `∧`, `∨`, `∃` into `¬`, `⇒`, `∀`:
    /// `A∧B = ¬(A⇒¬B)`, `A∨B = ¬A⇒B`, `∃vA = ¬∀v¬A`.
    pub fn desugar(&self) -> Formula {
        match self {
            Formula::Atom(..) | Formula::Proves(..) => self.clone(),
            Formula::Not(a) => Formula::not(a.desugar()),
            Formula::Implies(a, b) => Formula::implies(a.desugar(), b.desugar()),
            Formula::And(a, b) => {
                Formula::not(Formula::implies(a.desugar(), Formula::not(b.desugar())))
            }
            Formula::Or(a, b) => Formula::implies(Formula::not(a.desugar()), b.desugar()),
            Formula::ForAll(v, a) => Formula::forall(*v, a.desugar()),
            Formula::Exists(v, a) => {
                Formula::not(Formula::forall(*v, Formula::not(a.desugar())))
            }
        }
    }

    pub fn is_core(&self) -> bool {
        match self {
            Formula::Atom(..) | Formula::Proves(..) => true,
            Formula::Not(a) | Formula::ForAll(_, a) => a.is_core(),
            Formula::Implies(a, b) => a.is_core() && b.is_core(),
            Formula::And(..) | Formula::Or(..) | Formula::Exists(..) => false,
        }
    }

    pub fn for_each_term<'a>(&'a self, f: &mut impl FnMut(&'a Term)) {
        match self {
            Formula::Atom(_, a, b) => {
                f(a);
                f(b);
            }
            Formula::Proves(_, args) => args.iter().for_each(|a| f(a)),
            Formula::Not(a) | Formula::ForAll(_, a) | Formula::Exists(_, a) => a.for_each_term(f),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.for_each_term(f);
                b.for_each_term(f);
            }
        }
    }

    pub fn contains_theta(&self) -> bool {
        let mut found = false;
        self.for_each_term(&mut |t| found |= t.contains_theta());
        found
    }

    /// Every variable index appearing anywhere, bound or free.
    pub fn all_vars(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        self.all_vars_into(&mut out);
        out
    }

    fn all_vars_into(&self, out: &mut BTreeSet<u32>) {
        match self {
            Formula::ForAll(v, a) | Formula::Exists(v, a) => {
                out.insert(*v);
                a.all_vars_into(out);
            }
            Formula::Not(a) => a.all_vars_into(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.all_vars_into(out);
                b.all_vars_into(out);
            }
            Formula::Atom(_, a, b) => {
                a.vars_into(out);
                b.vars_into(out);
            }
            Formula::Proves(_, args) => args.iter().for_each(|a| a.vars_into(out)),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print::term_to_string(self))
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print::formula_to_string(self))
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
