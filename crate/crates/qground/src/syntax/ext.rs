//! Extended syntax: numeric constants `C3, C4, ...` and the `add`/`mult`
//! predicate sugar. Only the translation passes in `classes` consume it.

use super::{Const, Formula, Func, Recognizer, Rel, Term};

pub use super::parse::{parse_ext_formula, parse_ext_term};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum ExtTerm {
    /// `C_k` for any `k`.
    Const(u32),
    Var(u32),
    App(Func, Vec<ExtTerm>),
    /// An already-lowered term.
    Core(Term),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum ExtFormula {
    Atom(Rel, ExtTerm, ExtTerm),
    Add(ExtTerm, ExtTerm, ExtTerm),
    Mult(ExtTerm, ExtTerm, ExtTerm),
    Proves(Recognizer, Vec<ExtTerm>),
    Not(Box<ExtFormula>),
    And(Box<ExtFormula>, Box<ExtFormula>),
    Or(Box<ExtFormula>, Box<ExtFormula>),
    Implies(Box<ExtFormula>, Box<ExtFormula>),
    ForAll(u32, Box<ExtFormula>),
    Exists(u32, Box<ExtFormula>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LowerError {
    #[error("constant C{0} has no core counterpart; translate it first")]
    ExtendedConstant(u32),
    #[error("`{0}` predicate sugar must be expanded first")]
    Sugar(&'static str),
}

impl ExtTerm {
    pub fn lower(&self) -> Result<Term, LowerError> {
        Ok(match self {
            ExtTerm::Const(k) => Term::Const(match k {
                0 => Const::C0,
                1 => Const::C1,
                2 => Const::C2,
                _ => return Err(LowerError::ExtendedConstant(*k)),
            }),
            ExtTerm::Var(v) => Term::Var(*v),
            ExtTerm::App(f, args) => {
                Term::App(*f, args.iter().map(ExtTerm::lower).collect::<Result<_, _>>()?)
            }
            ExtTerm::Core(t) => t.clone(),
        })
    }

    pub fn map_consts(&self, f: &impl Fn(u32) -> Option<Term>) -> ExtTerm {
        match self {
            ExtTerm::Const(k) => f(*k).map(ExtTerm::Core).unwrap_or(ExtTerm::Const(*k)),
            ExtTerm::App(g, args) => ExtTerm::App(*g, args.iter().map(|a| a.map_consts(f)).collect()),
            _ => self.clone(),
        }
    }
}

impl From<&Term> for ExtTerm {
    fn from(t: &Term) -> Self {
        match t {
            Term::Const(c) => ExtTerm::Const(c.value() as u32),
            Term::Var(v) => ExtTerm::Var(*v),
            Term::App(f, args) => ExtTerm::App(*f, args.iter().map(ExtTerm::from).collect()),
            Term::Dag(_) => ExtTerm::Core(t.clone()),
        }
    }
}

impl ExtFormula {
    pub fn lower(&self) -> Result<Formula, LowerError> {
        Ok(match self {
            ExtFormula::Atom(r, a, b) => Formula::Atom(*r, a.lower()?, b.lower()?),
            ExtFormula::Add(..) => return Err(LowerError::Sugar("add")),
            ExtFormula::Mult(..) => return Err(LowerError::Sugar("mult")),
            ExtFormula::Proves(r, args) => {
                Formula::Proves(*r, args.iter().map(ExtTerm::lower).collect::<Result<_, _>>()?)
            }
            ExtFormula::Not(a) => Formula::not(a.lower()?),
            ExtFormula::And(a, b) => Formula::and(a.lower()?, b.lower()?),
            ExtFormula::Or(a, b) => Formula::or(a.lower()?, b.lower()?),
            ExtFormula::Implies(a, b) => Formula::implies(a.lower()?, b.lower()?),
            ExtFormula::ForAll(v, a) => Formula::forall(*v, a.lower()?),
            ExtFormula::Exists(v, a) => Formula::exists(*v, a.lower()?),
        })
    }

    /// Rebuild the formula, rewriting terms with `ft` and sugar atoms with `fa`.
    pub fn map(
        &self,
        ft: &impl Fn(&ExtTerm) -> ExtTerm,
        fa: &impl Fn(&ExtFormula) -> Option<ExtFormula>,
    ) -> ExtFormula {
        if let Some(r) = fa(self) {
            return r;
        }
        let b = |x: &ExtFormula| Box::new(x.map(ft, fa));
        match self {
            ExtFormula::Atom(r, x, y) => ExtFormula::Atom(*r, ft(x), ft(y)),
            ExtFormula::Add(x, y, z) => ExtFormula::Add(ft(x), ft(y), ft(z)),
            ExtFormula::Mult(x, y, z) => ExtFormula::Mult(ft(x), ft(y), ft(z)),
            ExtFormula::Proves(r, args) => ExtFormula::Proves(*r, args.iter().map(ft).collect()),
            ExtFormula::Not(a) => ExtFormula::Not(b(a)),
            ExtFormula::And(x, y) => ExtFormula::And(b(x), b(y)),
            ExtFormula::Or(x, y) => ExtFormula::Or(b(x), b(y)),
            ExtFormula::Implies(x, y) => ExtFormula::Implies(b(x), b(y)),
            ExtFormula::ForAll(v, a) => ExtFormula::ForAll(*v, b(a)),
            ExtFormula::Exists(v, a) => ExtFormula::Exists(*v, b(a)),
        }
    }
}

impl From<&Formula> for ExtFormula {
    fn from(f: &Formula) -> Self {
        let b = |x: &Formula| Box::new(ExtFormula::from(x));
        match f {
            Formula::Atom(r, x, y) => ExtFormula::Atom(*r, x.into(), y.into()),
            Formula::Proves(r, args) => ExtFormula::Proves(*r, args.iter().map(ExtTerm::from).collect()),
            Formula::Not(a) => ExtFormula::Not(b(a)),
            Formula::And(x, y) => ExtFormula::And(b(x), b(y)),
            Formula::Or(x, y) => ExtFormula::Or(b(x), b(y)),
            Formula::Implies(x, y) => ExtFormula::Implies(b(x), b(y)),
            Formula::ForAll(v, a) => ExtFormula::ForAll(*v, b(a)),
            Formula::Exists(v, a) => ExtFormula::Exists(*v, b(a)),
        }
    }
}
