//! Quantifier classes, the observable-term discipline for `theta`, and the
//! translations out of the extended syntax.

use std::fmt;

use crate::encoders::{build_dag_term, build_e};
use crate::semantics::eval_dag;
use crate::semantics::ThetaInterpretation;
use crate::syntax::ext::{ExtFormula, ExtTerm, LowerError};
use crate::syntax::{c0, c1, DagTerm, Formula, Func, Rel, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormulaClass {
    Delta0,
    Pi(u32),
    Sigma(u32),
    Unclassified,
}

impl FormulaClass {
    /// Δ₀ counts as both Π₀ and Σ₀.
    pub fn is_pi(self, n: u32) -> bool {
        match self {
            FormulaClass::Delta0 => true,
            FormulaClass::Pi(m) => m <= n,
            FormulaClass::Sigma(m) => m < n,
            FormulaClass::Unclassified => false,
        }
    }
}

impl fmt::Display for FormulaClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormulaClass::Delta0 => f.write_str("Delta0"),
            FormulaClass::Pi(n) => write!(f, "Pi{n}"),
            FormulaClass::Sigma(n) => write!(f, "Sigma{n}"),
            FormulaClass::Unclassified => f.write_str("Unclassified"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub class: FormulaClass,
    /// Where the first `theta` outside a power term sits, if any.
    pub stray_theta: Option<String>,
}

/// `Some(j)` when `t` is verbatim `build_e(j)` with `j >= 1`.
pub fn e_index(t: &Term) -> Option<usize> {
    let Term::App(Func::Div, args) = t else {
        return None;
    };
    let (w, mut h) = (&args[0], &args[1]);
    let mut j = 0;
    while h != w {
        match h {
            Term::App(Func::Div, inner) if inner[1] == Term::Const(crate::Const::C2) => {
                h = &inner[0];
                j += 1;
            }
            _ => return None,
        }
    }
    (j >= 1 && *t == build_e(j)).then_some(j)
}

/// True when `d` is the canonical DAG numeral of its own value.
pub fn is_canonical_dag(d: &DagTerm) -> bool {
    match eval_dag(d, &ThetaInterpretation::doubling()) {
        Ok(v) => build_dag_term(&v) == *d,
        Err(_) => false,
    }
}

fn stray_in_term(t: &Term, path: &mut Vec<String>) -> bool {
    match t {
        Term::Const(_) | Term::Var(_) => false,
        Term::Dag(d) => !is_canonical_dag(d),
        Term::App(f, args) => {
            if !t.contains_theta() || e_index(t).is_some() {
                return false;
            }
            if *f == Func::Theta {
                return true;
            }
            for (i, a) in args.iter().enumerate() {
                path.push(format!("{}.{i}", f.name()));
                if stray_in_term(a, path) {
                    return true;
                }
                path.pop();
            }
            false
        }
    }
}

fn stray_in_formula(phi: &Formula, path: &mut Vec<String>) -> bool {
    let sub = |label: &str, x: &Formula, path: &mut Vec<String>| {
        path.push(label.to_string());
        if stray_in_formula(x, path) {
            return true;
        }
        path.pop();
        false
    };
    match phi {
        Formula::Atom(_, a, b) => {
            for (label, t) in [("lhs", a), ("rhs", b)] {
                path.push(label.into());
                if stray_in_term(t, path) {
                    return true;
                }
                path.pop();
            }
            false
        }
        Formula::Proves(r, args) => args.iter().enumerate().any(|(i, t)| {
            path.push(format!("{}.{i}", r.name()));
            let hit = stray_in_term(t, path);
            if !hit {
                path.pop();
            }
            hit
        }),
        Formula::Not(a) => sub("not", a, path),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            sub("left", a, path) || sub("right", b, path)
        }
        Formula::ForAll(_, a) | Formula::Exists(_, a) => sub("body", a, path),
    }
}

/// Path to the first `theta` occurrence outside a power term or canonical numeral.
pub fn stray_theta(phi: &Formula) -> Option<String> {
    let mut path = Vec::new();
    stray_in_formula(phi, &mut path).then(|| {
        if path.is_empty() {
            "root".to_string()
        } else {
            path.join("/")
        }
    })
}

pub fn is_delta0(phi: &Formula) -> bool {
    match phi {
        Formula::Atom(..) | Formula::Proves(..) => true,
        Formula::Not(a) => is_delta0(a),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => is_delta0(a) && is_delta0(b),
        Formula::ForAll(..) => phi.as_bounded_forall().is_some_and(|(_, _, body)| is_delta0(body)),
        Formula::Exists(..) => phi.as_bounded_exists().is_some_and(|(_, _, body)| is_delta0(body)),
    }
}

fn prefix_class(phi: &Formula) -> FormulaClass {
    if is_delta0(phi) {
        return FormulaClass::Delta0;
    }
    let universal = match phi {
        Formula::ForAll(..) => true,
        Formula::Exists(..) => false,
        _ => return FormulaClass::Unclassified,
    };
    let mut rest = phi;
    loop {
        match (rest, universal) {
            (Formula::ForAll(_, body), true) | (Formula::Exists(_, body), false) => rest = body,
            _ => break,
        }
    }
    match (prefix_class(rest), universal) {
        (FormulaClass::Delta0, true) => FormulaClass::Pi(1),
        (FormulaClass::Delta0, false) => FormulaClass::Sigma(1),
        (FormulaClass::Sigma(n), true) => FormulaClass::Pi(n + 1),
        (FormulaClass::Pi(n), false) => FormulaClass::Sigma(n + 1),
        _ => FormulaClass::Unclassified,
    }
}

pub fn classify_detailed(phi: &Formula) -> Verdict {
    if let Some(path) = stray_theta(phi) {
        return Verdict {
            class: FormulaClass::Unclassified,
            stray_theta: Some(path),
        };
    }
    Verdict {
        class: prefix_class(phi),
        stray_theta: None,
    }
}

pub fn classify(phi: &Formula) -> FormulaClass {
    classify_detailed(phi).class
}

fn term_is_simple(t: &Term) -> bool {
    match t {
        Term::Const(_) | Term::Var(_) => true,
        Term::Dag(_) => false,
        Term::App(_, args) => match e_index(t) {
            Some(j) => j < 2,
            None => args.iter().all(term_is_simple),
        },
    }
}

/// No power term `E_j` with `j >= 2` anywhere in the formula.
pub fn is_simple(phi: &Formula) -> bool {
    let mut ok = true;
    phi.for_each_term(&mut |t| ok &= term_is_simple(t));
    ok
}

/// A Π₁ sentence without power terms beyond `E_1`.
pub fn is_simple_pi1(phi: &Formula) -> bool {
    phi.is_sentence() && classify(phi).is_pi(1) && is_simple(phi)
}

/// Replace each `C_k` with `k >= 3` by the power term `E_{k-1}`.
pub fn translate_anc(phi: &ExtFormula) -> Result<Formula, LowerError> {
    let consts = |k: u32| (k >= 3).then(|| build_e(k as usize - 1));
    phi.map(&|t: &ExtTerm| t.map_consts(&consts), &|_| None).lower()
}

/// Rewrite `add` and `mult` atoms into the core connectives.
pub fn expand_arith_predicates(phi: &ExtFormula) -> ExtFormula {
    phi.map(&|t: &ExtTerm| t.clone(), &|f| match f {
        ExtFormula::Add(x, y, z) => Some(expand_add(x, y, z)),
        ExtFormula::Mult(x, y, z) => Some(expand_mult(x, y, z)),
        _ => None,
    })
}

fn app(f: Func, args: Vec<ExtTerm>) -> ExtTerm {
    ExtTerm::App(f, args)
}

fn atom(r: Rel, a: ExtTerm, b: ExtTerm) -> ExtFormula {
    ExtFormula::Atom(r, a, b)
}

fn and(a: ExtFormula, b: ExtFormula) -> ExtFormula {
    ExtFormula::And(Box::new(a), Box::new(b))
}

fn not(a: ExtFormula) -> ExtFormula {
    ExtFormula::Not(Box::new(a))
}

/// `(z - x = y) & (x <= z)`.
fn expand_add(x: &ExtTerm, y: &ExtTerm, z: &ExtTerm) -> ExtFormula {
    and(
        atom(Rel::Eq, app(Func::Sub, vec![z.clone(), x.clone()]), y.clone()),
        atom(Rel::Leq, x.clone(), z.clone()),
    )
}

/// `[(x = 0 | y = 0) -> z = 0] & [(x != 0 & y != 0) -> (z / x = y & (z - 1) / x < y)]`.
fn expand_mult(x: &ExtTerm, y: &ExtTerm, z: &ExtTerm) -> ExtFormula {
    let zero = ExtTerm::from(&c0());
    let one = ExtTerm::from(&c1());
    let is_zero = |t: &ExtTerm| atom(Rel::Eq, t.clone(), zero.clone());
    let either_zero = ExtFormula::Or(Box::new(is_zero(x)), Box::new(is_zero(y)));
    let both_nonzero = and(not(is_zero(x)), not(is_zero(y)));
    let quotient = atom(Rel::Eq, app(Func::Div, vec![z.clone(), x.clone()]), y.clone());
    let below = not(atom(
        Rel::Leq,
        y.clone(),
        app(Func::Div, vec![app(Func::Sub, vec![z.clone(), one]), x.clone()]),
    ));
    and(
        ExtFormula::Implies(Box::new(either_zero), Box::new(is_zero(z))),
        ExtFormula::Implies(Box::new(both_nonzero), Box::new(and(quotient, below))),
    )
}

/// Expand the predicate sugar, then translate the extended constants.
pub fn lower_extended(phi: &ExtFormula) -> Result<Formula, LowerError> {
    translate_anc(&expand_arith_predicates(phi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoders::numeral;
    use crate::semantics::eval_formula;
    use crate::syntax::ext::parse_ext_formula;
    use crate::syntax::{c2, parse_formula, var};
    use crate::Nat;

    fn class(s: &str) -> FormulaClass {
        classify(&parse_formula(s).unwrap())
    }

    #[test]
    fn spec_examples() {
        let f = Formula::forall(0, Formula::implies(Formula::leq(var(0), c2()), Formula::eq(var(0), var(0))));
        assert_eq!(classify(&f), FormulaClass::Delta0);
        assert_eq!(class("forall v0. C0 <= v0"), FormulaClass::Pi(1));
        let v = classify_detailed(&parse_formula("forall v0. theta(v0) = C0").unwrap());
        assert_eq!(v.class, FormulaClass::Unclassified);
        assert_eq!(v.stray_theta.as_deref(), Some("body/lhs"));
    }

    #[test]
    fn prefix_blocks() {
        assert_eq!(class("exists v0. exists v1. v0 = v1"), FormulaClass::Sigma(1));
        assert_eq!(class("forall v2. exists v0. exists v1. v0 = v1"), FormulaClass::Pi(2));
        assert_eq!(class("exists v3. forall v2. exists v0. v0 = v2"), FormulaClass::Sigma(3));
        assert_eq!(class("~(forall v0. v0 = v0)"), FormulaClass::Unclassified);
        // a bound mentioning its own variable is not bounded
        assert_eq!(class("forall v0. v0 <= v0 -> v0 = v0"), FormulaClass::Pi(1));
    }

    #[test]
    fn power_terms_are_allowed() {
        for j in 1..6 {
            assert_eq!(e_index(&build_e(j)), Some(j));
            let f = Formula::forall(0, Formula::leq(var(0), build_e(j)));
            assert_eq!(classify(&f), FormulaClass::Pi(1));
            assert_eq!(is_simple(&f), j < 2);
        }
        let f = Formula::eq(numeral(&Nat::from(1000)), var(0));
        assert_eq!(classify(&f), FormulaClass::Delta0);
        assert!(!is_simple(&f));
        assert!(e_index(&Term::theta(c1())).is_none());
    }

    #[test]
    fn anc_translation() {
        let f = parse_ext_formula("C4 = C4 & C6 <= C10 & C2 = C2").unwrap();
        let g = translate_anc(&f).unwrap();
        let expected = Formula::and(
            Formula::and(Formula::eq(build_e(3), build_e(3)), Formula::leq(build_e(5), build_e(9))),
            Formula::eq(c2(), c2()),
        );
        assert_eq!(g, expected);
        let plain = parse_formula("forall v0 <= C2. v0 = v0").unwrap();
        assert_eq!(translate_anc(&ExtFormula::from(&plain)).unwrap(), plain);
    }

    #[test]
    fn arithmetic_sugar() {
        let s = ThetaInterpretation::doubling();
        let truth = |f: &ExtFormula| eval_formula(&lower_extended(f).unwrap(), &s, None).unwrap();
        assert!(truth(&parse_ext_formula("add(C1, C1, C2)").unwrap()));
        assert!(!truth(&parse_ext_formula("add(C1, C1, C1)").unwrap()));
        let two = ExtTerm::Const(2);
        for z in 0..=8u64 {
            let f = ExtFormula::Mult(two.clone(), two.clone(), ExtTerm::Core(numeral(&Nat::from(z))));
            assert_eq!(truth(&f), z == 4, "z = {z}");
        }
        let zero_factor = expand_arith_predicates(&ExtFormula::Mult(ExtTerm::Var(0), ExtTerm::Const(0), ExtTerm::Var(2)));
        let ExtFormula::And(first, _) = zero_factor else { panic!() };
        assert!(matches!(*first, ExtFormula::Implies(_, ref z) if **z == ExtFormula::Atom(Rel::Eq, ExtTerm::Var(2), ExtTerm::Const(0))));
    }
}
