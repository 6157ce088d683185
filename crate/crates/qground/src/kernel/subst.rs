//! Substitution of a formula's own code into itself, and the proof
//! predicates built on it.

use super::{check_proof_bytes, AxiomSystem, Verdict, WithAxiom};
use crate::codec::{decode_formula, decode_proof_spans, encode_formula, godel_number};
use crate::encoders::numeral;
use crate::syntax::{Formula, Term};
use crate::Nat;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DiagonalError {
    #[error("formula must have exactly one free variable, found {0}")]
    FreeVars(usize),
}

/// The numeral naming the Gödel number of `bytes`.
pub fn code_numeral(bytes: &[u8]) -> Term {
    numeral(&Nat::from_big(godel_number(bytes)))
}

fn self_substitute(gamma: &Formula, n: &Term) -> Formula {
    gamma
        .free_vars()
        .into_iter()
        .fold(gamma.clone(), |f, v| f.subst_unchecked(v, n))
}

/// `gamma(<gamma>)` for a formula with one free variable.
pub fn diagonalize(gamma: &Formula) -> Result<Formula, DiagonalError> {
    let free = gamma.free_vars();
    if free.len() != 1 {
        return Err(DiagonalError::FreeVars(free.len()));
    }
    let n = code_numeral(&encode_formula(gamma));
    Ok(self_substitute(gamma, &n))
}

/// Does `h` encode `g`'s formula with every free variable replaced by the
/// numeral of `g`'s code?
pub fn subst_predicate(g: &[u8], h: &[u8]) -> bool {
    let Ok(gamma) = decode_formula(g) else { return false };
    if gamma.is_sentence() {
        return g == h;
    }
    let n = code_numeral(g);
    encode_formula(&self_substitute(&gamma, &n)) == h
}

fn proves(p: &[u8], t: &[u8], alpha: &dyn AxiomSystem) -> bool {
    match check_proof_bytes(p, alpha).0 {
        Verdict::Valid(thm) => encode_formula(&thm) == t,
        Verdict::Invalid { .. } => false,
    }
}

/// `p` proves `t` from `base`, or from `base` plus one axiom `h` with
/// `subst_predicate(g, h)`. Any such `h` must occur as a step of `p`.
pub fn subst_prf(g: &[u8], t: &[u8], p: &[u8], base: &dyn AxiomSystem) -> bool {
    if proves(p, t, base) {
        return true;
    }
    let Ok(spans) = decode_proof_spans(p) else { return false };
    let mut tried = std::collections::HashSet::new();
    spans.iter().any(|(_, range)| {
        let h = &p[range.clone()];
        tried.insert(h)
            && subst_predicate(g, h)
            && proves(p, t, &WithAxiom { base, added: h.to_vec() })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{AxiomSet, Justification, Proof, Step};
    use crate::semantics::eval_theta_free;
    use crate::syntax::parse_formula;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn fixed_point() {
        let gamma = f("forall v1. ~v0 = v1");
        let d = diagonalize(&gamma).unwrap();
        let Formula::ForAll(_, body) = &d else { panic!() };
        let Formula::Not(atom) = body.as_ref() else { panic!() };
        let Formula::Atom(_, n, _) = atom.as_ref() else { panic!() };
        let want = Nat::from_big(godel_number(&encode_formula(&gamma)));
        assert_eq!(eval_theta_free(n).unwrap(), want);
        assert!(subst_predicate(&encode_formula(&gamma), &encode_formula(&d)));
        assert!(!subst_predicate(&encode_formula(&gamma), &encode_formula(&gamma)));
        assert!(diagonalize(&f("C0 = C0")).is_err());
    }

    #[test]
    fn closed_formula_substitutes_vacuously() {
        let g = encode_formula(&f("C0 = C0"));
        assert!(subst_predicate(&g, &g));
        assert!(!subst_predicate(&g, &encode_formula(&f("C1 = C1"))));
    }

    #[test]
    fn prf_and_added_axiom() {
        let gamma = f("v0 = v0");
        let g = encode_formula(&gamma);
        let h = diagonalize(&gamma).unwrap();
        let base = AxiomSet::new("base", vec![f("C0 = C0")]);
        let one = |x: &Formula| Proof {
            steps: vec![Step { formula: x.clone(), justification: Justification::Proper }],
        };
        let t0 = encode_formula(&f("C0 = C0"));
        assert!(subst_prf(&g, &t0, &one(&f("C0 = C0")).to_bytes(), &base));
        let th = encode_formula(&h);
        assert!(subst_prf(&g, &th, &one(&h).to_bytes(), &base));
        // valid proof of a different theorem
        assert!(!subst_prf(&g, &t0, &one(&h).to_bytes(), &base));
        let other = encode_formula(&f("v3 = v3"));
        assert!(!subst_prf(&other, &th, &one(&h).to_bytes(), &base));
    }
}
