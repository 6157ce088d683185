//! Recognition of the logical axiom schemas on expanded formulas.

use std::fmt;
use std::str::FromStr;

use crate::syntax::{Formula, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Schema {
    /// `B -> (C -> B)`
    I,
    /// `(B -> (C -> D)) -> ((B -> C) -> (B -> D))`
    II,
    /// `(~C -> ~B) -> ((~C -> B) -> C)`
    III,
    /// `forall x. phi -> phi[x := t]`, `t` substitutable
    Inst,
    /// `forall x. (phi -> psi) -> (forall x. phi -> forall x. psi)`
    Dist,
    /// `psi -> forall x. psi`, `x` not free in `psi`
    Gen,
}

impl Schema {
    pub const ALL: [Schema; 6] = [Schema::I, Schema::II, Schema::III, Schema::Inst, Schema::Dist, Schema::Gen];

    pub fn id(self) -> &'static str {
        match self {
            Schema::I => "I",
            Schema::II => "II",
            Schema::III => "III",
            Schema::Inst => "2",
            Schema::Dist => "3",
            Schema::Gen => "4",
        }
    }
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Schema {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        Schema::ALL.into_iter().find(|x| x.id() == s).ok_or(())
    }
}

fn imp(f: &Formula) -> Option<(&Formula, &Formula)> {
    match f {
        Formula::Implies(a, b) => Some((a, b)),
        _ => None,
    }
}

fn neg(f: &Formula) -> Option<&Formula> {
    match f {
        Formula::Not(a) => Some(a),
        _ => None,
    }
}

fn forall(f: &Formula) -> Option<(u32, &Formula)> {
    match f {
        Formula::ForAll(v, a) => Some((*v, a)),
        _ => None,
    }
}

fn schema_i(f: &Formula) -> Option<()> {
    let (b, rest) = imp(f)?;
    let (_, b2) = imp(rest)?;
    (b == b2).then_some(())
}

fn schema_ii(f: &Formula) -> Option<()> {
    let (l, r) = imp(f)?;
    let (b, cd) = imp(l)?;
    let (c, d) = imp(cd)?;
    let (bc, bd) = imp(r)?;
    let (b2, c2) = imp(bc)?;
    let (b3, d2) = imp(bd)?;
    (b == b2 && b == b3 && c == c2 && d == d2).then_some(())
}

fn schema_iii(f: &Formula) -> Option<()> {
    let (l, r) = imp(f)?;
    let (nc, nb) = imp(l)?;
    let (c, b) = (neg(nc)?, neg(nb)?);
    let (ncb, c2) = imp(r)?;
    let (nc2, b2) = imp(ncb)?;
    (neg(nc2)? == c && b2 == b && c2 == c).then_some(())
}

fn match_term(pat: &Term, t: &Term, x: u32, slot: &mut Option<Term>) -> bool {
    match (pat, t) {
        (Term::Var(v), _) if *v == x => match slot {
            Some(s) => s == t,
            None => {
                *slot = Some(t.clone());
                true
            }
        },
        (Term::App(f, xs), Term::App(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(a, b)| match_term(a, b, x, slot))
        }
        _ => pat == t,
    }
}

/// Walk `phi` and `psi` together, collecting the term that replaces free `x`.
fn match_instance(phi: &Formula, psi: &Formula, x: u32, slot: &mut Option<Term>) -> bool {
    match (phi, psi) {
        (Formula::Atom(r, a, b), Formula::Atom(s, c, d)) => {
            r == s && match_term(a, c, x, slot) && match_term(b, d, x, slot)
        }
        (Formula::Proves(r, xs), Formula::Proves(s, ys)) => {
            r == s && xs.iter().zip(ys).all(|(a, b)| match_term(a, b, x, slot))
        }
        (Formula::Not(a), Formula::Not(b)) => match_instance(a, b, x, slot),
        (Formula::Implies(a, b), Formula::Implies(c, d))
        | (Formula::And(a, b), Formula::And(c, d))
        | (Formula::Or(a, b), Formula::Or(c, d)) => {
            match_instance(a, c, x, slot) && match_instance(b, d, x, slot)
        }
        (Formula::ForAll(v, a), Formula::ForAll(w, b)) | (Formula::Exists(v, a), Formula::Exists(w, b)) => {
            v == w && if *v == x { a == b } else { match_instance(a, b, x, slot) }
        }
        _ => false,
    }
}

fn schema_inst(f: &Formula) -> Option<()> {
    let (l, psi) = imp(f)?;
    let (x, phi) = forall(l)?;
    let mut slot = None;
    if !match_instance(phi, psi, x, &mut slot) {
        return None;
    }
    match slot {
        Some(t) => phi.substitutable(x, &t).then_some(()),
        None => Some(()),
    }
}

fn schema_dist(f: &Formula) -> Option<()> {
    let (l, r) = imp(f)?;
    let (x, body) = forall(l)?;
    let (phi, psi) = imp(body)?;
    let (al, ar) = imp(r)?;
    let (x2, phi2) = forall(al)?;
    let (x3, psi2) = forall(ar)?;
    (x == x2 && x == x3 && phi == phi2 && psi == psi2).then_some(())
}

fn schema_gen(f: &Formula) -> Option<()> {
    let (psi, r) = imp(f)?;
    let (x, psi2) = forall(r)?;
    (psi == psi2 && !psi.is_free(x)).then_some(())
}

fn matches_bare(f: &Formula, s: Schema) -> bool {
    match s {
        Schema::I => schema_i(f),
        Schema::II => schema_ii(f),
        Schema::III => schema_iii(f),
        Schema::Inst => schema_inst(f),
        Schema::Dist => schema_dist(f),
        Schema::Gen => schema_gen(f),
    }
    .is_some()
}

/// Does the expanded formula `key`, or any formula under its outer universal
/// prefix, instantiate schema `s`?
pub fn matches_schema(key: &Formula, s: Schema) -> bool {
    let mut cur = key;
    loop {
        if matches_bare(cur, s) {
            return true;
        }
        match cur {
            Formula::ForAll(_, body) => cur = body,
            _ => return false,
        }
    }
}

/// First schema (in the order I, II, III, 2, 3, 4) that `f` instantiates.
pub fn is_logical_axiom(f: &Formula) -> Option<Schema> {
    let key = f.desugar();
    let mut cur = &key;
    loop {
        if let Some(s) = Schema::ALL.into_iter().find(|&s| matches_bare(cur, s)) {
            return Some(s);
        }
        match cur {
            Formula::ForAll(_, body) => cur = body,
            _ => return None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn schema(s: &str) -> Option<Schema> {
        is_logical_axiom(&parse_formula(s).unwrap())
    }

    #[test]
    fn propositional() {
        assert_eq!(schema("v0 = C0 -> (C1 <= v2 -> v0 = C0)"), Some(Schema::I));
        assert_eq!(schema("forall v3. (v0 = C0 -> (C1 <= v2 -> v0 = C0))"), Some(Schema::I));
        assert_eq!(
            schema("(C0 = C0 -> (C1 = C1 -> C2 = C2)) -> ((C0 = C0 -> C1 = C1) -> (C0 = C0 -> C2 = C2))"),
            Some(Schema::II)
        );
        assert_eq!(schema("(~C1 = C1 -> ~C0 = C0) -> ((~C1 = C1 -> C0 = C0) -> C1 = C1)"), Some(Schema::III));
        assert_eq!(schema("C0 = C0 -> (C1 = C1 -> C1 = C1)"), None);
    }

    #[test]
    fn quantifier_schemas() {
        assert_eq!(schema("(forall v0. v0 <= v1) -> C2 <= v1"), Some(Schema::Inst));
        assert_eq!(schema("(forall v0. C0 = C0) -> C0 = C0"), Some(Schema::Inst));
        // v1 would be captured by the inner quantifier
        assert_eq!(schema("(forall v0. forall v1. v0 <= v1) -> forall v1. v1 <= v1"), None);
        assert_eq!(schema("(forall v0. forall v1. v0 <= v1) -> forall v1. C2 <= v1"), Some(Schema::Inst));
        assert_eq!(
            schema("(forall v0. (v0 = C0 -> v0 <= C0)) -> ((forall v0. v0 = C0) -> forall v0. v0 <= C0)"),
            Some(Schema::Dist)
        );
        assert_eq!(schema("C0 = v1 -> forall v0. C0 = v1"), Some(Schema::Gen));
        assert_eq!(schema("C0 = v0 -> forall v0. C0 = v0"), None);
    }

    #[test]
    fn exists_instances_through_sugar() {
        // forall x. ~phi -> ~phi[t] is the dual of the existential introduction
        assert_eq!(schema("(forall v0. ~v0 = C1) -> ~C1 = C1"), Some(Schema::Inst));
    }
}
