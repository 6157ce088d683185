//! Propositional lemmas, derived once from schemas I-III and modus ponens
//! over placeholder atoms, then spliced into proofs by atom substitution.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use super::builder::ProofBuilder;
use super::{Justification, Schema};
use crate::syntax::{var, Formula};

const PLACEHOLDER_BASE: u32 = u32::MAX - 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Lemma {
    /// `A -> A`
    Id,
    /// `~~A -> A`
    Dne,
    /// `A -> ~~A`
    Dni,
    /// `~A -> (A -> B)`
    Efq,
    /// `(~B -> ~A) -> (A -> B)`
    ContraRev,
    /// `(A -> B) -> (~B -> ~A)`
    Contra,
    /// `A -> ((A -> B) -> B)`
    Apply,
    /// `A -> (~B -> ~(A -> B))`
    ImpNeg,
    /// `(A -> B) -> ((~A -> B) -> B)`
    Cases,
    /// `(A -> B) -> ((B -> C) -> (A -> C))`
    Syllogism,
    /// `(A -> C) -> ((B -> C) -> ((~A -> B) -> C))`
    OrElim,
    /// `A -> (B -> A & B)`
    AndIntro,
    /// `A & B -> A`
    AndLeft,
    /// `A & B -> B`
    AndRight,
}

#[derive(Clone, Copy, Debug)]
enum TJust {
    Logical(Schema),
    Mp(usize, usize),
}

#[derive(Clone, Debug)]
struct Template {
    lines: Vec<(Formula, TJust)>,
}

#[derive(Clone, Debug, Default)]
pub struct LemmaLib {
    templates: HashMap<Lemma, Template>,
}

/// The `k`-th placeholder atom.
pub fn placeholder(k: u32) -> Formula {
    let v = var(PLACEHOLDER_BASE + k);
    Formula::eq(v.clone(), v)
}

fn fill(f: &Formula, args: &[Formula]) -> Formula {
    match f {
        Formula::Atom(_, crate::Term::Var(v), _) if *v >= PLACEHOLDER_BASE => {
            args[(*v - PLACEHOLDER_BASE) as usize].clone()
        }
        Formula::Atom(..) | Formula::Proves(..) => f.clone(),
        Formula::Not(a) => Formula::not(fill(a, args)),
        Formula::Implies(a, b) => Formula::implies(fill(a, args), fill(b, args)),
        Formula::ForAll(v, a) => Formula::forall(*v, fill(a, args)),
        _ => unreachable!("templates are in core syntax"),
    }
}

impl LemmaLib {
    pub fn global() -> Arc<LemmaLib> {
        static CELL: OnceLock<Arc<LemmaLib>> = OnceLock::new();
        CELL.get_or_init(|| Arc::new(derive_all())).clone()
    }

    /// Replay `lemma` into `b` with the placeholders replaced by `args`
    /// (expanded formulas); returns the line of the instantiated lemma.
    pub fn splice(&self, b: &mut ProofBuilder, lemma: Lemma, args: &[Formula]) -> usize {
        let t = self
            .templates
            .get(&lemma)
            .unwrap_or_else(|| panic!("lemma {lemma:?} used before it is derived"));
        let mut map = Vec::with_capacity(t.lines.len());
        for (f, j) in &t.lines {
            let key = fill(f, args);
            let line = match *j {
                TJust::Logical(s) => b.push_raw(key, Justification::Logical(s)),
                TJust::Mp(i, k) => b.push_raw(key, Justification::Mp(map[i], map[k])),
            };
            map.push(line);
        }
        *map.last().unwrap()
    }

    fn record(&mut self, lemma: Lemma, b: &ProofBuilder, line: usize) {
        let proof = b.extract(line);
        let lines = proof
            .into_iter()
            .map(|(f, j)| {
                let j = match j {
                    Justification::Logical(s) => TJust::Logical(s),
                    Justification::Mp(i, k) => TJust::Mp(i, k),
                    Justification::Proper => unreachable!("lemmas use no proper axioms"),
                };
                (f, j)
            })
            .collect();
        self.templates.insert(lemma, Template { lines });
    }
}

fn imp(a: &Formula, b: &Formula) -> Formula {
    Formula::implies(a.clone(), b.clone())
}

fn not(a: &Formula) -> Formula {
    Formula::not(a.clone())
}

fn derive_all() -> LemmaLib {
    let (a, bb, c) = (placeholder(0), placeholder(1), placeholder(2));
    let mut lib = LemmaLib::default();
    let step = |lib: &mut LemmaLib, lemma: Lemma, f: &dyn Fn(&mut ProofBuilder) -> usize| {
        let mut b = ProofBuilder::with_lib(Arc::new(lib.clone()));
        let line = f(&mut b);
        lib.record(lemma, &b, line);
    };

    step(&mut lib, Lemma::Id, &|b| {
        let aa = imp(&a, &a);
        let l1 = b.logical(imp(&a, &imp(&aa, &a))).unwrap();
        let l2 = b
            .logical(imp(&imp(&a, &imp(&aa, &a)), &imp(&imp(&a, &aa), &aa)))
            .unwrap();
        let l3 = b.mp(l1, l2).unwrap();
        let l4 = b.logical(imp(&a, &aa)).unwrap();
        b.mp(l4, l3).unwrap()
    });

    step(&mut lib, Lemma::Dne, &|b| {
        let ctx = [not(&not(&a))];
        let h = b.assume(&ctx, 0);
        let i = b.logical(imp(&ctx[0], &imp(&not(&a), &ctx[0]))).unwrap();
        let na_nna = b.cmp_abs(&ctx, h, i).unwrap();
        let iii = b
            .logical(imp(&imp(&not(&a), &ctx[0]), &imp(&imp(&not(&a), &not(&a)), &a)))
            .unwrap();
        let t = b.cmp_abs(&ctx, na_nna, iii).unwrap();
        let id = b.lemma(Lemma::Id, &[not(&a)]);
        let id = b.lift(&ctx, id);
        b.cmp_ctx(&ctx, id, t).unwrap()
    });

    step(&mut lib, Lemma::Dni, &|b| {
        let nna = not(&not(&a));
        let nnna = not(&nna);
        let dne = b.lemma(Lemma::Dne, &[not(&a)]);
        let iii = b
            .logical(imp(&imp(&nnna, &not(&a)), &imp(&imp(&nnna, &a), &nna)))
            .unwrap();
        let t = b.mp(dne, iii).unwrap();
        let ctx = [a.clone()];
        let h = b.assume(&ctx, 0);
        let i = b.logical(imp(&a, &imp(&nnna, &a))).unwrap();
        let x = b.cmp_abs(&ctx, h, i).unwrap();
        b.cmp_abs(&ctx, x, t).unwrap()
    });

    step(&mut lib, Lemma::Efq, &|b| {
        let ctx = [not(&a), a.clone()];
        let h0 = b.assume(&ctx, 0);
        let h1 = b.assume(&ctx, 1);
        let i0 = b.logical(imp(&not(&a), &imp(&not(&bb), &not(&a)))).unwrap();
        let i1 = b.logical(imp(&a, &imp(&not(&bb), &a))).unwrap();
        let x0 = b.cmp_abs(&ctx, h0, i0).unwrap();
        let x1 = b.cmp_abs(&ctx, h1, i1).unwrap();
        let iii = b
            .logical(imp(&imp(&not(&bb), &not(&a)), &imp(&imp(&not(&bb), &a), &bb)))
            .unwrap();
        let t = b.cmp_abs(&ctx, x0, iii).unwrap();
        b.cmp_ctx(&ctx, x1, t).unwrap()
    });

    step(&mut lib, Lemma::ContraRev, &|b| {
        let ctx = [imp(&not(&bb), &not(&a)), a.clone()];
        let h0 = b.assume(&ctx, 0);
        let h1 = b.assume(&ctx, 1);
        let i1 = b.logical(imp(&a, &imp(&not(&bb), &a))).unwrap();
        let x1 = b.cmp_abs(&ctx, h1, i1).unwrap();
        let iii = b
            .logical(imp(&ctx[0], &imp(&imp(&not(&bb), &a), &bb)))
            .unwrap();
        let t = b.cmp_abs(&ctx, h0, iii).unwrap();
        b.cmp_ctx(&ctx, x1, t).unwrap()
    });

    step(&mut lib, Lemma::Contra, &|b| {
        let ab = imp(&a, &bb);
        let ctx = [ab.clone(), not(&not(&a))];
        let h1 = b.assume(&ctx, 1);
        let dne = b.lemma(Lemma::Dne, &[a.clone()]);
        let xa = b.cmp_abs(&ctx, h1, dne).unwrap();
        let h0 = b.assume(&ctx, 0);
        let xb = b.cmp_ctx(&ctx, xa, h0).unwrap();
        let dni = b.lemma(Lemma::Dni, &[bb.clone()]);
        let nnb = b.cmp_abs(&ctx, xb, dni).unwrap();
        // nnb proves ab -> (~~a -> ~~b)
        let cr = b.lemma(Lemma::ContraRev, &[not(&bb), not(&a)]);
        b.cmp_abs(&ctx[..1], nnb, cr).unwrap()
    });

    step(&mut lib, Lemma::Apply, &|b| {
        let ctx = [a.clone(), imp(&a, &bb)];
        let h0 = b.assume(&ctx, 0);
        let h1 = b.assume(&ctx, 1);
        b.cmp_ctx(&ctx, h0, h1).unwrap()
    });

    step(&mut lib, Lemma::ImpNeg, &|b| {
        let ab = imp(&a, &bb);
        let ctx = [a.clone()];
        let ap = b.lemma(Lemma::Apply, &[a.clone(), bb.clone()]);
        // ap: a -> ((a -> b) -> b)
        let contra = b.lemma(Lemma::Contra, &[ab.clone(), bb.clone()]);
        b.cmp_abs(&ctx, ap, contra).unwrap()
    });

    step(&mut lib, Lemma::Cases, &|b| {
        let ctx = [imp(&a, &bb), imp(&not(&a), &bb)];
        let h0 = b.assume(&ctx, 0);
        let h1 = b.assume(&ctx, 1);
        let c0 = b.lemma(Lemma::Contra, &[a.clone(), bb.clone()]);
        let nc_na = b.cmp_abs(&ctx, h0, c0).unwrap();
        let c1 = b.lemma(Lemma::Contra, &[not(&a), bb.clone()]);
        let nc_nna = b.cmp_abs(&ctx, h1, c1).unwrap();
        let iii = b
            .logical(imp(&imp(&not(&bb), &not(&not(&a))), &imp(&imp(&not(&bb), &not(&a)), &bb)))
            .unwrap();
        let t = b.cmp_abs(&ctx, nc_nna, iii).unwrap();
        b.cmp_ctx(&ctx, nc_na, t).unwrap()
    });

    step(&mut lib, Lemma::Syllogism, &|b| {
        let ctx = [imp(&a, &bb), imp(&bb, &c), a.clone()];
        let h0 = b.assume(&ctx, 0);
        let h1 = b.assume(&ctx, 1);
        let h2 = b.assume(&ctx, 2);
        let xb = b.cmp_ctx(&ctx, h2, h0).unwrap();
        b.cmp_ctx(&ctx, xb, h1).unwrap()
    });

    step(&mut lib, Lemma::OrElim, &|b| {
        let ctx = [imp(&a, &c), imp(&bb, &c), imp(&not(&a), &bb)];
        let syl = b.lemma(Lemma::Syllogism, &[not(&a), bb.clone(), c.clone()]);
        let h2 = b.assume(&ctx, 2);
        let h1 = b.assume(&ctx, 1);
        let t = b.cmp_abs(&ctx, h2, syl).unwrap();
        let na_c = b.cmp_ctx(&ctx, h1, t).unwrap();
        let cases = b.lemma(Lemma::Cases, &[a.clone(), c.clone()]);
        let h0 = b.assume(&ctx, 0);
        let t2 = b.cmp_abs(&ctx, h0, cases).unwrap();
        b.cmp_ctx(&ctx, na_c, t2).unwrap()
    });

    step(&mut lib, Lemma::AndIntro, &|b| {
        let ctx = [a.clone(), bb.clone()];
        let h0 = b.assume(&ctx, 0);
        let h1 = b.assume(&ctx, 1);
        let dni = b.lemma(Lemma::Dni, &[bb.clone()]);
        let nnb = b.cmp_abs(&ctx, h1, dni).unwrap();
        let ineg = b.lemma(Lemma::ImpNeg, &[a.clone(), not(&bb)]);
        let t = b.cmp_abs(&ctx, h0, ineg).unwrap();
        b.cmp_ctx(&ctx, nnb, t).unwrap()
    });

    step(&mut lib, Lemma::AndLeft, &|b| {
        let conj = not(&imp(&a, &not(&bb)));
        let ctx = [conj];
        let efq = b.lemma(Lemma::Efq, &[a.clone(), not(&bb)]);
        let contra = b.lemma(Lemma::Contra, &[not(&a), imp(&a, &not(&bb))]);
        let t = b.mp(efq, contra).unwrap();
        let h = b.assume(&ctx, 0);
        let nna = b.cmp_abs(&ctx, h, t).unwrap();
        let dne = b.lemma(Lemma::Dne, &[a.clone()]);
        b.cmp_abs(&ctx, nna, dne).unwrap()
    });

    step(&mut lib, Lemma::AndRight, &|b| {
        let conj = not(&imp(&a, &not(&bb)));
        let ctx = [conj];
        let i = b.logical(imp(&not(&bb), &imp(&a, &not(&bb)))).unwrap();
        let contra = b.lemma(Lemma::Contra, &[not(&bb), imp(&a, &not(&bb))]);
        let t = b.mp(i, contra).unwrap();
        let h = b.assume(&ctx, 0);
        let nnb = b.cmp_abs(&ctx, h, t).unwrap();
        let dne = b.lemma(Lemma::Dne, &[bb.clone()]);
        b.cmp_abs(&ctx, nnb, dne).unwrap()
    });

    lib
}
