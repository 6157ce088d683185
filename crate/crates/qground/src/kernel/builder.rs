//! Incremental proof construction.
//!
//! Lines are stored once per expanded formula, so re-deriving a fact is free.
//! A line "under context `[H1, .., Hn]`" is simply the absolute line
//! `H1 -> (.. -> (Hn -> L))`; the context operations move facts in and out
//! of that shape using schemas I and II.

use std::collections::HashMap;
use std::sync::Arc;

use super::lemmas::{Lemma, LemmaLib};
use super::{is_logical_axiom, Justification, Proof, Step};
use crate::syntax::{Formula, SyntaxError, Term};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BuildError {
    #[error("not a logical axiom: {0}")]
    NotLogical(Formula),
    #[error("modus ponens does not apply to {0} and {1}")]
    MpMismatch(Formula, Formula),
    #[error("instantiation: {0}")]
    Capture(#[from] SyntaxError),
    #[error("line is not universally quantified: {0}")]
    NotUniversal(Formula),
    #[error("cannot generalize v{var}: it is free in the proper axiom {axiom}")]
    OpenAxiom { var: u32, axiom: Formula },
}

pub struct ProofBuilder {
    keys: Vec<Formula>,
    shown: Vec<Option<Formula>>,
    justs: Vec<Justification>,
    index: HashMap<Formula, usize>,
    gen_memo: HashMap<(usize, u32), usize>,
    lib: Arc<LemmaLib>,
}

impl Default for ProofBuilder {
    fn default() -> Self {
        ProofBuilder::new()
    }
}

fn imp(a: &Formula, b: &Formula) -> Formula {
    Formula::implies(a.clone(), b.clone())
}

/// `H1 -> (.. -> (Hn -> f))`
pub fn wrap(ctx: &[Formula], f: Formula) -> Formula {
    ctx.iter().rev().fold(f, |acc, h| Formula::implies(h.clone(), acc))
}

fn strip(f: &Formula, n: usize) -> Option<&Formula> {
    let mut cur = f;
    for _ in 0..n {
        match cur {
            Formula::Implies(_, b) => cur = b,
            _ => return None,
        }
    }
    Some(cur)
}

fn split_imp(f: &Formula) -> Option<(&Formula, &Formula)> {
    match f {
        Formula::Implies(a, b) => Some((a, b)),
        _ => None,
    }
}

impl ProofBuilder {
    pub fn new() -> ProofBuilder {
        ProofBuilder::with_lib(LemmaLib::global())
    }

    pub(crate) fn with_lib(lib: Arc<LemmaLib>) -> ProofBuilder {
        ProofBuilder {
            keys: Vec::new(),
            shown: Vec::new(),
            justs: Vec::new(),
            index: HashMap::new(),
            gen_memo: HashMap::new(),
            lib,
        }
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    /// The expanded formula proved by `line`.
    pub fn key(&self, line: usize) -> &Formula {
        &self.keys[line]
    }

    pub fn find(&self, f: &Formula) -> Option<usize> {
        self.index.get(&f.desugar()).copied()
    }

    /// Append an expanded formula with a justification the caller vouches for.
    pub(crate) fn push_raw(&mut self, key: Formula, j: Justification) -> usize {
        if let Some(&i) = self.index.get(&key) {
            return i;
        }
        let i = self.keys.len();
        self.index.insert(key.clone(), i);
        self.keys.push(key);
        self.shown.push(None);
        self.justs.push(j);
        i
    }

    /// Cite a proper axiom, keeping its surface form for the recognizer.
    pub fn proper(&mut self, f: &Formula) -> usize {
        let key = f.desugar();
        if let Some(&i) = self.index.get(&key) {
            return i;
        }
        let i = self.push_raw(key, Justification::Proper);
        self.shown[i] = Some(f.clone());
        i
    }

    pub fn logical(&mut self, f: Formula) -> Result<usize, BuildError> {
        let key = f.desugar();
        if let Some(&i) = self.index.get(&key) {
            return Ok(i);
        }
        match is_logical_axiom(&key) {
            Some(s) => Ok(self.push_raw(key, Justification::Logical(s))),
            None => Err(BuildError::NotLogical(f)),
        }
    }

    /// From `a` and `ab = a -> b`, conclude `b`.
    pub fn mp(&mut self, a: usize, ab: usize) -> Result<usize, BuildError> {
        match &self.keys[ab] {
            Formula::Implies(x, y) if **x == self.keys[a] => {
                let y = (**y).clone();
                Ok(self.push_raw(y, Justification::Mp(a, ab)))
            }
            other => Err(BuildError::MpMismatch(self.keys[a].clone(), other.clone())),
        }
    }

    /// From `forall x. phi`, conclude `phi[x := t]`.
    pub fn inst(&mut self, line: usize, t: &Term) -> Result<usize, BuildError> {
        let Formula::ForAll(x, phi) = &self.keys[line] else {
            return Err(BuildError::NotUniversal(self.keys[line].clone()));
        };
        let psi = phi.substitute(*x, t)?;
        let ax = self.logical(imp(&self.keys[line].clone(), &psi))?;
        self.mp(line, ax)
    }

    pub fn inst_all(&mut self, line: usize, ts: &[Term]) -> Result<usize, BuildError> {
        ts.iter().try_fold(line, |l, t| self.inst(l, t))
    }

    /// From a line proving `phi`, conclude `forall v. phi` by rewriting the
    /// derivation of `phi` with schemas 3 and 4 and the closure rule.
    pub fn gen(&mut self, line: usize, v: u32) -> Result<usize, BuildError> {
        let mut stack = vec![line];
        while let Some(&l) = stack.last() {
            if self.gen_memo.contains_key(&(l, v)) {
                stack.pop();
                continue;
            }
            let key = self.keys[l].clone();
            let done = if !key.is_free(v) {
                let all = Formula::forall(v, key.clone());
                let ax = self.logical(imp(&key, &all))?;
                Some(self.mp(l, ax)?)
            } else {
                match self.justs[l] {
                    Justification::Logical(s) => {
                        Some(self.push_raw(Formula::forall(v, key), Justification::Logical(s)))
                    }
                    Justification::Proper => {
                        let axiom = self.shown[l].clone().unwrap_or(key);
                        return Err(BuildError::OpenAxiom { var: v, axiom });
                    }
                    Justification::Mp(i, j) => {
                        match (self.gen_memo.get(&(i, v)).copied(), self.gen_memo.get(&(j, v)).copied()) {
                            (Some(gi), Some(gj)) => {
                                let a = self.keys[i].clone();
                                let ax = imp(
                                    &Formula::forall(v, imp(&a, &key)),
                                    &imp(&Formula::forall(v, a), &Formula::forall(v, key)),
                                );
                                let ax = self.logical(ax)?;
                                let t = self.mp(gj, ax)?;
                                Some(self.mp(gi, t)?)
                            }
                            (gi, gj) => {
                                if gi.is_none() {
                                    stack.push(i);
                                }
                                if gj.is_none() {
                                    stack.push(j);
                                }
                                None
                            }
                        }
                    }
                }
            };
            if let Some(r) = done {
                self.gen_memo.insert((l, v), r);
                stack.pop();
            }
        }
        Ok(self.gen_memo[&(line, v)])
    }

    pub fn lemma(&mut self, lemma: Lemma, args: &[Formula]) -> usize {
        let args: Vec<Formula> = args.iter().map(Formula::desugar).collect();
        let lib = self.lib.clone();
        lib.splice(self, lemma, &args)
    }

    /// Move an absolute line under `ctx`.
    pub fn lift(&mut self, ctx: &[Formula], line: usize) -> usize {
        let mut cur = line;
        for h in ctx.iter().rev() {
            let x = self.keys[cur].clone();
            let ax = self
                .logical(imp(&x, &imp(h, &x)))
                .expect("schema I instance");
            cur = self.mp(cur, ax).expect("schema I shape");
        }
        cur
    }

    /// Modus ponens under a context: from `ctx |- A` and `ctx |- A -> B`,
    /// conclude `ctx |- B`.
    pub fn cmp_ctx(&mut self, ctx: &[Formula], a: usize, ab: usize) -> Result<usize, BuildError> {
        let Some((h, outer)) = ctx.split_last() else {
            return self.mp(a, ab);
        };
        let n = outer.len();
        let mismatch = || BuildError::MpMismatch(self.keys[a].clone(), self.keys[ab].clone());
        let ha = strip(&self.keys[a], n).and_then(split_imp).ok_or_else(mismatch)?;
        let hab = strip(&self.keys[ab], n).and_then(split_imp).ok_or_else(mismatch)?;
        let (x, y) = split_imp(hab.1).ok_or_else(mismatch)?;
        if ha.0 != h || hab.0 != h || x != ha.1 {
            return Err(mismatch());
        }
        let ax = imp(
            &imp(h, &imp(x, y)),
            &imp(&imp(h, x), &imp(h, y)),
        );
        let ax = self.logical(ax)?;
        let l = self.lift(outer, ax);
        let t = self.cmp_ctx(outer, ab, l)?;
        self.cmp_ctx(outer, a, t)
    }

    /// From `ctx |- A` and an absolute `A -> B`, conclude `ctx |- B`.
    pub fn cmp_abs(&mut self, ctx: &[Formula], a: usize, thm: usize) -> Result<usize, BuildError> {
        let l = self.lift(ctx, thm);
        self.cmp_ctx(ctx, a, l)
    }

    /// Chain an absolute theorem `A1 -> (.. -> B)` over premises proved
    /// under `ctx`.
    pub fn chain(&mut self, ctx: &[Formula], thm: usize, premises: &[usize]) -> Result<usize, BuildError> {
        let mut cur = self.lift(ctx, thm);
        for &p in premises {
            cur = self.cmp_ctx(ctx, p, cur)?;
        }
        Ok(cur)
    }

    /// From `ctx[..from] |- X`, conclude `ctx |- X`.
    pub fn weaken(&mut self, ctx: &[Formula], from: usize, line: usize) -> usize {
        let x = strip(&self.keys[line], from).expect("line under context").clone();
        let mut cur = line;
        for j in from..ctx.len() {
            let ax = self
                .logical(imp(&x, &imp(&ctx[j], &x)))
                .expect("schema I instance");
            let l = self.lift(&ctx[..j], ax);
            cur = self.cmp_ctx(&ctx[..j], cur, l).expect("weakening shape");
        }
        cur
    }

    /// `ctx |- ctx[k]`
    pub fn assume(&mut self, ctx: &[Formula], k: usize) -> usize {
        let id = self.lemma(Lemma::Id, &ctx[k..=k]);
        let base = self.lift(&ctx[..k], id);
        self.weaken(ctx, k + 1, base)
    }

    /// The lines `line` depends on, renumbered in order.
    pub(crate) fn extract(&self, line: usize) -> Vec<(Formula, Justification)> {
        let order = self.reachable(line);
        let mut renumber = HashMap::with_capacity(order.len());
        for (n, &l) in order.iter().enumerate() {
            renumber.insert(l, n);
        }
        order
            .iter()
            .map(|&l| {
                let j = match self.justs[l] {
                    Justification::Mp(i, k) => Justification::Mp(renumber[&i], renumber[&k]),
                    j => j,
                };
                (self.shown[l].clone().unwrap_or_else(|| self.keys[l].clone()), j)
            })
            .collect()
    }

    fn reachable(&self, line: usize) -> Vec<usize> {
        let mut mark = vec![false; line + 1];
        let mut stack = vec![line];
        while let Some(l) = stack.pop() {
            if mark[l] {
                continue;
            }
            mark[l] = true;
            if let Justification::Mp(i, k) = self.justs[l] {
                stack.push(i);
                stack.push(k);
            }
        }
        (0..=line).filter(|&l| mark[l]).collect()
    }

    /// A proof of `line` containing only the steps it depends on.
    pub fn finish(&self, line: usize) -> Proof {
        Proof {
            steps: self
                .extract(line)
                .into_iter()
                .map(|(formula, justification)| Step { formula, justification })
                .collect(),
        }
    }

    /// Like [`finish`](Self::finish), but the last step shows `display`,
    /// which must expand to the same formula.
    pub fn finish_as(&self, line: usize, display: &Formula) -> Proof {
        let mut p = self.finish(line);
        assert_eq!(display.desugar(), self.keys[line], "display must expand to the proved formula");
        let last = p.steps.last_mut().unwrap();
        if last.justification == Justification::Proper {
            if &last.formula != display {
                // a proper step must keep its own bytes; restate it through Id
                let n = p.steps.len() - 1;
                let id = imp(&self.keys[line], &self.keys[line]);
                let mut b = ProofBuilder::new();
                let idl = b.lemma(Lemma::Id, &[self.keys[line].clone()]);
                let offset = p.steps.len();
                for (f, j) in b.extract(idl) {
                    let j = match j {
                        Justification::Mp(i, k) => Justification::Mp(i + offset, k + offset),
                        j => j,
                    };
                    p.steps.push(Step { formula: f, justification: j });
                }
                debug_assert_eq!(p.steps.last().unwrap().formula, id);
                let idx = p.steps.len() - 1;
                p.steps.push(Step {
                    formula: display.clone(),
                    justification: Justification::Mp(n, idx),
                });
            }
        } else {
            last.formula = display.clone();
        }
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{check_proof, AxiomSet};
    use crate::syntax::{c1, parse_formula, var};

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn dedup_and_pruning() {
        let mut b = ProofBuilder::new();
        let a = b.proper(&f("C0 = C0"));
        assert_eq!(b.proper(&f("C0 = C0")), a);
        let _unused = b.proper(&f("C1 = C1"));
        let p = b.finish(a);
        assert_eq!(p.len(), 1);
    }

    #[test]
    fn instantiate_and_generalize() {
        let ax = f("forall v0. forall v1. v0 <= v1 -> v0 <= v1");
        let alpha = AxiomSet::new("t", vec![ax.clone()]);
        let mut b = ProofBuilder::new();
        let l = b.proper(&ax);
        let l = b.inst(l, &var(5)).unwrap();
        let l = b.inst(l, &c1()).unwrap();
        let g = b.gen(l, 5).unwrap();
        assert_eq!(b.key(g), &f("forall v5. v5 <= C1 -> v5 <= C1"));
        assert!(check_proof(&b.finish(g), &alpha).is_valid());
    }

    #[test]
    fn open_proper_axiom_blocks_generalization() {
        let mut b = ProofBuilder::new();
        let l = b.proper(&f("v0 = v0"));
        assert!(matches!(b.gen(l, 0), Err(BuildError::OpenAxiom { .. })));
    }

    #[test]
    fn context_machinery() {
        let (a, bb) = (f("C0 = C0"), f("C1 = C1"));
        let alpha = AxiomSet::new("t", vec![]);
        let ctx = [a.clone(), imp(&a, &bb)];
        let mut b = ProofBuilder::new();
        let h0 = b.assume(&ctx, 0);
        let h1 = b.assume(&ctx, 1);
        let r = b.cmp_ctx(&ctx, h0, h1).unwrap();
        assert_eq!(b.key(r), &wrap(&ctx, bb));
        assert!(check_proof(&b.finish(r), &alpha).is_valid());
    }

    #[test]
    fn finish_as_keeps_proper_bytes() {
        let ax = f("C0 = C0 & C1 = C1");
        let alpha = AxiomSet::new("t", vec![ax.clone()]);
        let mut b = ProofBuilder::new();
        let l = b.proper(&ax);
        let p = b.finish_as(l, &f("~(C0 = C0 -> ~C1 = C1)"));
        assert!(check_proof(&p, &alpha).is_valid());
        assert_eq!(p.theorem().unwrap(), &f("~(C0 = C0 -> ~C1 = C1)"));
    }
}
