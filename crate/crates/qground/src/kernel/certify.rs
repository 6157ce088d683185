//! Proofs of true bounded sentences from group 0 and S*, built by
//! following the evaluation of each subformula.
//!
//! Without `theta` every closed term takes a value in {0, 1, 2}, so each
//! ground atom reduces to a fixed table of facts about the constants, and
//! each bounded quantifier to at most three instances.

use std::collections::HashMap;

use super::builder::{BuildError, ProofBuilder};
use super::lemmas::Lemma;
use super::Proof;
use crate::axioms::{group0, named};
use crate::classes::{classify, FormulaClass};
use crate::semantics::{eval_formula, eval_theta_free, ThetaInterpretation};
use crate::syntax::{Const, Formula, Func, Rel, Term};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CertifyError {
    #[error("false sentence")]
    False,
    #[error("not provable in fragment: {0}")]
    Fragment(String),
    #[error("formula must be a sentence")]
    NotSentence,
    #[error("expected a Delta0 sentence, got class {0}")]
    NotDelta0(FormulaClass),
    #[error("evaluation failed: {0}")]
    Eval(String),
    #[error("internal construction error: {0}")]
    Build(#[from] BuildError),
}

type R<T> = Result<T, CertifyError>;

fn fragment<T>(msg: impl Into<String>) -> R<T> {
    Err(CertifyError::Fragment(msg.into()))
}

fn k(v: u64) -> Term {
    Term::Const(Const::from_value(v).expect("constant value"))
}

fn imp(a: &Formula, b: &Formula) -> Formula {
    Formula::implies(a.clone(), b.clone())
}

fn not(a: &Formula) -> Formula {
    Formula::not(a.clone())
}

fn eq(a: &Term, b: &Term) -> Formula {
    Formula::eq(a.clone(), b.clone())
}

fn strip(f: &Formula, n: usize) -> &Formula {
    let mut cur = f;
    for _ in 0..n {
        let Formula::Implies(_, b) = cur else { panic!("line is not under a context of depth {n}") };
        cur = b;
    }
    cur
}

fn eq_sides(f: &Formula) -> (Term, Term) {
    match f {
        Formula::Atom(Rel::Eq, a, b) => (a.clone(), b.clone()),
        other => panic!("expected an equation, got {other}"),
    }
}

fn imp_sides(f: &Formula) -> (Formula, Formula) {
    match f {
        Formula::Implies(a, b) => ((**a).clone(), (**b).clone()),
        other => panic!("expected an implication, got {other}"),
    }
}

/// `~(A -> ~B)` gives `(A, B)`.
fn conj_sides(f: &Formula) -> (Formula, Formula) {
    match f {
        Formula::Not(inner) => match inner.as_ref() {
            Formula::Implies(a, nb) => match nb.as_ref() {
                Formula::Not(b) => ((**a).clone(), (**b).clone()),
                _ => panic!("not a conjunction: {f}"),
            },
            _ => panic!("not a conjunction: {f}"),
        },
        _ => panic!("not a conjunction: {f}"),
    }
}

/// `forall v. v <= t -> body` or `forall v. ~~(v <= t -> body)`, the
/// expanded shapes of bounded quantifiers.
fn bounded(v: u32, body: &Formula) -> Option<&Term> {
    let inner = match body {
        Formula::Not(x) => match x.as_ref() {
            Formula::Not(y) => y.as_ref(),
            _ => return None,
        },
        other => other,
    };
    match inner {
        Formula::Implies(g, _) => match g.as_ref() {
            Formula::Atom(Rel::Leq, Term::Var(w), t) if *w == v && !t.contains_var(v) => Some(t),
            _ => None,
        },
        _ => None,
    }
}

fn cong_name(f: Func) -> Option<&'static str> {
    Some(match f {
        Func::Sub => "sub",
        Func::Div => "div",
        Func::Max => "max",
        Func::Root => "root",
        Func::Count => "count",
        Func::Log | Func::Theta => return None,
    })
}

struct Certifier {
    b: ProofBuilder,
    cited: HashMap<Formula, Formula>,
    evals: HashMap<Term, (u64, usize)>,
    facts: HashMap<(Func, Vec<u64>), usize>,
    leib: HashMap<(Term, Term, u32, Formula), usize>,
}

impl Certifier {
    fn new(cite: &[Formula]) -> Certifier {
        Certifier {
            b: ProofBuilder::new(),
            cited: cite.iter().map(|f| (f.desugar(), f.clone())).collect(),
            evals: HashMap::new(),
            facts: HashMap::new(),
            leib: HashMap::new(),
        }
    }

    // ---- plumbing -------------------------------------------------------

    fn ax(&mut self, name: &str, ts: &[Term]) -> R<usize> {
        let l = self.b.proper(named(name));
        Ok(self.b.inst_all(l, ts)?)
    }

    /// Instantiate an axiom and discharge its premises in order.
    fn use_ax(&mut self, name: &str, ts: &[Term], premises: &[usize]) -> R<usize> {
        let mut l = self.ax(name, ts)?;
        for &p in premises {
            l = self.b.mp(p, l)?;
        }
        Ok(l)
    }

    fn lemma(&mut self, l: Lemma, args: &[Formula], premises: &[usize]) -> R<usize> {
        let mut line = self.b.lemma(l, args);
        for &p in premises {
            line = self.b.mp(p, line)?;
        }
        Ok(line)
    }

    fn key(&self, l: usize) -> Formula {
        self.b.key(l).clone()
    }

    /// `A -> B`, `B -> C` give `A -> C`.
    fn syllogism(&mut self, ab: usize, bc: usize) -> R<usize> {
        let (a, bb) = imp_sides(&self.key(ab));
        let (_, c) = imp_sides(&self.key(bc));
        self.lemma(Lemma::Syllogism, &[a, bb, c], &[ab, bc])
    }

    /// `X -> Y` and `~Y` give `~X`.
    fn refute_via(&mut self, xy: usize, not_y: usize) -> R<usize> {
        let (x, y) = imp_sides(&self.key(xy));
        self.lemma(Lemma::Contra, &[x, y], &[xy, not_y])
    }

    fn ctx_sym(&mut self, ctx: &[Formula], l: usize) -> R<usize> {
        let (x, y) = eq_sides(strip(&self.key(l), ctx.len()));
        let s = self.ax("eq_sym", &[x, y])?;
        Ok(self.b.chain(ctx, s, &[l])?)
    }

    fn ctx_trans(&mut self, ctx: &[Formula], l1: usize, l2: usize) -> R<usize> {
        let (x, y) = eq_sides(strip(&self.key(l1), ctx.len()));
        let (_, z) = eq_sides(strip(&self.key(l2), ctx.len()));
        let t = self.ax("eq_trans", &[x, y, z])?;
        Ok(self.b.chain(ctx, t, &[l1, l2])?)
    }

    fn sym(&mut self, l: usize) -> R<usize> {
        self.ctx_sym(&[], l)
    }

    fn trans(&mut self, l1: usize, l2: usize) -> R<usize> {
        self.ctx_trans(&[], l1, l2)
    }

    fn refl(&mut self, t: &Term) -> R<usize> {
        self.ax("eq_refl", std::slice::from_ref(t))
    }

    /// Conjunct `i` of the start axiom.
    fn start(&mut self, i: usize) -> R<usize> {
        let start = &group0()[0].1;
        let mut cur = self.b.proper(start);
        for _ in 0..i {
            let (a, rest) = conj_sides(&self.key(cur));
            cur = self.lemma(Lemma::AndRight, &[a, rest], &[cur])?;
        }
        if i < 4 {
            let (a, rest) = conj_sides(&self.key(cur));
            cur = self.lemma(Lemma::AndLeft, &[a, rest], &[cur])?;
        }
        Ok(cur)
    }

    // ---- facts about the constants --------------------------------------

    /// `t <= t`
    fn refl_le(&mut self, t: &Term) -> R<usize> {
        let a = Formula::leq(t.clone(), t.clone());
        let tot = self.ax("le_total", &[t.clone(), t.clone()])?;
        let id = self.b.lemma(Lemma::Id, std::slice::from_ref(&a));
        self.lemma(Lemma::Cases, &[a.clone(), a], &[id, tot])
    }

    /// `~(Ca = Cb)` for `a != b`.
    fn neq(&mut self, a: u64, b: u64) -> R<usize> {
        if a < b {
            let base = self.neq(b, a)?;
            let s = self.ax("eq_sym", &[k(a), k(b)])?;
            return self.refute_via(s, base);
        }
        if (a, b) == (1, 0) {
            return self.start(1);
        }
        // Ca = Cb would give Ca - C1 = Cb - C1, which comes down to C1 = C0.
        let h = eq(&k(a), &k(b));
        let ctx = [h];
        let hyp = self.b.assume(&ctx, 0);
        let cong = self.ax("cong_sub_l", &[k(a), k(b), k(1)])?;
        let preds = self.b.cmp_abs(&ctx, hyp, cong)?;
        let pa = self.fact(Func::Sub, &[a, 1])?;
        let pa = self.sym(pa)?;
        let pa = self.b.lift(&ctx, pa);
        let pb = self.fact(Func::Sub, &[b, 1])?;
        let pb = self.b.lift(&ctx, pb);
        let x = self.ctx_trans(&ctx, pa, preds)?;
        let x = self.ctx_trans(&ctx, x, pb)?;
        // x: (Ca = Cb) -> (C(a-1) = C(b-1)) with a-1 = 1, b-1 = 0
        let ne = self.neq(a - 1, b.saturating_sub(1))?;
        self.refute_via(x, ne)
    }

    /// `Ca <= Cb` for `a <= b`.
    fn le(&mut self, a: u64, b: u64) -> R<usize> {
        match (a, b) {
            (0, _) => self.ax("le_zero", &[k(b)]),
            _ if a == b => self.refl_le(&k(a)),
            _ => {
                // between at C2: C2 <= C0 | C1 <= C2, and C2 <= C0 is refuted.
                let between = self.start(4)?;
                let between = self.b.inst(between, &k(2))?;
                let f = self.key(between);
                // ~~(~(C2 <= C0) -> ~~(C1 <= C2))
                let inner = f.not_inner().not_inner();
                let dne = self.lemma(Lemma::Dne, &[inner], &[between])?;
                let n20 = self.nle(2, 0)?;
                let nn = self.b.mp(n20, dne)?;
                let target = Formula::leq(k(1), k(2));
                self.lemma(Lemma::Dne, &[target], &[nn])
            }
        }
    }

    /// `~(Ca <= Cb)` for `a > b`.
    fn nle(&mut self, a: u64, b: u64) -> R<usize> {
        let hyp = Formula::leq(k(a), k(b));
        let ctx = [hyp];
        let h = self.b.assume(&ctx, 0);
        let (other, ne) = if b == 0 {
            (self.ax("le_zero", &[k(a)])?, self.neq(a, 0)?)
        } else {
            (self.le(b, a)?, self.neq(a, b)?)
        };
        let anti = self.ax("le_antisym", &[k(a), k(b)])?;
        let other = self.b.lift(&ctx, other);
        let x = self.b.chain(&ctx, anti, &[h, other])?;
        self.refute_via(x, ne)
    }

    /// From `~(D = C0)` and `D - C1 = X` with `X` worth `want - 1`,
    /// conclude `D = C(want)`.
    fn via_pred(&mut self, d: &Term, nz: usize, pl: usize, want: u64) -> R<usize> {
        let (_, x) = eq_sides(&self.key(pl));
        let (xv, xl) = self.eval_eq(&x)?;
        debug_assert_eq!(xv + 1, want);
        let dp = self.trans(pl, xl)?;
        let kp = self.fact(Func::Sub, &[want, 1])?;
        let kp = self.sym(kp)?;
        let same = self.trans(dp, kp)?;
        let knz = self.neq(want, 0)?;
        self.use_ax("pred_inj", &[d.clone(), k(want)], &[nz, knz, same])
    }

    /// The two conjuncts of an axiom instance `A & B`.
    fn split(&mut self, l: usize) -> R<(usize, usize)> {
        let (a, bb) = conj_sides(&self.key(l));
        let left = self.lemma(Lemma::AndLeft, &[a.clone(), bb.clone()], &[l])?;
        let right = self.lemma(Lemma::AndRight, &[a, bb], &[l])?;
        Ok((left, right))
    }

    /// `f(Ca, ..) = Cv` where `v` is the value of the application.
    fn fact(&mut self, f: Func, args: &[u64]) -> R<usize> {
        if let Some(&l) = self.facts.get(&(f, args.to_vec())) {
            return Ok(l);
        }
        let l = self.fact_uncached(f, args)?;
        self.facts.insert((f, args.to_vec()), l);
        Ok(l)
    }

    fn fact_uncached(&mut self, f: Func, args: &[u64]) -> R<usize> {
        let a = args[0];
        let b = args.get(1).copied().unwrap_or(0);
        let (ca, cb) = (k(a), k(b));
        match f {
            Func::Sub => match (a, b) {
                (_, 0) => self.ax("sub_zero", &[ca]),
                (0, _) => self.ax("zero_sub", &[cb]),
                (1, 1) => self.start(2),
                (2, 1) => self.start(3),
                _ => {
                    let le = self.le(a, b)?;
                    self.use_ax("le_sub", &[ca, cb], &[le])
                }
            },
            Func::Div => {
                if b == 0 {
                    return self.ax("div_zero", &[ca]);
                }
                let nz = self.neq(b, 0)?;
                if a < b {
                    let nle = self.nle(b, a)?;
                    return self.use_ax("div_small", &[ca, cb], &[nz, nle]);
                }
                let le = self.le(b, a)?;
                let step = self.use_ax("div_step", &[ca.clone(), cb.clone()], &[nz, le])?;
                let (dnz, dp) = self.split(step)?;
                self.via_pred(&Term::div(ca, cb), dnz, dp, a / b)
            }
            Func::Max => {
                if a <= b {
                    let le = self.le(a, b)?;
                    self.use_ax("max_right", &[ca, cb], &[le])
                } else {
                    let nle = self.nle(a, b)?;
                    self.use_ax("max_left", &[ca, cb], &[nle])
                }
            }
            Func::Log => match a {
                0 => self.ax("log_zero", &[]),
                1 => self.ax("log_one", &[]),
                _ => {
                    let le = self.refl_le(&ca)?;
                    let step = self.use_ax("log_step", &[ca.clone()], &[le])?;
                    let (nz, lp) = self.split(step)?;
                    self.via_pred(&Term::log(ca), nz, lp, 1)
                }
            },
            Func::Root => match b {
                0 => self.ax("root_zero", &[ca]),
                1 => self.ax("root_one", &[ca]),
                _ => {
                    let r = Term::root(ca.clone(), cb.clone());
                    let le12 = self.le(1, 2)?;
                    let (upper, lower) = match a {
                        0 => {
                            let up = self.use_ax("root_le", &[ca.clone(), cb.clone()], &[le12])?;
                            (up, self.ax("le_zero", std::slice::from_ref(&r))?)
                        }
                        1 => {
                            let up = self.use_ax("root_le", &[ca.clone(), cb.clone()], &[le12])?;
                            let one = self.refl_le(&ca)?;
                            let low = self.use_ax("root_pos", &[ca.clone(), cb.clone()], &[one, le12])?;
                            (up, low)
                        }
                        _ => {
                            let two = self.refl_le(&ca)?;
                            let half = self.use_ax("root_half", &[ca.clone(), cb.clone()], &[two, two])?;
                            let d = Term::div(ca.clone(), k(2));
                            let dv = self.fact(Func::Div, &[2, 2])?;
                            let up = self.use_ax("cong_le_r", &[d, k(1), r.clone()], &[dv, half])?;
                            let low = self.use_ax("root_pos", &[ca.clone(), cb.clone()], &[le12, le12])?;
                            (up, low)
                        }
                    };
                    let v = if a == 0 { 0 } else { 1 };
                    self.use_ax("le_antisym", &[r, k(v)], &[upper, lower])
                }
            },
            Func::Count => {
                if b == 0 {
                    return self.ax("count_zero", &[ca]);
                }
                let cnt = Term::count(ca.clone(), cb.clone());
                let pos = self.le(1, b)?;
                let step = self.use_ax("count_step", &[ca, cb], &[pos])?;
                let (bit_le, rest) = self.split(step)?;
                let (lhs, rhs) = eq_sides(&self.key(rest));
                let Term::App(Func::Sub, parts) = &lhs else { unreachable!() };
                let bit = parts[1].clone();
                let (bv, bl) = self.eval_eq(&bit)?;
                let (rv, rl) = self.eval_eq(&rhs)?;
                let _ = rv;
                let cong = self.use_ax("cong_sub_r", &[bit.clone(), k(bv), cnt.clone()], &[bl])?;
                let back = self.sym(cong)?;
                let x = self.trans(back, rest)?;
                let x = self.trans(x, rl)?; // cnt - C(bv) = C(rv)
                if bv == 0 {
                    let z = self.ax("sub_zero", std::slice::from_ref(&cnt))?;
                    let z = self.sym(z)?;
                    self.trans(z, x)
                } else {
                    let one_le = self.use_ax("cong_le_l", &[bit, k(1), cnt.clone()], &[bl, bit_le])?;
                    let ctx = [eq(&cnt, &k(0))];
                    let h = self.b.assume(&ctx, 0);
                    let cg = self.ax("cong_le_r", &[cnt.clone(), k(0), k(1)])?;
                    let one_le = self.b.lift(&ctx, one_le);
                    let y = self.b.chain(&ctx, cg, &[h, one_le])?;
                    let n10 = self.nle(1, 0)?;
                    let nz = self.refute_via(y, n10)?;
                    let (_, pv) = eq_sides(&self.key(x));
                    let pv = eval_theta_free(&pv).map_err(|e| CertifyError::Eval(e.to_string()))?;
                    let want = pv.to_u64().expect("small") + 1;
                    self.via_pred(&cnt, nz, x, want)
                }
            }
            Func::Theta => fragment("theta"),
        }
    }

    // ---- terms ------------------------------------------------------------

    /// `t = Cv` with `v` the value of the closed term `t`.
    fn eval_eq(&mut self, t: &Term) -> R<(u64, usize)> {
        if let Some(&r) = self.evals.get(t) {
            return Ok(r);
        }
        let r = match t {
            Term::Const(c) => (c.value(), self.refl(t)?),
            Term::Var(v) => return fragment(format!("free variable v{v}")),
            Term::Dag(_) => return fragment("shared-node numeral"),
            Term::App(Func::Theta, _) => return fragment("theta term"),
            Term::App(f, args) => {
                let mut vals = Vec::with_capacity(args.len());
                let mut lines = Vec::with_capacity(args.len());
                for a in args {
                    let (v, l) = self.eval_eq(a)?;
                    vals.push(v);
                    lines.push(l);
                }
                let consts: Vec<Term> = vals.iter().map(|&v| k(v)).collect();
                let fact = self.fact(*f, &vals)?;
                let mut chain: Vec<usize> = Vec::new();
                if *f == Func::Log {
                    if !matches!(args[0], Term::Const(_)) {
                        chain.push(self.use_ax("cong_log", &[args[0].clone(), consts[0].clone()], &[lines[0]])?);
                    }
                } else {
                    let name = cong_name(*f).unwrap();
                    if !matches!(args[0], Term::Const(_)) {
                        let ts = [args[0].clone(), consts[0].clone(), args[1].clone()];
                        chain.push(self.use_ax(&format!("cong_{name}_l"), &ts, &[lines[0]])?);
                    }
                    if !matches!(args[1], Term::Const(_)) {
                        let ts = [args[1].clone(), consts[1].clone(), consts[0].clone()];
                        chain.push(self.use_ax(&format!("cong_{name}_r"), &ts, &[lines[1]])?);
                    }
                }
                chain.push(fact);
                let mut cur = chain[0];
                for &l in &chain[1..] {
                    cur = self.trans(cur, l)?;
                }
                let v = eval_theta_free(t).map_err(|e| CertifyError::Eval(e.to_string()))?;
                (v.to_u64().expect("value fits"), cur)
            }
        };
        self.evals.insert(t.clone(), r);
        Ok(r)
    }

    // ---- truth of expanded sentences -------------------------------------

    fn value(&mut self, t: &Term) -> R<u64> {
        Ok(self.eval_eq(t)?.0)
    }

    fn truth(&mut self, f: &Formula) -> R<bool> {
        Ok(match f {
            Formula::Atom(r, a, b) => {
                let (a, b) = (self.value(a)?, self.value(b)?);
                match r {
                    Rel::Eq => a == b,
                    Rel::Leq => a <= b,
                }
            }
            Formula::Not(a) => !self.truth(a)?,
            Formula::Implies(a, b) => !self.truth(a)? || self.truth(b)?,
            Formula::ForAll(v, body) => {
                let Some(t) = bounded(*v, body) else {
                    return fragment("unbounded quantifier");
                };
                let n = self.value(&t.clone())?;
                for i in 0..=n {
                    if !self.truth(&body.subst_unchecked(*v, &k(i)))? {
                        return Ok(false);
                    }
                }
                true
            }
            Formula::Proves(..) => return fragment("proof recognizer atom"),
            _ => unreachable!("expanded formulas only"),
        })
    }

    // ---- proofs -----------------------------------------------------------

    fn prove(&mut self, f: &Formula) -> R<usize> {
        if let Some(shown) = self.cited.get(f).cloned() {
            return Ok(self.b.proper(&shown));
        }
        match f {
            Formula::Atom(Rel::Eq, a, b) => {
                if a == b {
                    return self.refl(a);
                }
                let (va, la) = self.eval_eq(a)?;
                let (vb, lb) = self.eval_eq(b)?;
                if va != vb {
                    return Err(CertifyError::False);
                }
                let rb = self.sym(lb)?;
                self.trans(la, rb)
            }
            Formula::Atom(Rel::Leq, a, b) => {
                let (va, la) = self.eval_eq(a)?;
                let (vb, lb) = self.eval_eq(b)?;
                if va > vb {
                    return Err(CertifyError::False);
                }
                let mut cur = self.le(va, vb)?;
                if !matches!(a, Term::Const(_)) {
                    let s = self.sym(la)?;
                    cur = self.use_ax("cong_le_l", &[k(va), a.clone(), k(vb)], &[s, cur])?;
                }
                if !matches!(b, Term::Const(_)) {
                    let s = self.sym(lb)?;
                    cur = self.use_ax("cong_le_r", &[k(vb), b.clone(), a.clone()], &[s, cur])?;
                }
                Ok(cur)
            }
            Formula::Not(a) => self.refute(a),
            Formula::Implies(a, b) => {
                if self.truth(b)? {
                    let pb = self.prove(b)?;
                    let i = self.b.logical(imp(b, &imp(a, b)))?;
                    Ok(self.b.mp(pb, i)?)
                } else {
                    let na = self.refute(a)?;
                    self.lemma(Lemma::Efq, &[(**a).clone(), (**b).clone()], &[na])
                }
            }
            Formula::ForAll(v, body) => self.prove_forall(*v, body),
            Formula::Proves(..) => fragment("proof recognizer atom"),
            _ => unreachable!("expanded formulas only"),
        }
    }

    /// A line proving `~f`.
    fn refute(&mut self, f: &Formula) -> R<usize> {
        if self.truth(f)? {
            return Err(CertifyError::False);
        }
        match f {
            Formula::Atom(r, a, b) => {
                let (va, la) = self.eval_eq(a)?;
                let (vb, lb) = self.eval_eq(b)?;
                match r {
                    Rel::Eq => {
                        let ne = self.neq(va, vb)?;
                        if matches!((a, b), (Term::Const(_), Term::Const(_))) {
                            return Ok(ne);
                        }
                        let ctx = [f.clone()];
                        let h = self.b.assume(&ctx, 0);
                        let sa = self.sym(la)?;
                        let sa = self.b.lift(&ctx, sa);
                        let lb = self.b.lift(&ctx, lb);
                        let x = self.ctx_trans(&ctx, sa, h)?;
                        let x = self.ctx_trans(&ctx, x, lb)?;
                        self.refute_via(x, ne)
                    }
                    Rel::Leq => {
                        let nle = self.nle(va, vb)?;
                        let l = self.ax("cong_le_l", &[a.clone(), k(va), b.clone()])?;
                        let l = self.b.mp(la, l)?;
                        let r = self.ax("cong_le_r", &[b.clone(), k(vb), k(va)])?;
                        let r = self.b.mp(lb, r)?;
                        let x = self.syllogism(l, r)?;
                        self.refute_via(x, nle)
                    }
                }
            }
            Formula::Not(a) => {
                let pa = self.prove(a)?;
                self.lemma(Lemma::Dni, &[(**a).clone()], &[pa])
            }
            Formula::Implies(a, b) => {
                let pa = self.prove(a)?;
                let nb = self.refute(b)?;
                self.lemma(Lemma::ImpNeg, &[(**a).clone(), (**b).clone()], &[pa, nb])
            }
            Formula::ForAll(v, body) => {
                let Some(t) = bounded(*v, body) else {
                    return fragment("unbounded quantifier");
                };
                let n = self.value(&t.clone())?;
                for i in 0..=n {
                    let inst = body.subst_unchecked(*v, &k(i));
                    if !self.truth(&inst)? {
                        let nb = self.refute(&inst)?;
                        let ax = self.b.logical(imp(f, &inst))?;
                        return self.refute_via(ax, nb);
                    }
                }
                unreachable!("a false bounded universal has a witness")
            }
            Formula::Proves(..) => fragment("proof recognizer atom"),
            _ => unreachable!("expanded formulas only"),
        }
    }

    fn prove_forall(&mut self, v: u32, body: &Formula) -> R<usize> {
        let Some(t) = bounded(v, body).cloned() else {
            return fragment("unbounded quantifier");
        };
        let x = Term::Var(v);
        let (n, lt) = self.eval_eq(&t)?;
        let guard = Formula::leq(x.clone(), t.clone());
        let b_of = |c: &Term| body.subst_unchecked(v, c);

        // ladder: (v <= Ci) -> B(v)
        let mut ladder = 0;
        for i in 0..=n {
            let bi = b_of(&k(i));
            let pi = self.prove(&bi)?;
            let at_i = {
                let ctx = [eq(&x, &k(i))];
                let h = self.b.assume(&ctx, 0);
                let s = self.ctx_sym(&ctx, h)?;
                let l = self.leibniz(&k(i), &x, v, body)?;
                let pi = self.b.lift(&ctx, pi);
                self.b.chain(&ctx, l, &[s, pi])?
            };
            ladder = if i == 0 {
                let ctx = [Formula::leq(x.clone(), k(0))];
                let h = self.b.assume(&ctx, 0);
                let z = self.ax("le_zero", std::slice::from_ref(&x))?;
                let z = self.b.lift(&ctx, z);
                let anti = self.ax("le_antisym", &[x.clone(), k(0)])?;
                let e = self.b.chain(&ctx, anti, &[h, z])?;
                self.b.cmp_abs(&ctx, e, at_i)?
            } else {
                let ctx = [Formula::leq(x.clone(), k(i)), not(&eq(&x, &k(i)))];
                let disc = self.ax("le_discrete", &[x.clone(), k(i)])?;
                let h0 = self.b.assume(&ctx, 0);
                let d = self.b.cmp_abs(&ctx, h0, disc)?;
                let h1 = self.b.assume(&ctx, 1);
                let below = self.b.cmp_ctx(&ctx, h1, d)?;
                let p = self.fact(Func::Sub, &[i, 1])?;
                let cg = self.use_ax("cong_le_r", &[Term::pred(k(i)), k(i - 1), x.clone()], &[p])?;
                let below = self.b.cmp_abs(&ctx, below, cg)?;
                let not_i = self.b.cmp_abs(&ctx, below, ladder)?;
                let a = eq(&x, &k(i));
                let bv = body.clone();
                let cases = self.b.lemma(Lemma::Cases, &[a, bv]);
                let at_i = self.b.lift(&ctx[..1], at_i);
                self.b.chain(&ctx[..1], cases, &[at_i, not_i])?
            };
        }

        let pos = if matches!(t, Term::Const(_)) {
            ladder
        } else {
            let cg = self.use_ax("cong_le_r", &[t.clone(), k(n), x.clone()], &[lt])?;
            self.syllogism(cg, ladder)?
        };
        let inner = match body {
            Formula::Implies(_, psi) => (**psi).clone(),
            _ => {
                let Formula::Not(nn) = body else { unreachable!() };
                let Formula::Not(i) = nn.as_ref() else { unreachable!() };
                let Formula::Implies(_, psi) = i.as_ref() else { unreachable!() };
                (**psi).clone()
            }
        };
        let mut neg = self.b.lemma(Lemma::Efq, &[guard.clone(), inner.clone()]);
        if !matches!(body, Formula::Implies(..)) {
            let i = imp(&guard, &inner);
            let dni = self.b.lemma(Lemma::Dni, &[i]);
            neg = self.syllogism(neg, dni)?;
        }
        let all = self.lemma(Lemma::Cases, &[guard, body.clone()], &[pos, neg])?;
        Ok(self.b.gen(all, v)?)
    }

    // ---- substitution of equals -------------------------------------------

    /// `(s = u) -> (tau[s] = tau[u])`
    fn term_cong(&mut self, s: &Term, u: &Term, v: u32, tau: &Term) -> R<usize> {
        let h = eq(s, u);
        if !tau.contains_var(v) {
            let r = self.refl(tau)?;
            return Ok(self.b.lift(&[h], r));
        }
        if *tau == Term::Var(v) {
            return Ok(self.b.lemma(Lemma::Id, &[h]));
        }
        let Term::App(f, args) = tau else { unreachable!("ground terms hold no variable") };
        let ts: Vec<Term> = args.iter().map(|a| a.replace_var(v, s)).collect();
        let tu: Vec<Term> = args.iter().map(|a| a.replace_var(v, u)).collect();
        match f {
            Func::Theta => fragment("theta has no congruence axiom"),
            Func::Log => {
                let inner = self.term_cong(s, u, v, &args[0])?;
                let c = self.ax("cong_log", &[ts[0].clone(), tu[0].clone()])?;
                self.syllogism(inner, c)
            }
            _ => {
                let name = cong_name(*f).unwrap();
                let ctx = [h];
                let mut parts = Vec::new();
                if args[0].contains_var(v) {
                    let inner = self.term_cong(s, u, v, &args[0])?;
                    let c = self.ax(&format!("cong_{name}_l"), &[ts[0].clone(), tu[0].clone(), ts[1].clone()])?;
                    parts.push(self.syllogism(inner, c)?);
                }
                if args[1].contains_var(v) {
                    let inner = self.term_cong(s, u, v, &args[1])?;
                    let c = self.ax(&format!("cong_{name}_r"), &[ts[1].clone(), tu[1].clone(), tu[0].clone()])?;
                    parts.push(self.syllogism(inner, c)?);
                }
                if parts.len() == 1 {
                    return Ok(parts[0]);
                }
                self.ctx_trans(&ctx, parts[0], parts[1])
            }
        }
    }

    /// `(s = u) -> (chi[s] -> chi[u])`, with `chi` expanded.
    fn leibniz(&mut self, s: &Term, u: &Term, v: u32, chi: &Formula) -> R<usize> {
        let memo = (s.clone(), u.clone(), v, chi.clone());
        if let Some(&l) = self.leib.get(&memo) {
            return Ok(l);
        }
        let l = self.leibniz_uncached(s, u, v, chi)?;
        self.leib.insert(memo, l);
        Ok(l)
    }

    /// `(s = u) -> (chi[u] -> chi[s])`
    fn leibniz_back(&mut self, s: &Term, u: &Term, v: u32, chi: &Formula) -> R<usize> {
        let fwd = self.leibniz(u, s, v, chi)?;
        let sym = self.ax("eq_sym", &[s.clone(), u.clone()])?;
        self.syllogism(sym, fwd)
    }

    fn leibniz_uncached(&mut self, s: &Term, u: &Term, v: u32, chi: &Formula) -> R<usize> {
        let h = eq(s, u);
        let at = |t: &Term| chi.subst_unchecked(v, t);
        if !chi.is_free(v) {
            let id = self.b.lemma(Lemma::Id, &[chi.clone()]);
            return Ok(self.b.lift(&[h], id));
        }
        match chi {
            Formula::Atom(r, a, b) => {
                let ctx = [h, at(s)];
                let ta = self.term_cong(s, u, v, a)?;
                let ta = self.b.weaken(&ctx, 1, ta);
                let tb = self.term_cong(s, u, v, b)?;
                let tb = self.b.weaken(&ctx, 1, tb);
                let hyp = self.b.assume(&ctx, 1);
                let (a_s, b_s) = (a.replace_var(v, s), b.replace_var(v, s));
                let (a_u, b_u) = (a.replace_var(v, u), b.replace_var(v, u));
                match r {
                    Rel::Eq => {
                        let back = self.ctx_sym(&ctx, ta)?;
                        let x = self.ctx_trans(&ctx, back, hyp)?;
                        self.ctx_trans(&ctx, x, tb)
                    }
                    Rel::Leq => {
                        let l = self.ax("cong_le_l", &[a_s, a_u.clone(), b_s.clone()])?;
                        let x = self.b.chain(&ctx, l, &[ta, hyp])?;
                        let r = self.ax("cong_le_r", &[b_s, b_u, a_u])?;
                        Ok(self.b.chain(&ctx, r, &[tb, x])?)
                    }
                }
            }
            Formula::Not(a) => {
                let back = self.leibniz_back(s, u, v, a)?;
                let c = self.b.lemma(Lemma::Contra, &[at(u).not_inner(), at(s).not_inner()]);
                self.syllogism(back, c)
            }
            Formula::Implies(a, b) => {
                let (a_s, b_s, a_u) = (a.subst_unchecked(v, s), b.subst_unchecked(v, s), a.subst_unchecked(v, u));
                let ctx = [h, imp(&a_s, &b_s), a_u];
                let back = self.leibniz_back(s, u, v, a)?;
                let back = self.b.weaken(&ctx, 1, back);
                let fwd = self.leibniz(s, u, v, b)?;
                let fwd = self.b.weaken(&ctx, 1, fwd);
                let hu = self.b.assume(&ctx, 2);
                let xs = self.b.cmp_ctx(&ctx, hu, back)?;
                let hi = self.b.assume(&ctx, 1);
                let ys = self.b.cmp_ctx(&ctx, xs, hi)?;
                Ok(self.b.cmp_ctx(&ctx, ys, fwd)?)
            }
            Formula::ForAll(w, a) => {
                if s.contains_var(*w) || u.contains_var(*w) {
                    return fragment(format!("v{w} would be captured"));
                }
                let inner = self.leibniz(s, u, v, a)?;
                let g = self.b.gen(inner, *w)?;
                let (hh, x) = imp_sides(&self.key(inner));
                let d = self.b.logical(imp(
                    &Formula::forall(*w, imp(&hh, &x)),
                    &imp(&Formula::forall(*w, hh.clone()), &Formula::forall(*w, x.clone())),
                ))?;
                let d = self.b.mp(g, d)?;
                let g4 = self.b.logical(imp(&hh, &Formula::forall(*w, hh.clone())))?;
                let hx = self.syllogism(g4, d)?;
                let (a_s, a_u) = imp_sides(&x);
                let d2 = self.b.logical(imp(
                    &Formula::forall(*w, x.clone()),
                    &imp(&Formula::forall(*w, a_s), &Formula::forall(*w, a_u)),
                ))?;
                self.syllogism(hx, d2)
            }
            Formula::Proves(..) => fragment("proof recognizer atom under substitution"),
            _ => unreachable!("expanded formulas only"),
        }
    }
}

trait NotInner {
    fn not_inner(self) -> Formula;
}

impl NotInner for Formula {
    /// The body of a negation.
    fn not_inner(self) -> Formula {
        match self {
            Formula::Not(a) => *a,
            other => panic!("expected a negation, got {other}"),
        }
    }
}

/// A proof of the true Delta0 sentence `phi` from group 0 and S*.
pub fn certify_delta0(phi: &Formula) -> Result<Proof, CertifyError> {
    certify_citing(phi, &[])
}

/// As [`certify_delta0`], also citing the sentences of `cite` verbatim.
pub fn certify_citing(phi: &Formula, cite: &[Formula]) -> Result<Proof, CertifyError> {
    if !phi.is_sentence() {
        return Err(CertifyError::NotSentence);
    }
    match classify(phi) {
        FormulaClass::Delta0 => {}
        other => return Err(CertifyError::NotDelta0(other)),
    }
    let truth = eval_formula(phi, &ThetaInterpretation::doubling(), None)
        .map_err(|e| CertifyError::Eval(e.to_string()))?;
    if !truth {
        return Err(CertifyError::False);
    }
    let mut c = Certifier::new(cite);
    let line = c.prove(&phi.desugar())?;
    Ok(c.b.finish_as(line, phi))
}
