//! Shortest-proof search at toy sizes.
//!
//! The search works backwards from the target. A partial proof is a set of
//! distinct step formulas, each either justified (proper axiom, logical
//! axiom, modus ponens from two members) or still open. The byte cost of the
//! set only grows as goals are closed, so it prunes every branch whose cost
//! passes the budget. Budgets are tried in increasing order, so the first
//! proof found is a shortest one.
//!
//! Modus ponens needs an antecedent `A`. Candidates are the members already
//! present and every formula small enough to fit the remaining budget.
//! Variables outside the axioms and the target are interchangeable, so a
//! fresh variable is only introduced as the least unused index of its byte
//! width.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::codec::{encode_formula, encode_proof, index_digits};
use crate::kernel::{is_logical_axiom, AxiomSet, Justification, Proof, Schema, Step};
use crate::syntax::{Const, Formula, Func, Recognizer, Rel, Term};

pub const MAX_SEARCH_BYTES: usize = 60;

#[derive(Clone, Copy, Debug)]
pub struct SearchLimits {
    pub max_expansions: u64,
    pub max_pool: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_expansions: 20_000_000,
            max_pool: 4_000_000,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Largest budget fully explored.
    pub exhausted_bytes: usize,
    pub expansions: u64,
    pub largest_pool: usize,
    /// Members of the partial proof when the search stopped.
    pub frontier_steps: usize,
    pub frontier_open: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error("search limited to {MAX_SEARCH_BYTES} bytes, asked for {0}")]
    TooLarge(usize),
    #[error("budget exceeded after {} expansions; bytes < {} exhausted; frontier {} steps, {} open", .0.expansions, .0.exhausted_bytes + 1, .0.frontier_steps, .0.frontier_open)]
    Budget(SearchStats),
}

fn var_size(v: u32) -> usize {
    1 + index_digits(u64::from(v))
}

fn size(f: &Formula) -> usize {
    encode_formula(f).len()
}

/// The shortest written form of an expanded formula.
fn min_form(k: &Formula) -> Formula {
    match k {
        Formula::Atom(..) | Formula::Proves(..) => k.clone(),
        Formula::Not(x) => match x.as_ref() {
            Formula::Implies(a, nb) => match nb.as_ref() {
                Formula::Not(b) => Formula::and(min_form(a), min_form(b)),
                _ => Formula::not(min_form(x)),
            },
            Formula::ForAll(v, nb) => match nb.as_ref() {
                Formula::Not(b) => Formula::exists(*v, min_form(b)),
                _ => Formula::not(min_form(x)),
            },
            _ => Formula::not(min_form(x)),
        },
        Formula::Implies(a, b) => match a.as_ref() {
            Formula::Not(x) => Formula::or(min_form(x), min_form(b)),
            _ => Formula::implies(min_form(a), min_form(b)),
        },
        Formula::ForAll(v, x) => Formula::forall(*v, min_form(x)),
        Formula::And(..) | Formula::Or(..) | Formula::Exists(..) => min_form(&k.desugar()),
    }
}

fn min_size(k: &Formula) -> usize {
    size(&min_form(k))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Just {
    Proper,
    Logical(Schema),
    Mp(usize, usize),
}

struct Node {
    key: Formula,
    written: Formula,
    cost: usize,
    just: Option<Just>,
}

/// Allowed variables for a pool: fixed and already used ones, then fresh
/// ones per byte width in the order they must first appear.
#[derive(Clone, PartialEq, Eq, Hash)]
struct VarPlan {
    known: Vec<u32>,
    fresh: Vec<Vec<u32>>,
}

struct Pools {
    cache: HashMap<(usize, VarPlan), Arc<Vec<(Formula, usize)>>>,
    max_pool: usize,
}

fn first_occurrences(f: &Formula) -> Vec<u32> {
    fn term(t: &Term, out: &mut Vec<u32>) {
        match t {
            Term::Var(v) if !out.contains(v) => out.push(*v),
            Term::App(_, xs) => xs.iter().for_each(|x| term(x, out)),
            _ => {}
        }
    }
    fn go(f: &Formula, out: &mut Vec<u32>) {
        match f {
            Formula::Atom(_, a, b) => {
                term(a, out);
                term(b, out);
            }
            Formula::Proves(_, xs) => xs.iter().for_each(|x| term(x, out)),
            Formula::Not(a) => go(a, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                go(a, out);
                go(b, out);
            }
            Formula::ForAll(v, a) | Formula::Exists(v, a) => {
                if !out.contains(v) {
                    out.push(*v);
                }
                go(a, out);
            }
        }
    }
    let mut out = Vec::new();
    go(f, &mut out);
    out
}

fn canonical_fresh(f: &Formula, plan: &VarPlan) -> bool {
    let mut next = vec![0usize; plan.fresh.len()];
    for v in first_occurrences(f) {
        if plan.known.contains(&v) {
            continue;
        }
        let Some(c) = plan.fresh.iter().position(|class| class.contains(&v)) else {
            return false;
        };
        if plan.fresh[c].get(next[c]) != Some(&v) {
            return false;
        }
        next[c] += 1;
    }
    true
}

impl Pools {
    /// Expanded formulas whose shortest written form has at most `r` bytes.
    fn get(&mut self, r: usize, plan: &VarPlan) -> Result<Arc<Vec<(Formula, usize)>>, usize> {
        if let Some(p) = self.cache.get(&(r, plan.clone())) {
            return Ok(p.clone());
        }
        let vars: Vec<u32> = plan.known.iter().chain(plan.fresh.iter().flatten()).copied().collect();
        let written = enumerate(r, &vars, self.max_pool)?;
        let mut best: HashMap<Formula, usize> = HashMap::new();
        for (f, s) in written {
            if !canonical_fresh(&f, plan) {
                continue;
            }
            let e = best.entry(f.desugar()).or_insert(s);
            *e = (*e).min(s);
        }
        let mut pool: Vec<(Formula, usize)> = best.into_iter().collect();
        pool.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| encode_formula(&a.0).cmp(&encode_formula(&b.0))));
        let pool = Arc::new(pool);
        self.cache.insert((r, plan.clone()), pool.clone());
        Ok(pool)
    }
}

/// Every written formula of at most `r` bytes over `vars`, with its size.
fn enumerate(r: usize, vars: &[u32], cap: usize) -> Result<Vec<(Formula, usize)>, usize> {
    let tmax = r.saturating_sub(5);
    let mut terms: Vec<Vec<Term>> = vec![Vec::new(); tmax + 1];
    for s in 1..=tmax {
        let mut here = Vec::new();
        if s == 1 {
            here.extend([Const::C0, Const::C1, Const::C2].map(Term::Const));
        }
        here.extend(vars.iter().filter(|&&v| var_size(v) == s).map(|&v| Term::Var(v)));
        for f in Func::ALL {
            if f.arity() == 1 && s > 3 {
                here.extend(terms[s - 3].iter().map(|x| Term::App(f, vec![x.clone()])));
            }
            if f.arity() == 2 && s > 5 {
                for sa in 1..s - 4 {
                    for a in &terms[sa] {
                        for b in &terms[s - 4 - sa] {
                            here.push(Term::App(f, vec![a.clone(), b.clone()]));
                        }
                    }
                }
            }
        }
        terms[s] = here;
    }
    let pairs = |total: usize| -> Vec<(&Term, &Term)> {
        let mut out = Vec::new();
        for sa in 1..total {
            if sa > tmax || total - sa > tmax {
                continue;
            }
            for a in &terms[sa] {
                for b in &terms[total - sa] {
                    out.push((a, b));
                }
            }
        }
        out
    };
    let mut forms: Vec<Vec<Formula>> = vec![Vec::new(); r + 1];
    let mut count = 0usize;
    for s in 5..=r {
        let mut here = Vec::new();
        for (a, b) in pairs(s - 4) {
            here.push(Formula::Atom(Rel::Eq, a.clone(), b.clone()));
            here.push(Formula::Atom(Rel::Leq, a.clone(), b.clone()));
            here.push(Formula::Proves(Recognizer::HilbPrf, vec![a.clone(), b.clone()]));
        }
        if s >= 8 {
            for sa in 1..s - 6 {
                for (b, c) in pairs(s - 5 - sa) {
                    for a in terms.get(sa).into_iter().flatten() {
                        here.push(Formula::Proves(Recognizer::SubstPrf, vec![a.clone(), b.clone(), c.clone()]));
                    }
                }
            }
        }
        if s >= 8 {
            here.extend(forms[s - 3].iter().map(|x| Formula::not(x.clone())));
        }
        for sa in 5..s.saturating_sub(8) {
            for a in &forms[sa] {
                for b in &forms[s - 4 - sa] {
                    here.push(Formula::and(a.clone(), b.clone()));
                    here.push(Formula::or(a.clone(), b.clone()));
                    here.push(Formula::implies(a.clone(), b.clone()));
                }
            }
        }
        for &v in vars {
            let body = s as isize - 4 - var_size(v) as isize;
            if body >= 5 {
                for x in &forms[body as usize] {
                    here.push(Formula::forall(v, x.clone()));
                    here.push(Formula::exists(v, x.clone()));
                }
            }
        }
        count += here.len();
        if count > cap {
            return Err(count);
        }
        forms[s] = here;
    }
    Ok(forms
        .into_iter()
        .enumerate()
        .flat_map(|(s, fs)| fs.into_iter().map(move |f| (f, s)))
        .collect())
}

struct Search {
    /// Expanded proper axiom -> its written form.
    proper: HashMap<Formula, Formula>,
    fixed: BTreeSet<u32>,
    nodes: Vec<Node>,
    index: HashMap<Formula, usize>,
    total: usize,
    budget: usize,
    pools: Pools,
    stats: SearchStats,
    limits: SearchLimits,
}

enum Outcome {
    Found,
    None,
    Stop,
}

impl Search {
    fn push(&mut self, key: Formula, written: Formula) -> usize {
        let cost = size(&written);
        if !self.nodes.is_empty() {
            self.total += 1;
        }
        self.total += cost;
        self.index.insert(key.clone(), self.nodes.len());
        self.nodes.push(Node {
            key,
            written,
            cost,
            just: None,
        });
        self.nodes.len() - 1
    }

    fn truncate(&mut self, len: usize) {
        while self.nodes.len() > len {
            let n = self.nodes.pop().unwrap();
            self.index.remove(&n.key);
            self.total -= n.cost + usize::from(!self.nodes.is_empty());
        }
    }

    /// Does `from` depend on `to` through modus ponens premises?
    fn reaches(&self, from: usize, to: usize) -> bool {
        let mut stack = vec![from];
        let mut seen = vec![false; self.nodes.len()];
        while let Some(x) = stack.pop() {
            if x == to {
                return true;
            }
            if std::mem::replace(&mut seen[x], true) {
                continue;
            }
            if let Some(Just::Mp(a, b)) = self.nodes[x].just {
                stack.push(a);
                stack.push(b);
            }
        }
        false
    }

    fn var_plan(&self, r: usize) -> VarPlan {
        let mut known: BTreeSet<u32> = self.fixed.clone();
        for n in &self.nodes {
            known.extend(n.key.all_vars());
        }
        let mut fresh: Vec<Vec<u32>> = Vec::new();
        let mut v = 0u32;
        while var_size(v) <= r.saturating_sub(4).min(3) {
            let class = var_size(v) - 1;
            if fresh.len() <= class {
                fresh.resize(class + 1, Vec::new());
            }
            // a formula of r bytes has fewer than r / 2 variables
            if !known.contains(&v) && fresh[class].len() < (r / (var_size(v) + 2)).max(1) {
                fresh[class].push(v);
            }
            v += 1;
            if v >= 1 << 10 {
                break;
            }
        }
        VarPlan {
            known: known.into_iter().collect(),
            fresh,
        }
    }

    fn dfs(&mut self) -> Outcome {
        self.stats.expansions += 1;
        if self.stats.expansions > self.limits.max_expansions {
            return Outcome::Stop;
        }
        let Some(g) = self.nodes.iter().position(|n| n.just.is_none()) else {
            return Outcome::Found;
        };
        let key = self.nodes[g].key.clone();

        // logical axioms cost nothing extra and add no premises
        if let Some(s) = is_logical_axiom(&key) {
            self.nodes[g].just = Some(Just::Logical(s));
            let out = self.dfs();
            if matches!(out, Outcome::None) {
                self.nodes[g].just = None;
            }
            return out;
        }

        if let Some(w) = self.proper.get(&key).cloned() {
            let (old_w, old_c) = (self.nodes[g].written.clone(), self.nodes[g].cost);
            let c = size(&w);
            if self.total - old_c + c <= self.budget {
                self.total = self.total - old_c + c;
                self.nodes[g].written = w;
                self.nodes[g].cost = c;
                self.nodes[g].just = Some(Just::Proper);
                match self.dfs() {
                    Outcome::None => {}
                    out => return out,
                }
                self.nodes[g].just = None;
                self.nodes[g].written = old_w;
                self.nodes[g].cost = old_c;
                self.total = self.total - c + old_c;
                if c == old_c {
                    return Outcome::None;
                }
            }
        }

        let rem = self.budget - self.total;
        let gsize = min_size(&key);
        let mut cands: Vec<Formula> = Vec::new();
        for n in &self.nodes {
            cands.push(n.key.clone());
            if let Formula::Implies(a, b) = &n.key {
                if **b == key && !self.index.contains_key(a.as_ref()) {
                    cands.push((**a).clone());
                }
            }
        }
        if rem >= gsize + 3 + 10 {
            let r = (rem - gsize - 3) / 2;
            let plan = self.var_plan(r);
            match self.pools.get(r, &plan) {
                Ok(pool) => {
                    self.stats.largest_pool = self.stats.largest_pool.max(pool.len());
                    cands.extend(pool.iter().map(|(f, _)| f.clone()));
                }
                Err(_) => return Outcome::Stop,
            }
        }
        let mut tried = std::collections::HashSet::new();
        for a in cands {
            if !tried.insert(a.clone()) {
                continue;
            }
            let imp = Formula::implies(a.clone(), key.clone());
            let (ia, ii) = (self.index.get(&a).copied(), self.index.get(&imp).copied());
            if ia.is_some_and(|i| self.reaches(i, g)) || ii.is_some_and(|i| self.reaches(i, g)) {
                continue;
            }
            let add = if ia.is_none() { min_size(&a) + 1 } else { 0 };
            let add_imp = if ii.is_none() { min_size(&imp) + 1 } else { 0 };
            if self.total + add + add_imp > self.budget {
                continue;
            }
            let len = self.nodes.len();
            let ia = ia.unwrap_or_else(|| self.push(a.clone(), min_form(&a)));
            let ii = ii.unwrap_or_else(|| self.push(imp.clone(), min_form(&imp)));
            self.nodes[g].just = Some(Just::Mp(ia, ii));
            match self.dfs() {
                Outcome::None => {}
                out => return out,
            }
            self.nodes[g].just = None;
            self.truncate(len);
        }
        Outcome::None
    }

    fn emit(&self) -> Proof {
        let mut order = Vec::new();
        let mut pos = vec![usize::MAX; self.nodes.len()];
        fn visit(s: &Search, x: usize, order: &mut Vec<usize>, pos: &mut Vec<usize>) {
            if pos[x] != usize::MAX {
                return;
            }
            pos[x] = usize::MAX - 1;
            if let Some(Just::Mp(a, b)) = s.nodes[x].just {
                visit(s, a, order, pos);
                visit(s, b, order, pos);
            }
            pos[x] = order.len();
            order.push(x);
        }
        visit(self, 0, &mut order, &mut pos);
        let steps = order
            .iter()
            .map(|&x| Step {
                formula: self.nodes[x].written.clone(),
                justification: match self.nodes[x].just.expect("closed") {
                    Just::Proper => Justification::Proper,
                    Just::Logical(s) => Justification::Logical(s),
                    Just::Mp(a, b) => Justification::Mp(pos[a], pos[b]),
                },
            })
            .collect();
        Proof { steps }
    }

    fn snapshot(&mut self) -> SearchStats {
        self.stats.frontier_steps = self.nodes.len();
        self.stats.frontier_open = self.nodes.iter().filter(|n| n.just.is_none()).count();
        self.stats.clone()
    }
}

/// A shortest proof of `target` from `gamma` of at most `max_bytes` bytes.
pub fn exhaustive_proof_search(
    gamma: &AxiomSet,
    target: &Formula,
    max_bytes: usize,
    limits: SearchLimits,
) -> Result<(Option<Proof>, SearchStats), SearchError> {
    if max_bytes > MAX_SEARCH_BYTES {
        return Err(SearchError::TooLarge(max_bytes));
    }
    let mut fixed: BTreeSet<u32> = target.all_vars();
    let mut proper = HashMap::new();
    for f in gamma.sentences() {
        fixed.extend(f.all_vars());
        let k = f.desugar();
        let e = proper.entry(k).or_insert_with(|| f.clone());
        if size(f) < size(e) {
            *e = f.clone();
        }
    }
    let mut s = Search {
        proper,
        fixed,
        nodes: Vec::new(),
        index: HashMap::new(),
        total: 0,
        budget: 0,
        pools: Pools {
            cache: HashMap::new(),
            max_pool: limits.max_pool,
        },
        stats: SearchStats::default(),
        limits,
    };
    let first = size(target);
    for budget in first..=max_bytes {
        s.truncate(0);
        s.budget = budget;
        s.push(target.desugar(), target.clone());
        match s.dfs() {
            Outcome::Found => {
                let p = s.emit();
                debug_assert!(encode_proof(p.steps.iter().map(|x| &x.formula)).len() <= budget);
                s.stats.exhausted_bytes = budget - 1;
                return Ok((Some(p), s.snapshot()));
            }
            Outcome::Stop => return Err(SearchError::Budget(s.snapshot())),
            Outcome::None => {
                s.nodes[0].just = None;
                s.stats.exhausted_bytes = budget;
            }
        }
    }
    let stats = s.snapshot();
    Ok((None, stats))
}


#[cfg(test)]
mod toy_consistency {
    use super::*;
    use crate::axioms::AxiomSpec;
    use crate::syntax::{c0, c1};

    #[test]
    fn no_short_contradiction_from_base() {
        let gamma = AxiomSet::new("base", AxiomSpec::base().sentences());
        let t = std::time::Instant::now();
        let (p, stats) =
            exhaustive_proof_search(&gamma, &Formula::eq(c0(), c1()), 40, SearchLimits::default()).unwrap();
        eprintln!("{stats:?} {:?}", t.elapsed());
        assert!(p.is_none());
        assert_eq!(stats.exhausted_bytes, 40);
    }
}
