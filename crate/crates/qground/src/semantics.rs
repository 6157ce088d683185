//! Numeric semantics: the grounding functions, walk interpretations and
//! evaluation of terms and formulas over the naturals or a finite model.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::nat::Nat;
use crate::par::{self, Strategy};
use crate::syntax::{Const, DagNode, DagTerm, Formula, Func, Recognizer, Rel, Term};

/// Largest exponent the evaluator will materialize as `2^e`.
pub const EXPONENT_CAP: u64 = 1 << 26;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("interpretation exhausted: no image for 2^{exponent}")]
    Exhausted { exponent: u64 },
    #[error("term is not ground (free variable v{0})")]
    NotGround(u32),
    #[error("unbounded quantifier over v{0} in an infinite domain")]
    Unbounded(u32),
    #[error("no proof oracle supplied for {0}")]
    NoOracle(&'static str),
    #[error("quantifier bound {0} is too large to enumerate")]
    BoundTooLarge(Nat),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InterpError {
    #[error("image exponent 0 would map a power to 1")]
    HitsOne,
    #[error("exponents {0} and {1} share the image exponent {2}")]
    NotInjective(u64, u64, u64),
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
}

/// `f(args)` for the six non-growth functions. Panics on `Theta`.
pub fn eval_fn(f: Func, args: &[Nat]) -> Nat {
    match f {
        Func::Sub => args[0].sub(&args[1]),
        Func::Div => args[0].div(&args[1]),
        Func::Max => Nat::max(&args[0], &args[1]),
        Func::Root => args[0].root(&args[1]),
        Func::Log => args[0].log(),
        Func::Count => args[0].count(&args[1]),
        Func::Theta => panic!("eval_fn: theta needs an interpretation"),
    }
}

pub fn power(x: &Nat) -> bool {
    x.is_power()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Tail {
    from: u64,
    shift: u64,
}

/// One realization of the walk primitive, stored on exponents:
/// `theta(2^k) = 2^image(k)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ThetaInterpretation {
    seed: Option<u64>,
    table: BTreeMap<u64, u64>,
    tail: Option<Tail>,
}

impl ThetaInterpretation {
    /// Images for exponents `0..=max_exp` drawn without replacement from
    /// `[1, 4*max_exp]`; larger exponents `k` map to `k + 3*max_exp + 1`.
    pub fn sample(seed: u64, max_exp: u64) -> ThetaInterpretation {
        let max_exp = max_exp.max(1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pool = (4 * max_exp) as usize;
        let picks = sample(&mut rng, pool, (max_exp + 1) as usize);
        let table = picks
            .into_iter()
            .enumerate()
            .map(|(k, i)| (k as u64, i as u64 + 1))
            .collect();
        ThetaInterpretation {
            seed: Some(seed),
            table,
            tail: Some(Tail {
                from: max_exp + 1,
                shift: 3 * max_exp + 1,
            }),
        }
    }

    /// `theta(x) = 2x` on powers.
    pub fn doubling() -> ThetaInterpretation {
        ThetaInterpretation {
            seed: None,
            table: BTreeMap::new(),
            tail: Some(Tail { from: 0, shift: 1 }),
        }
    }

    /// A partial interpretation from explicit `exponent -> exponent` pairs.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (u64, u64)>) -> Result<Self, InterpError> {
        let t = ThetaInterpretation {
            seed: None,
            table: pairs.into_iter().collect(),
            tail: None,
        };
        t.validate()?;
        Ok(t)
    }

    /// Check the walk axioms on the stored assignment: no image is 1 and
    /// distinct powers have distinct images.
    pub fn validate(&self) -> Result<(), InterpError> {
        let mut seen: BTreeMap<u64, u64> = BTreeMap::new();
        for (&k, &e) in &self.table {
            if e == 0 {
                return Err(InterpError::HitsOne);
            }
            if let Some(&other) = seen.get(&e) {
                return Err(InterpError::NotInjective(other, k, e));
            }
            seen.insert(e, k);
            if let Some(t) = self.tail {
                if e >= t.from + t.shift {
                    let pre = e - t.shift;
                    if !self.table.contains_key(&pre) {
                        return Err(InterpError::NotInjective(k, pre, e));
                    }
                }
            }
        }
        if let Some(t) = self.tail {
            if t.from + t.shift == 0 {
                return Err(InterpError::HitsOne);
            }
        }
        Ok(())
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// Largest exponent with an explicitly stored image.
    pub fn domain_bound(&self) -> Option<u64> {
        self.table.keys().next_back().copied()
    }

    pub fn is_total(&self) -> bool {
        self.tail.is_some()
    }

    pub fn image_exponent(&self, k: u64) -> Result<u64, EvalError> {
        if let Some(&e) = self.table.get(&k) {
            return Ok(e);
        }
        match self.tail {
            Some(t) if k >= t.from => {
                let e = k + t.shift;
                if e > EXPONENT_CAP {
                    Err(EvalError::Exhausted { exponent: k })
                } else {
                    Ok(e)
                }
            }
            _ => Err(EvalError::Exhausted { exponent: k }),
        }
    }

    /// `theta(x)`: zero off powers of two.
    pub fn apply(&self, x: &Nat) -> Result<Nat, EvalError> {
        match x.power_exponent() {
            Some(k) => Ok(Nat::pow2(self.image_exponent(k)?)),
            None => Ok(Nat::ZERO),
        }
    }

    /// Serialize as `k -> e` lines plus an optional `tail` line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(s) = self.seed {
            writeln!(out, "# seed {s}").unwrap();
        }
        for (k, e) in &self.table {
            writeln!(out, "{k} -> {e}").unwrap();
        }
        if let Some(t) = self.tail {
            writeln!(out, "tail: from {} shift {}", t.from, t.shift).unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, InterpError> {
        let mut table = BTreeMap::new();
        let mut tail = None;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: &str| InterpError::Syntax {
                line: i + 1,
                msg: msg.to_string(),
            };
            if let Some(rest) = line.strip_prefix("tail:") {
                let w: Vec<&str> = rest.split_whitespace().collect();
                match w.as_slice() {
                    ["from", f, "shift", s] => {
                        tail = Some(Tail {
                            from: f.parse().map_err(|_| err("bad tail start"))?,
                            shift: s.parse().map_err(|_| err("bad tail shift"))?,
                        })
                    }
                    _ => return Err(err("expected `tail: from F shift S`")),
                }
                continue;
            }
            let (k, e) = line.split_once("->").ok_or_else(|| err("expected `k -> e`"))?;
            let k: u64 = k.trim().parse().map_err(|_| err("bad exponent"))?;
            let e: u64 = e.trim().parse().map_err(|_| err("bad image exponent"))?;
            table.insert(k, e);
        }
        let t = ThetaInterpretation {
            seed: None,
            table,
            tail,
        };
        t.validate()?;
        Ok(t)
    }
}

pub fn sample_theta(seed: u64, max_exp: u64) -> ThetaInterpretation {
    ThetaInterpretation::sample(seed, max_exp)
}

/// How a finite model treats a walk image that leaves the domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum ThetaMode {
    /// The enclosing atomic formula is false.
    #[default]
    PartialBlocks,
    /// The image is clipped to the largest power in the domain.
    TotalClipped,
}

/// The domain `[0, 2^bits)` with a walk treatment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ModelSpec {
    pub bits: u32,
    pub mode: ThetaMode,
}

/// Truth of the proof-recognizer atoms.
pub trait ProofOracle: Sync {
    fn holds(&self, r: Recognizer, args: &[Nat]) -> bool;
}

/// Evaluation context.
#[derive(Clone, Copy)]
pub struct Semantics<'a> {
    pub theta: &'a ThetaInterpretation,
    /// Quantifiers range over `[0, bound)` when set.
    pub bound: Option<&'a Nat>,
    pub model: Option<ModelSpec>,
    pub oracle: Option<&'a dyn ProofOracle>,
    pub strategy: Strategy,
}

impl<'a> Semantics<'a> {
    pub fn standard(theta: &'a ThetaInterpretation) -> Semantics<'a> {
        Semantics {
            theta,
            bound: None,
            model: None,
            oracle: None,
            strategy: Strategy::default(),
        }
    }

    pub fn bounded(theta: &'a ThetaInterpretation, bound: &'a Nat) -> Semantics<'a> {
        Semantics {
            bound: Some(bound),
            ..Semantics::standard(theta)
        }
    }

    pub fn finite(theta: &'a ThetaInterpretation, model: ModelSpec) -> Semantics<'a> {
        Semantics {
            model: Some(model),
            ..Semantics::standard(theta)
        }
    }

    pub fn with_oracle(self, oracle: &'a dyn ProofOracle) -> Semantics<'a> {
        Semantics {
            oracle: Some(oracle),
            ..self
        }
    }

    pub fn with_strategy(self, strategy: Strategy) -> Semantics<'a> {
        Semantics { strategy, ..self }
    }

    fn domain_size(&self) -> Option<Nat> {
        match (self.model, self.bound) {
            (Some(m), _) => Some(Nat::pow2(m.bits as u64)),
            (None, Some(b)) => Some(b.clone()),
            (None, None) => None,
        }
    }

    /// Walk application; `None` is an undefined value in a partial model.
    fn theta(&self, x: &Nat) -> Result<Option<Nat>, EvalError> {
        let Some(m) = self.model else {
            return self.theta.apply(x).map(Some);
        };
        let Some(k) = x.power_exponent() else {
            return Ok(Some(Nat::ZERO));
        };
        let e = self.theta.image_exponent(k)?;
        if e < m.bits as u64 {
            return Ok(Some(Nat::pow2(e)));
        }
        Ok(match m.mode {
            ThetaMode::PartialBlocks => None,
            ThetaMode::TotalClipped => Some(Nat::pow2(m.bits.saturating_sub(1) as u64)),
        })
    }

    fn apply(&self, f: Func, args: &[Nat]) -> Result<Option<Nat>, EvalError> {
        if f == Func::Theta {
            self.theta(&args[0])
        } else {
            Ok(Some(eval_fn(f, args)))
        }
    }

    fn eval_dag(&self, d: &DagTerm) -> Result<Option<Nat>, EvalError> {
        let mut vals: Vec<Option<Nat>> = Vec::with_capacity(d.node_count());
        for n in d.nodes() {
            let v = match n {
                DagNode::Const(c) => Some(Nat::from(c.value())),
                DagNode::Op(f, args) => {
                    let mut xs = Vec::with_capacity(args.len());
                    for &a in args {
                        match &vals[a] {
                            Some(x) => xs.push(x.clone()),
                            None => {
                                xs.clear();
                                break;
                            }
                        }
                    }
                    if xs.len() == args.len() {
                        self.apply(*f, &xs)?
                    } else {
                        None
                    }
                }
            };
            vals.push(v);
        }
        Ok(vals.swap_remove(d.root()))
    }

    /// Value of a ground term; `None` only in a partial finite model.
    pub fn term_value(&self, t: &Term) -> Result<Option<Nat>, EvalError> {
        match t {
            Term::Const(c) => Ok(Some(Nat::from(c.value()))),
            Term::Var(v) => Err(EvalError::NotGround(*v)),
            Term::Dag(d) => self.eval_dag(d),
            Term::App(f, args) => {
                let mut xs = Vec::with_capacity(args.len());
                for a in args {
                    match self.term_value(a)? {
                        Some(x) => xs.push(x),
                        None => return Ok(None),
                    }
                }
                self.apply(*f, &xs)
            }
        }
    }

    pub fn formula_value(&self, phi: &Formula) -> Result<bool, EvalError> {
        let c = self.compile(phi)?;
        self.eval_compiled(&c, &mut Vec::new(), true)
    }

    /// Truth of `phi` with its free variables bound by `env`.
    pub fn formula_value_in(&self, phi: &Formula, env: &[(u32, Nat)]) -> Result<bool, EvalError> {
        let c = self.compile(phi)?;
        self.eval_compiled(&c, &mut env.to_vec(), false)
    }

    pub fn term_value_in(&self, t: &Term, env: &[(u32, Nat)]) -> Result<Option<Nat>, EvalError> {
        let c = self.compile_term(t)?;
        self.eval_cterm(&c, env)
    }

    /// Compile `body` once and evaluate it at each value of `var`.
    pub fn instance_evaluator(
        &self,
        body: &Formula,
        var: u32,
    ) -> Result<impl Fn(&Nat) -> Result<bool, EvalError> + Sync + 'a, EvalError> {
        let c = self.compile(body)?;
        let s = *self;
        Ok(move |x: &Nat| s.eval_compiled(&c, &mut vec![(var, x.clone())], false))
    }

    fn compile_term(&self, t: &Term) -> Result<CTerm, EvalError> {
        if t.is_ground() {
            return Ok(CTerm::Lit(self.term_value(t)?));
        }
        Ok(match t {
            Term::Var(v) => CTerm::Var(*v),
            Term::App(f, args) => CTerm::App(
                *f,
                args.iter().map(|a| self.compile_term(a)).collect::<Result<_, _>>()?,
            ),
            Term::Const(_) | Term::Dag(_) => unreachable!("ground"),
        })
    }

    fn compile(&self, phi: &Formula) -> Result<CFormula, EvalError> {
        let b = |x: &Formula| -> Result<Box<CFormula>, EvalError> { Ok(Box::new(self.compile(x)?)) };
        Ok(match phi {
            Formula::Atom(r, x, y) => CFormula::Atom(*r, self.compile_term(x)?, self.compile_term(y)?),
            Formula::Proves(r, args) => CFormula::Proves(
                *r,
                args.iter().map(|a| self.compile_term(a)).collect::<Result<_, _>>()?,
            ),
            Formula::Not(a) => CFormula::Not(b(a)?),
            Formula::And(x, y) => CFormula::And(b(x)?, b(y)?),
            Formula::Or(x, y) => CFormula::Or(b(x)?, b(y)?),
            Formula::Implies(x, y) => CFormula::Implies(b(x)?, b(y)?),
            Formula::ForAll(..) | Formula::Exists(..) => {
                let universal = matches!(phi, Formula::ForAll(..));
                let shape = if universal {
                    phi.as_bounded_forall()
                } else {
                    phi.as_bounded_exists()
                };
                match shape {
                    Some((v, t, body)) => CFormula::Quant {
                        universal,
                        var: v,
                        bound: Some(self.compile_term(t)?),
                        body: b(body)?,
                    },
                    None => {
                        let (v, body) = match phi {
                            Formula::ForAll(v, body) | Formula::Exists(v, body) => (*v, body),
                            _ => unreachable!(),
                        };
                        if self.domain_size().is_none() {
                            return Err(EvalError::Unbounded(v));
                        }
                        CFormula::Quant {
                            universal,
                            var: v,
                            bound: None,
                            body: b(body)?,
                        }
                    }
                }
            }
        })
    }

    fn eval_cterm(&self, t: &CTerm, env: &[(u32, Nat)]) -> Result<Option<Nat>, EvalError> {
        match t {
            CTerm::Lit(v) => Ok(v.clone()),
            CTerm::Var(v) => env
                .iter()
                .rev()
                .find(|(w, _)| w == v)
                .map(|(_, x)| Some(x.clone()))
                .ok_or(EvalError::NotGround(*v)),
            CTerm::App(f, args) => {
                let mut xs = Vec::with_capacity(args.len());
                for a in args {
                    match self.eval_cterm(a, env)? {
                        Some(x) => xs.push(x),
                        None => return Ok(None),
                    }
                }
                self.apply(*f, &xs)
            }
        }
    }

    fn eval_compiled(&self, c: &CFormula, env: &mut Vec<(u32, Nat)>, top: bool) -> Result<bool, EvalError> {
        match c {
            CFormula::Atom(r, x, y) => {
                let (Some(a), Some(b)) = (self.eval_cterm(x, env)?, self.eval_cterm(y, env)?) else {
                    return Ok(false);
                };
                Ok(match r {
                    Rel::Eq => a == b,
                    Rel::Leq => a <= b,
                })
            }
            CFormula::Proves(r, args) => {
                let mut xs = Vec::with_capacity(args.len());
                for a in args {
                    match self.eval_cterm(a, env)? {
                        Some(x) => xs.push(x),
                        None => return Ok(false),
                    }
                }
                let oracle = self.oracle.ok_or(EvalError::NoOracle(r.name()))?;
                Ok(oracle.holds(*r, &xs))
            }
            CFormula::Not(a) => Ok(!self.eval_compiled(a, env, top)?),
            CFormula::And(a, b) => Ok(self.eval_compiled(a, env, top)? && self.eval_compiled(b, env, top)?),
            CFormula::Or(a, b) => Ok(self.eval_compiled(a, env, top)? || self.eval_compiled(b, env, top)?),
            CFormula::Implies(a, b) => Ok(!self.eval_compiled(a, env, top)? || self.eval_compiled(b, env, top)?),
            CFormula::Quant {
                universal,
                var,
                bound,
                body,
            } => {
                // Values range over [0, end).
                let domain = self.domain_size();
                let end = match bound {
                    Some(t) => match self.eval_cterm(t, env)? {
                        Some(b) => {
                            let b1 = Nat::from_big(b.to_big() + 1u32);
                            match domain {
                                Some(d) if d < b1 => d,
                                _ => b1,
                            }
                        }
                        // an undefined bound makes the guard atom false
                        None => Nat::ZERO,
                    },
                    None => domain.expect("checked at compile time"),
                };
                let end = end.to_u64().ok_or_else(|| EvalError::BoundTooLarge(end.clone()))?;
                let want = !*universal;
                if top && self.strategy == Strategy::Parallel && end > 1 {
                    let base = env.clone();
                    let hit = par::find_first(self.strategy, 0..end, |x| {
                        let mut local = base.clone();
                        local.push((*var, Nat::from(x)));
                        match self.eval_compiled(body, &mut local, false) {
                            Ok(v) if v == want => Some(Ok(())),
                            Ok(_) => None,
                            Err(e) => Some(Err(e)),
                        }
                    });
                    return match hit {
                        Some((_, Err(e))) => Err(e),
                        Some((_, Ok(()))) => Ok(want),
                        None => Ok(!want),
                    };
                }
                for x in 0..end {
                    env.push((*var, Nat::from(x)));
                    let v = self.eval_compiled(body, env, false);
                    env.pop();
                    if v? == want {
                        return Ok(want);
                    }
                }
                Ok(!want)
            }
        }
    }
}

#[derive(Debug)]
enum CTerm {
    Lit(Option<Nat>),
    Var(u32),
    App(Func, Vec<CTerm>),
}

#[derive(Debug)]
enum CFormula {
    Atom(Rel, CTerm, CTerm),
    Proves(Recognizer, Vec<CTerm>),
    Not(Box<CFormula>),
    And(Box<CFormula>, Box<CFormula>),
    Or(Box<CFormula>, Box<CFormula>),
    Implies(Box<CFormula>, Box<CFormula>),
    Quant {
        universal: bool,
        var: u32,
        bound: Option<CTerm>,
        body: Box<CFormula>,
    },
}

/// Value of a ground term (or DAG term) under `sigma`.
pub fn eval_term(t: &Term, sigma: &ThetaInterpretation) -> Result<Nat, EvalError> {
    Ok(Semantics::standard(sigma)
        .term_value(t)?
        .expect("standard semantics is total"))
}

pub fn eval_dag(d: &DagTerm, sigma: &ThetaInterpretation) -> Result<Nat, EvalError> {
    Ok(Semantics::standard(sigma)
        .eval_dag(d)?
        .expect("standard semantics is total"))
}

/// Truth of a sentence; quantifiers range over `[0, bound)` when a bound is given.
pub fn eval_formula(phi: &Formula, sigma: &ThetaInterpretation, bound: Option<&Nat>) -> Result<bool, EvalError> {
    let s = match bound {
        Some(b) => Semantics::bounded(sigma, b),
        None => Semantics::standard(sigma),
    };
    s.formula_value(phi)
}

/// Value of a θ-free ground term; the interpretation is irrelevant.
pub fn eval_theta_free(t: &Term) -> Result<Nat, EvalError> {
    eval_term(t, &ThetaInterpretation::doubling())
}

/// An injective map from naturals to positive naturals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaInterpretation {
    seed: u64,
    table: Vec<u64>,
    shift: u64,
}

impl ZetaInterpretation {
    /// Images of `0..=max_key` drawn from `[1, 4*max_key]`; larger keys `k`
    /// map to `k + 3*max_key + 1`.
    pub fn sample(seed: u64, max_key: u64) -> ZetaInterpretation {
        let max_key = max_key.max(1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let picks = sample(&mut rng, (4 * max_key) as usize, (max_key + 1) as usize);
        ZetaInterpretation {
            seed,
            table: picks.into_iter().map(|i| i as u64 + 1).collect(),
            shift: 3 * max_key + 1,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn apply(&self, x: u64) -> u64 {
        match self.table.get(x as usize) {
            Some(&y) => y,
            None => x + self.shift,
        }
    }
}

/// Shorthand for building the constant `c` as a `Nat`.
pub fn const_value(c: Const) -> Nat {
    Nat::from(c.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{c1, c2, parse_formula, parse_term, var};

    #[test]
    fn theta_basics() {
        let s = ThetaInterpretation::from_pairs([(0, 2), (1, 3), (2, 1)]).unwrap();
        assert_eq!(eval_term(&Term::theta(c1()), &s).unwrap(), Nat::from(4));
        let t = Term::theta(Term::sub(Term::max(c2(), Term::theta(c1())), c1()));
        assert_eq!(eval_term(&t, &s).unwrap(), Nat::ZERO); // theta(3) = 0
        assert_eq!(
            eval_term(&Term::theta(Term::theta(Term::theta(Term::theta(c1())))), &s),
            Err(EvalError::Exhausted { exponent: 3 })
        );
        assert_eq!(eval_term(&var(0), &s), Err(EvalError::NotGround(0)));
    }

    #[test]
    fn validator() {
        assert_eq!(ThetaInterpretation::from_pairs([(0, 0)]), Err(InterpError::HitsOne));
        assert!(matches!(
            ThetaInterpretation::from_pairs([(0, 3), (1, 3)]),
            Err(InterpError::NotInjective(..))
        ));
        assert!(ThetaInterpretation::doubling().validate().is_ok());
        for seed in 0..50 {
            let s = ThetaInterpretation::sample(seed, 12);
            s.validate().unwrap();
            assert!(s.apply(&Nat::ONE).unwrap() >= Nat::TWO);
        }
    }

    #[test]
    fn text_round_trip() {
        let s = ThetaInterpretation::sample(9, 6);
        let back = ThetaInterpretation::from_text(&s.to_text()).unwrap();
        for k in 0..40 {
            assert_eq!(back.image_exponent(k), s.image_exponent(k));
        }
    }

    #[test]
    fn distinct_seeds_differ() {
        let differ = (0..100u64)
            .filter(|&i| {
                let a = ThetaInterpretation::sample(2 * i, 16);
                let b = ThetaInterpretation::sample(2 * i + 1, 16);
                (0..=16).any(|k| a.image_exponent(k) != b.image_exponent(k))
            })
            .count();
        assert!(differ >= 99);
    }

    #[test]
    fn formulas() {
        let s = ThetaInterpretation::doubling();
        assert!(eval_formula(&Formula::eq(c1(), c1()), &s, None).unwrap());
        let f = parse_formula("forall v0 <= C2. v0 <= C2").unwrap();
        assert!(eval_formula(&f, &s, None).unwrap());
        let g = parse_formula("forall v0. C0 <= v0").unwrap();
        assert_eq!(eval_formula(&g, &s, None), Err(EvalError::Unbounded(0)));
        assert!(eval_formula(&g, &s, Some(&Nat::from(100))).unwrap());
        let h = parse_formula("exists v0. exists v1. v1 = sub(v0, C2) & C2 <= v1").unwrap();
        assert!(eval_formula(&h, &s, Some(&Nat::from(5))).unwrap());
        assert!(!eval_formula(&h, &s, Some(&Nat::from(4))).unwrap());
    }

    #[test]
    fn partial_and_clipped_models() {
        // theta(1) = 2^3 leaves a domain of 3 bits
        let s = ThetaInterpretation::from_pairs([(0, 3), (1, 2), (2, 1)]).unwrap();
        let f = parse_formula("theta(C1) = theta(C1)").unwrap();
        let partial = Semantics::finite(&s, ModelSpec { bits: 3, mode: ThetaMode::PartialBlocks });
        assert!(!partial.formula_value(&f).unwrap());
        let clipped = Semantics::finite(&s, ModelSpec { bits: 3, mode: ThetaMode::TotalClipped });
        assert!(clipped.formula_value(&f).unwrap());
        let t = parse_term("theta(C1)").unwrap();
        assert_eq!(clipped.term_value(&t).unwrap(), Some(Nat::from(4)));
    }

    #[test]
    fn strategies_agree_on_quantifiers() {
        let s = ThetaInterpretation::doubling();
        let f = parse_formula("forall v0. forall v1. sub(v0, v1) <= v0").unwrap();
        let g = parse_formula("forall v0. log(v0) = C0").unwrap();
        let bound = Nat::from(64);
        for st in [Strategy::Sequential, Strategy::Parallel] {
            let sem = Semantics::bounded(&s, &bound).with_strategy(st);
            assert!(sem.formula_value(&f).unwrap());
            assert!(!sem.formula_value(&g).unwrap());
        }
    }

    #[test]
    fn zeta_is_injective_and_positive() {
        let z = ZetaInterpretation::sample(3, 20);
        let vals: std::collections::BTreeSet<u64> = (0..200).map(|x| z.apply(x)).collect();
        assert_eq!(vals.len(), 200);
        assert!(!vals.contains(&0));
    }
}
