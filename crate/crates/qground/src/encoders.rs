//! Ground terms that name integers: the power terms `E_j`, greedy tree
//! numerals, shared DAG numerals and the ζ-walk maxima, plus a sampling
//! test for observability.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::nat::Nat;
use crate::par::{self, Strategy};
use crate::semantics::{EvalError, Semantics, ThetaInterpretation, ZetaInterpretation};
use crate::syntax::{c1, c2, Const, DagNode, DagTerm, Func, Term};

/// `Max[θ^j(C1), ..., θ(C1)]`, nested to the right; a lone walk is doubled.
fn walk_max(j: usize) -> Term {
    let mut acc = Term::theta(c1());
    if j == 1 {
        return Term::max(acc.clone(), acc);
    }
    for i in 2..=j {
        acc = Term::max(Term::theta_n(c1(), i), acc);
    }
    acc
}

/// The observable term denoting `2^j`.
pub fn build_e(j: usize) -> Term {
    if j == 0 {
        return c1();
    }
    let w = walk_max(j);
    Term::div(w.clone(), Term::half_n(w, j))
}

/// Exponents for the greedy decomposition: `n = 2^top - sum 2^k` over
/// the returned `k`, most significant first. Powers have no subtrahends.
pub fn greedy_plan(n: &Nat) -> (u64, Vec<u64>) {
    if let Some(k) = n.power_exponent() {
        return (k, Vec::new());
    }
    let top = n.bits();
    let gap = Nat::pow2(top).sub(n).to_big();
    let subs = (0..gap.bits()).rev().filter(|&b| gap.bit(b)).collect();
    (top, subs)
}

/// `T_n`: constants up to 2, otherwise `E_top - E_a - E_b - ...` nested left.
pub fn build_tree_term(n: u64) -> Term {
    if let Some(c) = Const::from_value(n) {
        return Term::Const(c);
    }
    let (top, subs) = greedy_plan(&Nat::from(n));
    subs.into_iter()
        .fold(build_e(top as usize), |acc, k| Term::sub(acc, build_e(k as usize)))
}

/// `G_n`: the staged DAG (constants, walk, running max, halvings, powers,
/// subtraction chain).
pub fn build_dag_term(n: &Nat) -> DagTerm {
    if let Some(c) = n.to_u64().and_then(Const::from_value) {
        return DagTerm::new(vec![DagNode::Const(c)], 0).expect("single node");
    }
    let (top, subs) = greedy_plan(n);
    // walk length: ceil(1 + log2 n)
    let m = if n.is_power() { n.bits() } else { n.bits() + 1 } as usize;
    let (k1, k2) = (1, 2);
    let mut nodes = vec![
        DagNode::Const(Const::C0),
        DagNode::Const(Const::C1),
        DagNode::Const(Const::C2),
    ];
    let push = |nodes: &mut Vec<DagNode>, n: DagNode| {
        nodes.push(n);
        nodes.len() - 1
    };
    // walk and running maximum
    let mut a = k1;
    let mut b = k1;
    for _ in 1..=m {
        a = push(&mut nodes, DagNode::Op(Func::Theta, vec![a]));
        b = push(&mut nodes, DagNode::Op(Func::Max, vec![a, b]));
    }
    // halvings: d[j] = B_M / 2^j
    let mut d = vec![b];
    for j in 1..=m {
        let prev = d[j - 1];
        d.push(push(&mut nodes, DagNode::Op(Func::Div, vec![prev, k2])));
    }
    let power = |nodes: &mut Vec<DagNode>, j: usize| {
        if j == 0 {
            k1
        } else {
            push(nodes, DagNode::Op(Func::Div, vec![d[m - j], d[m]]))
        }
    };
    let mut acc = power(&mut nodes, top as usize);
    for k in subs {
        let e = power(&mut nodes, k as usize);
        acc = push(&mut nodes, DagNode::Op(Func::Sub, vec![acc, e]));
    }
    DagTerm::new(nodes, acc).expect("well-formed by construction")
}

/// The canonical numeral: a constant for values up to 2, else the DAG numeral.
pub fn numeral(n: &Nat) -> Term {
    match n.to_u64().and_then(Const::from_value) {
        Some(c) => Term::Const(c),
        None => Term::Dag(std::sync::Arc::new(build_dag_term(n))),
    }
}

/// Terms over `0`, `ζ` and `Max`, used only for the walk-maximum numerals.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ZetaTerm {
    Zero,
    Zeta(Box<ZetaTerm>),
    Max(Box<ZetaTerm>, Box<ZetaTerm>),
}

impl ZetaTerm {
    fn walk(i: usize) -> ZetaTerm {
        (0..i).fold(ZetaTerm::Zero, |t, _| ZetaTerm::Zeta(Box::new(t)))
    }

    pub fn symbol_count(&self) -> usize {
        let mut n = 0;
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            n += 1;
            match t {
                ZetaTerm::Zero => {}
                ZetaTerm::Zeta(a) => stack.push(a),
                ZetaTerm::Max(a, b) => {
                    stack.push(a);
                    stack.push(b);
                }
            }
        }
        n
    }

    pub fn eval(&self, z: &ZetaInterpretation) -> u64 {
        match self {
            ZetaTerm::Zero => 0,
            ZetaTerm::Zeta(a) => z.apply(a.eval(z)),
            ZetaTerm::Max(a, b) => a.eval(z).max(b.eval(z)),
        }
    }
}

impl fmt::Display for ZetaTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZetaTerm::Zero => f.write_str("0"),
            ZetaTerm::Zeta(a) => write!(f, "zeta({a})"),
            ZetaTerm::Max(a, b) => write!(f, "max({a}, {b})"),
        }
    }
}

/// `S_n = Max[ζ(0), ζ²(0), ..., ζ^n(0)]`.
pub fn build_zeta_term(n: usize) -> ZetaTerm {
    assert!(n >= 1, "build_zeta_term needs n >= 1");
    if n == 1 {
        return ZetaTerm::Max(Box::new(ZetaTerm::walk(1)), Box::new(ZetaTerm::walk(1)));
    }
    let mut acc = ZetaTerm::walk(n);
    for i in (1..n).rev() {
        acc = ZetaTerm::Max(Box::new(ZetaTerm::walk(i)), Box::new(acc));
    }
    acc
}

/// Sizes of one numeral.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LengthReport {
    pub n: u64,
    pub symbol_count: usize,
    pub byte_count: usize,
    pub node_count: usize,
}

pub fn measure_tree(n: u64) -> LengthReport {
    let t = build_tree_term(n);
    LengthReport {
        n,
        symbol_count: t.symbol_count(),
        byte_count: crate::codec::encode_term(&t).len(),
        node_count: 0,
    }
}

pub fn measure_dag(n: u64) -> LengthReport {
    let d = build_dag_term(&Nat::from(n));
    let t = Term::Dag(std::sync::Arc::new(d));
    LengthReport {
        n,
        symbol_count: t.symbol_count(),
        byte_count: crate::codec::encode_term(&t).len(),
        node_count: t.symbol_count(),
    }
}

pub fn measure_zeta(n: u64) -> LengthReport {
    let s = build_zeta_term(n as usize).symbol_count();
    // one byte per symbol plus parentheses and commas
    LengthReport {
        n,
        symbol_count: s,
        byte_count: 3 * s,
        node_count: 0,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Observation {
    Constant(Nat),
    Varies {
        a: Nat,
        b: Nat,
        seed_a: u64,
        seed_b: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObservabilityVerdict {
    pub kind: Observation,
    pub samples: usize,
}

/// Seed of the `i`-th sample drawn from `seed`.
pub fn sample_seeds(seed: u64, samples: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples).map(|_| rng.gen()).collect()
}

/// Largest exponent a sample should cover: one per walk step plus slack.
fn walk_depth(t: &Term) -> u64 {
    match t {
        Term::App(f, args) => {
            let inner = args.iter().map(walk_depth).max().unwrap_or(0);
            inner + u64::from(*f == Func::Theta)
        }
        Term::Dag(d) => d
            .nodes()
            .iter()
            .filter(|n| matches!(n, DagNode::Op(Func::Theta, _)))
            .count() as u64,
        _ => 0,
    }
}

/// Evaluate `t` under `samples` sampled interpretations. Sampling can only
/// refute observability; agreement is evidence, not proof.
pub fn check_observable(
    t: &Term,
    samples: usize,
    seed: u64,
    strategy: Strategy,
) -> Result<ObservabilityVerdict, EvalError> {
    assert!(samples >= 2, "need at least two samples");
    let seeds = sample_seeds(seed, samples);
    let base = 32.max(4 * walk_depth(t));
    let values = par::map(strategy, &seeds, |&s| {
        let mut max_exp = base;
        let mut tries = 0;
        loop {
            let theta = ThetaInterpretation::sample(s, max_exp);
            match Semantics::standard(&theta).term_value(t) {
                Ok(v) => return Ok(v.expect("total")),
                Err(EvalError::Exhausted { .. }) if tries < 3 => {
                    tries += 1;
                    max_exp *= 4;
                }
                Err(e) => return Err(e),
            }
        }
    });
    let values: Vec<Nat> = values.into_iter().collect::<Result<_, _>>()?;
    let first = &values[0];
    let kind = match values.iter().position(|v| v != first) {
        None => Observation::Constant(first.clone()),
        Some(i) => Observation::Varies {
            a: first.clone(),
            b: values[i].clone(),
            seed_a: seeds[0],
            seed_b: seeds[i],
        },
    };
    Ok(ObservabilityVerdict { kind, samples })
}

/// The three-valued walk example: `M - Pred^3(M)` with
/// `M = Max[C2, θ(C2), θ²(C2)]`.
pub fn three_from_walk() -> Term {
    let m = Term::max(c2(), Term::max(Term::theta(c2()), Term::theta_n(c2(), 2)));
    Term::sub(m.clone(), Term::pred_n(m, 3))
}

/// A term whose value depends on the interpretation.
pub fn varying_example() -> Term {
    Term::max(Term::theta(c1()), c2())
}
