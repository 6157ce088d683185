//! Finite-model probes: breaking points, the planted contradiction proof
//! and the proof-length report built on it.

mod search;

pub use search::{exhaustive_proof_search, SearchError, SearchLimits, SearchStats};

use std::collections::BTreeSet;

use crate::axioms::{group0, group1, named, shortcut_pack};
use crate::classes::{classify, FormulaClass};
use crate::codec::bit_length;
use crate::encoders::build_tree_term;
use crate::kernel::{check_proof, AxiomSet, BuildError, Lemma, Proof, ProofBuilder, Verdict};
use crate::par::{self, Strategy};
use crate::semantics::{EvalError, ModelSpec, Semantics, ThetaInterpretation, ThetaMode};
use crate::syntax::{c0, c1, var, Formula, Func, Term};
use crate::Nat;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProbeError {
    #[error("expected a Pi1 sentence with one outer universal, got {0}")]
    NotSingleUniversal(FormulaClass),
    #[error("evaluation failed at x = {x}: {err}")]
    Eval { x: u64, err: EvalError },
    #[error("K must exceed 2, got {0}")]
    KTooSmall(u64),
    #[error("proof construction failed: {0}")]
    Build(String),
}

impl From<BuildError> for ProbeError {
    fn from(e: BuildError) -> Self {
        ProbeError::Build(e.to_string())
    }
}

/// The domain `[0, 2^d)` with a walk interpretation restricted to it.
#[derive(Clone, Debug)]
pub struct FiniteModel {
    pub d: u32,
    pub mode: ThetaMode,
    pub sigma: ThetaInterpretation,
}

impl FiniteModel {
    pub fn new(d: u32, mode: ThetaMode, sigma: ThetaInterpretation) -> FiniteModel {
        FiniteModel { d, mode, sigma }
    }

    pub fn spec(&self) -> ModelSpec {
        ModelSpec { bits: self.d, mode: self.mode }
    }

    pub fn semantics(&self) -> Semantics<'_> {
        Semantics::finite(&self.sigma, self.spec())
    }

    pub fn size(&self) -> Nat {
        Nat::pow2(self.d as u64)
    }
}

/// The least falsifying instance of a universal sentence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BreakingPoint {
    pub k: u64,
    /// Atom-by-atom values of the body at `k`.
    pub witness_false: String,
    /// Number of instances known true below `k`.
    pub bound_checked: u64,
}

fn split_universal(phi: &Formula) -> Result<(u32, &Formula), ProbeError> {
    let class = classify(phi);
    match phi {
        Formula::ForAll(v, body) if phi.is_sentence() && class.is_pi(1) && body.free_vars().len() <= 1 => {
            Ok((*v, body))
        }
        _ => Err(ProbeError::NotSingleUniversal(class)),
    }
}

fn trace_at(sem: &Semantics, body: &Formula, v: u32, k: u64) -> String {
    let env = [(v, Nat::from(k))];
    let mut parts = vec![format!("v{v} := {k}")];
    let mut atoms = Vec::new();
    collect_atoms(body, &mut atoms);
    for a in atoms {
        let Formula::Atom(_, x, y) = a else { continue };
        let show = |t: &Term| match sem.term_value_in(t, &env) {
            Ok(Some(n)) => n.to_string(),
            Ok(None) => "undefined".to_string(),
            Err(_) => "?".to_string(),
        };
        let truth = sem.formula_value_in(a, &env).map(|b| b.to_string()).unwrap_or_else(|e| e.to_string());
        parts.push(format!("{a} : {} vs {} -> {truth}", show(x), show(y)));
    }
    parts.push("body -> false".to_string());
    parts.join("; ")
}

fn collect_atoms<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
    match f {
        Formula::Atom(..) => out.push(f),
        Formula::Proves(..) => {}
        Formula::Not(a) | Formula::ForAll(_, a) | Formula::Exists(_, a) => collect_atoms(a, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            collect_atoms(a, out);
            collect_atoms(b, out);
        }
    }
}

/// Scan `x = 0, 1, ..., bound - 1` for the first false instance of the body.
pub fn find_breaking_point(
    phi: &Formula,
    bound: u64,
    sem: &Semantics,
) -> Result<Option<BreakingPoint>, ProbeError> {
    let (v, body) = split_universal(phi)?;
    let eval = sem
        .instance_evaluator(body, v)
        .map_err(|err| ProbeError::Eval { x: 0, err })?;
    let hit = par::find_first(sem.strategy, 0..bound, |x| match eval(&Nat::from(x)) {
        Ok(true) => None,
        Ok(false) => Some(Ok(())),
        Err(e) => Some(Err(e)),
    });
    match hit {
        None => Ok(None),
        Some((x, Err(err))) => Err(ProbeError::Eval { x, err }),
        Some((k, Ok(()))) => Ok(Some(BreakingPoint {
            k,
            witness_false: trace_at(sem, body, v, k),
            bound_checked: k,
        })),
    }
}

/// `forall x. ~(x = T_K)`, false exactly at `K`.
pub fn planted_sentence(k: u64) -> Formula {
    Formula::forall(0, Formula::neq(var(0), build_tree_term(k)))
}

/// Group 0, S* and the planted sentence.
pub fn planted_system(k: u64) -> AxiomSet {
    let mut sentences: Vec<Formula> = group0().into_iter().map(|(_, f)| f).collect();
    sentences.extend(group1().iter().map(|(_, f)| f.clone()));
    sentences.push(planted_sentence(k));
    AxiomSet::new("planted", sentences)
}

/// A proof of `C0 = C1` from [`planted_system`]: reflexivity at `T_K`
/// against the planted sentence's instance at `T_K`.
pub fn canonical_contradiction_proof(k: u64) -> Result<Proof, ProbeError> {
    if k <= 2 {
        return Err(ProbeError::KTooSmall(k));
    }
    let t = build_tree_term(k);
    let refl = Formula::eq(t.clone(), t.clone());
    let mut b = ProofBuilder::new();
    let psi = b.proper(&planted_sentence(k));
    let not_refl = b.inst(psi, &t)?;
    let eq = b.proper(named("eq_refl"));
    let refl_line = b.inst(eq, &t)?;
    let efq = b.lemma(Lemma::Efq, &[refl, Formula::eq(c0(), c1())]);
    let imp = b.mp(not_refl, efq)?;
    let goal = b.mp(refl_line, imp)?;
    Ok(b.finish(goal))
}

fn walk_depth(t: &Term) -> Option<usize> {
    match t {
        Term::App(Func::Theta, args) => walk_depth(&args[0]).map(|d| d + 1),
        _ if *t == c1() => Some(0),
        _ => None,
    }
}

fn walk_positions(t: &Term, out: &mut BTreeSet<usize>) {
    if let Some(d) = walk_depth(t) {
        out.insert(d);
    }
    if let Term::App(_, args) = t {
        args.iter().for_each(|a| walk_positions(a, out));
    }
}

/// Distinct walk terms `theta^i(C1)`, `i >= 0`, occurring in the proof:
/// each names its own power of two.
pub fn distinct_powers(p: &Proof) -> usize {
    let mut seen = BTreeSet::new();
    for s in &p.steps {
        s.formula.for_each_term(&mut |t| walk_positions(t, &mut seen));
    }
    seen.len()
}

pub const EVIDENCE_LABEL: &str = "upper-bound evidence only";

/// One line of the length report.
#[derive(Clone, Debug)]
pub struct ProbeRow {
    pub k: u64,
    pub log2_k: f64,
    pub proof_bytes: usize,
    /// `(1/6) * bit_length(P)`, equal to the byte count.
    pub rhs: f64,
    pub margin: f64,
    pub valid: bool,
    pub distinct_powers: usize,
    pub steps: usize,
}

impl ProbeRow {
    /// `log2 K < (1/6) log2 P` with `log2 P` read as the bit length of `P`.
    pub fn holds(&self) -> bool {
        self.valid && self.margin > 0.0
    }

    pub fn verdict(&self) -> &'static str {
        match (self.valid, self.holds()) {
            (false, _) => "invalid-proof",
            (true, true) => "holds",
            (true, false) => "fails",
        }
    }
}

pub fn probe_one(k: u64) -> Result<ProbeRow, ProbeError> {
    let p = canonical_contradiction_proof(k)?;
    let bytes = p.to_bytes();
    let valid = matches!(check_proof(&p, &planted_system(k)), Verdict::Valid(ref f) if *f == Formula::eq(c0(), c1()));
    let log2_k = (k as f64).log2();
    let rhs = bit_length(&bytes) as f64 / 6.0;
    Ok(ProbeRow {
        k,
        log2_k,
        proof_bytes: bytes.len(),
        rhs,
        margin: rhs - log2_k,
        valid,
        distinct_powers: distinct_powers(&p),
        steps: p.len(),
    })
}

/// Rows in input order; a failing `K` yields its error and the rest continue.
pub fn probe_conjecture(ks: &[u64], strategy: Strategy) -> Vec<(u64, Result<ProbeRow, ProbeError>)> {
    par::map(strategy, ks, |&k| (k, probe_one(k)))
}

pub const PROBE_HEADER: &str = "K\tlog2K\tproofBytes\trhs\tmargin\tverdict";

pub fn probe_tsv(rows: &[(u64, Result<ProbeRow, ProbeError>)]) -> String {
    let mut out = format!("# {EVIDENCE_LABEL}: canonical proofs bound the minimal proof length from above\n");
    out.push_str(PROBE_HEADER);
    out.push('\n');
    for (k, r) in rows {
        match r {
            Ok(r) => out.push_str(&format!(
                "{}\t{:.4}\t{}\t{:.1}\t{:.4}\t{}\n",
                r.k,
                r.log2_k,
                r.proof_bytes,
                r.rhs,
                r.margin,
                r.verdict()
            )),
            Err(e) => out.push_str(&format!("{k}\t-\t-\t-\t-\terror: {e}\n")),
        }
    }
    out
}

/// Truth of one axiom in one finite model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomTruth {
    pub name: String,
    pub d: u32,
    pub mode: ThetaMode,
    pub holds: Result<bool, String>,
}

/// Every group-0, S* and shortcut axiom evaluated on `[0, 2^d)` for each
/// `d` and walk treatment.
pub fn axiom_truth_table(
    ds: &[u32],
    sigma: &ThetaInterpretation,
    shortcut: usize,
    strategy: Strategy,
) -> Vec<AxiomTruth> {
    let mut axioms: Vec<(String, Formula)> = group0().into_iter().map(|(n, f)| (n.to_string(), f)).collect();
    axioms.extend(group1().iter().map(|(n, f)| (n.to_string(), f.clone())));
    axioms.extend(
        shortcut_pack(shortcut)
            .into_iter()
            .enumerate()
            .map(|(i, f)| (format!("shortcut{}", i + 1), f)),
    );
    let mut jobs = Vec::new();
    for &d in ds {
        for mode in [ThetaMode::PartialBlocks, ThetaMode::TotalClipped] {
            for (name, f) in &axioms {
                jobs.push((name.clone(), f.clone(), d, mode));
            }
        }
    }
    par::map(strategy, &jobs, |(name, f, d, mode)| {
        let sem = Semantics::finite(sigma, ModelSpec { bits: *d, mode: *mode }).with_strategy(Strategy::Sequential);
        AxiomTruth {
            name: name.clone(),
            d: *d,
            mode: *mode,
            holds: sem.formula_value(f).map_err(|e| e.to_string()),
        }
    })
}
