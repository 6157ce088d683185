//! The Hilbert-style proof system: six logical schemas, modus ponens,
//! a single-pass checker, and the tooling that builds proofs.
//!
//! Conjunction, disjunction and the existential quantifier are
//! abbreviations: `A & B` is `~(A -> ~B)`, `A | B` is `~A -> B` and
//! `exists x. A` is `~forall x. ~A`. The checker compares steps after
//! expanding them.

pub mod builder;
pub mod certify;
pub mod lemmas;
pub mod schemas;
pub mod subst;

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::codec::{decode_formula, decode_proof_spans, encode_formula};
use crate::syntax::Formula;

pub use builder::{BuildError, ProofBuilder};
pub use lemmas::Lemma;
pub use certify::{certify_delta0, CertifyError};
pub use schemas::{is_logical_axiom, matches_schema, Schema};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Justification {
    Logical(Schema),
    Proper,
    /// `Mp(i, j)`: step `j` is `step_i -> this`.
    Mp(usize, usize),
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Logical(s) => write!(f, "LOG {s}"),
            Justification::Proper => f.write_str("AX"),
            Justification::Mp(i, j) => write!(f, "MP {i} {j}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub formula: Formula,
    pub justification: Justification,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Proof {
    pub steps: Vec<Step>,
}

impl Proof {
    pub fn theorem(&self) -> Option<&Formula> {
        self.steps.last().map(|s| &s.formula)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// The Gödel bytes of the step formulas.
    pub fn to_bytes(&self) -> Vec<u8> {
        crate::codec::encode_proof(self.steps.iter().map(|s| &s.formula))
    }

    /// One `k LOG s | k AX | k MP i j` line per step.
    pub fn sidecar(&self) -> String {
        self.steps
            .iter()
            .enumerate()
            .map(|(k, s)| format!("{k} {}\n", s.justification))
            .collect()
    }

    /// Reassemble a proof from its bytes and sidecar text.
    pub fn from_parts(bytes: &[u8], sidecar: &str) -> Result<Proof, ProofFileError> {
        let formulas = crate::codec::decode_proof(bytes).map_err(|e| ProofFileError(e.to_string()))?;
        let justs = parse_sidecar(sidecar)?;
        if justs.len() != formulas.len() {
            return Err(ProofFileError(format!(
                "{} steps but {} justification lines",
                formulas.len(),
                justs.len()
            )));
        }
        Ok(Proof {
            steps: formulas
                .into_iter()
                .zip(justs)
                .map(|(formula, justification)| Step { formula, justification })
                .collect(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("proof file: {0}")]
pub struct ProofFileError(pub String);

pub fn parse_sidecar(text: &str) -> Result<Vec<Justification>, ProofFileError> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = || ProofFileError(format!("sidecar line {}: `{line}`", n + 1));
        let w: Vec<&str> = line.split_whitespace().collect();
        let k: usize = w.first().and_then(|k| k.parse().ok()).ok_or_else(bad)?;
        if k != out.len() {
            return Err(ProofFileError(format!("sidecar line {}: expected step {}", n + 1, out.len())));
        }
        let j = match w[1..] {
            ["AX"] => Justification::Proper,
            ["LOG", s] => Justification::Logical(s.parse().map_err(|_| bad())?),
            ["MP", i, j] => Justification::Mp(i.parse().map_err(|_| bad())?, j.parse().map_err(|_| bad())?),
            _ => return Err(bad()),
        };
        out.push(j);
    }
    Ok(out)
}

/// A decidable set of proper axioms, recognized on the bytes of a formula.
pub trait AxiomSystem: Send + Sync {
    fn name(&self) -> &str;

    fn accepts(&self, bytes: &[u8]) -> bool;

    fn accepts_formula(&self, f: &Formula) -> bool {
        self.accepts(&encode_formula(f))
    }
}

/// A finite list of sentences, optionally with the reflection schema.
#[derive(Clone, Debug)]
pub struct AxiomSet {
    name: String,
    sentences: Vec<Formula>,
    codes: HashSet<Vec<u8>>,
    reflection: bool,
}

impl AxiomSet {
    pub fn new(name: &str, sentences: Vec<Formula>) -> AxiomSet {
        let codes = sentences.iter().map(encode_formula).collect();
        AxiomSet {
            name: name.to_string(),
            sentences,
            codes,
            reflection: false,
        }
    }

    /// Also accept every reflection instance over a Pi1 sentence.
    pub fn with_reflection(mut self) -> AxiomSet {
        self.reflection = true;
        self
    }

    pub fn sentences(&self) -> &[Formula] {
        &self.sentences
    }

    pub fn push(&mut self, f: Formula) {
        self.codes.insert(encode_formula(&f));
        self.sentences.push(f);
    }
}

impl AxiomSystem for AxiomSet {
    fn name(&self) -> &str {
        &self.name
    }

    fn accepts(&self, bytes: &[u8]) -> bool {
        if self.codes.contains(bytes) {
            return true;
        }
        self.reflection
            && decode_formula(bytes)
                .ok()
                .is_some_and(|f| crate::axioms::as_group2_instance(&f).is_some())
    }
}

/// `base` plus one added axiom.
pub struct WithAxiom<'a> {
    pub base: &'a dyn AxiomSystem,
    pub added: Vec<u8>,
}

impl AxiomSystem for WithAxiom<'_> {
    fn name(&self) -> &str {
        self.base.name()
    }

    fn accepts(&self, bytes: &[u8]) -> bool {
        bytes == self.added.as_slice() || self.base.accepts(bytes)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Valid(Formula),
    Invalid { step: usize, reason: String },
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid(_))
    }
}

fn invalid(step: usize, reason: impl Into<String>) -> Verdict {
    Verdict::Invalid {
        step,
        reason: reason.into(),
    }
}

fn is_mp(keys: &[Formula], i: usize, j: usize, current: &Formula) -> bool {
    matches!(&keys[j], Formula::Implies(a, b) if **a == keys[i] && **b == *current)
}

/// Check a proof whose steps carry their justifications.
pub fn check_proof(p: &Proof, alpha: &dyn AxiomSystem) -> Verdict {
    if p.steps.is_empty() {
        return invalid(0, "empty proof");
    }
    let mut keys: Vec<Formula> = Vec::with_capacity(p.steps.len());
    for (k, step) in p.steps.iter().enumerate() {
        let key = step.formula.desugar();
        let ok = match step.justification {
            Justification::Logical(s) => matches_schema(&key, s),
            Justification::Proper => alpha.accepts_formula(&step.formula),
            Justification::Mp(i, j) => i < k && j < k && is_mp(&keys, i, j, &key),
        };
        if !ok {
            return invalid(k, format!("step does not follow by {}", step.justification));
        }
        keys.push(key);
    }
    Verdict::Valid(p.steps.last().unwrap().formula.clone())
}

/// Check a bare byte stream, inferring each step's justification.
pub fn check_proof_bytes(bytes: &[u8], alpha: &dyn AxiomSystem) -> (Verdict, Vec<Justification>) {
    let spans = match decode_proof_spans(bytes) {
        Ok(s) => s,
        Err(e) => return (invalid(0, e.to_string()), Vec::new()),
    };
    if spans.is_empty() {
        return (invalid(0, "empty proof"), Vec::new());
    }
    let mut seen: HashMap<Formula, usize> = HashMap::new();
    // consequent -> [(antecedent, index of the implication)]
    let mut implications: HashMap<Formula, Vec<(Formula, usize)>> = HashMap::new();
    let mut justs = Vec::with_capacity(spans.len());
    for (k, (formula, range)) in spans.iter().enumerate() {
        let key = formula.desugar();
        let just = if alpha.accepts(&bytes[range.clone()]) {
            Some(Justification::Proper)
        } else if let Some(s) = is_logical_axiom(&key) {
            Some(Justification::Logical(s))
        } else {
            implications.get(&key).and_then(|cands| {
                cands
                    .iter()
                    .find_map(|(a, j)| seen.get(a).map(|&i| Justification::Mp(i, *j)))
            })
        };
        let Some(just) = just else {
            return (invalid(k, "not an axiom and no modus ponens applies"), justs);
        };
        justs.push(just);
        if let Formula::Implies(a, b) = &key {
            implications.entry((**b).clone()).or_default().push(((**a).clone(), k));
        }
        seen.entry(key).or_insert(k);
    }
    (Verdict::Valid(spans.last().unwrap().0.clone()), justs)
}
