//! The axiom groups: constants and walk axioms (group 0), the finite base
//! S* (group 1), reflection instances (group 2), the diagonal consistency
//! sentence (group 3) and the optional power-difference shortcut pack.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use crate::classes::{classify, is_simple_pi1, FormulaClass};
use crate::codec::{encode_formula, godel_number};
use crate::encoders::{build_e, numeral};
use crate::kernel::subst::diagonalize;
use crate::kernel::{AxiomSet, AxiomSystem};
use crate::syntax::{c0, c1, c2, parse_formula, var, Formula, Recognizer, Term};
use crate::Nat;

/// Variables used by the generated axioms. They sit well above the indices
/// user formulas normally use, so instantiating an axiom with a user
/// variable never captures.
pub const AX_X: u32 = 100;
pub const AX_Y: u32 = 101;
pub const AX_Z: u32 = 102;

fn power(x: Term) -> Formula {
    Formula::or(
        Formula::eq(x.clone(), c1()),
        Formula::neq(Term::log(x.clone()), Term::log(Term::pred(x))),
    )
}

/// Group 0 in order: start, walk1..walk4, halfax.
pub fn group0() -> Vec<(&'static str, Formula)> {
    let x = var(AX_X);
    let y = var(AX_Y);
    let between = Formula::forall(
        AX_X,
        Formula::not(Formula::and(
            Formula::not(Formula::leq(x.clone(), c0())),
            Formula::not(Formula::leq(c1(), x.clone())),
        )),
    );
    let start = Formula::and_all([
        Formula::eq(Term::pred(c0()), c0()),
        Formula::neq(c1(), c0()),
        Formula::eq(Term::pred(c1()), c0()),
        Formula::eq(Term::pred(c2()), c1()),
        between,
    ])
    .unwrap();
    let tx = Term::theta(x.clone());
    let walk1 = Formula::forall(AX_X, Formula::implies(power(x.clone()), power(tx.clone())));
    let walk2 = Formula::forall(AX_X, Formula::neq(tx.clone(), c1()));
    let walk3 = Formula::forall_many(
        &[AX_X, AX_Y],
        Formula::implies(
            Formula::and(Formula::neq(x.clone(), y.clone()), power(x.clone())),
            Formula::neq(tx.clone(), Term::theta(y)),
        ),
    );
    let walk4 = Formula::forall(
        AX_X,
        Formula::implies(Formula::not(power(x.clone())), Formula::eq(tx, c0())),
    );
    let halfax = Formula::forall(
        AX_X,
        Formula::implies(
            Formula::and(power(x.clone()), Formula::leq(c2(), x.clone())),
            Formula::eq(Term::div(x.clone(), Term::half(x)), c2()),
        ),
    );
    vec![
        ("start", start),
        ("walk1", walk1),
        ("walk2", walk2),
        ("walk3", walk3),
        ("walk4", walk4),
        ("halfax", halfax),
    ]
}

/// S* as `(name, text)`; `x`, `y`, `z` stand for the reserved axiom variables.
const GROUP1_TEXT: &[(&str, &str)] = &[
    ("eq_refl", "forall x. x = x"),
    ("eq_sym", "forall x. forall y. x = y -> y = x"),
    ("eq_trans", "forall x. forall y. forall z. x = y -> (y = z -> x = z)"),
    ("le_zero", "forall x. C0 <= x"),
    ("le_total", "forall x. forall y. x <= y | y <= x"),
    ("le_antisym", "forall x. forall y. x <= y -> (y <= x -> x = y)"),
    ("le_trans", "forall x. forall y. forall z. x <= y -> (y <= z -> x <= z)"),
    ("le_discrete", "forall x. forall y. x <= y -> (x = y | x <= y - C1)"),
    ("le_sub", "forall x. forall y. x <= y -> x - y = C0"),
    ("sub_le", "forall x. forall y. x - y = C0 -> x <= y"),
    ("cong_sub_l", "forall x. forall y. forall z. x = y -> x - z = y - z"),
    ("cong_sub_r", "forall x. forall y. forall z. x = y -> z - x = z - y"),
    ("cong_div_l", "forall x. forall y. forall z. x = y -> div(x, z) = div(y, z)"),
    ("cong_div_r", "forall x. forall y. forall z. x = y -> div(z, x) = div(z, y)"),
    ("cong_max_l", "forall x. forall y. forall z. x = y -> max(x, z) = max(y, z)"),
    ("cong_max_r", "forall x. forall y. forall z. x = y -> max(z, x) = max(z, y)"),
    ("cong_root_l", "forall x. forall y. forall z. x = y -> root(x, z) = root(y, z)"),
    ("cong_root_r", "forall x. forall y. forall z. x = y -> root(z, x) = root(z, y)"),
    ("cong_count_l", "forall x. forall y. forall z. x = y -> count(x, z) = count(y, z)"),
    ("cong_count_r", "forall x. forall y. forall z. x = y -> count(z, x) = count(z, y)"),
    ("cong_log", "forall x. forall y. x = y -> log(x) = log(y)"),
    ("cong_le_l", "forall x. forall y. forall z. x = y -> (x <= z -> y <= z)"),
    ("cong_le_r", "forall x. forall y. forall z. x = y -> (z <= x -> z <= y)"),
    ("sub_zero", "forall x. x - C0 = x"),
    ("sub_step", "forall x. forall y. C1 <= y -> x - y = (x - C1) - (y - C1)"),
    ("zero_sub", "forall y. C0 - y = C0"),
    ("div_zero", "forall x. div(x, C0) = C0"),
    ("div_small", "forall x. forall y. y != C0 -> (~(y <= x) -> div(x, y) = C0)"),
    (
        "div_step",
        "forall x. forall y. y != C0 -> (y <= x -> (div(x, y) != C0 & div(x, y) - C1 = div(x - y, y)))",
    ),
    ("pred_inj", "forall x. forall y. x != C0 -> (y != C0 -> (x - C1 = y - C1 -> x = y))"),
    ("max_right", "forall x. forall y. x <= y -> max(x, y) = y"),
    ("max_left", "forall x. forall y. ~(x <= y) -> max(x, y) = x"),
    ("log_zero", "log(C0) = C0"),
    ("log_one", "log(C1) = C0"),
    ("log_step", "forall x. C2 <= x -> (log(x) != C0 & log(x) - C1 = log(div(x, C2)))"),
    ("root_zero", "forall x. root(x, C0) = C0"),
    ("root_one", "forall x. root(x, C1) = x"),
    ("root_le", "forall x. forall y. C1 <= y -> root(x, y) <= x"),
    ("root_pos", "forall x. forall y. C1 <= x -> (C1 <= y -> C1 <= root(x, y))"),
    ("root_half", "forall x. forall y. C2 <= x -> (C2 <= y -> root(x, y) <= div(x, C2))"),
    ("count_zero", "forall x. count(x, C0) = C0"),
    (
        "count_step",
        "forall x. forall y. C1 <= y -> (b <= count(x, y) & count(x, y) - b = count(div(x, C2), y - C1))",
    ),
];

fn expand_placeholders(text: &str) -> String {
    let low_bit = "((x - div(x, C2)) - div(x, C2))";
    let mut out = String::new();
    for (i, ch) in text.char_indices() {
        let boundary = |j: Option<char>| j.is_none_or(|c| !c.is_alphanumeric());
        let before = text[..i].chars().next_back();
        let after = text[i + ch.len_utf8()..].chars().next();
        if matches!(ch, 'x' | 'y' | 'z' | 'b') && boundary(before) && boundary(after) {
            match ch {
                'x' => out.push_str(&format!("v{AX_X}")),
                'y' => out.push_str(&format!("v{AX_Y}")),
                'z' => out.push_str(&format!("v{AX_Z}")),
                _ => out.push_str(&expand_placeholders(low_bit)),
            }
        } else {
            out.push(ch);
        }
    }
    out
}

/// The concrete S*, in a fixed order.
pub fn group1() -> &'static [(&'static str, Formula)] {
    static CELL: OnceLock<Vec<(&'static str, Formula)>> = OnceLock::new();
    CELL.get_or_init(|| {
        GROUP1_TEXT
            .iter()
            .map(|(name, text)| {
                let f = parse_formula(&expand_placeholders(text))
                    .unwrap_or_else(|e| panic!("S* axiom {name}: {e}"));
                (*name, f)
            })
            .collect()
    })
}

/// Look up a group-0 or group-1 axiom by name.
pub fn named(name: &str) -> &'static Formula {
    static CELL: OnceLock<HashMap<&'static str, Formula>> = OnceLock::new();
    let map = CELL.get_or_init(|| {
        group0()
            .into_iter()
            .chain(group1().iter().cloned())
            .collect()
    });
    map.get(name).unwrap_or_else(|| panic!("no axiom named {name}"))
}

/// `E_j - E_{j-1} = E_{j-1}` for `j = 1..=max_j`.
pub fn shortcut_pack(max_j: usize) -> Vec<Formula> {
    (1..=max_j)
        .map(|j| Formula::eq(Term::sub(build_e(j), build_e(j - 1)), build_e(j - 1)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AxiomError {
    #[error("reflection needs a Pi1 sentence, got {0}")]
    NotPi1(FormulaClass),
    #[error("formula must be a sentence")]
    NotSentence,
}

/// `forall y. HilbPrf(<phi>, y) -> phi`.
pub fn group2_instance(phi: &Formula) -> Result<Formula, AxiomError> {
    if !phi.is_sentence() {
        return Err(AxiomError::NotSentence);
    }
    match classify(phi) {
        FormulaClass::Pi(1) => {}
        other => return Err(AxiomError::NotPi1(other)),
    }
    let code = Nat::from_big(godel_number(&encode_formula(phi)));
    let y = fresh_var(phi);
    Ok(Formula::forall(
        y,
        Formula::implies(
            Formula::Proves(Recognizer::HilbPrf, vec![numeral(&code), var(y)]),
            phi.clone(),
        ),
    ))
}

fn fresh_var(phi: &Formula) -> u32 {
    phi.all_vars().into_iter().max().map_or(0, |v| v + 1)
}

/// Recognize a reflection instance, returning its reflected sentence.
pub fn as_group2_instance(f: &Formula) -> Option<&Formula> {
    let Formula::ForAll(y, body) = f else { return None };
    let Formula::Implies(prem, phi) = body.as_ref() else { return None };
    let Formula::Proves(Recognizer::HilbPrf, args) = prem.as_ref() else {
        return None;
    };
    if args[1] != var(*y) || phi.all_vars().contains(y) {
        return None;
    }
    let value = crate::semantics::eval_theta_free(&args[0]).ok()?;
    if args[0] != numeral(&value) || classify(phi) != FormulaClass::Pi(1) || !phi.is_sentence() {
        return None;
    }
    (Nat::from_big(godel_number(&encode_formula(phi))) == value).then_some(phi.as_ref())
}

/// The open formula `forall p. ~SubstPrf(g, <0 = 1>, p)` with `g` free.
pub fn consistency_template() -> (u32, Formula) {
    let (g, p) = (0, 1);
    let falsum = Nat::from_big(godel_number(&encode_formula(&Formula::eq(c0(), c1()))));
    let body = Formula::forall(
        p,
        Formula::not(Formula::Proves(
            Recognizer::SubstPrf,
            vec![var(g), numeral(&falsum), var(p)],
        )),
    );
    (g, body)
}

/// The diagonal sentence asserting that no proof of `0 = 1` exists from the
/// union with itself.
pub fn group3() -> Formula {
    static CELL: OnceLock<Formula> = OnceLock::new();
    CELL.get_or_init(|| {
        let (_, gamma) = consistency_template();
        diagonalize(&gamma).expect("template has one free variable")
    })
    .clone()
}

/// What an axiom-spec file asks for.
#[derive(Clone, Debug, Default)]
pub struct AxiomSpec {
    pub group0: bool,
    pub group1: bool,
    pub group2: bool,
    pub group3: bool,
    pub shortcut: usize,
    pub extra: Vec<Formula>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {msg}")]
pub struct SpecError {
    pub line: usize,
    pub msg: String,
}

impl AxiomSpec {
    /// Group 0 and S*.
    pub fn base() -> AxiomSpec {
        AxiomSpec {
            group0: true,
            group1: true,
            ..AxiomSpec::default()
        }
    }

    /// Lines: `include group0|group1|group2|group3`, `include shortcut N`,
    /// `axiom <formula>`; `#` starts a comment.
    pub fn parse(text: &str) -> Result<AxiomSpec, SpecError> {
        let mut spec = AxiomSpec::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| SpecError { line: i + 1, msg };
            let (word, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let rest = rest.trim();
            match word {
                "include" => {
                    let mut it = rest.split_whitespace();
                    match (it.next(), it.next()) {
                        (Some("group0"), None) => spec.group0 = true,
                        (Some("group1"), None) => spec.group1 = true,
                        (Some("group2"), None) => spec.group2 = true,
                        (Some("group3"), None) => spec.group3 = true,
                        (Some("shortcut"), Some(n)) => {
                            spec.shortcut = n.parse().map_err(|_| err(format!("bad count `{n}`")))?
                        }
                        _ => return Err(err(format!("unknown include `{rest}`"))),
                    }
                }
                "axiom" => spec
                    .extra
                    .push(parse_formula(rest).map_err(|e| err(e.to_string()))?),
                _ => return Err(err(format!("unknown directive `{word}`"))),
            }
        }
        Ok(spec)
    }

    /// The finite part of the system, in a fixed order.
    pub fn sentences(&self) -> Vec<Formula> {
        let mut out = Vec::new();
        if self.group0 {
            out.extend(group0().into_iter().map(|(_, f)| f));
        }
        if self.group1 {
            out.extend(group1().iter().map(|(_, f)| f.clone()));
        }
        out.extend(shortcut_pack(self.shortcut));
        if self.group3 {
            out.push(group3());
        }
        out.extend(self.extra.iter().cloned());
        out
    }

    pub fn build(&self) -> Arc<dyn AxiomSystem> {
        let mut set = AxiomSet::new("spec", self.sentences());
        if self.group2 {
            set = set.with_reflection();
        }
        Arc::new(set)
    }
}

/// True when every group-1 axiom is a simple Pi1 sentence.
pub fn group1_is_simple() -> bool {
    group1().iter().all(|(_, f)| is_simple_pi1(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{eval_formula, ThetaInterpretation};

    #[test]
    fn group1_parses_and_is_simple() {
        assert!(group1().len() >= 40);
        assert!(group1_is_simple());
        let cs = named("count_step").to_string();
        assert!(cs.contains("sub(sub(v100, div(v100, C2)), div(v100, C2))"), "{cs}");
    }

    #[test]
    fn group1_true_on_small_domain() {
        let s = ThetaInterpretation::doubling();
        let bound = Nat::from(24);
        for (name, f) in group1() {
            assert!(eval_formula(f, &s, Some(&bound)).unwrap(), "{name}");
        }
    }

    #[test]
    fn group0_shapes() {
        let g = group0();
        assert_eq!(g.len(), 6);
        assert_eq!(g[2].1.to_string(), "forall v100. ~theta(v100) = C1");
        let s = ThetaInterpretation::doubling();
        let bound = Nat::from(40);
        for (name, f) in &g {
            assert!(eval_formula(f, &s, Some(&bound)).unwrap(), "{name}");
        }
    }

    #[test]
    fn shortcut_sentences() {
        let pack = shortcut_pack(3);
        assert_eq!(pack[2], Formula::eq(Term::sub(build_e(3), build_e(2)), build_e(2)));
        for seed in 0..50 {
            let s = ThetaInterpretation::sample(seed, 16);
            for f in &pack {
                assert!(eval_formula(f, &s, None).unwrap());
            }
        }
    }

    #[test]
    fn reflection_instances() {
        let phi = parse_formula("forall v0. C0 <= v0").unwrap();
        let inst = group2_instance(&phi).unwrap();
        let Formula::ForAll(_, body) = &inst else { panic!() };
        let Formula::Implies(prem, _) = body.as_ref() else { panic!() };
        let Formula::Proves(_, args) = prem.as_ref() else { panic!() };
        let expected = Nat::from_big(godel_number(&encode_formula(&phi)));
        assert_eq!(crate::semantics::eval_theta_free(&args[0]).unwrap(), expected);
        assert_eq!(as_group2_instance(&inst), Some(&phi));
        assert!(group2_instance(&parse_formula("C0 = C0").unwrap()).is_err());
    }

    #[test]
    fn spec_file() {
        let spec = AxiomSpec::parse("include group0\ninclude shortcut 2 # pack\naxiom C0 = C0\n").unwrap();
        assert!(spec.group0 && !spec.group1);
        assert_eq!(spec.sentences().len(), 6 + 2 + 1);
        assert_eq!(AxiomSpec::parse("bogus").unwrap_err().line, 1);
    }
}
