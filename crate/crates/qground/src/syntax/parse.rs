//! Recursive-descent parser for the text grammar.
//!
//! ```text
//! formula := disj [ "->" formula ]
//! disj    := conj { "|" conj }
//! conj    := unary { "&" unary }
//! unary   := "~" unary | quant | "(" formula ")" | atom
//! quant   := ("forall" | "exists") var [ "<=" term ] "." formula
//! atom    := term ("=" | "<=" | "!=" | "<") term | Rec "(" term {"," term} ")"
//! term    := factor { ("-" | "÷" | "/") factor }
//! factor  := C0 | C1 | C2 | vK | "(" term ")" | name [ "^" N ] "(" term {"," term} ")"
//!          | "dag{" records "}"
//! ```
//! Unicode spellings `¬ ∧ ∨ ⇒ ∀ ∃ ≤ ≠ θ` are accepted, as are `[ ]` and
//! `{ }` as application brackets. `max` takes two or more arguments
//! (right-nested); `pred`, `half` and `theta` accept an iteration count.

use std::sync::Arc;

use super::ext::{ExtFormula, ExtTerm};
use super::{DagTerm, Formula, Func, Recognizer, Rel, Term};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("syntax error at {pos}: {msg}")]
pub struct ParseError {
    /// Character offset into the input.
    pub pos: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(u64),
    DagText(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Comma,
    Dot,
    Caret,
    Minus,
    Divide,
    Eq,
    Leq,
    Lt,
    Neq,
    Not,
    And,
    Or,
    Implies,
    ForAll,
    Exists,
    Theta,
    Eof,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Num(n) => format!("`{n}`"),
        Tok::DagText(_) => "DAG literal".into(),
        Tok::Eof => "end of input".into(),
        other => format!("{other:?}"),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let next = chars.get(i + 1).copied();
        let tok = match c {
            _ if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            ',' => Tok::Comma,
            '.' => Tok::Dot,
            '^' => Tok::Caret,
            '÷' | '/' => Tok::Divide,
            '~' | '¬' => Tok::Not,
            '&' | '∧' => Tok::And,
            '|' | '∨' => Tok::Or,
            '⇒' => Tok::Implies,
            '∀' => Tok::ForAll,
            '∃' => Tok::Exists,
            'θ' => Tok::Theta,
            '≤' => Tok::Leq,
            '≠' => Tok::Neq,
            '−' => Tok::Minus,
            '-' if next == Some('>') => {
                i += 1;
                Tok::Implies
            }
            '-' => Tok::Minus,
            '=' if next == Some('>') => {
                i += 1;
                Tok::Implies
            }
            '=' => Tok::Eq,
            '<' if next == Some('=') => {
                i += 1;
                Tok::Leq
            }
            '<' => Tok::Lt,
            '!' if next == Some('=') => {
                i += 1;
                Tok::Neq
            }
            _ if c.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let s: String = chars[i..j].iter().collect();
                let n = s.parse().map_err(|_| ParseError {
                    pos: start,
                    msg: format!("number `{s}` out of range"),
                })?;
                i = j - 1;
                Tok::Num(n)
            }
            _ if c.is_alphabetic() || c == '_' => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                let word: String = chars[i..j].iter().collect();
                if word == "dag" && chars.get(j) == Some(&'{') {
                    let close = chars[j..].iter().position(|&c| c == '}').ok_or(ParseError {
                        pos: j,
                        msg: "unterminated DAG literal".into(),
                    })?;
                    let body: String = chars[j + 1..j + close].iter().collect();
                    out.push((Tok::DagText(body), start));
                    i = j + close + 1;
                    continue;
                }
                i = j - 1;
                Tok::Ident(word)
            }
            _ => {
                return Err(ParseError {
                    pos: start,
                    msg: format!("unexpected character `{c}`"),
                })
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::Eof, chars.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    extended: bool,
}

type PResult<T> = Result<T, ParseError>;

fn var_index(word: &str) -> Option<u32> {
    let digits = word.strip_prefix('v')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

fn const_index(word: &str) -> Option<u32> {
    let digits = word.strip_prefix('C')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

impl Parser {
    fn new(text: &str, extended: bool) -> PResult<Parser> {
        Ok(Parser {
            toks: lex(text)?,
            at: 0,
            extended,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> PResult<T> {
        Err(ParseError {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn expect(&mut self, t: Tok, what: &str) -> PResult<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected {what}, found {}", describe(self.peek())))
        }
    }

    fn finish(&self) -> PResult<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.err(format!("unexpected {}", describe(self.peek())))
        }
    }

    fn formula(&mut self) -> PResult<ExtFormula> {
        let lhs = self.disj()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let rhs = self.formula()?;
            return Ok(ExtFormula::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn disj(&mut self) -> PResult<ExtFormula> {
        let mut acc = self.conj()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.conj()?;
            acc = ExtFormula::Or(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn conj(&mut self) -> PResult<ExtFormula> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            let rhs = self.unary()?;
            acc = ExtFormula::And(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn unary(&mut self) -> PResult<ExtFormula> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(ExtFormula::Not(Box::new(self.unary()?)))
            }
            Tok::ForAll | Tok::Exists => {
                let universal = *self.peek() == Tok::ForAll;
                self.bump();
                self.quantifier(universal)
            }
            Tok::Ident(w) if w == "forall" || w == "exists" => {
                self.bump();
                self.quantifier(w == "forall")
            }
            Tok::LParen => {
                let save = self.at;
                self.bump();
                let grouped = self.formula().and_then(|f| {
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(f)
                });
                match grouped {
                    Ok(f) if !self.continues_term() => Ok(f),
                    first => {
                        let first_err = first.err();
                        self.at = save;
                        self.atom().map_err(|e| match first_err {
                            Some(fe) if fe.pos > e.pos => fe,
                            _ => e,
                        })
                    }
                }
            }
            _ => self.atom(),
        }
    }

    /// After a parenthesized group, an operator means the group was a term.
    fn continues_term(&self) -> bool {
        matches!(
            self.peek(),
            Tok::Eq | Tok::Leq | Tok::Lt | Tok::Neq | Tok::Minus | Tok::Divide
        )
    }

    fn quantifier(&mut self, universal: bool) -> PResult<ExtFormula> {
        let v = self.var()?;
        let bound = if *self.peek() == Tok::Leq {
            self.bump();
            Some(self.term()?)
        } else {
            None
        };
        self.expect(Tok::Dot, "`.` after quantified variable")?;
        let body = self.formula()?;
        Ok(match (universal, bound) {
            (true, None) => ExtFormula::ForAll(v, Box::new(body)),
            (false, None) => ExtFormula::Exists(v, Box::new(body)),
            (true, Some(t)) => ExtFormula::ForAll(
                v,
                Box::new(ExtFormula::Implies(
                    Box::new(ExtFormula::Atom(Rel::Leq, ExtTerm::Var(v), t)),
                    Box::new(body),
                )),
            ),
            (false, Some(t)) => ExtFormula::Exists(
                v,
                Box::new(ExtFormula::And(
                    Box::new(ExtFormula::Atom(Rel::Leq, ExtTerm::Var(v), t)),
                    Box::new(body),
                )),
            ),
        })
    }

    fn var(&mut self) -> PResult<u32> {
        if let Tok::Ident(w) = self.peek() {
            if let Some(v) = var_index(w) {
                self.bump();
                return Ok(v);
            }
        }
        self.err(format!("expected a variable `vK`, found {}", describe(self.peek())))
    }

    fn atom(&mut self) -> PResult<ExtFormula> {
        if let Tok::Ident(w) = self.peek().clone() {
            let rec = match w.as_str() {
                "HilbPrf" => Some(Recognizer::HilbPrf),
                "SubstPrf" => Some(Recognizer::SubstPrf),
                _ => None,
            };
            if let Some(r) = rec {
                self.bump();
                let args = self.args()?;
                if args.len() != r.arity() {
                    return self.err(format!("{} expects {} arguments", r.name(), r.arity()));
                }
                return Ok(ExtFormula::Proves(r, args));
            }
            if self.extended && (w == "add" || w == "mult") {
                self.bump();
                let mut args = self.args()?;
                if args.len() != 3 {
                    return self.err(format!("{w} expects 3 arguments"));
                }
                let z = args.pop().unwrap();
                let y = args.pop().unwrap();
                let x = args.pop().unwrap();
                return Ok(if w == "add" {
                    ExtFormula::Add(x, y, z)
                } else {
                    ExtFormula::Mult(x, y, z)
                });
            }
        }
        let lhs = self.term()?;
        let op = self.peek().clone();
        if !matches!(op, Tok::Eq | Tok::Leq | Tok::Lt | Tok::Neq) {
            return self.err(format!("expected a relation, found {}", describe(&op)));
        }
        self.bump();
        let rhs = self.term()?;
        Ok(match op {
            Tok::Eq => ExtFormula::Atom(Rel::Eq, lhs, rhs),
            Tok::Leq => ExtFormula::Atom(Rel::Leq, lhs, rhs),
            Tok::Neq => ExtFormula::Not(Box::new(ExtFormula::Atom(Rel::Eq, lhs, rhs))),
            _ => ExtFormula::Not(Box::new(ExtFormula::Atom(Rel::Leq, rhs, lhs))),
        })
    }

    fn args(&mut self) -> PResult<Vec<ExtTerm>> {
        let close = match self.peek() {
            Tok::LParen => Tok::RParen,
            Tok::LBracket => Tok::RBracket,
            Tok::LBrace => Tok::RBrace,
            other => return self.err(format!("expected `(`, found {}", describe(other))),
        };
        self.bump();
        let mut out = vec![self.term()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            out.push(self.term()?);
        }
        self.expect(close, "closing bracket")?;
        Ok(out)
    }

    fn term(&mut self) -> PResult<ExtTerm> {
        let mut acc = self.factor()?;
        loop {
            let f = match self.peek() {
                Tok::Minus => Func::Sub,
                Tok::Divide => Func::Div,
                _ => return Ok(acc),
            };
            self.bump();
            let rhs = self.factor()?;
            acc = ExtTerm::App(f, vec![acc, rhs]);
        }
    }

    fn factor(&mut self) -> PResult<ExtTerm> {
        let start = self.pos();
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            Tok::DagText(body) => {
                self.bump();
                let d = DagTerm::parse_records(&body).map_err(|e| ParseError {
                    pos: start,
                    msg: format!("bad DAG literal: {e}"),
                })?;
                Ok(ExtTerm::Core(Term::Dag(Arc::new(d))))
            }
            Tok::Theta => {
                self.bump();
                self.application("theta", start)
            }
            Tok::Ident(w) => {
                if let Some(v) = var_index(&w) {
                    self.bump();
                    return Ok(ExtTerm::Var(v));
                }
                if let Some(k) = const_index(&w) {
                    if k > 2 && !self.extended {
                        return self.err(format!("unknown constant `{w}`"));
                    }
                    self.bump();
                    return Ok(ExtTerm::Const(k));
                }
                self.bump();
                self.application(&w.to_ascii_lowercase(), start)
            }
            other => self.err(format!("expected a term, found {}", describe(&other))),
        }
    }

    fn application(&mut self, name: &str, start: usize) -> PResult<ExtTerm> {
        let repeat = if *self.peek() == Tok::Caret {
            self.bump();
            match self.peek().clone() {
                Tok::Num(n) => {
                    self.bump();
                    n as usize
                }
                other => {
                    return self.err(format!("expected an iteration count, found {}", describe(&other)));
                }
            }
        } else {
            1
        };
        let bad = |msg: String| Err(ParseError { pos: start, msg });
        let iterable = matches!(name, "pred" | "half" | "theta");
        if repeat != 1 && !iterable {
            return bad(format!("`{name}` cannot be iterated"));
        }
        let mut args = self.args()?;
        let n = args.len();
        match name {
            "pred" | "half" | "theta" => {
                if n != 1 {
                    return bad(format!("`{name}` expects 1 argument, got {n}"));
                }
                let mut t = args.pop().unwrap();
                for _ in 0..repeat {
                    t = match name {
                        "pred" => ExtTerm::App(Func::Sub, vec![t, ExtTerm::Const(1)]),
                        "half" => ExtTerm::App(Func::Div, vec![t, ExtTerm::Const(2)]),
                        _ => ExtTerm::App(Func::Theta, vec![t]),
                    };
                }
                Ok(t)
            }
            "max" if n >= 2 => {
                let mut acc = args.pop().unwrap();
                while let Some(a) = args.pop() {
                    acc = ExtTerm::App(Func::Max, vec![a, acc]);
                }
                Ok(acc)
            }
            _ => {
                let f = match Func::from_name(name) {
                    Some(f) => f,
                    None => return bad(format!("unknown function `{name}`")),
                };
                if n != f.arity() {
                    return bad(format!("`{name}` expects {} argument(s), got {n}", f.arity()));
                }
                Ok(ExtTerm::App(f, args))
            }
        }
    }
}

fn lowered<T>(r: Result<T, super::ext::LowerError>) -> PResult<T> {
    r.map_err(|e| ParseError { pos: 0, msg: e.to_string() })
}

pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(text, false)?;
    let t = p.term()?;
    p.finish()?;
    lowered(t.lower())
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text, false)?;
    let f = p.formula()?;
    p.finish()?;
    lowered(f.lower())
}

/// Parse with extended constants `C3, C4, ...` and `add`/`mult` atoms.
pub fn parse_ext_formula(text: &str) -> Result<ExtFormula, ParseError> {
    let mut p = Parser::new(text, true)?;
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

pub fn parse_ext_term(text: &str) -> Result<ExtTerm, ParseError> {
    let mut p = Parser::new(text, true)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}
