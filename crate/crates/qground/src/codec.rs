//! Byte-style Gödel codec. Every object is a string of 6-bit bytes: symbol
//! codes live in `[32, 63]`, variable digits in `[0, 31]`. Serialization is
//! fully parenthesized prefix form.

use num_bigint::BigUint;

use crate::syntax::{Const, DagNode, DagTerm, Formula, Func, Recognizer, Rel, Term};

/// The frozen symbol table. Changing a code is a format version bump.
pub mod code {
    pub const LPAREN: u8 = 32;
    pub const RPAREN: u8 = 33;
    pub const COMMA: u8 = 34;
    pub const DOT: u8 = 35;
    pub const NOT: u8 = 36;
    pub const AND: u8 = 37;
    pub const OR: u8 = 38;
    pub const IMPLIES: u8 = 39;
    pub const FORALL: u8 = 40;
    pub const EXISTS: u8 = 41;
    pub const EQ: u8 = 42;
    pub const LEQ: u8 = 43;
    pub const C0: u8 = 44;
    pub const C1: u8 = 45;
    pub const C2: u8 = 46;
    pub const VAR: u8 = 47;
    pub const SUB: u8 = 48;
    pub const DIV: u8 = 49;
    pub const MAX: u8 = 50;
    pub const ROOT: u8 = 51;
    pub const LOG: u8 = 52;
    pub const COUNT: u8 = 53;
    pub const THETA: u8 = 54;
    /// Shared-term block `DAG ( ref_root , node , ... )`.
    pub const DAG: u8 = 55;
    /// Node reference inside a DAG block, digits as for variables.
    pub const NODE: u8 = 56;
    pub const HILB_PRF: u8 = 57;
    pub const SUBST_PRF: u8 = 58;
    /// Filler used only by the `.g64` container.
    pub const FILL: u8 = 63;
}

/// Display name of a code, for dumps and error messages.
pub fn symbol_name(c: u8) -> &'static str {
    use code::*;
    match c {
        0..=31 => "digit",
        LPAREN => "(",
        RPAREN => ")",
        COMMA => ",",
        DOT => ".",
        NOT => "¬",
        AND => "∧",
        OR => "∨",
        IMPLIES => "⇒",
        FORALL => "∀",
        EXISTS => "∃",
        EQ => "=",
        LEQ => "≤",
        C0 => "C0",
        C1 => "C1",
        C2 => "C2",
        VAR => "V",
        SUB => "Sub",
        DIV => "Div",
        MAX => "Max",
        ROOT => "Root",
        LOG => "Log",
        COUNT => "Count",
        THETA => "θ",
        DAG => "DAG",
        NODE => "R",
        HILB_PRF => "HilbPrf",
        SUBST_PRF => "SubstPrf",
        _ => "reserved",
    }
}

pub fn const_code(c: Const) -> u8 {
    match c {
        Const::C0 => code::C0,
        Const::C1 => code::C1,
        Const::C2 => code::C2,
    }
}

pub fn func_code(f: Func) -> u8 {
    match f {
        Func::Sub => code::SUB,
        Func::Div => code::DIV,
        Func::Max => code::MAX,
        Func::Root => code::ROOT,
        Func::Log => code::LOG,
        Func::Count => code::COUNT,
        Func::Theta => code::THETA,
    }
}

fn code_func(c: u8) -> Option<Func> {
    Some(match c {
        code::SUB => Func::Sub,
        code::DIV => Func::Div,
        code::MAX => Func::Max,
        code::ROOT => Func::Root,
        code::LOG => Func::Log,
        code::COUNT => Func::Count,
        code::THETA => Func::Theta,
        _ => return None,
    })
}

fn code_const(c: u8) -> Option<Const> {
    Some(match c {
        code::C0 => Const::C0,
        code::C1 => Const::C1,
        code::C2 => Const::C2,
        _ => return None,
    })
}

/// Number of base-32 digits written after a variable marker.
pub fn index_digits(j: u64) -> usize {
    if j == 0 {
        0
    } else {
        (64 - j.leading_zeros() as usize).div_ceil(5)
    }
}

fn write_index(out: &mut Vec<u8>, marker: u8, j: u64) {
    out.push(marker);
    for k in (0..index_digits(j)).rev() {
        out.push(((j >> (5 * k)) & 31) as u8);
    }
}

pub fn encode_term_into(t: &Term, out: &mut Vec<u8>) {
    match t {
        Term::Const(c) => out.push(const_code(*c)),
        Term::Var(v) => write_index(out, code::VAR, u64::from(*v)),
        Term::App(f, args) => {
            out.push(func_code(*f));
            out.push(code::LPAREN);
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push(code::COMMA);
                }
                encode_term_into(a, out);
            }
            out.push(code::RPAREN);
        }
        Term::Dag(d) => encode_dag_into(d, out),
    }
}

fn encode_dag_into(d: &DagTerm, out: &mut Vec<u8>) {
    out.push(code::DAG);
    out.push(code::LPAREN);
    write_index(out, code::NODE, d.root() as u64);
    for n in d.nodes() {
        out.push(code::COMMA);
        match n {
            DagNode::Const(c) => out.push(const_code(*c)),
            DagNode::Op(f, args) => {
                out.push(func_code(*f));
                out.push(code::LPAREN);
                for (i, &a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push(code::COMMA);
                    }
                    write_index(out, code::NODE, a as u64);
                }
                out.push(code::RPAREN);
            }
        }
    }
    out.push(code::RPAREN);
}

pub fn encode_formula_into(f: &Formula, out: &mut Vec<u8>) {
    let group = |out: &mut Vec<u8>, head: u8, parts: &[&Formula]| {
        out.push(head);
        out.push(code::LPAREN);
        for (i, p) in parts.iter().enumerate() {
            if i > 0 {
                out.push(code::COMMA);
            }
            encode_formula_into(p, out);
        }
        out.push(code::RPAREN);
    };
    match f {
        Formula::Atom(r, a, b) => {
            out.push(match r {
                Rel::Eq => code::EQ,
                Rel::Leq => code::LEQ,
            });
            out.push(code::LPAREN);
            encode_term_into(a, out);
            out.push(code::COMMA);
            encode_term_into(b, out);
            out.push(code::RPAREN);
        }
        Formula::Proves(r, args) => {
            out.push(match r {
                Recognizer::HilbPrf => code::HILB_PRF,
                Recognizer::SubstPrf => code::SUBST_PRF,
            });
            out.push(code::LPAREN);
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push(code::COMMA);
                }
                encode_term_into(a, out);
            }
            out.push(code::RPAREN);
        }
        Formula::Not(a) => group(out, code::NOT, &[a]),
        Formula::And(a, b) => group(out, code::AND, &[a, b]),
        Formula::Or(a, b) => group(out, code::OR, &[a, b]),
        Formula::Implies(a, b) => group(out, code::IMPLIES, &[a, b]),
        Formula::ForAll(v, body) | Formula::Exists(v, body) => {
            out.push(if matches!(f, Formula::ForAll(..)) {
                code::FORALL
            } else {
                code::EXISTS
            });
            out.push(code::LPAREN);
            write_index(out, code::VAR, u64::from(*v));
            out.push(code::COMMA);
            encode_formula_into(body, out);
            out.push(code::RPAREN);
        }
    }
}

pub fn encode_term(t: &Term) -> Vec<u8> {
    let mut out = Vec::new();
    encode_term_into(t, &mut out);
    out
}

pub fn encode_formula(f: &Formula) -> Vec<u8> {
    let mut out = Vec::new();
    encode_formula_into(f, &mut out);
    out
}

/// Step formulas separated by `.`.
pub fn encode_proof<'a>(steps: impl IntoIterator<Item = &'a Formula>) -> Vec<u8> {
    let mut out = Vec::new();
    for (i, f) in steps.into_iter().enumerate() {
        if i > 0 {
            out.push(code::DOT);
        }
        encode_formula_into(f, &mut out);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed byte stream at offset {offset}: {msg}")]
pub struct DecodeError {
    pub offset: usize,
    pub msg: String,
}

/// A decoded object of whichever kind the stream holds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decoded {
    Term(Term),
    Formula(Formula),
    Proof(Vec<Formula>),
}

struct Reader<'a> {
    bytes: &'a [u8],
    at: usize,
}

impl<'a> Reader<'a> {
    fn err<T>(&self, offset: usize, msg: impl Into<String>) -> Result<T, DecodeError> {
        Err(DecodeError {
            offset,
            msg: msg.into(),
        })
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.at).copied()
    }

    fn next(&mut self) -> Result<u8, DecodeError> {
        match self.peek() {
            Some(b) => {
                self.at += 1;
                Ok(b)
            }
            None => self.err(self.at, "unexpected end of stream"),
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), DecodeError> {
        let at = self.at;
        let b = self.next()?;
        if b != c {
            return self.err(at, format!("expected `{}`, found `{}`", symbol_name(c), symbol_name(b)));
        }
        Ok(())
    }

    fn index(&mut self, marker: u8) -> Result<u64, DecodeError> {
        self.expect(marker)?;
        let start = self.at;
        let mut j: u64 = 0;
        while let Some(d) = self.peek().filter(|&b| b < 32) {
            if self.at == start && d == 0 {
                return self.err(self.at, "leading zero digit");
            }
            if j >> 59 != 0 {
                return self.err(self.at, "index too large");
            }
            j = j * 32 + u64::from(d);
            self.at += 1;
        }
        Ok(j)
    }

    fn var(&mut self) -> Result<u32, DecodeError> {
        let at = self.at;
        let j = self.index(code::VAR)?;
        u32::try_from(j).or_else(|_| self.err(at, "variable index too large"))
    }

    fn term(&mut self) -> Result<Term, DecodeError> {
        let at = self.at;
        let Some(b) = self.peek() else {
            return self.err(at, "unexpected end of stream, expected a term");
        };
        if let Some(c) = code_const(b) {
            self.at += 1;
            return Ok(Term::Const(c));
        }
        if b == code::VAR {
            return Ok(Term::Var(self.var()?));
        }
        if b == code::DAG {
            return self.dag();
        }
        let Some(f) = code_func(b) else {
            return self.err(at, format!("`{}` cannot start a term", symbol_name(b)));
        };
        self.at += 1;
        self.expect(code::LPAREN)?;
        let mut args = Vec::with_capacity(f.arity());
        for i in 0..f.arity() {
            if i > 0 {
                self.expect(code::COMMA)?;
            }
            args.push(self.term()?);
        }
        self.expect(code::RPAREN)?;
        Ok(Term::App(f, args))
    }

    fn node_ref(&mut self) -> Result<usize, DecodeError> {
        Ok(self.index(code::NODE)? as usize)
    }

    fn dag(&mut self) -> Result<Term, DecodeError> {
        let at = self.at;
        self.expect(code::DAG)?;
        self.expect(code::LPAREN)?;
        let root = self.node_ref()?;
        let mut nodes = Vec::new();
        while self.peek() == Some(code::COMMA) {
            self.at += 1;
            let here = self.at;
            let b = self.next()?;
            if let Some(c) = code_const(b) {
                nodes.push(DagNode::Const(c));
                continue;
            }
            let Some(f) = code_func(b) else {
                return self.err(here, format!("`{}` cannot start a DAG node", symbol_name(b)));
            };
            self.expect(code::LPAREN)?;
            let mut args = Vec::with_capacity(f.arity());
            for i in 0..f.arity() {
                if i > 0 {
                    self.expect(code::COMMA)?;
                }
                args.push(self.node_ref()?);
            }
            self.expect(code::RPAREN)?;
            nodes.push(DagNode::Op(f, args));
        }
        self.expect(code::RPAREN)?;
        match DagTerm::new(nodes, root) {
            Ok(d) => Ok(Term::Dag(std::sync::Arc::new(d))),
            Err(e) => self.err(at, e.to_string()),
        }
    }

    fn formula(&mut self) -> Result<Formula, DecodeError> {
        let at = self.at;
        let b = match self.peek() {
            Some(b) => b,
            None => return self.err(at, "unexpected end of stream, expected a formula"),
        };
        self.at += 1;
        let f = match b {
            code::EQ | code::LEQ => {
                self.expect(code::LPAREN)?;
                let x = self.term()?;
                self.expect(code::COMMA)?;
                let y = self.term()?;
                self.expect(code::RPAREN)?;
                let r = if b == code::EQ { Rel::Eq } else { Rel::Leq };
                return Ok(Formula::Atom(r, x, y));
            }
            code::HILB_PRF | code::SUBST_PRF => {
                let r = if b == code::HILB_PRF {
                    Recognizer::HilbPrf
                } else {
                    Recognizer::SubstPrf
                };
                self.expect(code::LPAREN)?;
                let mut args = Vec::with_capacity(r.arity());
                for i in 0..r.arity() {
                    if i > 0 {
                        self.expect(code::COMMA)?;
                    }
                    args.push(self.term()?);
                }
                self.expect(code::RPAREN)?;
                return Ok(Formula::Proves(r, args));
            }
            code::NOT => {
                self.expect(code::LPAREN)?;
                let a = self.formula()?;
                Formula::not(a)
            }
            code::AND | code::OR | code::IMPLIES => {
                self.expect(code::LPAREN)?;
                let x = self.formula()?;
                self.expect(code::COMMA)?;
                let y = self.formula()?;
                match b {
                    code::AND => Formula::and(x, y),
                    code::OR => Formula::or(x, y),
                    _ => Formula::implies(x, y),
                }
            }
            code::FORALL | code::EXISTS => {
                self.expect(code::LPAREN)?;
                let v = self.var()?;
                self.expect(code::COMMA)?;
                let body = self.formula()?;
                if b == code::FORALL {
                    Formula::forall(v, body)
                } else {
                    Formula::exists(v, body)
                }
            }
            _ => return self.err(at, format!("`{}` cannot start a formula", symbol_name(b))),
        };
        self.expect(code::RPAREN)?;
        Ok(f)
    }

    fn finish(&self) -> Result<(), DecodeError> {
        if self.at != self.bytes.len() {
            return self.err(self.at, "trailing bytes");
        }
        Ok(())
    }
}

fn reader(bytes: &[u8]) -> Reader<'_> {
    Reader { bytes, at: 0 }
}

pub fn decode_term(bytes: &[u8]) -> Result<Term, DecodeError> {
    let mut r = reader(bytes);
    let t = r.term()?;
    r.finish()?;
    Ok(t)
}

pub fn decode_formula(bytes: &[u8]) -> Result<Formula, DecodeError> {
    let mut r = reader(bytes);
    let f = r.formula()?;
    r.finish()?;
    Ok(f)
}

/// Split a proof on `.` and decode each step; returns each step's byte range too.
pub fn decode_proof_spans(bytes: &[u8]) -> Result<Vec<(Formula, std::ops::Range<usize>)>, DecodeError> {
    let mut r = reader(bytes);
    let mut steps = Vec::new();
    if bytes.is_empty() {
        return Ok(steps);
    }
    loop {
        let start = r.at;
        let f = r.formula()?;
        steps.push((f, start..r.at));
        match r.peek() {
            None => return Ok(steps),
            Some(code::DOT) => r.at += 1,
            Some(b) => return r.err(r.at, format!("expected `.` between steps, found `{}`", symbol_name(b))),
        }
    }
}

pub fn decode_proof(bytes: &[u8]) -> Result<Vec<Formula>, DecodeError> {
    Ok(decode_proof_spans(bytes)?.into_iter().map(|(f, _)| f).collect())
}

/// Decode whatever kind of object the stream holds.
pub fn decode(bytes: &[u8]) -> Result<Decoded, DecodeError> {
    let first = match bytes.first() {
        Some(&b) => b,
        None => return Err(DecodeError { offset: 0, msg: "empty stream".into() }),
    };
    if first < 32 {
        return Err(DecodeError {
            offset: 0,
            msg: "digit byte without a variable marker".into(),
        });
    }
    let starts_term = code_const(first).is_some() || code_func(first).is_some() || first == code::VAR || first == code::DAG;
    if starts_term {
        return decode_term(bytes).map(Decoded::Term);
    }
    let mut steps = decode_proof(bytes)?;
    if steps.len() == 1 {
        Ok(Decoded::Formula(steps.pop().unwrap()))
    } else {
        Ok(Decoded::Proof(steps))
    }
}

/// The base-64 value of the stream, first byte most significant.
pub fn godel_number(bytes: &[u8]) -> BigUint {
    let mut packed = pack_bits(bytes);
    let extra = packed.len() * 8 - bytes.len() * 6;
    // drop the zero padding
    let mut n = BigUint::from_bytes_be(&packed);
    n >>= extra;
    packed.clear();
    n
}

pub fn bit_length(bytes: &[u8]) -> u64 {
    6 * bytes.len() as u64
}

fn pack_bits(symbols: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(symbols.len() * 3 / 4 + 3);
    let mut acc: u32 = 0;
    let mut nbits = 0;
    for &s in symbols {
        acc = (acc << 6) | u32::from(s & 63);
        nbits += 6;
        while nbits >= 8 {
            nbits -= 8;
            out.push((acc >> nbits) as u8);
        }
    }
    if nbits > 0 {
        out.push((acc << (8 - nbits)) as u8);
    }
    out
}

pub const G64_MAGIC: &[u8; 4] = b"QG64";
pub const G64_VERSION: u8 = 1;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum G64Error {
    #[error("not a .g64 file (bad magic)")]
    Magic,
    #[error("unsupported .g64 version {0}")]
    Version(u8),
    #[error("symbol {0} out of range")]
    Range(u8),
}

/// Pack symbols four per three octets behind the header. A stream whose
/// length is 3 mod 4 gets one filler symbol so the count stays recoverable.
pub fn to_g64(symbols: &[u8]) -> Result<Vec<u8>, G64Error> {
    if let Some(&s) = symbols.iter().find(|&&s| s >= code::FILL) {
        return Err(G64Error::Range(s));
    }
    let mut out = G64_MAGIC.to_vec();
    out.push(G64_VERSION);
    if symbols.len() % 4 == 3 {
        let mut padded = symbols.to_vec();
        padded.push(code::FILL);
        out.extend(pack_bits(&padded));
    } else {
        out.extend(pack_bits(symbols));
    }
    Ok(out)
}

pub fn from_g64(file: &[u8]) -> Result<Vec<u8>, G64Error> {
    if file.len() < 5 || &file[..4] != G64_MAGIC {
        return Err(G64Error::Magic);
    }
    if file[4] != G64_VERSION {
        return Err(G64Error::Version(file[4]));
    }
    let body = &file[5..];
    let count = body.len() * 8 / 6;
    let mut out = Vec::with_capacity(count);
    let mut acc: u32 = 0;
    let mut nbits = 0;
    for &b in body {
        acc = (acc << 8) | u32::from(b);
        nbits += 8;
        while nbits >= 6 && out.len() < count {
            nbits -= 6;
            out.push(((acc >> nbits) & 63) as u8);
        }
        acc &= (1 << nbits) - 1;
    }
    if out.last() == Some(&code::FILL) {
        out.pop();
    }
    Ok(out)
}

/// Space-separated decimal codes, for dumps.
pub fn to_decimal(symbols: &[u8]) -> String {
    symbols.iter().map(u8::to_string).collect::<Vec<_>>().join(" ")
}
