use super::{Formula, Rel, Term};

pub(crate) fn term_to_string(t: &Term) -> String {
    let mut out = String::new();
    write_term(t, &mut out);
    out
}

fn write_term(t: &Term, out: &mut String) {
    match t {
        Term::Const(c) => out.push_str(c.name()),
        Term::Var(v) => {
            out.push('v');
            out.push_str(&v.to_string());
        }
        Term::App(f, args) => {
            out.push_str(f.name());
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_term(a, out);
            }
            out.push(')');
        }
        Term::Dag(d) => {
            out.push_str("dag{");
            out.push_str(&d.to_records("; "));
            out.push('}');
        }
    }
}

pub(crate) fn formula_to_string(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(f, false, &mut out);
    out
}

fn write_formula(f: &Formula, wrap: bool, out: &mut String) {
    match f {
        Formula::Atom(rel, a, b) => {
            write_term(a, out);
            out.push_str(match rel {
                Rel::Eq => " = ",
                Rel::Leq => " <= ",
            });
            write_term(b, out);
        }
        Formula::Proves(r, args) => {
            out.push_str(r.name());
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_term(a, out);
            }
            out.push(')');
        }
        Formula::Not(a) => {
            out.push('~');
            let atomic = matches!(a.as_ref(), Formula::Atom(..) | Formula::Proves(..) | Formula::Not(_));
            write_formula(a, !atomic, out);
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            let op = match f {
                Formula::And(..) => " & ",
                Formula::Or(..) => " | ",
                _ => " -> ",
            };
            if wrap {
                out.push('(');
            }
            write_formula(a, true, out);
            out.push_str(op);
            write_formula(b, true, out);
            if wrap {
                out.push(')');
            }
        }
        Formula::ForAll(..) | Formula::Exists(..) => {
            if wrap {
                out.push('(');
            }
            let (word, v, bound, body) = if let Some((v, t, body)) = f.as_bounded_forall() {
                ("forall", v, Some(t), body)
            } else if let Some((v, t, body)) = f.as_bounded_exists() {
                ("exists", v, Some(t), body)
            } else {
                match f {
                    Formula::ForAll(v, body) => ("forall", *v, None, body.as_ref()),
                    Formula::Exists(v, body) => ("exists", *v, None, body.as_ref()),
                    _ => unreachable!(),
                }
            };
            out.push_str(word);
            out.push_str(" v");
            out.push_str(&v.to_string());
            if let Some(t) = bound {
                out.push_str(" <= ");
                write_term(t, out);
            }
            out.push_str(". ");
            write_formula(body, false, out);
            if wrap {
                out.push(')');
            }
        }
    }
}
