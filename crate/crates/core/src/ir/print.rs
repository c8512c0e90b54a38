//! Surface-syntax printing of IR values; the inverse of the frontend parser.

use std::fmt;

use super::term::{Atom, Clause, Constraint, Head, LinExpr, Term};

fn is_list_ctor(t: &Term) -> bool {
    matches!(t, Term::Ctor { name, sort: super::Sort::Adt(s, _), .. } if s == "list" && (name == "nil" || name == "cons"))
}

fn write_lin(f: &mut fmt::Formatter<'_>, e: &LinExpr) -> fmt::Result {
    let mut first = true;
    for (v, c) in &e.coeffs {
        let (neg, mag) = (*c < 0, c.unsigned_abs());
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, "{}", if neg { "-" } else { "+" })?;
        }
        if mag == 1 {
            write!(f, "{v}")?;
        } else {
            write!(f, "{mag}*{v}")?;
        }
        first = false;
    }
    if first {
        write!(f, "{}", e.constant)
    } else if e.constant > 0 {
        write!(f, "+{}", e.constant)
    } else if e.constant < 0 {
        write!(f, "-{}", e.constant.unsigned_abs())
    } else {
        Ok(())
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{}", v.name),
            Term::Int(k) => write!(f, "{k}"),
            Term::Bool(b) => write!(f, "{b}"),
            Term::Lin(e) => write_lin(f, e),
            Term::Ite(c, a, b) => write!(f, "ite({c},{a},{b})"),
            t if is_list_ctor(t) => {
                let mut items = Vec::new();
                let mut cur = t;
                while let Term::Ctor { name, args, .. } = cur {
                    if name != "cons" || !is_list_ctor(cur) {
                        break;
                    }
                    items.push(&args[0]);
                    cur = &args[1];
                }
                if items.is_empty() {
                    return write!(f, "[]");
                }
                write!(f, "[")?;
                for (i, it) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{it}")?;
                }
                if matches!(cur, Term::Ctor { name, .. } if name == "nil") && is_list_ctor(cur) {
                    write!(f, "]")
                } else {
                    write!(f, "|{cur}]")
                }
            }
            Term::Ctor { name, args, .. } => {
                write!(f, "{name}")?;
                if !args.is_empty() {
                    write!(f, "(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{a}")?;
                    }
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

/// Binding strength used to decide where parentheses are needed.
fn level(c: &Constraint) -> u8 {
    match c {
        Constraint::Implies(..) => 1,
        Constraint::Or(..) => 2,
        Constraint::And(..) => 3,
        Constraint::Not(..) => 4,
        Constraint::Rel(..) | Constraint::Iff(..) => 5,
        _ => 6,
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, c: &Constraint, min: u8) -> fmt::Result {
    if level(c) < min {
        write!(f, "({c})")
    } else {
        write!(f, "{c}")
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::Rel(op, a, b) => write!(f, "{a}{}{b}", op.symbol()),
            Constraint::BoolVar(n) => write!(f, "{n}"),
            Constraint::True => write!(f, "true"),
            Constraint::False => write!(f, "false"),
            Constraint::Not(x) => {
                write!(f, "~")?;
                write_at(f, x, 4)
            }
            Constraint::And(a, b) => {
                write_at(f, a, 3)?;
                write!(f, " & ")?;
                write_at(f, b, 4)
            }
            Constraint::Or(a, b) => {
                write_at(f, a, 2)?;
                write!(f, " | ")?;
                write_at(f, b, 3)
            }
            Constraint::Implies(a, b) => {
                write_at(f, a, 2)?;
                write!(f, " => ")?;
                write_at(f, b, 1)
            }
            Constraint::Iff(a, b) => {
                write_at(f, a, 6)?;
                write!(f, "=")?;
                write_at(f, b, 6)
            }
            Constraint::Ite(x, a, b) => write!(f, "ite({x},{a},{b})"),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pred)?;
        if !self.args.is_empty() {
            write!(f, "(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{a}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Head {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Head::False => write!(f, "false"),
            Head::Atom(a) => write!(f, "{a}"),
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.head)?;
        let mut items: Vec<String> = self.constraints.iter().map(|c| c.to_string()).collect();
        items.extend(self.body.iter().map(|a| a.to_string()));
        if !items.is_empty() {
            write!(f, " :- {}", items.join(", "))?;
        }
        write!(f, ".")
    }
}
