//! Untyped surface syntax, as produced by the parser.

use std::fmt;

use crate::ir::{DataDecl, RelOp, SortPat};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Implies,
    Or,
    And,
    Rel(RelOp),
    Add,
    Sub,
    Mul,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Var(String),
    Int(i64),
    /// Identifier with optional arguments: constructor, predicate, `true`, `false`, or `ite`.
    Name(String, Vec<Expr>),
    /// `[a, b | T]`; a missing tail means `[]`.
    List(Vec<Expr>, Option<Box<Expr>>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Not(Box<Expr>),
}

impl Expr {
    pub fn name(n: &str, args: Vec<Expr>) -> Expr {
        Expr::Name(n.to_string(), args)
    }

    pub fn bin(op: BinOp, a: Expr, b: Expr) -> Expr {
        Expr::Bin(op, Box::new(a), Box::new(b))
    }

    /// True when this body item is a predicate atom rather than a constraint.
    pub fn is_atom(&self) -> bool {
        matches!(self, Expr::Name(n, _) if n != "true" && n != "false" && n != "ite")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CataDirective {
    pub name: String,
    pub inputs: Vec<SortPat>,
    pub adt: SortPat,
    pub outputs: Vec<SortPat>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ItemKind {
    Data(DataDecl),
    Pred(String, Vec<SortPat>),
    Cata(CataDirective),
    CataAbs(SortPat, Vec<Expr>),
    Spec(Expr, Vec<Expr>),
    /// `None` head is `false`.
    Clause(Option<Expr>, Vec<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Item {
    pub kind: ItemKind,
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SourceFile {
    pub path: Option<String>,
    pub items: Vec<Item>,
}

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Bin(BinOp::Implies, ..) => 1,
        Expr::Bin(BinOp::Or, ..) => 2,
        Expr::Bin(BinOp::And, ..) => 3,
        Expr::Not(_) => 4,
        Expr::Bin(BinOp::Rel(_), ..) => 5,
        Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 6,
        Expr::Bin(BinOp::Mul, ..) => 7,
        Expr::Neg(_) => 8,
        _ => 9,
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    if prec(e) < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

fn write_args(f: &mut fmt::Formatter<'_>, args: &[Expr]) -> fmt::Result {
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write_at(f, a, 1)?;
    }
    Ok(())
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Int(k) => write!(f, "{k}"),
            Expr::Name(n, args) if args.is_empty() => write!(f, "{n}"),
            Expr::Name(n, args) => {
                write!(f, "{n}(")?;
                write_args(f, args)?;
                write!(f, ")")
            }
            Expr::List(items, tail) => {
                write!(f, "[")?;
                for (i, a) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write_at(f, a, 3)?;
                }
                if let Some(t) = tail {
                    write!(f, "|")?;
                    write_at(f, t, 3)?;
                }
                write!(f, "]")
            }
            Expr::Bin(op, a, b) => {
                let (sym, lmin, rmin) = match op {
                    BinOp::Implies => (" => ", 2, 1),
                    BinOp::Or => (" | ", 2, 3),
                    BinOp::And => (" & ", 3, 4),
                    BinOp::Rel(r) => (r.symbol(), 6, 6),
                    BinOp::Add => ("+", 6, 7),
                    BinOp::Sub => ("-", 6, 7),
                    BinOp::Mul => ("*", 7, 8),
                };
                write_at(f, a, lmin)?;
                write!(f, "{sym}")?;
                write_at(f, b, rmin)
            }
            Expr::Neg(a) => {
                write!(f, "-")?;
                write_at(f, a, 9)
            }
            Expr::Not(a) => {
                write!(f, "~")?;
                write_at(f, a, 4)
            }
        }
    }
}

fn write_sort(f: &mut fmt::Formatter<'_>, s: &SortPat) -> fmt::Result {
    match s {
        SortPat::Param(p) => write!(f, "{p}"),
        SortPat::Int => write!(f, "int"),
        SortPat::Bool => write!(f, "bool"),
        SortPat::Adt(n, ps) if ps.is_empty() => write!(f, "{n}"),
        SortPat::Adt(n, ps) => {
            write!(f, "{n}(")?;
            write_sorts(f, ps)?;
            write!(f, ")")
        }
    }
}

fn write_sorts(f: &mut fmt::Formatter<'_>, ss: &[SortPat]) -> fmt::Result {
    for (i, s) in ss.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write_sort(f, s)?;
    }
    Ok(())
}

fn write_conj(f: &mut fmt::Formatter<'_>, es: &[Expr]) -> fmt::Result {
    for (i, e) in es.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write_at(f, e, 1)?;
    }
    Ok(())
}

impl fmt::Display for ItemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ItemKind::Data(d) => {
                write!(f, ":- data {}", d.name)?;
                if !d.params.is_empty() {
                    write!(f, "({})", d.params.join(","))?;
                }
                write!(f, " ==> ")?;
                for (i, c) in d.ctors.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ; ")?;
                    }
                    write!(f, "{}", c.name)?;
                    if !c.args.is_empty() {
                        write!(f, "(")?;
                        write_sorts(f, &c.args)?;
                        write!(f, ")")?;
                    }
                }
                write!(f, ".")
            }
            ItemKind::Pred(p, ss) => {
                write!(f, ":- pred {p}")?;
                if !ss.is_empty() {
                    write!(f, "(")?;
                    write_sorts(f, ss)?;
                    write!(f, ")")?;
                }
                write!(f, ".")
            }
            ItemKind::Cata(c) => {
                write!(f, ":- cata {}(", c.name)?;
                let mut parts = Vec::new();
                parts.extend(c.inputs.iter().map(|s| ("in", s)));
                parts.push(("adt", &c.adt));
                parts.extend(c.outputs.iter().map(|s| ("out", s)));
                for (i, (label, s)) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{label}:")?;
                    write_sort(f, s)?;
                }
                write!(f, ").")
            }
            ItemKind::CataAbs(s, body) => {
                write!(f, ":- cata_abs ")?;
                write_sort(f, s)?;
                write!(f, " ==> ")?;
                write_conj(f, body)?;
                write!(f, ".")
            }
            ItemKind::Spec(h, body) => {
                write!(f, ":- spec {h} ==> ")?;
                write_conj(f, body)?;
                write!(f, ".")
            }
            ItemKind::Clause(head, body) => {
                match head {
                    Some(h) => write!(f, "{h}")?,
                    None => write!(f, "false")?,
                }
                if !body.is_empty() {
                    write!(f, " :- ")?;
                    write_conj(f, body)?;
                }
                write!(f, ".")
            }
        }
    }
}

impl fmt::Display for SourceFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for it in &self.items {
            writeln!(f, "{}", it.kind)?;
        }
        Ok(())
    }
}
