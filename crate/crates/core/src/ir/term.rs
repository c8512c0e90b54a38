use std::collections::BTreeMap;
use std::fmt;

/// Sorts of the many-sorted language: the basic sorts plus algebraic data types.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    Int,
    Bool,
    Adt(String, Vec<Sort>),
}

impl Sort {
    pub fn adt(name: &str, params: Vec<Sort>) -> Sort {
        Sort::Adt(name.to_string(), params)
    }

    pub fn list_int() -> Sort {
        Sort::adt("list", vec![Sort::Int])
    }

    pub fn is_adt(&self) -> bool {
        matches!(self, Sort::Adt(..))
    }

    pub fn is_basic(&self) -> bool {
        !self.is_adt()
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::Int => write!(f, "int"),
            Sort::Bool => write!(f, "bool"),
            Sort::Adt(n, ps) if ps.is_empty() => write!(f, "{n}"),
            Sort::Adt(n, ps) => {
                write!(f, "{n}(")?;
                for (i, p) in ps.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub name: String,
    pub sort: Sort,
}

impl Var {
    pub fn new(name: impl Into<String>, sort: Sort) -> Var {
        Var { name: name.into(), sort }
    }
    pub fn int(name: impl Into<String>) -> Var {
        Var::new(name, Sort::Int)
    }
}

/// `constant + sum(coeff * var)` over integer variables, kept with no zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LinExpr {
    pub coeffs: BTreeMap<String, i64>,
    pub constant: i64,
}

impl LinExpr {
    pub fn constant(k: i64) -> LinExpr {
        LinExpr { coeffs: BTreeMap::new(), constant: k }
    }

    pub fn var(name: &str) -> LinExpr {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(name.to_string(), 1);
        LinExpr { coeffs, constant: 0 }
    }

    pub fn add(&self, other: &LinExpr) -> LinExpr {
        let mut out = self.clone();
        out.constant += other.constant;
        for (v, c) in &other.coeffs {
            *out.coeffs.entry(v.clone()).or_insert(0) += c;
        }
        out.coeffs.retain(|_, c| *c != 0);
        out
    }

    pub fn scale(&self, k: i64) -> LinExpr {
        if k == 0 {
            return LinExpr::constant(0);
        }
        LinExpr { coeffs: self.coeffs.iter().map(|(v, c)| (v.clone(), c * k)).collect(), constant: self.constant * k }
    }

    pub fn as_const(&self) -> Option<i64> {
        self.coeffs.is_empty().then_some(self.constant)
    }

    pub fn as_var(&self) -> Option<&str> {
        if self.constant != 0 || self.coeffs.len() != 1 {
            return None;
        }
        let (v, c) = self.coeffs.iter().next()?;
        (*c == 1).then_some(v.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Var),
    Int(i64),
    Bool(bool),
    Ctor { name: String, args: Vec<Term>, sort: Sort },
    Lin(LinExpr),
    Ite(Box<Constraint>, Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>, sort: Sort) -> Term {
        Term::Var(Var::new(name, sort))
    }

    pub fn int_var(name: impl Into<String>) -> Term {
        Term::var(name, Sort::Int)
    }

    pub fn ctor(name: &str, args: Vec<Term>, sort: Sort) -> Term {
        Term::Ctor { name: name.to_string(), args, sort }
    }

    pub fn nil_int() -> Term {
        Term::ctor("nil", vec![], Sort::list_int())
    }

    pub fn cons_int(h: Term, t: Term) -> Term {
        Term::ctor("cons", vec![h, t], Sort::list_int())
    }

    pub fn sort(&self) -> Sort {
        match self {
            Term::Var(v) => v.sort.clone(),
            Term::Int(_) | Term::Lin(_) => Sort::Int,
            Term::Bool(_) => Sort::Bool,
            Term::Ctor { sort, .. } => sort.clone(),
            Term::Ite(_, t, _) => t.sort(),
        }
    }

    pub fn as_var(&self) -> Option<&Var> {
        match self {
            Term::Var(v) => Some(v),
            _ => None,
        }
    }

    /// Builds the canonical term for a linear expression (variable, constant, or sum).
    pub fn from_lin(e: LinExpr) -> Term {
        if let Some(k) = e.as_const() {
            Term::Int(k)
        } else if let Some(v) = e.as_var() {
            Term::int_var(v)
        } else {
            Term::Lin(e)
        }
    }

    /// Linear view of an integer term; `None` for `ite` and non-integer terms.
    pub fn to_lin(&self) -> Option<LinExpr> {
        match self {
            Term::Var(v) if v.sort == Sort::Int => Some(LinExpr::var(&v.name)),
            Term::Int(k) => Some(LinExpr::constant(*k)),
            Term::Lin(e) => Some(e.clone()),
            _ => None,
        }
    }

    /// `a + b` on integer terms; an `ite` operand is pushed outwards.
    pub fn add(a: &Term, b: &Term) -> Term {
        match (a, b) {
            (Term::Ite(c, t, e), _) => Term::Ite(c.clone(), Box::new(Term::add(t, b)), Box::new(Term::add(e, b))),
            (_, Term::Ite(c, t, e)) => Term::Ite(c.clone(), Box::new(Term::add(a, t)), Box::new(Term::add(a, e))),
            _ => {
                let la = a.to_lin().expect("integer operand");
                let lb = b.to_lin().expect("integer operand");
                Term::from_lin(la.add(&lb))
            }
        }
    }

    pub fn scale(k: i64, a: &Term) -> Term {
        match a {
            Term::Ite(c, t, e) => Term::Ite(c.clone(), Box::new(Term::scale(k, t)), Box::new(Term::scale(k, e))),
            _ => Term::from_lin(a.to_lin().expect("integer operand").scale(k)),
        }
    }

    pub fn is_ground(&self) -> bool {
        let mut vs = Vec::new();
        self.collect_vars(&mut vs);
        vs.is_empty()
    }

    /// Appends variables in first-occurrence order, skipping ones already present.
    pub fn collect_vars(&self, out: &mut Vec<Var>) {
        match self {
            Term::Var(v) => push_var(out, v.clone()),
            Term::Int(_) | Term::Bool(_) => {}
            Term::Ctor { args, .. } => args.iter().for_each(|a| a.collect_vars(out)),
            Term::Lin(e) => e.coeffs.keys().for_each(|v| push_var(out, Var::int(v.clone()))),
            Term::Ite(c, t, e) => {
                c.collect_vars(out);
                t.collect_vars(out);
                e.collect_vars(out);
            }
        }
    }

    /// Number of constructor applications with at least one argument.
    pub fn adt_size(&self) -> usize {
        match self {
            Term::Ctor { args, .. } => usize::from(!args.is_empty()) + args.iter().map(Term::adt_size).sum::<usize>(),
            _ => 0,
        }
    }
}

pub(crate) fn push_var(out: &mut Vec<Var>, v: Var) {
    if !out.iter().any(|w| w.name == v.name) {
        out.push(v);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RelOp {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl RelOp {
    pub fn symbol(self) -> &'static str {
        match self {
            RelOp::Lt => "<",
            RelOp::Le => "=<",
            RelOp::Eq => "=",
            RelOp::Ge => ">=",
            RelOp::Gt => ">",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Constraint {
    Rel(RelOp, Term, Term),
    BoolVar(String),
    True,
    False,
    Not(Box<Constraint>),
    And(Box<Constraint>, Box<Constraint>),
    Or(Box<Constraint>, Box<Constraint>),
    Implies(Box<Constraint>, Box<Constraint>),
    /// Equivalence of two boolean constraints.
    Iff(Box<Constraint>, Box<Constraint>),
    Ite(Box<Constraint>, Box<Constraint>, Box<Constraint>),
}

impl Constraint {
    pub fn eq(a: Term, b: Term) -> Constraint {
        Constraint::Rel(RelOp::Eq, a, b)
    }

    /// Equality at any basic sort; boolean sides become an equivalence.
    pub fn eq_terms(a: Term, b: Term) -> Constraint {
        if a.sort() == Sort::Bool {
            Constraint::Iff(Box::new(Constraint::from_bool_term(&a)), Box::new(Constraint::from_bool_term(&b)))
        } else {
            Constraint::eq(a, b)
        }
    }

    /// Reads a boolean-sorted term as a constraint.
    pub fn from_bool_term(t: &Term) -> Constraint {
        match t {
            Term::Var(v) => Constraint::BoolVar(v.name.clone()),
            Term::Bool(true) => Constraint::True,
            Term::Bool(false) => Constraint::False,
            Term::Ite(c, a, b) => {
                Constraint::Ite(c.clone(), Box::new(Constraint::from_bool_term(a)), Box::new(Constraint::from_bool_term(b)))
            }
            other => panic!("not a boolean term: {other:?}"),
        }
    }

    pub fn and_all(cs: impl IntoIterator<Item = Constraint>) -> Constraint {
        let mut it = cs.into_iter();
        let Some(first) = it.next() else {
            return Constraint::True;
        };
        it.fold(first, |acc, c| Constraint::And(Box::new(acc), Box::new(c)))
    }

    /// Splits nested conjunctions into a flat list, dropping `true`.
    pub fn flatten_into(self, out: &mut Vec<Constraint>) {
        match self {
            Constraint::And(a, b) => {
                a.flatten_into(out);
                b.flatten_into(out);
            }
            Constraint::True => {}
            c => out.push(c),
        }
    }

    pub fn collect_vars(&self, out: &mut Vec<Var>) {
        match self {
            Constraint::Rel(_, a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Constraint::BoolVar(n) => push_var(out, Var::new(n.clone(), Sort::Bool)),
            Constraint::True | Constraint::False => {}
            Constraint::Not(c) => c.collect_vars(out),
            Constraint::And(a, b) | Constraint::Or(a, b) | Constraint::Implies(a, b) | Constraint::Iff(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Constraint::Ite(c, a, b) => {
                c.collect_vars(out);
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// True when the constraint contains an `ite` nested inside a relational operand
    /// of another `ite` condition; the sort checker reports these as warnings.
    pub fn has_nested_ite(&self) -> bool {
        fn term_depth(t: &Term) -> usize {
            match t {
                Term::Ite(c, a, b) => 1 + cons_depth(c).max(term_depth(a)).max(term_depth(b)),
                Term::Ctor { args, .. } => args.iter().map(term_depth).max().unwrap_or(0),
                _ => 0,
            }
        }
        fn cons_depth(c: &Constraint) -> usize {
            match c {
                Constraint::Rel(_, a, b) => term_depth(a).max(term_depth(b)),
                Constraint::Not(x) => cons_depth(x),
                Constraint::And(a, b) | Constraint::Or(a, b) | Constraint::Implies(a, b) | Constraint::Iff(a, b) => {
                    cons_depth(a).max(cons_depth(b))
                }
                Constraint::Ite(x, a, b) => cons_depth(x).max(cons_depth(a)).max(cons_depth(b)),
                _ => 0,
            }
        }
        cons_depth(self) > 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub pred: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(pred: impl Into<String>, args: Vec<Term>) -> Atom {
        Atom { pred: pred.into(), args }
    }

    pub fn collect_vars(&self, out: &mut Vec<Var>) {
        self.args.iter().for_each(|a| a.collect_vars(out));
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    /// ADT-sorted variables of the atom, in first-occurrence order.
    pub fn adt_vars(&self) -> Vec<Var> {
        self.vars().into_iter().filter(|v| v.sort.is_adt()).collect()
    }

    pub fn has_adt_args(&self) -> bool {
        self.args.iter().any(|a| a.sort().is_adt())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Head {
    False,
    Atom(Atom),
}

impl Head {
    pub fn atom(&self) -> Option<&Atom> {
        match self {
            Head::Atom(a) => Some(a),
            Head::False => None,
        }
    }
}

/// `head <- constraints, body` where `constraints` is read as a conjunction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    pub id: u32,
    pub head: Head,
    pub constraints: Vec<Constraint>,
    pub body: Vec<Atom>,
}

impl Clause {
    pub fn new(head: Head, constraints: Vec<Constraint>, body: Vec<Atom>) -> Clause {
        Clause { id: 0, head, constraints, body }
    }

    pub fn is_query(&self) -> bool {
        self.head == Head::False
    }

    /// All variables in first-occurrence order over head, body atoms, then constraints.
    pub fn vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        if let Head::Atom(a) = &self.head {
            a.collect_vars(&mut out);
        }
        self.body.iter().for_each(|a| a.collect_vars(&mut out));
        self.constraints.iter().for_each(|c| c.collect_vars(&mut out));
        out
    }

    pub fn adt_vars(&self) -> Vec<Var> {
        self.vars().into_iter().filter(|v| v.sort.is_adt()).collect()
    }

    pub fn constraint(&self) -> Constraint {
        Constraint::and_all(self.constraints.iter().cloned())
    }
}

/// ADT variables of a conjunction of atoms.
pub fn adt_vars_of(atoms: &[Atom]) -> Vec<Var> {
    let mut out = Vec::new();
    atoms.iter().for_each(|a| a.collect_vars(&mut out));
    out.retain(|v| v.sort.is_adt());
    out
}
