use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use super::mangle::Mangling;
use crate::error::{Error, Result};
use crate::ir::{Atom, Clause, Constraint, Head, LinExpr, Program, RelOp, Sort, Term, Var};

/// A HORN script and the renaming used to produce it.
#[derive(Debug, Clone)]
pub struct SmtScript {
    pub text: String,
    pub names: Mangling,
}

struct Emitter<'a> {
    prog: &'a Program,
    names: Mangling,
    /// Instances of each datatype in use; constructor symbols carry the sort when
    /// one datatype has several instances.
    instances: BTreeMap<String, BTreeSet<Sort>>,
}

fn sort_key(s: &Sort) -> String {
    match s {
        Sort::Int => "int".into(),
        Sort::Bool => "bool".into(),
        Sort::Adt(n, ps) => std::iter::once(n.clone()).chain(ps.iter().map(sort_key)).collect::<Vec<_>>().join("_"),
    }
}

impl Emitter<'_> {
    fn sort(&mut self, s: &Sort) -> String {
        match s {
            Sort::Int => "Int".into(),
            Sort::Bool => "Bool".into(),
            Sort::Adt(..) => self.names.symbol("sort", &sort_key(s)),
        }
    }

    fn ctor(&mut self, name: &str, sort: &Sort) -> String {
        let Sort::Adt(d, _) = sort else { return self.names.symbol("ctor", name) };
        if self.instances.get(d).is_some_and(|i| i.len() > 1) {
            self.names.symbol("ctor", &format!("{name}_{}", sort_key(sort)))
        } else {
            self.names.symbol("ctor", name)
        }
    }

    fn var(&mut self, v: &str) -> String {
        self.names.symbol("var", v)
    }

    /// Adds `s` and every sort reachable through its constructors.
    fn collect_sort(&mut self, s: &Sort) -> Result<()> {
        let Sort::Adt(d, _) = s else { return Ok(()) };
        if !self.prog.datatypes.contains_key(d) {
            return Err(Error::Internal(format!("no declaration for datatype `{d}`")));
        }
        if !self.instances.entry(d.clone()).or_default().insert(s.clone()) {
            return Ok(());
        }
        for (_, args) in self.prog.ctors_of(s) {
            for a in &args {
                self.collect_sort(a)?;
            }
        }
        Ok(())
    }

    fn lin(&mut self, e: &LinExpr) -> String {
        let mut parts: Vec<String> = e
            .coeffs
            .iter()
            .map(|(v, c)| {
                let x = self.var(v);
                match c {
                    1 => x,
                    -1 => format!("(- {x})"),
                    _ => format!("(* {} {x})", int(*c)),
                }
            })
            .collect();
        if e.constant != 0 || parts.is_empty() {
            parts.push(int(e.constant));
        }
        if parts.len() == 1 {
            parts.pop().expect("one part")
        } else {
            format!("(+ {})", parts.join(" "))
        }
    }

    fn term(&mut self, t: &Term) -> String {
        match t {
            Term::Var(v) => self.var(&v.name),
            Term::Int(k) => int(*k),
            Term::Bool(b) => b.to_string(),
            Term::Ctor { name, args, sort } => {
                let c = self.ctor(name, sort);
                if args.is_empty() {
                    c
                } else {
                    let a: Vec<String> = args.iter().map(|x| self.term(x)).collect();
                    format!("({c} {})", a.join(" "))
                }
            }
            Term::Lin(e) => self.lin(e),
            Term::Ite(c, a, b) => format!("(ite {} {} {})", self.constraint(c), self.term(a), self.term(b)),
        }
    }

    fn constraint(&mut self, c: &Constraint) -> String {
        match c {
            Constraint::Rel(op, a, b) => {
                let o = match op {
                    RelOp::Lt => "<",
                    RelOp::Le => "<=",
                    RelOp::Eq => "=",
                    RelOp::Ge => ">=",
                    RelOp::Gt => ">",
                };
                format!("({o} {} {})", self.term(a), self.term(b))
            }
            Constraint::BoolVar(n) => self.var(n),
            Constraint::True => "true".into(),
            Constraint::False => "false".into(),
            Constraint::Not(x) => format!("(not {})", self.constraint(x)),
            Constraint::And(a, b) => format!("(and {} {})", self.constraint(a), self.constraint(b)),
            Constraint::Or(a, b) => format!("(or {} {})", self.constraint(a), self.constraint(b)),
            Constraint::Implies(a, b) => format!("(=> {} {})", self.constraint(a), self.constraint(b)),
            Constraint::Iff(a, b) => format!("(= {} {})", self.constraint(a), self.constraint(b)),
            Constraint::Ite(x, a, b) => {
                format!("(ite {} {} {})", self.constraint(x), self.constraint(a), self.constraint(b))
            }
        }
    }

    fn atom(&mut self, a: &Atom) -> String {
        let p = self.names.symbol("pred", &a.pred);
        if a.args.is_empty() {
            return p;
        }
        let args: Vec<String> = a.args.iter().map(|t| self.term(t)).collect();
        format!("({p} {})", args.join(" "))
    }

    fn clause(&mut self, c: &Clause) -> String {
        let vars: Vec<Var> = c.vars();
        let mut body: Vec<String> = c.constraints.iter().map(|k| self.constraint(k)).collect();
        body.extend(c.body.iter().map(|a| self.atom(a)));
        let head = match &c.head {
            Head::False => "false".to_string(),
            Head::Atom(a) => self.atom(a),
        };
        let matrix = match body.len() {
            0 => head,
            1 => format!("(=> {} {head})", body[0]),
            _ => format!("(=> (and {}) {head})", body.join(" ")),
        };
        if vars.is_empty() {
            return format!("(assert {matrix})");
        }
        let decls: String = vars.iter().map(|v| format!("({} {})", self.var(&v.name), self.sort(&v.sort))).collect();
        format!("(assert (forall ({decls}) {matrix}))")
    }

    fn datatypes(&mut self, out: &mut String) {
        let sorts: Vec<Sort> = self.instances.values().flatten().cloned().collect();
        if sorts.is_empty() {
            return;
        }
        let heads: Vec<String> = sorts.iter().map(|s| format!("({} 0)", self.sort(s))).collect();
        let mut bodies = Vec::new();
        for s in &sorts {
            let mut ctors = Vec::new();
            for (name, args) in self.prog.ctors_of(s) {
                let c = self.ctor(&name, s);
                let fields: String = args
                    .iter()
                    .enumerate()
                    .map(|(i, a)| {
                        let sel = self.names.symbol("selector", &format!("{c}_{i}"));
                        format!(" ({sel} {})", self.sort(a))
                    })
                    .collect();
                ctors.push(format!("({c}{fields})"));
            }
            bodies.push(format!("({})", ctors.join(" ")));
        }
        let _ = writeln!(out, "(declare-datatypes ({}) ({}))", heads.join(" "), bodies.join(" "));
    }
}

fn int(k: i64) -> String {
    if k < 0 {
        format!("(- {})", k.unsigned_abs())
    } else {
        k.to_string()
    }
}

/// Serializes clauses as a HORN script: datatypes, one declaration per predicate,
/// one assertion per clause in order, then `(check-sat)`. Output is a function of
/// the clauses and datatype declarations alone.
pub fn emit_smtlib(cls: &[Clause], prog: &Program) -> Result<SmtScript> {
    let mut e = Emitter { prog, names: Mangling::new(), instances: BTreeMap::new() };
    let mut preds: BTreeMap<String, Vec<Sort>> = BTreeMap::new();
    for c in cls {
        for v in c.vars() {
            e.collect_sort(&v.sort)?;
        }
        let heads = c.head.atom().into_iter();
        for a in heads.chain(&c.body) {
            let sorts: Vec<Sort> = a.args.iter().map(Term::sort).collect();
            for s in &sorts {
                e.collect_sort(s)?;
            }
            match preds.get(&a.pred) {
                Some(prev) if prev != &sorts => return Err(Error::Internal(format!("predicate `{}` used with two signatures", a.pred))),
                Some(_) => {}
                None => {
                    preds.insert(a.pred.clone(), sorts);
                }
            }
        }
    }
    let mut out = String::from("(set-logic HORN)\n");
    e.datatypes(&mut out);
    for (p, sorts) in &preds {
        let sym = e.names.symbol("pred", p);
        let ss: Vec<String> = sorts.iter().map(|s| e.sort(s)).collect();
        let _ = writeln!(out, "(declare-fun {sym} ({}) Bool)", ss.join(" "));
    }
    for c in cls {
        let line = e.clause(c);
        out.push_str(&line);
        out.push('\n');
    }
    out.push_str("(check-sat)\n");
    Ok(SmtScript { text: out, names: e.names })
}
