use std::collections::{BTreeMap, HashMap};

use super::ast::{BinOp, CataDirective, Expr, Item, ItemKind, SourceFile};
use super::helpers::synthesize_helpers;
use super::infer::SortUf;
use crate::cata::{AbstractionSpec, CataAbstraction};
use crate::error::{Error, Result};
use crate::ir::{
    flatten_head, normalize_clause, Atom, CataSig, Clause, Constraint, DataDecl, Head, Program, RelOp, Sort, SortPat, Term, Var,
};

/// Expression annotated with the union-find id of its sort.
#[derive(Debug, Clone)]
struct Te {
    id: usize,
    kind: Tk,
}

#[derive(Debug, Clone)]
enum Tk {
    Var(String),
    Int(i64),
    Bool(bool),
    Ctor(String, Vec<Te>),
    Ite(Box<Te>, Box<Te>, Box<Te>),
    Bin(BinOp, Box<Te>, Box<Te>),
    Neg(Box<Te>),
    Not(Box<Te>),
}

enum BodyItem {
    Atom(String, Vec<Te>),
    Cons(Te),
}

struct PendingClause {
    line: usize,
    head: Option<(String, Vec<Te>)>,
    body: Vec<BodyItem>,
    scope: HashMap<String, usize>,
}

struct Checker {
    uf: SortUf,
    datatypes: BTreeMap<String, DataDecl>,
    ctor_owner: HashMap<String, String>,
    sigs: BTreeMap<String, Vec<usize>>,
    catas: BTreeMap<String, CataSig>,
}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Sort(format!("line {line}: {}", msg.into())))
}

/// Sort-checks a parsed file and assembles the program. Definite clauses are
/// normalized; queries keep their source shape for query validation.
pub fn sort_check(sf: &SourceFile) -> Result<Program> {
    let mut prog = sort_check_raw(sf)?;
    check_mixing(&prog)?;
    synthesize_helpers(&mut prog)?;
    let mut supply = std::mem::take(&mut prog.names);
    prog.clauses = prog.clauses.iter().map(|c| normalize_clause(&flatten_head(c, &mut supply), &mut supply)).collect();
    prog.names = supply;
    Ok(prog)
}

/// Sort-checks a parsed file without the shape checks and rewriting of
/// [`sort_check`]: clauses keep their source form, and bodies may mix program and
/// catamorphism atoms. Suited to reading clause sets such as expected outputs.
pub fn sort_check_raw(sf: &SourceFile) -> Result<Program> {
    let mut ck = Checker {
        uf: SortUf::default(),
        datatypes: BTreeMap::new(),
        ctor_owner: HashMap::new(),
        sigs: BTreeMap::new(),
        catas: BTreeMap::new(),
    };
    ck.add_data(DataDecl::builtin_list(), 0)?;
    for it in &sf.items {
        if let ItemKind::Data(d) = &it.kind {
            if d.name == "list" {
                if *d != DataDecl::builtin_list() {
                    return err(it.line, "`list` is built in and cannot be redeclared differently");
                }
                continue;
            }
            ck.add_data(d.clone(), it.line)?;
        }
    }
    ck.check_data_decls()?;
    let mut declared: BTreeMap<String, Vec<Sort>> = BTreeMap::new();
    for it in &sf.items {
        match &it.kind {
            ItemKind::Pred(p, ss) => {
                let sorts = ss.iter().map(|s| ck.ground_sort(s, it.line)).collect::<Result<Vec<_>>>()?;
                declared.insert(p.clone(), sorts);
            }
            ItemKind::Cata(c) => ck.add_cata(c, it.line)?,
            _ => {}
        }
    }
    for (p, sorts) in &declared {
        if let Some(sig) = ck.catas.get(p) {
            if sig.sorts() != *sorts {
                return err(0, format!("`:- pred {p}` disagrees with its `:- cata` declaration"));
            }
        }
        let ids = sorts.iter().map(|s| ck.uf.node_of_sort(s)).collect();
        ck.sigs.insert(p.clone(), ids);
    }
    for (p, sig) in ck.catas.clone() {
        if !ck.sigs.contains_key(&p) {
            let ids = sig.sorts().iter().map(|s| ck.uf.node_of_sort(s)).collect();
            ck.sigs.insert(p, ids);
        }
    }

    let mut pending = Vec::new();
    let mut abs_items = Vec::new();
    let mut spec_items = Vec::new();
    for it in &sf.items {
        match &it.kind {
            ItemKind::Clause(h, body) => pending.push(ck.infer_clause(h.as_ref(), body, it)?),
            ItemKind::CataAbs(s, body) => {
                let sort = ck.ground_sort(s, it.line)?;
                let c = ck.infer_clause(None, body, it)?;
                abs_items.push((sort, c));
            }
            ItemKind::Spec(h, body) => spec_items.push(ck.infer_clause(Some(h), body, it)?),
            _ => {}
        }
    }

    let mut prog = Program { datatypes: ck.datatypes.clone(), catas: ck.catas.clone(), ..Program::default() };
    for (p, ids) in ck.sigs.clone() {
        let mut sorts = Vec::new();
        for (i, id) in ids.iter().enumerate() {
            match ck.uf.resolve(*id) {
                Some(s) => sorts.push(s),
                None => return err(0, format!("cannot infer the sort of argument {} of `{p}`", i + 1)),
            }
        }
        prog.preds.insert(p, sorts);
    }

    for (k, pc) in pending.iter_mut().enumerate() {
        let c = ck.build_clause(pc)?;
        let c = Clause { id: k as u32 + 1, ..c };
        if c.is_query() {
            prog.queries.push(c);
        } else {
            prog.clauses.push(c);
        }
    }
    for (sort, pc) in &mut abs_items {
        if prog.abstractions.iter().any(|a| a.sort == *sort) {
            return err(pc.line, format!("two abstractions for sort {sort}"));
        }
        let c = ck.build_clause(pc)?;
        if !c.constraints.is_empty() {
            return err(pc.line, "an abstraction is a conjunction of catamorphism atoms only");
        }
        let a = CataAbstraction::new(sort.clone(), c.body, &prog.catas).map_err(|e| line_err(pc.line, e))?;
        prog.abstractions.push(a);
    }
    for pc in &mut spec_items {
        let c = ck.build_clause(pc)?;
        prog.user_specs.push(spec_from_clause(c, &prog).map_err(|e| line_err(pc.line, e))?);
    }

    for c in prog.clauses.iter().chain(&prog.queries) {
        if c.constraints.iter().any(Constraint::has_nested_ite) {
            prog.warnings.push(format!("clause {}: `ite` nested inside an `ite` condition", c.id));
        }
    }
    for c in prog.clauses.iter().chain(&prog.queries) {
        prog.names.reserve_all(c.vars().iter().map(|v| v.name.as_str()));
    }
    let preds: Vec<String> = prog.preds.keys().cloned().collect();
    prog.names.reserve_all(preds.iter().map(String::as_str));
    Ok(prog)
}

fn line_err(line: usize, e: Error) -> Error {
    match e {
        Error::Abstraction(m) => Error::Abstraction(format!("line {line}: {m}")),
        other => other,
    }
}

/// Reads a `:- spec` directive. Equalities between input variables merge them.
fn spec_from_clause(c: Clause, prog: &Program) -> Result<AbstractionSpec> {
    let head = c.head.atom().expect("spec head").clone();
    let sorts = prog.preds.get(&head.pred).cloned().unwrap_or_default();
    if prog.is_cata(&head.pred) || sorts.len() != head.args.len() {
        return Err(Error::Abstraction(format!("`{}` is not a program predicate", head.pred)));
    }
    let mut ren = crate::ir::Substitution::new();
    for k in &c.constraints {
        match k {
            Constraint::Rel(RelOp::Eq, Term::Var(a), Term::Var(b)) => {
                let (a, b) = (ren.apply_term(&Term::Var(a.clone())), ren.apply_term(&Term::Var(b.clone())));
                if a != b {
                    let Term::Var(bv) = &b else { unreachable!() };
                    ren.bind(&bv.name, a);
                }
            }
            other => return Err(Error::Abstraction(format!("unsupported spec constraint `{other}`"))),
        }
    }
    let zs = head
        .args
        .iter()
        .map(|t| t.as_var().cloned().ok_or_else(|| Error::Abstraction("spec head arguments must be variables".into())))
        .collect::<Result<Vec<Var>>>()?;
    let atoms = c.body.iter().map(|a| ren.apply_atom(a)).collect();
    AbstractionSpec::new(&head.pred, zs, atoms, &prog.catas)
}

/// Definite clauses never have both program and catamorphism atoms in the body,
/// and catamorphism clauses call only catamorphisms.
fn check_mixing(prog: &Program) -> Result<()> {
    for c in &prog.clauses {
        let catas = c.body.iter().filter(|a| prog.is_cata(&a.pred)).count();
        let progs = c.body.len() - catas;
        let head_is_cata = c.head.atom().is_some_and(|h| prog.is_cata(&h.pred));
        if catas > 0 && progs > 0 {
            return Err(Error::Sort(format!("clause {}: body mixes program and catamorphism atoms: {c}", c.id)));
        }
        if head_is_cata && progs > 0 {
            return Err(Error::Schema {
                name: c.head.atom().unwrap().pred.clone(),
                msg: format!("program atom in a catamorphism body: {c}"),
            });
        }
    }
    Ok(())
}

impl Checker {
    fn add_data(&mut self, d: DataDecl, line: usize) -> Result<()> {
        if d.ctors.is_empty() {
            return err(line, format!("data type `{}` has no constructors", d.name));
        }
        if self.datatypes.contains_key(&d.name) {
            return err(line, format!("data type `{}` declared twice", d.name));
        }
        for c in &d.ctors {
            if let Some(other) = self.ctor_owner.insert(c.name.clone(), d.name.clone()) {
                return err(line, format!("constructor `{}` already belongs to `{other}`", c.name));
            }
        }
        self.datatypes.insert(d.name.clone(), d);
        Ok(())
    }

    fn check_data_decls(&self) -> Result<()> {
        fn ok_pat(p: &SortPat, params: &[String], dts: &BTreeMap<String, DataDecl>) -> bool {
            match p {
                SortPat::Param(v) => params.contains(v),
                SortPat::Int | SortPat::Bool => true,
                SortPat::Adt(n, args) => {
                    dts.get(n).is_some_and(|d| d.params.len() == args.len()) && args.iter().all(|a| ok_pat(a, params, dts))
                }
            }
        }
        for d in self.datatypes.values() {
            for c in &d.ctors {
                if !c.args.iter().all(|a| ok_pat(a, &d.params, &self.datatypes)) {
                    return err(0, format!("constructor `{}` of `{}` uses an undeclared sort", c.name, d.name));
                }
            }
        }
        Ok(())
    }

    fn ground_sort(&self, s: &SortPat, line: usize) -> Result<Sort> {
        match s {
            SortPat::Param(p) => err(line, format!("sort parameter `{p}` outside a data declaration")),
            SortPat::Int => Ok(Sort::Int),
            SortPat::Bool => Ok(Sort::Bool),
            SortPat::Adt(n, args) => {
                let Some(d) = self.datatypes.get(n) else {
                    return err(line, format!("unknown sort `{n}`"));
                };
                if d.params.len() != args.len() {
                    return err(line, format!("sort `{n}` expects {} parameters", d.params.len()));
                }
                let args = args.iter().map(|a| self.ground_sort(a, line)).collect::<Result<Vec<_>>>()?;
                Ok(Sort::Adt(n.clone(), args))
            }
        }
    }

    fn add_cata(&mut self, c: &CataDirective, line: usize) -> Result<()> {
        let inputs = c.inputs.iter().map(|s| self.ground_sort(s, line)).collect::<Result<Vec<_>>>()?;
        let adt = self.ground_sort(&c.adt, line)?;
        let outputs = c.outputs.iter().map(|s| self.ground_sort(s, line)).collect::<Result<Vec<_>>>()?;
        if !adt.is_adt() {
            return err(line, format!("catamorphism `{}` must act on an ADT sort", c.name));
        }
        if inputs.iter().any(Sort::is_adt) {
            return err(line, format!("catamorphism `{}` has more than one ADT argument", c.name));
        }
        if let Some(o) = outputs.iter().find(|s| s.is_adt()) {
            return Err(Error::Schema { name: c.name.clone(), msg: format!("ADT output sort {o}") });
        }
        if outputs.is_empty() {
            return Err(Error::Schema { name: c.name.clone(), msg: "no output arguments".into() });
        }
        self.catas.insert(c.name.clone(), CataSig { inputs, adt, outputs });
        Ok(())
    }

    fn sig(&mut self, pred: &str, arity: usize, line: usize) -> Result<Vec<usize>> {
        if let Some(ids) = self.sigs.get(pred) {
            if ids.len() != arity {
                return err(line, format!("`{pred}` used with {arity} arguments but has arity {}", ids.len()));
            }
            return Ok(ids.clone());
        }
        let ids: Vec<usize> = (0..arity).map(|_| self.uf.fresh()).collect();
        self.sigs.insert(pred.to_string(), ids.clone());
        Ok(ids)
    }

    fn infer_atom(&mut self, e: &Expr, scope: &mut HashMap<String, usize>, line: usize) -> Result<(String, Vec<Te>)> {
        let Expr::Name(p, args) = e else { unreachable!("caller checked is_atom") };
        if self.ctor_owner.contains_key(p) {
            return err(line, format!("constructor `{p}` used as a predicate"));
        }
        let ids = self.sig(p, args.len(), line)?;
        let mut out = Vec::new();
        for (i, (a, id)) in args.iter().zip(ids).enumerate() {
            let te = self.infer(a, scope, line)?;
            if let Err(m) = self.uf.unify(te.id, id) {
                return err(line, format!("argument {} of `{p}`: sort mismatch ({m}) in `{e}`", i + 1));
            }
            out.push(te);
        }
        Ok((p.clone(), out))
    }

    fn infer_clause(&mut self, head: Option<&Expr>, body: &[Expr], it: &Item) -> Result<PendingClause> {
        let mut scope = HashMap::new();
        let head = match head {
            Some(h) => Some(self.infer_atom(h, &mut scope, it.line)?),
            None => None,
        };
        let mut items = Vec::new();
        for b in body {
            if b.is_atom() {
                let (p, args) = self.infer_atom(b, &mut scope, it.line)?;
                items.push(BodyItem::Atom(p, args));
            } else {
                let te = self.infer(b, &mut scope, it.line)?;
                let bool_id = self.uf.bool();
                if let Err(m) = self.uf.unify(te.id, bool_id) {
                    return err(it.line, format!("constraint `{b}` is not boolean ({m})"));
                }
                items.push(BodyItem::Cons(te));
            }
        }
        Ok(PendingClause { line: it.line, head, body: items, scope })
    }

    fn expect(&mut self, te: &Te, sort: usize, what: &Expr, line: usize) -> Result<()> {
        self.uf.unify(te.id, sort).or_else(|m| err(line, format!("sort mismatch in `{what}`: {m}")))
    }

    fn infer(&mut self, e: &Expr, scope: &mut HashMap<String, usize>, line: usize) -> Result<Te> {
        let te = match e {
            Expr::Var(v) => {
                let id = *scope.entry(v.clone()).or_insert_with(|| self.uf.fresh());
                Te { id, kind: Tk::Var(v.clone()) }
            }
            Expr::Int(k) => Te { id: self.uf.int(), kind: Tk::Int(*k) },
            Expr::Name(n, args) if (n == "true" || n == "false") && args.is_empty() => {
                Te { id: self.uf.bool(), kind: Tk::Bool(n == "true") }
            }
            Expr::Name(n, args) if n == "ite" => {
                let [c, t, f] = args.as_slice() else {
                    return err(line, "`ite` takes three arguments");
                };
                let (c, t, f) = (self.infer(c, scope, line)?, self.infer(t, scope, line)?, self.infer(f, scope, line)?);
                let b = self.uf.bool();
                self.expect(&c, b, e, line)?;
                self.expect(&t, f.id, e, line)?;
                Te { id: t.id, kind: Tk::Ite(Box::new(c), Box::new(t), Box::new(f)) }
            }
            Expr::Name(n, args) => {
                let Some(dname) = self.ctor_owner.get(n).cloned() else {
                    let what = if self.sigs.contains_key(n) { "predicate" } else { "unknown constructor" };
                    return err(line, format!("{what} `{n}` used as a term"));
                };
                let d = self.datatypes[&dname].clone();
                let ctor = d.ctors.iter().find(|c| &c.name == n).expect("owner");
                if ctor.args.len() != args.len() {
                    return err(line, format!("constructor `{n}` expects {} arguments", ctor.args.len()));
                }
                let params: Vec<usize> = d.params.iter().map(|_| self.uf.fresh()).collect();
                let mut targs = Vec::new();
                for (a, pat) in args.iter().zip(&ctor.args) {
                    let te = self.infer(a, scope, line)?;
                    let want = self.pat_id(pat, &d.params, &params);
                    self.expect(&te, want, e, line)?;
                    targs.push(te);
                }
                Te { id: self.uf.adt(&dname, params), kind: Tk::Ctor(n.clone(), targs) }
            }
            Expr::List(items, tail) => {
                let elem = self.uf.fresh();
                let list = self.uf.adt("list", vec![elem]);
                let mut acc = match tail {
                    Some(t) => {
                        let te = self.infer(t, scope, line)?;
                        self.expect(&te, list, e, line)?;
                        te
                    }
                    None => Te { id: list, kind: Tk::Ctor("nil".into(), vec![]) },
                };
                for it in items.iter().rev() {
                    let te = self.infer(it, scope, line)?;
                    self.expect(&te, elem, e, line)?;
                    acc = Te { id: list, kind: Tk::Ctor("cons".into(), vec![te, acc]) };
                }
                acc
            }
            Expr::Bin(op, a, b) => {
                let (ta, tb) = (self.infer(a, scope, line)?, self.infer(b, scope, line)?);
                let id = match op {
                    BinOp::Rel(RelOp::Eq) => {
                        self.expect(&tb, ta.id, e, line)?;
                        self.uf.bool()
                    }
                    BinOp::Rel(_) => {
                        let i = self.uf.int();
                        self.expect(&ta, i, e, line)?;
                        self.expect(&tb, i, e, line)?;
                        self.uf.bool()
                    }
                    BinOp::And | BinOp::Or | BinOp::Implies => {
                        let bl = self.uf.bool();
                        self.expect(&ta, bl, e, line)?;
                        self.expect(&tb, bl, e, line)?;
                        bl
                    }
                    BinOp::Add | BinOp::Sub | BinOp::Mul => {
                        let i = self.uf.int();
                        self.expect(&ta, i, e, line)?;
                        self.expect(&tb, i, e, line)?;
                        i
                    }
                };
                Te { id, kind: Tk::Bin(*op, Box::new(ta), Box::new(tb)) }
            }
            Expr::Neg(a) => {
                let ta = self.infer(a, scope, line)?;
                let i = self.uf.int();
                self.expect(&ta, i, e, line)?;
                Te { id: i, kind: Tk::Neg(Box::new(ta)) }
            }
            Expr::Not(a) => {
                let ta = self.infer(a, scope, line)?;
                let b = self.uf.bool();
                self.expect(&ta, b, e, line)?;
                Te { id: b, kind: Tk::Not(Box::new(ta)) }
            }
        };
        Ok(te)
    }

    fn pat_id(&mut self, p: &SortPat, names: &[String], ids: &[usize]) -> usize {
        match p {
            SortPat::Param(v) => ids[names.iter().position(|n| n == v).expect("checked")],
            SortPat::Int => self.uf.int(),
            SortPat::Bool => self.uf.bool(),
            SortPat::Adt(n, args) => {
                let a = args.iter().map(|x| self.pat_id(x, names, ids)).collect();
                self.uf.adt(n, a)
            }
        }
    }

    fn sort_of(&mut self, id: usize, line: usize, what: &str) -> Result<Sort> {
        match self.uf.resolve(id) {
            Some(s) => Ok(s),
            None => err(line, format!("cannot infer the sort of `{what}`")),
        }
    }

    fn build_clause(&mut self, pc: &mut PendingClause) -> Result<Clause> {
        for (v, id) in pc.scope.clone() {
            self.sort_of(id, pc.line, &v)?;
        }
        let line = pc.line;
        let head = match &pc.head {
            Some((p, args)) => {
                let args = args.iter().map(|a| self.term(a, line)).collect::<Result<Vec<_>>>()?;
                Head::Atom(Atom::new(p.clone(), args))
            }
            None => Head::False,
        };
        let mut constraints = Vec::new();
        let mut body = Vec::new();
        for it in &pc.body {
            match it {
                BodyItem::Atom(p, args) => {
                    let args = args.iter().map(|a| self.term(a, line)).collect::<Result<Vec<_>>>()?;
                    body.push(Atom::new(p.clone(), args));
                }
                BodyItem::Cons(te) => self.cons(te, line)?.flatten_into(&mut constraints),
            }
        }
        Ok(Clause::new(head, constraints, body))
    }

    fn term(&mut self, te: &Te, line: usize) -> Result<Term> {
        let sort = self.sort_of(te.id, line, "term")?;
        Ok(match &te.kind {
            Tk::Var(v) => Term::var(v.clone(), sort),
            Tk::Int(k) => Term::Int(*k),
            Tk::Bool(b) => Term::Bool(*b),
            Tk::Ctor(n, args) => {
                let args = args.iter().map(|a| self.term(a, line)).collect::<Result<Vec<_>>>()?;
                Term::ctor(n, args, sort)
            }
            Tk::Ite(c, t, f) => Term::Ite(Box::new(self.cons(c, line)?), Box::new(self.term(t, line)?), Box::new(self.term(f, line)?)),
            Tk::Bin(BinOp::Add, a, b) => Term::add(&self.term(a, line)?, &self.term(b, line)?),
            Tk::Bin(BinOp::Sub, a, b) => Term::add(&self.term(a, line)?, &Term::scale(-1, &self.term(b, line)?)),
            Tk::Bin(BinOp::Mul, a, b) => {
                let (ta, tb) = (self.term(a, line)?, self.term(b, line)?);
                match (ta.to_lin().and_then(|l| l.as_const()), tb.to_lin().and_then(|l| l.as_const())) {
                    (Some(k), _) => Term::scale(k, &tb),
                    (_, Some(k)) => Term::scale(k, &ta),
                    _ => return err(line, format!("multiplication needs a constant operand: `{ta}*{tb}`")),
                }
            }
            Tk::Neg(a) => Term::scale(-1, &self.term(a, line)?),
            Tk::Bin(..) | Tk::Not(_) => Term::Ite(Box::new(self.cons(te, line)?), Box::new(Term::Bool(true)), Box::new(Term::Bool(false))),
        })
    }

    fn cons(&mut self, te: &Te, line: usize) -> Result<Constraint> {
        let bx = |c: Constraint| Box::new(c);
        Ok(match &te.kind {
            Tk::Var(v) => Constraint::BoolVar(v.clone()),
            Tk::Bool(true) => Constraint::True,
            Tk::Bool(false) => Constraint::False,
            Tk::Ite(c, t, f) => Constraint::Ite(bx(self.cons(c, line)?), bx(self.cons(t, line)?), bx(self.cons(f, line)?)),
            Tk::Not(a) => Constraint::Not(bx(self.cons(a, line)?)),
            Tk::Bin(BinOp::And, a, b) => Constraint::And(bx(self.cons(a, line)?), bx(self.cons(b, line)?)),
            Tk::Bin(BinOp::Or, a, b) => Constraint::Or(bx(self.cons(a, line)?), bx(self.cons(b, line)?)),
            Tk::Bin(BinOp::Implies, a, b) => Constraint::Implies(bx(self.cons(a, line)?), bx(self.cons(b, line)?)),
            Tk::Bin(BinOp::Rel(op), a, b) => {
                let s = self.sort_of(a.id, line, "operand")?;
                match s {
                    Sort::Bool => Constraint::Iff(bx(self.cons(a, line)?), bx(self.cons(b, line)?)),
                    Sort::Adt(..) => return err(line, format!("equality between ADT terms ({s}) is not a constraint")),
                    Sort::Int => Constraint::Rel(*op, self.term(a, line)?, self.term(b, line)?),
                }
            }
            _ => return err(line, "expected a boolean constraint"),
        })
    }
}
