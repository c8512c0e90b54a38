use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::Zero;

use super::value::{Universe, Value};
use crate::error::{Error, Result};
use crate::ir::{Atom, Clause, Constraint, Head, RelOp, Term, Var};

/// Resource caps for bounded evaluation.
#[derive(Debug, Clone, Copy)]
pub struct Limits {
    pub max_facts: usize,
    pub max_instantiations: u64,
}

impl Default for Limits {
    fn default() -> Limits {
        Limits { max_facts: 400_000, max_instantiations: 40_000_000 }
    }
}

#[derive(Debug, Clone, Default)]
struct PredStore {
    tuples: Vec<(Vec<Value>, u32)>,
    set: std::collections::HashSet<Vec<Value>>,
    index: Vec<HashMap<Value, Vec<usize>>>,
}

impl PredStore {
    fn insert(&mut self, t: Vec<Value>, stamp: u32) -> bool {
        if self.set.contains(&t) {
            return false;
        }
        if self.index.len() < t.len() {
            self.index.resize_with(t.len(), HashMap::new);
        }
        let id = self.tuples.len();
        for (i, v) in t.iter().enumerate() {
            self.index[i].entry(v.clone()).or_default().push(id);
        }
        self.set.insert(t.clone());
        self.tuples.push((t, stamp));
        true
    }
}

/// Set of ground atoms.
#[derive(Debug, Clone, Default)]
pub struct GroundModel {
    preds: BTreeMap<String, PredStore>,
}

impl GroundModel {
    pub fn contains(&self, pred: &str, args: &[Value]) -> bool {
        self.preds.get(pred).is_some_and(|s| s.set.contains(args))
    }

    /// Tuples of `pred`, sorted.
    pub fn facts(&self, pred: &str) -> BTreeSet<Vec<Value>> {
        self.preds.get(pred).map(|s| s.set.iter().cloned().collect()).unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.preds.values().map(|s| s.tuples.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn pred_names(&self) -> impl Iterator<Item = &str> {
        self.preds.keys().map(String::as_str)
    }

    pub fn insert(&mut self, pred: &str, args: Vec<Value>) -> bool {
        self.preds.entry(pred.to_string()).or_default().insert(args, 0)
    }
}

type Env = HashMap<String, Value>;

pub(crate) fn eval_term(t: &Term, env: &Env) -> Option<Value> {
    Some(match t {
        Term::Var(v) => env.get(&v.name)?.clone(),
        Term::Int(k) => Value::int(*k),
        Term::Bool(b) => Value::Bool(*b),
        Term::Ctor { name, args, .. } => Value::Ctor(name.clone(), args.iter().map(|a| eval_term(a, env)).collect::<Option<Vec<_>>>()?),
        Term::Lin(e) => {
            let mut acc = BigInt::from(e.constant);
            for (v, c) in &e.coeffs {
                let Value::Int(x) = env.get(v)? else { return None };
                acc += x * BigInt::from(*c);
            }
            Value::Int(acc)
        }
        Term::Ite(c, a, b) => {
            if eval_cons(c, env)? {
                eval_term(a, env)?
            } else {
                eval_term(b, env)?
            }
        }
    })
}

pub(crate) fn eval_cons(c: &Constraint, env: &Env) -> Option<bool> {
    Some(match c {
        Constraint::Rel(op, a, b) => {
            let (x, y) = (eval_term(a, env)?, eval_term(b, env)?);
            match (op, &x, &y) {
                (RelOp::Eq, _, _) => x == y,
                (_, Value::Int(x), Value::Int(y)) => match op {
                    RelOp::Lt => x < y,
                    RelOp::Le => x <= y,
                    RelOp::Ge => x >= y,
                    RelOp::Gt => x > y,
                    RelOp::Eq => unreachable!(),
                },
                _ => return None,
            }
        }
        Constraint::BoolVar(n) => match env.get(n)? {
            Value::Bool(b) => *b,
            _ => return None,
        },
        Constraint::True => true,
        Constraint::False => false,
        Constraint::Not(x) => !eval_cons(x, env)?,
        Constraint::And(a, b) => eval_cons(a, env)? && eval_cons(b, env)?,
        Constraint::Or(a, b) => eval_cons(a, env)? || eval_cons(b, env)?,
        Constraint::Implies(a, b) => !eval_cons(a, env)? || eval_cons(b, env)?,
        Constraint::Iff(a, b) => eval_cons(a, env)? == eval_cons(b, env)?,
        Constraint::Ite(x, a, b) => {
            if eval_cons(x, env)? {
                eval_cons(a, env)?
            } else {
                eval_cons(b, env)?
            }
        }
    })
}

/// Matches a term against a ground value, binding variables. Basic non-variable
/// terms that cannot be evaluated yet are deferred to `pending`.
fn match_term(t: &Term, v: &Value, env: &mut Env, bound: &mut Vec<String>, pending: &mut Vec<(Term, Value)>) -> bool {
    match (t, v) {
        (Term::Var(x), _) => match env.get(&x.name) {
            Some(w) => w == v,
            None => {
                env.insert(x.name.clone(), v.clone());
                bound.push(x.name.clone());
                true
            }
        },
        (Term::Ctor { name, args, .. }, Value::Ctor(m, vals)) => {
            name == m && args.len() == vals.len() && args.iter().zip(vals).all(|(a, w)| match_term(a, w, env, bound, pending))
        }
        (Term::Ctor { .. }, _) => false,
        (Term::Int(_) | Term::Bool(_), _) => eval_term(t, env).as_ref() == Some(v),
        _ => match eval_term(t, env) {
            Some(w) => &w == v,
            None => {
                pending.push((t.clone(), v.clone()));
                true
            }
        },
    }
}

enum Solve {
    Progress,
    Stuck,
    Contradiction,
}

/// Binds one unbound integer variable of `lhs` so that `lhs = rhs` holds, when
/// `rhs` and the rest of `lhs` are known.
fn solve_eq(lhs: &Term, rhs: &Value, env: &mut Env) -> Solve {
    let Value::Int(r) = rhs else {
        if let Term::Var(x) = lhs {
            if !env.contains_key(&x.name) {
                env.insert(x.name.clone(), rhs.clone());
                return Solve::Progress;
            }
        }
        return Solve::Stuck;
    };
    let Some(lin) = lhs.to_lin() else { return Solve::Stuck };
    let unbound: Vec<(&String, &i64)> = lin.coeffs.iter().filter(|(v, _)| !env.contains_key(*v)).collect();
    let [(var, coeff)] = unbound.as_slice() else { return Solve::Stuck };
    let mut rest = BigInt::from(lin.constant);
    for (v, c) in &lin.coeffs {
        if v != *var {
            let Some(Value::Int(x)) = env.get(v) else { return Solve::Stuck };
            rest += x * BigInt::from(*c);
        }
    }
    let num = r - rest;
    let c = BigInt::from(**coeff);
    if !(&num % &c).is_zero() {
        return Solve::Contradiction;
    }
    env.insert((*var).clone(), Value::Int(num / c));
    Solve::Progress
}

fn solve_step(cs: &[Constraint], pending: &[(Term, Value)], env: &mut Env) -> Solve {
    let mut progressed = false;
    for (t, v) in pending {
        match solve_eq(t, v, env) {
            Solve::Progress => progressed = true,
            Solve::Contradiction => return Solve::Contradiction,
            Solve::Stuck => {}
        }
    }
    for c in cs {
        let r = match c {
            Constraint::Rel(RelOp::Eq, a, b) => match (eval_term(a, env), eval_term(b, env)) {
                (None, Some(vb)) => solve_eq(a, &vb, env),
                (Some(va), None) => solve_eq(b, &va, env),
                _ => Solve::Stuck,
            },
            Constraint::Iff(a, b) => {
                let bind = |x: &Constraint, y: &Constraint, env: &mut Env| match (x, eval_cons(y, env)) {
                    (Constraint::BoolVar(n), Some(val)) if !env.contains_key(n) => {
                        env.insert(n.clone(), Value::Bool(val));
                        Solve::Progress
                    }
                    _ => Solve::Stuck,
                };
                match bind(a, b, env) {
                    Solve::Stuck => bind(b, a, env),
                    other => other,
                }
            }
            Constraint::BoolVar(n) if !env.contains_key(n) => {
                env.insert(n.clone(), Value::Bool(true));
                Solve::Progress
            }
            Constraint::Not(x) => match x.as_ref() {
                Constraint::BoolVar(n) if !env.contains_key(n) => {
                    env.insert(n.clone(), Value::Bool(false));
                    Solve::Progress
                }
                _ => Solve::Stuck,
            },
            _ => Solve::Stuck,
        };
        match r {
            Solve::Progress => progressed = true,
            Solve::Contradiction => return Solve::Contradiction,
            Solve::Stuck => {}
        }
    }
    if progressed {
        Solve::Progress
    } else {
        Solve::Stuck
    }
}

struct Ctx<'a> {
    u: &'a Universe,
    limits: Limits,
    steps: u64,
    /// Head arguments of the clause being evaluated, used to skip ADT values that
    /// would make a head argument exceed the size bound.
    head: &'a [Term],
}

/// Size of `t` counting unbound variables as leaves.
fn size_lower_bound(t: &Term, env: &Env) -> usize {
    match t {
        Term::Var(v) => env.get(&v.name).map_or(0, Value::size),
        Term::Ctor { args, .. } => usize::from(!args.is_empty()) + args.iter().map(|a| size_lower_bound(a, env)).sum::<usize>(),
        _ => 0,
    }
}

impl Ctx<'_> {
    /// Largest size a value for the unbound `v` may have without pushing a head
    /// argument over the bound. Values enumerate in nondecreasing size.
    fn size_budget(&self, v: &Var, env: &Env) -> usize {
        if !v.sort.is_adt() {
            return usize::MAX;
        }
        self.head
            .iter()
            .filter(|t| {
                let mut vs = Vec::new();
                t.collect_vars(&mut vs);
                t.as_var().is_none() && vs.iter().any(|w| w.name == v.name)
            })
            .map(|t| self.u.max_size.saturating_sub(size_lower_bound(t, env)))
            .min()
            .unwrap_or(usize::MAX)
    }

    fn tick(&mut self) -> Result<()> {
        self.steps += 1;
        if self.steps > self.limits.max_instantiations {
            return Err(Error::Budget(format!("more than {} instantiations", self.limits.max_instantiations)));
        }
        Ok(())
    }

    /// Completes `env` over the clause's remaining variables: first by solving
    /// equalities, then by enumerating the universe. Calls `emit` for every
    /// assignment that satisfies all constraints.
    fn complete(
        &mut self,
        vars: &[Var],
        cs: &[Constraint],
        pending: &[(Term, Value)],
        env: &mut Env,
        emit: &mut dyn FnMut(&Env) -> Result<bool>,
    ) -> Result<bool> {
        self.tick()?;
        let snapshot: Vec<String> = env.keys().cloned().collect();
        let restore = |env: &mut Env| env.retain(|k, _| snapshot.contains(k));
        loop {
            match solve_step(cs, pending, env) {
                Solve::Progress => continue,
                Solve::Contradiction => {
                    restore(env);
                    return Ok(false);
                }
                Solve::Stuck => break,
            }
        }
        // Prune early on any constraint that is already decided false.
        if cs.iter().any(|c| eval_cons(c, env) == Some(false)) || pending.iter().any(|(t, v)| eval_term(t, env).is_some_and(|w| &w != v)) {
            restore(env);
            return Ok(false);
        }
        // Enumerate variables that no equality defines first, so that computed
        // values are not confined to the universe.
        let open = |v: &&Var| !env.contains_key(&v.name);
        let next = vars.iter().filter(open).find(|v| !is_defined(cs, &v.name)).or_else(|| vars.iter().find(open)).cloned();
        let stop = match next {
            None => {
                let ok = cs.iter().all(|c| eval_cons(c, env) == Some(true))
                    && pending.iter().all(|(t, v)| eval_term(t, env).as_ref() == Some(v));
                if ok {
                    emit(env)?
                } else {
                    false
                }
            }
            Some(v) => {
                let mut stop = false;
                let budget = self.size_budget(&v, env);
                for val in self.u.values(&v.sort) {
                    if val.size() > budget {
                        break;
                    }
                    env.insert(v.name.clone(), val);
                    if self.complete(vars, cs, pending, env, emit)? {
                        stop = true;
                        break;
                    }
                    env.remove(&v.name);
                }
                stop
            }
        };
        restore(env);
        Ok(stop)
    }

    /// Joins the body atoms not in `done`, always continuing with the atom that has
    /// the fewest candidate tuples under the current bindings. `window(k)` gives
    /// the inclusive stamp range visible to body atom `k`.
    #[allow(clippy::too_many_arguments)]
    fn join(
        &mut self,
        c: &Clause,
        done: u64,
        store: &GroundModel,
        window: &dyn Fn(usize) -> (u32, u32),
        vars: &[Var],
        cs: &[Constraint],
        env: &mut Env,
        pending: &mut Vec<(Term, Value)>,
        emit: &mut dyn FnMut(&Env) -> Result<bool>,
    ) -> Result<bool> {
        let n = c.body.len();
        if n > 64 {
            return Err(Error::Budget(format!("clause {} has more than 64 body atoms", c.id)));
        }
        if done.count_ones() as usize == n {
            let p = pending.clone();
            return self.complete(vars, cs, &p, env, emit);
        }
        let mut best: Option<(usize, Option<&Vec<usize>>, usize)> = None;
        for k in (0..n).filter(|k| done & (1 << k) == 0) {
            let atom = &c.body[k];
            let Some(ps) = store.preds.get(&atom.pred) else {
                return Ok(false);
            };
            let mut candidates: Option<&Vec<usize>> = None;
            for (i, a) in atom.args.iter().enumerate() {
                if let Some(v) = eval_term(a, env) {
                    match ps.index.get(i).and_then(|ix| ix.get(&v)) {
                        Some(ids) => {
                            if candidates.is_none_or(|c| ids.len() < c.len()) {
                                candidates = Some(ids);
                            }
                        }
                        None => return Ok(false),
                    }
                }
            }
            let cost = candidates.map_or(ps.tuples.len(), Vec::len);
            if best.is_none_or(|(_, _, b)| cost < b) {
                best = Some((k, candidates, cost));
            }
        }
        let (k, candidates, _) = best.expect("an atom is left");
        let atom: &Atom = &c.body[k];
        let ps = &store.preds[&atom.pred];
        let (lo, hi) = window(k);
        let all: Vec<usize>;
        let ids: &Vec<usize> = match candidates {
            Some(c) => c,
            None => {
                all = (0..ps.tuples.len()).collect();
                &all
            }
        };
        for &id in ids {
            let (tuple, stamp) = &ps.tuples[id];
            if *stamp < lo || *stamp > hi {
                continue;
            }
            self.tick()?;
            let mut bound = Vec::new();
            let plen = pending.len();
            let ok = atom.args.iter().zip(tuple).all(|(t, v)| match_term(t, v, env, &mut bound, pending))
                && self.head.iter().all(|t| size_lower_bound(t, env) <= self.u.max_size)
                && !cs.iter().any(|x| eval_cons(x, env) == Some(false));
            if ok && self.join(c, done | (1 << k), store, window, vars, cs, env, pending, emit)? {
                return Ok(true);
            }
            for b in bound {
                env.remove(&b);
            }
            pending.truncate(plen);
        }
        Ok(false)
    }
}

fn flat_constraints(c: &Clause) -> Vec<Constraint> {
    let mut out = Vec::new();
    for k in &c.constraints {
        k.clone().flatten_into(&mut out);
    }
    out
}

/// Whether some equality has `name` alone on one side.
fn is_defined(cs: &[Constraint], name: &str) -> bool {
    let is = |t: &Term| matches!(t, Term::Var(v) if v.name == name);
    cs.iter().any(|c| match c {
        Constraint::Rel(RelOp::Eq, a, b) => is(a) || is(b),
        Constraint::Iff(a, b) => matches!(&**a, Constraint::BoolVar(n) if n == name) || matches!(&**b, Constraint::BoolVar(n) if n == name),
        _ => false,
    })
}

/// Least model of definite clauses with every variable ranging over the universe.
/// Integer values computed through equalities may leave the integer domain; ADT
/// values in derived atoms are always universe values, and integers stay within
/// the universe's cap when one is set.
pub fn bounded_least_model(clauses: &[Clause], u: &Universe, limits: Limits) -> Result<GroundModel> {
    let mut model = GroundModel::default();
    let prepared: Vec<(Vec<Var>, Vec<Constraint>)> = clauses.iter().map(|c| (c.vars(), flat_constraints(c))).collect();
    let mut round: u32 = 0;
    let mut steps = 0;
    loop {
        let mut new: Vec<(String, Vec<Value>)> = Vec::new();
        for (c, (vars, cs)) in clauses.iter().zip(&prepared) {
            let Head::Atom(h) = &c.head else { continue };
            let mut ctx = Ctx { u, limits, steps, head: &h.args };
            let mut emit = |env: &Env| -> Result<bool> {
                let args: Option<Vec<Value>> = h.args.iter().map(|t| eval_term(t, env)).collect();
                if let Some(args) = args {
                    if args.iter().all(|v| u.admits(v)) {
                        new.push((h.pred.clone(), args));
                    }
                }
                Ok(false)
            };
            if c.body.is_empty() {
                if round == 0 {
                    ctx.complete(vars, cs, &[], &mut Env::new(), &mut emit)?;
                }
                steps = ctx.steps;
                continue;
            }
            if round == 0 {
                continue;
            }
            let r = round;
            for delta in 0..c.body.len() {
                let window = move |k: usize| -> (u32, u32) {
                    match k.cmp(&delta) {
                        std::cmp::Ordering::Less if r >= 2 => (0, r - 2),
                        std::cmp::Ordering::Less => (1, 0),
                        std::cmp::Ordering::Equal => (r - 1, r - 1),
                        std::cmp::Ordering::Greater => (0, r - 1),
                    }
                };
                ctx.join(c, 0, &model, &window, vars, cs, &mut Env::new(), &mut Vec::new(), &mut emit)?;
            }
            steps = ctx.steps;
        }
        let mut added = false;
        for (p, args) in new {
            if model.preds.entry(p).or_default().insert(args, round) {
                added = true;
            }
        }
        if model.len() > limits.max_facts {
            return Err(Error::Budget(format!("model exceeds {} facts", limits.max_facts)));
        }
        if !added && round > 0 {
            return Ok(model);
        }
        round += 1;
    }
}

/// All head tuples derivable from `c` in one step over a fixed model.
pub fn consequences(c: &Clause, m: &GroundModel, u: &Universe, limits: Limits) -> Result<BTreeSet<Vec<Value>>> {
    let head_args: Vec<Term> = c.head.atom().map(|h| h.args.clone()).unwrap_or_default();
    let mut ctx = Ctx { u, limits, steps: 0, head: &head_args };
    let (vars, cs) = (c.vars(), flat_constraints(c));
    let mut out = BTreeSet::new();
    let mut emit = |env: &Env| -> Result<bool> {
        let args: Option<Vec<Value>> = head_args.iter().map(|t| eval_term(t, env)).collect();
        if let Some(args) = args {
            if args.iter().all(|v| u.admits(v)) {
                out.insert(args);
            }
        }
        Ok(false)
    };
    ctx.join(c, 0, m, &|_| (0, u32::MAX), &vars, &cs, &mut Env::new(), &mut Vec::new(), &mut emit)?;
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QueryVerdict {
    /// A concrete instantiation makes the query body true: the clause set is unsat.
    Violated(String),
    /// No instantiation in the universe; evidence of satisfiability only.
    NoWitnessAtBound,
}

impl QueryVerdict {
    pub fn is_violated(&self) -> bool {
        matches!(self, QueryVerdict::Violated(_))
    }
}

/// Searches the universe for an instantiation of the query body true in `m`.
pub fn check_query_bounded(q: &Clause, m: &GroundModel, u: &Universe, limits: Limits) -> Result<QueryVerdict> {
    let mut ctx = Ctx { u, limits, steps: 0, head: &[] };
    let (vars, cs) = (q.vars(), flat_constraints(q));
    let mut witness = None;
    let mut emit = |env: &Env| -> Result<bool> {
        let mut parts: Vec<String> = vars.iter().filter_map(|v| env.get(&v.name).map(|x| format!("{}={x}", v.name))).collect();
        parts.sort();
        witness = Some(parts.join(", "));
        Ok(true)
    };
    ctx.join(q, 0, m, &|_| (0, u32::MAX), &vars, &cs, &mut Env::new(), &mut Vec::new(), &mut emit)?;
    Ok(match witness {
        Some(w) => QueryVerdict::Violated(w),
        None => QueryVerdict::NoWitnessAtBound,
    })
}
