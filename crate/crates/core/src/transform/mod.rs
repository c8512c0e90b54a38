//! The fold/unfold transformation that compiles catamorphisms away: definition
//! introduction, unfolding, catamorphism addition, folding, and ADT erasure,
//! driven to the least fixpoint of the definition operator.

mod addcata;
mod define;
mod defs;
mod erase;
mod fold;
mod trace;
mod unfold;

use std::collections::HashMap;

pub use defs::{def_join, def_leq, def_meet, defset_leq, DefSet, Definition};
pub use erase::{add_erasure, erase_atom, erase_clause, erased_name, with_erasure};
pub use trace::{Rule, TraceRecord};

use crate::cata::{generate_spec, AbstractionSpec, SpecMap};
use crate::error::{Error, Result};
use crate::frontend::{cover_clause, ensure_cata_coverage, validate_query};
use crate::ir::normalize::rename_vars;
use crate::ir::{Clause, NameSupply, Program, Sort, Var};

#[derive(Debug, Clone, Copy, Default)]
pub struct TransformOptions {
    /// Name new predicates after their program predicate instead of `new<k>`.
    pub readable_names: bool,
}

/// Result of the transformation.
#[derive(Debug, Clone)]
pub struct TransformOutput {
    /// Folded clauses over the new predicates.
    pub t_w: Vec<Clause>,
    /// ADT-erased clauses, queries included.
    pub t_wo: Vec<Clause>,
    /// Clauses paired with their erasures, plus the erased definite clauses.
    pub t_wwo: Vec<Clause>,
    /// The least fixpoint of the definition operator.
    pub defs: DefSet,
    pub trace: Vec<TraceRecord>,
    /// Number of definition-operator applications until the fixpoint.
    pub iterations: usize,
    /// The input program with coverage predicates added.
    pub program: Program,
    /// The validated queries; `t_w` starts with their folded forms in this order.
    pub queries: Vec<Clause>,
}

impl TransformOutput {
    pub fn trace_text(&self) -> String {
        self.trace.iter().map(|r| format!("{r}\n")).collect()
    }
}

/// Transformation state: the covered program, specs, and a single name supply.
pub struct Transformer {
    pub prog: Program,
    pub specs: SpecMap,
    pub queries: Vec<Clause>,
    pub(crate) names: NameSupply,
    pub(crate) trace: Vec<TraceRecord>,
    pub(crate) readable_names: bool,
}

impl Transformer {
    /// Validates the queries and adds coverage predicates to the program.
    pub fn new(prog: &Program, specs: &SpecMap, opts: TransformOptions) -> Result<Transformer> {
        let mut prog = prog.clone();
        let max_id = prog.clauses.iter().chain(&prog.queries).map(|c| c.id).max().unwrap_or(0);
        prog.names.skip_clause_ids(max_id);
        let mut queries = Vec::new();
        for q in &prog.queries {
            let (n, _) = validate_query(q, &prog, &mut prog.names.clone())?;
            queries.push(n);
        }
        // Query normalization may introduce fresh names; reserve them.
        for q in &queries {
            prog.names.reserve_all(q.vars().iter().map(|v| v.name.as_str()));
        }
        let mut prog = ensure_cata_coverage(&prog);
        let names = std::mem::take(&mut prog.names);
        Ok(Transformer { prog, specs: specs.clone(), queries, names, trace: Vec::new(), readable_names: opts.readable_names })
    }

    pub(crate) fn record(&mut self, rule: Rule, inputs: Vec<u32>, outputs: Vec<u32>, note: Option<String>) {
        self.trace.push(TraceRecord { rule, inputs, outputs, note });
    }

    pub fn trace(&self) -> &[TraceRecord] {
        &self.trace
    }

    /// Spec of `pred`, generated on demand for predicates added during the
    /// transformation. Coverage predicates over sorts without an abstraction get
    /// an empty spec.
    pub(crate) fn spec_for(&mut self, pred: &str) -> Result<Option<AbstractionSpec>> {
        if let Some(s) = self.specs.get(pred) {
            return Ok(Some(s.clone()));
        }
        let Some(sorts) = self.prog.preds.get(pred).cloned() else { return Ok(None) };
        if !sorts.iter().any(Sort::is_adt) {
            return Ok(None);
        }
        let spec = match generate_spec(pred, &sorts, &self.prog) {
            Ok(s) => s,
            Err(_) if crate::frontend::is_true_pred(pred) => AbstractionSpec {
                pred: pred.to_string(),
                head: sorts.iter().enumerate().map(|(i, s)| Var::new(format!("Z{}", i + 1), s.clone())).collect(),
                inputs: Vec::new(),
                atoms: Vec::new(),
            },
            Err(e) => return Err(e),
        };
        self.specs.insert(pred.to_string(), spec.clone());
        Ok(Some(spec))
    }

    pub(crate) fn cover(&mut self, c: &Clause) -> Clause {
        std::mem::swap(&mut self.prog.names, &mut self.names);
        let out = cover_clause(&mut self.prog, c);
        std::mem::swap(&mut self.prog.names, &mut self.names);
        out
    }

    /// Unfolds every definition, adds coverage and catamorphisms to the results
    /// and the queries. Returns the clauses ready for definition and folding.
    pub fn unfold_and_add(&mut self, defs: &DefSet) -> Result<Vec<Clause>> {
        let mut cls = self.queries.clone();
        for d in defs.iter() {
            for c in self.unfold_definition(d)? {
                cls.push(self.cover(&c));
            }
        }
        cls.iter().map(|c| self.add_catamorphisms(c)).collect()
    }

    /// One application of the definition operator; also returns the clauses the
    /// new definitions were derived from.
    pub fn tau_step(&mut self, defs: &DefSet) -> Result<(DefSet, Vec<Clause>)> {
        let cls = self.unfold_and_add(defs)?;
        let next = self.define(&cls, defs)?;
        Ok((next, cls))
    }

    fn iteration_cap(&self) -> usize {
        let preds = self.prog.program_preds().len();
        let longest = self.specs.values().map(|s| s.atoms.len()).max().unwrap_or(0);
        preds * (1 + longest) + 1
    }

    /// Iterates the definition operator from the empty set until the set of
    /// definitions is unchanged up to equivalence.
    pub fn fixpoint(&mut self) -> Result<(DefSet, Vec<Clause>, usize)> {
        let mut defs = DefSet::new();
        let mut iterations = 0;
        loop {
            iterations += 1;
            let (next, cls) = self.tau_step(&defs)?;
            if next.equivalent(&defs, &self.prog.catas) {
                return Ok((defs, cls, iterations));
            }
            if iterations > self.iteration_cap() {
                return Err(Error::Internal(format!("no fixpoint after {iterations} iterations")));
            }
            defs = next;
        }
    }

    /// Runs the whole transformation.
    pub fn run(mut self) -> Result<TransformOutput> {
        let (defs, cls, iterations) = self.fixpoint()?;
        let mut t_w = Vec::new();
        for c in &cls {
            t_w.push(pretty_vars(&self.fold_clause(c, &defs)?));
        }
        let mut t_wwo = add_erasure(&t_w);
        for c in &mut t_wwo {
            c.id = self.names.next_clause_id();
        }
        let mut t_wo: Vec<Clause> = t_w.iter().map(erase_clause).collect();
        for c in &mut t_wo {
            c.id = self.names.next_clause_id();
        }
        self.record(Rule::Erase, t_w.iter().map(|c| c.id).collect(), t_wwo.iter().map(|c| c.id).collect(), None);
        for c in t_w.iter().chain(&t_wo).chain(&t_wwo) {
            if let Some(a) = c.body.iter().find(|a| self.prog.is_cata(&a.pred)) {
                return Err(Error::Internal(format!("catamorphism atom `{a}` in output clause {c}")));
            }
        }
        Ok(TransformOutput { t_w, t_wo, t_wwo, defs, trace: self.trace, iterations, program: self.prog, queries: self.queries })
    }
}

/// Runs the transformation on a checked program.
pub fn cata_abs(prog: &Program, specs: &SpecMap, opts: TransformOptions) -> Result<TransformOutput> {
    Transformer::new(prog, specs, opts)?.run()
}

/// Renames variables to `A, B, ..., Z, A1, ...` in first-occurrence order over the
/// head, the body atoms, then the constraints.
pub fn pretty_vars(c: &Clause) -> Clause {
    let mut order: Vec<Var> = Vec::new();
    if let Some(h) = c.head.atom() {
        h.collect_vars(&mut order);
    }
    c.body.iter().for_each(|a| a.collect_vars(&mut order));
    c.constraints.iter().for_each(|k| k.collect_vars(&mut order));
    let map: HashMap<String, String> = order
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let letter = char::from(b'A' + (i % 26) as u8);
            let name = if i < 26 { letter.to_string() } else { format!("{letter}{}", i / 26) };
            (v.name.clone(), name)
        })
        .collect();
    rename_vars(c, &map)
}
