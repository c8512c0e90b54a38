//! Bounded semantic comparison of a program with its transformation.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::eval::{bounded_least_model, check_query_bounded, consequences, GroundModel, Limits};
use super::value::{Universe, Value};
use crate::error::Result;
use crate::ir::{Clause, Head, Sort};
use crate::transform::{erased_name, TransformOutput};

/// Outcome of [`compare_transformation`]. Every mismatch list is empty when the
/// transformation agrees with the source at the bound.
#[derive(Debug, Clone, Default)]
pub struct Comparison {
    /// Number of definitions compared and of ground atoms in their ground truths.
    pub definitions: usize,
    pub atoms: usize,
    /// Per definition: atoms derived on one side only.
    pub definition_mismatches: Vec<String>,
    /// Per query: violated in the source, in `T_w`, in `T_wwo`.
    pub queries: Vec<[bool; 3]>,
    /// Erased atoms required by the overapproximation relation but absent from the
    /// model of `T_wo`.
    pub missing_erased: Vec<String>,
    pub erased_checked: usize,
    /// Integer cap used for the erased clause sets.
    pub int_cap: i64,
}

impl Comparison {
    pub fn models_agree(&self) -> bool {
        self.definition_mismatches.is_empty()
    }

    pub fn queries_agree(&self) -> bool {
        self.queries.iter().all(|[s, w, wwo]| s == w && s == wwo)
    }

    pub fn overapproximates(&self) -> bool {
        self.missing_erased.is_empty()
    }

    pub fn is_ok(&self) -> bool {
        self.models_agree() && self.queries_agree() && self.overapproximates()
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "definitions compared: {} ({} ground atoms)", self.definitions, self.atoms)?;
        for m in &self.definition_mismatches {
            writeln!(f, "  model mismatch: {m}")?;
        }
        for (i, [s, w, wwo]) in self.queries.iter().enumerate() {
            let v = |b: &bool| if *b { "violated" } else { "no witness" };
            writeln!(f, "query {}: source {}, T_w {}, T_wwo {}", i + 1, v(s), v(w), v(wwo))?;
        }
        writeln!(f, "erased atoms checked: {} (integer cap {})", self.erased_checked, self.int_cap)?;
        for m in &self.missing_erased {
            writeln!(f, "  missing erased atom: {m}")?;
        }
        Ok(())
    }
}

const MAX_REPORTED: usize = 5;

fn definite(cls: &[Clause]) -> Vec<Clause> {
    cls.iter().filter(|c| matches!(c.head, Head::Atom(_))).cloned().collect()
}

fn queries(cls: &[Clause]) -> Vec<&Clause> {
    cls.iter().filter(|c| c.head == Head::False).collect()
}

fn max_magnitude(m: &GroundModel) -> i64 {
    fn walk(v: &Value, acc: &mut BigInt) {
        match v {
            Value::Int(k) if k.magnitude() > acc.magnitude() => *acc = k.clone(),
            Value::Ctor(_, args) => args.iter().for_each(|a| walk(a, acc)),
            _ => {}
        }
    }
    let mut acc = BigInt::from(0);
    for p in m.pred_names() {
        for t in m.facts(p) {
            t.iter().for_each(|v| walk(v, &mut acc));
        }
    }
    acc.magnitude().to_i64().unwrap_or(i64::MAX)
}

fn show(pred: &str, args: &[Value]) -> String {
    let a: Vec<String> = args.iter().map(Value::to_string).collect();
    format!("{pred}({})", a.join(","))
}

/// Compares the bounded least models of the source program and of the
/// transformed clause sets.
///
/// Every definition `newp(U) <- Catas, A` must denote exactly the ground atoms
/// its body derives in the source model; every query must be violated in the
/// source iff it is violated in `T_w` and in `T_wwo`; and every atom of the
/// `T_w` model must have its erasure in the model of `T_wo`. Erased clauses
/// lose the structural bound on recursion, so their models are computed with
/// integers capped at the largest magnitude seen in the other two models.
pub fn compare_transformation(out: &TransformOutput, u: &Universe, limits: Limits) -> Result<Comparison> {
    let m_src = bounded_least_model(&definite(&out.program.clauses), u, limits)?;
    let m_w = bounded_least_model(&definite(&out.t_w), u, limits)?;
    let mut cmp = Comparison::default();

    for d in out.defs.iter() {
        let truth = consequences(&d.clause(), &m_src, u, limits)?;
        let got = m_w.facts(d.pred());
        cmp.definitions += 1;
        cmp.atoms += truth.len();
        let missing: Vec<_> = truth.difference(&got).take(MAX_REPORTED).map(|t| show(d.pred(), t)).collect();
        let extra: Vec<_> = got.difference(&truth).take(MAX_REPORTED).map(|t| show(d.pred(), t)).collect();
        if !missing.is_empty() || !extra.is_empty() {
            cmp.definition_mismatches.push(format!("{}: missing [{}], unexpected [{}]", d.pred(), missing.join(" "), extra.join(" ")));
        }
    }

    let bound = |m: &GroundModel| max_magnitude(m);
    let ints_bound = u.ints.iter().filter_map(|k| k.magnitude().to_i64()).max().unwrap_or(0);
    cmp.int_cap = bound(&m_src).max(bound(&m_w)).max(ints_bound);
    let capped = u.clone().with_int_cap(cmp.int_cap);
    let m_wo = bounded_least_model(&definite(&out.t_wo), &capped, limits)?;
    let m_wwo = bounded_least_model(&definite(&out.t_wwo), &capped, limits)?;

    let (qw, qwwo) = (queries(&out.t_w), queries(&out.t_wwo));
    for (i, q) in out.queries.iter().enumerate() {
        let s = check_query_bounded(q, &m_src, u, limits)?.is_violated();
        let w = match qw.get(i) {
            Some(c) => check_query_bounded(c, &m_w, u, limits)?.is_violated(),
            None => false,
        };
        let wwo = match qwwo.get(i) {
            Some(c) => check_query_bounded(c, &m_wwo, &capped, limits)?.is_violated(),
            None => false,
        };
        cmp.queries.push([s, w, wwo]);
    }

    for d in out.defs.iter() {
        let sorts: Vec<Sort> = d.head.args.iter().map(|t| t.sort()).collect();
        let erased = erased_name(d.pred());
        for t in m_w.facts(d.pred()) {
            let basic: Vec<Value> = t.iter().zip(&sorts).filter(|(_, s)| !s.is_adt()).map(|(v, _)| v.clone()).collect();
            cmp.erased_checked += 1;
            if !m_wo.contains(&erased, &basic) && cmp.missing_erased.len() < MAX_REPORTED {
                cmp.missing_erased.push(show(&erased, &basic));
            }
        }
    }
    Ok(cmp)
}
