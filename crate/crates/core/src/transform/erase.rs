use crate::ir::{Atom, Clause, Head};

/// Name of the ADT-erased version of `pred`.
pub fn erased_name(pred: &str) -> String {
    format!("{pred}_woADTs")
}

/// Drops the ADT-sorted arguments and renames the predicate.
pub fn erase_atom(a: &Atom) -> Atom {
    Atom::new(erased_name(&a.pred), a.args.iter().filter(|t| !t.sort().is_adt()).cloned().collect())
}

/// Erases the head and every body atom.
pub fn erase_clause(c: &Clause) -> Clause {
    Clause {
        id: c.id,
        head: match &c.head {
            Head::False => Head::False,
            Head::Atom(h) => Head::Atom(erase_atom(h)),
        },
        constraints: c.constraints.clone(),
        body: c.body.iter().map(erase_atom).collect(),
    }
}

/// Keeps the clause and pairs each body atom with its erasure.
pub fn with_erasure(c: &Clause) -> Clause {
    let body = c.body.iter().flat_map(|a| [a.clone(), erase_atom(a)]).collect();
    Clause { body, ..c.clone() }
}

/// Paired forms of every clause followed by the erased forms of the definite ones.
pub fn add_erasure(cls: &[Clause]) -> Vec<Clause> {
    let mut out: Vec<Clause> = cls.iter().map(with_erasure).collect();
    out.extend(cls.iter().filter(|c| !c.is_query()).map(erase_clause));
    out
}
