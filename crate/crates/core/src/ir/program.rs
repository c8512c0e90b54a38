use std::collections::BTreeMap;

use super::names::NameSupply;
use super::term::{Clause, Sort};
use crate::cata::{AbstractionSpec, CataAbstraction};

/// Sort expression inside a data declaration, where parameters are still open.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SortPat {
    Param(String),
    Int,
    Bool,
    Adt(String, Vec<SortPat>),
}

impl SortPat {
    pub fn instantiate(&self, params: &[String], actual: &[Sort]) -> Sort {
        match self {
            SortPat::Param(p) => {
                let i = params.iter().position(|q| q == p).expect("declared parameter");
                actual[i].clone()
            }
            SortPat::Int => Sort::Int,
            SortPat::Bool => Sort::Bool,
            SortPat::Adt(n, args) => Sort::Adt(n.clone(), args.iter().map(|a| a.instantiate(params, actual)).collect()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CtorDecl {
    pub name: String,
    pub args: Vec<SortPat>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataDecl {
    pub name: String,
    pub params: Vec<String>,
    pub ctors: Vec<CtorDecl>,
}

impl DataDecl {
    pub fn builtin_list() -> DataDecl {
        let a = SortPat::Param("A".into());
        DataDecl {
            name: "list".into(),
            params: vec!["A".into()],
            ctors: vec![
                CtorDecl { name: "nil".into(), args: vec![] },
                CtorDecl { name: "cons".into(), args: vec![a.clone(), SortPat::Adt("list".into(), vec![a])] },
            ],
        }
    }
}

/// Argument partition of a catamorphism predicate: `cata(inputs, adt, outputs)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CataSig {
    pub inputs: Vec<Sort>,
    pub adt: Sort,
    pub outputs: Vec<Sort>,
}

impl CataSig {
    pub fn arity(&self) -> usize {
        self.inputs.len() + 1 + self.outputs.len()
    }

    pub fn adt_pos(&self) -> usize {
        self.inputs.len()
    }

    pub fn sorts(&self) -> Vec<Sort> {
        let mut v = self.inputs.clone();
        v.push(self.adt.clone());
        v.extend(self.outputs.iter().cloned());
        v
    }
}

#[derive(Debug, Clone, Default)]
pub struct Program {
    pub datatypes: BTreeMap<String, DataDecl>,
    pub preds: BTreeMap<String, Vec<Sort>>,
    pub catas: BTreeMap<String, CataSig>,
    pub clauses: Vec<Clause>,
    pub queries: Vec<Clause>,
    pub abstractions: Vec<CataAbstraction>,
    pub user_specs: Vec<AbstractionSpec>,
    /// Non-fatal diagnostics collected while checking the source.
    pub warnings: Vec<String>,
    /// Fresh-name supply with every source name reserved.
    pub names: NameSupply,
}

impl Program {
    pub fn is_cata(&self, pred: &str) -> bool {
        self.catas.contains_key(pred)
    }

    /// Constructors of an ADT sort with their argument sorts instantiated.
    pub fn ctors_of(&self, sort: &Sort) -> Vec<(String, Vec<Sort>)> {
        let Sort::Adt(name, actual) = sort else {
            return Vec::new();
        };
        let Some(d) = self.datatypes.get(name) else {
            return Vec::new();
        };
        d.ctors.iter().map(|c| (c.name.clone(), c.args.iter().map(|a| a.instantiate(&d.params, actual)).collect())).collect()
    }

    pub fn ctor_arg_sorts(&self, sort: &Sort, ctor: &str) -> Option<Vec<Sort>> {
        self.ctors_of(sort).into_iter().find(|(n, _)| n == ctor).map(|(_, a)| a)
    }

    /// Clauses whose head predicate is `pred`.
    pub fn clauses_for<'a>(&'a self, pred: &'a str) -> impl Iterator<Item = &'a Clause> + 'a {
        self.clauses.iter().filter(move |c| c.head.atom().is_some_and(|a| a.pred == pred))
    }

    /// Program (non-catamorphism) predicates, in name order.
    pub fn program_preds(&self) -> Vec<String> {
        self.preds.keys().filter(|p| !self.is_cata(p)).cloned().collect()
    }

    pub fn all_pred_names(&self) -> impl Iterator<Item = &str> {
        self.preds.keys().map(String::as_str)
    }
}
