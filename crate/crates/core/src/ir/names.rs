use std::collections::HashSet;

use super::term::{Sort, Var};

/// Monotone supply of fresh variable, predicate, and clause names for one session.
#[derive(Debug, Clone, Default)]
pub struct NameSupply {
    next_var: u64,
    next_pred: u64,
    next_clause: u32,
    reserved: HashSet<String>,
}

impl NameSupply {
    pub fn new() -> NameSupply {
        NameSupply::default()
    }

    /// Marks a name as taken so it is never produced as a fresh name.
    pub fn reserve(&mut self, name: &str) {
        self.reserved.insert(name.to_string());
    }

    pub fn reserve_all<'a>(&mut self, names: impl IntoIterator<Item = &'a str>) {
        names.into_iter().for_each(|n| self.reserve(n));
    }

    pub fn fresh_var_name(&mut self) -> String {
        loop {
            self.next_var += 1;
            let name = format!("V{}", self.next_var);
            if !self.reserved.contains(&name) {
                return name;
            }
        }
    }

    pub fn fresh_var(&mut self, sort: Sort) -> Var {
        Var::new(self.fresh_var_name(), sort)
    }

    /// Next predicate name of the form `<prefix><k>` not reserved.
    pub fn fresh_pred(&mut self, prefix: &str) -> String {
        loop {
            self.next_pred += 1;
            let name = format!("{prefix}{}", self.next_pred);
            if !self.reserved.contains(&name) {
                self.reserved.insert(name.clone());
                return name;
            }
        }
    }

    /// Predicate name derived from `base`, suffixed only when it clashes.
    pub fn readable_pred(&mut self, base: &str) -> String {
        let mut name = base.to_string();
        let mut k = 1;
        while self.reserved.contains(&name) {
            k += 1;
            name = format!("{base}_{k}");
        }
        self.reserved.insert(name.clone());
        name
    }

    /// Ensures later clause ids are greater than `id`.
    pub fn skip_clause_ids(&mut self, id: u32) {
        self.next_clause = self.next_clause.max(id);
    }

    pub fn next_clause_id(&mut self) -> u32 {
        self.next_clause += 1;
        self.next_clause
    }
}
