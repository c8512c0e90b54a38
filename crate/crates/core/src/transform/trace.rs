use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    /// Definition introduction.
    Define,
    /// Unfolding.
    Unfold,
    /// Catamorphism addition.
    AddCata,
    /// Folding.
    Fold,
    /// ADT erasure.
    Erase,
}

/// One rule application: the clause ids it consumed and produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceRecord {
    pub rule: Rule,
    pub inputs: Vec<u32>,
    pub outputs: Vec<u32>,
    pub note: Option<String>,
}

impl fmt::Display for TraceRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ids = |v: &[u32]| if v.is_empty() { "-".to_string() } else { v.iter().map(u32::to_string).collect::<Vec<_>>().join(",") };
        write!(f, "RULE {:?} IN {} OUT {}", self.rule, ids(&self.inputs), ids(&self.outputs))?;
        if let Some(n) = &self.note {
            write!(f, " NOTE {n}")?;
        }
        Ok(())
    }
}
