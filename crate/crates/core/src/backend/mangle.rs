use std::collections::{BTreeMap, HashSet};

/// Words a user symbol must not shadow in a HORN script.
const RESERVED: &[&str] = &[
    "!",
    "_",
    "as",
    "let",
    "exists",
    "forall",
    "match",
    "par",
    "and",
    "or",
    "not",
    "xor",
    "ite",
    "true",
    "false",
    "distinct",
    "div",
    "mod",
    "abs",
    "to_real",
    "to_int",
    "is_int",
    "assert",
    "check-sat",
    "declare-fun",
    "declare-datatypes",
    "declare-const",
    "define-fun",
    "set-logic",
    "set-info",
    "set-option",
    "exit",
    "Int",
    "Bool",
    "Real",
    "Array",
    "select",
    "store",
    "BINARY",
    "DECIMAL",
    "HEXADECIMAL",
    "NUMERAL",
    "STRING",
];

fn is_symbol_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || "~!@$%^&*_-+=<>.?/".contains(c)
}

fn is_simple_symbol(s: &str) -> bool {
    !s.is_empty() && !s.starts_with(|c: char| c.is_ascii_digit()) && s.chars().all(is_symbol_char)
}

/// Reversible renaming of source names to SMT-LIB simple symbols. A name that is
/// already a non-reserved simple symbol keeps its spelling; other names get
/// invalid characters replaced and a numeric suffix on collision.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Mangling {
    /// (kind, original) to mangled symbol.
    forward: BTreeMap<(String, String), String>,
    used: HashSet<String>,
}

impl Mangling {
    pub fn new() -> Mangling {
        Mangling::default()
    }

    /// Symbol for `original` in namespace `kind` (`pred`, `ctor`, `sort`, `var`, ...).
    pub fn symbol(&mut self, kind: &str, original: &str) -> String {
        let key = (kind.to_string(), original.to_string());
        if let Some(s) = self.forward.get(&key) {
            return s.clone();
        }
        let mut base: String = original.chars().map(|c| if is_symbol_char(c) { c } else { '_' }).collect();
        if !is_simple_symbol(&base) || RESERVED.contains(&base.as_str()) {
            base = format!("x_{base}");
        }
        let mut sym = base.clone();
        let mut k = 1;
        while self.used.contains(&sym) {
            sym = format!("{base}_{k}");
            k += 1;
        }
        self.used.insert(sym.clone());
        self.forward.insert(key, sym.clone());
        sym
    }

    /// Original name behind a mangled symbol.
    pub fn original(&self, symbol: &str) -> Option<(&str, &str)> {
        self.forward.iter().find(|(_, s)| *s == symbol).map(|((k, o), _)| (k.as_str(), o.as_str()))
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    /// Tab-separated `kind original mangled` rows under a header, sorted.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("kind\toriginal\tmangled\n");
        for ((k, o), s) in &self.forward {
            out.push_str(&format!("{k}\t{o}\t{s}\n"));
        }
        out
    }

    /// Merges the rows of `other`, keeping existing entries.
    pub fn extend(&mut self, other: &Mangling) {
        for (key, s) in &other.forward {
            self.forward.entry(key.clone()).or_insert_with(|| s.clone());
            self.used.insert(s.clone());
        }
    }

    pub fn from_tsv(text: &str) -> Option<Mangling> {
        let mut m = Mangling::new();
        for line in text.lines().skip(1).filter(|l| !l.is_empty()) {
            let mut parts = line.split('\t');
            let (k, o, s) = (parts.next()?, parts.next()?, parts.next()?);
            m.forward.insert((k.to_string(), o.to_string()), s.to_string());
            m.used.insert(s.to_string());
        }
        Some(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_names_survive() {
        let mut m = Mangling::new();
        assert_eq!(m.symbol("pred", "new1_woADTs"), "new1_woADTs");
        assert_eq!(m.symbol("pred", "new1_woADTs"), "new1_woADTs");
    }

    #[test]
    fn reserved_and_invalid_names_are_renamed_reversibly() {
        let mut m = Mangling::new();
        let a = m.symbol("pred", "and");
        let b = m.symbol("pred", "1x");
        let c = m.symbol("pred", "p'");
        let d = m.symbol("pred", "p_");
        assert_eq!((a.as_str(), b.as_str(), c.as_str()), ("x_and", "x_1x", "p_"));
        assert_eq!(d, "p__1");
        assert_eq!(m.original(&d), Some(("pred", "p_")));
        assert_eq!(Mangling::from_tsv(&m.to_tsv()).unwrap(), m);
    }
}
