use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Mutex;

use num_bigint::BigInt;

use crate::ir::{DataDecl, Sort, Term};

/// Ground value of any sort.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Int(BigInt),
    Bool(bool),
    Ctor(String, Vec<Value>),
}

impl Value {
    pub fn int(k: i64) -> Value {
        Value::Int(BigInt::from(k))
    }

    /// Number of constructor applications with at least one argument.
    pub fn size(&self) -> usize {
        match self {
            Value::Ctor(_, args) => usize::from(!args.is_empty()) + args.iter().map(Value::size).sum::<usize>(),
            _ => 0,
        }
    }

    pub fn list(items: &[Value]) -> Value {
        items.iter().rev().fold(Value::Ctor("nil".into(), vec![]), |acc, v| Value::Ctor("cons".into(), vec![v.clone(), acc]))
    }

    pub fn int_list(items: &[i64]) -> Value {
        Value::list(&items.iter().map(|k| Value::int(*k)).collect::<Vec<_>>())
    }

    /// Ground term of the given sort denoting this value.
    pub fn to_term(&self, sort: &Sort, dts: &BTreeMap<String, DataDecl>) -> Term {
        match self {
            Value::Int(k) => Term::Int(i64::try_from(k).expect("value fits in i64")),
            Value::Bool(b) => Term::Bool(*b),
            Value::Ctor(name, args) => {
                let Sort::Adt(dn, actual) = sort else { panic!("constructor value at basic sort") };
                let d = &dts[dn];
                let c = d.ctors.iter().find(|c| &c.name == name).expect("constructor of sort");
                let args = args.iter().zip(&c.args).map(|(v, p)| v.to_term(&p.instantiate(&d.params, actual), dts)).collect();
                Term::ctor(name, args, sort.clone())
            }
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(k) => write!(f, "{k}"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Ctor(n, args) if n == "nil" && args.is_empty() => write!(f, "[]"),
            Value::Ctor(n, args) if n == "cons" && args.len() == 2 => {
                let mut items = vec![&args[0]];
                let mut cur = &args[1];
                while let Value::Ctor(m, a) = cur {
                    if m != "cons" || a.len() != 2 {
                        break;
                    }
                    items.push(&a[0]);
                    cur = &a[1];
                }
                write!(f, "[")?;
                for (i, it) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{it}")?;
                }
                match cur {
                    Value::Ctor(m, a) if m == "nil" && a.is_empty() => write!(f, "]"),
                    other => write!(f, "|{other}]"),
                }
            }
            Value::Ctor(n, args) if args.is_empty() => write!(f, "{n}"),
            Value::Ctor(n, args) => {
                write!(f, "{n}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Finite universe: an explicit integer domain and an ADT size bound.
#[derive(Debug)]
pub struct Universe {
    pub ints: Vec<BigInt>,
    pub max_size: usize,
    /// Bound on the magnitude of integers in derived atoms; `None` leaves
    /// computed integers unrestricted.
    pub int_cap: Option<BigInt>,
    datatypes: BTreeMap<String, DataDecl>,
    cache: Mutex<HashMap<(Sort, usize), Vec<Value>>>,
}

impl Clone for Universe {
    fn clone(&self) -> Universe {
        let mut u = Universe::new(&self.datatypes, &[], self.max_size).with_ints(self.ints.clone());
        u.int_cap = self.int_cap.clone();
        u
    }
}

impl Universe {
    pub fn new(datatypes: &BTreeMap<String, DataDecl>, ints: &[i64], max_size: usize) -> Universe {
        let mut dts = datatypes.clone();
        dts.entry("list".into()).or_insert_with(DataDecl::builtin_list);
        Universe {
            ints: ints.iter().map(|k| BigInt::from(*k)).collect(),
            max_size,
            int_cap: None,
            datatypes: dts,
            cache: Mutex::new(HashMap::new()),
        }
    }

    fn with_ints(mut self, ints: Vec<BigInt>) -> Universe {
        self.ints = ints;
        self
    }

    /// Same universe with derived integers limited to `[-cap, cap]`.
    pub fn with_int_cap(mut self, cap: i64) -> Universe {
        self.int_cap = Some(BigInt::from(cap));
        self
    }

    /// Whether a derived value stays inside the bounds: ADT values are those the
    /// universe enumerates, so their integers come from the domain.
    pub fn admits(&self, v: &Value) -> bool {
        match v {
            Value::Ctor(..) => v.size() <= self.max_size && self.in_domain(v),
            _ => self.within_cap(v),
        }
    }

    fn in_domain(&self, v: &Value) -> bool {
        match v {
            Value::Int(k) => self.ints.contains(k),
            Value::Bool(_) => true,
            Value::Ctor(_, args) => args.iter().all(|a| self.in_domain(a)),
        }
    }

    fn within_cap(&self, v: &Value) -> bool {
        match (v, &self.int_cap) {
            (Value::Int(k), Some(c)) => k.magnitude() <= c.magnitude(),
            _ => true,
        }
    }

    pub fn datatypes(&self) -> &BTreeMap<String, DataDecl> {
        &self.datatypes
    }

    /// Every value of `sort` in the universe, duplicate-free, in a fixed order of
    /// nondecreasing size.
    pub fn values(&self, sort: &Sort) -> Vec<Value> {
        match sort {
            Sort::Int => self.ints.iter().cloned().map(Value::Int).collect(),
            Sort::Bool => vec![Value::Bool(false), Value::Bool(true)],
            Sort::Adt(..) => self.adt_values(sort, self.max_size),
        }
    }

    /// ADT values of size at most `n`.
    pub fn adt_values(&self, sort: &Sort, n: usize) -> Vec<Value> {
        if let Some(v) = self.cache.lock().unwrap().get(&(sort.clone(), n)) {
            return v.clone();
        }
        let Sort::Adt(name, actual) = sort else { unreachable!() };
        let d = self.datatypes.get(name).unwrap_or_else(|| panic!("undeclared data type {name}")).clone();
        let mut out = Vec::new();
        for c in &d.ctors {
            if c.args.is_empty() {
                out.push(Value::Ctor(c.name.clone(), vec![]));
                continue;
            }
            if n == 0 {
                continue;
            }
            let sorts: Vec<Sort> = c.args.iter().map(|p| p.instantiate(&d.params, actual)).collect();
            let mut partial: Vec<(Vec<Value>, usize)> = vec![(Vec::new(), 1)];
            for s in &sorts {
                let mut next = Vec::new();
                for (vals, used) in &partial {
                    let choices = match s {
                        Sort::Adt(..) => self.adt_values(s, n - used),
                        _ => self.values(s),
                    };
                    for ch in choices {
                        let sz = used + ch.size();
                        if sz <= n {
                            let mut v = vals.clone();
                            v.push(ch);
                            next.push((v, sz));
                        }
                    }
                }
                partial = next;
            }
            out.extend(partial.into_iter().map(|(vals, _)| Value::Ctor(c.name.clone(), vals)));
        }
        out.sort_by_key(Value::size);
        self.cache.lock().unwrap().insert((sort.clone(), n), out.clone());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn list_enumeration_counts() {
        let u = Universe::new(&BTreeMap::new(), &[0, 1], 3);
        let vals = u.values(&Sort::list_int());
        assert_eq!(vals.len(), 15);
        let set: std::collections::HashSet<_> = vals.iter().collect();
        assert_eq!(set.len(), 15);
        assert!(vals.iter().all(|v| v.size() <= 3));
        assert_eq!(Value::int_list(&[0, 1]).to_string(), "[0,1]");
    }
}
