//! Sort inference by unification over sort terms.

use crate::ir::Sort;

#[derive(Debug, Clone)]
enum Node {
    Free,
    Int,
    Bool,
    Adt(String, Vec<usize>),
}

/// Union-find over sort terms with structural unification.
#[derive(Debug, Default)]
pub(crate) struct SortUf {
    parent: Vec<usize>,
    node: Vec<Node>,
}

impl SortUf {
    pub fn fresh(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.node.push(Node::Free);
        self.parent.len() - 1
    }

    fn make(&mut self, n: Node) -> usize {
        let id = self.fresh();
        self.node[id] = n;
        id
    }

    pub fn int(&mut self) -> usize {
        self.make(Node::Int)
    }

    pub fn bool(&mut self) -> usize {
        self.make(Node::Bool)
    }

    pub fn adt(&mut self, name: &str, params: Vec<usize>) -> usize {
        self.make(Node::Adt(name.to_string(), params))
    }

    pub fn node_of_sort(&mut self, s: &Sort) -> usize {
        match s {
            Sort::Int => self.int(),
            Sort::Bool => self.bool(),
            Sort::Adt(n, ps) => {
                let ids = ps.iter().map(|p| self.node_of_sort(p)).collect();
                self.adt(n, ids)
            }
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    fn occurs(&mut self, x: usize, t: usize) -> bool {
        let t = self.find(t);
        if t == x {
            return true;
        }
        match self.node[t].clone() {
            Node::Adt(_, ps) => ps.into_iter().any(|p| self.occurs(x, p)),
            _ => false,
        }
    }

    /// Unifies two sort terms; the error names both sides.
    pub fn unify(&mut self, a: usize, b: usize) -> Result<(), String> {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return Ok(());
        }
        match (self.node[ra].clone(), self.node[rb].clone()) {
            (Node::Free, _) => {
                if self.occurs(ra, rb) {
                    return Err("infinite sort".into());
                }
                self.parent[ra] = rb;
                Ok(())
            }
            (_, Node::Free) => {
                if self.occurs(rb, ra) {
                    return Err("infinite sort".into());
                }
                self.parent[rb] = ra;
                Ok(())
            }
            (Node::Int, Node::Int) | (Node::Bool, Node::Bool) => {
                self.parent[ra] = rb;
                Ok(())
            }
            (Node::Adt(n, ps), Node::Adt(m, qs)) if n == m && ps.len() == qs.len() => {
                self.parent[ra] = rb;
                for (p, q) in ps.into_iter().zip(qs) {
                    self.unify(p, q)?;
                }
                Ok(())
            }
            _ => Err(format!("{} vs {}", self.show(ra), self.show(rb))),
        }
    }

    /// The resolved sort, or `None` if some part is still unconstrained.
    pub fn resolve(&mut self, x: usize) -> Option<Sort> {
        let r = self.find(x);
        match self.node[r].clone() {
            Node::Free => None,
            Node::Int => Some(Sort::Int),
            Node::Bool => Some(Sort::Bool),
            Node::Adt(n, ps) => {
                let args = ps.into_iter().map(|p| self.resolve(p)).collect::<Option<Vec<_>>>()?;
                Some(Sort::Adt(n, args))
            }
        }
    }

    pub fn show(&mut self, x: usize) -> String {
        let r = self.find(x);
        match self.node[r].clone() {
            Node::Free => "_".into(),
            Node::Int => "int".into(),
            Node::Bool => "bool".into(),
            Node::Adt(n, ps) if ps.is_empty() => n,
            Node::Adt(n, ps) => {
                let inner: Vec<String> = ps.into_iter().map(|p| self.show(p)).collect();
                format!("{n}({})", inner.join(","))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unifies_structurally() {
        let mut uf = SortUf::default();
        let a = uf.fresh();
        let la = uf.adt("list", vec![a]);
        let li = uf.node_of_sort(&Sort::list_int());
        uf.unify(la, li).unwrap();
        assert_eq!(uf.resolve(a), Some(Sort::Int));
        let b = uf.bool();
        assert!(uf.unify(a, b).is_err());
    }

    #[test]
    fn rejects_infinite_sorts() {
        let mut uf = SortUf::default();
        let a = uf.fresh();
        let la = uf.adt("list", vec![a]);
        assert!(uf.unify(a, la).is_err());
    }
}
