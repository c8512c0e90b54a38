use std::collections::HashSet;

use super::ast::{BinOp, CataDirective, Expr, Item, ItemKind, SourceFile};
use super::lexer::{tokenize, Spanned, Tok};
use crate::error::{Error, Result};
use crate::ir::{CtorDecl, DataDecl, RelOp, SortPat};

/// Parses a complete source text.
pub fn parse_program(text: &str) -> Result<SourceFile> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, pos: 0 };
    let mut items = Vec::new();
    let mut seen: HashSet<(String, String)> = HashSet::new();
    while p.peek() != &Tok::Eof {
        let (line, col) = p.here();
        let kind = p.item()?;
        let key = match &kind {
            ItemKind::Data(d) => Some(("data", d.name.clone())),
            ItemKind::Pred(n, _) => Some(("pred", n.clone())),
            ItemKind::Cata(c) => Some(("cata", c.name.clone())),
            ItemKind::CataAbs(s, _) => Some(("cata_abs", format!("{s:?}"))),
            ItemKind::Spec(Expr::Name(n, _), _) => Some(("spec", n.clone())),
            _ => None,
        };
        if let Some((k, n)) = key {
            if !seen.insert((k.to_string(), n.clone())) {
                return Err(Error::Syntax { line, col, msg: format!("duplicate `{k}` directive for `{n}`") });
            }
        }
        items.push(Item { kind, line, col });
    }
    Ok(SourceFile { path: None, items })
}

/// Parses a single expression; used by tests and by the round-trip checks.
pub fn parse_expr(text: &str) -> Result<Expr> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    p.expect(&Tok::Eof)?;
    Ok(e)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn here(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.col)
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, msg: String) -> Result<T> {
        let (line, col) = self.here();
        Err(Error::Syntax { line, col, msg })
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok) -> Result<()> {
        if self.eat(t) {
            Ok(())
        } else {
            self.error(format!("expected {}, found {}", t.describe(), self.peek().describe()))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            t => self.error(format!("expected identifier, found {}", t.describe())),
        }
    }

    fn item(&mut self) -> Result<ItemKind> {
        if self.eat(&Tok::Neck) {
            return self.directive();
        }
        let head = self.expr()?;
        let head = match head {
            Expr::Name(n, args) if n == "false" && args.is_empty() => None,
            h if h.is_atom() => Some(h),
            h => return self.error(format!("clause head `{h}` is not an atom")),
        };
        let body = if self.eat(&Tok::Neck) { self.conj()? } else { Vec::new() };
        self.expect(&Tok::Dot)?;
        Ok(ItemKind::Clause(head, body))
    }

    fn directive(&mut self) -> Result<ItemKind> {
        let kw = self.ident()?;
        let kind = match kw.as_str() {
            "data" => {
                let name = self.ident()?;
                let mut params = Vec::new();
                if self.eat(&Tok::LParen) {
                    loop {
                        match self.bump() {
                            Tok::Var(v) => params.push(v),
                            t => return self.error(format!("expected sort parameter, found {}", t.describe())),
                        }
                        if !self.eat(&Tok::Comma) {
                            break;
                        }
                    }
                    self.expect(&Tok::RParen)?;
                }
                self.expect(&Tok::Arrow)?;
                let mut ctors = Vec::new();
                loop {
                    let cname = self.ident()?;
                    let args = if self.eat(&Tok::LParen) { self.sort_list()? } else { Vec::new() };
                    ctors.push(CtorDecl { name: cname, args });
                    if !self.eat(&Tok::Semi) {
                        break;
                    }
                }
                ItemKind::Data(DataDecl { name, params, ctors })
            }
            "pred" => {
                let name = self.ident()?;
                let sorts = if self.eat(&Tok::LParen) { self.sort_list()? } else { Vec::new() };
                ItemKind::Pred(name, sorts)
            }
            "cata" => {
                let name = self.ident()?;
                self.expect(&Tok::LParen)?;
                let (mut inputs, mut adt, mut outputs) = (Vec::new(), None, Vec::new());
                loop {
                    let label = self.ident()?;
                    self.expect(&Tok::Colon)?;
                    let s = self.sort()?;
                    match (label.as_str(), &adt) {
                        ("in", None) if outputs.is_empty() => inputs.push(s),
                        ("adt", None) => adt = Some(s),
                        ("out", Some(_)) => outputs.push(s),
                        _ => {
                            return self.error(format!(
                                "catamorphism arguments must be ordered `in:`, one `adt:`, then `out:`; unexpected `{label}:`"
                            ))
                        }
                    }
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
                self.expect(&Tok::RParen)?;
                let Some(adt) = adt else {
                    return self.error("catamorphism declaration has no `adt:` argument".into());
                };
                ItemKind::Cata(CataDirective { name, inputs, adt, outputs })
            }
            "cata_abs" => {
                let s = self.sort()?;
                self.expect(&Tok::Arrow)?;
                ItemKind::CataAbs(s, self.conj()?)
            }
            "spec" => {
                let head = self.expr()?;
                if !head.is_atom() {
                    return self.error(format!("spec head `{head}` is not an atom"));
                }
                self.expect(&Tok::Arrow)?;
                ItemKind::Spec(head, self.conj()?)
            }
            other => return self.error(format!("unknown directive `{other}`")),
        };
        self.expect(&Tok::Dot)?;
        Ok(kind)
    }

    fn sort_list(&mut self) -> Result<Vec<SortPat>> {
        let mut out = vec![self.sort()?];
        while self.eat(&Tok::Comma) {
            out.push(self.sort()?);
        }
        self.expect(&Tok::RParen)?;
        Ok(out)
    }

    fn sort(&mut self) -> Result<SortPat> {
        match self.bump() {
            Tok::Var(v) => Ok(SortPat::Param(v)),
            Tok::Ident(n) if n == "int" => Ok(SortPat::Int),
            Tok::Ident(n) if n == "bool" => Ok(SortPat::Bool),
            Tok::Ident(n) => {
                let args = if self.eat(&Tok::LParen) { self.sort_list()? } else { Vec::new() };
                Ok(SortPat::Adt(n, args))
            }
            t => self.error(format!("expected sort, found {}", t.describe())),
        }
    }

    fn conj(&mut self) -> Result<Vec<Expr>> {
        let mut out = vec![self.expr()?];
        while self.eat(&Tok::Comma) {
            out.push(self.expr()?);
        }
        Ok(out)
    }

    fn expr(&mut self) -> Result<Expr> {
        let lhs = self.or()?;
        if self.eat(&Tok::Implies) {
            let rhs = self.expr()?;
            return Ok(Expr::bin(BinOp::Implies, lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Expr> {
        let mut e = self.and()?;
        while self.eat(&Tok::Bar) {
            e = Expr::bin(BinOp::Or, e, self.and()?);
        }
        Ok(e)
    }

    fn and(&mut self) -> Result<Expr> {
        let mut e = self.not()?;
        while self.eat(&Tok::Amp) {
            e = Expr::bin(BinOp::And, e, self.not()?);
        }
        Ok(e)
    }

    fn not(&mut self) -> Result<Expr> {
        if self.eat(&Tok::Tilde) {
            return Ok(Expr::Not(Box::new(self.not()?)));
        }
        self.rel()
    }

    fn rel(&mut self) -> Result<Expr> {
        let lhs = self.add()?;
        let op = match self.peek() {
            Tok::Eq => RelOp::Eq,
            Tok::Lt => RelOp::Lt,
            Tok::Le => RelOp::Le,
            Tok::Ge => RelOp::Ge,
            Tok::Gt => RelOp::Gt,
            _ => return Ok(lhs),
        };
        self.bump();
        let rhs = self.add()?;
        Ok(Expr::bin(BinOp::Rel(op), lhs, rhs))
    }

    fn add(&mut self) -> Result<Expr> {
        let mut e = self.mul()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(e),
            };
            self.bump();
            e = Expr::bin(op, e, self.mul()?);
        }
    }

    fn mul(&mut self) -> Result<Expr> {
        let mut e = self.unary()?;
        while self.eat(&Tok::Star) {
            e = Expr::bin(BinOp::Mul, e, self.unary()?);
        }
        Ok(e)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat(&Tok::Minus) {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Expr> {
        match self.bump() {
            Tok::Int(k) => Ok(Expr::Int(k)),
            Tok::Var(v) => Ok(Expr::Var(v)),
            Tok::Ident(n) => {
                let mut args = Vec::new();
                if self.eat(&Tok::LParen) {
                    args = self.conj()?;
                    self.expect(&Tok::RParen)?;
                }
                Ok(Expr::Name(n, args))
            }
            Tok::LBrack => {
                if self.eat(&Tok::RBrack) {
                    return Ok(Expr::List(Vec::new(), None));
                }
                let mut items = vec![self.and()?];
                while self.eat(&Tok::Comma) {
                    items.push(self.and()?);
                }
                let tail = if self.eat(&Tok::Bar) { Some(Box::new(self.and()?)) } else { None };
                self.expect(&Tok::RBrack)?;
                Ok(Expr::List(items, tail))
            }
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(&Tok::RParen)?;
                Ok(e)
            }
            t => self.error(format!("unexpected {}", t.describe())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_program_clause_and_query() {
        let sf =
            parse_program("double(Xs,Zs) :- eq(Xs,Ys), append(Xs,Ys,Zs).\nfalse :- M = 2*N+1, listcount(X,Zs,M), double(Xs,Zs).").unwrap();
        assert_eq!(sf.items.len(), 2);
        let ItemKind::Clause(Some(h), body) = &sf.items[0].kind else { panic!() };
        assert_eq!(h.to_string(), "double(Xs,Zs)");
        assert_eq!(body.len(), 2);
        let ItemKind::Clause(None, body) = &sf.items[1].kind else { panic!() };
        assert_eq!(body[0].to_string(), "M=2*N+1");
        assert_eq!(sf.items[1].line, 2);
    }

    #[test]
    fn empty_file_is_empty_program() {
        assert!(parse_program("% nothing here\n").unwrap().items.is_empty());
    }

    #[test]
    fn list_sugar_and_directives() {
        let sf = parse_program(
            ":- data tree(A) ==> leaf ; node(tree(A),A,tree(A)).\n:- cata listcount(in:int, adt:list(int), out:int).\nappend([X|Xs],Ys,[X|Zs]) :- append(Xs,Ys,Zs).",
        )
        .unwrap();
        let ItemKind::Data(d) = &sf.items[0].kind else { panic!() };
        assert_eq!(d.ctors.len(), 2);
        let ItemKind::Cata(c) = &sf.items[1].kind else { panic!() };
        assert_eq!((c.inputs.len(), c.outputs.len()), (1, 1));
        assert_eq!(sf.items[2].kind.to_string(), "append([X|Xs],Ys,[X|Zs]) :- append(Xs,Ys,Zs).");
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let e = parse_program("p(X) :- q(X)\n").unwrap_err();
        assert!(matches!(e, Error::Syntax { line: 2, .. }), "{e}");
        let e = parse_program(":- pred p(int).\n:- pred p(int).").unwrap_err();
        assert!(e.to_string().contains("duplicate"), "{e}");
        assert!(parse_program(":- cata f(out:int, adt:list(int)).").is_err());
    }

    #[test]
    fn precedence_of_connectives() {
        let e = parse_expr("A => B | C & ~D = E").unwrap();
        assert_eq!(e.to_string(), "A => B | C & ~D=E");
        let Expr::Bin(BinOp::Implies, _, r) = e else { panic!() };
        assert!(matches!(*r, Expr::Bin(BinOp::Or, ..)));
        assert_eq!(parse_expr("(A | B) & C").unwrap().to_string(), "(A | B) & C");
        assert_eq!(parse_expr("X-(Y+1)").unwrap().to_string(), "X-(Y+1)");
    }
}
