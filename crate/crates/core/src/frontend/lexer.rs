use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Var(String),
    Ident(String),
    Int(i64),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Bar,
    Dot,
    Neck,
    Arrow,
    Semi,
    Colon,
    Eq,
    Lt,
    Le,
    Ge,
    Gt,
    Plus,
    Minus,
    Star,
    Tilde,
    Amp,
    Implies,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Var(v) => format!("variable `{v}`"),
            Tok::Ident(i) => format!("`{i}`"),
            Tok::Int(k) => format!("integer {k}"),
            Tok::Eof => "end of input".into(),
            t => format!("`{}`", t.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrack => "[",
            Tok::RBrack => "]",
            Tok::Comma => ",",
            Tok::Bar => "|",
            Tok::Dot => ".",
            Tok::Neck => ":-",
            Tok::Arrow => "==>",
            Tok::Semi => ";",
            Tok::Colon => ":",
            Tok::Eq => "=",
            Tok::Lt => "<",
            Tok::Le => "=<",
            Tok::Ge => ">=",
            Tok::Gt => ">",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Tilde => "~",
            Tok::Amp => "&",
            Tok::Implies => "=>",
            _ => "?",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

/// Splits source text into tokens; `%` starts a comment running to end of line.
pub fn tokenize(text: &str) -> Result<Vec<Spanned>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let (start_line, start_col) = (line, col);
        let rest: String = chars[i..chars.len().min(i + 3)].iter().collect();
        let (tok, len) = if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let s: String = chars[i..j].iter().collect();
            let v = s.parse::<i64>().map_err(|_| Error::Syntax { line, col, msg: format!("integer literal `{s}` out of range") })?;
            (Tok::Int(v), j - i)
        } else if c.is_alphabetic() || c == '_' {
            let mut j = i;
            while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            let s: String = chars[i..j].iter().collect();
            let tok = if c.is_uppercase() || c == '_' { Tok::Var(s) } else { Tok::Ident(s) };
            (tok, j - i)
        } else if rest.starts_with("==>") {
            (Tok::Arrow, 3)
        } else if rest.starts_with("=>") {
            (Tok::Implies, 2)
        } else if rest.starts_with("=<") {
            (Tok::Le, 2)
        } else if rest.starts_with(">=") {
            (Tok::Ge, 2)
        } else if rest.starts_with(":-") {
            (Tok::Neck, 2)
        } else {
            let t = match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '[' => Tok::LBrack,
                ']' => Tok::RBrack,
                ',' => Tok::Comma,
                '|' => Tok::Bar,
                '.' => Tok::Dot,
                ';' => Tok::Semi,
                ':' => Tok::Colon,
                '=' => Tok::Eq,
                '<' => Tok::Lt,
                '>' => Tok::Gt,
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '~' => Tok::Tilde,
                '&' => Tok::Amp,
                other => {
                    return Err(Error::Syntax { line, col, msg: format!("unknown operator `{other}`") });
                }
            };
            (t, 1)
        };
        out.push(Spanned { tok, line: start_line, col: start_col });
        i += len;
        col += len;
    }
    out.push(Spanned { tok: Tok::Eof, line, col });
    Ok(out)
}
