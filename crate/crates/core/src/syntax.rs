//! S-expression reader and printer for descriptions.
//!
//! ```text
//! term  := "z" | "s" | "(pi" INT INT ")" | "(comp" term term ")"
//!        | "(rec" term term ")" | "(pair" term term ")" | macro
//! macro := "(id" INT ")" | "(diag" INT ")" | "(tw" INT INT ")"
//!        | "(proj" INT "[" INT+ "]" ")" | "(prod" term term ")"
//! ```
//!
//! Macros are expanded while reading; the printer only emits core forms.

use std::fmt;

use crate::error::{ParseError, SyntaxError, TermError};
use crate::term::{
    mk_block_proj, mk_diagonal, mk_identity, mk_multi_proj, mk_twist, Node, ProjSpec, RawTerm,
    Term, TermPath,
};

/// Parses and type checks a description.
pub fn parse(text: &str) -> Result<Term, SyntaxError> {
    let raw = parse_raw(text)?;
    Ok(raw.check()?)
}

/// Parses a description without the final type check. Macro arguments of
/// `prod` are still checked, since the expansion needs their domains.
pub fn parse_raw(text: &str) -> Result<RawTerm, SyntaxError> {
    let mut p = Parser::new(text);
    let t = p.term(&mut Vec::new())?;
    p.skip_ws();
    if let Some(tok) = p.peek_char() {
        return Err(p.error(format!("unexpected `{tok}` after term")).into());
    }
    Ok(t)
}

/// Canonical printed form; `parse(print(t)) == t`.
pub fn print(t: &Term) -> String {
    t.to_string()
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            Node::Zero => f.write_str("z"),
            Node::Succ => f.write_str("s"),
            Node::Proj { n, i } => write!(f, "(pi {n} {i})"),
            Node::Comp(a, b) => write!(f, "(comp {a} {b})"),
            Node::Rec(a, b) => write!(f, "(rec {a} {b})"),
            Node::Pair(a, b) => write!(f, "(pair {a} {b})"),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            src,
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            col: self.col,
            message: message.into(),
        }
    }

    fn peek_char(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek_char()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek_char(), Some(c) if c.is_whitespace()) {
            self.bump();
        }
    }

    fn expect(&mut self, want: char) -> Result<(), ParseError> {
        self.skip_ws();
        match self.peek_char() {
            Some(c) if c == want => {
                self.bump();
                Ok(())
            }
            Some(c) => Err(self.error(format!("expected `{want}`, found `{c}`"))),
            None => Err(self.error(format!("expected `{want}`, found end of input"))),
        }
    }

    fn word(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek_char(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
            self.bump();
        }
        if start == self.pos {
            return Err(match self.peek_char() {
                Some(c) => self.error(format!("unexpected `{c}`")),
                None => self.error("unexpected end of input"),
            });
        }
        Ok(self.src[start..self.pos].to_string())
    }

    fn int(&mut self) -> Result<usize, ParseError> {
        self.skip_ws();
        let (line, col) = (self.line, self.col);
        let w = self.word()?;
        w.parse().map_err(|_| ParseError {
            line,
            col,
            message: format!("expected an integer, found `{w}`"),
        })
    }

    fn macro_term(&self, line: usize, col: usize, r: Result<Term, TermError>) -> Result<RawTerm, SyntaxError> {
        match r {
            Ok(t) => Ok(t.to_raw()),
            Err(TermError::Spec(m)) => Err(ParseError { line, col, message: m }.into()),
            Err(e) => Err(e.into()),
        }
    }

    fn term(&mut self, path: &mut Vec<u8>) -> Result<RawTerm, SyntaxError> {
        self.skip_ws();
        let (line, col) = (self.line, self.col);
        if self.peek_char() != Some('(') {
            let w = self.word()?;
            return match w.as_str() {
                "z" => Ok(RawTerm::Zero),
                "s" => Ok(RawTerm::Succ),
                _ => Err(ParseError {
                    line,
                    col,
                    message: format!("unknown atom `{w}`"),
                }
                .into()),
            };
        }
        self.bump();
        let head = self.word()?;
        let out = match head.as_str() {
            "pi" => {
                let n = self.int()?;
                let i = self.int()?;
                RawTerm::Proj(n, i)
            }
            "comp" | "rec" | "pair" => {
                path.push(0);
                let a = self.term(path)?;
                path.pop();
                path.push(1);
                let b = self.term(path)?;
                path.pop();
                match head.as_str() {
                    "comp" => RawTerm::comp(a, b),
                    "rec" => RawTerm::rec(a, b),
                    _ => RawTerm::pair(a, b),
                }
            }
            "id" => {
                let n = self.int()?;
                self.macro_term(line, col, mk_identity(n))?
            }
            "diag" => {
                let n = self.int()?;
                self.macro_term(line, col, mk_diagonal(n))?
            }
            "tw" => {
                let a = self.int()?;
                let b = self.int()?;
                self.macro_term(line, col, mk_twist(a, b))?
            }
            "proj" => {
                let n = self.int()?;
                self.expect('[')?;
                let mut xs = Vec::new();
                loop {
                    self.skip_ws();
                    if self.peek_char() == Some(']') {
                        self.bump();
                        break;
                    }
                    xs.push(self.int()?);
                }
                let spec = ProjSpec::new(n, xs);
                self.macro_term(line, col, spec.and_then(|s| mk_multi_proj(&s)))?
            }
            "prod" => {
                // f × g = ⟨f ∘ π_first, g ∘ π_last⟩; f sits at [0,0], g at [1,0]
                let mut checked = |p: &mut Self, slot: u8| -> Result<(RawTerm, usize), SyntaxError> {
                    path.extend([slot, 0]);
                    let raw = p.term(path)?;
                    let dom = raw.check().map_err(|e| prefix(e, path))?.arity().dom;
                    path.truncate(path.len() - 2);
                    Ok((raw, dom))
                };
                let (f, a) = checked(self, 0)?;
                let (g, c) = checked(self, 1)?;
                let first = mk_block_proj(a + c, 0, a)?.to_raw();
                let last = mk_block_proj(a + c, a, c)?.to_raw();
                RawTerm::pair(RawTerm::comp(f, first), RawTerm::comp(g, last))
            }
            other => {
                return Err(ParseError {
                    line,
                    col,
                    message: format!("unknown form `{other}`"),
                }
                .into())
            }
        };
        self.expect(')')?;
        Ok(out)
    }
}

fn prefix(e: TermError, path: &[u8]) -> TermError {
    match e {
        TermError::Type { path: p, reason } => {
            let mut full = path.to_vec();
            full.extend(p.0);
            TermError::Type {
                path: TermPath(full),
                reason,
            }
        }
        other => other,
    }
}
