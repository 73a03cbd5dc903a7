//! Text syntax for terms.
//!
//! ```text
//! term := prod ( "." prod )*
//! prod := atom ( "*" atom )*
//! atom := "id" "[" NAT "]" | IDENT | IDENT "[" NAT "]" | "(" term ")"
//! ```
//!
//! `.` is composition read right to left and binds looser than `*`.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use thiserror::Error;

use crate::gen::Gen;
use crate::term::Term;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at {line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Nat(usize),
    Dot,
    Star,
    LParen,
    RParen,
    LBrack,
    RBrack,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => alloc::format!("identifier `{s}`"),
            Tok::Nat(n) => alloc::format!("number `{n}`"),
            Tok::Dot => "`.`".into(),
            Tok::Star => "`*`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrack => "`[`".into(),
            Tok::RBrack => "`]`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

struct Lexed {
    toks: Vec<(Tok, usize, usize)>,
}

fn lex(src: &str) -> Result<Lexed, ParseError> {
    let mut toks = Vec::new();
    let (mut line, mut col) = (1usize, 1usize);
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l0, c0) = (line, col);
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            col += 1;
            continue;
        }
        let single = match c {
            '.' => Some(Tok::Dot),
            '*' => Some(Tok::Star),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBrack),
            ']' => Some(Tok::RBrack),
            _ => None,
        };
        if let Some(t) = single {
            chars.next();
            col += 1;
            toks.push((t, l0, c0));
            continue;
        }
        if c.is_ascii_digit() {
            let mut n: usize = 0;
            while let Some(&d) = chars.peek() {
                if let Some(v) = d.to_digit(10) {
                    n = n
                        .checked_mul(10)
                        .and_then(|n| n.checked_add(v as usize))
                        .ok_or(ParseError {
                            line: l0,
                            column: c0,
                            message: "number too large".into(),
                        })?;
                    chars.next();
                    col += 1;
                } else {
                    break;
                }
            }
            toks.push((Tok::Nat(n), l0, c0));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if d.is_ascii_alphanumeric() || d == '_' {
                    s.push(d);
                    chars.next();
                    col += 1;
                } else {
                    break;
                }
            }
            toks.push((Tok::Ident(s), l0, c0));
            continue;
        }
        return Err(ParseError {
            line: l0,
            column: c0,
            message: alloc::format!("unexpected character `{c}`"),
        });
    }
    toks.push((Tok::End, line, col));
    Ok(Lexed { toks })
}

struct Parser {
    lexed: Lexed,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.lexed.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.lexed.toks[self.pos].0.clone();
        if self.pos + 1 < self.lexed.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: String) -> ParseError {
        let (_, line, column) = self.lexed.toks[self.pos];
        ParseError {
            line,
            column,
            message,
        }
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.error(alloc::format!(
                "expected {}, found {}",
                want.describe(),
                self.peek().describe()
            )))
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let mut parts = alloc::vec![self.prod()?];
        while *self.peek() == Tok::Dot {
            self.bump();
            parts.push(self.prod()?);
        }
        Ok(Term::compose(parts))
    }

    fn prod(&mut self) -> Result<Term, ParseError> {
        let mut parts = alloc::vec![self.atom()?];
        while *self.peek() == Tok::Star {
            self.bump();
            parts.push(self.atom()?);
        }
        let mut acc = parts.pop().expect("nonempty");
        while let Some(t) = parts.pop() {
            acc = Term::tensor(t, acc);
        }
        Ok(acc)
    }

    fn index(&mut self) -> Result<usize, ParseError> {
        self.expect(Tok::LBrack)?;
        let n = match self.bump() {
            Tok::Nat(n) => n,
            other => {
                self.pos -= 1;
                return Err(self.error(alloc::format!(
                    "expected a number, found {}",
                    other.describe()
                )));
            }
        };
        self.expect(Tok::RBrack)?;
        Ok(n)
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::Ident(name) => {
                self.bump();
                if name == "id" {
                    return Ok(Term::Id(self.index()?));
                }
                if *self.peek() == Tok::LBrack {
                    let i = self.index()?;
                    return Ok(Term::Named {
                        name,
                        index: Some(i),
                    });
                }
                Ok(match Gen::from_name(&name) {
                    Some(g) => Term::Gen(g),
                    None => Term::Named { name, index: None },
                })
            }
            other => Err(self.error(alloc::format!(
                "expected a term, found {}",
                other.describe()
            ))),
        }
    }
}

/// Parses a term.
pub fn parse(src: &str) -> Result<Term, ParseError> {
    let mut p = Parser {
        lexed: lex(src)?,
        pos: 0,
    };
    let t = p.term()?;
    if *p.peek() != Tok::End {
        return Err(p.error(alloc::format!(
            "unexpected {} after term",
            p.peek().describe()
        )));
    }
    Ok(t)
}

/// Prints a term; `parse(&print(t)) == t` for every term.
pub fn print(t: &Term) -> String {
    let mut out = String::new();
    write_term(t, &mut out);
    out
}

fn write_term(t: &Term, out: &mut String) {
    match t {
        Term::Id(n) => {
            out.push_str("id[");
            out.push_str(&n.to_string());
            out.push(']');
        }
        Term::Gen(g) => out.push_str(g.name()),
        Term::Named { name, index } => {
            out.push_str(name);
            if let Some(i) = index {
                out.push('[');
                out.push_str(&i.to_string());
                out.push(']');
            }
        }
        Term::Comp(a, b) => {
            write_wrapped(a, out, !is_leaf(a));
            out.push_str(" . ");
            write_wrapped(b, out, matches!(**b, Term::Tensor(..)));
        }
        Term::Tensor(a, b) => {
            write_wrapped(a, out, !is_leaf(a));
            out.push_str(" * ");
            write_wrapped(b, out, matches!(**b, Term::Comp(..)));
        }
    }
}

fn is_leaf(t: &Term) -> bool {
    !matches!(t, Term::Comp(..) | Term::Tensor(..))
}

fn write_wrapped(t: &Term, out: &mut String, paren: bool) {
    if paren {
        out.push('(');
        write_term(t, out);
        out.push(')');
    } else {
        write_term(t, out);
    }
}
