//! Parser for the clause syntax used throughout: facts `h.`, rules
//! `h :- b1, ..., bn.`, lowercase functors, uppercase (or `_`) variables,
//! list sugar `[a,b|T]`, `%` line comments, and integer literals as sugar
//! for Peano numerals. Each `_` denotes a distinct fresh variable; named
//! variables are scoped to their clause (or query).

use std::collections::HashMap;

use thiserror::Error;

use crate::solve::Query;
use crate::term::{Atom, Clause, Program, ProgramError, Term, Var, VarGen};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
#[error("parse error at {line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Variable(String),
    Int(u64),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Bar,
    Dot,
    If, // :-
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Lexer<'a> {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn error(&self, msg: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            col: self.col,
            msg: msg.into(),
        }
    }

    /// Next token with the position where it starts.
    fn next_tok(&mut self) -> Result<Option<(Tok, usize, usize)>, ParseError> {
        loop {
            match self.peek() {
                None => return Ok(None),
                Some(b' ') | Some(b'\t') | Some(b'\r') | Some(b'\n') => {
                    self.bump();
                }
                Some(b'%') => {
                    while let Some(c) = self.bump() {
                        if c == b'\n' {
                            break;
                        }
                    }
                }
                Some(_) => break,
            }
        }
        let (line, col) = (self.line, self.col);
        let c = self.peek().unwrap();
        let tok = match c {
            b'(' => {
                self.bump();
                Tok::LParen
            }
            b')' => {
                self.bump();
                Tok::RParen
            }
            b'[' => {
                self.bump();
                Tok::LBracket
            }
            b']' => {
                self.bump();
                Tok::RBracket
            }
            b',' => {
                self.bump();
                Tok::Comma
            }
            b'|' => {
                self.bump();
                Tok::Bar
            }
            b'.' => {
                self.bump();
                Tok::Dot
            }
            b':' => {
                self.bump();
                if self.peek() == Some(b'-') {
                    self.bump();
                    Tok::If
                } else {
                    return Err(self.error("expected '-' after ':'"));
                }
            }
            b'0'..=b'9' => {
                let mut n: u64 = 0;
                while let Some(d @ b'0'..=b'9') = self.peek() {
                    n = n * 10 + (d - b'0') as u64;
                    // Literals expand to unary numerals, so keep them
                    // shallow enough for the recursive term representation.
                    if n > 5_000 {
                        return Err(self.error("integer literal too large to expand as a numeral"));
                    }
                    self.bump();
                }
                Tok::Int(n)
            }
            b'a'..=b'z' => {
                let mut s = String::new();
                while let Some(c) = self.peek() {
                    if c.is_ascii_alphanumeric() || c == b'_' {
                        s.push(c as char);
                        self.bump();
                    } else {
                        break;
                    }
                }
                Tok::Ident(s)
            }
            b'A'..=b'Z' | b'_' => {
                let mut s = String::new();
                while let Some(c) = self.peek() {
                    if c.is_ascii_alphanumeric() || c == b'_' {
                        s.push(c as char);
                        self.bump();
                    } else {
                        break;
                    }
                }
                Tok::Variable(s)
            }
            other => {
                return Err(self.error(format!("unexpected character '{}'", other as char)));
            }
        };
        Ok(Some((tok, line, col)))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    lookahead: Option<(Tok, usize, usize)>,
    gen: &'a VarGen,
    /// Named variables of the clause being parsed.
    scope: HashMap<String, Var>,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, gen: &'a VarGen) -> Parser<'a> {
        Parser {
            lexer: Lexer::new(src),
            lookahead: None,
            gen,
            scope: HashMap::new(),
        }
    }

    fn peek(&mut self) -> Result<Option<&(Tok, usize, usize)>, ParseError> {
        if self.lookahead.is_none() {
            self.lookahead = self.lexer.next_tok()?;
        }
        Ok(self.lookahead.as_ref())
    }

    fn next(&mut self) -> Result<Option<(Tok, usize, usize)>, ParseError> {
        if self.lookahead.is_none() {
            self.lookahead = self.lexer.next_tok()?;
        }
        Ok(self.lookahead.take())
    }

    fn error_at(&self, line: usize, col: usize, msg: impl Into<String>) -> ParseError {
        ParseError {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn error_here(&mut self, msg: impl Into<String>) -> ParseError {
        let (line, col) = match &self.lookahead {
            Some((_, l, c)) => (*l, *c),
            None => (self.lexer.line, self.lexer.col),
        };
        ParseError {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        match self.next()? {
            Some((tok, _, _)) if tok == want => Ok(()),
            Some((tok, line, col)) => {
                Err(self.error_at(line, col, format!("expected {what}, found {tok:?}")))
            }
            None => {
                let e = self.error_here(format!("expected {what}, found end of input"));
                Err(e)
            }
        }
    }

    fn variable(&mut self, name: &str) -> Term {
        if name == "_" {
            return Term::Var(self.gen.fresh());
        }
        let v = self
            .scope
            .entry(name.to_string())
            .or_insert_with(|| self.gen.fresh_named(name));
        Term::Var(v.clone())
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.next()? {
            Some((Tok::Variable(name), _, _)) => Ok(self.variable(&name)),
            Some((Tok::Int(n), _, _)) => Ok(Term::peano(n)),
            Some((Tok::Ident(f), _, _)) => {
                if matches!(self.peek()?, Some((Tok::LParen, _, _))) {
                    self.next()?;
                    let args = self.term_seq()?;
                    self.expect(Tok::RParen, "')'")?;
                    Ok(Term::App(crate::term::Sym::new(&f), args))
                } else {
                    Ok(Term::constant(&f))
                }
            }
            Some((Tok::LBracket, _, _)) => self.list_tail(),
            Some((tok, line, col)) => {
                Err(self.error_at(line, col, format!("expected a term, found {tok:?}")))
            }
            None => Err(self.error_here("expected a term, found end of input")),
        }
    }

    /// Everything after '[': members, optional '|tail', ']'.
    fn list_tail(&mut self) -> Result<Term, ParseError> {
        if matches!(self.peek()?, Some((Tok::RBracket, _, _))) {
            self.next()?;
            return Ok(Term::nil());
        }
        let members = self.term_seq()?;
        let tail = if matches!(self.peek()?, Some((Tok::Bar, _, _))) {
            self.next()?;
            self.term()?
        } else {
            Term::nil()
        };
        self.expect(Tok::RBracket, "']'")?;
        Ok(Term::list(members, tail))
    }

    fn term_seq(&mut self) -> Result<Vec<Term>, ParseError> {
        let mut out = vec![self.term()?];
        while matches!(self.peek()?, Some((Tok::Comma, _, _))) {
            self.next()?;
            out.push(self.term()?);
        }
        Ok(out)
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        match self.next()? {
            Some((Tok::Ident(pred), _, _)) => {
                let args = if matches!(self.peek()?, Some((Tok::LParen, _, _))) {
                    self.next()?;
                    let args = self.term_seq()?;
                    self.expect(Tok::RParen, "')'")?;
                    args
                } else {
                    Vec::new()
                };
                Ok(Atom {
                    pred: crate::term::Sym::new(&pred),
                    args,
                })
            }
            Some((tok, line, col)) => Err(self.error_at(
                line,
                col,
                format!("expected a predicate name, found {tok:?}"),
            )),
            None => Err(self.error_here("expected a predicate name, found end of input")),
        }
    }

    fn atom_seq(&mut self) -> Result<Vec<Atom>, ParseError> {
        let mut out = vec![self.atom()?];
        while matches!(self.peek()?, Some((Tok::Comma, _, _))) {
            self.next()?;
            out.push(self.atom()?);
        }
        Ok(out)
    }

    fn clause(&mut self) -> Result<Clause, ParseError> {
        self.scope.clear();
        let head = self.atom()?;
        let body = if matches!(self.peek()?, Some((Tok::If, _, _))) {
            self.next()?;
            self.atom_seq()?
        } else {
            Vec::new()
        };
        self.expect(Tok::Dot, "'.'")?;
        Ok(Clause { head, body })
    }

    fn program(&mut self) -> Result<Vec<Clause>, ParseError> {
        let mut clauses = Vec::new();
        while self.peek()?.is_some() {
            clauses.push(self.clause()?);
        }
        Ok(clauses)
    }
}

/// Program source text together with where it came from. Parsing, then
/// printing, then parsing again yields an alpha-equivalent program.
#[derive(Clone, Debug)]
pub struct SourceProgram {
    pub text: String,
    pub origin: SourceOrigin,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SourceOrigin {
    File(std::path::PathBuf),
    Inline,
}

impl SourceProgram {
    pub fn from_file(path: impl Into<std::path::PathBuf>) -> std::io::Result<SourceProgram> {
        let path = path.into();
        Ok(SourceProgram {
            text: std::fs::read_to_string(&path)?,
            origin: SourceOrigin::File(path),
        })
    }

    pub fn inline(text: &str) -> SourceProgram {
        SourceProgram {
            text: text.to_string(),
            origin: SourceOrigin::Inline,
        }
    }

    pub fn parse(&self, gen: &VarGen) -> Result<Program, ParseError> {
        parse_program(&self.text, gen)
    }
}

/// Parses a whole program. Fresh variables come from `gen`, one scope per
/// clause.
pub fn parse_program(text: &str, gen: &VarGen) -> Result<Program, ParseError> {
    let clauses = Parser::new(text, gen).program()?;
    Program::new(clauses).map_err(|e: ProgramError| ParseError {
        line: 0,
        col: 0,
        msg: e.to_string(),
    })
}

/// Parses the clauses of a program without validating predicate usage.
pub fn parse_clauses(text: &str, gen: &VarGen) -> Result<Vec<Clause>, ParseError> {
    Parser::new(text, gen).program()
}

/// Parses a query: a nonempty comma-separated atom sequence, with or
/// without a trailing '.'.
pub fn parse_query(text: &str, gen: &VarGen) -> Result<Query, ParseError> {
    let mut p = Parser::new(text, gen);
    let atoms = p.atom_seq()?;
    if matches!(p.peek()?, Some((Tok::Dot, _, _))) {
        p.next()?;
    }
    if let Some((tok, line, col)) = p.next()? {
        return Err(p.error_at(line, col, format!("unexpected trailing {tok:?}")));
    }
    Ok(Query { atoms })
}

/// Parses a single term; handy in tests.
pub fn parse_term(text: &str, gen: &VarGen) -> Result<Term, ParseError> {
    let mut p = Parser::new(text, gen);
    let t = p.term()?;
    if let Some((tok, line, col)) = p.next()? {
        return Err(p.error_at(line, col, format!("unexpected trailing {tok:?}")));
    }
    Ok(t)
}
