//! Deterministic printing with the usual sugar: numerals print as
//! integers, list cells as `[a,b|T]`, nameless variables as `_G<id>`.

use std::fmt;

use crate::atomset::canonicalize_from;
use crate::subst::{Substitutable, Substitution};
use crate::term::{Atom, Clause, Term, CONS, NIL};

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Ok(n) = self.peano_value() {
            return write!(f, "{n}");
        }
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::App(sym, args) if sym.as_str() == CONS && args.len() == 2 => {
                write!(f, "[")?;
                write!(f, "{}", args[0])?;
                let mut tail = &args[1];
                loop {
                    match tail {
                        Term::App(s, a) if s.as_str() == CONS && a.len() == 2 => {
                            write!(f, ",{}", a[0])?;
                            tail = &a[1];
                        }
                        Term::App(s, a) if s.as_str() == NIL && a.is_empty() => break,
                        other => {
                            write!(f, "|{other}")?;
                            break;
                        }
                    }
                }
                write!(f, "]")
            }
            Term::App(sym, args) => {
                write!(f, "{sym}")?;
                if !args.is_empty() {
                    write!(f, "(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{a}")?;
                    }
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pred)?;
        if !self.args.is_empty() {
            write!(f, "(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{a}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.head)?;
        if !self.body.is_empty() {
            write!(f, " :- ")?;
            for (i, b) in self.body.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{b}")?;
            }
        }
        write!(f, ".")
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (v, t)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v} = {t}")?;
        }
        write!(f, "}}")
    }
}

pub fn to_string<T: fmt::Display>(x: &T) -> String {
    x.to_string()
}

/// Prints `x` with its variables renamed to `_G1, _G2, ...` by first
/// occurrence, so variants of the same expression print identically.
pub fn canonical_string<T: Substitutable + fmt::Display>(x: &T) -> String {
    canonicalize_from(x, 1).to_string()
}
