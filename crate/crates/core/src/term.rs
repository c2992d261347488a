//! First-order terms, atoms, clauses and programs.
//!
//! Terms are either variables or compounds; constants are zero-arity
//! compounds. Peano numerals `s(s(...0...))`, list cells `'.'/2` with the
//! constant `[]`, and open lists `[t1,...,tn|V]` are all ordinary compounds
//! with dedicated constructors and views.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use thiserror::Error;

/// A functor or predicate symbol. Clones are reference-counted.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sym(Arc<str>);

impl Sym {
    pub fn new(name: &str) -> Sym {
        Sym(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Sym {
    fn from(name: &str) -> Sym {
        Sym::new(name)
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A logic variable. Identity is the numeric id; the optional name is kept
/// only for printing. Two variables are equal iff their ids are equal.
#[derive(Clone)]
pub struct Var {
    id: u64,
    name: Option<Sym>,
}

impl Var {
    /// Construct a variable with an explicit id. Mostly useful for
    /// canonicalization; fresh variables should come from a [`VarGen`].
    pub fn with_id(id: u64) -> Var {
        Var { id, name: None }
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn name(&self) -> Option<&Sym> {
        self.name.as_ref()
    }
}

impl PartialEq for Var {
    fn eq(&self, other: &Var) -> bool {
        self.id == other.id
    }
}

impl Eq for Var {}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Var) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Var {
    fn cmp(&self, other: &Var) -> std::cmp::Ordering {
        self.id.cmp(&other.id)
    }
}

impl std::hash::Hash for Var {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.id.hash(state)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.name {
            Some(n) => write!(f, "{n}"),
            None => write!(f, "_G{}", self.id),
        }
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Source of fresh variables. One generator per engine session; ids are
/// strictly increasing, so anything created later is disjoint from anything
/// created earlier. Safe to share across worker threads of a session.
pub struct VarGen {
    next: AtomicU64,
}

impl VarGen {
    pub fn new() -> VarGen {
        VarGen {
            next: AtomicU64::new(1),
        }
    }

    pub fn fresh(&self) -> Var {
        Var {
            id: self.next.fetch_add(1, Ordering::Relaxed),
            name: None,
        }
    }

    pub fn fresh_named(&self, name: &str) -> Var {
        Var {
            id: self.next.fetch_add(1, Ordering::Relaxed),
            name: Some(Sym::new(name)),
        }
    }
}

impl Default for VarGen {
    fn default() -> Self {
        VarGen::new()
    }
}

pub const NIL: &str = "[]";
pub const CONS: &str = ".";
pub const SUCC: &str = "s";
pub const ZERO: &str = "0";

/// A first-order term.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Term {
    Var(Var),
    App(Sym, Vec<Term>),
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum TermError {
    #[error("term is not a Peano numeral")]
    NotNumeral,
    #[error("term is not list-shaped (spine ends in a non-variable, non-[] term)")]
    NotListShape,
    #[error("term is neither a list cell nor a variable")]
    NotOpenList,
}

impl Term {
    pub fn var(v: Var) -> Term {
        Term::Var(v)
    }

    pub fn constant(name: &str) -> Term {
        Term::App(Sym::new(name), Vec::new())
    }

    pub fn app(functor: &str, args: Vec<Term>) -> Term {
        Term::App(Sym::new(functor), args)
    }

    pub fn nil() -> Term {
        Term::constant(NIL)
    }

    pub fn cons(head: Term, tail: Term) -> Term {
        Term::App(Sym::new(CONS), vec![head, tail])
    }

    /// Builds `[members... | tail]`.
    pub fn list(members: Vec<Term>, tail: Term) -> Term {
        members
            .into_iter()
            .rev()
            .fold(tail, |acc, m| Term::cons(m, acc))
    }

    /// The numeral `s^n(0)`.
    pub fn peano(n: u64) -> Term {
        let mut t = Term::constant(ZERO);
        for _ in 0..n {
            t = Term::App(Sym::new(SUCC), vec![t]);
        }
        t
    }

    /// Inverse of [`Term::peano`]; fails on anything that is not a closed
    /// numeral (in particular on open numerals like `s(X)`).
    pub fn peano_value(&self) -> Result<u64, TermError> {
        let mut n = 0u64;
        let mut t = self;
        loop {
            match t {
                Term::App(f, args) if f.as_str() == SUCC && args.len() == 1 => {
                    n += 1;
                    t = &args[0];
                }
                Term::App(f, args) if f.as_str() == ZERO && args.is_empty() => return Ok(n),
                _ => return Err(TermError::NotNumeral),
            }
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn as_var(&self) -> Option<&Var> {
        match self {
            Term::Var(v) => Some(v),
            Term::App(..) => None,
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// Decomposes the maximal list spine of `self` into `(members, tail)`.
    ///
    /// A bare variable is an empty open list, so `V` yields `([], V)`.
    /// Fails when the spine ends in a term that is neither a variable nor
    /// `[]`.
    pub fn open_list_view(&self) -> Result<(Vec<&Term>, &Term), TermError> {
        let mut members = Vec::new();
        let mut t = self;
        loop {
            match t {
                Term::App(f, args) if f.as_str() == CONS && args.len() == 2 => {
                    members.push(&args[0]);
                    t = &args[1];
                }
                Term::Var(_) => return Ok((members, t)),
                Term::App(f, args) if f.as_str() == NIL && args.is_empty() => {
                    return Ok((members, t))
                }
                _ => return Err(TermError::NotListShape),
            }
        }
    }

    /// The members of the maximal list-shaped prefix, whatever the spine
    /// ends in. `[a,b|f(c)]` has members `a, b`.
    pub fn spine_members(&self) -> Vec<&Term> {
        let mut members = Vec::new();
        let mut t = self;
        while let Term::App(f, args) = t {
            if f.as_str() == CONS && args.len() == 2 {
                members.push(&args[0]);
                t = &args[1];
            } else {
                break;
            }
        }
        members
    }

    /// The k-th member (1-based) of the list-shaped prefix of `self`, or
    /// `None` when the prefix is shorter than `k`. Works on any term.
    pub fn kth_member(&self, k: usize) -> Option<&Term> {
        debug_assert!(k >= 1);
        let mut t = self;
        let mut i = k;
        loop {
            match t {
                Term::App(f, args) if f.as_str() == CONS && args.len() == 2 => {
                    if i == 1 {
                        return Some(&args[0]);
                    }
                    i -= 1;
                    t = &args[1];
                }
                _ => return None,
            }
        }
    }

    /// Calls `f` on every functor occurrence with its arity.
    pub fn visit_functors(&self, f: &mut dyn FnMut(&Sym, usize)) {
        if let Term::App(sym, args) = self {
            f(sym, args.len());
            for a in args {
                a.visit_functors(f);
            }
        }
    }
}

/// The tail of a list or open list: `tl([h|u]) = u`, and the tail of an
/// empty open list (a bare variable) is a new variable distinct from
/// everything else in the session.
pub fn tail_of(t: &Term, gen: &VarGen) -> Result<Term, TermError> {
    match t {
        Term::App(f, args) if f.as_str() == CONS && args.len() == 2 => Ok(args[1].clone()),
        Term::Var(_) => Ok(Term::Var(gen.fresh())),
        _ => Err(TermError::NotOpenList),
    }
}

/// Anything that exposes its variable occurrences in left-to-right order.
pub trait VisitVars {
    fn visit_vars(&self, f: &mut dyn FnMut(&Var));

    fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.visit_vars(&mut |v| {
            out.insert(v.clone());
        });
        out
    }

    /// Variables in first-occurrence order.
    fn vars_ordered(&self) -> Vec<Var> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        self.visit_vars(&mut |v| {
            if seen.insert(v.id()) {
                out.push(v.clone());
            }
        });
        out
    }
}

impl VisitVars for Term {
    fn visit_vars(&self, f: &mut dyn FnMut(&Var)) {
        match self {
            Term::Var(v) => f(v),
            Term::App(_, args) => {
                for a in args {
                    a.visit_vars(f);
                }
            }
        }
    }
}

impl VisitVars for Atom {
    fn visit_vars(&self, f: &mut dyn FnMut(&Var)) {
        for a in &self.args {
            a.visit_vars(f);
        }
    }
}

impl VisitVars for Clause {
    fn visit_vars(&self, f: &mut dyn FnMut(&Var)) {
        self.head.visit_vars(f);
        for b in &self.body {
            b.visit_vars(f);
        }
    }
}

impl<T: VisitVars> VisitVars for [T] {
    fn visit_vars(&self, f: &mut dyn FnMut(&Var)) {
        for x in self {
            x.visit_vars(f);
        }
    }
}

impl<T: VisitVars> VisitVars for Vec<T> {
    fn visit_vars(&self, f: &mut dyn FnMut(&Var)) {
        self.as_slice().visit_vars(f)
    }
}

/// True iff no variable occurs twice in `x`.
pub fn is_linear<T: VisitVars + ?Sized>(x: &T) -> bool {
    let mut seen = BTreeSet::new();
    let mut linear = true;
    x.visit_vars(&mut |v| {
        if !seen.insert(v.id()) {
            linear = false;
        }
    });
    linear
}

/// True iff `a` and `b` share no variable.
pub fn variable_disjoint<A: VisitVars + ?Sized, B: VisitVars + ?Sized>(a: &A, b: &B) -> bool {
    let va = a.vars();
    let mut disjoint = true;
    b.visit_vars(&mut |v| {
        if va.contains(v) {
            disjoint = false;
        }
    });
    disjoint
}

/// An atom: a predicate applied to terms.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Atom {
    pub pred: Sym,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(pred: &str, args: Vec<Term>) -> Atom {
        Atom {
            pred: Sym::new(pred),
            args,
        }
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    pub fn visit_functors(&self, f: &mut dyn FnMut(&Sym, usize)) {
        for a in &self.args {
            a.visit_functors(f);
        }
    }
}

/// A definite clause `head :- body`. A fact has an empty body.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Clause {
    pub head: Atom,
    pub body: Vec<Atom>,
}

impl Clause {
    pub fn fact(head: Atom) -> Clause {
        Clause {
            head,
            body: Vec::new(),
        }
    }

    pub fn rule(head: Atom, body: Vec<Atom>) -> Clause {
        Clause { head, body }
    }

    pub fn visit_functors(&self, f: &mut dyn FnMut(&Sym, usize)) {
        self.head.visit_functors(f);
        for b in &self.body {
            b.visit_functors(f);
        }
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ProgramError {
    #[error("predicate {pred}/{used} also used with arity {declared}")]
    ArityMismatch {
        pred: Sym,
        declared: usize,
        used: usize,
    },
    #[error("predicate {0} is used in a body but never defined or declared")]
    UndefinedPredicate(Sym),
}

/// An ordered, finite sequence of clauses together with the predicate
/// signatures they define. Every body predicate must be defined (or
/// explicitly declared) and each predicate keeps a single arity.
#[derive(Clone, Debug)]
pub struct Program {
    clauses: Vec<Clause>,
    sigs: std::collections::BTreeMap<Sym, usize>,
}

impl Program {
    pub fn new(clauses: Vec<Clause>) -> Result<Program, ProgramError> {
        Program::with_declarations(clauses, &[])
    }

    /// Like [`Program::new`] but accepts extra predicate declarations for
    /// predicates without clauses.
    pub fn with_declarations(
        clauses: Vec<Clause>,
        declared: &[(Sym, usize)],
    ) -> Result<Program, ProgramError> {
        let mut sigs = std::collections::BTreeMap::new();
        let mut record = |pred: &Sym, arity: usize| -> Result<(), ProgramError> {
            match sigs.get(pred) {
                None => {
                    sigs.insert(pred.clone(), arity);
                    Ok(())
                }
                Some(&a) if a == arity => Ok(()),
                Some(&a) => Err(ProgramError::ArityMismatch {
                    pred: pred.clone(),
                    declared: a,
                    used: arity,
                }),
            }
        };
        for (p, a) in declared {
            record(p, *a)?;
        }
        let mut defined: BTreeSet<Sym> = declared.iter().map(|(p, _)| p.clone()).collect();
        for c in &clauses {
            record(&c.head.pred, c.head.arity())?;
            defined.insert(c.head.pred.clone());
        }
        for c in &clauses {
            for b in &c.body {
                record(&b.pred, b.arity())?;
                if !defined.contains(&b.pred) {
                    return Err(ProgramError::UndefinedPredicate(b.pred.clone()));
                }
            }
        }
        Ok(Program { clauses, sigs })
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn arity(&self, pred: &Sym) -> Option<usize> {
        self.sigs.get(pred).copied()
    }

    pub fn predicates(&self) -> impl Iterator<Item = (&Sym, usize)> {
        self.sigs.iter().map(|(p, a)| (p, *a))
    }

    /// Function symbols occurring in the program's terms, with arities.
    pub fn term_functors(&self) -> std::collections::BTreeMap<Sym, usize> {
        let mut out = std::collections::BTreeMap::new();
        for c in &self.clauses {
            c.visit_functors(&mut |sym, arity| {
                out.entry(sym.clone()).or_insert(arity);
            });
        }
        out
    }
}
