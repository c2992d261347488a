//! A workbench for definite-clause logic programs: top-down SLD answers,
//! non-ground bottom-up models, and mechanized bounded checks of program
//! correctness and completeness against pluggable specifications, with an
//! executable n-queens corpus.

pub mod atomset;
pub mod nqueens;
pub mod parse;
pub mod print;
pub mod report;
pub mod semantics;
pub mod solve;
pub mod spec;
pub mod subst;
pub mod term;
pub mod unify;

pub use atomset::{canonicalize, is_variant, AtomSet};
pub use subst::{rename_apart, rename_fresh, Substitutable, Substitution};
pub use term::{
    is_linear, tail_of, variable_disjoint, Atom, Clause, Program, Sym, Term, Var, VarGen,
    VisitVars,
};
