//! Bottom-up evaluation of the non-ground immediate consequence operator,
//! its bounded fixpoint, and the ground-instance bridge to the least
//! Herbrand model.
//!
//! The operator fires a clause against tuples of variants of stored atoms:
//! the clause and the tuple atoms are renamed so that all n+1 items are
//! pairwise variable disjoint, the body is unified with the tuple, and the
//! instantiated head is collected. Results are kept as variant-quotient
//! sets, which the operator preserves (any renaming of a result is a
//! result).

use std::collections::{BTreeMap, BTreeSet};

use crate::atomset::AtomSet;
use crate::subst::{rename_fresh, Substitutable, Substitution};
use crate::term::{Atom, Clause, Program, Sym, Term, Var};
use crate::unify::mgu_atom_seqs;
use crate::VarGen;

/// A variant-quotiented set of atoms together with the iteration index
/// that produced it.
#[derive(Clone, Debug)]
pub struct SInterpretation {
    pub atoms: AtomSet,
    pub iteration: usize,
}

impl SInterpretation {
    pub fn empty() -> SInterpretation {
        SInterpretation {
            atoms: AtomSet::new(),
            iteration: 0,
        }
    }
}

/// All consequences of a single clause under the given interpretation:
/// `{ head*theta | theta = mgu(body, (A1,...,An)), Ai fresh variants of
/// stored atoms }`, variant-deduplicated. Tuples are drawn with repetition
/// of classes; each position gets its own fresh variant. For a unary
/// clause the result is the singleton class of the head.
pub fn tpi_clause(clause: &Clause, interp: &AtomSet, gen: &VarGen) -> AtomSet {
    let mut out = AtomSet::new();
    tpi_clause_into(clause, interp, gen, &mut out, None);
    out
}

/// Returns false when `budget` was hit before all tuples were tried.
fn tpi_clause_into(
    clause: &Clause,
    interp: &AtomSet,
    gen: &VarGen,
    out: &mut AtomSet,
    budget: Option<usize>,
) -> bool {
    let n = clause.body.len();
    if n == 0 {
        out.insert(rename_fresh(&clause.head, gen));
        return budget.is_none_or(|b| out.len() <= b);
    }
    // Candidates per body position; a predicate mismatch can never unify.
    let cands: Vec<Vec<&Atom>> = clause
        .body
        .iter()
        .map(|b| {
            interp
                .iter()
                .filter(|a| a.pred == b.pred && a.arity() == b.arity())
                .collect()
        })
        .collect();
    if cands.iter().any(|c| c.is_empty()) {
        return true;
    }
    let mut idx = vec![0usize; n];
    loop {
        let fresh_clause = rename_fresh(clause, gen);
        let tuple: Vec<Atom> = idx
            .iter()
            .enumerate()
            .map(|(pos, &j)| rename_fresh(cands[pos][j], gen))
            .collect();
        if let Some(theta) = mgu_atom_seqs(&fresh_clause.body, &tuple) {
            out.insert(fresh_clause.head.apply(&theta));
            if let Some(b) = budget {
                if out.len() > b {
                    return false;
                }
            }
        }
        // next tuple, mixed radix
        let mut pos = 0;
        loop {
            if pos == n {
                return true;
            }
            idx[pos] += 1;
            if idx[pos] < cands[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// One application of the consequence operator for the whole program: the
/// union of the per-clause results.
pub fn tpi(p: &Program, interp: &SInterpretation, gen: &VarGen) -> SInterpretation {
    let (next, _) = tpi_budgeted(p, interp, gen, None);
    next
}

fn tpi_budgeted(
    p: &Program,
    interp: &SInterpretation,
    gen: &VarGen,
    budget: Option<usize>,
) -> (SInterpretation, bool) {
    let mut atoms = AtomSet::new();
    let mut complete = true;
    for c in p.clauses() {
        if !tpi_clause_into(c, &interp.atoms, gen, &mut atoms, budget) {
            complete = false;
            break;
        }
    }
    (
        SInterpretation {
            atoms,
            iteration: interp.iteration + 1,
        },
        complete,
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IterateStatus {
    /// The least fixpoint was reached: iterating again leaves the quotient
    /// set unchanged. `at` is the first index whose set equals the next.
    Fixpoint { at: usize },
    /// The iteration bound was exhausted without stabilizing.
    ReachedBound,
    /// The class budget was exceeded while computing iteration `at`; the
    /// result is a partial set, not the full iterate.
    Truncated { at: usize },
}

#[derive(Clone, Debug)]
pub struct IterateResult {
    pub interp: SInterpretation,
    pub status: IterateStatus,
}

impl IterateResult {
    pub fn fixpoint_reached(&self) -> bool {
        matches!(self.status, IterateStatus::Fixpoint { .. })
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct IterateLimits {
    /// Maximum number of stored classes before reporting truncation.
    pub max_atoms: Option<usize>,
}

/// The k-fold application of the consequence operator to the empty set.
/// Stabilization is detected by comparing successive quotient sets; one
/// extra application is performed at the bound so that `iterate(p, k)` can
/// report a fixpoint even when it stabilized exactly at `k`.
pub fn iterate(p: &Program, k: usize, limits: IterateLimits, gen: &VarGen) -> IterateResult {
    let mut cur = SInterpretation::empty();
    for j in 1..=k {
        let (next, complete) = tpi_budgeted(p, &cur, gen, limits.max_atoms);
        if !complete {
            return IterateResult {
                interp: next,
                status: IterateStatus::Truncated { at: j },
            };
        }
        if next.atoms.same_classes(&cur.atoms) {
            return IterateResult {
                interp: cur,
                status: IterateStatus::Fixpoint { at: j - 1 },
            };
        }
        cur = next;
    }
    // Lookahead: is iteration k already a fixed point?
    let (peek, complete) = tpi_budgeted(p, &cur, gen, limits.max_atoms);
    let status = if complete && peek.atoms.same_classes(&cur.atoms) {
        IterateStatus::Fixpoint { at: k }
    } else {
        IterateStatus::ReachedBound
    };
    IterateResult {
        interp: cur,
        status,
    }
}

/// Function symbols with arities. Used as the alphabet for Herbrand
/// constructions.
pub type Alphabet = BTreeMap<Sym, usize>;

pub fn alphabet_from(pairs: &[(&str, usize)]) -> Alphabet {
    pairs
        .iter()
        .map(|(name, arity)| (Sym::new(name), *arity))
        .collect()
}

/// The program's function symbols, extended with a fresh constant when the
/// program has none (a Herbrand universe needs at least one constant).
pub fn program_alphabet(p: &Program) -> Alphabet {
    let mut alpha: Alphabet = p.term_functors();
    if !alpha.values().any(|&a| a == 0) {
        for candidate in ["a", "c", "c1", "c2"] {
            let sym = Sym::new(candidate);
            if let std::collections::btree_map::Entry::Vacant(e) = alpha.entry(sym) {
                e.insert(0);
                break;
            }
        }
    }
    alpha
}

/// All ground terms over `alpha` of depth at most `depth`. Constants have
/// depth 0.
pub fn ground_terms(alpha: &Alphabet, depth: usize) -> Vec<Term> {
    let mut layers: Vec<BTreeSet<Term>> = Vec::new();
    let constants: BTreeSet<Term> = alpha
        .iter()
        .filter(|(_, &a)| a == 0)
        .map(|(f, _)| Term::App(f.clone(), Vec::new()))
        .collect();
    layers.push(constants);
    for d in 1..=depth {
        let prev: Vec<Term> = layers[d - 1].iter().cloned().collect();
        let mut layer = layers[d - 1].clone();
        for (f, &arity) in alpha.iter() {
            if arity == 0 {
                continue;
            }
            let mut idx = vec![0usize; arity];
            if prev.is_empty() {
                continue;
            }
            'outer: loop {
                let args: Vec<Term> = idx.iter().map(|&i| prev[i].clone()).collect();
                layer.insert(Term::App(f.clone(), args));
                let mut pos = 0;
                loop {
                    if pos == arity {
                        break 'outer;
                    }
                    idx[pos] += 1;
                    if idx[pos] < prev.len() {
                        break;
                    }
                    idx[pos] = 0;
                    pos += 1;
                }
            }
        }
        layers.push(layer);
    }
    layers.pop().unwrap().into_iter().collect()
}

/// Term depth with variables (and constants) at depth 0.
fn skeleton_depth(t: &Term) -> usize {
    match t {
        Term::Var(_) => 0,
        Term::App(_, args) => {
            if args.is_empty() {
                0
            } else {
                1 + args.iter().map(skeleton_depth).max().unwrap()
            }
        }
    }
}

pub fn atom_depth(a: &Atom) -> usize {
    a.args.iter().map(skeleton_depth).max().unwrap_or(0)
}

fn var_max_paths(t: &Term, at: usize, out: &mut BTreeMap<Var, usize>) {
    match t {
        Term::Var(v) => {
            let e = out.entry(v.clone()).or_insert(at);
            if at > *e {
                *e = at;
            }
        }
        Term::App(_, args) => {
            for a in args {
                var_max_paths(a, at + 1, out);
            }
        }
    }
}

/// All ground instances of `a` over `alpha` whose term depth stays within
/// `depth`. Each variable may be filled only up to the depth left by its
/// deepest occurrence, which makes the enumeration exact (no post filter).
fn ground_fillings(a: &Atom, depth: usize, alpha: &Alphabet, out: &mut BTreeSet<Atom>) {
    if atom_depth(a) > depth {
        return;
    }
    let mut paths = BTreeMap::new();
    for arg in &a.args {
        var_max_paths(arg, 0, &mut paths);
    }
    if paths.is_empty() {
        out.insert(a.clone());
        return;
    }
    let vars: Vec<Var> = paths.keys().cloned().collect();
    let pools: Vec<Vec<Term>> = vars
        .iter()
        .map(|v| ground_terms(alpha, depth - paths[v]))
        .collect();
    if pools.iter().any(|p| p.is_empty()) {
        return;
    }
    let mut idx = vec![0usize; vars.len()];
    loop {
        let s = Substitution::from_pairs(
            vars.iter()
                .enumerate()
                .map(|(p, v)| (v.clone(), pools[p][idx[p]].clone())),
        );
        let inst = a.apply(&s);
        debug_assert!(inst.is_ground() && atom_depth(&inst) <= depth);
        out.insert(inst);
        let mut pos = 0;
        loop {
            if pos == vars.len() {
                return;
            }
            idx[pos] += 1;
            if idx[pos] < pools[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Ground instances (over `alpha`, depth-bounded) of every class in the
/// set.
pub fn ground_instances(atoms: &AtomSet, depth: usize, alpha: &Alphabet) -> BTreeSet<Atom> {
    let mut out = BTreeSet::new();
    for a in atoms.iter() {
        ground_fillings(a, depth, alpha, &mut out);
    }
    out
}

fn match_term(pat: &Term, target: &Term, bind: &mut BTreeMap<Var, Term>) -> bool {
    match pat {
        Term::Var(v) => match bind.get(v) {
            Some(t) => t == target,
            None => {
                bind.insert(v.clone(), target.clone());
                true
            }
        },
        Term::App(f, args) => match target {
            Term::App(g, targs) if f == g && args.len() == targs.len() => {
                args.iter().zip(targs).all(|(a, b)| match_term(a, b, bind))
            }
            _ => false,
        },
    }
}

fn match_atom(pat: &Atom, target: &Atom, bind: &mut BTreeMap<Var, Term>) -> bool {
    pat.pred == target.pred
        && pat.args.len() == target.args.len()
        && pat
            .args
            .iter()
            .zip(&target.args)
            .all(|(a, b)| match_term(a, b, bind))
}

fn ground_clause_heads(
    clause: &Clause,
    interp: &BTreeSet<Atom>,
    depth: usize,
    alpha: &Alphabet,
    out: &mut BTreeSet<Atom>,
) {
    fn go(
        clause: &Clause,
        pos: usize,
        bind: BTreeMap<Var, Term>,
        interp: &BTreeSet<Atom>,
        depth: usize,
        alpha: &Alphabet,
        out: &mut BTreeSet<Atom>,
    ) {
        if pos == clause.body.len() {
            let sigma = Substitution::from_pairs(bind);
            ground_fillings(&clause.head.apply(&sigma), depth, alpha, out);
            return;
        }
        for cand in interp {
            if cand.pred != clause.body[pos].pred {
                continue;
            }
            let mut b = bind.clone();
            if match_atom(&clause.body[pos], cand, &mut b) {
                go(clause, pos + 1, b, interp, depth, alpha, out);
            }
        }
    }
    go(clause, 0, BTreeMap::new(), interp, depth, alpha, out);
}

/// The k-fold ground immediate-consequence iteration from the empty set,
/// restricted at every step to atoms of term depth at most `depth`. This
/// is the classical ground construction, computed by matching rather than
/// unification, so it is an independent route to the depth-restricted
/// least Herbrand model.
pub fn herbrand_tp(p: &Program, k: usize, depth: usize, alpha: &Alphabet) -> BTreeSet<Atom> {
    let mut interp: BTreeSet<Atom> = BTreeSet::new();
    for _ in 0..k {
        let mut next = BTreeSet::new();
        for clause in p.clauses() {
            ground_clause_heads(clause, &interp, depth, alpha, &mut next);
        }
        if next == interp {
            break;
        }
        interp = next;
    }
    interp
}
