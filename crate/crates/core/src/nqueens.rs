//! The n-queens corpus: the program itself, the specification families
//! used to check it, diagonal-number arithmetic, the level mapping, a
//! witness constructor for the completeness check, and an independent
//! brute-force oracle.
//!
//! Board encoding: rows and columns are numbered from 1; queen `i` is the
//! queen of row `i`, and `i` appearing as the j-th member of the columns
//! list means queen `i` stands in column `j`. The up/down diagonal lists
//! use the same member-position convention, numbered relative to a context
//! row: queen `j` in column `k` lies on up diagonal `k + j - i` and down
//! diagonal `k + i - j` w.r.t. row `i`. Non-positive diagonal numbers are
//! not represented.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::atomset::AtomSet;
use crate::parse::parse_program;
use crate::solve::{ComputedAnswer, Query};
use crate::spec::{Spec, SpecBounds, Witness, WitnessError};
use crate::term::{is_linear, variable_disjoint, Atom, Program, Sym, Term, VarGen, VisitVars};

/// The four-clause core program.
pub const NQUEENS_SRC: &str = "\
% pqs(N, Cs, Us, Ds): queens 1..N are placed. Cs lists columns; Us and Ds
% list the up and down diagonals as seen from row N.
pqs(0,_,_,_).
pqs(s(I),Cs,Us,[_|Ds]) :- pqs(I,Cs,[_|Us],Ds), pq(s(I),Cs,Us,Ds).
% pq(Q, Cs, Us, Ds): queen Q occupies the same position in all three lists.
pq(I,[I|_],[I|_],[I|_]).
pq(I,[_|Cs],[_|Us],[_|Ds]) :- pq(I,Cs,Us,Ds).
";

/// The full program: a solution-listing entry point and list generator on
/// top of the core.
pub const NQUEENS_FULL_SRC: &str = "\
qu(N,Qs) :- gl(N,Qs), pqs(N,Qs,_,_).
gl(0,[]).
gl(s(N),[_|L]) :- gl(N,L).
pqs(0,_,_,_).
pqs(s(I),Cs,Us,[_|Ds]) :- pqs(I,Cs,[_|Us],Ds), pq(s(I),Cs,Us,Ds).
pq(I,[I|_],[I|_],[I|_]).
pq(I,[_|Cs],[_|Us],[_|Ds]) :- pq(I,Cs,Us,Ds).
";

/// Checker fixture: the head of the second clause no longer shifts the
/// down-diagonal list.
pub const NQUEENS_MUT_DROP_SHIFT_SRC: &str = "\
pqs(0,_,_,_).
pqs(s(I),Cs,Us,Ds) :- pqs(I,Cs,[_|Us],Ds), pq(s(I),Cs,Us,Ds).
pq(I,[I|_],[I|_],[I|_]).
pq(I,[_|Cs],[_|Us],[_|Ds]) :- pq(I,Cs,Us,Ds).
";

/// Checker fixture: the up- and down-diagonal payloads are swapped where
/// they are distinguishable, in the head of the second clause.
pub const NQUEENS_MUT_SWAP_DIAGONALS_SRC: &str = "\
pqs(0,_,_,_).
pqs(s(I),Cs,Ds,[_|Us]) :- pqs(I,Cs,[_|Us],Ds), pq(s(I),Cs,Us,Ds).
pq(I,[I|_],[I|_],[I|_]).
pq(I,[_|Cs],[_|Us],[_|Ds]) :- pq(I,Cs,Us,Ds).
";

/// Checker fixture: the recursive placement clause lost its body.
pub const NQUEENS_MUT_DROP_BODY_SRC: &str = "\
pqs(0,_,_,_).
pqs(s(I),Cs,Us,[_|Ds]) :- pqs(I,Cs,[_|Us],Ds), pq(s(I),Cs,Us,Ds).
pq(I,[I|_],[I|_],[I|_]).
pq(I,[_|Cs],[_|Us],[_|Ds]).
";

/// Checker fixture: the base placement clause was deleted.
pub const NQUEENS_MUT_NO_PQ_BASE_SRC: &str = "\
pqs(0,_,_,_).
pqs(s(I),Cs,Us,[_|Ds]) :- pqs(I,Cs,[_|Us],Ds), pq(s(I),Cs,Us,Ds).
pq(I,[_|Cs],[_|Us],[_|Ds]) :- pq(I,Cs,Us,Ds).
";

pub fn nqueens_program(gen: &VarGen) -> Program {
    parse_program(NQUEENS_SRC, gen).expect("builtin program parses")
}

pub fn nqueens_full_program(gen: &VarGen) -> Program {
    parse_program(NQUEENS_FULL_SRC, gen).expect("builtin program parses")
}

/// The three correctness mutations, labelled.
pub fn nqueens_mutations(gen: &VarGen) -> Vec<(&'static str, Program)> {
    vec![
        (
            "drop-down-shift",
            parse_program(NQUEENS_MUT_DROP_SHIFT_SRC, gen).expect("fixture parses"),
        ),
        (
            "swap-diagonals",
            parse_program(NQUEENS_MUT_SWAP_DIAGONALS_SRC, gen).expect("fixture parses"),
        ),
        (
            "drop-recursion-body",
            parse_program(NQUEENS_MUT_DROP_BODY_SRC, gen).expect("fixture parses"),
        ),
    ]
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum CorpusError {
    #[error("the level mapping covers only pq/4 and pqs/4, not {0}/{1}")]
    UnsupportedPredicate(Sym, usize),
    #[error("not a ground member of the list")]
    NotAGroundMember,
    #[error("solution argument is not ground")]
    NonGroundSolution,
    #[error("solution argument is not a closed list of numerals")]
    MalformedSolution,
}

/// Up diagonal number of queen `j` in column `k` w.r.t. row `i`.
pub fn up_diag(j: u64, k: u64, i: u64) -> i64 {
    k as i64 + j as i64 - i as i64
}

/// Down diagonal number of queen `j` in column `k` w.r.t. row `i`.
pub fn down_diag(j: u64, k: u64, i: u64) -> i64 {
    k as i64 + i as i64 - j as i64
}

/// Position (1-based) of the first occurrence of `s` among the members of
/// `t`, using the generalized member notion that works on any term with a
/// list-shaped prefix.
pub fn member_position(t: &Term, s: &Term) -> Option<u64> {
    t.spine_members()
        .iter()
        .position(|m| *m == s)
        .map(|p| (p + 1) as u64)
}

/// Ground-or-variable open list with distinct members: linear, an open
/// list (variable tail), every member ground or a variable, members
/// pairwise distinct.
pub fn is_gvd(t: &Term) -> bool {
    if !is_linear(t) {
        return false;
    }
    let Ok((members, tail)) = t.open_list_view() else {
        return false;
    };
    if !tail.is_var() {
        return false;
    }
    // Variable members are distinct by linearity; check the ground ones.
    let grounds: Vec<&&Term> = members.iter().filter(|m| m.is_ground()).collect();
    if members.iter().any(|m| !m.is_ground() && !m.is_var()) {
        return false;
    }
    for (i, a) in grounds.iter().enumerate() {
        for b in &grounds[i + 1..] {
            if a == b {
                return false;
            }
        }
    }
    true
}

/// A g.v.d. whose last member is ground, or which has no members at all.
pub fn is_short_gvd(t: &Term) -> bool {
    if !is_gvd(t) {
        return false;
    }
    let (members, _) = t.open_list_view().unwrap();
    members.last().is_none_or(|m| m.is_ground())
}

/// The g.v.d. `t` with the ground member `which` removed. Removing the
/// last member truncates the trailing variable members as well, keeping
/// the same tail variable; removing an interior member replaces it with a
/// fresh variable. Either way a short g.v.d. stays short.
pub fn remove_member(t: &Term, which: &Term, gen: &VarGen) -> Result<Term, CorpusError> {
    if !which.is_ground() {
        return Err(CorpusError::NotAGroundMember);
    }
    let (members, tail) = t.open_list_view().map_err(|_| CorpusError::NotAGroundMember)?;
    let p = members
        .iter()
        .position(|m| *m == which)
        .ok_or(CorpusError::NotAGroundMember)?;
    let mut members: Vec<Term> = members.into_iter().cloned().collect();
    let tail = tail.clone();
    if p == members.len() - 1 {
        let keep = members[..p]
            .iter()
            .rposition(|m| m.is_ground())
            .map_or(0, |k| k + 1);
        members.truncate(keep);
    } else {
        members[p] = Term::Var(gen.fresh());
    }
    Ok(Term::list(members, tail))
}

/// `cs` represents a correct placement up to row `m`: it is a g.v.d. whose
/// ground members are exactly the queens 1..m, with pairwise distinct up
/// diagonal numbers and pairwise distinct down diagonal numbers (the
/// pairwise distinctness does not depend on the context row).
pub fn cs_correct_up_to(cs: &Term, m: u64) -> bool {
    if !is_gvd(cs) {
        return false;
    }
    let (members, _) = cs.open_list_view().unwrap();
    let mut positions: BTreeMap<u64, u64> = BTreeMap::new();
    for (p, member) in members.iter().enumerate() {
        if member.is_ground() {
            let Ok(j) = member.peano_value() else {
                return false;
            };
            if j < 1 || j > m {
                return false;
            }
            positions.insert(j, (p + 1) as u64);
        }
    }
    if positions.len() != m as usize {
        return false;
    }
    let mut ups = BTreeSet::new();
    let mut downs = BTreeSet::new();
    for (&j, &k) in &positions {
        if !ups.insert(k as i64 + j as i64) || !downs.insert(k as i64 - j as i64) {
            return false;
        }
    }
    true
}

/// The pair `(us, ds)` is correct up to `m` w.r.t. row `i` and columns
/// `cs`: each queen j in 1..m is a member of `cs`, and whenever its up
/// (down) diagonal number w.r.t. `i` is positive, the member of `us`
/// (`ds`) at that position is j. Positions use the first occurrence.
pub fn pair_correct(us: &Term, ds: &Term, m: u64, i: u64, cs: &Term) -> bool {
    for j in 1..=m {
        let queen = Term::peano(j);
        let Some(k) = member_position(cs, &queen) else {
            return false;
        };
        let lu = up_diag(j, k, i);
        if lu > 0 && us.kth_member(lu as usize) != Some(&queen) {
            return false;
        }
        let ld = down_diag(j, k, i);
        if ld > 0 && ds.kth_member(ld as usize) != Some(&queen) {
            return false;
        }
    }
    true
}

fn cons_parts(t: &Term) -> Option<(&Term, &Term)> {
    match t {
        Term::App(f, args) if f.as_str() == crate::term::CONS && args.len() == 2 => {
            Some((&args[0], &args[1]))
        }
        _ => None,
    }
}

/// Member of the single-queen specification: `pq(v, [c1..ck,v|c0],
/// [u1..uk,v|u0], [d1..dk,v|d0])` where v and all the other variables are
/// pairwise distinct; v is shared at position k+1 of the three lists.
pub fn member_s_pq(a: &Atom) -> bool {
    if a.pred.as_str() != "pq" || a.arity() != 4 {
        return false;
    }
    let Term::Var(v) = &a.args[0] else {
        return false;
    };
    let mut seen: BTreeSet<u64> = BTreeSet::new();
    seen.insert(v.id());
    let mut len = None;
    for arg in &a.args[1..] {
        let Ok((members, tail)) = arg.open_list_view() else {
            return false;
        };
        let Term::Var(tv) = tail else {
            return false;
        };
        match len {
            None => {
                if members.is_empty() {
                    return false;
                }
                len = Some(members.len());
            }
            Some(n) if n == members.len() => {}
            Some(_) => return false,
        }
        match members.last().unwrap() {
            Term::Var(w) if w == v => {}
            _ => return false,
        }
        for m in &members[..members.len() - 1] {
            let Term::Var(w) = m else {
                return false;
            };
            if !seen.insert(w.id()) {
                return false;
            }
        }
        if !seen.insert(tv.id()) {
            return false;
        }
    }
    true
}

/// Member of `pqs(0, cs, us, ds)` with three distinct variables.
pub fn member_s_pqs2(a: &Atom) -> bool {
    if a.pred.as_str() != "pqs" || a.arity() != 4 {
        return false;
    }
    if a.args[0] != Term::peano(0) {
        return false;
    }
    let mut seen = BTreeSet::new();
    a.args[1..].iter().all(|arg| match arg {
        Term::Var(v) => seen.insert(v.id()),
        _ => false,
    })
}

/// Member of the row-i placement specification: `pqs(i, cs, us, [w|ds])`
/// with i > 0, `cs` correct up to i, `(us, ds)` correct up to i w.r.t. i
/// and `cs`, the three payloads variable disjoint, and `w` a variable
/// occurring nowhere else. Nothing here forces `us` or `ds` to be lists
/// beyond the members the correctness conditions require.
pub fn member_s_pqs1(a: &Atom) -> bool {
    if a.pred.as_str() != "pqs" || a.arity() != 4 {
        return false;
    }
    let Ok(i) = a.args[0].peano_value() else {
        return false;
    };
    if i == 0 {
        return false;
    }
    let Some((w, ds)) = cons_parts(&a.args[3]) else {
        return false;
    };
    let Term::Var(wv) = w else {
        return false;
    };
    let mut w_occurrences = 0;
    a.visit_vars(&mut |v| {
        if v == wv {
            w_occurrences += 1;
        }
    });
    if w_occurrences != 1 {
        return false;
    }
    let cs = &a.args[1];
    let us = &a.args[2];
    cs_correct_up_to(cs, i)
        && pair_correct(us, ds, i, i, cs)
        && variable_disjoint(cs, us)
        && variable_disjoint(cs, ds)
        && variable_disjoint(us, ds)
}

/// The correctness specification: single-queen atoms plus placement atoms.
pub fn member_s(a: &Atom) -> bool {
    match a.pred.as_str() {
        "pq" => member_s_pq(a),
        "pqs" => member_s_pqs1(a) || member_s_pqs2(a),
        _ => false,
    }
}

/// The completeness restriction of the placement specification: on top of
/// the row-i conditions, the three payloads are short g.v.d.'s, every
/// ground member of `us` or `ds` is a queen 1..i, and every ground member
/// of `us` has a positive up diagonal number in `cs` w.r.t. i. (Down
/// diagonal numbers of queens 1..i w.r.t. i are positive automatically.)
pub fn member_s0_pqs(a: &Atom) -> bool {
    if !member_s_pqs1(a) {
        return false;
    }
    let i = a.args[0].peano_value().unwrap();
    let cs = &a.args[1];
    let us = &a.args[2];
    let (_, ds) = cons_parts(&a.args[3]).unwrap();
    if !is_short_gvd(cs) || !is_short_gvd(us) || !is_short_gvd(ds) {
        return false;
    }
    let queen_range = |t: &Term| -> Option<Vec<u64>> {
        let (members, _) = t.open_list_view().ok()?;
        let mut queens = Vec::new();
        for m in members {
            if m.is_ground() {
                let j = m.peano_value().ok()?;
                if j < 1 || j > i {
                    return None;
                }
                queens.push(j);
            }
        }
        Some(queens)
    };
    let Some(us_queens) = queen_range(us) else {
        return false;
    };
    if queen_range(ds).is_none() {
        return false;
    }
    us_queens.into_iter().all(|j| {
        member_position(cs, &Term::peano(j))
            .is_some_and(|k| up_diag(j, k, i) > 0)
    })
}

/// The completeness specification.
pub fn member_s0(a: &Atom) -> bool {
    match a.pred.as_str() {
        "pq" => member_s_pq(a),
        "pqs" => member_s0_pqs(a) || member_s_pqs2(a),
        _ => false,
    }
}

/// `gl(i, [v1..vi])` with distinct variables, closed list.
pub fn member_s_gl(a: &Atom) -> bool {
    if a.pred.as_str() != "gl" || a.arity() != 2 {
        return false;
    }
    let Ok(i) = a.args[0].peano_value() else {
        return false;
    };
    let Ok((members, tail)) = a.args[1].open_list_view() else {
        return false;
    };
    if tail != &Term::nil() || members.len() != i as usize {
        return false;
    }
    let mut seen = BTreeSet::new();
    members.iter().all(|m| match m {
        Term::Var(v) => seen.insert(v.id()),
        _ => false,
    })
}

/// `qu(i, cs)` where `cs` is a closed list of the queens 1..i with
/// pairwise distinct up and pairwise distinct down diagonal numbers, i.e.
/// a solution of the i-queens problem.
pub fn member_s_qu(a: &Atom) -> bool {
    if a.pred.as_str() != "qu" || a.arity() != 2 {
        return false;
    }
    let Ok(i) = a.args[0].peano_value() else {
        return false;
    };
    let Ok((members, tail)) = a.args[1].open_list_view() else {
        return false;
    };
    if tail != &Term::nil() || members.len() != i as usize {
        return false;
    }
    let mut queens = BTreeSet::new();
    let mut ups = BTreeSet::new();
    let mut downs = BTreeSet::new();
    for (p, m) in members.iter().enumerate() {
        let Ok(j) = m.peano_value() else {
            return false;
        };
        let k = (p + 1) as i64;
        if j < 1 || j > i || !queens.insert(j) {
            return false;
        }
        if !ups.insert(k + j as i64) || !downs.insert(k - j as i64) {
            return false;
        }
    }
    true
}

/// Spine measure: one per list cell along the tail and one per `s`; every
/// other symbol and every variable measures 0. For an (open) list this is
/// its length; for a numeral its value.
pub fn spine_measure(t: &Term) -> u64 {
    match t {
        Term::App(f, args) if f.as_str() == crate::term::SUCC && args.len() == 1 => {
            1 + spine_measure(&args[0])
        }
        Term::App(f, args) if f.as_str() == crate::term::CONS && args.len() == 2 => {
            1 + spine_measure(&args[1])
        }
        _ => 0,
    }
}

/// The level mapping: `|pqs(i,cs,us,ds)| = |i| + |cs|`, `|pq(i,cs,us,ds)|
/// = |cs|`. Invariant under renaming since it never looks at variables.
pub fn level(a: &Atom) -> Result<u64, CorpusError> {
    match (a.pred.as_str(), a.arity()) {
        ("pqs", 4) => Ok(spine_measure(&a.args[0]) + spine_measure(&a.args[1])),
        ("pq", 4) => Ok(spine_measure(&a.args[1])),
        _ => Err(CorpusError::UnsupportedPredicate(a.pred.clone(), a.arity())),
    }
}

/// The canonical single-queen atom with k earlier columns: `pq(v,
/// [c1..ck,v|c0], [u1..uk,v|u0], [d1..dk,v|d0])`, all variables fresh.
pub fn s_pq_atom(k: usize, gen: &VarGen) -> Atom {
    let v = Term::Var(gen.fresh());
    let mut args = vec![v.clone()];
    for _ in 0..3 {
        let mut members: Vec<Term> = (0..k).map(|_| Term::Var(gen.fresh())).collect();
        members.push(v.clone());
        args.push(Term::list(members, Term::Var(gen.fresh())));
    }
    Atom::new("pq", args)
}

pub fn s_pqs2_atom(gen: &VarGen) -> Atom {
    Atom::new(
        "pqs",
        vec![
            Term::peano(0),
            Term::Var(gen.fresh()),
            Term::Var(gen.fresh()),
            Term::Var(gen.fresh()),
        ],
    )
}

/// Injective placements of queens 1..n into columns 1..max_pos with
/// pairwise distinct up and down diagonal numbers, i.e. mutually
/// non-attacking partial boards. Maps queen -> column.
fn placements(n: u64, max_pos: usize) -> Vec<BTreeMap<u64, u64>> {
    fn go(
        next: u64,
        n: u64,
        max_pos: u64,
        acc: &mut BTreeMap<u64, u64>,
        out: &mut Vec<BTreeMap<u64, u64>>,
    ) {
        if next > n {
            out.push(acc.clone());
            return;
        }
        'cols: for k in 1..=max_pos {
            for (&j2, &k2) in acc.iter() {
                if k2 == k
                    || k as i64 + next as i64 == k2 as i64 + j2 as i64
                    || k as i64 - next as i64 == k2 as i64 - j2 as i64
                {
                    continue 'cols;
                }
            }
            acc.insert(next, k);
            go(next + 1, n, max_pos, acc, out);
            acc.remove(&next);
        }
    }
    let mut out = Vec::new();
    let mut acc = BTreeMap::new();
    go(1, n, max_pos as u64, &mut acc, &mut out);
    out
}

/// Columns list for a placement: queens at their columns, fresh variables
/// in every other slot up to `len`, fresh tail.
fn columns_term(placement: &BTreeMap<u64, u64>, len: usize, gen: &VarGen) -> Term {
    let by_slot: BTreeMap<u64, u64> = placement.iter().map(|(&j, &k)| (k, j)).collect();
    let members: Vec<Term> = (1..=len as u64)
        .map(|slot| match by_slot.get(&slot) {
            Some(&queen) => Term::peano(queen),
            None => Term::Var(gen.fresh()),
        })
        .collect();
    Term::list(members, Term::Var(gen.fresh()))
}

/// Forced members of a diagonal list: slot -> queen for every positive
/// diagonal number.
fn forced_slots(
    placement: &BTreeMap<u64, u64>,
    i: u64,
    diag: impl Fn(u64, u64, u64) -> i64,
) -> BTreeMap<u64, u64> {
    placement
        .iter()
        .filter_map(|(&j, &k)| {
            let l = diag(j, k, i);
            (l > 0).then_some((l as u64, j))
        })
        .collect()
}

fn diag_term(forced: &BTreeMap<u64, u64>, len: usize, gen: &VarGen) -> Term {
    let members: Vec<Term> = (1..=len as u64)
        .map(|slot| match forced.get(&slot) {
            Some(&queen) => Term::peano(queen),
            None => Term::Var(gen.fresh()),
        })
        .collect();
    Term::list(members, Term::Var(gen.fresh()))
}

fn max_slot(m: &BTreeMap<u64, u64>) -> usize {
    m.keys().next_back().copied().unwrap_or(0) as usize
}

fn max_column(placement: &BTreeMap<u64, u64>) -> usize {
    placement.values().max().copied().unwrap_or(0) as usize
}

/// Enumerates the correctness specification within bounds. The sampling
/// universe is atoms whose payloads are open-list spines over queen
/// numerals and variables: spine lengths at most `max_len`, row index at
/// most `max_index`, and at most `max_spare_vars` optional variable
/// members per list (the non-queen slots of the columns list; trailing
/// extension slots of the diagonal lists).
pub fn enumerate_s(b: &SpecBounds, gen: &VarGen) -> AtomSet {
    let mut out = AtomSet::new();
    for k in 0..b.max_len {
        out.insert(s_pq_atom(k, gen));
    }
    out.insert(s_pqs2_atom(gen));
    for i in 1..=b.max_index {
        let cap = b.max_len.min(i as usize + b.max_spare_vars);
        for placement in placements(i, cap) {
            for n_c in max_column(&placement).max(1)..=cap {
                if n_c - i as usize > b.max_spare_vars {
                    continue;
                }
                let up = forced_slots(&placement, i, up_diag);
                let down = forced_slots(&placement, i, down_diag);
                let (fu, fd) = (max_slot(&up), max_slot(&down));
                if fu == 0 || fd > b.max_len {
                    continue;
                }
                for n_u in fu..=b.max_len.min(fu + b.max_spare_vars) {
                    for n_d in fd..=b.max_len.min(fd + b.max_spare_vars) {
                        let atom = Atom::new(
                            "pqs",
                            vec![
                                Term::peano(i),
                                columns_term(&placement, n_c, gen),
                                diag_term(&up, n_u, gen),
                                Term::cons(Term::Var(gen.fresh()), diag_term(&down, n_d, gen)),
                            ],
                        );
                        debug_assert!(member_s(&atom), "{atom}");
                        out.insert(atom);
                    }
                }
            }
        }
    }
    out
}

/// Enumerates the completeness specification within bounds. Everything is
/// forced once the placement is fixed: the columns list ends at its last
/// queen and the diagonal lists end at their last forced member.
pub fn enumerate_s0(b: &SpecBounds, gen: &VarGen) -> AtomSet {
    let mut out = AtomSet::new();
    for k in 0..b.max_len {
        out.insert(s_pq_atom(k, gen));
    }
    out.insert(s_pqs2_atom(gen));
    for i in 1..=b.max_index {
        for placement in placements(i, b.max_len) {
            let n_c = max_column(&placement);
            if n_c - i as usize > b.max_spare_vars {
                continue;
            }
            let up = forced_slots(&placement, i, up_diag);
            let down = forced_slots(&placement, i, down_diag);
            let (fu, fd) = (max_slot(&up), max_slot(&down));
            if fd > b.max_len {
                continue;
            }
            let atom = Atom::new(
                "pqs",
                vec![
                    Term::peano(i),
                    columns_term(&placement, n_c, gen),
                    diag_term(&up, fu, gen),
                    Term::cons(Term::Var(gen.fresh()), diag_term(&down, fd, gen)),
                ],
            );
            debug_assert!(member_s0(&atom), "{atom}");
            out.insert(atom);
        }
    }
    out
}

pub fn enumerate_s_gl(b: &SpecBounds, gen: &VarGen) -> AtomSet {
    let mut out = AtomSet::new();
    for i in 0..=b.max_index.min(b.max_len as u64) {
        let members: Vec<Term> = (0..i).map(|_| Term::Var(gen.fresh())).collect();
        out.insert(Atom::new(
            "gl",
            vec![Term::peano(i), Term::list(members, Term::nil())],
        ));
    }
    out
}

pub fn enumerate_s_qu(b: &SpecBounds, _gen: &VarGen) -> AtomSet {
    let mut out = AtomSet::new();
    for i in 0..=b.max_index.min(b.max_len as u64) {
        for solution in brute_force_queens(i) {
            out.insert(Atom::new(
                "qu",
                vec![
                    Term::peano(i),
                    Term::list(solution.into_iter().map(Term::peano).collect(), Term::nil()),
                ],
            ));
        }
    }
    out
}

macro_rules! corpus_spec {
    ($ty:ident, $name:literal, $member:path, $enumerate:path, $has_level:literal) => {
        pub struct $ty;

        impl Spec for $ty {
            fn name(&self) -> &str {
                $name
            }
            fn member(&self, a: &Atom) -> bool {
                $member(a)
            }
            fn enumerate(&self, b: &SpecBounds, gen: &VarGen) -> AtomSet {
                $enumerate(b, gen)
            }
            fn level(&self, a: &Atom) -> Option<u64> {
                if $has_level {
                    level(a).ok()
                } else {
                    None
                }
            }
            fn has_level(&self) -> bool {
                $has_level
            }
        }
    };
}

corpus_spec!(SpecS, "S", member_s, enumerate_s, true);
corpus_spec!(SpecS0, "S0", member_s0, enumerate_s0, true);
corpus_spec!(SpecGl, "S_gl", member_s_gl, enumerate_s_gl, false);
corpus_spec!(SpecQu, "S_qu", member_s_qu, enumerate_s_qu, false);

fn member_s_full(a: &Atom) -> bool {
    member_s(a) || member_s_gl(a) || member_s_qu(a)
}

fn enumerate_s_full(b: &SpecBounds, gen: &VarGen) -> AtomSet {
    let mut out = enumerate_s(b, gen);
    out.union_with(&enumerate_s_gl(b, gen));
    out.union_with(&enumerate_s_qu(b, gen));
    out
}

corpus_spec!(SpecFull, "S_full", member_s_full, enumerate_s_full, false);

/// Registered specifications for the check commands.
pub fn spec_by_name(name: &str) -> Option<Box<dyn Spec>> {
    match name {
        "S" => Some(Box::new(SpecS)),
        "S0" => Some(Box::new(SpecS0)),
        "S_gl" => Some(Box::new(SpecGl)),
        "S_qu" => Some(Box::new(SpecQu)),
        "S_full" => Some(Box::new(SpecFull)),
        _ => None,
    }
}

fn find_clause(p: &Program, pred: &str, body_len: usize) -> Result<usize, WitnessError> {
    p.clauses()
        .iter()
        .position(|c| c.head.pred.as_str() == pred && c.body.len() == body_len)
        .ok_or_else(|| {
            WitnessError::MissingClause(format!("{pred} clause with {body_len} body atoms"))
        })
}

/// Builds the completeness witness for an atom of the completeness
/// specification: base atoms are variants of unary clause heads; a
/// single-queen atom with k earlier columns descends to k-1; a placement
/// atom for row i+1 descends through the recursive clause to the row-i
/// placement with queen i+1 removed and to a fresh single-queen atom
/// sharing its column.
pub fn completeness_witness(
    a: &Atom,
    p: &Program,
    gen: &VarGen,
) -> Result<Witness, WitnessError> {
    if member_s_pqs2(a) {
        return Ok(Witness {
            clause_index: find_clause(p, "pqs", 0)?,
            body: Vec::new(),
        });
    }
    if member_s_pq(a) {
        let k = a.args[1].open_list_view().unwrap().0.len() - 1;
        return if k == 0 {
            Ok(Witness {
                clause_index: find_clause(p, "pq", 0)?,
                body: Vec::new(),
            })
        } else {
            Ok(Witness {
                clause_index: find_clause(p, "pq", 1)?,
                body: vec![s_pq_atom(k - 1, gen)],
            })
        };
    }
    if member_s0_pqs(a) {
        let si = a.args[0].peano_value().unwrap();
        let i = si - 1;
        let queen = Term::peano(si);
        let cs = &a.args[1];
        let us = &a.args[2];
        let (_, ds) = cons_parts(&a.args[3]).unwrap();
        let j = member_position(cs, &queen).expect("top queen is placed");
        let second = s_pq_atom((j - 1) as usize, gen);
        let first = if i == 0 {
            s_pqs2_atom(gen)
        } else {
            let cs1 = remove_member(cs, &queen, gen).expect("queen is a ground member");
            let us1 = remove_member(us, &queen, gen).expect("queen is a ground member");
            let ds1 = remove_member(ds, &queen, gen).expect("queen is a ground member");
            // The freed head slot of the shorter up-diagonal list: the
            // queen whose up diagonal number w.r.t. i is 1 if there is
            // one, otherwise a fresh variable.
            let t = (1..=i)
                .find(|&q| {
                    member_position(cs, &Term::peano(q))
                        .is_some_and(|k| up_diag(q, k, i) == 1)
                })
                .map(Term::peano)
                .unwrap_or_else(|| Term::Var(gen.fresh()));
            Atom::new(
                "pqs",
                vec![Term::peano(i), cs1, Term::cons(t, us1), ds1],
            )
        };
        return Ok(Witness {
            clause_index: find_clause(p, "pqs", 2)?,
            body: vec![first, second],
        });
    }
    Err(WitnessError::OutsideSpec(a.to_string()))
}

/// Every placement of queens 1..n on columns 1..n with no two queens in
/// the same column or diagonal, found by filtering all permutations.
pub fn brute_force_queens(n: u64) -> BTreeSet<Vec<u64>> {
    fn permutations(rest: &mut Vec<u64>, acc: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if rest.is_empty() {
            out.push(acc.clone());
            return;
        }
        for idx in 0..rest.len() {
            let x = rest.remove(idx);
            acc.push(x);
            permutations(rest, acc, out);
            acc.pop();
            rest.insert(idx, x);
        }
    }
    let mut perms = Vec::new();
    permutations(&mut (1..=n).collect(), &mut Vec::new(), &mut perms);
    perms
        .into_iter()
        .filter(|q| {
            for a in 0..q.len() {
                for b in a + 1..q.len() {
                    let dv = q[a] as i64 - q[b] as i64;
                    let dp = a as i64 - b as i64;
                    if dv == dp || dv == -dp {
                        return false;
                    }
                }
            }
            true
        })
        .collect()
}

/// The initial query `pqs(n, [V1..Vn], _, _)`.
pub fn queens_query(n: u64, gen: &VarGen) -> Query {
    let columns: Vec<Term> = (0..n).map(|_| Term::Var(gen.fresh())).collect();
    Query::atom(Atom::new(
        "pqs",
        vec![
            Term::peano(n),
            Term::list(columns, Term::nil()),
            Term::Var(gen.fresh()),
            Term::Var(gen.fresh()),
        ],
    ))
}

/// Reads the column list out of an answer to the initial query.
pub fn extract_solution(ans: &ComputedAnswer) -> Result<Vec<u64>, CorpusError> {
    let atom = ans
        .instance
        .atoms
        .first()
        .ok_or(CorpusError::MalformedSolution)?;
    if atom.arity() != 4 {
        return Err(CorpusError::MalformedSolution);
    }
    let qs = &atom.args[1];
    if !qs.is_ground() {
        return Err(CorpusError::NonGroundSolution);
    }
    let (members, tail) = qs
        .open_list_view()
        .map_err(|_| CorpusError::MalformedSolution)?;
    if tail != &Term::nil() {
        return Err(CorpusError::MalformedSolution);
    }
    members
        .into_iter()
        .map(|m| m.peano_value().map_err(|_| CorpusError::MalformedSolution))
        .collect()
}
