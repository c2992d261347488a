//! Top-down SLD resolution.
//!
//! Depth-first search with the leftmost selection rule and textual clause
//! order. Input clauses are renamed apart from the current goal at every
//! resolution step using the session's variable generator.
//!
//! Two resource bounds are supported:
//!
//! * a step bound ([`Limits::max_depth`]): the number of resolution steps
//!   along one derivation;
//! * a nesting bound (height mode): every goal atom carries the depth of
//!   clause nesting that introduced it, and atoms nested deeper than the
//!   bound are not resolved. Within nesting bound `k` the enumeration is
//!   finite and complete, and the answer set for a most general atomic
//!   query equals the k-th bottom-up iterate of the consequence operator,
//!   quotiented by variants. That pairing is what the equivalence tests
//!   rely on; raising the bound one step at a time gives iterative
//!   deepening without unbounded memory.
//!
//! A derivation cut by either bound is reported as `truncated`, distinct
//! from finite failure.

use thiserror::Error;

use crate::subst::{rename_fresh, Substitutable, Substitution};
use crate::term::{Atom, Program, Sym, Term, Var, VarGen, VisitVars};
use crate::unify::mgu_atoms;

/// A nonempty conjunction of atoms.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Query {
    pub atoms: Vec<Atom>,
}

impl Query {
    pub fn atom(a: Atom) -> Query {
        Query { atoms: vec![a] }
    }
}

impl std::fmt::Display for Query {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, a) in self.atoms.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

impl VisitVars for Query {
    fn visit_vars(&self, f: &mut dyn FnMut(&Var)) {
        for a in &self.atoms {
            a.visit_vars(f);
        }
    }
}

impl Substitutable for Query {
    fn apply(&self, s: &Substitution) -> Query {
        Query {
            atoms: self.atoms.iter().map(|a| a.apply(s)).collect(),
        }
    }
}

/// Resource limits for one solve call. `max_depth` counts resolution steps
/// along a derivation and must be at least 1 for any derivation to exist.
#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub max_depth: usize,
    pub max_answers: Option<usize>,
}

impl Limits {
    pub fn depth(max_depth: usize) -> Limits {
        Limits {
            max_depth,
            max_answers: None,
        }
    }
}

/// One SLD computed answer: the instantiated query and the computed answer
/// substitution restricted to the variables of the original query, so that
/// `instance = apply(substitution, query)`.
#[derive(Clone, Debug)]
pub struct ComputedAnswer {
    pub instance: Query,
    pub substitution: Substitution,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("unknown predicate {0}/{1}")]
    UnknownPredicate(Sym, usize),
    #[error("query must contain at least one atom")]
    EmptyQuery,
}

enum Bound {
    Steps(usize),
    Nesting(usize),
}

struct Frame {
    /// Remaining goal atoms, each with its clause-nesting depth.
    goals: Vec<(Atom, usize)>,
    /// The query instantiated by the composition of the mgus so far.
    instance: Query,
    steps_used: usize,
    next_clause: usize,
}

/// Lazily enumerated computed answers, depth-first.
pub struct Solutions<'a> {
    program: &'a Program,
    gen: &'a VarGen,
    original: Query,
    stack: Vec<Frame>,
    bound: Bound,
    truncated: bool,
    yielded: usize,
    max_answers: Option<usize>,
}

impl<'a> Iterator for Solutions<'a> {
    type Item = ComputedAnswer;

    fn next(&mut self) -> Option<ComputedAnswer> {
        if let Some(max) = self.max_answers {
            if self.yielded >= max {
                return None;
            }
        }
        while let Some(frame) = self.stack.last_mut() {
            // Bound check happens once per frame, before any clause is tried.
            if frame.next_clause == 0 {
                let cut = match self.bound {
                    Bound::Steps(max) => frame.steps_used >= max,
                    Bound::Nesting(max) => frame.goals[0].1 > max,
                };
                if cut {
                    self.truncated = true;
                    self.stack.pop();
                    continue;
                }
            }
            if frame.next_clause >= self.program.clauses().len() {
                self.stack.pop();
                continue;
            }
            let ci = frame.next_clause;
            frame.next_clause += 1;
            let (selected, depth) = frame.goals[0].clone();
            let clause = rename_fresh(&self.program.clauses()[ci], self.gen);
            let Some(theta) = mgu_atoms(&selected, &clause.head) else {
                continue;
            };
            let mut goals: Vec<(Atom, usize)> = clause
                .body
                .iter()
                .map(|b| (b.apply(&theta), depth + 1))
                .collect();
            goals.extend(
                frame.goals[1..]
                    .iter()
                    .map(|(a, d)| (a.apply(&theta), *d)),
            );
            let instance = frame.instance.apply(&theta);
            let steps_used = frame.steps_used + 1;
            if goals.is_empty() {
                self.yielded += 1;
                return Some(self.answer(instance));
            }
            self.stack.push(Frame {
                goals,
                instance,
                steps_used,
                next_clause: 0,
            });
        }
        None
    }
}

impl<'a> Solutions<'a> {
    /// True when some derivation was cut by the depth or nesting bound, so
    /// the enumeration may be incomplete. Meaningful after exhaustion;
    /// distinct from finite failure (no answers, nothing cut).
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    fn answer(&self, instance: Query) -> ComputedAnswer {
        let mut sub = Substitution::empty();
        for (q, i) in self.original.atoms.iter().zip(&instance.atoms) {
            for (qa, ia) in q.args.iter().zip(&i.args) {
                match_binding(qa, ia, &mut sub);
            }
        }
        debug_assert_eq!(self.original.apply(&sub), instance);
        ComputedAnswer {
            instance,
            substitution: sub,
        }
    }
}

/// Records what the derivation substituted for each variable of the
/// original query. The instance is an instance of the query by
/// construction, so positions always agree.
fn match_binding(pattern: &Term, instance: &Term, out: &mut Substitution) {
    match pattern {
        Term::Var(v) => {
            debug_assert!(out.get(v).is_none_or(|t| t == instance));
            out.bind(v.clone(), instance.clone());
        }
        Term::App(_, args) => {
            if let Term::App(_, iargs) = instance {
                for (a, b) in args.iter().zip(iargs) {
                    match_binding(a, b, out);
                }
            }
        }
    }
}

fn check_query(p: &Program, q: &Query) -> Result<(), SolveError> {
    if q.atoms.is_empty() {
        return Err(SolveError::EmptyQuery);
    }
    for a in &q.atoms {
        match p.arity(&a.pred) {
            Some(n) if n == a.arity() => {}
            _ => return Err(SolveError::UnknownPredicate(a.pred.clone(), a.arity())),
        }
    }
    Ok(())
}

fn solutions<'a>(
    p: &'a Program,
    q: &Query,
    bound: Bound,
    max_answers: Option<usize>,
    gen: &'a VarGen,
) -> Result<Solutions<'a>, SolveError> {
    check_query(p, q)?;
    let goals = q.atoms.iter().map(|a| (a.clone(), 1usize)).collect();
    Ok(Solutions {
        program: p,
        gen,
        original: q.clone(),
        stack: vec![Frame {
            goals,
            instance: q.clone(),
            steps_used: 0,
            next_clause: 0,
        }],
        bound,
        truncated: false,
        yielded: 0,
        max_answers,
    })
}

/// Enumerates SLD computed answers for `q` under the given limits,
/// lazily and in derivation order.
pub fn solve<'a>(
    p: &'a Program,
    q: &Query,
    l: Limits,
    gen: &'a VarGen,
) -> Result<Solutions<'a>, SolveError> {
    solutions(p, q, Bound::Steps(l.max_depth), l.max_answers, gen)
}

/// The answers of [`solve`] collected eagerly, with the completeness flags.
#[derive(Debug)]
pub struct SolveOutcome {
    pub answers: Vec<ComputedAnswer>,
    /// Some derivation hit the depth/nesting bound.
    pub truncated: bool,
    /// Enumeration stopped at `max_answers`.
    pub answers_capped: bool,
}

pub fn solve_all(p: &Program, q: &Query, l: Limits, gen: &VarGen) -> Result<SolveOutcome, SolveError> {
    let mut sols = solve(p, q, l, gen)?;
    let answers: Vec<ComputedAnswer> = sols.by_ref().collect();
    let answers_capped = l.max_answers.is_some_and(|m| answers.len() >= m);
    Ok(SolveOutcome {
        truncated: sols.truncated(),
        answers_capped,
        answers,
    })
}

/// Complete enumeration of the answers whose clause nesting stays within
/// `height`. Terminates without a step bound.
pub fn solve_to_height(
    p: &Program,
    q: &Query,
    height: usize,
    gen: &VarGen,
) -> Result<SolveOutcome, SolveError> {
    let mut sols = solutions(p, q, Bound::Nesting(height), None, gen)?;
    let answers: Vec<ComputedAnswer> = sols.by_ref().collect();
    Ok(SolveOutcome {
        truncated: sols.truncated(),
        answers_capped: false,
        answers,
    })
}

/// The query `p(V1,...,Vn)` with fresh distinct variables.
pub fn most_general_query(p: &Program, pred: &Sym, gen: &VarGen) -> Result<Query, SolveError> {
    let Some(arity) = p.arity(pred) else {
        return Err(SolveError::UnknownPredicate(pred.clone(), 0));
    };
    Ok(Query::atom(Atom {
        pred: pred.clone(),
        args: (0..arity).map(|_| Term::Var(gen.fresh())).collect(),
    }))
}
