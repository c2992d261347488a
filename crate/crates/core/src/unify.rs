//! Most general unifiers.
//!
//! Rule-based solved-form transformation in the Martelli-Montanari style:
//! a worklist of equations is reduced while a binding map is kept fully
//! applied, so the result is idempotent by construction. The occurs check
//! is always on. Returned substitutions bind only variables of the inputs.

use std::collections::BTreeMap;

use crate::subst::{Substitutable, Substitution};
use crate::term::{Atom, Term, Var};

fn occurs(v: &Var, t: &Term) -> bool {
    match t {
        Term::Var(w) => w == v,
        Term::App(_, args) => args.iter().any(|a| occurs(v, a)),
    }
}

fn apply1(t: &Term, v: &Var, r: &Term) -> Term {
    match t {
        Term::Var(w) if w == v => r.clone(),
        Term::Var(_) => t.clone(),
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| apply1(a, v, r)).collect()),
    }
}

fn solve(mut work: Vec<(Term, Term)>) -> Option<Substitution> {
    let mut bound: BTreeMap<Var, Term> = BTreeMap::new();
    while let Some((s, t)) = work.pop() {
        match (s, t) {
            (Term::Var(a), Term::Var(b)) if a == b => {}
            (Term::Var(a), t) | (t, Term::Var(a)) => {
                if occurs(&a, &t) {
                    return None;
                }
                // Keep everything fully applied: eliminate `a` from the
                // remaining equations and from the ranges already bound.
                for (l, r) in work.iter_mut() {
                    *l = apply1(l, &a, &t);
                    *r = apply1(r, &a, &t);
                }
                for r in bound.values_mut() {
                    *r = apply1(r, &a, &t);
                }
                bound.insert(a, t);
            }
            (Term::App(f, xs), Term::App(g, ys)) => {
                if f != g || xs.len() != ys.len() {
                    return None;
                }
                work.extend(xs.into_iter().zip(ys));
            }
        }
    }
    Some(Substitution::from_pairs(bound))
}

/// Most general unifier of two terms, or `None` when no unifier exists
/// (including occurs-check failure).
pub fn mgu_terms(a: &Term, b: &Term) -> Option<Substitution> {
    let out = solve(vec![(a.clone(), b.clone())]);
    debug_assert!(out.iter().all(|s| a.apply(s) == b.apply(s) && s.is_idempotent()));
    out
}

/// Most general unifier of two atoms.
pub fn mgu_atoms(a: &Atom, b: &Atom) -> Option<Substitution> {
    if a.pred != b.pred || a.arity() != b.arity() {
        return None;
    }
    let out = solve(a.args.iter().cloned().zip(b.args.iter().cloned()).collect());
    debug_assert!(out.iter().all(|s| a.apply(s) == b.apply(s) && s.is_idempotent()));
    out
}

/// Most general unifier of two aligned atom sequences of equal length.
pub fn mgu_atom_seqs(xs: &[Atom], ys: &[Atom]) -> Option<Substitution> {
    if xs.len() != ys.len() {
        return None;
    }
    let mut work = Vec::new();
    for (a, b) in xs.iter().zip(ys) {
        if a.pred != b.pred || a.arity() != b.arity() {
            return None;
        }
        work.extend(a.args.iter().cloned().zip(b.args.iter().cloned()));
    }
    let out = solve(work);
    debug_assert!(out
        .iter()
        .all(|s| xs.iter().zip(ys).all(|(a, b)| a.apply(s) == b.apply(s))));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atomset::is_variant;
    use crate::term::VarGen;

    #[test]
    fn binds_query_variable_to_clause_structure() {
        let gen = VarGen::new();
        let y = gen.fresh_named("Y");
        let x = gen.fresh_named("X");
        let a = Atom::new("p", vec![Term::Var(y.clone())]);
        let b = Atom::new("p", vec![Term::app("f", vec![Term::Var(x.clone())])]);
        let s = mgu_atoms(&a, &b).unwrap();
        assert_eq!(s.get(&y), Some(&Term::app("f", vec![Term::Var(x)])));
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn occurs_check_fails() {
        let gen = VarGen::new();
        let x = gen.fresh();
        assert!(mgu_terms(
            &Term::Var(x.clone()),
            &Term::app("f", vec![Term::Var(x)])
        )
        .is_none());
    }

    #[test]
    fn ground_identical_atoms_unify_with_empty_mgu() {
        let a = Atom::new("p", vec![Term::peano(2), Term::nil()]);
        let s = mgu_atoms(&a, &a.clone()).unwrap();
        assert!(s.is_empty());
    }

    #[test]
    fn clause_head_step_produces_expected_bindings() {
        // Unifying pqs(I,Cs,[W|Us],Ds) with pqs(0,V1,V2,V3) must bind I to 0
        // and V2 to [W|Us].
        let gen = VarGen::new();
        let (i, cs, w, us, ds) = (
            gen.fresh_named("I"),
            gen.fresh_named("Cs"),
            gen.fresh(),
            gen.fresh_named("Us"),
            gen.fresh_named("Ds"),
        );
        let body = Atom::new(
            "pqs",
            vec![
                Term::Var(i.clone()),
                Term::Var(cs),
                Term::cons(Term::Var(w.clone()), Term::Var(us.clone())),
                Term::Var(ds),
            ],
        );
        let (v1, v2, v3) = (gen.fresh(), gen.fresh(), gen.fresh());
        let cand = Atom::new(
            "pqs",
            vec![
                Term::peano(0),
                Term::Var(v1),
                Term::Var(v2.clone()),
                Term::Var(v3),
            ],
        );
        let s = mgu_atoms(&body, &cand).unwrap();
        assert_eq!(s.get(&i), Some(&Term::peano(0)));
        assert_eq!(
            s.get(&v2),
            Some(&Term::cons(Term::Var(w), Term::Var(us)))
        );
    }

    #[test]
    fn symmetry_up_to_renaming() {
        let gen = VarGen::new();
        let x = gen.fresh();
        let y = gen.fresh();
        let a = Atom::new("p", vec![Term::Var(x.clone()), Term::app("f", vec![Term::Var(y.clone())])]);
        let b = Atom::new("p", vec![Term::app("g", vec![Term::Var(y)]), Term::Var(x)]);
        // Not unifiable either way round.
        assert!(mgu_atoms(&a, &b).is_none() && mgu_atoms(&b, &a).is_none());

        let gen = VarGen::new();
        let u = gen.fresh();
        let v = gen.fresh();
        let w = gen.fresh();
        let c = Atom::new("p", vec![Term::Var(u.clone()), Term::app("g", vec![Term::Var(v)])]);
        let d = Atom::new("p", vec![Term::app("g", vec![Term::Var(w)]), Term::Var(u)]);
        if let (Some(s1), Some(s2)) = (mgu_atoms(&c, &d), mgu_atoms(&d, &c)) {
            assert!(is_variant(&c.apply(&s1), &c.apply(&s2)));
        } else {
            panic!("expected both directions to unify");
        }
    }

    #[test]
    fn sequence_length_mismatch_is_no_unifier() {
        let a = Atom::new("p", vec![Term::nil()]);
        assert!(mgu_atom_seqs(std::slice::from_ref(&a), &[]).is_none());
        assert!(mgu_atom_seqs(&[], &[]).unwrap().is_empty());
    }
}
