//! Substitutions: finite maps from variables to terms, applied
//! simultaneously.

use std::collections::{BTreeMap, BTreeSet};

use crate::term::{Atom, Clause, Term, Var, VarGen, VisitVars};

/// A finite map from variables to terms. Application replaces every bound
/// variable simultaneously (not sequentially), so `{X/a, Y/X}` maps
/// `q(X,Y)` to `q(a,X)`. Identity bindings `v -> v` are never stored.
///
/// Idempotence is not an invariant of the type; it is a postcondition of
/// the mgu computation only.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Substitution {
    map: BTreeMap<Var, Term>,
}

impl Substitution {
    pub fn empty() -> Substitution {
        Substitution::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, Term)>) -> Substitution {
        let mut s = Substitution::empty();
        for (v, t) in pairs {
            s.bind(v, t);
        }
        s
    }

    /// Adds or replaces a binding, dropping identities.
    pub fn bind(&mut self, v: Var, t: Term) {
        if let Term::Var(w) = &t {
            if *w == v {
                self.map.remove(&v);
                return;
            }
        }
        self.map.insert(v, t);
    }

    pub fn get(&self, v: &Var) -> Option<&Term> {
        self.map.get(v)
    }

    pub fn domain(&self) -> impl Iterator<Item = &Var> {
        self.map.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Term)> {
        self.map.iter()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Composition `self` then `other`: applying the result equals applying
    /// `self` first and `other` second.
    pub fn compose(&self, other: &Substitution) -> Substitution {
        let mut out = Substitution::empty();
        for (v, t) in &self.map {
            out.bind(v.clone(), t.apply(other));
        }
        for (v, t) in &other.map {
            if !self.map.contains_key(v) {
                out.bind(v.clone(), t.clone());
            }
        }
        out
    }

    /// Restriction to the given variables.
    pub fn restrict(&self, keep: &BTreeSet<Var>) -> Substitution {
        Substitution {
            map: self
                .map
                .iter()
                .filter(|(v, _)| keep.contains(v))
                .map(|(v, t)| (v.clone(), t.clone()))
                .collect(),
        }
    }

    pub fn is_idempotent(&self) -> bool {
        self.map.values().all(|t| {
            let mut ok = true;
            t.visit_vars(&mut |v| {
                if self.map.contains_key(v) {
                    ok = false;
                }
            });
            ok
        })
    }
}

/// Values a substitution can be applied to.
pub trait Substitutable: VisitVars + Sized {
    fn apply(&self, s: &Substitution) -> Self;
}

impl Substitutable for Term {
    fn apply(&self, s: &Substitution) -> Term {
        match self {
            Term::Var(v) => match s.get(v) {
                Some(t) => t.clone(),
                None => self.clone(),
            },
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| a.apply(s)).collect()),
        }
    }
}

impl Substitutable for Atom {
    fn apply(&self, s: &Substitution) -> Atom {
        Atom {
            pred: self.pred.clone(),
            args: self.args.iter().map(|a| a.apply(s)).collect(),
        }
    }
}

impl Substitutable for Clause {
    fn apply(&self, s: &Substitution) -> Clause {
        Clause {
            head: self.head.apply(s),
            body: self.body.iter().map(|b| b.apply(s)).collect(),
        }
    }
}

impl<T: Substitutable> Substitutable for Vec<T> {
    fn apply(&self, s: &Substitution) -> Vec<T> {
        self.iter().map(|x| x.apply(s)).collect()
    }
}

/// A variant of `x` in which every variable has been replaced by a fresh
/// one from `gen`.
pub fn rename_fresh<T: Substitutable>(x: &T, gen: &VarGen) -> T {
    let renaming = Substitution::from_pairs(
        x.vars_ordered()
            .into_iter()
            .map(|v| (v, Term::Var(gen.fresh()))),
    );
    x.apply(&renaming)
}

/// Variants of the given items that are pairwise variable disjoint and
/// disjoint from everything created earlier in the session (fresh ids are
/// strictly increasing, so any `avoid` set drawn from the session is
/// covered). Each item is renamed independently, so the guarantee is
/// n-way, not merely disjointness from one distinguished item.
pub fn rename_apart<T: Substitutable>(items: &[T], gen: &VarGen) -> Vec<T> {
    items.iter().map(|x| rename_fresh(x, gen)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{is_linear, variable_disjoint};

    fn gen3(gen: &VarGen) -> (Var, Var, Var) {
        (gen.fresh(), gen.fresh(), gen.fresh())
    }

    #[test]
    fn empty_substitution_is_identity() {
        let gen = VarGen::new();
        let (x, ..) = gen3(&gen);
        let a = Atom::new("p", vec![Term::Var(x)]);
        assert_eq!(a.apply(&Substitution::empty()), a);
    }

    #[test]
    fn application_is_simultaneous() {
        let gen = VarGen::new();
        let x = gen.fresh_named("X");
        let y = gen.fresh_named("Y");
        let s = Substitution::from_pairs([
            (x.clone(), Term::constant("a")),
            (y.clone(), Term::Var(x.clone())),
        ]);
        let q = Atom::new("q", vec![Term::Var(x.clone()), Term::Var(y)]);
        assert_eq!(
            q.apply(&s),
            Atom::new("q", vec![Term::constant("a"), Term::Var(x)])
        );
    }

    #[test]
    fn single_binding() {
        let gen = VarGen::new();
        let x = gen.fresh_named("X");
        let y = gen.fresh_named("Y");
        let s = Substitution::from_pairs([(y.clone(), Term::app("f", vec![Term::Var(x)]))]);
        let p = Atom::new("p", vec![Term::Var(y)]);
        assert_eq!(crate::print::to_string(&p.apply(&s)), "p(f(X))");
    }

    #[test]
    fn identity_bindings_are_dropped() {
        let gen = VarGen::new();
        let x = gen.fresh();
        let mut s = Substitution::empty();
        s.bind(x.clone(), Term::Var(x.clone()));
        assert!(s.is_empty());
    }

    #[test]
    fn composition_law_on_examples() {
        let gen = VarGen::new();
        let (x, y, z) = gen3(&gen);
        let sigma = Substitution::from_pairs([(x.clone(), Term::app("f", vec![Term::Var(y.clone())]))]);
        let theta = Substitution::from_pairs([
            (y.clone(), Term::constant("a")),
            (z.clone(), Term::Var(x.clone())),
        ]);
        let t = Term::app(
            "g",
            vec![Term::Var(x), Term::Var(y), Term::Var(z)],
        );
        assert_eq!(t.apply(&sigma.compose(&theta)), t.apply(&sigma).apply(&theta));
    }

    #[test]
    fn rename_apart_gives_disjoint_variants() {
        let gen = VarGen::new();
        let x = gen.fresh();
        let p = Atom::new("p", vec![Term::Var(x.clone())]);
        let out = rename_apart(&[p.clone(), p.clone()], &gen);
        assert!(variable_disjoint(&out[0], &out[1]));
        assert!(variable_disjoint(&out[0], &p));
        assert!(crate::atomset::is_variant(&out[0], &p));
        assert!(crate::atomset::is_variant(&out[1], &p));

        // Ground items are untouched.
        let ground = Atom::new("p", vec![Term::constant("a")]);
        assert_eq!(rename_apart(std::slice::from_ref(&ground), &gen)[0], ground);

        // Shared variables stay shared within one item but not across items.
        let q = Atom::new("q", vec![Term::Var(x.clone()), Term::Var(gen.fresh())]);
        let r = Atom::new("r", vec![Term::Var(x.clone())]);
        let out = rename_apart(&[q, r], &gen);
        assert!(variable_disjoint(&out[0], &out[1]));
        assert!(is_linear(&out[1]));
    }
}
