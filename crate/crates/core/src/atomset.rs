//! Sets of atoms maintained up to variant equivalence.
//!
//! Two expressions are variants when a bijective variable renaming maps one
//! onto the other. Each stored class is keyed by a canonical form in which
//! variables are numbered by first occurrence in a left-to-right traversal,
//! which makes variant membership a single ordered-map lookup.

use std::collections::BTreeMap;

use crate::subst::{Substitutable, Substitution};
use crate::term::{Atom, Sym, Term, Var};

/// The canonical representative of the variant class of `x`: variables are
/// renumbered 0, 1, 2, ... by first occurrence and names are dropped.
pub fn canonicalize<T: Substitutable>(x: &T) -> T {
    canonicalize_from(x, 0)
}

pub(crate) fn canonicalize_from<T: Substitutable>(x: &T, start: u64) -> T {
    let vars = x.vars_ordered();
    if vars.is_empty() {
        return x.apply(&Substitution::empty());
    }
    // Two passes so that an input variable whose id happens to equal its
    // canonical id still gets its name stripped: first move everything to
    // ids above the input range, then shift down to start, start+1, ...
    let above = vars.iter().map(Var::id).max().unwrap() + 1;
    let lift = Substitution::from_pairs(
        vars.iter()
            .cloned()
            .enumerate()
            .map(|(i, v)| (v, Term::Var(Var::with_id(above + i as u64)))),
    );
    let drop = Substitution::from_pairs((0..vars.len() as u64).map(|i| {
        (
            Var::with_id(above + i),
            Term::Var(Var::with_id(start + i)),
        )
    }));
    x.apply(&lift).apply(&drop)
}

/// True iff a bijective renaming maps `a` onto `b`.
pub fn is_variant<T: Substitutable + Eq>(a: &T, b: &T) -> bool {
    canonicalize(a) == canonicalize(b)
}

/// A finite set of atoms with no two stored atoms variants of each other.
/// Membership queries are variant-insensitive. Iteration is in canonical
/// order, so output derived from an `AtomSet` is deterministic.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AtomSet {
    // canonical form -> first representative inserted
    classes: BTreeMap<Atom, Atom>,
}

impl AtomSet {
    pub fn new() -> AtomSet {
        AtomSet::default()
    }

    /// Inserts an atom; returns false when a variant was already present.
    pub fn insert(&mut self, a: Atom) -> bool {
        let key = canonicalize(&a);
        match self.classes.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(a);
                true
            }
            std::collections::btree_map::Entry::Occupied(_) => false,
        }
    }

    pub fn contains(&self, a: &Atom) -> bool {
        self.classes.contains_key(&canonicalize(a))
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// One representative per class, in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = &Atom> {
        self.classes.values()
    }

    /// Representatives whose predicate is `pred`.
    pub fn iter_pred<'a>(&'a self, pred: &'a Sym) -> impl Iterator<Item = &'a Atom> + 'a {
        self.iter().filter(move |a| &a.pred == pred)
    }

    pub fn restrict_pred(&self, pred: &Sym) -> AtomSet {
        self.iter_pred(pred).cloned().collect()
    }

    /// Equality as variant-quotient sets.
    pub fn same_classes(&self, other: &AtomSet) -> bool {
        self.classes.len() == other.classes.len()
            && self.classes.keys().eq(other.classes.keys())
    }

    /// Quotient-set inclusion.
    pub fn subset_of(&self, other: &AtomSet) -> bool {
        self.classes.keys().all(|k| other.classes.contains_key(k))
    }

    /// Classes of `self` with no variant in `other`.
    pub fn difference(&self, other: &AtomSet) -> AtomSet {
        AtomSet {
            classes: self
                .classes
                .iter()
                .filter(|(k, _)| !other.classes.contains_key(k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    pub fn union_with(&mut self, other: &AtomSet) {
        for a in other.iter() {
            self.insert(a.clone());
        }
    }
}

impl FromIterator<Atom> for AtomSet {
    fn from_iter<I: IntoIterator<Item = Atom>>(iter: I) -> AtomSet {
        let mut s = AtomSet::new();
        for a in iter {
            s.insert(a);
        }
        s
    }
}

impl<'a> IntoIterator for &'a AtomSet {
    type Item = &'a Atom;
    type IntoIter = std::collections::btree_map::Values<'a, Atom, Atom>;

    fn into_iter(self) -> Self::IntoIter {
        self.classes.values()
    }
}
