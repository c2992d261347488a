//! Seeded random generators and the randomized property suites shared by
//! the acceptance tests. Every suite takes an explicit seed and case
//! count and reports the first failure with enough context to replay it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ssem::atomset::{is_variant, AtomSet};
use ssem::nqueens::{
    self, enumerate_s, enumerate_s0, is_gvd, level, pair_correct, up_diag,
};
use ssem::parse::parse_program;
use ssem::semantics::{tpi, SInterpretation};
use ssem::spec::SpecBounds;
use ssem::subst::{rename_fresh, Substitutable, Substitution};
use ssem::term::{tail_of, variable_disjoint, Atom, Program, Term, Var, VisitVars};
use ssem::unify::{mgu_atoms, mgu_terms};
use ssem::VarGen;

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_term(rng: &mut ChaCha8Rng, pool: &[Var], depth: usize) -> Term {
    let leaf = depth == 0 || rng.gen_bool(0.4);
    if leaf {
        match rng.gen_range(0..4) {
            0 | 1 => Term::Var(pool[rng.gen_range(0..pool.len())].clone()),
            2 => Term::constant(["a", "b"][rng.gen_range(0..2)]),
            _ => Term::peano(rng.gen_range(0..3)),
        }
    } else {
        match rng.gen_range(0..4) {
            0 => Term::app("f", vec![random_term(rng, pool, depth - 1)]),
            1 => Term::app(
                "g",
                vec![
                    random_term(rng, pool, depth - 1),
                    random_term(rng, pool, depth - 1),
                ],
            ),
            2 => Term::app("s", vec![random_term(rng, pool, depth - 1)]),
            _ => Term::cons(
                random_term(rng, pool, depth - 1),
                random_term(rng, pool, depth - 1),
            ),
        }
    }
}

pub fn random_atom(rng: &mut ChaCha8Rng, pool: &[Var], depth: usize) -> Atom {
    let (pred, arity) = [("p", 1), ("q", 2), ("r", 3)][rng.gen_range(0..3)];
    Atom::new(
        pred,
        (0..arity).map(|_| random_term(rng, pool, depth)).collect(),
    )
}

pub fn random_subst(rng: &mut ChaCha8Rng, pool: &[Var], depth: usize) -> Substitution {
    let mut s = Substitution::empty();
    for v in pool {
        if rng.gen_bool(0.6) {
            s.bind(v.clone(), random_term(rng, pool, depth));
        }
    }
    s
}

/// A bijective renaming of the variables of `x` onto fresh variables with
/// arbitrary names.
pub fn random_renaming<T: Substitutable>(
    x: &T,
    rng: &mut ChaCha8Rng,
    gen: &VarGen,
) -> Substitution {
    Substitution::from_pairs(x.vars_ordered().into_iter().map(|v| {
        let name = format!("N{}", rng.gen_range(0..1_000_000));
        (v, Term::Var(gen.fresh_named(&name)))
    }))
}

fn fail(case: usize, what: &str, detail: String) -> Result<(), String> {
    Err(format!("case {case}: {what}: {detail}"))
}

/// One-way matching, written here independently of the unifier: does some
/// substitution on the pattern's variables turn it into the target?
fn match_onto(pattern: &Term, target: &Term, bind: &mut Vec<(Var, Term)>) -> bool {
    match pattern {
        Term::Var(v) => {
            if let Some((_, t)) = bind.iter().find(|(w, _)| w == v) {
                t == target
            } else {
                bind.push((v.clone(), target.clone()));
                true
            }
        }
        Term::App(f, args) => match target {
            Term::App(g, targs) if f == g && args.len() == targs.len() => args
                .iter()
                .zip(targs)
                .all(|(a, b)| match_onto(a, b, bind)),
            _ => false,
        },
    }
}

/// Unification oracle suite: on a small term space (two variables, one
/// constant, one unary functor, depth at most 3) a brute-force enumerator
/// over substitutions confirms that whenever any unifier exists the
/// computed one exists too, is idempotent, and is at least as general.
pub fn prop_mgu_oracle(seed: u64, cases: usize) -> Result<(), String> {
    let gen = VarGen::new();
    let x = gen.fresh_named("X");
    let y = gen.fresh_named("Y");

    // Terms of depth <= d over {X, Y, a, f/1}.
    let mut space: Vec<Vec<Term>> = vec![vec![
        Term::Var(x.clone()),
        Term::Var(y.clone()),
        Term::constant("a"),
    ]];
    for d in 1..=3 {
        let mut layer = space[d - 1].clone();
        for t in &space[d - 1] {
            layer.push(Term::app("f", vec![t.clone()]));
        }
        layer.sort();
        layer.dedup();
        space.push(layer);
    }
    let full = &space[3];
    let range = &space[2];

    // Candidate substitutions: X and Y each unbound or bound to a term of
    // depth <= 2.
    let mut candidates = Vec::new();
    for tx in std::iter::once(None).chain(range.iter().map(Some)) {
        for ty in std::iter::once(None).chain(range.iter().map(Some)) {
            let mut s = Substitution::empty();
            if let Some(t) = tx {
                s.bind(x.clone(), t.clone());
            }
            if let Some(t) = ty {
                s.bind(y.clone(), t.clone());
            }
            candidates.push(s);
        }
    }

    let mut rng = rng_for(seed);
    let mut unified = 0usize;
    for case in 0..cases {
        let s = &full[rng.gen_range(0..full.len())];
        let t = &full[rng.gen_range(0..full.len())];
        let brute = candidates
            .iter()
            .find(|sigma| s.apply(sigma) == t.apply(sigma));
        match mgu_terms(s, t) {
            Some(mu) => {
                unified += 1;
                if s.apply(&mu) != t.apply(&mu) {
                    return fail(case, "mgu does not unify", format!("{s} vs {t}: {mu}"));
                }
                if !mu.is_idempotent() {
                    return fail(case, "mgu not idempotent", format!("{s} vs {t}: {mu}"));
                }
                if let Some(sigma) = brute {
                    let general = s.apply(&mu);
                    let instance = s.apply(sigma);
                    if !match_onto(&general, &instance, &mut Vec::new()) {
                        return fail(
                            case,
                            "mgu instance does not subsume a brute-force instance",
                            format!("{s} vs {t}: mgu {general} vs found {instance}"),
                        );
                    }
                }
            }
            None => {
                if let Some(sigma) = brute {
                    return fail(
                        case,
                        "brute force unifies but the mgu fails",
                        format!("{s} vs {t} under {sigma}"),
                    );
                }
            }
        }
    }
    if unified < cases / 5 {
        return Err(format!(
            "suite degenerated: only {unified}/{cases} pairs unified"
        ));
    }
    Ok(())
}

/// Unifying two aligned pairs at once agrees, up to variance, with
/// unifying the first components and then the instantiated remainders.
pub fn prop_mgu_decomposition(seed: u64, cases: usize) -> Result<(), String> {
    fn generalize(rng: &mut ChaCha8Rng, gen: &VarGen, t: &Term) -> Term {
        if rng.gen_bool(0.3) {
            return Term::Var(gen.fresh());
        }
        match t {
            Term::Var(_) => Term::Var(gen.fresh()),
            Term::App(f, args) => Term::App(
                f.clone(),
                args.iter().map(|a| generalize(rng, gen, a)).collect(),
            ),
        }
    }

    let gen = VarGen::new();
    let mut rng = rng_for(seed);
    let mut productive = 0usize;
    for case in 0..cases {
        let pool: Vec<Var> = (0..4).map(|_| gen.fresh()).collect();
        let a1 = random_atom(&mut rng, &pool, 2);
        let a2 = random_atom(&mut rng, &pool, 2);
        // Half the pairs are generalizations of the left side, so a good
        // share of cases actually unifies; the rest exercise agreement on
        // failure.
        let (b1, b2) = if rng.gen_bool(0.5) {
            (
                Atom {
                    pred: a1.pred.clone(),
                    args: a1.args.iter().map(|t| generalize(&mut rng, &gen, t)).collect(),
                },
                Atom {
                    pred: a2.pred.clone(),
                    args: a2.args.iter().map(|t| generalize(&mut rng, &gen, t)).collect(),
                },
            )
        } else {
            let other: Vec<Var> = (0..4).map(|_| gen.fresh()).collect();
            (
                random_atom(&mut rng, &other, 2),
                random_atom(&mut rng, &other, 2),
            )
        };

        let joint = ssem::unify::mgu_atom_seqs(
            &[a1.clone(), a2.clone()],
            &[b1.clone(), b2.clone()],
        );
        let stepwise = mgu_atoms(&a1, &b1).and_then(|theta| {
            mgu_atoms(&a2.apply(&theta), &b2.apply(&theta)).map(|psi| theta.compose(&psi))
        });
        match (joint, stepwise) {
            (None, None) => {}
            (Some(j), Some(s)) => {
                productive += 1;
                let jv = vec![a1.apply(&j), a2.apply(&j)];
                let sv = vec![a1.apply(&s), a2.apply(&s)];
                if !is_variant(&jv, &sv) {
                    return fail(
                        case,
                        "joint and stepwise instances differ",
                        format!("({a1}, {a2}) vs ({b1}, {b2})"),
                    );
                }
            }
            (j, s) => {
                return fail(
                    case,
                    "joint and stepwise disagree on unifiability",
                    format!(
                        "({a1}, {a2}) vs ({b1}, {b2}): joint {} stepwise {}",
                        j.is_some(),
                        s.is_some()
                    ),
                );
            }
        }
    }
    if productive < cases / 10 {
        return Err(format!(
            "suite degenerated: only {productive}/{cases} pairs unified"
        ));
    }
    Ok(())
}

/// Applying a composition equals applying the parts in order.
pub fn prop_composition_law(seed: u64, cases: usize) -> Result<(), String> {
    let gen = VarGen::new();
    let mut rng = rng_for(seed);
    for case in 0..cases {
        let pool: Vec<Var> = (0..5).map(|_| gen.fresh()).collect();
        let sigma = random_subst(&mut rng, &pool, 2);
        let theta = random_subst(&mut rng, &pool, 2);
        let t = random_term(&mut rng, &pool, 3);
        let composed = t.apply(&sigma.compose(&theta));
        let stepped = t.apply(&sigma).apply(&theta);
        if composed != stepped {
            return fail(
                case,
                "composition law violated",
                format!("t={t} sigma={sigma} theta={theta}: {composed} vs {stepped}"),
            );
        }
    }
    Ok(())
}

/// Variant equivalence is reflexive, symmetric and transitive, and
/// collapsing two distinct variables leaves the class.
pub fn prop_variant_equivalence(seed: u64, cases: usize) -> Result<(), String> {
    let gen = VarGen::new();
    let mut rng = rng_for(seed);
    for case in 0..cases {
        let pool: Vec<Var> = (0..4).map(|_| gen.fresh()).collect();
        let a = random_atom(&mut rng, &pool, 2);
        if !is_variant(&a, &a) {
            return fail(case, "not reflexive", a.to_string());
        }
        let b = a.apply(&random_renaming(&a, &mut rng, &gen));
        let c = b.apply(&random_renaming(&b, &mut rng, &gen));
        if !is_variant(&a, &b) || !is_variant(&b, &a) {
            return fail(case, "not symmetric under renaming", format!("{a} / {b}"));
        }
        if !(is_variant(&b, &c) && is_variant(&a, &c)) {
            return fail(case, "not transitive", format!("{a} / {b} / {c}"));
        }
        let vars = a.vars_ordered();
        if vars.len() >= 2 {
            let mut merge = Substitution::empty();
            merge.bind(vars[0].clone(), Term::Var(vars[1].clone()));
            let merged = a.apply(&merge);
            if is_variant(&a, &merged) {
                return fail(
                    case,
                    "collapsing variables kept the class",
                    format!("{a} vs {merged}"),
                );
            }
        }
    }
    Ok(())
}

fn random_gvd(
    rng: &mut ChaCha8Rng,
    gen: &VarGen,
    queens: std::ops::Range<u64>,
) -> Term {
    let len = rng.gen_range(0..4);
    let mut available: Vec<u64> = queens.collect();
    let mut members = Vec::new();
    for _ in 0..len {
        if !available.is_empty() && rng.gen_bool(0.5) {
            let idx = rng.gen_range(0..available.len());
            members.push(Term::peano(available.remove(idx)));
        } else {
            members.push(Term::Var(gen.fresh()));
        }
    }
    Term::list(members, Term::Var(gen.fresh()))
}

/// Unifying two variable-disjoint g.v.d.'s without a common ground member
/// yields a g.v.d. again.
pub fn prop_gvd_unification_closure(seed: u64, cases: usize) -> Result<(), String> {
    let gen = VarGen::new();
    let mut rng = rng_for(seed);
    let mut productive = 0usize;
    for case in 0..cases {
        let left = random_gvd(&mut rng, &gen, 1..5);
        let right = random_gvd(&mut rng, &gen, 5..9);
        assert!(is_gvd(&left) && is_gvd(&right), "generator broke");
        assert!(variable_disjoint(&left, &right));
        if let Some(theta) = mgu_terms(&left, &right) {
            productive += 1;
            let joined = left.apply(&theta);
            if joined != right.apply(&theta) {
                return fail(case, "mgu does not unify", format!("{left} / {right}"));
            }
            if !is_gvd(&joined) {
                return fail(
                    case,
                    "unification broke the g.v.d. shape",
                    format!("{left} + {right} -> {joined}"),
                );
            }
        }
    }
    if productive < cases / 4 {
        return Err(format!(
            "suite degenerated: only {productive}/{cases} pairs unified"
        ));
    }
    Ok(())
}

/// One row further down, the up-diagonal list loses its head and the
/// down-diagonal list gains a cell, preserving pair correctness.
pub fn prop_pair_correct_shift(seed: u64, cases: usize) -> Result<(), String> {
    let gen = VarGen::new();
    let mut rng = rng_for(seed);
    for case in 0..cases {
        let i = rng.gen_range(1..=4u64);
        let m = rng.gen_range(0..=i);
        // Distinct random columns for queens 1..m, with pairwise distinct
        // diagonal numbers; otherwise no correct pair exists at all.
        let pos = loop {
            let mut columns: Vec<u64> = (1..=8).collect();
            let mut pos = std::collections::BTreeMap::new();
            for j in 1..=m {
                let k = columns.remove(rng.gen_range(0..columns.len()));
                pos.insert(j, k);
            }
            let ups: std::collections::BTreeSet<i64> =
                pos.iter().map(|(&j, &k)| k as i64 + j as i64).collect();
            let downs: std::collections::BTreeSet<i64> =
                pos.iter().map(|(&j, &k)| k as i64 - j as i64).collect();
            if ups.len() == pos.len() && downs.len() == pos.len() {
                break pos;
            }
        };
        let max_col = pos.values().max().copied().unwrap_or(0);
        let cs_members: Vec<Term> = (1..=max_col)
            .map(|k| match pos.iter().find(|(_, &c)| c == k) {
                Some((&j, _)) => Term::peano(j),
                None => Term::Var(gen.fresh()),
            })
            .collect();
        let cs = Term::list(cs_members, Term::Var(gen.fresh()));

        let build = |diag: &dyn Fn(u64, u64) -> i64, rng: &mut ChaCha8Rng| {
            let forced: std::collections::BTreeMap<u64, u64> = pos
                .iter()
                .filter_map(|(&j, &k)| {
                    let l = diag(j, k);
                    (l > 0).then_some((l as u64, j))
                })
                .collect();
            let len = forced.keys().max().copied().unwrap_or(0) + rng.gen_range(0..2);
            let members: Vec<Term> = (1..=len)
                .map(|slot| match forced.get(&slot) {
                    Some(&j) => Term::peano(j),
                    None => Term::Var(gen.fresh()),
                })
                .collect();
            Term::list(members, Term::Var(gen.fresh()))
        };
        let us = build(&|j, k| up_diag(j, k, i), &mut rng);
        let ds = build(&|j, k| nqueens::down_diag(j, k, i), &mut rng);
        if !pair_correct(&us, &ds, m, i, &cs) {
            return fail(
                case,
                "generator produced an incorrect pair",
                format!("us={us} ds={ds} m={m} i={i} cs={cs}"),
            );
        }
        let shifted_us = tail_of(&us, &gen).expect("open list or variable");
        let shifted_ds = Term::cons(Term::Var(gen.fresh()), ds.clone());
        if !pair_correct(&shifted_us, &shifted_ds, m, i + 1, &cs) {
            return fail(
                case,
                "shift lemma violated",
                format!("us={us} ds={ds} m={m} i={i} cs={cs}"),
            );
        }
    }
    Ok(())
}

/// Variants get equal levels, whatever the variable names.
pub fn prop_level_variant_invariance(seed: u64, cases: usize) -> Result<(), String> {
    let gen = VarGen::new();
    let mut rng = rng_for(seed);
    let mut sample: Vec<Atom> = enumerate_s(&SpecBounds::default(), &gen)
        .iter()
        .cloned()
        .collect();
    sample.extend(enumerate_s0(&SpecBounds::default(), &gen).iter().cloned());
    let mut checked = 0usize;
    'outer: loop {
        for atom in &sample {
            if checked >= cases {
                break 'outer;
            }
            checked += 1;
            let expected = level(atom).map_err(|e| e.to_string())?;
            let renamed = atom.apply(&random_renaming(atom, &mut rng, &gen));
            let got = level(&renamed).map_err(|e| e.to_string())?;
            if got != expected {
                return fail(
                    checked,
                    "level changed under renaming",
                    format!("{atom} -> {renamed}: {expected} vs {got}"),
                );
            }
        }
    }
    Ok(())
}

fn random_program(rng: &mut ChaCha8Rng) -> Program {
    // Small definite programs over p/1 and q/1 with unary-term data; both
    // predicates get at least one fact so bodies are always defined.
    let data = ["a", "0", "f(a)", "s(0)", "f(X)", "s(X)", "g(X,Y)", "X"];
    let mut src = String::new();
    for pred in ["p", "q"] {
        src.push_str(&format!("{pred}({}).\n", data[rng.gen_range(0..data.len())]));
    }
    for _ in 0..rng.gen_range(1..3) {
        let head_pred = ["p", "q"][rng.gen_range(0..2)];
        let head = data[rng.gen_range(0..data.len())];
        let n_body = rng.gen_range(1..3);
        let body: Vec<String> = (0..n_body)
            .map(|_| {
                format!(
                    "{}({})",
                    ["p", "q"][rng.gen_range(0..2)],
                    data[rng.gen_range(0..data.len())]
                )
            })
            .collect();
        src.push_str(&format!("{head_pred}({head}) :- {}.\n", body.join(", ")));
    }
    let gen = VarGen::new();
    parse_program(&src, &gen).expect("generated source parses")
}

/// Iterates of the consequence operator grow monotonically as quotient
/// sets and are closed under renaming.
pub fn prop_tpi_monotone_and_renaming_closed(seed: u64, cases: usize) -> Result<(), String> {
    let mut rng = rng_for(seed);
    for case in 0..cases {
        let gen = VarGen::new();
        let program = random_program(&mut rng);
        let mut prev = SInterpretation::empty();
        let mut sets: Vec<AtomSet> = Vec::new();
        for _ in 0..3 {
            let next = tpi(&program, &prev, &gen);
            sets.push(next.atoms.clone());
            prev = next;
        }
        for w in sets.windows(2) {
            if !w[0].subset_of(&w[1]) {
                return fail(
                    case,
                    "iterates are not monotone",
                    format!("{} classes then {}", w[0].len(), w[1].len()),
                );
            }
        }
        for atom in sets[1].iter() {
            let renamed = rename_fresh(atom, &gen);
            if !sets[1].contains(&renamed) {
                return fail(case, "iterate not closed under renaming", atom.to_string());
            }
        }
        // Spot-check variant insensitivity of membership along the way.
        let spot = sets[1].iter().next().cloned();
        if let Some(atom) = spot {
            let renamed = atom.apply(&random_renaming(&atom, &mut rng, &gen));
            if !is_variant(&atom, &renamed)
                || mgu_atoms(&atom, &rename_fresh(&atom, &gen)).is_none()
            {
                return fail(case, "renaming sanity failed", atom.to_string());
            }
        }
    }
    Ok(())
}
