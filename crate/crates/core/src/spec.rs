//! Bounded, mechanized checks of the sufficient conditions for program
//! correctness and completeness w.r.t. a specification.
//!
//! A specification is a (usually infinite) set of atoms given by a
//! variant-insensitive membership predicate, a bounded enumerator used for
//! sampling, and optionally a level mapping. A passing check is evidence
//! within the stated bounds, never a proof; reports carry the bounds and
//! say so.

use std::str::FromStr;

use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::atomset::AtomSet;
use crate::print::canonical_string;
use crate::report::Report;
use crate::semantics::tpi_clause;
use crate::subst::{rename_fresh, Substitutable, Substitution};
use crate::term::{Atom, Program, Term, VarGen, VisitVars};
use crate::unify::mgu_atom_seqs;

/// Size parameters for sampling a specification: `max_index` bounds row
/// indices (and numerals generally), `max_len` bounds list spine lengths,
/// `max_spare_vars` bounds optional variable members per list.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpecBounds {
    pub max_index: u64,
    pub max_len: usize,
    pub max_spare_vars: usize,
}

impl Default for SpecBounds {
    fn default() -> SpecBounds {
        SpecBounds {
            max_index: 3,
            max_len: 6,
            max_spare_vars: 2,
        }
    }
}

impl std::fmt::Display for SpecBounds {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "i={},len={},vars={}",
            self.max_index, self.max_len, self.max_spare_vars
        )
    }
}

impl FromStr for SpecBounds {
    type Err = String;

    /// Accepts `i=3,len=6,vars=2` (any subset, any order).
    fn from_str(s: &str) -> Result<SpecBounds, String> {
        let mut b = SpecBounds::default();
        for part in s.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| format!("bad bound '{part}', expected key=value"))?;
            let n: u64 = value
                .trim()
                .parse()
                .map_err(|_| format!("bad bound value in '{part}'"))?;
            match key.trim() {
                "i" => b.max_index = n,
                "len" => b.max_len = n as usize,
                "vars" => b.max_spare_vars = n as usize,
                other => return Err(format!("unknown bound '{other}'")),
            }
        }
        Ok(b)
    }
}

/// A specification: membership plus a bounded enumerator, optionally with
/// a level mapping. Membership must be invariant under renaming and the
/// level mapping must give variants equal levels.
pub trait Spec: Sync {
    fn name(&self) -> &str;
    fn member(&self, a: &Atom) -> bool;
    /// One canonical representative per variant class within the bounds.
    fn enumerate(&self, b: &SpecBounds, gen: &VarGen) -> AtomSet;
    fn level(&self, _a: &Atom) -> Option<u64> {
        None
    }
    fn has_level(&self) -> bool {
        false
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// A search or tuple budget ran out before the bounds were covered.
    InconclusiveTruncated,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::InconclusiveTruncated => "inconclusive-truncated",
        }
    }
}

#[derive(Clone, Debug)]
pub enum Counterexample {
    /// A clause instance whose head escapes the specification.
    HeadOutside {
        clause_index: usize,
        body: Vec<String>,
        head: String,
    },
    /// A target atom for which no witness was found or verified.
    NoWitness { atom: String, reason: String },
    /// Levels differ between variants.
    LevelNotInvariant {
        atom: String,
        renamed: String,
        level: u64,
        renamed_level: u64,
    },
    /// The level mapping is undefined on a sampled atom.
    LevelUndefined { atom: String },
}

impl Counterexample {
    fn describe(&self) -> String {
        match self {
            Counterexample::HeadOutside {
                clause_index,
                body,
                head,
            } => format!(
                "clause {} with body ({}) yields head {} outside the specification",
                clause_index + 1,
                body.join(", "),
                head
            ),
            Counterexample::NoWitness { atom, reason } => {
                format!("no witness for {atom}: {reason}")
            }
            Counterexample::LevelNotInvariant {
                atom,
                renamed,
                level,
                renamed_level,
            } => format!(
                "level of {atom} is {level} but its variant {renamed} has level {renamed_level}"
            ),
            Counterexample::LevelUndefined { atom } => {
                format!("level mapping undefined on {atom}")
            }
        }
    }
}

/// Per-target witness evidence recorded by the completeness check.
#[derive(Clone, Debug)]
pub struct WitnessRecord {
    pub atom: String,
    pub clause_index: usize,
    pub level: u64,
    pub body_levels: Vec<u64>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct CheckStats {
    pub sample_size: usize,
    pub tuples_tried: u64,
    pub targets_checked: usize,
}

#[derive(Clone, Debug)]
pub struct CheckReport {
    pub command: &'static str,
    pub spec_name: String,
    pub bounds: SpecBounds,
    pub verdict: Verdict,
    pub stats: CheckStats,
    pub counterexamples: Vec<Counterexample>,
    pub witnesses: Vec<WitnessRecord>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn to_report(&self) -> Report {
        let mut r = Report::new(self.command);
        r.push("spec", self.spec_name.as_str());
        r.push("bounds.i", self.bounds.max_index);
        r.push("bounds.len", self.bounds.max_len);
        r.push("bounds.vars", self.bounds.max_spare_vars);
        r.push("checking", "bounded: pass means no counterexample within bounds");
        r.push("verdict", self.verdict.as_str());
        r.push("sample_size", self.stats.sample_size);
        r.push("tuples_tried", self.stats.tuples_tried);
        r.push("targets_checked", self.stats.targets_checked);
        r.push("counterexamples", self.counterexamples.len());
        for (i, c) in self.counterexamples.iter().enumerate() {
            match c {
                Counterexample::HeadOutside {
                    clause_index,
                    body,
                    head,
                } => {
                    r.push(&format!("counterexample.{i}.clause"), clause_index + 1);
                    r.push(&format!("counterexample.{i}.body"), body.join(", "));
                    r.push(&format!("counterexample.{i}.head"), head.as_str());
                }
                Counterexample::NoWitness { atom, reason } => {
                    r.push(&format!("counterexample.{i}.atom"), atom.as_str());
                    r.push(&format!("counterexample.{i}.reason"), reason.as_str());
                }
                Counterexample::LevelNotInvariant {
                    atom,
                    renamed,
                    level,
                    renamed_level,
                } => {
                    r.push(&format!("counterexample.{i}.atom"), atom.as_str());
                    r.push(&format!("counterexample.{i}.variant"), renamed.as_str());
                    r.push(&format!("counterexample.{i}.level"), *level);
                    r.push(&format!("counterexample.{i}.variant_level"), *renamed_level);
                }
                Counterexample::LevelUndefined { atom } => {
                    r.push(&format!("counterexample.{i}.atom"), atom.as_str());
                    r.push(&format!("counterexample.{i}.reason"), "level undefined");
                }
            }
        }
        for (i, w) in self.witnesses.iter().enumerate() {
            r.push(&format!("witness.{i}.atom"), w.atom.as_str());
            r.push(&format!("witness.{i}.clause"), w.clause_index + 1);
            r.push(&format!("witness.{i}.level"), w.level);
            r.push(
                &format!("witness.{i}.body_levels"),
                w.body_levels
                    .iter()
                    .map(|l| l.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
            );
        }
        r
    }

    pub fn summary(&self) -> String {
        let mut s = format!(
            "{}: {} (spec {}, bounds {}, sample {}, tuples {})",
            self.command,
            self.verdict.as_str(),
            self.spec_name,
            self.bounds,
            self.stats.sample_size,
            self.stats.tuples_tried
        );
        for c in &self.counterexamples {
            s.push_str("\n  ");
            s.push_str(&c.describe());
        }
        s
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CheckOptions {
    pub jobs: usize,
    /// Global cap on body tuples tried by the correctness check, and
    /// per-target cap for the generic witness search.
    pub tuple_budget: u64,
    pub seed: u64,
    pub max_counterexamples: usize,
}

impl Default for CheckOptions {
    fn default() -> CheckOptions {
        CheckOptions {
            jobs: 1,
            tuple_budget: 2_000_000,
            seed: 0xD5EE0,
            max_counterexamples: 5,
        }
    }
}

/// A claimed completeness witness: a clause of the program and body atoms
/// such that the target should be a variant of a consequence of that
/// clause under those atoms.
#[derive(Clone, Debug)]
pub struct Witness {
    pub clause_index: usize,
    pub body: Vec<Atom>,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum WitnessError {
    #[error("atom is outside the specification: {0}")]
    OutsideSpec(String),
    #[error("the program has no clause playing the required role: {0}")]
    MissingClause(String),
}

pub type WitnessFn = dyn Fn(&Atom, &Program, &VarGen) -> Result<Witness, WitnessError> + Sync;

fn decode_tuple(mut x: u64, radices: &[usize]) -> Vec<usize> {
    let mut idx = Vec::with_capacity(radices.len());
    for &r in radices {
        idx.push((x % r as u64) as usize);
        x /= r as u64;
    }
    idx
}

fn run_chunked<T, F>(jobs: usize, total: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, u64) -> Vec<T> + Sync,
{
    let jobs = jobs.max(1).min(total.max(1) as usize);
    if jobs <= 1 || total == 0 {
        return f(0, total);
    }
    let chunk = total.div_ceil(jobs as u64);
    let mut ranges = Vec::new();
    let mut lo = 0;
    while lo < total {
        let hi = (lo + chunk).min(total);
        ranges.push((lo, hi));
        lo = hi;
    }
    let fref = &f;
    std::thread::scope(|s| {
        let handles: Vec<_> = ranges
            .into_iter()
            .map(|(lo, hi)| s.spawn(move || fref(lo, hi)))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("check worker panicked"))
            .collect()
    })
}

/// Checks the sufficient condition for correctness: for every clause and
/// every tuple of fresh variants of sampled atoms aligned with its body,
/// a successful unification must put the instantiated head back inside the
/// specification. A pass is evidence within bounds only.
pub fn check_correctness(
    p: &Program,
    spec: &dyn Spec,
    bounds: &SpecBounds,
    opts: &CheckOptions,
    gen: &VarGen,
) -> CheckReport {
    let sample = spec.enumerate(bounds, gen);
    let mut stats = CheckStats {
        sample_size: sample.len(),
        ..Default::default()
    };
    let mut counterexamples: Vec<(u64, Counterexample)> = Vec::new();
    let mut budget_left = opts.tuple_budget;
    let mut truncated = false;

    for (ci, clause) in p.clauses().iter().enumerate() {
        let cands: Vec<Vec<&Atom>> = clause
            .body
            .iter()
            .map(|b| {
                sample
                    .iter()
                    .filter(|a| a.pred == b.pred && a.arity() == b.arity())
                    .collect()
            })
            .collect();
        if cands.iter().any(|c| c.is_empty()) && !clause.body.is_empty() {
            continue;
        }
        let radices: Vec<usize> = cands.iter().map(|c| c.len()).collect();
        let total: u64 = radices.iter().map(|&r| r as u64).product();
        let tried = total.min(budget_left);
        if tried < total {
            truncated = true;
        }
        budget_left -= tried;
        stats.tuples_tried += tried;

        let found = run_chunked(opts.jobs, tried, |lo, hi| {
            let mut out = Vec::new();
            for x in lo..hi {
                let idx = decode_tuple(x, &radices);
                let fresh_clause = rename_fresh(clause, gen);
                let tuple: Vec<Atom> = idx
                    .iter()
                    .enumerate()
                    .map(|(pos, &j)| rename_fresh(cands[pos][j], gen))
                    .collect();
                if let Some(theta) = mgu_atom_seqs(&fresh_clause.body, &tuple) {
                    let head = fresh_clause.head.apply(&theta);
                    if !spec.member(&head) {
                        out.push((
                            x,
                            Counterexample::HeadOutside {
                                clause_index: ci,
                                body: tuple.iter().map(canonical_string).collect(),
                                head: canonical_string(&head),
                            },
                        ));
                    }
                }
            }
            out
        });
        counterexamples.extend(found);
        if budget_left == 0 && ci + 1 < p.clauses().len() {
            truncated = true;
            break;
        }
    }

    counterexamples.sort_by_key(|(x, _)| *x);
    let counterexamples: Vec<Counterexample> = counterexamples
        .into_iter()
        .map(|(_, c)| c)
        .take(opts.max_counterexamples)
        .collect();
    let verdict = if !counterexamples.is_empty() {
        Verdict::Fail
    } else if truncated {
        Verdict::InconclusiveTruncated
    } else {
        Verdict::Pass
    };
    CheckReport {
        command: "check-correctness",
        spec_name: spec.name().to_string(),
        bounds: *bounds,
        verdict,
        stats,
        counterexamples,
        witnesses: Vec::new(),
    }
}

enum TargetOutcome {
    Ok(WitnessRecord),
    Bad(Counterexample),
    Exhausted,
}

/// Verifies the three witness obligations for one target: every body atom
/// is (a variant of) a member, levels strictly decrease, and the target is
/// a variant of a consequence of the witness clause under the body atoms.
fn verify_witness(
    target: &Atom,
    level: u64,
    w: &Witness,
    p: &Program,
    spec: &dyn Spec,
    gen: &VarGen,
) -> Result<WitnessRecord, String> {
    let Some(clause) = p.clauses().get(w.clause_index) else {
        return Err(format!("witness clause index {} out of range", w.clause_index));
    };
    let mut body_levels = Vec::new();
    for a in &w.body {
        if !spec.member(a) {
            return Err(format!(
                "witness body atom {} is not in the specification",
                canonical_string(a)
            ));
        }
        let Some(la) = spec.level(a) else {
            return Err(format!("level undefined on body atom {}", canonical_string(a)));
        };
        if la >= level {
            return Err(format!(
                "level does not decrease: |{}| = {} >= {} = |{}|",
                canonical_string(a),
                la,
                level,
                canonical_string(target)
            ));
        }
        body_levels.push(la);
    }
    let interp: AtomSet = w.body.iter().cloned().collect();
    let consequences = tpi_clause(clause, &interp, gen);
    if !consequences.contains(target) {
        return Err(format!(
            "target is not a variant of any consequence of clause {} under the witness atoms",
            w.clause_index + 1
        ));
    }
    Ok(WitnessRecord {
        atom: canonical_string(target),
        clause_index: w.clause_index,
        level,
        body_levels,
    })
}

/// Searches all clauses and all level-decreasing tuples from the sample
/// for a witness, up to `budget` tuples.
fn generic_witness_search(
    target: &Atom,
    level: u64,
    p: &Program,
    spec: &dyn Spec,
    sample: &AtomSet,
    budget: u64,
    gen: &VarGen,
) -> (TargetOutcome, u64) {
    let mut tried = 0u64;
    let candidates: Vec<&Atom> = sample
        .iter()
        .filter(|a| spec.level(a).is_some_and(|l| l < level))
        .collect();
    for (ci, clause) in p.clauses().iter().enumerate() {
        let n = clause.body.len();
        let cands: Vec<Vec<&Atom>> = clause
            .body
            .iter()
            .map(|b| {
                candidates
                    .iter()
                    .copied()
                    .filter(|a| a.pred == b.pred && a.arity() == b.arity())
                    .collect()
            })
            .collect();
        if cands.iter().any(|c| c.is_empty()) && n > 0 {
            continue;
        }
        let radices: Vec<usize> = cands.iter().map(|c| c.len()).collect();
        let total: u64 = radices.iter().map(|&r| r as u64).product();
        for x in 0..total {
            if tried >= budget {
                return (TargetOutcome::Exhausted, tried);
            }
            tried += 1;
            let idx = decode_tuple(x, &radices);
            let body: Vec<Atom> = idx
                .iter()
                .enumerate()
                .map(|(pos, &j)| cands[pos][j].clone())
                .collect();
            let w = Witness {
                clause_index: ci,
                body,
            };
            if let Ok(rec) = verify_witness(target, level, &w, p, spec, gen) {
                return (TargetOutcome::Ok(rec), tried);
            }
        }
    }
    (
        TargetOutcome::Bad(Counterexample::NoWitness {
            atom: canonical_string(target),
            reason: "no clause and level-decreasing tuple from the sample reproduces it"
                .to_string(),
        }),
        tried,
    )
}

/// Checks the sufficient condition for completeness: every sampled atom of
/// the specification must be a consequence of one clause under atoms of
/// the specification of strictly smaller level. Witnesses come from `wfn`
/// when given, otherwise from a budgeted generic search over the sample.
pub fn check_completeness(
    p: &Program,
    spec: &dyn Spec,
    bounds: &SpecBounds,
    wfn: Option<&WitnessFn>,
    opts: &CheckOptions,
    gen: &VarGen,
) -> CheckReport {
    let sample = spec.enumerate(bounds, gen);
    let targets: Vec<&Atom> = sample.iter().collect();
    let mut stats = CheckStats {
        sample_size: sample.len(),
        targets_checked: targets.len(),
        ..Default::default()
    };

    let outcomes = run_chunked(opts.jobs, targets.len() as u64, |lo, hi| {
        let mut out = Vec::new();
        for i in lo..hi {
            let target = targets[i as usize];
            let mut tried = 0u64;
            let outcome = match spec.level(target) {
                None => TargetOutcome::Bad(Counterexample::LevelUndefined {
                    atom: canonical_string(target),
                }),
                Some(level) => match wfn {
                    Some(f) => match f(target, p, gen) {
                        Ok(w) => match verify_witness(target, level, &w, p, spec, gen) {
                            Ok(rec) => TargetOutcome::Ok(rec),
                            Err(reason) => TargetOutcome::Bad(Counterexample::NoWitness {
                                atom: canonical_string(target),
                                reason,
                            }),
                        },
                        Err(e) => TargetOutcome::Bad(Counterexample::NoWitness {
                            atom: canonical_string(target),
                            reason: e.to_string(),
                        }),
                    },
                    None => {
                        let (outcome, searched) = generic_witness_search(
                            target,
                            level,
                            p,
                            spec,
                            &sample,
                            opts.tuple_budget,
                            gen,
                        );
                        tried = searched;
                        outcome
                    }
                },
            };
            out.push((i, outcome, tried));
        }
        out
    });

    let mut outcomes = outcomes;
    outcomes.sort_by_key(|(i, _, _)| *i);
    let mut counterexamples = Vec::new();
    let mut witnesses = Vec::new();
    let mut exhausted = false;
    for (_, outcome, tried) in outcomes {
        stats.tuples_tried += tried;
        match outcome {
            TargetOutcome::Ok(rec) => witnesses.push(rec),
            TargetOutcome::Bad(c) => counterexamples.push(c),
            TargetOutcome::Exhausted => exhausted = true,
        }
    }
    counterexamples.truncate(opts.max_counterexamples);
    let verdict = if !counterexamples.is_empty() {
        Verdict::Fail
    } else if exhausted {
        Verdict::InconclusiveTruncated
    } else {
        Verdict::Pass
    };
    CheckReport {
        command: "check-completeness",
        spec_name: spec.name().to_string(),
        bounds: *bounds,
        verdict,
        stats,
        counterexamples,
        witnesses,
    }
}

/// Spot-checks the level-mapping law on the sample: variants must get
/// equal levels. Renamed copies use randomly named fresh variables, so a
/// mapping that peeks at variable names is caught while one that counts
/// variables structurally passes.
pub fn check_level_mapping(
    spec: &dyn Spec,
    bounds: &SpecBounds,
    opts: &CheckOptions,
    gen: &VarGen,
) -> CheckReport {
    let sample = spec.enumerate(bounds, gen);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut stats = CheckStats {
        sample_size: sample.len(),
        targets_checked: sample.len(),
        ..Default::default()
    };
    let mut counterexamples = Vec::new();
    'outer: for atom in sample.iter() {
        let Some(level) = spec.level(atom) else {
            counterexamples.push(Counterexample::LevelUndefined {
                atom: canonical_string(atom),
            });
            continue;
        };
        for _ in 0..3 {
            let renaming = Substitution::from_pairs(atom.vars_ordered().into_iter().map(|v| {
                let name = format!("R{}", rng.next_u32());
                (v, Term::Var(gen.fresh_named(&name)))
            }));
            let renamed = atom.apply(&renaming);
            stats.tuples_tried += 1;
            match spec.level(&renamed) {
                Some(l) if l == level => {}
                Some(l) => {
                    counterexamples.push(Counterexample::LevelNotInvariant {
                        atom: canonical_string(atom),
                        renamed: renamed.to_string(),
                        level,
                        renamed_level: l,
                    });
                    if counterexamples.len() >= opts.max_counterexamples {
                        break 'outer;
                    }
                }
                None => {
                    counterexamples.push(Counterexample::LevelUndefined {
                        atom: renamed.to_string(),
                    });
                    if counterexamples.len() >= opts.max_counterexamples {
                        break 'outer;
                    }
                }
            }
        }
    }
    let verdict = if counterexamples.is_empty() {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    CheckReport {
        command: "check-level-mapping",
        spec_name: spec.name().to_string(),
        bounds: *bounds,
        verdict,
        stats,
        counterexamples,
        witnesses: Vec::new(),
    }
}
