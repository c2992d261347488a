//! Command-line front end: parsing, solving, bottom-up models, Herbrand
//! comparisons, and the specification checks, with a fixed exit-code
//! contract:
//!
//! * 0 - success / check passed
//! * 1 - a check failed and a counterexample was reported
//! * 2 - usage or parse error
//! * 3 - inconclusive: a bound or budget was exhausted
//!
//! Structured output (`--format kv` or `--format json`) is a
//! deterministic function of the arguments; timing goes to stderr.

use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ssem::nqueens;
use ssem::parse::{parse_program, parse_query, SourceProgram};
use ssem::print::canonical_string;
use ssem::report::Report;
use ssem::semantics::{
    ground_instances, herbrand_tp, iterate, program_alphabet, Alphabet, IterateLimits,
    IterateStatus,
};
use ssem::solve::{most_general_query, solve_all, Limits};
use ssem::spec::{
    check_completeness, check_correctness, check_level_mapping, CheckOptions, SpecBounds, Verdict,
};
use ssem::term::Sym;
use ssem::{Program, VarGen};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Parser)]
#[command(
    name = "ssem",
    version,
    about = "Logic-programming workbench: SLD answers, bottom-up models, and bounded correctness/completeness checks"
)]
struct Cli {
    /// Output format for results on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for the randomized parts of the checks.
    #[arg(long, global = true, default_value_t = 0xD5EE0)]
    seed: u64,
    /// Worker threads for the check loops (default: SSEM_JOBS or 1).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Kv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Builtin {
    /// The four-clause queens-placement program.
    Nqueens,
    /// The placement program plus its solution-listing entry point.
    NqueensFull,
}

#[derive(Args)]
struct Source {
    /// Program file (UTF-8, '%' comments, '.'-terminated clauses).
    file: Option<String>,
    /// Use a compiled-in program instead of a file.
    #[arg(long, value_enum)]
    builtin: Option<Builtin>,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate SLD computed answers for a query.
    Solve {
        /// Use a compiled-in program instead of a file.
        #[arg(long, value_enum)]
        builtin: Option<Builtin>,
        /// Program file (omit with --builtin), then the query, e.g.
        /// "pqs(4, [A,B,C,D], _, _)".
        #[arg(value_name = "FILE/QUERY", num_args = 0..=2)]
        args: Vec<String>,
        /// Resolution-step bound per derivation.
        #[arg(long, default_value_t = 64)]
        depth: usize,
        #[arg(long)]
        max_answers: Option<usize>,
    },
    /// Bottom-up model: one canonical atom per variant class.
    #[command(name = "s-model")]
    SModel {
        #[command(flatten)]
        source: Source,
        /// Number of consequence-operator iterations.
        #[arg(long, default_value_t = 6)]
        iters: usize,
        /// Class budget before reporting truncation.
        #[arg(long)]
        max_atoms: Option<usize>,
        /// Restrict the listing to one predicate.
        #[arg(long)]
        pred: Option<String>,
    },
    /// Depth-restricted ground model via the classical ground operator.
    Herbrand {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 4)]
        iters: usize,
        /// Term-depth restriction.
        #[arg(long, default_value_t = 3)]
        depth: usize,
        /// Alphabet override, e.g. "a/0,f/1" (default: program symbols).
        #[arg(long)]
        alphabet: Option<String>,
    },
    /// Check the bounded sufficient condition for correctness.
    #[command(name = "check-correctness")]
    CheckCorrectness {
        #[command(flatten)]
        source: Source,
        /// Specification name: S, S0, S_gl, S_qu, or S_full.
        #[arg(long)]
        spec: String,
        /// Sampling bounds, e.g. "i=3,len=6,vars=2".
        #[arg(long, default_value = "i=3,len=6,vars=2")]
        bounds: String,
    },
    /// Check the bounded sufficient condition for completeness.
    #[command(name = "check-completeness")]
    CheckCompleteness {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        spec: String,
        #[arg(long, default_value = "i=3,len=6,vars=2")]
        bounds: String,
        /// Search for witnesses instead of using the built-in rule.
        #[arg(long)]
        generic_search: bool,
    },
    /// Solve n-queens through the engine, optionally against the oracle.
    Queens {
        #[arg(long)]
        n: u64,
        /// Also run the brute-force oracle and compare.
        #[arg(long)]
        oracle: bool,
        /// Resolution-step bound (default: derived from n).
        #[arg(long)]
        depth: Option<usize>,
    },
    /// The two-program demonstration: equal ground models, different
    /// answer sets.
    #[command(name = "demo-s2")]
    DemoS2,
}

struct Ctx<'a> {
    format: Format,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn usage(&mut self, msg: &str) -> i32 {
        let _ = writeln!(self.err, "error: {msg}");
        EXIT_USAGE
    }

    fn emit(&mut self, report: &Report, text: &str) {
        match self.format {
            Format::Text => {
                let _ = write!(self.out, "{text}");
            }
            Format::Kv => {
                let _ = write!(self.out, "{}", report.to_kv());
            }
            Format::Json => {
                let _ = writeln!(self.out, "{}", report.to_json());
            }
        }
    }
}

fn load_program(source: &Source, gen: &VarGen, ctx: &mut Ctx) -> Result<Program, i32> {
    match (&source.file, source.builtin) {
        (Some(_), Some(_)) => Err(ctx.usage("give either a file or --builtin, not both")),
        (None, Some(Builtin::Nqueens)) => Ok(nqueens::nqueens_program(gen)),
        (None, Some(Builtin::NqueensFull)) => Ok(nqueens::nqueens_full_program(gen)),
        (Some(path), None) => {
            let src = SourceProgram::from_file(path)
                .map_err(|e| ctx.usage(&format!("cannot read {path}: {e}")))?;
            src.parse(gen).map_err(|e| ctx.usage(&e.to_string()))
        }
        (None, None) => Err(ctx.usage("no program given; pass a file or --builtin")),
    }
}

fn parse_alphabet(spec: &str) -> Result<Alphabet, String> {
    let mut alpha = Alphabet::new();
    for part in spec.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (name, arity) = part
            .split_once('/')
            .ok_or_else(|| format!("bad alphabet entry '{part}', expected name/arity"))?;
        let arity: usize = arity
            .parse()
            .map_err(|_| format!("bad arity in '{part}'"))?;
        alpha.insert(Sym::new(name), arity);
    }
    if alpha.is_empty() {
        return Err("alphabet is empty".to_string());
    }
    Ok(alpha)
}

fn verdict_exit(v: Verdict) -> i32 {
    match v {
        Verdict::Pass => EXIT_OK,
        Verdict::Fail => EXIT_CHECK_FAILED,
        Verdict::InconclusiveTruncated => EXIT_INCONCLUSIVE,
    }
}

/// Runs the CLI against explicit streams; returns the exit code.
pub fn run(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders --help/--version as "errors" that exit 0.
            return if e.exit_code() == 0 {
                let _ = write!(out, "{e}");
                EXIT_OK
            } else {
                let _ = write!(err, "{e}");
                EXIT_USAGE
            };
        }
    };
    let jobs = cli
        .jobs
        .or_else(|| std::env::var("SSEM_JOBS").ok().and_then(|s| s.parse().ok()))
        .unwrap_or(1)
        .max(1);
    let mut ctx = Ctx {
        format: cli.format,
        out,
        err,
    };
    let started = Instant::now();
    let code = dispatch(cli.command, cli.seed, jobs, &mut ctx);
    let _ = writeln!(ctx.err, "elapsed_ms: {}", started.elapsed().as_millis());
    code
}

fn dispatch(command: Command, seed: u64, jobs: usize, ctx: &mut Ctx) -> i32 {
    let gen = VarGen::new();
    match command {
        Command::Solve {
            builtin,
            args,
            depth,
            max_answers,
        } => {
            let (source, query) = match (builtin, args.as_slice()) {
                (Some(b), [query]) => (
                    Source {
                        file: None,
                        builtin: Some(b),
                    },
                    query.clone(),
                ),
                (None, [file, query]) => (
                    Source {
                        file: Some(file.clone()),
                        builtin: None,
                    },
                    query.clone(),
                ),
                _ => {
                    return ctx.usage(
                        "expected: solve <file> \"<query>\" or solve --builtin <name> \"<query>\"",
                    )
                }
            };
            let program = match load_program(&source, &gen, ctx) {
                Ok(p) => p,
                Err(code) => return code,
            };
            let q = match parse_query(&query, &gen) {
                Ok(q) => q,
                Err(e) => return ctx.usage(&e.to_string()),
            };
            let outcome = match solve_all(
                &program,
                &q,
                Limits {
                    max_depth: depth,
                    max_answers,
                },
                &gen,
            ) {
                Ok(o) => o,
                Err(e) => return ctx.usage(&e.to_string()),
            };
            let mut report = Report::new("solve");
            report.push("query", q.to_string());
            report.push("depth", depth);
            let mut text = format!("query: {q}\n");
            for (i, a) in outcome.answers.iter().enumerate() {
                report.push(&format!("answer.{i}.instance"), a.instance.to_string());
                report.push(
                    &format!("answer.{i}.substitution"),
                    a.substitution.to_string(),
                );
                text.push_str(&format!(
                    "answer {i}: {} via {}\n",
                    a.instance, a.substitution
                ));
            }
            report.push("answers", outcome.answers.len());
            report.push("truncated", outcome.truncated);
            report.push("answers_capped", outcome.answers_capped);
            let status = if outcome.truncated {
                "depth-limited (enumeration may be incomplete)"
            } else if outcome.answers_capped {
                "answer-capped"
            } else if outcome.answers.is_empty() {
                "finitely failed"
            } else {
                "complete"
            };
            report.push("status", status);
            text.push_str(&format!(
                "answers: {}\nstatus: {status}\n",
                outcome.answers.len()
            ));
            ctx.emit(&report, &text);
            if outcome.truncated {
                EXIT_INCONCLUSIVE
            } else {
                EXIT_OK
            }
        }
        Command::SModel {
            source,
            iters,
            max_atoms,
            pred,
        } => {
            let program = match load_program(&source, &gen, ctx) {
                Ok(p) => p,
                Err(code) => return code,
            };
            if let Some(p) = &pred {
                if program.arity(&Sym::new(p)).is_none() {
                    return ctx.usage(&format!("unknown predicate {p}"));
                }
            }
            let result = iterate(&program, iters, IterateLimits { max_atoms }, &gen);
            let mut report = Report::new("s-model");
            report.push("iters", iters);
            let status = match result.status {
                IterateStatus::Fixpoint { at } => format!("fixpoint at iteration {at}"),
                IterateStatus::ReachedBound => {
                    "iteration bound reached without fixpoint".to_string()
                }
                IterateStatus::Truncated { at } => {
                    format!("class budget exhausted at iteration {at}")
                }
            };
            let mut text = String::new();
            let mut shown = 0usize;
            for atom in result.interp.atoms.iter() {
                if let Some(p) = &pred {
                    if atom.pred.as_str() != p {
                        continue;
                    }
                }
                let s = canonical_string(atom);
                report.push(&format!("class.{shown}"), s.clone());
                text.push_str(&s);
                text.push('\n');
                shown += 1;
            }
            report.push("classes", shown);
            report.push("status", status.clone());
            text.push_str(&format!("classes: {shown}\nstatus: {status}\n"));
            ctx.emit(&report, &text);
            if matches!(result.status, IterateStatus::Truncated { .. }) {
                EXIT_INCONCLUSIVE
            } else {
                EXIT_OK
            }
        }
        Command::Herbrand {
            source,
            iters,
            depth,
            alphabet,
        } => {
            let program = match load_program(&source, &gen, ctx) {
                Ok(p) => p,
                Err(code) => return code,
            };
            let alpha = match alphabet {
                Some(s) => match parse_alphabet(&s) {
                    Ok(a) => a,
                    Err(e) => return ctx.usage(&e),
                },
                None => program_alphabet(&program),
            };
            let model = herbrand_tp(&program, iters, depth, &alpha);
            let mut report = Report::new("herbrand");
            report.push("iters", iters);
            report.push("depth", depth);
            let mut text = String::new();
            for (i, atom) in model.iter().enumerate() {
                report.push(&format!("atom.{i}"), atom.to_string());
                text.push_str(&atom.to_string());
                text.push('\n');
            }
            report.push("atoms", model.len());
            text.push_str(&format!("atoms: {}\n", model.len()));
            ctx.emit(&report, &text);
            EXIT_OK
        }
        Command::CheckCorrectness {
            source,
            spec,
            bounds,
        } => {
            let program = match load_program(&source, &gen, ctx) {
                Ok(p) => p,
                Err(code) => return code,
            };
            let Some(spec) = nqueens::spec_by_name(&spec) else {
                return ctx.usage(&format!("unknown specification '{spec}'"));
            };
            let bounds: SpecBounds = match bounds.parse() {
                Ok(b) => b,
                Err(e) => return ctx.usage(&e),
            };
            let opts = CheckOptions {
                jobs,
                seed,
                ..CheckOptions::default()
            };
            let r = check_correctness(&program, spec.as_ref(), &bounds, &opts, &gen);
            ctx.emit(&r.to_report(), &format!("{}\n", r.summary()));
            verdict_exit(r.verdict)
        }
        Command::CheckCompleteness {
            source,
            spec,
            bounds,
            generic_search,
        } => {
            let program = match load_program(&source, &gen, ctx) {
                Ok(p) => p,
                Err(code) => return code,
            };
            let Some(spec) = nqueens::spec_by_name(&spec) else {
                return ctx.usage(&format!("unknown specification '{spec}'"));
            };
            if !spec.has_level() {
                return ctx.usage(&format!(
                    "specification {} has no level mapping; completeness needs one",
                    spec.name()
                ));
            }
            let bounds: SpecBounds = match bounds.parse() {
                Ok(b) => b,
                Err(e) => return ctx.usage(&e),
            };
            let opts = CheckOptions {
                jobs,
                seed,
                ..CheckOptions::default()
            };
            let level_check = check_level_mapping(spec.as_ref(), &bounds, &opts, &gen);
            if level_check.verdict != Verdict::Pass {
                ctx.emit(
                    &level_check.to_report(),
                    &format!("{}\n", level_check.summary()),
                );
                return verdict_exit(level_check.verdict);
            }
            let witness = if generic_search {
                None
            } else {
                Some(&nqueens::completeness_witness as &ssem::spec::WitnessFn)
            };
            let r = check_completeness(&program, spec.as_ref(), &bounds, witness, &opts, &gen);
            ctx.emit(&r.to_report(), &format!("{}\n", r.summary()));
            verdict_exit(r.verdict)
        }
        Command::Queens { n, oracle, depth } => {
            if oracle && n > 10 {
                return ctx.usage("the brute-force oracle enumerates n! placements; use --n 10 or less with --oracle");
            }
            let program = nqueens::nqueens_program(&gen);
            let q = nqueens::queens_query(n, &gen);
            let depth = depth.unwrap_or((n * n + 2 * n + 8) as usize);
            let outcome = match solve_all(&program, &q, Limits::depth(depth), &gen) {
                Ok(o) => o,
                Err(e) => return ctx.usage(&e.to_string()),
            };
            let mut solutions = std::collections::BTreeSet::new();
            for a in &outcome.answers {
                match nqueens::extract_solution(a) {
                    Ok(s) => {
                        solutions.insert(s);
                    }
                    Err(e) => {
                        let _ = writeln!(ctx.err, "bad answer {}: {e}", a.instance);
                        return EXIT_CHECK_FAILED;
                    }
                }
            }
            let mut report = Report::new("queens");
            report.push("n", n);
            report.push("depth", depth);
            let fmt_solution = |s: &[u64]| {
                format!(
                    "[{}]",
                    s.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
                )
            };
            let mut text = String::new();
            for (i, s) in solutions.iter().enumerate() {
                report.push(&format!("solution.{i}"), fmt_solution(s));
                text.push_str(&format!("solution {i}: {}\n", fmt_solution(s)));
            }
            report.push("solutions", solutions.len());
            text.push_str(&format!("solutions: {}\n", solutions.len()));
            let mut code = if outcome.truncated {
                EXIT_INCONCLUSIVE
            } else {
                EXIT_OK
            };
            if oracle {
                let expected = nqueens::brute_force_queens(n);
                let matches = expected == solutions;
                for (i, s) in expected.iter().enumerate() {
                    report.push(&format!("oracle_solution.{i}"), fmt_solution(s));
                    text.push_str(&format!("oracle solution {i}: {}\n", fmt_solution(s)));
                }
                report.push("oracle_solutions", expected.len());
                report.push("oracle_match", matches);
                text.push_str(&format!(
                    "oracle solutions: {}\noracle match: {matches}\n",
                    expected.len()
                ));
                if !matches {
                    code = EXIT_CHECK_FAILED;
                }
            }
            report.push("truncated", outcome.truncated);
            ctx.emit(&report, &text);
            code
        }
        Command::DemoS2 => demo_s2(ctx, &gen),
    }
}

/// Two logically equivalent programs with the same least Herbrand model
/// but different answer sets, reproduced end to end.
fn demo_s2(ctx: &mut Ctx, gen: &VarGen) -> i32 {
    let src1 = "p(f(X)). p(f(a)).";
    let src2 = "p(f(X)).";
    let p1 = parse_program(src1, gen).expect("demo program parses");
    let p2 = parse_program(src2, gen).expect("demo program parses");

    let m1 = iterate(&p1, 4, IterateLimits::default(), gen);
    let m2 = iterate(&p2, 4, IterateLimits::default(), gen);
    let models_differ = !m1.interp.atoms.same_classes(&m2.interp.atoms);

    let alpha = ssem::semantics::alphabet_from(&[("a", 0), ("f", 1)]);
    let g1 = ground_instances(&m1.interp.atoms, 4, &alpha);
    let g2 = ground_instances(&m2.interp.atoms, 4, &alpha);
    let bridges_equal = g1 == g2;
    let herbrand_agrees =
        g1 == herbrand_tp(&p1, 5, 4, &alpha) && g2 == herbrand_tp(&p2, 5, 4, &alpha);

    let q1 = most_general_query(&p1, &Sym::new("p"), gen).unwrap();
    let q2 = most_general_query(&p2, &Sym::new("p"), gen).unwrap();
    let a1 = solve_all(&p1, &q1, Limits::depth(4), gen).unwrap();
    let a2 = solve_all(&p2, &q2, Limits::depth(4), gen).unwrap();

    let pass = m1.fixpoint_reached()
        && m2.fixpoint_reached()
        && m1.interp.atoms.len() == 2
        && m2.interp.atoms.len() == 1
        && models_differ
        && bridges_equal
        && herbrand_agrees
        && a1.answers.len() == 2
        && a2.answers.len() == 1;

    let mut report = Report::new("demo-s2");
    report.push("program.1", src1);
    report.push("program.2", src2);
    report.push("classes.1", m1.interp.atoms.len());
    report.push("classes.2", m2.interp.atoms.len());
    report.push("models_differ", models_differ);
    report.push("ground_atoms", g1.len());
    report.push("bridges_equal", bridges_equal);
    report.push("herbrand_agrees", herbrand_agrees);
    report.push("answers.1", a1.answers.len());
    report.push("answers.2", a2.answers.len());
    report.push("verdict", if pass { "pass" } else { "fail" });

    let mut text = String::new();
    text.push_str(&format!("program 1: {src1}\nprogram 2: {src2}\n"));
    text.push_str("bottom-up classes:\n");
    for a in m1.interp.atoms.iter() {
        text.push_str(&format!("  1: {}\n", canonical_string(a)));
    }
    for a in m2.interp.atoms.iter() {
        text.push_str(&format!("  2: {}\n", canonical_string(a)));
    }
    text.push_str(&format!(
        "models differ as variant-quotient sets: {models_differ}\n"
    ));
    text.push_str(&format!(
        "ground instances to depth 4 over a/0,f/1: {} atoms each, equal: {bridges_equal}\n",
        g1.len()
    ));
    text.push_str(&format!(
        "ground route via the classical operator agrees: {herbrand_agrees}\n"
    ));
    text.push_str(&format!(
        "answers for the most general query: {} vs {}\n",
        a1.answers.len(),
        a2.answers.len()
    ));
    text.push_str(&format!(
        "verdict: {}\n",
        if pass { "pass" } else { "fail" }
    ));
    ctx.emit(&report, &text);
    if pass {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}
