use std::fmt::Write as _;
use std::path::Path;

use prdesc_core::galois::{
    enumerate_fragment, full_stabilizer, galois_check, lattice_report, op_preserving_subgroup,
    semantic_partition, Fragment, GaloisConfig,
};
use prdesc_core::gen::{random_any, GenOptions};
use prdesc_core::universes::rules::{random_instance, RuleId};
use prdesc_core::universes::{normalize_traced, Dir, replay, EquivVerdict, NotEqualReason, Step};
use prdesc_core::{
    equiv, eval, fingerprint, normalize, normalize_best_effort, parse, print, Op, Term, Tuple, Universe,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::config::{Config, Format, DEFAULT_SEED};
use crate::error::{CliError, Status};
use crate::Command;

/// A term given inline, or read from a file when written `@path`.
fn term_arg(arg: &str) -> Result<Term, CliError> {
    let text = match arg.strip_prefix('@') {
        Some(path) => {
            let path = Path::new(path);
            std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?
        }
        None => arg.to_string(),
    };
    Ok(parse(&text)?)
}

fn emit(cfg: &Config, text: impl FnOnce() -> String, value: impl FnOnce() -> Value) {
    match cfg.format {
        Format::Text => print!("{}", text()),
        Format::Json => println!("{}", serde_json::to_string_pretty(&value()).expect("values serialize")),
    }
}

pub fn run(cmd: &Command, cfg: &Config) -> Result<Status, CliError> {
    match cmd {
        Command::Eval { term, input } => cmd_eval(term, input, cfg),
        Command::Check {
            left,
            right,
            witness,
            ..
        } => cmd_check(left, right, *witness, cfg),
        Command::Normalize { term, .. } => cmd_normalize(term, cfg),
        Command::Enum { terms, .. } => cmd_enum(*terms, cfg),
        Command::Galois {
            universes,
            samples,
            ops,
            fix_initials,
            ..
        } => cmd_galois(universes.as_deref(), *samples, ops.as_deref(), *fix_initials, cfg),
        Command::Lattice { universes, .. } => cmd_lattice(universes.as_deref(), cfg),
        Command::Fuzz { count } => cmd_fuzz(*count, cfg),
    }
}

fn cmd_eval(term: &str, input: &str, cfg: &Config) -> Result<Status, CliError> {
    let t = term_arg(term)?;
    let x: Tuple = input.parse().map_err(CliError::Usage)?;
    let y = eval(&t, &x, cfg.budget())?;
    emit(
        cfg,
        || format!("{y}\n"),
        || json!({ "term": t, "input": x, "output": y }),
    );
    Ok(Status::Ok)
}

fn describe_reason(reason: &NotEqualReason) -> String {
    match reason {
        NotEqualReason::StructurallyDistinct => "the terms are different trees".into(),
        NotEqualReason::CanonicalFormsDiffer { left, right } => {
            format!("canonical forms differ:\n  {left}\n  {right}")
        }
        NotEqualReason::FingerprintMismatch { input, left, right } => {
            format!("at input ({input}) the values are ({left}) and ({right})")
        }
    }
}

fn step_line(k: usize, s: &Step) -> String {
    let dir = match s.dir {
        Dir::Forward => "forward",
        Dir::Backward => "backward",
    };
    format!("{:>3}. {} {dir} at {}: {}\n", k + 1, s.rule.name(), s.path, s.result)
}

fn cmd_check(left: &str, right: &str, show_witness: bool, cfg: &Config) -> Result<Status, CliError> {
    let (a, b) = (term_arg(left)?, term_arg(right)?);
    let u = cfg.universe;
    let v = equiv(&a, &b, u, &cfg.equiv())?;
    let replayed = match &v {
        EquivVerdict::Equal { witness, .. } if show_witness => {
            Some(replay(&a, witness, &u.rules(cfg.rules())).map(|end| end == b))
        }
        _ => None,
    };
    let status = match &v {
        EquivVerdict::Equal { .. } => Status::Ok,
        EquivVerdict::NotEqual { .. } => Status::NotEqual,
        EquivVerdict::Unknown { .. } => Status::Unknown,
    };
    emit(
        cfg,
        || {
            let mut out = format!("{}\n", v.name());
            match &v {
                EquivVerdict::Equal { witness, approximate } => {
                    if *approximate {
                        let _ = writeln!(out, "values agree on every input below {}", cfg.grid);
                    }
                    if show_witness {
                        for (k, s) in witness.iter().enumerate() {
                            out.push_str(&step_line(k, s));
                        }
                    }
                }
                EquivVerdict::NotEqual { reason } => {
                    let _ = writeln!(out, "{}", describe_reason(reason));
                }
                EquivVerdict::Unknown { reason } => {
                    let _ = writeln!(out, "{reason}");
                }
            }
            match &replayed {
                Some(Ok(true)) => out.push_str("replay: ok\n"),
                Some(Ok(false)) => out.push_str("replay: ends at a different term\n"),
                Some(Err(e)) => {
                    let _ = writeln!(out, "replay: {e}");
                }
                None => {}
            }
            out
        },
        || {
            let mut j = v.to_json(u, cfg.caps());
            if let Some(r) = &replayed {
                j["replayed"] = json!(matches!(r, Ok(true)));
            }
            j
        },
    );
    Ok(status)
}

fn cmd_normalize(term: &str, cfg: &Config) -> Result<Status, CliError> {
    let t = term_arg(term)?;
    let u = cfg.universe;
    let (n, best_effort) = match u {
        Universe::C | Universe::I | Universe::Cat => (normalize(&t, u).expect("decidable universe"), false),
        Universe::CatX => {
            let tr = normalize_traced(&t, u).expect("CatX has a traced strategy");
            if !tr.complete {
                return Err(CliError::Budget(format!(
                    "normalization stopped after {} steps at a term of size {}",
                    tr.steps.len(),
                    tr.term.size()
                )));
            }
            (tr.term, true)
        }
        other => {
            return Err(CliError::Usage(format!(
                "{other} has no normal form procedure; use C, I or Cat, or CatX for a best-effort form"
            )))
        }
    };
    emit(
        cfg,
        || format!("{n}\n"),
        || json!({ "universe": u, "input": t, "normal_form": n, "best_effort": best_effort }),
    );
    Ok(Status::Ok)
}

fn fragment(cfg: &Config) -> Result<Fragment, CliError> {
    Ok(enumerate_fragment(cfg.fragment())?)
}

fn cmd_enum(with_terms: bool, cfg: &Config) -> Result<Status, CliError> {
    let f = fragment(cfg)?;
    emit(
        cfg,
        || {
            let mut out = format!("{} terms\n", f.len());
            for a in f.arities() {
                let r = f.homset_range(a);
                let _ = writeln!(out, "hom-set {a}: {} terms (indices {}..{})", r.len(), r.start, r.end);
                if with_terms {
                    for i in r {
                        let _ = writeln!(out, "  {i:>5} {}", f.term(i));
                    }
                }
            }
            out
        },
        || f.summary(with_terms),
    );
    Ok(Status::Ok)
}

fn op_names(ops: &[Op]) -> Vec<&'static str> {
    ops.iter().map(|o| o.name()).collect()
}

fn cmd_galois(
    universes: Option<&[Universe]>,
    samples: usize,
    ops: Option<&[Op]>,
    fix_initials: bool,
    cfg: &Config,
) -> Result<Status, CliError> {
    let f = fragment(cfg)?;
    let gcfg = GaloisConfig {
        universes: universes.map_or(Universe::ALL.to_vec(), <[_]>::to_vec),
        partitions: cfg.partitions(),
        samples,
        seed: cfg.seed,
    };
    let report = galois_check(&f, &gcfg);
    let preserved = ops.map(|ops| {
        let g = full_stabilizer(&semantic_partition(&f, cfg.budget()).partition);
        (ops, op_preserving_subgroup(&g, &f, ops, fix_initials))
    });
    let mut status = if report.passed() { Status::Ok } else { Status::NotEqual };
    if status == Status::Ok && preserved.as_ref().is_some_and(|(_, k)| !k.complete) {
        status = Status::Budget;
    }
    emit(
        cfg,
        || {
            let mut out = format!("fragment: {} terms\n", f.len());
            for u in &gcfg.universes {
                let blocks = &report.partitions[u.name()];
                let order = report.groups[u.name()]["order"].as_str().unwrap_or("?");
                let _ = writeln!(out, "{:<6} {:>5} blocks, stabilizer order {order}", u.name(), blocks.len());
            }
            if gcfg.universes.contains(&Universe::Func) {
                let _ = writeln!(out, "Func partition is {}", report.semantic);
            }
            let failures = report.failures();
            let _ = writeln!(
                out,
                "checks: {} of {} pass",
                report.checks.len() - failures.len(),
                report.checks.len()
            );
            for c in failures {
                let _ = writeln!(out, "  FAIL {} {}", c.name, c.detail);
            }
            for w in &report.warnings {
                let _ = writeln!(out, "warning: {w}");
            }
            if let Some((ops, k)) = &preserved {
                let _ = writeln!(
                    out,
                    "preserving {}{}: order {}{}",
                    op_names(ops).join(","),
                    if fix_initials { " with initial functions fixed" } else { "" },
                    k.order,
                    if k.complete { "" } else { " (search budget exhausted)" }
                );
            }
            out
        },
        || {
            let mut j = serde_json::to_value(&report).expect("reports serialize");
            if let Some((ops, k)) = &preserved {
                j["preserved"] = json!({
                    "ops": op_names(ops),
                    "fix_initials": fix_initials,
                    "order": k.order.to_string(),
                    "atoms": k.atoms,
                    "complete": k.complete,
                    "group": k.group,
                });
            }
            j
        },
    );
    Ok(status)
}

fn cmd_lattice(universes: Option<&[Universe]>, cfg: &Config) -> Result<Status, CliError> {
    let f = fragment(cfg)?;
    let us = universes.map_or(Universe::ALL.to_vec(), <[_]>::to_vec);
    let r = lattice_report(&f, &us, cfg.partitions());
    let ok = r.edges.iter().all(|e| e.refines);
    emit(
        cfg,
        || {
            let mut out = format!("fragment: {} terms\n", f.len());
            for (u, p) in &r.partitions {
                let trunc = if p.truncated > 0 {
                    format!(", {} truncated searches", p.truncated)
                } else {
                    String::new()
                };
                let _ = writeln!(out, "{:<6} {:>5} blocks{trunc}", u.name(), p.blocks);
            }
            if r.partitions.contains_key(&Universe::Func) {
                let _ = writeln!(out, "Func partition is {}", r.semantic);
            }
            for e in &r.edges {
                let state = match (&e.refines, &e.witness) {
                    (false, _) => "DOES NOT REFINE".to_string(),
                    (true, Some((a, b))) => format!("strict, merges {a} and {b}"),
                    (true, None) => "equal on this fragment".to_string(),
                };
                let _ = writeln!(out, "{} -> {}: {state}", e.finer, e.coarser);
            }
            for x in &r.incomparable {
                let _ = writeln!(
                    out,
                    "{} and {} are incomparable: {} ~ {} only in {}, {} ~ {} only in {}",
                    x.left, x.right, x.only_left.0, x.only_left.1, x.left, x.only_right.0, x.only_right.1, x.right
                );
            }
            out
        },
        || r.to_json(),
    );
    Ok(if ok { Status::Ok } else { Status::NotEqual })
}

fn cmd_fuzz(count: usize, cfg: &Config) -> Result<Status, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let budget = cfg.budget();
    let same = |a: &Term, b: &Term| {
        let (fa, fb) = (fingerprint(a, cfg.grid, budget), fingerprint(b, cfg.grid, budget));
        fa.is_partial() || fb.is_partial() || fa == fb
    };
    let with_rec = GenOptions::default();
    let rec_free = GenOptions {
        allow_rec: false,
        ..GenOptions::default()
    };
    let mut failures = Vec::new();
    for _ in 0..count {
        let t = random_any(&mut rng, &with_rec);
        if parse(&print(&t)).as_ref() != Ok(&t) {
            failures.push(format!("print/parse: {t}"));
        }
        let t = random_any(&mut rng, &rec_free);
        for u in [Universe::C, Universe::I, Universe::Cat] {
            let n = normalize(&t, u).expect("decidable universe");
            if normalize(&n, u).as_ref() != Ok(&n) || !same(&t, &n) {
                failures.push(format!("normalize {u}: {t}"));
            }
        }
        let n = normalize_best_effort(&t);
        if normalize_best_effort(&n) != n || !same(&t, &n) {
            failures.push(format!("best-effort form: {t}"));
        }
    }
    let gen = GenOptions {
        max_depth: 3,
        ..GenOptions::default()
    };
    let rules: Vec<RuleId> = RuleId::ALL
        .into_iter()
        .filter(|&r| prdesc_core::universes::rules::has_term_variables(r))
        .collect();
    let mut instances = 0;
    for k in 0..count {
        let rule = rules[k % rules.len()];
        let (l, r) = random_instance(rule, &mut rng, &gen);
        instances += 1;
        if !same(&l, &r) {
            failures.push(format!("{}: {l} vs {r}", rule.name()));
        }
    }
    let seed_note = if cfg.seed == DEFAULT_SEED { " (default)" } else { "" };
    emit(
        cfg,
        || {
            let mut out = format!("seed {}{seed_note}\n{count} terms, {instances} rule instances\n", cfg.seed);
            for f in failures.iter().take(20) {
                let _ = writeln!(out, "FAIL {f}");
            }
            let _ = writeln!(out, "{} failures", failures.len());
            out
        },
        || json!({ "seed": cfg.seed, "terms": count, "rule_instances": instances, "failures": failures }),
    );
    Ok(if failures.is_empty() { Status::Ok } else { Status::NotEqual })
}
