//! Acceptance run: each criterion prints one PASS/FAIL line with its
//! runtime and limit, and the process exits nonzero if any fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::One;
use prdesc_core::galois::{
    enumerate_fragment, full_stabilizer, galois_check, lattice_report, op_preserving_subgroup,
    semantic_partition, Fragment, FragmentParams, GaloisConfig, Partition, PartitionConfig,
};
use prdesc_core::gen::GenOptions;
use prdesc_core::universes::rules::{self, width_instances, RuleOptions};
use prdesc_core::universes::{closure, equiv, EquivConfig, EquivVerdict, NotEqualReason, RuleId};
use prdesc_core::{eval, fingerprint, parse, Arity, Budget, Op, Term, Tuple, Universe};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const GRID: u64 = 4;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn run(name: &str, limit: Duration, body: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = body();
    let took = start.elapsed();
    let in_time = took <= limit;
    let pass = out.pass && in_time;
    let timing = if in_time { "" } else { " (over time limit)" };
    println!(
        "{} {name}: {}; {:.1}s of {}s{timing}",
        if pass { "PASS" } else { "FAIL" },
        out.detail,
        took.as_secs_f64(),
        limit.as_secs()
    );
    pass
}

fn fragment(max_size: usize, max_width: usize, allow_rec: bool) -> Fragment {
    enumerate_fragment(FragmentParams {
        max_size,
        max_width,
        allow_rec,
        ..FragmentParams::default()
    })
    .expect("fragment within capacity")
}

/// Every schema of every universe, the gated ones included, on enough
/// instances: all width instances up to total width 6, or 200 random
/// instances for schemas with term variables.
fn rule_soundness() -> Outcome {
    let opts = RuleOptions { parametric_nno: true };
    let schemas: BTreeSet<RuleId> = Universe::ALL.iter().flat_map(|u| u.rules(opts)).collect();
    let budget = Budget::default();
    let gen = GenOptions {
        max_depth: 3,
        ..GenOptions::default()
    };
    let mut failures = Vec::new();
    let mut counts = Vec::new();
    for &rule in &schemas {
        let instances: Vec<(Term, Term)> = if rules::has_term_variables(rule) {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ rule as u64);
            (0..200).map(|_| rules::random_instance(rule, &mut rng, &gen)).collect()
        } else {
            width_instances(rule, 6)
        };
        let bad = instances
            .par_iter()
            .filter(|(l, r)| {
                let (fl, fr) = (fingerprint(l, GRID, budget), fingerprint(r, GRID, budget));
                fl.is_partial() || fr.is_partial() || fl != fr
            })
            .count();
        counts.push(format!("{}={}", rule.name(), instances.len()));
        let enough = instances.len() >= 100 || !rules::has_term_variables(rule);
        if bad > 0 || !enough {
            failures.push(format!("{} ({bad} unsound of {})", rule.name(), instances.len()));
        }
    }
    let detail = if failures.is_empty() {
        format!("{} schemas sound [{}]", schemas.len(), counts.join(" "))
    } else {
        format!("unsound: {}", failures.join(", "))
    };
    outcome(failures.is_empty(), detail)
}

fn null_corpus() -> Outcome {
    let nulls = [
        "(comp z (comp (pi 2 1) (pair s s)))",
        "(comp z (comp (pi 1 1) s))",
        "(comp z (comp s s))",
    ]
    .map(|s| parse(s).expect("valid term"));
    let cfg = EquivConfig::default();
    let mut ok = true;
    for (i, a) in nulls.iter().enumerate() {
        for b in &nulls[i + 1..] {
            let desc = equiv(a, b, Universe::Desc, &cfg).expect("same arity");
            ok &= matches!(
                desc,
                EquivVerdict::NotEqual {
                    reason: NotEqualReason::StructurallyDistinct
                }
            );
            let func = equiv(a, b, Universe::Func, &cfg).expect("same arity");
            ok &= func.is_equal();
        }
    }
    outcome(ok, "3 null descriptions: Desc notequal pairwise, Func equal pairwise")
}

/// Compares the decider with membership in complete bounded closures on
/// every pair of a hom-set.
fn decider_vs_closure() -> Outcome {
    let f = fragment(6, 2, false);
    let cfg = EquivConfig::default();
    let mut details = Vec::new();
    let mut ok = true;
    for u in [Universe::C, Universe::I, Universe::Cat] {
        let arities: Vec<Arity> = f.arities().collect();
        let per_term: Vec<(usize, usize, usize)> = arities
            .iter()
            .flat_map(|&a| f.homset_range(a).map(move |i| (a, i)))
            .collect::<Vec<_>>()
            .par_iter()
            .map(|&(a, i)| {
                let t = f.term(i);
                let cl = closure(t, u, cfg.caps.size, cfg.caps.count);
                if !cl.complete {
                    return (0, 0, 1);
                }
                let mut agree = 0;
                let mut disagree = 0;
                for s in f.homset(a) {
                    let v = equiv(t, s, u, &cfg).expect("same hom-set");
                    if v.is_equal() == cl.contains(s) && !matches!(v, EquivVerdict::Unknown { .. }) {
                        agree += 1;
                    } else {
                        disagree += 1;
                    }
                }
                (agree, disagree, 0)
            })
            .collect();
        let (agree, disagree, incomplete) = per_term
            .iter()
            .fold((0, 0, 0), |acc, x| (acc.0 + x.0, acc.1 + x.1, acc.2 + x.2));
        ok &= disagree == 0 && agree > 0;
        details.push(format!(
            "{u}: {agree} pairs agree, {disagree} disagree, {incomplete} incomplete closures"
        ));
    }
    outcome(ok, format!("{} terms; {}", f.len(), details.join("; ")))
}

fn lattice_edges() -> Outcome {
    let f = fragment(5, 2, true);
    let report = lattice_report(&f, &Universe::ALL, PartitionConfig::default());
    let mut ok = true;
    let mut strict = 0;
    let mut flat = Vec::new();
    for e in &report.edges {
        ok &= e.refines && e.stabilizer_contained;
        if e.strict {
            strict += 1;
        } else {
            flat.push(format!("{}->{}", e.finer, e.coarser));
        }
    }
    let covers: BTreeSet<(Universe, Universe)> = Universe::covers().iter().copied().collect();
    let seen: BTreeSet<(Universe, Universe)> =
        report.edges.iter().map(|e| (e.finer, e.coarser)).collect();
    ok &= covers == seen;
    let truncated: usize = report.partitions.values().map(|p| p.truncated).sum();
    let blocks: Vec<String> = report
        .partitions
        .iter()
        .map(|(u, p)| format!("{u}={}", p.blocks))
        .collect();
    let mut detail = format!(
        "{} of {} edges refine and are strict; blocks {}",
        strict,
        report.edges.len(),
        blocks.join(" ")
    );
    if !flat.is_empty() {
        detail.push_str(&format!("; no strictness witness on {}", flat.join(", ")));
    }
    if truncated > 0 {
        detail.push_str(&format!("; {truncated} truncated closures"));
    }
    outcome(ok, detail)
}

fn galois_round_trips() -> Outcome {
    let f = fragment(5, 2, true);
    let cfg = GaloisConfig::default();
    let report = galois_check(&f, &cfg);
    let full = report.checks.iter().filter(|c| c.name.starts_with("roundtrip-H-equal-")).count();
    let pass = report.passed() && report.subgroups.len() >= 20 && full > 0;
    let mut detail = format!(
        "{} checks, {} sampled subgroups ({full} full stabilizers), {} defect warnings",
        report.checks.len(),
        report.subgroups.len(),
        report.warnings.iter().filter(|w| w.starts_with("closure defect")).count()
    );
    for c in report.failures() {
        detail.push_str(&format!("; failed {}", c.name));
    }
    outcome(pass, detail)
}

fn rigidity() -> Outcome {
    let f = fragment(5, 2, true);
    // every permutation preserving arities, the largest candidate group
    let homsets = full_stabilizer(&Partition::from_keys(f.terms().iter().map(Term::arity)));
    let semantic = full_stabilizer(&semantic_partition(&f, Budget::default()).partition);
    let all = [Op::Comp, Op::Rec, Op::Pair];
    let a = op_preserving_subgroup(&homsets, &f, &all, true);
    let b = op_preserving_subgroup(&semantic, &f, &all, true);
    let pass = a.complete && b.complete && a.order.is_one() && b.order.is_one();
    outcome(
        pass,
        format!(
            "order {} inside the hom-set group, {} inside the functionality group ({} atoms)",
            a.order, b.order, a.atoms
        ),
    )
}

/// `h(x, 0) = f(x)` and `h(x, n+1) = g(x, h(x, n))`, checked against an
/// explicit loop and through the diagram terms themselves.
fn nno_squares() -> Outcome {
    let budget = Budget::default();
    let narrow = fragment(5, 2, true);
    let wide = fragment(3, 4, true);
    let mut cases: Vec<(Term, Term)> = Vec::new();
    let mut kinds = BTreeSet::new();
    for a in 1..=2 {
        for b in 1..=2 {
            let source = if a + b <= 2 { &narrow } else { &wide };
            let fs = source.homset(Arity::new(a, b));
            let gs = source.homset(Arity::new(a + b, b));
            for f in fs {
                for g in gs {
                    cases.push((f.clone(), g.clone()));
                }
            }
            if !fs.is_empty() && !gs.is_empty() {
                kinds.insert((a, b));
            }
        }
    }
    let bad: usize = cases
        .par_iter()
        .map(|(f, g)| {
            let a = f.arity().dom;
            let h = Term::rec(f.clone(), g.clone()).expect("typed");
            let (l0, r0) = rules::nno_left(f, g).expect("typed");
            let (l1, r1) = rules::nno_right(f, g).expect("typed");
            let mut bad = 0;
            for x in prdesc_core::semantics::grid_points(a, GRID) {
                let mut acc = eval(f, &x, budget).expect("small");
                for n in 0..=GRID {
                    let mut xn = x.0.clone();
                    xn.push(BigUint::from(n));
                    let xn = Tuple(xn);
                    let direct = eval(&h, &xn, budget).expect("small");
                    let squares = [(&l0, &r0), (&l1, &r1)]
                        .iter()
                        .all(|(l, r)| eval(l, &xn, budget).expect("small") == eval(r, &xn, budget).expect("small"));
                    if direct != acc || !squares {
                        bad += 1;
                    }
                    let mut step = x.0.clone();
                    step.extend(acc.0);
                    acc = eval(g, &Tuple(step), budget).expect("small");
                }
            }
            bad
        })
        .sum();
    let widths: Vec<String> = kinds.iter().map(|(a, b)| format!("({a},{b})")).collect();
    outcome(
        bad == 0 && kinds.len() == 4,
        format!("{} (f, g) pairs over a,b in {}, {bad} mismatches", cases.len(), widths.join(" ")),
    )
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let results = [
        run("1 rule soundness", secs(120), rule_soundness),
        run("2 null corpus", secs(1), null_corpus),
        run("3 decider vs closure", secs(300), decider_vs_closure),
        run("4 lattice edges", secs(600), lattice_edges),
        run("5 galois round trips", secs(300), galois_round_trips),
        run("6 rigidity", secs(60), rigidity),
        run("7 nno squares", secs(120), nno_squares),
    ];
    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
