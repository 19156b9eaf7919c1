use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::rules::{apply, Dir, Orientation, RuleId, RuleOptions};
use super::Universe;
use crate::term::{Term, TermPath};

/// Which directions of each rule to try.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Both directions of every rule.
    Both,
    /// Only the normalizing direction of directed rules.
    Oriented,
}

/// One rewrite: `rule` used in direction `dir` at `path`, giving the whole
/// term `result`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub rule: RuleId,
    pub path: TermPath,
    pub dir: Dir,
    pub result: Term,
}

fn directions(rule: RuleId, mode: Mode) -> &'static [Dir] {
    match (mode, rule.schema().orientation) {
        (Mode::Both, _) => &[Dir::Forward, Dir::Backward],
        (Mode::Oriented, Orientation::Directed(Dir::Forward)) => &[Dir::Forward],
        (Mode::Oriented, Orientation::Directed(Dir::Backward)) => &[Dir::Backward],
        (Mode::Oriented, Orientation::Bidirectional) => &[],
    }
}

/// All single-step rewrites of `t` at any position.
pub fn rewrites(t: &Term, rules: &[RuleId], mode: Mode) -> Vec<Step> {
    let mut out = Vec::new();
    collect(t, rules, mode, &mut Vec::new(), &mut |path, rule, dir, sub| {
        out.push((TermPath(path.to_vec()), rule, dir, sub))
    });
    out.into_iter()
        .map(|(path, rule, dir, sub)| Step {
            result: t.replace_at(&path, sub).expect("rules preserve arity"),
            rule,
            path,
            dir,
        })
        .collect()
}

fn collect(
    t: &Term,
    rules: &[RuleId],
    mode: Mode,
    path: &mut Vec<u8>,
    emit: &mut dyn FnMut(&[u8], RuleId, Dir, Term),
) {
    for &rule in rules {
        for &dir in directions(rule, mode) {
            for r in apply(rule, t, dir) {
                emit(path, rule, dir, r);
            }
        }
    }
    if let Some((a, b)) = t.children() {
        path.push(0);
        collect(a, rules, mode, path, emit);
        path.pop();
        path.push(1);
        collect(b, rules, mode, path, emit);
        path.pop();
    }
}

/// Rewrites of `t` under the rules of `u` (default options).
pub fn rewrite_instances(t: &Term, u: Universe, mode: Mode) -> Vec<Step> {
    rewrites(t, &u.rules(RuleOptions::default()), mode)
}

/// Whole-term results of using `rule` at `path`.
pub fn rewrite_at(t: &Term, path: &TermPath, rule: RuleId, dir: Dir) -> Vec<Term> {
    let Ok(sub) = t.subterm_at(path) else {
        return Vec::new();
    };
    apply(rule, sub, dir)
        .into_iter()
        .filter_map(|r| t.replace_at(path, r).ok())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("step {index} ({rule} at {path}) does not follow: {reason}")]
pub struct ReplayError {
    pub index: usize,
    pub rule: RuleId,
    pub path: TermPath,
    pub reason: String,
}

/// Checks every step of a witness against the rule set and returns the
/// final term.
///
/// A step is accepted when its result is among the rewrites of the current
/// term, or when the current term is among the rewrites of the result in
/// the opposite direction. The second form covers reversed steps whose
/// inverse is not determined by the rewritten side alone.
pub fn replay(start: &Term, steps: &[Step], rules: &[RuleId]) -> Result<Term, ReplayError> {
    let mut cur = start.clone();
    for (index, s) in steps.iter().enumerate() {
        let fail = |reason: &str| ReplayError {
            index,
            rule: s.rule,
            path: s.path.clone(),
            reason: reason.to_string(),
        };
        if !rules.contains(&s.rule) {
            return Err(fail("rule not in the universe"));
        }
        let ok = rewrite_at(&cur, &s.path, s.rule, s.dir).contains(&s.result)
            || rewrite_at(&s.result, &s.path, s.rule, s.dir.flip()).contains(&cur);
        if !ok {
            return Err(fail("result is not a rewrite of the current term"));
        }
        cur = s.result.clone();
    }
    Ok(cur)
}

/// The steps leading back from the end of `steps` to `start`.
pub(crate) fn reverse_steps(start: &Term, steps: &[Step]) -> Vec<Step> {
    let mut out = Vec::with_capacity(steps.len());
    for (k, s) in steps.iter().enumerate().rev() {
        let before = if k == 0 { start.clone() } else { steps[k - 1].result.clone() };
        out.push(Step {
            rule: s.rule,
            path: s.path.clone(),
            dir: s.dir.flip(),
            result: before,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn t(s: &str) -> Term {
        parse(s).unwrap()
    }

    #[test]
    fn assoc_instance_under_c() {
        let r = rewrite_instances(&t("(comp s (comp s z))"), Universe::C, Mode::Oriented);
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].result, t("(comp (comp s s) z)"));
        assert_eq!(r[0].path, TermPath::root());
    }

    #[test]
    fn leaves_have_no_oriented_rewrites() {
        for u in Universe::ALL {
            assert!(rewrite_instances(&Term::zero(), u, Mode::Oriented).is_empty());
        }
        assert!(rewrite_instances(&Term::zero(), Universe::C, Mode::Both).is_empty());
    }

    #[test]
    fn identity_elimination_under_i() {
        let r = rewrite_instances(&t("(comp (id 1) s)"), Universe::I, Mode::Both);
        assert!(r.iter().any(|s| s.result == t("s")));
        for s in &r {
            assert_eq!(s.result.arity(), t("s").arity());
        }
    }

    #[test]
    fn replay_accepts_reversed_paths() {
        let start = t("(comp s (comp s z))");
        let fwd = rewrite_instances(&start, Universe::C, Mode::Oriented);
        let rules = Universe::C.rules(RuleOptions::default());
        assert_eq!(replay(&start, &fwd, &rules).unwrap(), fwd[0].result);
        let back = reverse_steps(&start, &fwd);
        assert_eq!(replay(&fwd[0].result, &back, &rules).unwrap(), start);
        let bogus = Step {
            result: t("(comp z s)"),
            ..fwd[0].clone()
        };
        assert!(replay(&start, &[bogus], &rules).is_err());
    }
}
