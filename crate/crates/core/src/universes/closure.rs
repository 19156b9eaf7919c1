use std::collections::{HashMap, VecDeque};

use super::rewrite::{rewrites, Mode, Step};
use super::rules::{Dir, RuleId, RuleOptions};
use super::Universe;
use crate::term::{Term, TermPath};

/// Terms reachable from a start term by rewrites in either direction.
#[derive(Debug, Clone)]
pub struct Closure {
    terms: Vec<Term>,
    index: HashMap<Term, usize>,
    parent: Vec<Option<(usize, RuleId, TermPath, Dir)>>,
    /// True when the search ran out of terms before hitting the count cap.
    pub complete: bool,
}

impl Closure {
    /// Members in discovery order, start term first.
    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains(&self, t: &Term) -> bool {
        self.index.contains_key(t)
    }

    /// Steps leading from the start term to `t`.
    pub fn path_to(&self, t: &Term) -> Option<Vec<Step>> {
        let mut k = *self.index.get(t)?;
        let mut out = Vec::new();
        while let Some((p, rule, path, dir)) = &self.parent[k] {
            out.push(Step {
                rule: *rule,
                path: path.clone(),
                dir: *dir,
                result: self.terms[k].clone(),
            });
            k = *p;
        }
        out.reverse();
        Some(out)
    }
}

/// Breadth-first closure of `t` under the rules of `u`, default options.
pub fn closure(t: &Term, u: Universe, size_cap: usize, count_cap: usize) -> Closure {
    closure_with(t, &u.rules(RuleOptions::default()), size_cap, count_cap)
}

/// Breadth-first closure under an explicit rule list. Rewrites larger than
/// `size_cap` are dropped; the search stops once `count_cap` terms are
/// known and more are waiting.
pub fn closure_with(t: &Term, rules: &[RuleId], size_cap: usize, count_cap: usize) -> Closure {
    let mut c = Closure {
        terms: vec![t.clone()],
        index: HashMap::from([(t.clone(), 0)]),
        parent: vec![None],
        complete: true,
    };
    let mut queue = VecDeque::from([0usize]);
    while let Some(k) = queue.pop_front() {
        let cur = c.terms[k].clone();
        for step in rewrites(&cur, rules, Mode::Both) {
            if step.result.size() > size_cap || c.index.contains_key(&step.result) {
                continue;
            }
            if c.terms.len() >= count_cap {
                c.complete = false;
                return c;
            }
            let id = c.terms.len();
            c.index.insert(step.result.clone(), id);
            c.terms.push(step.result);
            c.parent.push(Some((k, step.rule, step.path, step.dir)));
            queue.push_back(id);
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;
    use crate::universes::rewrite::replay;

    fn t(s: &str) -> Term {
        parse(s).unwrap()
    }

    #[test]
    fn identity_insertion_is_reachable() {
        let c = closure(&t("z"), Universe::Cat, 6, 100);
        assert!(c.contains(&t("(comp z (pi 1 1))")));
        let path = c.path_to(&t("(comp z (pi 1 1))")).unwrap();
        let rules = Universe::Cat.rules(RuleOptions::default());
        assert_eq!(replay(&t("z"), &path, &rules).unwrap(), t("(comp z (pi 1 1))"));
    }

    #[test]
    fn desc_closure_is_a_singleton() {
        let c = closure(&t("s"), Universe::Desc, 10, 10);
        assert_eq!(c.terms(), &[t("s")]);
        assert!(c.complete);
    }

    #[test]
    fn three_chain_has_two_shapes() {
        let c = closure(&t("(comp s (comp s s))"), Universe::C, 7, 100);
        assert_eq!(c.len(), 2);
        assert!(c.complete);
    }

    #[test]
    fn count_cap_truncates() {
        let c = closure(&t("(comp s (comp s (comp s s)))"), Universe::Cat, 12, 3);
        assert!(!c.complete);
        assert_eq!(c.len(), 3);
    }
}
