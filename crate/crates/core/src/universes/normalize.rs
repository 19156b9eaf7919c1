//! Canonical forms for `C`, `I` and `Cat`, and a best-effort form for
//! `CatX`.
//!
//! The canonical forms are computed twice: directly by [`normalize`], and
//! step by step by [`normalize_traced`], which records a rewrite for every
//! change so that equalities come with replayable witnesses.

use thiserror::Error;

use super::rewrite::Step;
use super::rules::{apply, Dir, RuleId};
use super::Universe;
use crate::term::{as_identity, mk_identity, Node, Term, TermPath};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("universe {0} has no normalizer")]
pub struct NormalizeError(pub Universe);

const MAX_STEPS: usize = 100_000;
const MAX_SIZE: usize = 20_000;

/// Canonical form of `t` in `C`, `I` or `Cat`.
///
/// `C` left-associates every composition chain, `I` removes identity
/// factors, `Cat` does both. `I` and `Cat` also rewrite every bracket
/// spelling of an identity to [`mk_identity`].
pub fn normalize(t: &Term, u: Universe) -> Result<Term, NormalizeError> {
    let (assoc, ids) = match u {
        Universe::C => (true, false),
        Universe::I => (false, true),
        Universe::Cat => (true, true),
        other => return Err(NormalizeError(other)),
    };
    Ok(canonical(t, assoc, ids))
}

fn canonical(t: &Term, assoc: bool, ids: bool) -> Term {
    let out = match t.node() {
        Node::Zero | Node::Succ | Node::Proj { .. } => t.clone(),
        Node::Comp(g, f) => {
            let g = canonical(g, assoc, ids);
            let f = canonical(f, assoc, ids);
            if !assoc {
                if ids && as_identity(&f).is_some() {
                    g
                } else if ids && as_identity(&g).is_some() {
                    f
                } else {
                    Term::comp(g, f).expect("typed")
                }
            } else {
                let mut chain = Vec::new();
                flatten(&g, &mut chain);
                flatten(&f, &mut chain);
                if ids {
                    chain.retain(|c| as_identity(c).is_none());
                }
                let mut it = chain.into_iter();
                match it.next() {
                    None => mk_identity(t.arity().dom).expect("positive width"),
                    Some(first) => it.fold(first, |acc, c| Term::comp(acc, c).expect("typed")),
                }
            }
        }
        Node::Rec(a, b) => Term::rec(canonical(a, assoc, ids), canonical(b, assoc, ids)).expect("typed"),
        Node::Pair(a, b) => Term::pair(canonical(a, assoc, ids), canonical(b, assoc, ids)).expect("typed"),
    };
    if ids {
        canonical_identity(out)
    } else {
        out
    }
}

fn flatten(t: &Term, out: &mut Vec<Term>) {
    match t.node() {
        Node::Comp(g, f) => {
            flatten(g, out);
            flatten(f, out);
        }
        _ => out.push(t.clone()),
    }
}

fn canonical_identity(t: Term) -> Term {
    match as_identity(&t) {
        Some(n) => mk_identity(n).expect("positive width"),
        None => t,
    }
}

/// Result of a traced normalization.
#[derive(Debug, Clone)]
pub struct Traced {
    pub term: Term,
    pub steps: Vec<Step>,
    /// False when the step or size cap stopped the strategy early.
    pub complete: bool,
}

/// Normalizes by single rewrites, recording each one.
///
/// For `C`, `I` and `Cat` the result equals [`normalize`]. For `CatX` it is
/// the best-effort form of [`normalize_best_effort`].
pub fn normalize_traced(t: &Term, u: Universe) -> Result<Traced, NormalizeError> {
    let strategy = match u {
        Universe::C => Strategy { assoc: true, ids: false, products: false },
        Universe::I => Strategy { assoc: false, ids: true, products: false },
        Universe::Cat => Strategy { assoc: true, ids: true, products: false },
        Universe::CatX => Strategy { assoc: true, ids: true, products: true },
        other => return Err(NormalizeError(other)),
    };
    let mut tr = Tracer {
        term: t.clone(),
        steps: Vec::new(),
        stopped: false,
        strategy,
    };
    tr.run(&mut Vec::new());
    Ok(Traced {
        term: tr.term,
        steps: tr.steps,
        complete: !tr.stopped,
    })
}

/// Oriented `CatX` strategy: left-associate compositions and brackets,
/// remove identity factors, distribute compositions over brackets, cancel
/// twist pairs, remove twists in front of swapped brackets and turn
/// hexagon right sides into left sides. Not complete for `CatX` equality.
pub fn normalize_best_effort(t: &Term) -> Term {
    normalize_traced(t, Universe::CatX).expect("CatX is supported").term
}

#[derive(Clone, Copy)]
struct Strategy {
    assoc: bool,
    ids: bool,
    products: bool,
}

struct Tracer {
    term: Term,
    steps: Vec<Step>,
    stopped: bool,
    strategy: Strategy,
}

impl Tracer {
    fn sub(&self, path: &[u8]) -> Term {
        self.term
            .subterm_at(&TermPath(path.to_vec()))
            .expect("path stays valid")
            .clone()
    }

    fn fire(&mut self, path: &[u8], rule: RuleId, dir: Dir) -> bool {
        if self.steps.len() >= MAX_STEPS || self.term.size() > MAX_SIZE {
            self.stopped = true;
            return false;
        }
        let sub = self.sub(path);
        let Some(r) = apply(rule, &sub, dir).into_iter().next() else {
            return false;
        };
        let path = TermPath(path.to_vec());
        self.term = self.term.replace_at(&path, r).expect("rules preserve arity");
        self.steps.push(Step {
            rule,
            path,
            dir,
            result: self.term.clone(),
        });
        true
    }

    fn run(&mut self, path: &mut Vec<u8>) {
        loop {
            if self.stopped {
                return;
            }
            if self.strategy.products && self.fire(path, RuleId::Hexagon, Dir::Backward) {
                continue;
            }
            if !self.sub(path).is_leaf() {
                for k in 0..2 {
                    path.push(k);
                    self.run(path);
                    path.pop();
                }
            }
            if self.stopped || !self.root_step(path) {
                return;
            }
        }
    }

    fn root_step(&mut self, path: &mut Vec<u8>) -> bool {
        let s = self.strategy;
        let t = self.sub(path);
        match t.node() {
            Node::Comp(g, f) => {
                if s.ids && as_identity(f).is_some() {
                    return self.fire(path, RuleId::IdRight, Dir::Forward);
                }
                if s.ids && as_identity(g).is_some() {
                    return self.fire(path, RuleId::IdLeft, Dir::Forward);
                }
                if s.assoc && matches!(f.node(), Node::Comp(..)) {
                    return self.fire(path, RuleId::AssocComp, Dir::Forward);
                }
                if s.products {
                    if self.fire(path, RuleId::TwistInvolution, Dir::Forward)
                        || self.fire(path, RuleId::AlmostComm, Dir::Backward)
                    {
                        return true;
                    }
                    if let Node::Comp(_, m) = g.node() {
                        if let Some((rule, dir)) = hidden_redex(m, f) {
                            self.fire(path, RuleId::AssocComp, Dir::Backward);
                            path.push(1);
                            let fired = self.fire(path, rule, dir);
                            path.pop();
                            return fired;
                        }
                    }
                    if matches!(g.node(), Node::Pair(..)) {
                        return self.fire(path, RuleId::Distrib, Dir::Forward);
                    }
                }
                false
            }
            Node::Pair(_, r) => {
                if s.products && matches!(r.node(), Node::Pair(..)) {
                    return self.fire(path, RuleId::AssocPair, Dir::Backward);
                }
                if s.ids && as_identity(&t).is_some() {
                    let n = as_identity(&t).expect("checked");
                    if !s.products && t != mk_identity(n).expect("positive width") {
                        // id_n ∘ t, then drop the outer identity spelled as t
                        self.fire(path, RuleId::IdRight, Dir::Backward);
                        return self.fire(path, RuleId::IdLeft, Dir::Forward);
                    }
                }
                false
            }
            _ => false,
        }
    }
}

/// Rule and direction that fire on `m ∘ f` when it sits at the end of a
/// left chain `(h ∘ m) ∘ f`; `None` if there is none.
fn hidden_redex(m: &Term, f: &Term) -> Option<(RuleId, Dir)> {
    let probe = Term::comp(m.clone(), f.clone()).ok()?;
    [(RuleId::TwistInvolution, Dir::Forward), (RuleId::AlmostComm, Dir::Backward)]
        .into_iter()
        .find(|(r, d)| !apply(*r, &probe, *d).is_empty())
}
