//! Relation schemas between descriptions.
//!
//! Each schema is a pair of term shapes over metavariables. Both sides are
//! produced by one builder per schema; the root-level matchers in
//! [`apply`] recover the metavariables from either side and call the same
//! builder, so matching and instance generation cannot drift apart.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::TermError;
use crate::gen::{random_term, GenOptions};
use crate::term::{
    as_identity, as_twist, mk_block_proj, mk_identity, mk_multi_proj, mk_product, mk_twist, Arity,
    Node, ProjSpec, Term,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleId {
    AssocComp,
    IdRight,
    IdLeft,
    AssocPair,
    Distrib,
    AlmostComm,
    TwistInvolution,
    Hexagon,
    NnoLeft,
    NnoRight,
    NnoIdentity,
    NnoComposition,
    NnoBracket,
}

impl RuleId {
    pub const ALL: [RuleId; 13] = [
        RuleId::AssocComp,
        RuleId::IdRight,
        RuleId::IdLeft,
        RuleId::AssocPair,
        RuleId::Distrib,
        RuleId::AlmostComm,
        RuleId::TwistInvolution,
        RuleId::Hexagon,
        RuleId::NnoLeft,
        RuleId::NnoRight,
        RuleId::NnoIdentity,
        RuleId::NnoComposition,
        RuleId::NnoBracket,
    ];

    pub fn schema(self) -> &'static RuleSchema {
        &SCHEMAS[self as usize]
    }

    pub fn name(self) -> &'static str {
        self.schema().name
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Direction of use: `Forward` rewrites the left side into the right side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dir {
    Forward,
    Backward,
}

impl Dir {
    pub fn flip(self) -> Dir {
        match self {
            Dir::Forward => Dir::Backward,
            Dir::Backward => Dir::Forward,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// Used in this direction by the normalizers.
    Directed(Dir),
    /// Only used as an undirected relation (closure search).
    Bidirectional,
}

#[derive(Debug, Clone, Serialize)]
pub struct RuleSchema {
    pub id: RuleId,
    pub name: &'static str,
    pub lhs: &'static str,
    pub rhs: &'static str,
    pub orientation: Orientation,
    /// Whether the right-to-left direction can be generated from the right
    /// side alone. `false` when the left side has a metavariable that does
    /// not occur on the right.
    pub backward_generative: bool,
    /// Off unless [`RuleOptions::parametric_nno`] is set.
    pub gated: bool,
}

const SCHEMAS: [RuleSchema; 13] = [
    RuleSchema {
        id: RuleId::AssocComp,
        name: "assoc-comp",
        lhs: "h ∘ (g ∘ f)",
        rhs: "(h ∘ g) ∘ f",
        orientation: Orientation::Directed(Dir::Forward),
        backward_generative: true,
        gated: false,
    },
    RuleSchema {
        id: RuleId::IdRight,
        name: "id-right",
        lhs: "f ∘ id_a",
        rhs: "f",
        orientation: Orientation::Directed(Dir::Forward),
        backward_generative: true,
        gated: false,
    },
    RuleSchema {
        id: RuleId::IdLeft,
        name: "id-left",
        lhs: "id_b ∘ f",
        rhs: "f",
        orientation: Orientation::Directed(Dir::Forward),
        backward_generative: true,
        gated: false,
    },
    RuleSchema {
        id: RuleId::AssocPair,
        name: "assoc-pair",
        lhs: "⟨⟨f, g⟩, h⟩",
        rhs: "⟨f, ⟨g, h⟩⟩",
        orientation: Orientation::Directed(Dir::Backward),
        backward_generative: true,
        gated: false,
    },
    RuleSchema {
        id: RuleId::Distrib,
        name: "distrib",
        lhs: "⟨f1, f2⟩ ∘ g",
        rhs: "⟨f1 ∘ g, f2 ∘ g⟩",
        orientation: Orientation::Directed(Dir::Forward),
        backward_generative: true,
        gated: false,
    },
    RuleSchema {
        id: RuleId::AlmostComm,
        name: "almost-comm",
        lhs: "⟨f, g⟩",
        rhs: "tw ∘ ⟨g, f⟩",
        orientation: Orientation::Directed(Dir::Backward),
        backward_generative: true,
        gated: false,
    },
    RuleSchema {
        id: RuleId::TwistInvolution,
        name: "twist-involution",
        lhs: "tw_{b,a} ∘ tw_{a,b}",
        rhs: "id_{a+b}",
        orientation: Orientation::Directed(Dir::Forward),
        backward_generative: true,
        gated: false,
    },
    RuleSchema {
        id: RuleId::Hexagon,
        name: "hexagon",
        lhs: "((tw_{b,c} × id_a) ∘ (id_b × tw_{a,c})) ∘ (tw_{a,b} × id_c)",
        rhs: "((id_c × tw_{a,b}) ∘ (tw_{a,c} × id_b)) ∘ (id_a × tw_{b,c})",
        orientation: Orientation::Directed(Dir::Backward),
        backward_generative: true,
        gated: false,
    },
    RuleSchema {
        id: RuleId::NnoLeft,
        name: "nno-left",
        lhs: "(f ♯ g) ∘ (id_a × z)",
        rhs: "f ∘ π^{a+1}_a",
        orientation: Orientation::Bidirectional,
        backward_generative: false,
        gated: false,
    },
    RuleSchema {
        id: RuleId::NnoRight,
        name: "nno-right",
        lhs: "(f ♯ g) ∘ (id_a × s)",
        rhs: "g ∘ ⟨π^{a+1}_a, f ♯ g⟩",
        orientation: Orientation::Bidirectional,
        backward_generative: true,
        gated: false,
    },
    RuleSchema {
        id: RuleId::NnoIdentity,
        name: "nno-identity",
        lhs: "f ♯ π^{a+b}_b",
        rhs: "f ∘ π^{a+1}_a",
        orientation: Orientation::Bidirectional,
        backward_generative: true,
        gated: false,
    },
    RuleSchema {
        id: RuleId::NnoComposition,
        name: "nno-composition",
        lhs: "g1 ∘ ⟨π^{a+1}_a, f ♯ (g2 ∘ ⟨π^{a+b}_a, g1⟩)⟩",
        rhs: "(g1 ∘ ⟨id_a, f⟩) ♯ (g1 ∘ ⟨π^{a+c}_a, g2⟩)",
        orientation: Orientation::Bidirectional,
        backward_generative: true,
        gated: true,
    },
    RuleSchema {
        id: RuleId::NnoBracket,
        name: "nno-bracket",
        lhs: "⟨f1, f2⟩ ♯ (g1 ⊠ g2)",
        rhs: "⟨f1 ♯ g1, f2 ♯ g2⟩",
        orientation: Orientation::Bidirectional,
        backward_generative: true,
        gated: true,
    },
];

/// Switches for schemas whose reading is not pinned down.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleOptions {
    /// Enables `nno-composition` and `nno-bracket`, read with the parameter
    /// threading composition `g ∘_t h = g ∘ ⟨π_a, h⟩` and the parallel step
    /// `g1 ⊠ g2`.
    pub parametric_nno: bool,
}

type Pair2 = Result<(Term, Term), TermError>;

fn first_block(total: usize, a: usize) -> Result<Term, TermError> {
    mk_block_proj(total, 0, a)
}

pub fn assoc_comp(h: &Term, g: &Term, f: &Term) -> Pair2 {
    let lhs = Term::comp(h.clone(), Term::comp(g.clone(), f.clone())?)?;
    let rhs = Term::comp(Term::comp(h.clone(), g.clone())?, f.clone())?;
    Ok((lhs, rhs))
}

pub fn id_right(f: &Term) -> Pair2 {
    Ok((Term::comp(f.clone(), mk_identity(f.arity().dom)?)?, f.clone()))
}

pub fn id_left(f: &Term) -> Pair2 {
    Ok((Term::comp(mk_identity(f.arity().cod)?, f.clone())?, f.clone()))
}

pub fn assoc_pair(f: &Term, g: &Term, h: &Term) -> Pair2 {
    let lhs = Term::pair(Term::pair(f.clone(), g.clone())?, h.clone())?;
    let rhs = Term::pair(f.clone(), Term::pair(g.clone(), h.clone())?)?;
    Ok((lhs, rhs))
}

pub fn distrib(f1: &Term, f2: &Term, g: &Term) -> Pair2 {
    let lhs = Term::comp(Term::pair(f1.clone(), f2.clone())?, g.clone())?;
    let rhs = Term::pair(
        Term::comp(f1.clone(), g.clone())?,
        Term::comp(f2.clone(), g.clone())?,
    )?;
    Ok((lhs, rhs))
}

pub fn almost_comm(f: &Term, g: &Term) -> Pair2 {
    let tw = mk_twist(g.arity().cod, f.arity().cod)?;
    let rhs = Term::comp(tw, Term::pair(g.clone(), f.clone())?)?;
    Ok((Term::pair(f.clone(), g.clone())?, rhs))
}

pub fn twist_involution(a: usize, b: usize) -> Pair2 {
    let lhs = Term::comp(mk_twist(b, a)?, mk_twist(a, b)?)?;
    Ok((lhs, mk_identity(a + b)?))
}

pub fn hexagon(a: usize, b: usize, c: usize) -> Pair2 {
    let id = mk_identity;
    let tw = mk_twist;
    let x1 = mk_product(&tw(b, c)?, &id(a)?)?;
    let x2 = mk_product(&id(b)?, &tw(a, c)?)?;
    let x3 = mk_product(&tw(a, b)?, &id(c)?)?;
    let y1 = mk_product(&id(c)?, &tw(a, b)?)?;
    let y2 = mk_product(&tw(a, c)?, &id(b)?)?;
    let y3 = mk_product(&id(a)?, &tw(b, c)?)?;
    let lhs = Term::comp(Term::comp(x1, x2)?, x3)?;
    let rhs = Term::comp(Term::comp(y1, y2)?, y3)?;
    Ok((lhs, rhs))
}

fn counter_product(a: usize, counter: Term) -> Result<Term, TermError> {
    mk_product(&mk_identity(a)?, &counter)
}

pub fn nno_left(f: &Term, g: &Term) -> Pair2 {
    let a = f.arity().dom;
    let h = Term::rec(f.clone(), g.clone())?;
    let lhs = Term::comp(h, counter_product(a, Term::zero())?)?;
    let rhs = Term::comp(f.clone(), first_block(a + 1, a)?)?;
    Ok((lhs, rhs))
}

pub fn nno_right(f: &Term, g: &Term) -> Pair2 {
    let a = f.arity().dom;
    let h = Term::rec(f.clone(), g.clone())?;
    let lhs = Term::comp(h.clone(), counter_product(a, Term::succ())?)?;
    let rhs = Term::comp(g.clone(), Term::pair(first_block(a + 1, a)?, h)?)?;
    Ok((lhs, rhs))
}

pub fn nno_identity(f: &Term) -> Pair2 {
    let Arity { dom: a, cod: b } = f.arity();
    let lhs = Term::rec(f.clone(), mk_block_proj(a + b, a, b)?)?;
    let rhs = Term::comp(f.clone(), first_block(a + 1, a)?)?;
    Ok((lhs, rhs))
}

/// `f: (a,b)`, `g1: (a+b,c)`, `g2: (a+c,b)`.
pub fn nno_composition(g1: &Term, f: &Term, g2: &Term) -> Pair2 {
    let Arity { dom: a, cod: b } = f.arity();
    let c = g1.arity().cod;
    let step = Term::comp(g2.clone(), Term::pair(first_block(a + b, a)?, g1.clone())?)?;
    let lhs = Term::comp(
        g1.clone(),
        Term::pair(first_block(a + 1, a)?, Term::rec(f.clone(), step)?)?,
    )?;
    let base = Term::comp(g1.clone(), Term::pair(mk_identity(a)?, f.clone())?)?;
    let step = Term::comp(g1.clone(), Term::pair(first_block(a + c, a)?, g2.clone())?)?;
    Ok((lhs, Term::rec(base, step)?))
}

/// `g1 ⊠ g2 : ℕ^{a+b1+b2} → ℕ^{b1+b2}`, each step seeing the shared
/// parameters and its own accumulator.
pub fn parallel_step(a: usize, g1: &Term, g2: &Term) -> Result<Term, TermError> {
    let b1 = g1.arity().cod;
    let b2 = g2.arity().cod;
    let n = a + b1 + b2;
    let sel1 = ProjSpec::new(n, (1..=a).chain(a + 1..=a + b1).collect())?;
    let sel2 = ProjSpec::new(n, (1..=a).chain(a + b1 + 1..=n).collect())?;
    Term::pair(
        Term::comp(g1.clone(), mk_multi_proj(&sel1)?)?,
        Term::comp(g2.clone(), mk_multi_proj(&sel2)?)?,
    )
}

pub fn nno_bracket(f1: &Term, f2: &Term, g1: &Term, g2: &Term) -> Pair2 {
    let a = f1.arity().dom;
    let lhs = Term::rec(Term::pair(f1.clone(), f2.clone())?, parallel_step(a, g1, g2)?)?;
    let rhs = Term::pair(
        Term::rec(f1.clone(), g1.clone())?,
        Term::rec(f2.clone(), g2.clone())?,
    )?;
    Ok((lhs, rhs))
}

fn comp_parts(t: &Term) -> Option<(&Term, &Term)> {
    match t.node() {
        Node::Comp(g, f) => Some((g, f)),
        _ => None,
    }
}

fn pair_parts(t: &Term) -> Option<(&Term, &Term)> {
    match t.node() {
        Node::Pair(f, g) => Some((f, g)),
        _ => None,
    }
}

fn rec_parts(t: &Term) -> Option<(&Term, &Term)> {
    match t.node() {
        Node::Rec(f, g) => Some((f, g)),
        _ => None,
    }
}

/// Keeps the other side of an instance when the matched side rebuilds to
/// exactly `t`.
fn exact(t: &Term, built: Pair2, dir: Dir) -> Option<Term> {
    let (lhs, rhs) = built.ok()?;
    match dir {
        Dir::Forward => (&lhs == t).then_some(rhs),
        Dir::Backward => (&rhs == t).then_some(lhs),
    }
}

fn splits(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..n).map(move |a| (a, n - a))
}

/// All results of using `rule` at the root of `t` in direction `dir`.
pub fn apply(rule: RuleId, t: &Term, dir: Dir) -> Vec<Term> {
    let one = |x: Option<Term>| x.into_iter().collect::<Vec<_>>();
    use Dir::*;
    match (rule, dir) {
        (RuleId::AssocComp, Forward) => one((|| {
            let (h, inner) = comp_parts(t)?;
            let (g, f) = comp_parts(inner)?;
            Some(assoc_comp(h, g, f).ok()?.1)
        })()),
        (RuleId::AssocComp, Backward) => one((|| {
            let (outer, f) = comp_parts(t)?;
            let (h, g) = comp_parts(outer)?;
            Some(assoc_comp(h, g, f).ok()?.0)
        })()),
        (RuleId::IdRight, Forward) => one((|| {
            let (f, i) = comp_parts(t)?;
            as_identity(i)?;
            Some(f.clone())
        })()),
        (RuleId::IdRight, Backward) => one(id_right(t).ok().map(|p| p.0)),
        (RuleId::IdLeft, Forward) => one((|| {
            let (i, f) = comp_parts(t)?;
            as_identity(i)?;
            Some(f.clone())
        })()),
        (RuleId::IdLeft, Backward) => one(id_left(t).ok().map(|p| p.0)),
        (RuleId::AssocPair, Forward) => one((|| {
            let (fg, h) = pair_parts(t)?;
            let (f, g) = pair_parts(fg)?;
            Some(assoc_pair(f, g, h).ok()?.1)
        })()),
        (RuleId::AssocPair, Backward) => one((|| {
            let (f, gh) = pair_parts(t)?;
            let (g, h) = pair_parts(gh)?;
            Some(assoc_pair(f, g, h).ok()?.0)
        })()),
        (RuleId::Distrib, Forward) => one((|| {
            let (p, g) = comp_parts(t)?;
            let (f1, f2) = pair_parts(p)?;
            Some(distrib(f1, f2, g).ok()?.1)
        })()),
        (RuleId::Distrib, Backward) => one((|| {
            let (l, r) = pair_parts(t)?;
            let (f1, g) = comp_parts(l)?;
            let (f2, g2) = comp_parts(r)?;
            (g == g2).then_some(())?;
            Some(distrib(f1, f2, g).ok()?.0)
        })()),
        (RuleId::AlmostComm, Forward) => one((|| {
            let (f, g) = pair_parts(t)?;
            Some(almost_comm(f, g).ok()?.1)
        })()),
        (RuleId::AlmostComm, Backward) => one((|| {
            let (tw, p) = comp_parts(t)?;
            let (g, f) = pair_parts(p)?;
            (as_twist(tw)? == (g.arity().cod, f.arity().cod)).then_some(())?;
            Some(almost_comm(f, g).ok()?.0)
        })()),
        (RuleId::TwistInvolution, Forward) => one((|| {
            let (outer, inner) = comp_parts(t)?;
            let (a, b) = as_twist(inner)?;
            (as_twist(outer)? == (b, a)).then_some(())?;
            Some(twist_involution(a, b).ok()?.1)
        })()),
        (RuleId::TwistInvolution, Backward) => match as_identity(t) {
            Some(n) => splits(n)
                .filter_map(|(a, b)| twist_involution(a, b).ok().map(|p| p.0))
                .collect(),
            None => Vec::new(),
        },
        (RuleId::Hexagon, _) => {
            let ar = t.arity();
            let shaped = comp_parts(t)
                .and_then(|(l, r)| Some((comp_parts(l)?, pair_parts(r)?)))
                .is_some();
            if !shaped || ar.dom != ar.cod || ar.dom < 3 {
                return Vec::new();
            }
            let n = ar.dom;
            let mut out = Vec::new();
            for a in 1..n {
                for b in 1..n - a {
                    if let Some(r) = exact(t, hexagon(a, b, n - a - b), dir) {
                        out.push(r);
                    }
                }
            }
            out
        }
        (RuleId::NnoLeft, Forward) => one((|| {
            let (h, _) = comp_parts(t)?;
            let (f, g) = rec_parts(h)?;
            exact(t, nno_left(f, g), Forward)
        })()),
        (RuleId::NnoLeft, Backward) => Vec::new(),
        (RuleId::NnoRight, Forward) => one((|| {
            let (h, _) = comp_parts(t)?;
            let (f, g) = rec_parts(h)?;
            exact(t, nno_right(f, g), Forward)
        })()),
        (RuleId::NnoRight, Backward) => one((|| {
            let (_, p) = comp_parts(t)?;
            let (_, h) = pair_parts(p)?;
            let (f, g) = rec_parts(h)?;
            exact(t, nno_right(f, g), Backward)
        })()),
        (RuleId::NnoIdentity, Forward) => one((|| {
            let (f, _) = rec_parts(t)?;
            exact(t, nno_identity(f), Forward)
        })()),
        (RuleId::NnoIdentity, Backward) => one((|| {
            let (f, _) = comp_parts(t)?;
            exact(t, nno_identity(f), Backward)
        })()),
        (RuleId::NnoComposition, Forward) => one((|| {
            let (g1, p) = comp_parts(t)?;
            let (_, h) = pair_parts(p)?;
            let (f, step) = rec_parts(h)?;
            let (g2, _) = comp_parts(step)?;
            exact(t, nno_composition(g1, f, g2), Forward)
        })()),
        (RuleId::NnoComposition, Backward) => one((|| {
            let (base, step) = rec_parts(t)?;
            let (g1, p) = comp_parts(base)?;
            let (_, f) = pair_parts(p)?;
            let (_, q) = comp_parts(step)?;
            let (_, g2) = pair_parts(q)?;
            exact(t, nno_composition(g1, f, g2), Backward)
        })()),
        (RuleId::NnoBracket, Forward) => one((|| {
            let (base, step) = rec_parts(t)?;
            let (f1, f2) = pair_parts(base)?;
            let (l, r) = pair_parts(step)?;
            let (g1, _) = comp_parts(l)?;
            let (g2, _) = comp_parts(r)?;
            exact(t, nno_bracket(f1, f2, g1, g2), Forward)
        })()),
        (RuleId::NnoBracket, Backward) => one((|| {
            let (l, r) = pair_parts(t)?;
            let (f1, g1) = rec_parts(l)?;
            let (f2, g2) = rec_parts(r)?;
            exact(t, nno_bracket(f1, f2, g1, g2), Backward)
        })()),
    }
}

/// Whether the schema has term metavariables (as opposed to only widths).
pub fn has_term_variables(rule: RuleId) -> bool {
    !matches!(rule, RuleId::TwistInvolution | RuleId::Hexagon)
}

/// Every instance of a width-only schema with total width at most
/// `max_total`.
pub fn width_instances(rule: RuleId, max_total: usize) -> Vec<(Term, Term)> {
    let mut out = Vec::new();
    match rule {
        RuleId::TwistInvolution => {
            for n in 2..=max_total {
                for (a, b) in splits(n) {
                    out.push(twist_involution(a, b).expect("well typed"));
                }
            }
        }
        RuleId::Hexagon => {
            for n in 3..=max_total {
                for a in 1..n {
                    for b in 1..n - a {
                        out.push(hexagon(a, b, n - a - b).expect("well typed"));
                    }
                }
            }
        }
        _ => {}
    }
    out
}

/// A random instance `(lhs, rhs)` of a schema with term metavariables.
pub fn random_instance<R: Rng + ?Sized>(rule: RuleId, rng: &mut R, opts: &GenOptions) -> (Term, Term) {
    let w = opts.max_width.max(1);
    let width = |rng: &mut R| rng.gen_range(1..=w);
    let term = |rng: &mut R, dom: usize, cod: usize| random_term(rng, Arity::new(dom, cod), opts);
    let built = match rule {
        RuleId::AssocComp => {
            let (a, b, c, d) = (width(rng), width(rng), width(rng), width(rng));
            let f = term(rng, a, b);
            let g = term(rng, b, c);
            let h = term(rng, c, d);
            assoc_comp(&h, &g, &f)
        }
        RuleId::IdRight | RuleId::IdLeft => {
            let (a, b) = (width(rng), width(rng));
            let f = term(rng, a, b);
            if rule == RuleId::IdRight {
                id_right(&f)
            } else {
                id_left(&f)
            }
        }
        RuleId::AssocPair => {
            let (a, b, c, d) = (width(rng), width(rng), width(rng), width(rng));
            let f = term(rng, a, b);
            let g = term(rng, a, c);
            let h = term(rng, a, d);
            assoc_pair(&f, &g, &h)
        }
        RuleId::Distrib => {
            let (a, b, c, d) = (width(rng), width(rng), width(rng), width(rng));
            let g = term(rng, a, b);
            let f1 = term(rng, b, c);
            let f2 = term(rng, b, d);
            distrib(&f1, &f2, &g)
        }
        RuleId::AlmostComm => {
            let (a, b, c) = (width(rng), width(rng), width(rng));
            let f = term(rng, a, b);
            let g = term(rng, a, c);
            almost_comm(&f, &g)
        }
        RuleId::NnoLeft | RuleId::NnoRight => {
            let (a, b) = (width(rng), width(rng));
            let f = term(rng, a, b);
            let g = term(rng, a + b, b);
            if rule == RuleId::NnoLeft {
                nno_left(&f, &g)
            } else {
                nno_right(&f, &g)
            }
        }
        RuleId::NnoIdentity => {
            let (a, b) = (width(rng), width(rng));
            nno_identity(&term(rng, a, b))
        }
        RuleId::NnoComposition => {
            let (a, b, c) = (width(rng), width(rng), width(rng));
            let f = term(rng, a, b);
            let g1 = term(rng, a + b, c);
            let g2 = term(rng, a + c, b);
            nno_composition(&g1, &f, &g2)
        }
        RuleId::NnoBracket => {
            let (a, b1, b2) = (width(rng), width(rng), width(rng));
            let f1 = term(rng, a, b1);
            let f2 = term(rng, a, b2);
            let g1 = term(rng, a + b1, b1);
            let g2 = term(rng, a + b2, b2);
            nno_bracket(&f1, &f2, &g1, &g2)
        }
        RuleId::TwistInvolution | RuleId::Hexagon => {
            panic!("{rule} has no term metavariables; use width_instances")
        }
    };
    built.expect("instances are well typed by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn t(s: &str) -> Term {
        parse(s).unwrap()
    }

    #[test]
    fn schema_table_is_indexed_by_id() {
        for id in RuleId::ALL {
            assert_eq!(id.schema().id, id);
        }
    }

    #[test]
    fn assoc_comp_both_ways() {
        let right = t("(comp s (comp s z))");
        let left = t("(comp (comp s s) z)");
        assert_eq!(apply(RuleId::AssocComp, &right, Dir::Forward), vec![left.clone()]);
        assert_eq!(apply(RuleId::AssocComp, &left, Dir::Backward), vec![right]);
        assert!(apply(RuleId::AssocComp, &t("z"), Dir::Forward).is_empty());
    }

    #[test]
    fn identity_elimination_accepts_any_nesting() {
        assert_eq!(apply(RuleId::IdLeft, &t("(comp (id 1) s)"), Dir::Forward), vec![t("s")]);
        let f = t("(pair (pi 3 1) (pi 3 2))");
        let spelled = Term::comp(f.clone(), t("(pair (pair (pi 3 1) (pi 3 2)) (pi 3 3))")).unwrap();
        assert_eq!(apply(RuleId::IdRight, &spelled, Dir::Forward), vec![f]);
        assert_eq!(
            apply(RuleId::IdRight, &t("s"), Dir::Backward),
            vec![t("(comp s (pi 1 1))")]
        );
    }

    #[test]
    fn twist_rules() {
        let tt = t("(comp (tw 1 1) (tw 1 1))");
        assert_eq!(apply(RuleId::TwistInvolution, &tt, Dir::Forward), vec![t("(id 2)")]);
        let back = apply(RuleId::TwistInvolution, &t("(id 3)"), Dir::Backward);
        assert_eq!(back.len(), 2);
        let ac = apply(RuleId::AlmostComm, &t("(pair s z)"), Dir::Forward);
        assert_eq!(ac, vec![t("(comp (tw 1 1) (pair z s))")]);
        assert_eq!(apply(RuleId::AlmostComm, &ac[0], Dir::Backward), vec![t("(pair s z)")]);
    }

    #[test]
    fn hexagon_matches_exact_instances() {
        let (lhs, rhs) = hexagon(1, 1, 1).unwrap();
        assert_eq!(apply(RuleId::Hexagon, &lhs, Dir::Forward), vec![rhs.clone()]);
        assert_eq!(apply(RuleId::Hexagon, &rhs, Dir::Backward), vec![lhs]);
    }

    #[test]
    fn nno_rules_round_trip_through_matchers() {
        let f = t("(pi 1 1)");
        let g = t("(comp s (pi 2 2))");
        let (lhs, rhs) = nno_right(&f, &g).unwrap();
        assert_eq!(apply(RuleId::NnoRight, &lhs, Dir::Forward), vec![rhs.clone()]);
        assert_eq!(apply(RuleId::NnoRight, &rhs, Dir::Backward), vec![lhs]);
        let (lhs, rhs) = nno_left(&f, &g).unwrap();
        assert_eq!(apply(RuleId::NnoLeft, &lhs, Dir::Forward), vec![rhs.clone()]);
        assert!(apply(RuleId::NnoLeft, &rhs, Dir::Backward).is_empty());
        assert_eq!(
            apply(RuleId::NnoIdentity, &t("(rec (pi 1 1) (pi 2 2))"), Dir::Forward),
            vec![t("(comp (pi 1 1) (pi 2 1))")]
        );
        assert_eq!(
            apply(RuleId::NnoIdentity, &t("(comp (pi 1 1) (pi 2 1))"), Dir::Backward),
            vec![t("(rec (pi 1 1) (pi 2 2))")]
        );
    }

    #[test]
    fn random_instances_match_their_own_sides() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let opts = GenOptions {
            max_depth: 2,
            ..GenOptions::default()
        };
        for rule in RuleId::ALL.into_iter().filter(|r| has_term_variables(*r)) {
            for _ in 0..20 {
                let (lhs, rhs) = random_instance(rule, &mut rng, &opts);
                assert_eq!(lhs.arity(), rhs.arity(), "{rule}");
                assert!(apply(rule, &lhs, Dir::Forward).contains(&rhs), "{rule} forward on {lhs}");
                if rule.schema().backward_generative {
                    let back = apply(rule, &rhs, Dir::Backward);
                    // identity spellings may differ from the generated lhs
                    assert!(!back.is_empty(), "{rule} backward on {rhs}");
                }
            }
        }
    }
}
