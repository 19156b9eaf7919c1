//! Algorithmic universes: quotients of descriptions by named relation sets.

mod closure;
mod equiv;
mod normalize;
mod rewrite;
pub mod rules;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use closure::{closure, closure_with, Closure};
pub use equiv::{equiv, Caps, EquivConfig, EquivVerdict, NotEqualReason};
pub use normalize::{
    normalize, normalize_best_effort, normalize_traced, NormalizeError, Traced,
};
pub use rewrite::{replay, rewrite_at, rewrite_instances, rewrites, Mode, ReplayError, Step};
pub use rules::{Dir, Orientation, RuleId, RuleOptions, RuleSchema};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Universe {
    Desc,
    C,
    I,
    Cat,
    CatX,
    CatN,
    CatXN,
    Func,
}

/// Covering edges of the universe lattice, finer universe first.
const COVERS: [(Universe, Universe); 9] = [
    (Universe::Desc, Universe::C),
    (Universe::Desc, Universe::I),
    (Universe::C, Universe::Cat),
    (Universe::I, Universe::Cat),
    (Universe::Cat, Universe::CatX),
    (Universe::Cat, Universe::CatN),
    (Universe::CatX, Universe::CatXN),
    (Universe::CatN, Universe::CatXN),
    (Universe::CatXN, Universe::Func),
];

impl Universe {
    pub const ALL: [Universe; 8] = [
        Universe::Desc,
        Universe::C,
        Universe::I,
        Universe::Cat,
        Universe::CatX,
        Universe::CatN,
        Universe::CatXN,
        Universe::Func,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Universe::Desc => "Desc",
            Universe::C => "C",
            Universe::I => "I",
            Universe::Cat => "Cat",
            Universe::CatX => "CatX",
            Universe::CatN => "CatN",
            Universe::CatXN => "CatXN",
            Universe::Func => "Func",
        }
    }

    /// Relation schemas generating the universe. `Desc` has none and `Func`
    /// is decided semantically, so it has none either.
    pub fn rules(self, opts: RuleOptions) -> Vec<RuleId> {
        use RuleId::*;
        let mut out = match self {
            Universe::Desc | Universe::Func => vec![],
            Universe::C => vec![AssocComp],
            Universe::I => vec![IdRight, IdLeft],
            Universe::Cat => vec![AssocComp, IdRight, IdLeft],
            Universe::CatX => {
                let mut v = Universe::Cat.rules(opts);
                v.extend([AssocPair, Distrib, AlmostComm, TwistInvolution, Hexagon]);
                v
            }
            Universe::CatN => {
                let mut v = Universe::Cat.rules(opts);
                v.extend([NnoLeft, NnoRight, NnoIdentity, NnoComposition]);
                v
            }
            Universe::CatXN => {
                let mut v = Universe::CatX.rules(opts);
                v.extend(Universe::CatN.rules(opts));
                v.push(NnoBracket);
                v
            }
        };
        out.sort();
        out.dedup();
        out.retain(|r| opts.parametric_nno || !r.schema().gated);
        out
    }

    /// Covering pairs `(finer, coarser)` of the lattice.
    pub fn covers() -> &'static [(Universe, Universe)] {
        &COVERS
    }

    /// `self ⊑ other`: every identification made by `self` is made by
    /// `other`.
    pub fn leq(self, other: Universe) -> bool {
        if self == other {
            return true;
        }
        COVERS
            .iter()
            .filter(|(lo, _)| *lo == self)
            .any(|(_, hi)| hi.leq(other))
    }

    /// Universes whose equivalence is decided by a canonical form.
    pub fn has_canonical_form(self) -> bool {
        matches!(self, Universe::C | Universe::I | Universe::Cat)
    }
}

/// Schemas of `u` with default options.
pub fn rules_of(u: Universe) -> Vec<&'static RuleSchema> {
    u.rules(RuleOptions::default())
        .into_iter()
        .map(RuleId::schema)
        .collect()
}

impl fmt::Display for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown universe `{0}` (expected one of Desc, C, I, Cat, CatX, CatN, CatXN, Func)")]
pub struct UnknownUniverse(pub String);

impl FromStr for Universe {
    type Err = UnknownUniverse;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Universe::ALL
            .into_iter()
            .find(|u| u.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| UnknownUniverse(s.to_string()))
    }
}
