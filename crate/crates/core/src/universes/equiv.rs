use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::closure::closure_with;
use super::normalize::{normalize, normalize_traced};
use super::rewrite::{reverse_steps, Step};
use super::rules::{RuleId, RuleOptions};
use super::Universe;
use crate::error::ArityMismatch;
use crate::semantics::{fingerprint, grid_points, Budget, Tuple};
use crate::term::Term;

/// Bounds on closure searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Largest intermediate term kept.
    pub size: usize,
    /// Most terms explored per closure.
    pub count: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { size: 12, count: 5000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EquivConfig {
    pub caps: Caps,
    /// Fingerprint grid bound.
    pub grid: u64,
    pub budget: Budget,
    pub rules: RuleOptions,
}

impl Default for EquivConfig {
    fn default() -> Self {
        EquivConfig {
            caps: Caps::default(),
            grid: 4,
            budget: Budget::default(),
            rules: RuleOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NotEqualReason {
    /// `Desc` identifies only identical terms.
    StructurallyDistinct,
    /// Canonical forms of a decidable universe differ.
    CanonicalFormsDiffer { left: Term, right: Term },
    /// The terms compute different values on `input`.
    FingerprintMismatch {
        input: Tuple,
        left: Tuple,
        right: Tuple,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquivVerdict {
    /// `witness` rewrites the first term into the second. `approximate`
    /// marks the fingerprint verdict of `Func`, which has no witness.
    Equal { witness: Vec<Step>, approximate: bool },
    NotEqual { reason: NotEqualReason },
    Unknown { reason: String },
}

impl EquivVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            EquivVerdict::Equal { .. } => "equal",
            EquivVerdict::NotEqual { .. } => "notequal",
            EquivVerdict::Unknown { .. } => "unknown",
        }
    }

    pub fn is_equal(&self) -> bool {
        matches!(self, EquivVerdict::Equal { .. })
    }

    pub fn to_json(&self, u: Universe, caps: Caps) -> Value {
        let mut v = json!({
            "verdict": self.name(),
            "witness": [],
            "universe": u.name(),
            "caps": caps,
        });
        match self {
            EquivVerdict::Equal { witness, approximate } => {
                v["witness"] = serde_json::to_value(witness).expect("steps serialize");
                v["approximate"] = json!(approximate);
            }
            EquivVerdict::NotEqual { reason } => {
                v["reason"] = match reason {
                    NotEqualReason::StructurallyDistinct => json!({"kind": "structural"}),
                    NotEqualReason::CanonicalFormsDiffer { left, right } => json!({
                        "kind": "canonical-forms",
                        "left": left.to_string(),
                        "right": right.to_string(),
                    }),
                    NotEqualReason::FingerprintMismatch { input, left, right } => json!({
                        "kind": "fingerprint",
                        "input": input,
                        "left": left,
                        "right": right,
                    }),
                };
            }
            EquivVerdict::Unknown { reason } => {
                v["reason"] = json!(reason);
            }
        }
        v
    }
}

fn equal(witness: Vec<Step>) -> EquivVerdict {
    EquivVerdict::Equal {
        witness,
        approximate: false,
    }
}

/// Decides or bounds equivalence of two descriptions in `u`.
///
/// `Desc` compares structure; `C`, `I` and `Cat` compare canonical forms and
/// always decide. The other syntactic universes first look for a grid point
/// where the two differ, then for a rewrite path in the universes they
/// cover and in their own bounded closures, and answer `Unknown` if neither
/// settles the question. `Func` compares fingerprints and marks equality as
/// approximate; when evaluation runs out of budget it falls back on a
/// rewrite path.
pub fn equiv(t1: &Term, t2: &Term, u: Universe, cfg: &EquivConfig) -> Result<EquivVerdict, ArityMismatch> {
    if t1.arity() != t2.arity() {
        return Err(ArityMismatch {
            left: t1.arity(),
            right: t2.arity(),
        });
    }
    let verdict = match u {
        Universe::Desc => {
            if t1 == t2 {
                equal(Vec::new())
            } else {
                EquivVerdict::NotEqual {
                    reason: NotEqualReason::StructurallyDistinct,
                }
            }
        }
        Universe::C | Universe::I | Universe::Cat => {
            let n1 = normalize(t1, u).expect("decidable universe");
            let n2 = normalize(t2, u).expect("decidable universe");
            if n1 == n2 {
                equal(traced_witness(t1, t2, u).expect("traced forms agree with canonical forms"))
            } else {
                EquivVerdict::NotEqual {
                    reason: NotEqualReason::CanonicalFormsDiffer { left: n1, right: n2 },
                }
            }
        }
        Universe::CatX | Universe::CatN | Universe::CatXN => {
            if let Some(reason) = fingerprint_mismatch(t1, t2, cfg) {
                return Ok(EquivVerdict::NotEqual { reason });
            }
            match syntactic_witness(t1, t2, u, cfg) {
                (Some(w), _) => equal(w),
                (None, complete) => EquivVerdict::Unknown {
                    reason: if complete {
                        "closures within the size cap are disjoint and fingerprints agree".into()
                    } else {
                        "closure count cap reached and fingerprints agree".into()
                    },
                },
            }
        }
        Universe::Func => {
            let f1 = fingerprint(t1, cfg.grid, cfg.budget);
            let f2 = fingerprint(t2, cfg.grid, cfg.budget);
            if let Some(reason) = fingerprint_mismatch(t1, t2, cfg) {
                EquivVerdict::NotEqual { reason }
            } else if f1.is_partial() || f2.is_partial() {
                // a rewrite proof settles what evaluation could not
                match syntactic_witness(t1, t2, Universe::CatXN, cfg) {
                    (Some(w), _) => equal(w),
                    (None, _) => EquivVerdict::Unknown {
                        reason: "evaluation budget exceeded on part of the grid".into(),
                    },
                }
            } else {
                EquivVerdict::Equal {
                    witness: Vec::new(),
                    approximate: true,
                }
            }
        }
    };
    Ok(verdict)
}

/// A rewrite path from `t1` to `t2` in a syntactic universe, trying the
/// universes it covers before its own bounded search, so that a coarser
/// universe never misses an equation a finer one finds. The flag is false
/// when a closure search was cut off by the count cap.
fn syntactic_witness(t1: &Term, t2: &Term, u: Universe, cfg: &EquivConfig) -> (Option<Vec<Step>>, bool) {
    match u {
        Universe::Desc => ((t1 == t2).then(Vec::new), true),
        Universe::C | Universe::I | Universe::Cat => (traced_witness(t1, t2, u), true),
        Universe::CatX | Universe::CatN | Universe::CatXN => {
            let mut complete = true;
            for &(finer, coarser) in Universe::covers() {
                if coarser == u {
                    match syntactic_witness(t1, t2, finer, cfg) {
                        (Some(w), _) => return (Some(w), true),
                        (None, c) => complete &= c,
                    }
                }
            }
            let (found, c) = meet(t1, t2, &u.rules(cfg.rules), cfg.caps);
            (found, complete && c)
        }
        Universe::Func => (None, false),
    }
}

/// Witness through the traced normal forms of `u`, if they coincide.
fn traced_witness(t1: &Term, t2: &Term, u: Universe) -> Option<Vec<Step>> {
    let a = normalize_traced(t1, u).ok()?;
    let b = normalize_traced(t2, u).ok()?;
    if a.term != b.term {
        return None;
    }
    let mut steps = a.steps;
    steps.extend(reverse_steps(t2, &b.steps));
    Some(steps)
}

/// Searches for a common member of both closures. Also reports whether both
/// closures were exhausted.
fn meet(t1: &Term, t2: &Term, rules: &[RuleId], caps: Caps) -> (Option<Vec<Step>>, bool) {
    let c1 = closure_with(t1, rules, caps.size, caps.count);
    if let Some(p) = c1.path_to(t2) {
        return (Some(p), true);
    }
    let c2 = closure_with(t2, rules, caps.size, caps.count);
    let complete = c1.complete && c2.complete;
    for m in c2.terms() {
        if let Some(mut p) = c1.path_to(m) {
            let back = c2.path_to(m).expect("member");
            p.extend(reverse_steps(t2, &back));
            return (Some(p), complete);
        }
    }
    (None, complete)
}

/// First grid point where both terms evaluate and disagree.
fn fingerprint_mismatch(t1: &Term, t2: &Term, cfg: &EquivConfig) -> Option<NotEqualReason> {
    let f1 = fingerprint(t1, cfg.grid, cfg.budget);
    let f2 = fingerprint(t2, cfg.grid, cfg.budget);
    let points = grid_points(t1.arity().dom, cfg.grid);
    f1.table
        .iter()
        .zip(&f2.table)
        .zip(points)
        .find_map(|((a, b), x)| match (a, b) {
            (Some(a), Some(b)) if a != b => Some(NotEqualReason::FingerprintMismatch {
                input: x,
                left: a.clone(),
                right: b.clone(),
            }),
            _ => None,
        })
}
