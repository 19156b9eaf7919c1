//! Primitive recursive descriptions and the algorithmic universes between
//! descriptions and the functions they compute.
//!
//! * [`term`] and [`syntax`]: typed syntax trees and their s-expression form.
//! * [`semantics`]: arbitrary precision evaluation and fingerprints.
//! * [`universes`]: relation schemas, normal forms, closures and equivalence.
//! * [`galois`]: finite fragments, partitions and functionality preserving
//!   permutation groups.

pub mod error;
pub mod galois;
pub mod gen;
pub mod semantics;
pub mod syntax;
pub mod term;
pub mod universes;

pub use error::{ArityMismatch, BudgetKind, CapacityError, EvalError, ParseError, SyntaxError, TermError};
pub use semantics::{eval, fingerprint, semantically_equal_on, Budget, Fingerprint, Tuple};
pub use syntax::{parse, print};
pub use term::{
    as_identity, as_multi_proj, as_product, as_twist, mk_block_proj, mk_diagonal, mk_identity,
    mk_multi_proj, mk_product, mk_twist, Arity, Node, Op, ProjSpec, RawTerm, Term, TermPath,
};
pub use universes::{
    closure, equiv, normalize, normalize_best_effort, rewrite_instances, rules_of, Caps,
    EquivConfig, EquivVerdict, Universe,
};
