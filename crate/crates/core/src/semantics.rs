//! Evaluation of descriptions as functions on tuples of naturals, and finite
//! value tables ("fingerprints") used as a decidable stand-in for function
//! equality.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{ArityMismatch, BudgetKind, EvalError};
use crate::term::{Arity, Node, Term};

/// A tuple of arbitrary-precision naturals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tuple(pub Vec<BigUint>);

impl Tuple {
    pub fn from_u64s(xs: &[u64]) -> Self {
        Tuple(xs.iter().map(|&x| BigUint::from(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Tuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl FromStr for Tuple {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.split(',')
            .map(|x| {
                x.trim()
                    .parse::<BigUint>()
                    .map_err(|_| format!("`{}` is not a natural number", x.trim()))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Tuple)
    }
}

impl Serialize for Tuple {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for x in &self.0 {
            match x.to_u64() {
                Some(v) => seq.serialize_element(&v)?,
                None => seq.serialize_element(&x.to_string())?,
            }
        }
        seq.end()
    }
}

/// Resource limits for one evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_steps: u64,
    /// Bit length bound on every intermediate value.
    pub max_bits: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_steps: 1_000_000,
            max_bits: 4096,
        }
    }
}

struct Evaluator {
    budget: Budget,
    steps: u64,
}

impl Evaluator {
    fn tick(&mut self) -> Result<(), EvalError> {
        self.steps += 1;
        if self.steps > self.budget.max_steps {
            return Err(EvalError::BudgetExceeded {
                kind: BudgetKind::Steps,
            });
        }
        Ok(())
    }

    fn run(&mut self, t: &Term, x: &[BigUint]) -> Result<Vec<BigUint>, EvalError> {
        self.tick()?;
        match t.node() {
            Node::Zero => Ok(vec![BigUint::zero()]),
            Node::Succ => {
                let y = &x[0] + 1u32;
                if y.bits() > self.budget.max_bits {
                    return Err(EvalError::BudgetExceeded {
                        kind: BudgetKind::Magnitude,
                    });
                }
                Ok(vec![y])
            }
            Node::Proj { i, .. } => Ok(vec![x[i - 1].clone()]),
            Node::Comp(g, f) => {
                let mid = self.run(f, x)?;
                self.run(g, &mid)
            }
            Node::Pair(f, g) => {
                let mut out = self.run(f, x)?;
                out.extend(self.run(g, x)?);
                Ok(out)
            }
            Node::Rec(f, g) => {
                let (params, counter) = x.split_at(x.len() - 1);
                let n = counter[0].to_u64().ok_or(EvalError::BudgetExceeded {
                    kind: BudgetKind::Steps,
                })?;
                // h(x,0) = f(x); h(x,k+1) = g(x, h(x,k))
                let mut acc = self.run(f, params)?;
                let mut buf = params.to_vec();
                for _ in 0..n {
                    self.tick()?;
                    buf.truncate(params.len());
                    buf.extend(acc);
                    acc = self.run(g, &buf)?;
                }
                Ok(acc)
            }
        }
    }
}

/// Evaluates `t` on `x`.
pub fn eval(t: &Term, x: &Tuple, budget: Budget) -> Result<Tuple, EvalError> {
    let dom = t.arity().dom;
    if x.len() != dom {
        return Err(EvalError::ArityMismatch {
            expected: dom,
            got: x.len(),
        });
    }
    let mut ev = Evaluator { budget, steps: 0 };
    ev.run(t, &x.0).map(Tuple)
}

/// Every point of `{0..bound-1}^dim` in lexicographic order, leftmost
/// coordinate most significant.
pub fn grid_points(dim: usize, bound: u64) -> impl Iterator<Item = Tuple> {
    let total = (bound as u128).checked_pow(dim as u32).unwrap_or(0);
    (0..total).map(move |mut k| {
        let mut xs = vec![BigUint::zero(); dim];
        for slot in xs.iter_mut().rev() {
            *slot = BigUint::from((k % bound as u128) as u64);
            k /= bound as u128;
        }
        Tuple(xs)
    })
}

/// The value table of a description on a finite grid. Entries whose
/// evaluation ran out of budget are `None` and make the fingerprint partial.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Fingerprint {
    pub arity: Arity,
    pub grid: u64,
    pub table: Vec<Option<Tuple>>,
}

impl Fingerprint {
    pub fn is_partial(&self) -> bool {
        self.table.iter().any(Option::is_none)
    }

    /// Restriction of this table to the sub-grid `{0..bound-1}^dom`.
    pub fn restrict(&self, bound: u64) -> Option<Fingerprint> {
        if bound > self.grid {
            return None;
        }
        let table = grid_points(self.arity.dom, self.grid)
            .zip(&self.table)
            .filter(|(x, _)| x.0.iter().all(|v| v < &BigUint::from(bound)))
            .map(|(_, y)| y.clone())
            .collect();
        Some(Fingerprint {
            arity: self.arity,
            grid: bound,
            table,
        })
    }
}

impl Serialize for Fingerprint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            arity: [usize; 2],
            grid: u64,
            table: &'a [Option<Tuple>],
            partial: bool,
        }
        Repr {
            arity: [self.arity.dom, self.arity.cod],
            grid: self.grid,
            table: &self.table,
            partial: self.is_partial(),
        }
        .serialize(s)
    }
}

/// Evaluates `t` on every point of `{0..grid_bound-1}^dom`, with a fresh
/// budget per point.
pub fn fingerprint(t: &Term, grid_bound: u64, budget: Budget) -> Fingerprint {
    assert!(grid_bound >= 1, "grid bound must be positive");
    let table = grid_points(t.arity().dom, grid_bound)
        .map(|x| eval(t, &x, budget).ok())
        .collect();
    Fingerprint {
        arity: t.arity(),
        grid: grid_bound,
        table,
    }
}

/// Whether two descriptions agree on the whole grid with no budget cutoff.
pub fn semantically_equal_on(
    t1: &Term,
    t2: &Term,
    grid_bound: u64,
    budget: Budget,
) -> Result<bool, ArityMismatch> {
    if t1.arity() != t2.arity() {
        return Err(ArityMismatch {
            left: t1.arity(),
            right: t2.arity(),
        });
    }
    let a = fingerprint(t1, grid_bound, budget);
    if a.is_partial() {
        return Ok(false);
    }
    let b = fingerprint(t2, grid_bound, budget);
    Ok(!b.is_partial() && a == b)
}
