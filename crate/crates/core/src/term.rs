//! Typed syntax trees of primitive recursive descriptions.
//!
//! A [`Term`] is an immutable, reference-counted tree whose every node caches
//! its [`Arity`]. Terms can only be built through the checked constructors,
//! so a value of type `Term` is always well typed. [`RawTerm`] is the
//! untyped counterpart produced by the parser; [`arity_of`] and
//! [`RawTerm::check`] type it and report the offending subterm path.

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::TermError;

/// The type `ℕ^dom → ℕ^cod` of a description.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Arity {
    pub dom: usize,
    pub cod: usize,
}

impl Arity {
    pub const fn new(dom: usize, cod: usize) -> Self {
        Arity { dom, cod }
    }
}

impl fmt::Display for Arity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.dom, self.cod)
    }
}

/// Child-index address of a subterm. For `Comp` child 0 is the outer map
/// `g` and child 1 the inner map `f`; for `Rec` and `Pair` the children are
/// in written order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TermPath(pub Vec<u8>);

impl TermPath {
    pub fn root() -> Self {
        TermPath(Vec::new())
    }

    pub fn child(&self, idx: u8) -> Self {
        let mut v = self.0.clone();
        v.push(idx);
        TermPath(v)
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<u8>> for TermPath {
    fn from(v: Vec<u8>) -> Self {
        TermPath(v)
    }
}

impl fmt::Display for TermPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("]")
    }
}

/// The six node kinds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    Zero,
    Succ,
    Proj { n: usize, i: usize },
    /// `Comp(g, f)` is `g ∘ f`.
    Comp(Term, Term),
    /// `Rec(f, g)` is `f ♯ g`.
    Rec(Term, Term),
    /// `Pair(f, g)` is `⟨f, g⟩`.
    Pair(Term, Term),
}

/// Operation symbols of the description algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Op {
    Comp,
    Rec,
    Pair,
}

impl Op {
    pub const ALL: [Op; 3] = [Op::Comp, Op::Rec, Op::Pair];

    pub fn name(self) -> &'static str {
        match self {
            Op::Comp => "comp",
            Op::Rec => "rec",
            Op::Pair => "pair",
        }
    }
}

impl std::str::FromStr for Op {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "comp" | "c" => Ok(Op::Comp),
            "rec" | "r" => Ok(Op::Rec),
            "pair" | "bracket" | "b" => Ok(Op::Pair),
            other => Err(format!("unknown operation `{other}`")),
        }
    }
}

struct Inner {
    node: Node,
    arity: Arity,
    size: usize,
    depth: usize,
    hash: u64,
}

/// A well-typed primitive recursive description.
#[derive(Clone)]
pub struct Term(Arc<Inner>);

fn mix(tag: u8, parts: &[u64]) -> u64 {
    let mut h = DefaultHasher::new();
    tag.hash(&mut h);
    parts.hash(&mut h);
    h.finish()
}

impl Term {
    fn from_node(node: Node, arity: Arity) -> Term {
        let (size, depth, hash) = match &node {
            Node::Zero => (1, 1, mix(0, &[])),
            Node::Succ => (1, 1, mix(1, &[])),
            Node::Proj { n, i } => (1, 1, mix(2, &[*n as u64, *i as u64])),
            Node::Comp(a, b) | Node::Rec(a, b) | Node::Pair(a, b) => {
                let tag = match &node {
                    Node::Comp(..) => 3,
                    Node::Rec(..) => 4,
                    _ => 5,
                };
                (
                    1 + a.size() + b.size(),
                    1 + a.depth().max(b.depth()),
                    mix(tag, &[a.0.hash, b.0.hash]),
                )
            }
        };
        Term(Arc::new(Inner {
            node,
            arity,
            size,
            depth,
            hash,
        }))
    }

    pub fn zero() -> Term {
        Term::from_node(Node::Zero, Arity::new(1, 1))
    }

    pub fn succ() -> Term {
        Term::from_node(Node::Succ, Arity::new(1, 1))
    }

    pub fn proj(n: usize, i: usize) -> Result<Term, TermError> {
        if n == 0 || i == 0 || i > n {
            return Err(TermError::typing(
                TermPath::root(),
                format!("projection index {i} out of range 1..={n}"),
            ));
        }
        Ok(Term::from_node(Node::Proj { n, i }, Arity::new(n, 1)))
    }

    /// `g ∘ f`; requires `cod f = dom g`.
    pub fn comp(g: Term, f: Term) -> Result<Term, TermError> {
        if f.arity().cod != g.arity().dom {
            return Err(TermError::typing(
                TermPath::root(),
                format!(
                    "composition width mismatch: inner map has codomain {} but outer map has domain {}",
                    f.arity().cod,
                    g.arity().dom
                ),
            ));
        }
        let ar = Arity::new(f.arity().dom, g.arity().cod);
        Ok(Term::from_node(Node::Comp(g, f), ar))
    }

    /// `f ♯ g` for `f: (a,b)` and `g: (a+b,b)`, of arity `(a+1,b)`.
    pub fn rec(f: Term, g: Term) -> Result<Term, TermError> {
        let Arity { dom: a, cod: b } = f.arity();
        if g.arity() != Arity::new(a + b, b) {
            return Err(TermError::typing(
                TermPath::root(),
                format!(
                    "recursion step must have arity {} but has {}",
                    Arity::new(a + b, b),
                    g.arity()
                ),
            ));
        }
        Ok(Term::from_node(Node::Rec(f, g), Arity::new(a + 1, b)))
    }

    /// `⟨f, g⟩`; requires equal domains.
    pub fn pair(f: Term, g: Term) -> Result<Term, TermError> {
        if f.arity().dom != g.arity().dom {
            return Err(TermError::typing(
                TermPath::root(),
                format!(
                    "bracket domains differ: {} vs {}",
                    f.arity().dom,
                    g.arity().dom
                ),
            ));
        }
        let ar = Arity::new(f.arity().dom, f.arity().cod + g.arity().cod);
        Ok(Term::from_node(Node::Pair(f, g), ar))
    }

    /// Builds a binary node of the given operation.
    pub fn apply(op: Op, a: Term, b: Term) -> Result<Term, TermError> {
        match op {
            Op::Comp => Term::comp(a, b),
            Op::Rec => Term::rec(a, b),
            Op::Pair => Term::pair(a, b),
        }
    }

    pub fn node(&self) -> &Node {
        &self.0.node
    }

    pub fn arity(&self) -> Arity {
        self.0.arity
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        self.0.size
    }

    pub fn depth(&self) -> usize {
        self.0.depth
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self.node(), Node::Zero | Node::Succ | Node::Proj { .. })
    }

    pub fn op(&self) -> Option<Op> {
        match self.node() {
            Node::Comp(..) => Some(Op::Comp),
            Node::Rec(..) => Some(Op::Rec),
            Node::Pair(..) => Some(Op::Pair),
            _ => None,
        }
    }

    pub fn children(&self) -> Option<(&Term, &Term)> {
        match self.node() {
            Node::Comp(a, b) | Node::Rec(a, b) | Node::Pair(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn subterm_at(&self, path: &TermPath) -> Result<&Term, TermError> {
        let mut cur = self;
        for &step in &path.0 {
            cur = match (cur.children(), step) {
                (Some((a, _)), 0) => a,
                (Some((_, b)), 1) => b,
                _ => return Err(TermError::Path(path.clone())),
            };
        }
        Ok(cur)
    }

    /// Replaces the subterm at `path` by `replacement`, re-typing every node
    /// on the way back to the root.
    pub fn replace_at(&self, path: &TermPath, replacement: Term) -> Result<Term, TermError> {
        self.replace_from(&path.0, 0, replacement)
            .map_err(|e| match e {
                TermError::Path(_) => TermError::Path(path.clone()),
                other => other,
            })
    }

    fn replace_from(&self, path: &[u8], depth: usize, replacement: Term) -> Result<Term, TermError> {
        if depth == path.len() {
            return Ok(replacement);
        }
        let op = self.op().ok_or_else(|| TermError::Path(TermPath::root()))?;
        let (a, b) = self.children().expect("binary node");
        let (a, b) = match path[depth] {
            0 => (a.replace_from(path, depth + 1, replacement)?, b.clone()),
            1 => (a.clone(), b.replace_from(path, depth + 1, replacement)?),
            _ => return Err(TermError::Path(TermPath::root())),
        };
        Term::apply(op, a, b).map_err(|e| e.at(TermPath(path[..depth].to_vec())))
    }

    /// All subterm positions in pre-order.
    pub fn paths(&self) -> Vec<TermPath> {
        let mut out = Vec::with_capacity(self.size());
        let mut stack = vec![(self, TermPath::root())];
        while let Some((t, p)) = stack.pop() {
            if let Some((a, b)) = t.children() {
                stack.push((b, p.child(1)));
                stack.push((a, p.child(0)));
            }
            out.push(p);
        }
        out
    }

    pub fn ptr_eq(&self, other: &Term) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// Deterministic ordering key used for fragments: size, then printed form.
    pub fn sort_key(&self) -> (usize, String) {
        (self.size(), self.to_string())
    }

    pub fn to_raw(&self) -> RawTerm {
        match self.node() {
            Node::Zero => RawTerm::Zero,
            Node::Succ => RawTerm::Succ,
            Node::Proj { n, i } => RawTerm::Proj(*n, *i),
            Node::Comp(g, f) => RawTerm::Comp(Box::new(g.to_raw()), Box::new(f.to_raw())),
            Node::Rec(f, g) => RawTerm::Rec(Box::new(f.to_raw()), Box::new(g.to_raw())),
            Node::Pair(f, g) => RawTerm::Pair(Box::new(f.to_raw()), Box::new(g.to_raw())),
        }
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Term) -> bool {
        self.ptr_eq(other)
            || (self.0.hash == other.0.hash
                && self.0.size == other.0.size
                && self.0.node == other.0.node)
    }
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Term({self})")
    }
}

impl Serialize for Term {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Term {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        crate::syntax::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Untyped syntax tree, as produced by the parser before type checking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawTerm {
    Zero,
    Succ,
    Proj(usize, usize),
    Comp(Box<RawTerm>, Box<RawTerm>),
    Rec(Box<RawTerm>, Box<RawTerm>),
    Pair(Box<RawTerm>, Box<RawTerm>),
}

impl RawTerm {
    pub fn comp(g: RawTerm, f: RawTerm) -> RawTerm {
        RawTerm::Comp(Box::new(g), Box::new(f))
    }

    pub fn rec(f: RawTerm, g: RawTerm) -> RawTerm {
        RawTerm::Rec(Box::new(f), Box::new(g))
    }

    pub fn pair(f: RawTerm, g: RawTerm) -> RawTerm {
        RawTerm::Pair(Box::new(f), Box::new(g))
    }

    /// Type checks the tree, returning the typed term or the first error
    /// found in post-order together with its path.
    pub fn check(&self) -> Result<Term, TermError> {
        self.check_at(&mut Vec::new())
    }

    fn check_at(&self, path: &mut Vec<u8>) -> Result<Term, TermError> {
        let here = |e: TermError, p: &Vec<u8>| e.at(TermPath(p.clone()));
        let (op, a, b) = match self {
            RawTerm::Zero => return Ok(Term::zero()),
            RawTerm::Succ => return Ok(Term::succ()),
            RawTerm::Proj(n, i) => return Term::proj(*n, *i).map_err(|e| here(e, path)),
            RawTerm::Comp(a, b) => (Op::Comp, a, b),
            RawTerm::Rec(a, b) => (Op::Rec, a, b),
            RawTerm::Pair(a, b) => (Op::Pair, a, b),
        };
        path.push(0);
        let a = a.check_at(path)?;
        path.pop();
        path.push(1);
        let b = b.check_at(path)?;
        path.pop();
        Term::apply(op, a, b).map_err(|e| here(e, path))
    }
}

/// Arity of an untyped tree under the composition, recursion and bracket
/// typing rules.
pub fn arity_of(t: &RawTerm) -> Result<Arity, TermError> {
    t.check().map(|t| t.arity())
}

/// A multiple projection `π^X : ℕ^n → ℕ^m` with `X = ⟨x1, …, xm⟩`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjSpec {
    pub n: usize,
    pub xs: Vec<usize>,
}

impl ProjSpec {
    pub fn new(n: usize, xs: Vec<usize>) -> Result<Self, TermError> {
        if xs.is_empty() {
            return Err(TermError::Spec("projection list is empty".into()));
        }
        if let Some(bad) = xs.iter().find(|&&x| x == 0 || x > n) {
            return Err(TermError::Spec(format!(
                "projection index {bad} outside 1..={n}"
            )));
        }
        Ok(ProjSpec { n, xs })
    }
}

/// Right-nested bracket `⟨π^n_{x1}, ⟨π^n_{x2}, …⟩⟩`.
pub fn mk_multi_proj(spec: &ProjSpec) -> Result<Term, TermError> {
    let spec = ProjSpec::new(spec.n, spec.xs.clone())?;
    let mut projs = spec
        .xs
        .iter()
        .rev()
        .map(|&x| Term::proj(spec.n, x))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter();
    let mut acc = projs.next().expect("non-empty");
    for p in projs {
        acc = Term::pair(p, acc)?;
    }
    Ok(acc)
}

fn multi_proj(n: usize, xs: impl IntoIterator<Item = usize>) -> Result<Term, TermError> {
    mk_multi_proj(&ProjSpec::new(n, xs.into_iter().collect())?)
}

fn positive(what: &str, n: usize) -> Result<(), TermError> {
    if n == 0 {
        Err(TermError::Spec(format!("{what} must be at least 1")))
    } else {
        Ok(())
    }
}

/// `π^I` with `I = ⟨1..n⟩`.
pub fn mk_identity(n: usize) -> Result<Term, TermError> {
    positive("identity width", n)?;
    multi_proj(n, 1..=n)
}

/// `π^X` with `X = ⟨1..n, 1..n⟩`.
pub fn mk_diagonal(n: usize) -> Result<Term, TermError> {
    positive("diagonal width", n)?;
    multi_proj(n, (1..=n).chain(1..=n))
}

/// The twist `ℕ^a × ℕ^b → ℕ^b × ℕ^a`, sending `(u, v)` to `(v, u)`.
pub fn mk_twist(a: usize, b: usize) -> Result<Term, TermError> {
    positive("twist width", a)?;
    positive("twist width", b)?;
    multi_proj(a + b, (a + 1..=a + b).chain(1..=a))
}

/// Projection of `ℕ^n` onto the coordinates `start+1 ..= start+len`.
pub fn mk_block_proj(n: usize, start: usize, len: usize) -> Result<Term, TermError> {
    positive("block width", len)?;
    multi_proj(n, start + 1..=start + len)
}

/// `f × g = ⟨f ∘ π^{a+c}_a, g ∘ π^{a+c}_c⟩`.
pub fn mk_product(f: &Term, g: &Term) -> Result<Term, TermError> {
    let a = f.arity().dom;
    let c = g.arity().dom;
    let left = Term::comp(f.clone(), mk_block_proj(a + c, 0, a)?)?;
    let right = Term::comp(g.clone(), mk_block_proj(a + c, a, c)?)?;
    Term::pair(left, right)
}

/// Flattens a bracket tree of projections `Proj(n, ·)` (any nesting) into
/// `(n, [indices])`.
pub fn as_multi_proj(t: &Term) -> Option<(usize, Vec<usize>)> {
    fn go(t: &Term, n: usize, out: &mut Vec<usize>) -> bool {
        match t.node() {
            Node::Proj { n: m, i } if *m == n => {
                out.push(*i);
                true
            }
            Node::Pair(a, b) => go(a, n, out) && go(b, n, out),
            _ => false,
        }
    }
    let n = t.arity().dom;
    let mut xs = Vec::with_capacity(t.arity().cod);
    go(t, n, &mut xs).then_some((n, xs))
}

/// Width `n` if `t` spells the identity `⟨π^n_1, …, π^n_n⟩` in any bracket
/// nesting.
pub fn as_identity(t: &Term) -> Option<usize> {
    let (n, xs) = as_multi_proj(t)?;
    (xs.len() == n && xs.iter().enumerate().all(|(k, &x)| x == k + 1)).then_some(n)
}

/// Block widths `(a, b)` if `t` spells the twist of [`mk_twist`] in any
/// bracket nesting.
pub fn as_twist(t: &Term) -> Option<(usize, usize)> {
    let (n, xs) = as_multi_proj(t)?;
    if xs.len() != n || n < 2 {
        return None;
    }
    let a = xs[0].checked_sub(1)?;
    if a == 0 || a >= n {
        return None;
    }
    let b = n - a;
    let expected = (a + 1..=n).chain(1..=a);
    xs.iter().copied().eq(expected).then_some((a, b))
}

/// Splits `t` into `(f, g)` if it is literally `mk_product(f, g)`.
pub fn as_product(t: &Term) -> Option<(Term, Term)> {
    let Node::Pair(l, r) = t.node() else {
        return None;
    };
    let (Node::Comp(f, _), Node::Comp(g, _)) = (l.node(), r.node()) else {
        return None;
    };
    let rebuilt = mk_product(f, g).ok()?;
    (&rebuilt == t).then(|| (f.clone(), g.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, i: usize) -> Term {
        Term::proj(n, i).unwrap()
    }

    #[test]
    fn arities_follow_typing_rules() {
        let t = Term::comp(Term::succ(), Term::zero()).unwrap();
        assert_eq!(t.arity(), Arity::new(1, 1));
        let add = Term::rec(p(1, 1), Term::comp(Term::succ(), p(2, 2)).unwrap()).unwrap();
        assert_eq!(add.arity(), Arity::new(2, 1));
        let raw = RawTerm::comp(RawTerm::Zero, RawTerm::pair(RawTerm::Succ, RawTerm::Succ));
        match arity_of(&raw) {
            Err(TermError::Type { path, .. }) => assert!(path.is_root()),
            other => panic!("expected type error, got {other:?}"),
        }
    }

    #[test]
    fn type_error_reports_nested_path() {
        let bad = RawTerm::pair(
            RawTerm::Succ,
            RawTerm::comp(RawTerm::Succ, RawTerm::Proj(3, 4)),
        );
        match bad.check() {
            Err(TermError::Type { path, .. }) => assert_eq!(path, TermPath(vec![1, 1])),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn projection_bounds() {
        assert!(Term::proj(2, 0).is_err());
        assert!(Term::proj(2, 3).is_err());
        assert!(Term::proj(0, 0).is_err());
        assert_eq!(p(3, 2).arity(), Arity::new(3, 1));
    }

    #[test]
    fn multi_projection_shapes() {
        assert_eq!(mk_multi_proj(&ProjSpec { n: 2, xs: vec![1] }).unwrap(), p(2, 1));
        assert_eq!(
            mk_multi_proj(&ProjSpec { n: 2, xs: vec![1, 2] }).unwrap(),
            Term::pair(p(2, 1), p(2, 2)).unwrap()
        );
        assert!(matches!(
            mk_multi_proj(&ProjSpec { n: 2, xs: vec![3] }),
            Err(TermError::Spec(_))
        ));
        assert!(ProjSpec::new(2, vec![]).is_err());
        let t = mk_multi_proj(&ProjSpec { n: 3, xs: vec![3, 1, 2] }).unwrap();
        assert_eq!(t.arity(), Arity::new(3, 3));
        assert_eq!(as_multi_proj(&t), Some((3, vec![3, 1, 2])));
    }

    #[test]
    fn macros() {
        assert_eq!(mk_identity(1).unwrap(), p(1, 1));
        assert_eq!(mk_diagonal(1).unwrap(), Term::pair(p(1, 1), p(1, 1)).unwrap());
        assert!(mk_identity(0).is_err());
        assert!(mk_twist(0, 2).is_err());
        let tw = mk_twist(2, 1).unwrap();
        assert_eq!(as_multi_proj(&tw), Some((3, vec![3, 1, 2])));
        assert_eq!(as_twist(&tw), Some((2, 1)));
        assert_eq!(as_twist(&mk_identity(3).unwrap()), None);
        assert_eq!(as_identity(&mk_identity(3).unwrap()), Some(3));
        let left_nested = Term::pair(Term::pair(p(3, 1), p(3, 2)).unwrap(), p(3, 3)).unwrap();
        assert_eq!(as_identity(&left_nested), Some(3));
        let prod = mk_product(&Term::succ(), &mk_identity(2).unwrap()).unwrap();
        assert_eq!(prod.arity(), Arity::new(3, 3));
        assert_eq!(
            as_product(&prod),
            Some((Term::succ(), mk_identity(2).unwrap()))
        );
    }

    #[test]
    fn sizes_and_paths() {
        assert_eq!(Term::zero().size(), 1);
        let t = Term::comp(Term::succ(), Term::zero()).unwrap();
        assert_eq!(t.size(), 3);
        assert_eq!(t.depth(), 2);
        let r = t.replace_at(&TermPath(vec![1]), Term::succ()).unwrap();
        assert_eq!(r, Term::comp(Term::succ(), Term::succ()).unwrap());
        assert!(matches!(
            t.replace_at(&TermPath(vec![0, 0]), Term::succ()),
            Err(TermError::Path(_))
        ));
        assert!(matches!(
            t.replace_at(&TermPath(vec![1]), Term::pair(Term::succ(), Term::succ()).unwrap()),
            Err(TermError::Type { .. })
        ));
        assert_eq!(t.subterm_at(&TermPath(vec![0])).unwrap(), &Term::succ());
        assert_eq!(t.paths().len(), 3);
    }

    #[test]
    fn structural_equality_ignores_sharing() {
        let a = Term::comp(Term::succ(), Term::zero()).unwrap();
        let b = Term::comp(Term::succ(), Term::zero()).unwrap();
        assert!(!a.ptr_eq(&b));
        assert_eq!(a, b);
        assert_ne!(a, Term::comp(Term::zero(), Term::succ()).unwrap());
    }
}
