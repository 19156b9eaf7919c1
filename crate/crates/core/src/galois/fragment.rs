use std::collections::{BTreeMap, HashMap};
use std::ops::Range;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::partition::{Partition, UnionFind};
use crate::error::CapacityError;
use crate::semantics::{fingerprint, Budget, Fingerprint};
use crate::term::{Arity, Term};
use crate::universes::{
    closure_with, normalize, normalize_best_effort, Caps, RuleOptions, Universe,
};

/// Bounds of a finite fragment of descriptions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct FragmentParams {
    pub max_size: usize,
    pub max_width: usize,
    pub allow_rec: bool,
    /// Grid bound of the fingerprints used for the semantic partition.
    pub grid: u64,
    /// Largest allowed hom-set.
    pub capacity: usize,
}

impl Default for FragmentParams {
    fn default() -> Self {
        FragmentParams {
            max_size: 5,
            max_width: 2,
            allow_rec: true,
            grid: 4,
            capacity: 2000,
        }
    }
}

/// Every well-typed description within the bounds, grouped by arity.
///
/// Terms are numbered globally: hom-sets in ascending arity order, each
/// sorted by size and then printed form. Every subterm of a member is a
/// member, and every intermediate arity respects the width bound.
#[derive(Debug, Clone)]
pub struct Fragment {
    params: FragmentParams,
    terms: Vec<Term>,
    homsets: BTreeMap<Arity, Range<usize>>,
    index: HashMap<Term, usize>,
}

fn leaves(width: usize) -> Vec<Term> {
    let mut out = vec![Term::zero(), Term::succ()];
    for n in 1..=width {
        for i in 1..=n {
            out.push(Term::proj(n, i).expect("in range"));
        }
    }
    out
}

/// Enumerates a fragment.
pub fn enumerate_fragment(params: FragmentParams) -> Result<Fragment, CapacityError> {
    assert!(params.max_size >= 1 && params.max_width >= 1, "bounds must be positive");
    let w = params.max_width;
    let fits = |a: Arity| a.dom <= w && a.cod <= w;
    // by_size[s][arity] = terms of exactly that size
    let mut by_size: Vec<BTreeMap<Arity, Vec<Term>>> = vec![BTreeMap::new(); params.max_size + 1];
    let mut counts: BTreeMap<Arity, usize> = BTreeMap::new();
    let mut add = |by: &mut BTreeMap<Arity, Vec<Term>>, t: Term| -> Result<(), CapacityError> {
        let c = counts.entry(t.arity()).or_default();
        *c += 1;
        if *c > params.capacity {
            return Err(CapacityError {
                arity: t.arity(),
                limit: params.capacity,
            });
        }
        by.entry(t.arity()).or_default().push(t);
        Ok(())
    };
    let mut level = BTreeMap::new();
    for t in leaves(w) {
        add(&mut level, t)?;
    }
    by_size[1] = level;
    for s in 3..=params.max_size {
        let mut level = BTreeMap::new();
        for l in 1..s - 1 {
            let r = s - 1 - l;
            let (left, right) = (&by_size[l], &by_size[r]);
            let mut fresh = Vec::new();
            for (&la, ls) in left {
                for (&ra, rs) in right {
                    // comp(g, f): g from the left, f from the right
                    if ra.cod == la.dom && fits(Arity::new(ra.dom, la.cod)) {
                        for g in ls {
                            for f in rs {
                                fresh.push(Term::comp(g.clone(), f.clone()));
                            }
                        }
                    }
                    if params.allow_rec
                        && ra == Arity::new(la.dom + la.cod, la.cod)
                        && fits(Arity::new(la.dom + 1, la.cod))
                    {
                        for f in ls {
                            for g in rs {
                                fresh.push(Term::rec(f.clone(), g.clone()));
                            }
                        }
                    }
                    if la.dom == ra.dom && la.cod + ra.cod <= w {
                        for f in ls {
                            for g in rs {
                                fresh.push(Term::pair(f.clone(), g.clone()));
                            }
                        }
                    }
                }
            }
            for t in fresh {
                add(&mut level, t.expect("typing checked before construction"))?;
            }
        }
        by_size[s] = level;
    }
    let mut grouped: BTreeMap<Arity, Vec<Term>> = BTreeMap::new();
    for level in by_size {
        for (a, ts) in level {
            grouped.entry(a).or_default().extend(ts);
        }
    }
    let mut terms = Vec::new();
    let mut homsets = BTreeMap::new();
    for (a, mut ts) in grouped {
        let mut keyed: Vec<((usize, String), Term)> = ts.drain(..).map(|t| (t.sort_key(), t)).collect();
        keyed.sort_by(|x, y| x.0.cmp(&y.0));
        let start = terms.len();
        terms.extend(keyed.into_iter().map(|(_, t)| t));
        homsets.insert(a, start..terms.len());
    }
    let index = terms.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
    Ok(Fragment {
        params,
        terms,
        homsets,
        index,
    })
}

impl Fragment {
    pub fn params(&self) -> FragmentParams {
        self.params
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn term(&self, i: usize) -> &Term {
        &self.terms[i]
    }

    pub fn index_of(&self, t: &Term) -> Option<usize> {
        self.index.get(t).copied()
    }

    pub fn arities(&self) -> impl Iterator<Item = Arity> + '_ {
        self.homsets.keys().copied()
    }

    pub fn homset_range(&self, a: Arity) -> Range<usize> {
        self.homsets.get(&a).cloned().unwrap_or(0..0)
    }

    pub fn homset(&self, a: Arity) -> &[Term] {
        &self.terms[self.homset_range(a)]
    }

    /// Summary for reports: parameters, hom-set sizes and the printed terms
    /// in global order.
    pub fn summary(&self, with_terms: bool) -> Value {
        let homsets: BTreeMap<String, usize> = self
            .homsets
            .iter()
            .map(|(a, r)| (a.to_string(), r.len()))
            .collect();
        let mut v = json!({
            "params": self.params,
            "size": self.len(),
            "homsets": homsets,
        });
        if with_terms {
            v["terms"] = json!(self.terms.iter().map(Term::to_string).collect::<Vec<_>>());
        }
        v
    }
}

/// Semantic partition together with the terms whose fingerprint is partial.
#[derive(Debug, Clone)]
pub struct SemanticPartition {
    pub partition: Partition,
    pub fingerprints: Vec<Fingerprint>,
    /// Terms that ran out of budget somewhere on the grid. They are grouped
    /// only with terms having the identical partial table.
    pub partial: Vec<usize>,
}

/// Groups the fragment by fingerprint on the fragment's grid bound. The
/// result refines equality of functions only in one direction: different
/// blocks compute different functions.
pub fn semantic_partition(f: &Fragment, budget: Budget) -> SemanticPartition {
    let fps: Vec<Fingerprint> = f
        .terms
        .par_iter()
        .map(|t| fingerprint(t, f.params.grid, budget))
        .collect();
    let partial = fps
        .iter()
        .enumerate()
        .filter(|(_, fp)| fp.is_partial())
        .map(|(i, _)| i)
        .collect();
    SemanticPartition {
        partition: Partition::from_keys(fps.iter()),
        fingerprints: fps,
        partial,
    }
}

/// A universe partition of a fragment.
#[derive(Debug, Clone)]
pub struct UniversePartition {
    pub universe: Universe,
    pub partition: Partition,
    /// Closure searches that hit the count cap.
    pub truncated: usize,
    pub refines_semantic: bool,
}

impl UniversePartition {
    pub fn complete(&self) -> bool {
        self.truncated == 0
    }
}

/// Settings for computing universe partitions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartitionConfig {
    pub caps: Caps,
    pub rules: RuleOptions,
    pub budget: Budget,
}

impl Default for PartitionConfig {
    fn default() -> Self {
        PartitionConfig {
            caps: Caps::default(),
            rules: RuleOptions::default(),
            budget: Budget::default(),
        }
    }
}

/// Partitions of a fragment for several universes, sharing work.
///
/// `Desc` is discrete; `C`, `I` and `Cat` group by canonical form. `CatX`,
/// `CatN` and `CatXN` join the partitions of the finer universes with the
/// components found by bounded closure searches from every term, and for
/// `CatX` also with best-effort forms; so every partition refines those of
/// the coarser universes by construction. `Func` is the semantic partition.
pub struct PartitionBuilder<'a> {
    fragment: &'a Fragment,
    cfg: PartitionConfig,
    semantic: SemanticPartition,
    done: BTreeMap<Universe, UniversePartition>,
}

impl<'a> PartitionBuilder<'a> {
    pub fn new(fragment: &'a Fragment, cfg: PartitionConfig) -> Self {
        PartitionBuilder {
            fragment,
            cfg,
            semantic: semantic_partition(fragment, cfg.budget),
            done: BTreeMap::new(),
        }
    }

    pub fn semantic(&self) -> &SemanticPartition {
        &self.semantic
    }

    pub fn get(&mut self, u: Universe) -> &UniversePartition {
        if !self.done.contains_key(&u) {
            let (partition, truncated) = self.compute(u);
            let refines_semantic = partition.refines(&self.semantic.partition);
            self.done.insert(
                u,
                UniversePartition {
                    universe: u,
                    partition,
                    truncated,
                    refines_semantic,
                },
            );
        }
        &self.done[&u]
    }

    fn compute(&mut self, u: Universe) -> (Partition, usize) {
        let f = self.fragment;
        match u {
            Universe::Desc => (Partition::discrete(f.len()), 0),
            Universe::C | Universe::I | Universe::Cat => {
                let forms: Vec<Term> = f
                    .terms
                    .par_iter()
                    .map(|t| normalize(t, u).expect("decidable universe"))
                    .collect();
                (Partition::from_keys(forms), 0)
            }
            Universe::CatX | Universe::CatN | Universe::CatXN => {
                let mut base = self.get(Universe::Cat).partition.clone();
                let mut truncated = 0;
                let finer: &[Universe] = match u {
                    Universe::CatXN => &[Universe::CatX, Universe::CatN],
                    _ => &[],
                };
                for &w in finer {
                    let p = self.get(w).clone();
                    base = base.join(&p.partition);
                    truncated += p.truncated;
                }
                if u == Universe::CatX {
                    let forms: Vec<Term> = f.terms.par_iter().map(normalize_best_effort).collect();
                    base = base.join(&Partition::from_keys(forms));
                }
                let (reach, t) = closure_partition(f, u, self.cfg);
                (base.join(&reach), truncated + t)
            }
            Universe::Func => (self.semantic.partition.clone(), 0),
        }
    }
}

/// Components of the relation "reachable by a bounded closure search".
fn closure_partition(f: &Fragment, u: Universe, cfg: PartitionConfig) -> (Partition, usize) {
    let rules = u.rules(cfg.rules);
    let found: Vec<(Vec<usize>, bool)> = f
        .terms
        .par_iter()
        .map(|t| {
            let c = closure_with(t, &rules, cfg.caps.size, cfg.caps.count);
            let members = c.terms().iter().filter_map(|m| f.index_of(m)).collect();
            (members, c.complete)
        })
        .collect();
    let mut uf = UnionFind::new(f.len());
    let mut truncated = 0;
    for (i, (members, complete)) in found.iter().enumerate() {
        truncated += usize::from(!complete);
        for &m in members {
            uf.union(i, m);
        }
    }
    (uf.partition(), truncated)
}

/// One universe partition.
pub fn universe_partition(f: &Fragment, u: Universe, cfg: PartitionConfig) -> UniversePartition {
    PartitionBuilder::new(f, cfg).get(u).clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn t(s: &str) -> Term {
        parse(s).unwrap()
    }

    fn params(max_size: usize, allow_rec: bool) -> FragmentParams {
        FragmentParams {
            max_size,
            allow_rec,
            ..FragmentParams::default()
        }
    }

    #[test]
    fn leaves_only() {
        let f = enumerate_fragment(params(1, true)).unwrap();
        let names = |a| f.homset(a).iter().map(|t: &Term| t.to_string()).collect::<Vec<_>>();
        assert_eq!(names(Arity::new(1, 1)), ["(pi 1 1)", "s", "z"]);
        assert_eq!(names(Arity::new(2, 1)), ["(pi 2 1)", "(pi 2 2)"]);
        assert_eq!(f.len(), 5);
    }

    #[test]
    fn ordering_and_closure_under_subterms() {
        let f = enumerate_fragment(params(5, true)).unwrap();
        for a in f.arities() {
            let hs = f.homset(a);
            assert!(hs.windows(2).all(|w| w[0].sort_key() < w[1].sort_key()));
            assert!(hs.iter().all(|t| t.arity() == a));
        }
        for x in f.terms() {
            if let Some((l, r)) = x.children() {
                assert!(f.index_of(l).is_some() && f.index_of(r).is_some());
            }
        }
    }

    #[test]
    fn capacity_is_enforced() {
        let p = FragmentParams {
            capacity: 10,
            ..params(5, true)
        };
        assert!(enumerate_fragment(p).is_err());
    }

    #[test]
    fn semantic_blocks() {
        let f = enumerate_fragment(params(5, false)).unwrap();
        let sp = semantic_partition(&f, Budget::default());
        let i = |s: &str| f.index_of(&t(s)).unwrap();
        let p = &sp.partition;
        assert!(p.same_block(i("(comp z (comp (pi 1 1) s))"), i("(comp z (comp s s))")));
        assert!(!p.same_block(i("s"), i("z")));
        assert!(!p.same_block(i("(comp s z)"), i("(comp z s)")));
        assert!(sp.partial.is_empty());
    }

    #[test]
    fn universe_chain_on_small_fragment() {
        let f = enumerate_fragment(params(5, false)).unwrap();
        let cfg = PartitionConfig {
            caps: Caps { size: 9, count: 300 },
            ..PartitionConfig::default()
        };
        let mut b = PartitionBuilder::new(&f, cfg);
        let desc = b.get(Universe::Desc).partition.clone();
        let c = b.get(Universe::C).partition.clone();
        let cat = b.get(Universe::Cat).partition.clone();
        assert!(desc.is_discrete());
        assert!(desc.refines(&c) && c.refines(&cat));
        let i = |s: &str| f.index_of(&t(s)).unwrap();
        assert!(c.same_block(i("(comp s (comp s s))"), i("(comp (comp s s) s)")));
        for u in Universe::ALL {
            assert!(b.get(u).refines_semantic, "{u}");
        }
    }
}
