use std::collections::HashMap;
use std::hash::Hash;

use serde::Serialize;

/// A partition of the points `0..len`, stored as canonical block labels:
/// blocks are numbered in order of their least member.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Partition {
    labels: Vec<usize>,
}

impl Partition {
    /// Groups points with equal keys.
    pub fn from_keys<K: Hash + Eq>(keys: impl IntoIterator<Item = K>) -> Partition {
        let mut ids = HashMap::new();
        let labels = keys
            .into_iter()
            .map(|k| {
                let next = ids.len();
                *ids.entry(k).or_insert(next)
            })
            .collect();
        Partition { labels }
    }

    pub fn discrete(len: usize) -> Partition {
        Partition {
            labels: (0..len).collect(),
        }
    }

    pub fn from_blocks(len: usize, blocks: &[Vec<usize>]) -> Partition {
        let mut key = (0..len).collect::<Vec<_>>();
        for b in blocks {
            if let Some(&m) = b.iter().min() {
                for &x in b {
                    key[x] = m;
                }
            }
        }
        Partition::from_keys(key)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, x: usize) -> usize {
        self.labels[x]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn num_blocks(&self) -> usize {
        self.labels.iter().max().map_or(0, |m| m + 1)
    }

    pub fn same_block(&self, a: usize, b: usize) -> bool {
        self.labels[a] == self.labels[b]
    }

    /// Blocks in label order, members ascending.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_blocks()];
        for (x, &l) in self.labels.iter().enumerate() {
            out[l].push(x);
        }
        out
    }

    pub fn is_discrete(&self) -> bool {
        self.num_blocks() == self.len()
    }

    /// Every block of `self` lies inside a block of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        assert_eq!(self.len(), coarser.len(), "partitions of different sets");
        let mut image = vec![usize::MAX; self.num_blocks()];
        self.labels.iter().zip(&coarser.labels).all(|(&a, &b)| {
            if image[a] == usize::MAX {
                image[a] = b;
            }
            image[a] == b
        })
    }

    /// Finest common coarsening.
    pub fn join(&self, other: &Partition) -> Partition {
        assert_eq!(self.len(), other.len(), "partitions of different sets");
        let mut uf = UnionFind::new(self.len());
        for p in [self, other] {
            let mut first = vec![usize::MAX; p.num_blocks()];
            for (x, &l) in p.labels.iter().enumerate() {
                if first[l] == usize::MAX {
                    first[l] = x;
                } else {
                    uf.union(first[l], x);
                }
            }
        }
        uf.partition()
    }

    /// Common refinement.
    pub fn meet(&self, other: &Partition) -> Partition {
        Partition::from_keys(self.labels.iter().zip(&other.labels))
    }

    /// A pair of points in one block of `self` but different blocks of
    /// `finer`, if any.
    pub fn split_witness(&self, finer: &Partition) -> Option<(usize, usize)> {
        let mut rep: HashMap<usize, usize> = HashMap::new();
        for x in 0..self.len() {
            match rep.get(&self.labels[x]) {
                None => {
                    rep.insert(self.labels[x], x);
                }
                Some(&r) if !finer.same_block(r, x) => return Some((r, x)),
                _ => {}
            }
        }
        None
    }
}

/// Union-find over `0..n` with path halving.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    pub fn partition(&mut self) -> Partition {
        let roots: Vec<usize> = (0..self.parent.len()).map(|x| self.find(x)).collect();
        Partition::from_keys(roots)
    }
}
