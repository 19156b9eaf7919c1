//! Permutation groups given by generators, with stabilizer chains.
//!
//! A group is split into independent components first: points moved by a
//! common generator belong to the same component, so the group is the
//! direct product of the groups generated on each component. Every
//! component gets its own deterministic Schreier–Sims chain.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::One;
use serde::ser::{Serialize, SerializeStruct, Serializer};

/// A permutation of `0..degree`, stored as its image list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn identity(degree: usize) -> Perm {
        Perm((0..degree as u32).collect())
    }

    /// Builds a permutation from its images; `None` if `images` is not a
    /// bijection of `0..images.len()`.
    pub fn from_images(images: Vec<usize>) -> Option<Perm> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || std::mem::replace(&mut seen[x], true) {
                return None;
            }
        }
        Some(Perm(images.into_iter().map(|x| x as u32).collect()))
    }

    /// The product of the given disjoint or overlapping cycles, applied
    /// left to right.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Perm {
        let mut p = Perm::identity(degree);
        for c in cycles {
            let mut q = Perm::identity(degree);
            for k in 0..c.len() {
                q.0[c[k]] = c[(k + 1) % c.len()] as u32;
            }
            p = p.then(&q);
        }
        p
    }

    pub fn transposition(degree: usize, a: usize, b: usize) -> Perm {
        let mut p = Perm::identity(degree);
        p.0.swap(a, b);
        p
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&x| other.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm(inv)
    }

    /// Points not fixed, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i] as usize != i).collect()
    }

    /// Nontrivial cycles, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            let mut c = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                c.push(x);
                x = self.apply(x);
            }
            out.push(c);
        }
        out
    }

    fn restrict(&self, points: &[usize], local: &[u32]) -> Perm {
        Perm(points.iter().map(|&p| local[self.apply(p)]).collect())
    }
}

struct Level {
    point: usize,
    gens: Vec<Perm>,
    /// `transversal[x]` maps `point` to `x`, for `x` in the basic orbit.
    transversal: Vec<Option<Perm>>,
    orbit: Vec<usize>,
}

impl Level {
    fn new(point: usize, degree: usize) -> Level {
        let mut l = Level {
            point,
            gens: Vec::new(),
            transversal: vec![None; degree],
            orbit: Vec::new(),
        };
        l.rebuild(degree);
        l
    }

    fn rebuild(&mut self, degree: usize) {
        self.transversal = vec![None; degree];
        self.transversal[self.point] = Some(Perm::identity(degree));
        self.orbit = vec![self.point];
        let mut k = 0;
        while k < self.orbit.len() {
            let x = self.orbit[k];
            let ux = self.transversal[x].clone().expect("orbit member");
            for s in &self.gens {
                let y = s.apply(x);
                if self.transversal[y].is_none() {
                    self.transversal[y] = Some(ux.then(s));
                    self.orbit.push(y);
                }
            }
            k += 1;
        }
    }
}

/// Deterministic Schreier–Sims stabilizer chain.
pub struct StabChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabChain {
    pub fn new(degree: usize, gens: &[Perm]) -> StabChain {
        let mut chain = StabChain {
            degree,
            levels: Vec::new(),
        };
        for g in gens.iter().filter(|g| !g.is_identity()) {
            if chain.levels.iter().all(|l| g.apply(l.point) == l.point) {
                let b = g.support()[0];
                chain.levels.push(Level::new(b, degree));
            }
        }
        for g in gens.iter().filter(|g| !g.is_identity()) {
            for i in 0..chain.levels.len() {
                chain.levels[i].gens.push(g.clone());
                if g.apply(chain.levels[i].point) != chain.levels[i].point {
                    break;
                }
            }
        }
        for l in &mut chain.levels {
            l.rebuild(degree);
        }
        chain.complete();
        chain
    }

    fn complete(&mut self) {
        let mut i = self.levels.len() as isize - 1;
        while i >= 0 {
            let iu = i as usize;
            let mut jumped = None;
            'search: for k in 0..self.levels[iu].orbit.len() {
                let x = self.levels[iu].orbit[k];
                for s in 0..self.levels[iu].gens.len() {
                    let level = &self.levels[iu];
                    let gen = &level.gens[s];
                    let ux = level.transversal[x].as_ref().expect("orbit member");
                    let uy = level.transversal[gen.apply(x)].as_ref().expect("orbit is closed");
                    let h = ux.then(gen).then(&uy.inverse());
                    let (res, drop) = self.sift(h, iu + 1);
                    if res.is_identity() {
                        continue;
                    }
                    if drop == self.levels.len() {
                        let b = res.support()[0];
                        self.levels.push(Level::new(b, self.degree));
                    }
                    for l in iu + 1..=drop {
                        self.levels[l].gens.push(res.clone());
                        self.levels[l].rebuild(self.degree);
                    }
                    jumped = Some(drop);
                    break 'search;
                }
            }
            match jumped {
                Some(j) => i = j as isize,
                None => i -= 1,
            }
        }
    }

    /// Sifts `g` from level `from`; returns the residue and the level where
    /// sifting stopped (`levels.len()` if it passed all of them).
    fn sift(&self, mut g: Perm, from: usize) -> (Perm, usize) {
        for (k, l) in self.levels.iter().enumerate().skip(from) {
            let x = g.apply(l.point);
            match &l.transversal[x] {
                Some(u) => g = g.then(&u.inverse()),
                None => return (g, k),
            }
        }
        (g, self.levels.len())
    }

    pub fn contains(&self, g: &Perm) -> bool {
        let (res, _) = self.sift(g.clone(), 0);
        res.is_identity()
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.point).collect()
    }
}

struct Component {
    points: Vec<usize>,
    chain: StabChain,
}

/// A permutation group on `0..degree`.
pub struct PermGroup {
    degree: usize,
    gens: Vec<Perm>,
    components: OnceLock<Vec<Component>>,
}

impl Clone for PermGroup {
    fn clone(&self) -> Self {
        PermGroup::new(self.degree, self.gens.clone())
    }
}

impl std::fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PermGroup")
            .field("degree", &self.degree)
            .field("generators", &self.gens.len())
            .finish()
    }
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        parent[hi] = lo;
    }
}

impl PermGroup {
    pub fn new(degree: usize, gens: Vec<Perm>) -> PermGroup {
        assert!(gens.iter().all(|g| g.degree() == degree), "generator degree mismatch");
        PermGroup {
            degree,
            gens: gens.into_iter().filter(|g| !g.is_identity()).collect(),
            components: OnceLock::new(),
        }
    }

    pub fn trivial(degree: usize) -> PermGroup {
        PermGroup::new(degree, Vec::new())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.gens
    }

    /// Orbit representative of every point: the least point of its orbit.
    pub fn orbit_roots(&self) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.degree).collect();
        for g in &self.gens {
            for x in g.support() {
                union(&mut parent, x, g.apply(x));
            }
        }
        (0..self.degree).map(|x| find(&mut parent, x)).collect()
    }

    fn components(&self) -> &[Component] {
        self.components.get_or_init(|| {
            let mut parent: Vec<usize> = (0..self.degree).collect();
            for g in &self.gens {
                let s = g.support();
                for w in s.windows(2) {
                    union(&mut parent, w[0], w[1]);
                }
            }
            let moved: Vec<bool> = {
                let mut m = vec![false; self.degree];
                for g in &self.gens {
                    for x in g.support() {
                        m[x] = true;
                    }
                }
                m
            };
            let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
            for x in (0..self.degree).filter(|&x| moved[x]) {
                groups.entry(find(&mut parent, x)).or_default().push(x);
            }
            groups
                .into_values()
                .map(|points| {
                    let mut local = vec![u32::MAX; self.degree];
                    for (k, &p) in points.iter().enumerate() {
                        local[p] = k as u32;
                    }
                    let gens: Vec<Perm> = self
                        .gens
                        .iter()
                        .filter(|g| points.iter().any(|&p| g.apply(p) != p))
                        .map(|g| g.restrict(&points, &local))
                        .collect();
                    let chain = StabChain::new(points.len(), &gens);
                    Component { points, chain }
                })
                .collect()
        })
    }

    pub fn order(&self) -> BigUint {
        self.components()
            .iter()
            .fold(BigUint::one(), |acc, c| acc * c.chain.order())
    }

    pub fn contains(&self, g: &Perm) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let comps = self.components();
        let mut owner = vec![usize::MAX; self.degree];
        for (k, c) in comps.iter().enumerate() {
            for &p in &c.points {
                owner[p] = k;
            }
        }
        for x in 0..self.degree {
            let y = g.apply(x);
            if owner[x] != owner[y] || (owner[x] == usize::MAX && x != y) {
                return false;
            }
        }
        comps.iter().all(|c| {
            let mut local = vec![u32::MAX; self.degree];
            for (k, &p) in c.points.iter().enumerate() {
                local[p] = k as u32;
            }
            c.chain.contains(&g.restrict(&c.points, &local))
        })
    }

    /// Whether every generator of `other` lies in `self`.
    pub fn contains_group(&self, other: &PermGroup) -> bool {
        other.gens.iter().all(|g| self.contains(g))
    }
}

impl Serialize for PermGroup {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("PermGroup", 3)?;
        st.serialize_field("degree", &self.degree)?;
        st.serialize_field("order", &self.order().to_string())?;
        let gens: Vec<Vec<Vec<usize>>> = self.gens.iter().map(Perm::cycles).collect();
        st.serialize_field("generators", &gens)?;
        st.end()
    }
}
