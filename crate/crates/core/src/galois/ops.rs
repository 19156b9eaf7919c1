//! Subgroups of permutations that commute with the term operations.
//!
//! An element `φ` preserves an operation `op` on a fragment when
//! `φ(op(p, q)) = op(φ(p), φ(q))` whenever `op(p, q)` is in the fragment.
//! Such a `φ` is determined by its action on the atoms, the terms whose top
//! operation is not preserved, and it maps atoms to atoms. The subgroup is
//! found by a base-and-strong-generators backtrack over the atoms.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::One;

use super::fragment::Fragment;
use super::perm::{Perm, PermGroup};
use crate::term::Op;

/// The largest subgroup of a group preserving a set of operations.
#[derive(Debug, Clone)]
pub struct OpSubgroup {
    pub group: PermGroup,
    /// Order from the basic orbits of the search.
    pub order: BigUint,
    pub atoms: usize,
    /// False when the search node budget ran out; the group is then a
    /// subgroup of the answer.
    pub complete: bool,
}

const NODE_BUDGET: u64 = 50_000_000;

struct Structure {
    atoms: Vec<usize>,
    /// Op-terms `(t, op, left, right)` sorted by term size.
    op_terms: Vec<(usize, Op, usize, usize)>,
    lookup: HashMap<(Op, usize, usize), usize>,
    /// Op-terms that become computable once the atom at each position is
    /// assigned.
    ready_at: Vec<Vec<usize>>,
}

fn structure(f: &Fragment, ops: &[Op]) -> Structure {
    let n = f.len();
    let mut op_terms = Vec::new();
    let mut atoms = Vec::new();
    for (i, t) in f.terms().iter().enumerate() {
        match (t.op(), t.children()) {
            (Some(op), Some((a, b))) if ops.contains(&op) => {
                let l = f.index_of(a).expect("fragments are closed under subterms");
                let r = f.index_of(b).expect("fragments are closed under subterms");
                op_terms.push((i, op, l, r));
            }
            _ => atoms.push(i),
        }
    }
    // small atoms occur in many op-terms, so they go first
    atoms.sort_by_key(|&i| (f.term(i).size(), i));
    let mut atom_pos = vec![None; n];
    for (k, &a) in atoms.iter().enumerate() {
        atom_pos[a] = Some(k);
    }
    op_terms.sort_by_key(|&(i, ..)| (f.term(i).size(), i));
    let lookup = op_terms.iter().map(|&(i, op, l, r)| ((op, l, r), i)).collect();
    // last atom position each term depends on
    let mut last = vec![0usize; n];
    for &a in &atoms {
        last[a] = atom_pos[a].expect("atom");
    }
    let mut ready_at = vec![Vec::new(); atoms.len()];
    for (k, &(i, _, l, r)) in op_terms.iter().enumerate() {
        last[i] = last[l].max(last[r]);
        ready_at[last[i]].push(k);
    }
    Structure {
        atoms,
        op_terms,
        lookup,
        ready_at,
    }
}

struct Search<'a> {
    s: &'a Structure,
    group: &'a PermGroup,
    orbit_of: Vec<usize>,
    candidates: Vec<Vec<usize>>,
    phi: Vec<usize>,
    used: Vec<bool>,
    nodes: u64,
    exhausted: bool,
}

impl Search<'_> {
    /// Computes the op-terms ready at atom position `k`; false on conflict.
    fn propagate(&mut self, k: usize) -> bool {
        for &j in &self.s.ready_at[k] {
            let (i, op, l, r) = self.s.op_terms[j];
            match self.s.lookup.get(&(op, self.phi[l], self.phi[r])) {
                Some(&img) if self.orbit_of[img] == self.orbit_of[i] => self.phi[i] = img,
                _ => return false,
            }
        }
        true
    }

    fn dfs(&mut self, k: usize) -> Option<Perm> {
        if k == self.s.atoms.len() {
            let p = Perm::from_images(self.phi.clone()).expect("structure-preserving maps are bijective");
            return self.group.contains(&p).then_some(p);
        }
        self.nodes += 1;
        if self.nodes > NODE_BUDGET {
            self.exhausted = true;
            return None;
        }
        let a = self.s.atoms[k];
        let cands = self.candidates[k].clone();
        let order = std::iter::once(a).chain(cands.into_iter().filter(|&c| c != a));
        for c in order {
            if self.used[c] {
                continue;
            }
            self.used[c] = true;
            self.phi[a] = c;
            if self.propagate(k) {
                if let Some(p) = self.dfs(k + 1) {
                    self.used[c] = false;
                    return Some(p);
                }
            }
            self.used[c] = false;
            if self.exhausted {
                return None;
            }
        }
        None
    }
}

/// Largest subgroup of `g` whose elements preserve every operation in
/// `ops` on the fragment. With `fix_initials`, `z`, `s` and projections are
/// also fixed.
pub fn op_preserving_subgroup(g: &PermGroup, f: &Fragment, ops: &[Op], fix_initials: bool) -> OpSubgroup {
    assert_eq!(g.degree(), f.len(), "group does not act on this fragment");
    let s = structure(f, ops);
    let m = s.atoms.len();
    let orbit_of = g.orbit_roots();
    // invariant colour: orbit plus how often the atom is an operand
    let mut uses: HashMap<usize, Vec<(Op, u8, usize)>> = HashMap::new();
    for &(_, op, l, r) in &s.op_terms {
        uses.entry(l).or_default().push((op, 0, orbit_of[r]));
        uses.entry(r).or_default().push((op, 1, orbit_of[l]));
    }
    let colour = |a: usize| {
        let mut u: Vec<(Op, u8)> = uses.get(&a).map_or(vec![], |v| v.iter().map(|x| (x.0, x.1)).collect());
        u.sort();
        (orbit_of[a], u)
    };
    let colours: Vec<_> = s.atoms.iter().map(|&a| colour(a)).collect();
    let candidates: Vec<Vec<usize>> = s
        .atoms
        .iter()
        .enumerate()
        .map(|(k, &a)| {
            if fix_initials && f.term(a).is_leaf() {
                return vec![a];
            }
            s.atoms
                .iter()
                .enumerate()
                .filter(|(j, _)| colours[*j] == colours[k])
                .map(|(_, &b)| b)
                .collect()
        })
        .collect();
    let mut search = Search {
        s: &s,
        group: g,
        orbit_of,
        candidates,
        phi: (0..f.len()).collect(),
        used: vec![false; f.len()],
        nodes: 0,
        exhausted: false,
    };
    let mut pos = vec![usize::MAX; f.len()];
    for (k, &a) in s.atoms.iter().enumerate() {
        pos[a] = k;
    }
    let mut gens: Vec<Perm> = Vec::new();
    let mut order = BigUint::one();
    for i in (0..m).rev() {
        let a = s.atoms[i];
        let mut orbit = orbit_under(a, &gens, f.len());
        let cands = search.candidates[i].clone();
        for gamma in cands {
            // the stabilizer of the earlier atoms cannot move onto them
            if orbit[gamma] || pos[gamma] < i {
                continue;
            }
            // atoms before position i stay fixed, and so does everything
            // built from them alone
            search.phi = (0..f.len()).collect();
            search.used = vec![false; f.len()];
            for &b in &s.atoms[..i] {
                search.used[b] = true;
            }
            search.used[gamma] = true;
            search.phi[a] = gamma;
            let found = if search.propagate(i) { search.dfs(i + 1) } else { None };
            if let Some(p) = found {
                gens.push(p);
                orbit = orbit_under(a, &gens, f.len());
            }
            if search.exhausted {
                break;
            }
        }
        order *= BigUint::from(orbit.iter().filter(|&&x| x).count());
        if search.exhausted {
            break;
        }
    }
    OpSubgroup {
        group: PermGroup::new(f.len(), gens),
        order,
        atoms: m,
        complete: !search.exhausted,
    }
}

fn orbit_under(x: usize, gens: &[Perm], degree: usize) -> Vec<bool> {
    let mut seen = vec![false; degree];
    seen[x] = true;
    let mut stack = vec![x];
    while let Some(y) = stack.pop() {
        for g in gens {
            let z = g.apply(y);
            if !seen[z] {
                seen[z] = true;
                stack.push(z);
            }
        }
    }
    seen
}
