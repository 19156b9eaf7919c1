use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use super::fragment::{Fragment, PartitionBuilder, PartitionConfig};
use super::partition::Partition;
use super::perm::{Perm, PermGroup};
use crate::universes::Universe;

/// All permutations fixing every block setwise, generated by the adjacent
/// transpositions inside each block.
pub fn full_stabilizer(p: &Partition) -> PermGroup {
    let n = p.len();
    let gens = p
        .blocks()
        .iter()
        .flat_map(|b| b.windows(2).map(|w| Perm::transposition(n, w[0], w[1])).collect::<Vec<_>>())
        .collect();
    PermGroup::new(n, gens)
}

/// `∏ |block|!`, computed directly.
pub fn stabilizer_order(p: &Partition) -> BigUint {
    p.blocks().iter().fold(BigUint::one(), |acc, b| {
        (1..=b.len()).fold(acc, |a, k| a * BigUint::from(k))
    })
}

/// Orbits of the group, by union-find over generator images.
pub fn orbit_partition(g: &PermGroup) -> Partition {
    Partition::from_keys(g.orbit_roots())
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }
}

/// One sampled subgroup and its closure `H_{Alg_H}`.
#[derive(Debug, Clone, Serialize)]
pub struct SubgroupSample {
    pub kind: &'static str,
    pub generators: Vec<Vec<Vec<usize>>>,
    pub order: String,
    pub closure_order: String,
    pub contained: bool,
    /// `[H_{Alg_H} : H]`.
    pub index: String,
}

#[derive(Debug, Clone)]
pub struct GaloisConfig {
    pub universes: Vec<Universe>,
    pub partitions: PartitionConfig,
    pub samples: usize,
    pub seed: u64,
}

impl Default for GaloisConfig {
    fn default() -> Self {
        GaloisConfig {
            universes: Universe::ALL.to_vec(),
            partitions: PartitionConfig::default(),
            samples: 24,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GaloisReport {
    pub fragment: Value,
    /// Blocks of global term indices.
    pub partitions: BTreeMap<String, Vec<Vec<usize>>>,
    pub groups: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
    pub subgroups: Vec<SubgroupSample>,
    pub warnings: Vec<String>,
    /// How the `Func` partition was computed.
    pub semantic: String,
}

impl GaloisReport {
    /// True when no hard check failed. Closure defects are only warnings.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }
}

/// Functions are compared by their value tables, so two descriptions that
/// differ only on larger inputs share a block.
fn semantic_basis(f: &Fragment) -> String {
    format!("fingerprint-based: value tables on inputs below {}", f.params().grid)
}

fn group_json(g: &PermGroup) -> Value {
    serde_json::to_value(g).expect("groups serialize")
}

/// Pairs `(u, u')` with `u ⊑ u'` among the given universes, excluding
/// `u = u'`.
fn comparable_pairs(us: &[Universe]) -> Vec<(Universe, Universe)> {
    let mut out = Vec::new();
    for &a in us {
        for &b in us {
            if a != b && a.leq(b) {
                out.push((a, b));
            }
        }
    }
    out
}

/// Covering pairs of the lattice restricted to `us`.
pub fn induced_covers(us: &[Universe]) -> Vec<(Universe, Universe)> {
    comparable_pairs(us)
        .into_iter()
        .filter(|&(a, b)| !us.iter().any(|&c| c != a && c != b && a.leq(c) && c.leq(b)))
        .collect()
}

fn sample_subgroups(
    semantic: &Partition,
    n: usize,
    count: usize,
    seed: u64,
) -> Vec<(&'static str, PermGroup)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let blocks: Vec<Vec<usize>> = semantic.blocks().into_iter().filter(|b| b.len() >= 2).collect();
    let big: Vec<&Vec<usize>> = blocks.iter().filter(|b| b.len() >= 3).collect();
    let mut out = Vec::new();
    if blocks.is_empty() {
        return out;
    }
    let kinds = ["transposition", "3-cycle", "cross-block", "random", "full-stabilizer"];
    let mut k = 0;
    while out.len() < count {
        let kind = kinds[k % kinds.len()];
        k += 1;
        let g = match kind {
            "transposition" => {
                let b = blocks.choose(&mut rng).expect("nonempty");
                let pick: Vec<usize> = b.choose_multiple(&mut rng, 2).copied().collect();
                PermGroup::new(n, vec![Perm::transposition(n, pick[0], pick[1])])
            }
            "3-cycle" => {
                let Some(b) = big.choose(&mut rng) else { continue };
                let pick: Vec<usize> = b.choose_multiple(&mut rng, 3).copied().collect();
                PermGroup::new(n, vec![Perm::from_cycles(n, &[pick])])
            }
            "cross-block" => {
                if blocks.len() < 2 {
                    continue;
                }
                let two: Vec<&Vec<usize>> = blocks.choose_multiple(&mut rng, 2).collect();
                let c: Vec<Vec<usize>> = two
                    .iter()
                    .map(|b| b.choose_multiple(&mut rng, 2).copied().collect())
                    .collect();
                PermGroup::new(n, vec![Perm::from_cycles(n, &c)])
            }
            "random" => {
                let gens = (0..2)
                    .map(|_| {
                        let b = blocks.choose(&mut rng).expect("nonempty");
                        let mut img = b.clone();
                        img.shuffle(&mut rng);
                        let mut images: Vec<usize> = (0..n).collect();
                        for (x, y) in b.iter().zip(&img) {
                            images[*x] = *y;
                        }
                        Perm::from_images(images).expect("bijection")
                    })
                    .collect();
                PermGroup::new(n, gens)
            }
            _ => {
                // stabilizer of a random refinement of the semantic partition
                let keys: Vec<(usize, bool)> = (0..n)
                    .map(|x| (semantic.label(x), rng.gen_bool(0.5)))
                    .collect();
                full_stabilizer(&Partition::from_keys(keys))
            }
        };
        out.push((kind, g));
    }
    out
}

/// Checks the correspondence between universe partitions and stabilizer
/// subgroups on a fragment.
///
/// Hard checks: every universe partition refines the semantic one;
/// `orbit_partition(full_stabilizer(P)) = P`; the stabilizer order matches
/// `∏ |block|!`; `u ⊑ u'` gives nested partitions and nested stabilizers;
/// every sampled `H` lies in the stabilizer of its orbit partition, with
/// equality for full stabilizers; `H ⊆ H'` gives nested orbit partitions.
/// A sampled `H` strictly smaller than its closure is reported as a
/// warning.
pub fn galois_check(f: &Fragment, cfg: &GaloisConfig) -> GaloisReport {
    let mut builder = PartitionBuilder::new(f, cfg.partitions);
    let mut checks = Vec::new();
    let mut warnings = Vec::new();
    let mut partitions = BTreeMap::new();
    let mut groups = BTreeMap::new();
    let mut stabs: BTreeMap<Universe, (Partition, PermGroup)> = BTreeMap::new();
    for &u in &cfg.universes {
        let up = builder.get(u).clone();
        if up.truncated > 0 {
            warnings.push(format!(
                "{u}: {} closure searches hit the count cap; the partition may be too fine",
                up.truncated
            ));
        }
        checks.push(Check::new(format!("refines-semantic-{u}"), up.refines_semantic, ""));
        let p = up.partition;
        let h = full_stabilizer(&p);
        checks.push(Check::new(
            format!("roundtrip-Alg-{u}"),
            orbit_partition(&h) == p,
            "",
        ));
        let direct = stabilizer_order(&p);
        let chain = h.order();
        checks.push(Check::new(
            format!("stabilizer-order-{u}"),
            direct == chain,
            format!("{chain}"),
        ));
        partitions.insert(u.name().to_string(), p.blocks());
        groups.insert(u.name().to_string(), group_json(&h));
        stabs.insert(u, (p, h));
    }
    for (a, b) in comparable_pairs(&cfg.universes) {
        let (pa, ha) = &stabs[&a];
        let (pb, hb) = &stabs[&b];
        let nested = pa.refines(pb) && hb.contains_group(ha);
        let (oa, ob) = (ha.order(), hb.order());
        let divides = !oa.is_zero() && (&ob % &oa).is_zero();
        checks.push(Check::new(
            format!("antitone-{a}-{b}"),
            nested && divides,
            format!("|H_{a}| = {oa}, |H_{b}| = {ob}"),
        ));
    }
    let semantic = builder.semantic().partition.clone();
    let samples = sample_subgroups(&semantic, f.len(), cfg.samples, cfg.seed);
    let mut subgroups = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xa5a5);
    for (k, (kind, h)) in samples.iter().enumerate() {
        let orbits = orbit_partition(h);
        let closure = full_stabilizer(&orbits);
        let contained = closure.contains_group(h);
        let (oh, oc) = (h.order(), closure.order());
        let index = if contained && !oh.is_zero() { &oc / &oh } else { BigUint::zero() };
        checks.push(Check::new(format!("roundtrip-H-{k}-{kind}"), contained, ""));
        if *kind == "full-stabilizer" {
            checks.push(Check::new(
                format!("roundtrip-H-equal-{k}"),
                oh == oc,
                format!("|H| = {oh}, |H_Alg_H| = {oc}"),
            ));
        } else if oh != oc {
            warnings.push(format!(
                "closure defect: sampled {kind} subgroup #{k} has order {oh}, its closure {oc} (index {index})"
            ));
        }
        // a larger group from one extra generator inside a semantic block
        let extra = samples[rng.gen_range(0..samples.len())].1.generators().to_vec();
        let mut gens = h.generators().to_vec();
        gens.extend(extra);
        let bigger = PermGroup::new(f.len(), gens);
        checks.push(Check::new(
            format!("antitone-orbits-{k}"),
            orbits.refines(&orbit_partition(&bigger)),
            "",
        ));
        subgroups.push(SubgroupSample {
            kind,
            generators: h.generators().iter().map(Perm::cycles).collect(),
            order: oh.to_string(),
            closure_order: oc.to_string(),
            contained,
            index: index.to_string(),
        });
    }
    GaloisReport {
        fragment: f.summary(false),
        partitions,
        groups,
        checks,
        subgroups,
        warnings,
        semantic: semantic_basis(f),
    }
}

/// Refinement status of one lattice edge on the fragment.
#[derive(Debug, Clone, Serialize)]
pub struct EdgeReport {
    pub finer: Universe,
    pub coarser: Universe,
    pub refines: bool,
    pub strict: bool,
    /// Two terms identified by the coarser universe but not the finer one.
    pub witness: Option<(String, String)>,
    pub stabilizer_contained: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PartitionSummary {
    pub blocks: usize,
    pub truncated: usize,
    pub refines_semantic: bool,
    pub stabilizer_order: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct LatticeReport {
    pub fragment: Value,
    pub partitions: BTreeMap<Universe, PartitionSummary>,
    /// Lattice edges among the requested universes, finer first.
    pub edges: Vec<EdgeReport>,
    /// Refinement order among the computed partitions (Hasse diagram on
    /// distinct partitions); universes with equal partitions are grouped.
    pub hasse: Vec<(Vec<Universe>, Vec<Universe>)>,
    /// Inclusions between stabilizer subgroups, smaller group first.
    pub group_inclusions: Vec<(Universe, Universe)>,
    /// Pairs of universes whose partitions are incomparable, each with a
    /// pair identified only by the first and a pair identified only by the
    /// second.
    pub incomparable: Vec<Incomparable>,
    /// How the `Func` partition was computed.
    pub semantic: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Incomparable {
    pub left: Universe,
    pub right: Universe,
    pub only_left: (String, String),
    pub only_right: (String, String),
}

/// Refinement diagram of universe partitions and the dual inclusion
/// diagram of their stabilizers.
pub fn lattice_report(f: &Fragment, universes: &[Universe], cfg: PartitionConfig) -> LatticeReport {
    let mut builder = PartitionBuilder::new(f, cfg);
    let mut parts: BTreeMap<Universe, Partition> = BTreeMap::new();
    let mut summaries = BTreeMap::new();
    for &u in universes {
        let up = builder.get(u).clone();
        summaries.insert(
            u,
            PartitionSummary {
                blocks: up.partition.num_blocks(),
                truncated: up.truncated,
                refines_semantic: up.refines_semantic,
                stabilizer_order: stabilizer_order(&up.partition).to_string(),
            },
        );
        parts.insert(u, up.partition);
    }
    let show = |(a, b): (usize, usize)| (f.term(a).to_string(), f.term(b).to_string());
    let edges = induced_covers(universes)
        .into_iter()
        .map(|(a, b)| {
            let (pa, pb) = (&parts[&a], &parts[&b]);
            let refines = pa.refines(pb);
            let witness = pb.split_witness(pa).map(show);
            EdgeReport {
                finer: a,
                coarser: b,
                refines,
                strict: refines && witness.is_some(),
                witness,
                stabilizer_contained: refines && full_stabilizer(pb).contains_group(&full_stabilizer(pa)),
            }
        })
        .collect();
    // group universes with identical partitions
    let mut classes: Vec<(Vec<Universe>, Partition)> = Vec::new();
    for &u in universes {
        match classes.iter_mut().find(|(_, p)| *p == parts[&u]) {
            Some((us, _)) => us.push(u),
            None => classes.push((vec![u], parts[&u].clone())),
        }
    }
    let mut hasse = Vec::new();
    let mut group_inclusions = Vec::new();
    for (i, (ua, pa)) in classes.iter().enumerate() {
        for (j, (ub, pb)) in classes.iter().enumerate() {
            if i == j || !pa.refines(pb) {
                continue;
            }
            let between = classes
                .iter()
                .enumerate()
                .any(|(k, (_, pc))| k != i && k != j && pa.refines(pc) && pc.refines(pb));
            if !between {
                hasse.push((ua.clone(), ub.clone()));
                group_inclusions.push((ua[0], ub[0]));
            }
        }
    }
    let mut incomparable = Vec::new();
    for (ai, &a) in universes.iter().enumerate() {
        for &b in &universes[ai + 1..] {
            let (pa, pb) = (&parts[&a], &parts[&b]);
            if let (Some(x), Some(y)) = (pa.split_witness(pb), pb.split_witness(pa)) {
                incomparable.push(Incomparable {
                    left: a,
                    right: b,
                    only_left: show(x),
                    only_right: show(y),
                });
            }
        }
    }
    LatticeReport {
        fragment: f.summary(false),
        partitions: summaries,
        edges,
        hasse,
        group_inclusions,
        incomparable,
        semantic: semantic_basis(f),
    }
}

impl LatticeReport {
    pub fn to_json(&self) -> Value {
        json!(self)
    }
}
