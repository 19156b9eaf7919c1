use criterion::{black_box, criterion_group, criterion_main, Criterion};
use prdesc_core::galois::{
    enumerate_fragment, full_stabilizer, op_preserving_subgroup, semantic_partition, universe_partition,
    FragmentParams, PartitionConfig, Perm, PermGroup,
};
use prdesc_core::{Budget, Op, Universe};

fn bench_enumeration(c: &mut Criterion) {
    c.bench_function("enumerate/default", |b| {
        b.iter(|| enumerate_fragment(black_box(FragmentParams::default())).unwrap().len())
    });
    let f = enumerate_fragment(FragmentParams::default()).unwrap();
    c.bench_function("partition/semantic", |b| {
        b.iter(|| semantic_partition(&f, Budget::default()).partition.num_blocks())
    });
    c.bench_function("partition/Cat", |b| {
        b.iter(|| universe_partition(&f, Universe::Cat, PartitionConfig::default()).partition.num_blocks())
    });
}

fn bench_groups(c: &mut Criterion) {
    let n = 40;
    let gens: Vec<Perm> = (0..n - 1).map(|i| Perm::transposition(n, i, i + 1)).collect();
    c.bench_function("schreier-sims/sym-40", |b| b.iter(|| PermGroup::new(n, gens.clone()).order()));
    let f = enumerate_fragment(FragmentParams::default()).unwrap();
    let sem = semantic_partition(&f, Budget::default()).partition;
    c.bench_function("schreier-sims/semantic-stabilizer", |b| {
        b.iter(|| full_stabilizer(black_box(&sem)).order())
    });
    let g = full_stabilizer(&sem);
    c.bench_function("preserved/comp-rec", |b| {
        b.iter(|| op_preserving_subgroup(&g, &f, &[Op::Comp, Op::Rec], false).order)
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = bench_enumeration, bench_groups
}
criterion_main!(benches);
