use criterion::{black_box, criterion_group, criterion_main, Criterion};
use orthoplex::analysis::logical_basis;
use orthoplex::{build_dislocation, syndrome, Cell, LatticeShape, OrthoplexModel, PauliOp};

fn models(c: &mut Criterion) {
    let shape3 = LatticeShape::periodic(&[6, 6, 4]).unwrap();
    c.bench_function("build 3d 6x6x4", |b| {
        b.iter(|| OrthoplexModel::build(black_box(shape3.clone())).unwrap())
    });
    let shape4 = LatticeShape::periodic(&[3, 3, 3, 3]).unwrap();
    c.bench_function("build 4d 3^4", |b| b.iter(|| OrthoplexModel::build(black_box(shape4.clone())).unwrap()));

    let model = OrthoplexModel::build(shape3).unwrap();
    c.bench_function("params 3d 6x6x4", |b| b.iter(|| black_box(model.code.params())));
    c.bench_function("logicals 3d 6x6x4", |b| b.iter(|| black_box(logical_basis(&model.code))));
    let op = PauliOp::x_on(&model, [&Cell::new(vec![3, 2, 2])]).unwrap();
    c.bench_function("syndrome single X", |b| b.iter(|| syndrome(&model, black_box(&op)).unwrap()));

    let open = LatticeShape::open(&[12, 12, 12]).unwrap();
    c.bench_function("dislocation 12^3", |b| b.iter(|| build_dislocation(black_box(&open)).unwrap()));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = models
}
criterion_main!(benches);
