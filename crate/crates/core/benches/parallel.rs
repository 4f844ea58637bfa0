use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use topoffset::embedding::{make_simplicial_embedding, Target};
use topoffset::expansion::{
    classify_tet_conservative, classify_tet_greedy, DistanceField, InputIndex,
};
use topoffset::geom::{Point3, Sign};
use topoffset::insertion::insert_topological_offset;
use topoffset::io::{synth_grid_embedding, Shape};
use topoffset::mesh::TetMesh;
use topoffset::optimize::triangle_quality;
use topoffset::par;

fn fixture(n: usize) -> (TetMesh, InputIndex) {
    let mut m = synth_grid_embedding(n, Shape::Octahedron).unwrap();
    make_simplicial_embedding(&mut m, Target::Input).unwrap();
    insert_topological_offset(&mut m).unwrap();
    let ii = InputIndex::build(&m).unwrap();
    (m, ii)
}

fn bench(c: &mut Criterion) {
    let (m, ii) = fixture(16);
    let field = DistanceField::uniform(1.0);
    let tets: Vec<[Point3; 4]> = m.tet_ids().map(|t| m.tet_points(t)).collect();
    let ids: Vec<[u32; 4]> = m.tet_ids().map(|t| m.tet(t)).collect();
    let tris: Vec<[Point3; 3]> = m
        .offset_faces(1)
        .iter()
        .map(|f| f.map(|v| m.position(v)))
        .collect();

    let mut g = c.benchmark_group("classify_greedy");
    g.sample_size(10);
    g.bench_function(BenchmarkId::new("parallel", tets.len()), |b| {
        b.iter(|| par::map(&tets, |t| classify_tet_greedy(t, &ii, &field)))
    });
    g.bench_function(BenchmarkId::new("sequential", tets.len()), |b| {
        b.iter(|| par::map_seq(&tets, |t| classify_tet_greedy(t, &ii, &field)))
    });
    g.finish();

    let mut g = c.benchmark_group("classify_conservative");
    g.sample_size(10);
    g.bench_function(BenchmarkId::new("parallel", tets.len()), |b| {
        b.iter(|| par::map(&tets, |t| classify_tet_conservative(t, &ii, &field)))
    });
    g.bench_function(BenchmarkId::new("sequential", tets.len()), |b| {
        b.iter(|| par::map_seq(&tets, |t| classify_tet_conservative(t, &ii, &field)))
    });
    g.finish();

    let mut g = c.benchmark_group("triangle_quality");
    g.bench_function(BenchmarkId::new("parallel", tris.len()), |b| {
        b.iter(|| par::map(&tris, |t| triangle_quality(t, &ii, &field)))
    });
    g.bench_function(BenchmarkId::new("sequential", tris.len()), |b| {
        b.iter(|| par::map_seq(&tris, |t| triangle_quality(t, &ii, &field)))
    });
    g.finish();

    let mut g = c.benchmark_group("orientation");
    g.bench_function(BenchmarkId::new("parallel", ids.len()), |b| {
        b.iter(|| par::map(&ids, |&t| m.orient_of(t) == Sign::Positive))
    });
    g.bench_function(BenchmarkId::new("sequential", ids.len()), |b| {
        b.iter(|| par::map_seq(&ids, |&t| m.orient_of(t) == Sign::Positive))
    });
    g.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
