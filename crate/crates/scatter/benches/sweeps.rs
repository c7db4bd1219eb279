use std::cmp::Ordering;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use scatter::automata::{deconvolve, Word};
use scatter::constructions::{build_k, first_disagreement, predicted_cmp, KBundle, KCoord, Polynomial};
use scatter::par;

fn bundle() -> KBundle {
    build_k(&Polynomial::parse("x", 1).unwrap(), &Polynomial::parse("2", 1).unwrap()).unwrap()
}

fn tracks(kb: &KBundle, c: &KCoord) -> (Word, Word) {
    let t = deconvolve(&kb.conv, &kb.encode(c)).unwrap();
    (t[0].clone(), t[1].clone())
}

/// Row-major pair sweep on one thread, the reference for `first_disagreement`.
fn seq_disagreement<T>(items: &[T], a: impl Fn(&T, &T) -> Ordering, p: impl Fn(&T, &T) -> Ordering) -> Option<(usize, usize)> {
    par::seq::find_first(items.len(), |i| items.iter().position(|t| a(&items[i], t) != p(&items[i], t)))
}

fn pair_sweep(c: &mut Criterion) {
    let kb = bundle();
    let mut g = c.benchmark_group("k_order_sweep");
    g.sample_size(10);
    for len in [10, 12] {
        let ms = kb.members_up_to(len);
        let tr: Vec<_> = ms.iter().map(|m| tracks(&kb, m)).collect();
        let idx: Vec<usize> = (0..ms.len()).collect();
        let actual = |&i: &usize, &j: &usize| tr[i].cmp(&tr[j]);
        let predicted = |&i: &usize, &j: &usize| predicted_cmp(&ms[i], &ms[j]);
        g.bench_with_input(BenchmarkId::new("par", ms.len()), &idx, |b, idx| {
            b.iter(|| assert!(first_disagreement(idx, actual, predicted).is_none()))
        });
        g.bench_with_input(BenchmarkId::new("seq", ms.len()), &idx, |b, idx| {
            b.iter(|| assert!(seq_disagreement(idx, actual, predicted).is_none()))
        });
    }
    g.finish();
}

fn encode_map(c: &mut Criterion) {
    let kb = bundle();
    let ms = kb.members_up_to(14);
    let mut g = c.benchmark_group("k_encode");
    g.sample_size(10);
    g.bench_function(BenchmarkId::new("par", ms.len()), |b| b.iter(|| par::map(&ms, |m| kb.language.accepts(&kb.encode(m)))));
    g.bench_function(BenchmarkId::new("seq", ms.len()), |b| {
        b.iter(|| par::seq::map(&ms, |m| kb.language.accepts(&kb.encode(m))))
    });
    g.finish();
}

criterion_group!(benches, pair_sweep, encode_map);
criterion_main!(benches);
