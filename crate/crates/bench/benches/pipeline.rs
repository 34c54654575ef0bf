use std::hint::black_box;

use atc_bench::Fixture;
use atc_core::{preprocess, Flavor, NaiveBayesModel};
use criterion::{criterion_group, criterion_main, Criterion};

fn bench_preprocess(c: &mut Criterion) {
    let f = Fixture::load();
    c.bench_function("preprocess mini corpus", |b| {
        b.iter(|| {
            for doc in f.corpus.documents() {
                black_box(preprocess(black_box(&doc.text), &f.pipeline));
            }
        })
    });
}

fn bench_train_predict(c: &mut Criterion) {
    let f = Fixture::load();
    let examples = || f.train.iter().map(|(v, l)| (v, l.as_str()));
    for flavor in [Flavor::Multinomial, Flavor::Bernoulli] {
        c.bench_function(&format!("train {flavor}"), |b| {
            b.iter(|| NaiveBayesModel::train(flavor, f.corpus.categories(), examples(), &f.vocab).unwrap())
        });
        let model = NaiveBayesModel::train(flavor, f.corpus.categories(), examples(), &f.vocab).unwrap();
        c.bench_function(&format!("predict {flavor}"), |b| {
            b.iter(|| {
                for v in &f.test {
                    black_box(model.predict(black_box(v)).unwrap());
                }
            })
        });
    }
}

criterion_group!(benches, bench_preprocess, bench_train_predict);
criterion_main!(benches);
