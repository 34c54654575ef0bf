mod common;

use atc_core::classify::{Flavor, NaiveBayesModel};
use atc_core::features::{vectorize, FeatureVector, Vocabulary, WeightingScheme};
use atc_core::textprep::TokenList;
use common::{library, max_relative_error, oracle, random_tiny_corpus};
use proptest::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;

const X: &str = "س";
const Y: &str = "ص";

fn toks(words: &[&str]) -> TokenList {
    TokenList::new(words.iter().map(|w| w.to_string()).collect()).unwrap()
}

fn names(n: &[&str]) -> Vec<String> {
    n.iter().map(|s| s.to_string()).collect()
}

fn fit(
    flavor: Flavor,
    scheme: WeightingScheme,
    docs: &[(&[&str], &str)],
    classes: &[&str],
) -> (NaiveBayesModel, Vocabulary) {
    let lists: Vec<TokenList> = docs.iter().map(|(d, _)| toks(d)).collect();
    let vocab = Vocabulary::build(&lists).unwrap();
    let vectors: Vec<FeatureVector> = lists.iter().map(|l| vectorize(l, &vocab, scheme)).collect();
    let model = NaiveBayesModel::train(
        flavor,
        &names(classes),
        vectors.iter().zip(docs.iter().map(|(_, l)| *l)),
        &vocab,
    )
    .unwrap();
    (model, vocab)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn log_space_matches_probability_space(seed in any::<u64>()) {
        let corpus = random_tiny_corpus(&mut ChaCha8Rng::seed_from_u64(seed));
        for flavor in [Flavor::Bernoulli, Flavor::Multinomial] {
            for scheme in [WeightingScheme::Binary, WeightingScheme::TermFrequency] {
                let (_, got) = library(&corpus, flavor, scheme);
                for (doc, posteriors) in corpus.test.iter().zip(&got) {
                    let want = oracle(&corpus, flavor, scheme, doc);
                    prop_assert!(max_relative_error(posteriors, &want) <= 1e-10,
                        "{flavor} {scheme}: {posteriors:?} vs {want:?}");
                    prop_assert!((posteriors.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
                }
            }
        }
    }

    #[test]
    fn parameter_tables_are_normalized(seed in any::<u64>()) {
        let corpus = random_tiny_corpus(&mut ChaCha8Rng::seed_from_u64(seed));
        let (mnb, _) = library(&corpus, Flavor::Multinomial, WeightingScheme::TermFrequency);
        let (mbnb, _) = library(&corpus, Flavor::Bernoulli, WeightingScheme::TermFrequency);
        for model in [&mnb, &mbnb] {
            let total: f64 = model.log_prior().iter().map(|p| p.exp()).sum();
            prop_assert!((total - 1.0).abs() <= 1e-9);
        }
        for c in 0..corpus.n_classes {
            let sum: f64 = (0..mnb.vocab_size()).map(|t| mnb.log_term_prob(c, t).exp()).sum();
            prop_assert!((sum - 1.0).abs() <= 1e-9);
            for t in 0..mbnb.vocab_size() {
                let theta = mbnb.log_term_prob(c, t).exp();
                prop_assert!(theta > 0.0 && theta < 1.0);
                prop_assert!((theta + mbnb.log_term_absent(c, t).unwrap().exp() - 1.0).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn bernoulli_ignores_weighting_scheme(seed in any::<u64>()) {
        let corpus = random_tiny_corpus(&mut ChaCha8Rng::seed_from_u64(seed));
        let (from_binary, p_binary) = library(&corpus, Flavor::Bernoulli, WeightingScheme::Binary);
        let (from_tf, p_tf) = library(&corpus, Flavor::Bernoulli, WeightingScheme::TermFrequency);
        prop_assert_eq!(from_binary, from_tf);
        prop_assert_eq!(p_binary, p_tf);
    }

    #[test]
    fn training_is_bit_deterministic(seed in any::<u64>()) {
        let corpus = random_tiny_corpus(&mut ChaCha8Rng::seed_from_u64(seed));
        for flavor in [Flavor::Bernoulli, Flavor::Multinomial] {
            let (a, _) = library(&corpus, flavor, WeightingScheme::TermFrequency);
            let (b, _) = library(&corpus, flavor, WeightingScheme::TermFrequency);
            let bits = |m: &NaiveBayesModel| {
                let mut buf = Vec::new();
                m.write_to(&mut buf).unwrap();
                buf
            };
            prop_assert_eq!(bits(&a), bits(&b));
        }
    }
}

#[test]
fn worked_two_class_example() {
    let docs: [(&[&str], &str); 2] = [(&[X, X], "A"), (&[Y], "B")];
    let (mnb, vocab) = fit(Flavor::Multinomial, WeightingScheme::TermFrequency, &docs, &["A", "B"]);
    let (x, y) = (vocab.get(X).unwrap(), vocab.get(Y).unwrap());
    assert!((mnb.log_term_prob(0, x).exp() - 0.75).abs() <= 1e-12);
    assert!((mnb.log_term_prob(0, y).exp() - 0.25).abs() <= 1e-12);
    assert!((mnb.log_term_prob(1, x).exp() - 1.0 / 3.0).abs() <= 1e-12);
    assert!((mnb.log_term_prob(1, y).exp() - 2.0 / 3.0).abs() <= 1e-12);

    let (mbnb, _) = fit(Flavor::Bernoulli, WeightingScheme::TermFrequency, &docs, &["A", "B"]);
    assert!((mbnb.log_term_prob(0, x).exp() - 2.0 / 3.0).abs() <= 1e-12);
    assert!((mbnb.log_term_prob(0, y).exp() - 1.0 / 3.0).abs() <= 1e-12);

    let p = mnb
        .predict(&vectorize(&toks(&[X]), &vocab, WeightingScheme::TermFrequency))
        .unwrap();
    assert_eq!(p.label, "A");
    assert!((p.posteriors[0] - 0.75 / (0.75 + 1.0 / 3.0)).abs() <= 1e-12);
}

/// Multinomial NB sees counts, so binary and TF inputs can disagree.
///
/// A = {[x x x x x x]}, B = {[x y]}, test [x x x y].
/// TF:     φ(A,x) = 7/8, φ(A,y) = 1/8, φ(B,·) = 1/2 → 3 ln 7/8 + ln 1/8 > 4 ln 1/2 → A
/// binary: φ(A,x) = 2/3, φ(A,y) = 1/3 → ln 2/9 < ln 1/4 → B
#[test]
fn multinomial_count_sensitivity_fixture() {
    let docs: [(&[&str], &str); 2] = [(&[X, X, X, X, X, X], "A"), (&[X, Y], "B")];
    let test = toks(&[X, X, X, Y]);
    let (tf_model, vocab) = fit(Flavor::Multinomial, WeightingScheme::TermFrequency, &docs, &["A", "B"]);
    let (bin_model, _) = fit(Flavor::Multinomial, WeightingScheme::Binary, &docs, &["A", "B"]);
    let tf = tf_model
        .predict(&vectorize(&test, &vocab, WeightingScheme::TermFrequency))
        .unwrap();
    let bin = bin_model
        .predict(&vectorize(&test, &vocab, WeightingScheme::Binary))
        .unwrap();
    assert_eq!(tf.label, "A");
    assert_eq!(bin.label, "B");
}

#[test]
fn duplicating_training_data_keeps_priors() {
    let docs: Vec<(&[&str], &str)> = vec![(&[X, X], "A"), (&[Y], "B"), (&[X, Y, Y], "B")];
    let (once, _) = fit(Flavor::Multinomial, WeightingScheme::TermFrequency, &docs, &["A", "B"]);
    for k in 2..5 {
        let repeated: Vec<_> = docs.iter().cycle().take(docs.len() * k).cloned().collect();
        let (many, vocab) = fit(
            Flavor::Multinomial,
            WeightingScheme::TermFrequency,
            &repeated,
            &["A", "B"],
        );
        for (a, b) in once.log_prior().iter().zip(many.log_prior()) {
            assert!((a - b).abs() <= 1e-15);
        }
        for test in [[X].as_slice(), &[Y], &[X, Y], &[X, X, Y]] {
            let v = vectorize(&toks(test), &vocab, WeightingScheme::TermFrequency);
            assert_eq!(once.predict(&v).unwrap().label, many.predict(&v).unwrap().label);
        }
    }
}

/// Laplace smoothing makes φ depend on absolute counts, so duplicating
/// every training document is not label-preserving in general.
///
/// B = {[x x x], [x y]}, A = {[x x x y y]}, test [x y y]:
/// once, B wins; duplicated, the pseudo-counts weigh less and A wins.
#[test]
fn duplication_can_flip_a_label_under_smoothing() {
    let docs: Vec<(&[&str], &str)> = vec![(&[X, X, X], "B"), (&[X, X, X, Y, Y], "A"), (&[X, Y], "B")];
    let doubled: Vec<_> = docs.iter().chain(docs.iter()).cloned().collect();
    let (once, vocab) = fit(Flavor::Multinomial, WeightingScheme::TermFrequency, &docs, &["A", "B"]);
    let (twice, _) = fit(
        Flavor::Multinomial,
        WeightingScheme::TermFrequency,
        &doubled,
        &["A", "B"],
    );
    let v = vectorize(&toks(&[X, Y, Y]), &vocab, WeightingScheme::TermFrequency);
    assert_eq!(once.predict(&v).unwrap().label, "B");
    assert_eq!(twice.predict(&v).unwrap().label, "A");
}

#[test]
fn bernoulli_absence_is_full_vocabulary() {
    // the present-term shortcut equals the explicit sum over every term
    let docs: [(&[&str], &str); 3] = [(&[X], "A"), (&[X, Y, "ع"], "B"), (&["ع"], "B")];
    let (m, vocab) = fit(Flavor::Bernoulli, WeightingScheme::Binary, &docs, &["A", "B"]);
    let doc = vectorize(&toks(&[Y]), &vocab, WeightingScheme::Binary);
    let scores = m.scores(&doc).unwrap();
    for (c, score) in scores.iter().enumerate() {
        let explicit: f64 = m.log_prior()[c]
            + (0..vocab.len())
                .map(|t| {
                    if doc.get(t) > 0 {
                        m.log_term_prob(c, t)
                    } else {
                        m.log_term_absent(c, t).unwrap()
                    }
                })
                .sum::<f64>();
        assert!((score - explicit).abs() <= 1e-12);
    }
}

#[test]
fn concurrent_prediction_from_shared_model() {
    let docs: [(&[&str], &str); 2] = [(&[X, X], "A"), (&[Y], "B")];
    let (m, vocab) = fit(Flavor::Multinomial, WeightingScheme::TermFrequency, &docs, &["A", "B"]);
    let v = vectorize(&toks(&[X, Y, Y]), &vocab, WeightingScheme::TermFrequency);
    let expected = m.predict(&v).unwrap();
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..8).map(|_| s.spawn(|| m.predict(&v).unwrap())).collect();
        for h in handles {
            assert_eq!(h.join().unwrap(), expected);
        }
    });
}

#[test]
fn model_file_round_trip_on_disk() {
    let docs: [(&[&str], &str); 3] = [(&[X, X], "A"), (&[Y], "B b"), (&[X, Y], "B b")];
    let dir = tempfile::tempdir().unwrap();
    for flavor in [Flavor::Bernoulli, Flavor::Multinomial] {
        let (m, vocab) = fit(flavor, WeightingScheme::TermFrequency, &docs, &["A", "B b"]);
        let path = dir.path().join(format!("{flavor}.model"));
        m.save(&path).unwrap();
        let back = NaiveBayesModel::load(&path).unwrap();
        back.check_vocabulary(&vocab).unwrap();
        assert_eq!(back.class_names(), ["A", "B b"]);
        for test in [[X].as_slice(), &[Y, Y], &[]] {
            let v = vectorize(&toks(test), &vocab, WeightingScheme::TermFrequency);
            assert_eq!(m.predict(&v).unwrap(), back.predict(&v).unwrap());
        }
    }
}
