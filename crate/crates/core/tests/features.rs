use gamsum::corpus::{load_corpus, RawDocument};
use gamsum::features::{extract_features, DocumentFeatureContext, FeatureVector};
use gamsum::preprocess::{preprocess_document, Document};
use proptest::prelude::*;

const GOLDEN: &str = include_str!("data/golden_features_news-001.tsv");

fn doc_from_sentences(sentences: &[String]) -> Document {
    preprocess_document(&RawDocument {
        id: "p".into(),
        body: sentences.join(" "),
        reference: vec!["Reference text.".into()],
        labels: None,
    })
    .unwrap()
}

#[test]
fn golden_matrix_for_fixed_document() {
    let raw = load_corpus(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/mini_corpus.jsonl")).unwrap();
    let doc = preprocess_document(raw.iter().find(|d| d.id == "news-001").unwrap()).unwrap();
    let rows = extract_features(&doc);
    let golden: Vec<Vec<f64>> = GOLDEN
        .lines()
        .skip(1)
        .map(|l| l.split('\t').skip(1).map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), golden.len());
    for (i, (row, want)) in rows.iter().zip(&golden).enumerate() {
        for j in 0..6 {
            assert!((row.0[j] - want[j]).abs() < 1e-12, "sentence {i} x{}: {} vs {}", j + 1, row.0[j], want[j]);
        }
        assert_eq!(doc.sentences[i].term_count(), want[6] as usize);
    }
}

#[test]
fn tf_isf_hand_example() {
    // content stems [cat sat mat] and [cat sat]
    let doc = doc_from_sentences(&["Cat sat mat.".into(), "Cat sat.".into()]);
    let ctx = DocumentFeatureContext::build(&doc);
    assert!((ctx.raw_tf_isf[0] - 2f64.ln()).abs() < 1e-15);
    assert_eq!(ctx.raw_tf_isf[1], 0.0);
    let rows = extract_features(&doc);
    assert_eq!((rows[0].0[0], rows[1].0[0]), (1.0, 0.0));
}

#[test]
fn similarity_hand_cosines() {
    // stems: [appl banana] [appl cherri] [banana banana]
    let doc = doc_from_sentences(&["Apple banana.".into(), "Apple cherry.".into(), "Banana banana.".into()]);
    let ctx = DocumentFeatureContext::build(&doc);
    let h = 0.5;
    let r = 1.0 / 2f64.sqrt();
    assert!((ctx.cosine[0][1] - h).abs() < 1e-12);
    assert!((ctx.cosine[0][2] - r).abs() < 1e-12);
    assert_eq!(ctx.cosine[1][2], 0.0);
    let sums = [h + r, h, r];
    let max = sums[0];
    let rows = extract_features(&doc);
    for i in 0..3 {
        assert!((rows[i].0[5] - sums[i] / max).abs() < 1e-12);
    }
}

const WORDS: &[&str] = &[
    "market", "price", "rose", "the", "of", "city", "council", "vote", "storm", "team", "won", "and", "plan",
    "Paris", "Lyon", "Maria", "42", "3.5%", "1,200", "report", "said", "new", "a", "school",
];

fn sentence() -> impl Strategy<Value = String> {
    prop::collection::vec(0..WORDS.len(), 1..12).prop_map(|idx| {
        let mut words: Vec<String> = idx.iter().map(|&i| WORDS[i].to_string()).collect();
        let first = &mut words[0];
        if let Some(c) = first.chars().next() {
            if c.is_ascii_digit() {
                words.insert(0, "Then".into());
            } else {
                *first = c.to_uppercase().chain(first.chars().skip(1)).collect();
            }
        }
        format!("{}.", words.join(" "))
    })
}

fn check_ranges(rows: &[FeatureVector]) {
    for r in rows {
        for &v in &r.0 {
            assert!(v.is_finite() && (0.0..=1.0).contains(&v), "{v}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ranges_normalization_and_position(sents in prop::collection::vec(sentence(), 1..10)) {
        let doc = doc_from_sentences(&sents);
        let rows = extract_features(&doc);
        prop_assert_eq!(rows.len(), doc.len());
        check_ranges(&rows);
        for j in [0usize, 2, 5] {
            let max = rows.iter().map(|r| r.0[j]).fold(0.0, f64::max);
            prop_assert!(max == 0.0 || max == 1.0);
        }
        prop_assert_eq!(rows.iter().map(|r| r.0[2]).fold(0.0, f64::max), 1.0);
        for w in rows.windows(2) {
            prop_assert!(w[0].0[1] < w[1].0[1]);
        }
        let ctx = DocumentFeatureContext::build(&doc);
        for i in 0..doc.len() {
            for j in 0..doc.len() {
                prop_assert!((ctx.cosine[i][j] - ctx.cosine[j][i]).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn permutation_covariance(
        sents in prop::collection::vec(sentence(), 2..9),
        perm_seed in any::<u64>(),
    ) {
        let doc = doc_from_sentences(&sents);
        prop_assume!(doc.len() == sents.len());
        let mut order: Vec<usize> = (0..sents.len()).collect();
        let mut s = perm_seed;
        for i in (1..order.len()).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(i, (s >> 33) as usize % (i + 1));
        }
        let permuted: Vec<String> = order.iter().map(|&k| sents[k].clone()).collect();
        let a = extract_features(&doc);
        let b = extract_features(&doc_from_sentences(&permuted));
        for (new, &old) in order.iter().enumerate() {
            for j in [0usize, 2, 3, 4, 5] {
                prop_assert!((b[new].0[j] - a[old].0[j]).abs() < 1e-12, "x{} {} vs {}", j + 1, b[new].0[j], a[old].0[j]);
            }
        }
    }
}
