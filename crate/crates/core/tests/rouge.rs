mod common;

use common::{brute_force_lcs, f_measure, random_tokens, words};
use gamsum::rouge::{lcs_length, rouge_all, rouge_l, rouge_n, tokenize};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn cat_sat_cat_ran() {
    let r = rouge_all(&[words("the cat sat")], &[words("the cat ran")]);
    assert!((r.rouge_1.f1 - 2.0 / 3.0).abs() < 1e-15);
    assert!((r.rouge_2.f1 - 0.5).abs() < 1e-15);
    assert!((r.rouge_l.f1 - 2.0 / 3.0).abs() < 1e-15);
}

#[test]
fn clipped_unigram_counts() {
    // "the" appears 3 times in the candidate but twice in the reference
    let r = rouge_n(&[words("the the the cat")], &[words("the cat on the mat")], 1);
    assert_eq!(r.precision, 3.0 / 4.0);
    assert_eq!(r.recall, 3.0 / 5.0);
}

#[test]
fn bigrams_do_not_cross_sentences() {
    let r = rouge_n(&[words("a b"), words("c d")], &[words("b c")], 2);
    assert_eq!(r.f1, 0.0);
}

#[test]
fn union_lcs_textbook_case() {
    let reference = [words("w1 w2 w3 w4 w5")];
    let candidate = [words("w1 w2 w6 w7 w8"), words("w1 w3 w8 w9 w5")];
    let r = rouge_l(&candidate, &reference);
    assert_eq!(r.recall, 4.0 / 5.0);
    assert_eq!(r.precision, 4.0 / 10.0);
}

#[test]
fn lcs_against_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..300 {
        let a = random_tokens(&mut rng, 10, 4);
        let b = random_tokens(&mut rng, 10, 4);
        let want = brute_force_lcs(&a, &b);
        assert_eq!(lcs_length(&a, &b), want);
        let score = rouge_l(std::slice::from_ref(&a), std::slice::from_ref(&b));
        assert_eq!(score.f1, f_measure(want, a.len(), b.len()));
    }
}

#[test]
fn tokenizer_lowercases_and_splits() {
    assert_eq!(tokenize("Rates rose 3.5%, sharply!", false), vec!["rates", "rose", "3", "5", "sharply"]);
    assert_eq!(tokenize("Rates rose", true), vec!["rate", "rose"]);
}

fn token_lists() -> impl Strategy<Value = Vec<Vec<String>>> {
    prop::collection::vec(prop::collection::vec((0..5u8).prop_map(|t| format!("w{t}")), 0..8), 0..4)
}

proptest! {
    #[test]
    fn f_measures_are_symmetric(a in token_lists(), b in token_lists()) {
        let ab = rouge_all(&a, &b);
        let ba = rouge_all(&b, &a);
        prop_assert_eq!(ab.rouge_1.f1, ba.rouge_1.f1);
        prop_assert_eq!(ab.rouge_2.f1, ba.rouge_2.f1);
        prop_assert_eq!(ab.rouge_1.precision, ba.rouge_1.recall);
        for s in [ab.rouge_1, ab.rouge_2, ab.rouge_l] {
            prop_assert!((0.0..=1.0).contains(&s.precision) && (0.0..=1.0).contains(&s.recall));
        }
    }

    #[test]
    fn adding_a_candidate_sentence_never_lowers_recall(a in token_lists(), extra in token_lists(), b in token_lists()) {
        let mut more = a.clone();
        more.extend(extra);
        for n in [1, 2] {
            prop_assert!(rouge_n(&more, &b, n).recall >= rouge_n(&a, &b, n).recall);
        }
    }

    #[test]
    fn identical_input_scores_one(a in token_lists()) {
        prop_assume!(a.iter().any(|s| s.len() >= 2));
        let r = rouge_all(&a, &a);
        prop_assert_eq!(r.rouge_1.f1, 1.0);
        prop_assert_eq!(r.rouge_2.f1, 1.0);
        prop_assert_eq!(r.rouge_l.f1, 1.0);
    }
}
