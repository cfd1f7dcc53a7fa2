mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use udp_core::baselines::{adjacency_parse, baseline_parse, naive_pos_tag, Side};
use udp_core::conllu::{read_conllu_str, write_conllu_string};
use udp_core::decoder::decode;
use udp_core::direction::estimate_adp_direction;
use udp_core::eval::{error_propagation, uas};
use udp_core::ranker::{
    build_graph_from_tags, pagerank, personalization_vector, tie_tolerance, RankMode,
};
use udp_core::{
    validate_tree, Direction, DirectionPolicy, PageRankConfig, Ranker, RuleSet, Sentence, Token,
    Upos,
};

use common::*;

fn tag() -> impl Strategy<Value = Upos> {
    prop::sample::select(Upos::UNIVERSAL.to_vec())
}

fn tags(max: usize) -> impl Strategy<Value = Vec<Upos>> {
    prop::collection::vec(tag(), 1..=max)
}

fn form() -> impl Strategy<Value = String> {
    "[A-Za-z0-9'.,\\-]{1,8}"
}

fn english() -> DirectionPolicy {
    DirectionPolicy::universal().with_adp(Direction::HeadOnRight)
}

proptest! {
    #[test]
    fn conllu_roundtrip(words in prop::collection::vec((form(), tag()), 1..25), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = words.len();
        let mut sentence = Sentence::from_tagged(words.iter().map(|(f, t)| (f.as_str(), *t)));
        for t in &mut sentence.tokens {
            t.pred_head = Some(rng.gen_range(0..=n));
        }
        sentence.set_meta("sent_id", format!("s{seed}"));
        let text = write_conllu_string(std::slice::from_ref(&sentence)).unwrap();
        let back = read_conllu_str(&text).unwrap();
        prop_assert_eq!(back.len(), 1);
        let back = &back[0];
        prop_assert_eq!(back.len(), n);
        for (a, b) in sentence.tokens.iter().zip(&back.tokens) {
            prop_assert_eq!(&a.form, &b.form);
            prop_assert_eq!(a.upos, b.upos);
            prop_assert_eq!(a.pred_head, b.gold_head);
        }
        prop_assert_eq!(back.id(), sentence.id());
        // Writing again is byte-identical.
        let mut again = back.clone();
        again.set_predicted(&back.gold_tree().unwrap());
        prop_assert_eq!(write_conllu_string(&[again]).unwrap(), text);
    }

    #[test]
    fn scores_are_a_distribution(tags in tags(40)) {
        let ranked = Ranker::new(RuleSet::universal(), RankMode::PageRank).rank_tags(&tags).unwrap();
        let scores = ranked.scores.unwrap();
        prop_assert!(scores.iter().all(|&s| s >= 0.0));
        prop_assert!((scores.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn ranking_matches_oracle(tags in tags(15)) {
        let rules = RuleSet::universal();
        let ranked = Ranker::new(rules.clone(), RankMode::PageRank).rank_tags(&tags).unwrap();
        let p = oracle_personalization(&tags, 5.0);
        let oracle = dense_pagerank(&tags, rules.pairs(), &p, 0.05);
        let scores = ranked.scores.clone().unwrap();
        for (a, b) in scores.iter().zip(&oracle) {
            prop_assert!((a - b).abs() < 1e-8);
        }
        prop_assert_eq!(ranked.content, oracle_ranking(&tags, &oracle, tie_tolerance::<f64>()));
    }

    #[test]
    fn rank_partitions_tokens(tags in tags(40), nopr in any::<bool>()) {
        let mode = if nopr { RankMode::ReadingOrder } else { RankMode::PageRank };
        let ranked = Ranker::new(RuleSet::universal(), mode).rank_tags(&tags).unwrap();
        let mut all: Vec<usize> = ranked.content.iter().chain(&ranked.function).copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, (1..=tags.len()).collect::<Vec<_>>());
        prop_assert!(ranked.function.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn personalization_is_monotone(tags in tags(15), node in any::<prop::sample::Index>(), base in 0.5f64..4.0, bump in 0.1f64..6.0) {
        let rules = RuleSet::universal();
        let graph = build_graph_from_tags(&tags, &rules);
        let v = node.index(tags.len()) + 1;
        let cfg = PageRankConfig::default();
        let low = pagerank(&graph, &personalization_vector(tags.len(), v, base), &cfg).unwrap();
        let high = pagerank(&graph, &personalization_vector(tags.len(), v, base + bump), &cfg).unwrap();
        prop_assert!(high.scores[v - 1] >= low.scores[v - 1] - 1e-12);
    }

    #[test]
    fn decoded_trees_are_valid(tags in tags(40), left in any::<bool>(), nopr in any::<bool>()) {
        let rules = RuleSet::universal();
        let policy = DirectionPolicy::universal()
            .with_adp(if left { Direction::HeadOnLeft } else { Direction::HeadOnRight });
        let mode = if nopr { RankMode::ReadingOrder } else { RankMode::PageRank };
        let ranked = Ranker::new(rules.clone(), mode).rank_tags(&tags).unwrap();
        let tree = decode(&ranked, &policy, &rules).unwrap();
        let sentence = Sentence::from_tags(&tags);
        prop_assert_eq!(validate_tree(&sentence, &tree), vec![]);
        prop_assert!(oracle_is_tree(tree.heads()));
    }

    #[test]
    fn content_heads_rank_higher(tags in tags(40)) {
        let rules = RuleSet::universal();
        let ranked = Ranker::new(rules.clone(), RankMode::PageRank).rank_tags(&tags).unwrap();
        let tree = decode(&ranked, &english(), &rules).unwrap();
        for (rank, &c) in ranked.content.iter().enumerate() {
            let head = tree.head(c);
            prop_assert!(head == 0 || ranked.content[..rank].contains(&head));
        }
    }

    #[test]
    fn trees_ignore_word_forms(tags in tags(30), forms in prop::collection::vec(form(), 30)) {
        let rules = RuleSet::universal();
        let a = Sentence::from_tags(&tags);
        let b = Sentence::from_tagged(tags.iter().zip(&forms).map(|(t, f)| (f.as_str(), *t)));
        let ranker = Ranker::new(rules.clone(), RankMode::PageRank);
        let ta = decode(&ranker.rank(&a).unwrap(), &english(), &rules).unwrap();
        let tb = decode(&ranker.rank(&b).unwrap(), &english(), &rules).unwrap();
        prop_assert_eq!(ta, tb);
    }

    #[test]
    fn baselines_single_root(tags in tags(40), left in any::<bool>()) {
        let side = if left { Side::Left } else { Side::Right };
        let sentence = Sentence::from_tags(&tags);
        let bl = baseline_parse(&sentence, &RuleSet::universal(), side);
        prop_assert_eq!(bl.heads().len(), tags.len());
        prop_assert_eq!(bl.tree.root_dependents().len(), 1);
        prop_assert!(bl.heads().iter().enumerate().all(|(i, &h)| h != i + 1 && h <= tags.len()));
        prop_assert_eq!(bl.well_formed, validate_tree(&sentence, &bl.tree).is_empty());

        let adj = adjacency_parse(&sentence, side);
        prop_assert_eq!(adj.tree.root_dependents().len(), 1);
        prop_assert!(oracle_is_tree(adj.heads()));
    }

    #[test]
    fn adp_counts_are_order_independent(corpus in prop::collection::vec(tags(12), 0..20), seed in any::<u64>()) {
        let sentences: Vec<Sentence> = corpus.iter().map(|t| Sentence::from_tags(t)).collect();
        let mut shuffled = sentences.clone();
        use rand::seq::SliceRandom;
        shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let a = estimate_adp_direction(&sentences);
        prop_assert_eq!(a, estimate_adp_direction(&shuffled));
        prop_assert_eq!((a.adp_nominal_count, a.nominal_adp_count), brute_bigrams(&sentences));

        // Reversing every sentence swaps the two kinds of bigram.
        let reversed: Vec<Sentence> = corpus
            .iter()
            .map(|t| Sentence::from_tags(&t.iter().rev().copied().collect::<Vec<_>>()))
            .collect();
        let r = estimate_adp_direction(&reversed);
        prop_assert_eq!((r.adp_nominal_count, r.nominal_adp_count), (a.nominal_adp_count, a.adp_nominal_count));
        if a.adp_nominal_count != a.nominal_adp_count {
            prop_assert_ne!(a.resolved(), r.resolved());
        }
    }

    #[test]
    fn uas_is_bounded_and_permutation_invariant(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gold = random_gold_corpus(&mut rng, 12, &["a", "b", ""]);
        let pred = perturb(&mut rng, &gold, 0.4);
        let report = uas(&gold, &pred).unwrap();
        prop_assert!((0.0..=1.0).contains(&report.uas()));
        prop_assert_eq!(report.per_pos.values().map(|t| t.total).sum::<usize>(), report.token_count());

        let mut order: Vec<usize> = (0..gold.len()).collect();
        use rand::seq::SliceRandom;
        order.shuffle(&mut rng);
        let g2: Vec<Sentence> = order.iter().map(|&i| gold[i].clone()).collect();
        let p2: Vec<Sentence> = order.iter().map(|&i| pred[i].clone()).collect();
        let shuffled = uas(&g2, &p2).unwrap();
        prop_assert_eq!(shuffled.attachment, report.attachment);
        prop_assert_eq!(shuffled.per_pos, report.per_pos);
    }

    #[test]
    fn error_propagation_is_linear(a in 0.0f64..1.0, b in 0.0f64..1.0, c in 0.0f64..0.99, d in 0.0f64..1.0) {
        let at = |x: f64| error_propagation(x, b, c).unwrap();
        let mid = a * 0.5 + d * 0.5;
        prop_assert!((at(mid) - 0.5 * (at(a) + at(d))).abs() < 1e-9);
    }
}

#[test]
fn naive_tagging_matches_frequency_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    // Zipfian draw over 200 forms.
    let weights: Vec<f64> = (1..=200).map(|r| 1.0 / r as f64).collect();
    let total: f64 = weights.iter().sum();
    let draw = |rng: &mut ChaCha8Rng| {
        let mut x = rng.gen::<f64>() * total;
        for (i, w) in weights.iter().enumerate() {
            if x < *w {
                return i;
            }
            x -= w;
        }
        199
    };
    let corpus: Vec<Sentence> = (0..400)
        .map(|_| {
            let len = rng.gen_range(3..15);
            Sentence::from_tokens(
                (0..len).map(|_| Token::new(0, format!("w{:03}", draw(&mut rng)), Upos::X)),
            )
        })
        .collect();

    let mut counts = std::collections::HashMap::<String, usize>::new();
    for t in corpus.iter().flat_map(|s| &s.tokens) {
        *counts.entry(t.form.clone()).or_default() += 1;
    }
    let mut by_freq: Vec<(String, usize)> = counts.into_iter().collect();
    by_freq.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    let top: std::collections::HashSet<String> =
        by_freq.iter().take(100).map(|(f, _)| f.clone()).collect();
    assert!(by_freq.len() > 100);

    let tagged = naive_pos_tag(&corpus);
    for s in &tagged {
        for t in &s.tokens {
            let expected = if top.contains(&t.form) {
                Upos::Function
            } else {
                Upos::Content
            };
            assert_eq!(t.upos, expected, "{}", t.form);
        }
    }
    assert_eq!(tagged, naive_pos_tag(&corpus));
}

#[test]
fn example_connection_and_extremists_tie_without_personalization() {
    let tags = example_tags();
    let graph = build_graph_from_tags(&tags, &RuleSet::universal());
    let run = pagerank(&graph, &[1.0 / 9.0; 9], &PageRankConfig::default()).unwrap();
    assert!((run.scores[5] - run.scores[8]).abs() < 5e-9);
    let order = oracle_ranking(&tags, &run.scores, tie_tolerance::<f64>());
    let conn = order.iter().position(|&p| p == 6).unwrap();
    let ext = order.iter().position(|&p| p == 9).unwrap();
    assert!(conn < ext);
}

#[test]
fn decoding_ten_thousand_long_sentences_is_fast() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let rules = RuleSet::universal();
    let ranker = Ranker::new(rules.clone(), RankMode::PageRank);
    let ranked: Vec<_> = (0..10_000)
        .map(|_| ranker.rank_tags(&random_tags(&mut rng, 40)).unwrap())
        .collect();
    let start = std::time::Instant::now();
    for r in &ranked {
        decode(r, &english(), &rules).unwrap();
    }
    assert!(start.elapsed().as_secs() < 10, "{:?}", start.elapsed());
}
