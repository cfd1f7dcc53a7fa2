//! Independent reference computations shared by the integration suites.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use rand::seq::SliceRandom;
use rand::Rng;
use udp_core::{Sentence, Token, Upos};

pub const EXAMPLE_WORDS: [(&str, Upos); 9] = [
    ("They", Upos::Pron),
    ("also", Upos::Adv),
    ("had", Upos::Verb),
    ("a", Upos::Det),
    ("special", Upos::Adj),
    ("connection", Upos::Noun),
    ("to", Upos::Adp),
    ("some", Upos::Det),
    ("extremists", Upos::Noun),
];

pub const EXAMPLE_HEADS: [usize; 9] = [3, 3, 0, 6, 6, 3, 9, 9, 6];

pub fn example_sentence() -> Sentence {
    Sentence::from_tagged(EXAMPLE_WORDS)
}

pub fn example_tags() -> Vec<Upos> {
    EXAMPLE_WORDS.iter().map(|&(_, t)| t).collect()
}

/// Stationary distribution by dense power iteration, run far past the
/// library's stopping point. `pairs` lists licensed (head, dependent) tags.
pub fn dense_pagerank(
    tags: &[Upos],
    pairs: &[(Upos, Upos)],
    personalization: &[f64],
    teleport: f64,
) -> Vec<f64> {
    let n = tags.len();
    // edges[from][to]: parallel edge count from dependent to head.
    let mut edges = vec![vec![0.0f64; n]; n];
    for &(head_tag, dep_tag) in pairs {
        for d in 0..n {
            for h in 0..n {
                if d != h && tags[d] == dep_tag && tags[h] == head_tag {
                    edges[d][h] += 1.0;
                }
            }
        }
    }
    // Column-stochastic transition matrix, dangling columns = personalization.
    let mut transition = vec![vec![0.0f64; n]; n];
    for from in 0..n {
        let out: f64 = edges[from].iter().sum();
        for to in 0..n {
            transition[to][from] = if out == 0.0 {
                personalization[to]
            } else {
                edges[from][to] / out
            };
        }
    }

    let mut x = vec![1.0 / n as f64; n];
    for _ in 0..20_000 {
        let next: Vec<f64> = (0..n)
            .map(|i| {
                let walk: f64 = (0..n).map(|j| transition[i][j] * x[j]).sum();
                teleport * personalization[i] + (1.0 - teleport) * walk
            })
            .collect();
        let change: f64 = next.iter().zip(&x).map(|(a, b)| (a - b).abs()).sum();
        x = next;
        if change < 1e-15 {
            break;
        }
    }
    x
}

/// Raw personalization weights normalized to one.
pub fn oracle_personalization(tags: &[Upos], weight: f64) -> Vec<f64> {
    let predicate = tags
        .iter()
        .position(|&t| t == Upos::Verb)
        .or_else(|| {
            tags.iter().position(|t| {
                matches!(
                    t,
                    Upos::Adj | Upos::Noun | Upos::Propn | Upos::Verb | Upos::Content
                )
            })
        })
        .unwrap_or(0);
    let raw: Vec<f64> = (0..tags.len())
        .map(|i| if i == predicate { weight } else { 1.0 })
        .collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

/// Content positions (1-based) by descending score; scores within `tie`
/// of each other keep sentence order.
pub fn oracle_ranking(tags: &[Upos], scores: &[f64], tie: f64) -> Vec<usize> {
    let mut left: Vec<usize> = (1..=tags.len())
        .filter(|&i| {
            matches!(
                tags[i - 1],
                Upos::Adj | Upos::Noun | Upos::Propn | Upos::Verb | Upos::Content
            )
        })
        .collect();
    let mut out = Vec::new();
    while !left.is_empty() {
        let top = left
            .iter()
            .map(|&p| scores[p - 1])
            .fold(f64::NEG_INFINITY, f64::max);
        // Earliest position among those tied with the maximum.
        let chosen = (0..left.len())
            .find(|&k| scores[left[k] - 1] >= top - tie)
            .unwrap();
        out.push(left.remove(chosen));
    }
    out
}

/// Tree check by walking head chains.
pub fn oracle_is_tree(heads: &[usize]) -> bool {
    let n = heads.len();
    if heads.iter().filter(|&&h| h == 0).count() != 1 {
        return false;
    }
    (1..=n).all(|start| {
        let mut node = start;
        for _ in 0..=n {
            if node == 0 {
                return true;
            }
            if node > n {
                return false;
            }
            node = heads[node - 1];
        }
        false
    })
}

pub fn random_tags<R: Rng>(rng: &mut R, len: usize) -> Vec<Upos> {
    (0..len)
        .map(|_| *Upos::UNIVERSAL.choose(rng).unwrap())
        .collect()
}

/// Random gold-annotated corpus: each sentence gets a random tree and a
/// random `genre` among `groups` (or none).
pub fn random_gold_corpus<R: Rng>(rng: &mut R, sentences: usize, groups: &[&str]) -> Vec<Sentence> {
    (0..sentences)
        .map(|_| {
            let len = rng.gen_range(1..=20);
            let root = rng.gen_range(1..=len);
            let tokens = (1..=len).map(|i| {
                let head = if i == root {
                    0
                } else {
                    let mut h = rng.gen_range(1..=len);
                    while h == i {
                        h = rng.gen_range(1..=len);
                    }
                    h
                };
                let tag = *Upos::UNIVERSAL.choose(rng).unwrap();
                Token::new(i, format!("f{}", rng.gen_range(0..50)), tag).with_gold_head(head)
            });
            let mut s = Sentence::from_tokens(tokens);
            if let Some(&g) = groups.choose(rng) {
                if !g.is_empty() {
                    s.set_meta("genre", g);
                }
            }
            s
        })
        .collect()
}

/// Copy of `gold` with each head replaced at random with probability `p`.
pub fn perturb<R: Rng>(rng: &mut R, gold: &[Sentence], p: f64) -> Vec<Sentence> {
    gold.iter()
        .map(|s| {
            let mut s = s.clone();
            let n = s.len();
            for t in &mut s.tokens {
                let gold = t.gold_head.unwrap();
                t.pred_head = Some(if rng.gen_bool(p) {
                    rng.gen_range(0..=n)
                } else {
                    gold
                });
            }
            s
        })
        .collect()
}

#[derive(Debug, Default, PartialEq, Clone)]
pub struct BruteScores {
    pub correct: usize,
    pub total: usize,
    pub per_pos: BTreeMap<Upos, (usize, usize)>,
    pub root_correct: usize,
}

/// Token-loop scoring.
pub fn brute_scores(gold: &[Sentence], pred: &[Sentence]) -> BruteScores {
    let mut out = BruteScores::default();
    for (g, p) in gold.iter().zip(pred) {
        let mut gold_root = None;
        let mut pred_root = None;
        for i in 0..g.tokens.len() {
            let gh = g.tokens[i].gold_head.unwrap();
            let ph = p.tokens[i].pred_head.unwrap();
            let entry = out.per_pos.entry(g.tokens[i].upos).or_insert((0, 0));
            entry.1 += 1;
            out.total += 1;
            if gh == ph {
                entry.0 += 1;
                out.correct += 1;
            }
            if gh == 0 && gold_root.is_none() {
                gold_root = Some(i);
            }
            if ph == 0 && pred_root.is_none() {
                pred_root = Some(i);
            }
        }
        if gold_root.is_some() && gold_root == pred_root {
            out.root_correct += 1;
        }
    }
    out
}

/// Group UAS values, then mean and population std, computed separately.
pub fn brute_domain(gold: &[Sentence], pred: &[Sentence]) -> (BTreeMap<String, f64>, f64, f64) {
    let mut by_group: HashMap<String, (Vec<Sentence>, Vec<Sentence>)> = HashMap::new();
    for (g, p) in gold.iter().zip(pred) {
        let key = g
            .meta
            .get("genre")
            .cloned()
            .unwrap_or_else(|| "unknown".to_owned());
        let entry = by_group.entry(key).or_default();
        entry.0.push(g.clone());
        entry.1.push(p.clone());
    }
    let mut values = BTreeMap::new();
    for (k, (g, p)) in by_group {
        let s = brute_scores(&g, &p);
        values.insert(k, s.correct as f64 / s.total as f64);
    }
    let k = values.len() as f64;
    let mean = values.values().sum::<f64>() / k;
    let var = values.values().map(|v| (v - mean).powi(2)).sum::<f64>() / k;
    (values, mean, var.sqrt())
}

/// Adjacent (ADP, nominal) and (nominal, ADP) counts.
pub fn brute_bigrams(corpus: &[Sentence]) -> (usize, usize) {
    let nominal = |t: Upos| matches!(t, Upos::Noun | Upos::Propn | Upos::Pron);
    let mut pre = 0;
    let mut post = 0;
    for s in corpus {
        for i in 1..s.tokens.len() {
            let (a, b) = (s.tokens[i - 1].upos, s.tokens[i].upos);
            if a == Upos::Adp && nominal(b) {
                pre += 1;
            }
            if nominal(a) && b == Upos::Adp {
                post += 1;
            }
        }
    }
    (pre, post)
}
