//! Comparison systems: the closest-licensed-head baseline, the adjacency
//! baseline, and two-tag CONTENT/FUNCTION tagging.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use crate::conllu::{validate_tree, DependencyTree, Sentence};
use crate::pos::Upos;
use crate::ranker::main_predicate_from_tags;
use crate::rules::RuleSet;

/// Number of most frequent forms tagged FUNCTION by [`naive_pos_tag`].
pub const NAIVE_FUNCTION_FORMS: usize = 100;

/// Neighbor side used for fallback attachments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Side {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "left" | "l" => Ok(Side::Left),
            "right" | "r" => Ok(Side::Right),
            _ => Err(format!("unknown side `{s}`")),
        }
    }
}

/// Heads from a baseline, which need not form a tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeadAssignment {
    pub tree: DependencyTree,
    /// Whether the heads pass [`validate_tree`].
    pub well_formed: bool,
}

impl HeadAssignment {
    fn new(sentence: &Sentence, heads: Vec<usize>) -> Self {
        let tree = DependencyTree::new(heads);
        let well_formed = validate_tree(sentence, &tree).is_empty();
        HeadAssignment { tree, well_formed }
    }

    pub fn heads(&self) -> &[usize] {
        self.tree.heads()
    }
}

/// The rule baseline: the main predicate goes to the root and every other
/// token to its closest licensed head anywhere in the sentence (leftmost on
/// ties). Tokens without any licensed head take the neighbor on
/// `backoff`, or the other neighbor at the sentence edge.
pub fn baseline_parse(sentence: &Sentence, rules: &RuleSet, backoff: Side) -> HeadAssignment {
    let tags = sentence.tags();
    let n = tags.len();
    let predicate = main_predicate_from_tags(&tags);

    let heads = (1..=n)
        .map(|d| {
            if d == predicate {
                return 0;
            }
            let dep_tag = tags[d - 1];
            (1..=n)
                .filter(|&h| h != d && rules.licenses(tags[h - 1], dep_tag))
                .min_by_key(|&h| (h.abs_diff(d), h))
                .unwrap_or_else(|| neighbor(d, n, backoff))
        })
        .collect();

    HeadAssignment::new(sentence, heads)
}

fn neighbor(index: usize, len: usize, side: Side) -> usize {
    match side {
        Side::Left if index > 1 => index - 1,
        Side::Left => index + 1,
        Side::Right if index < len => index + 1,
        Side::Right => index - 1,
    }
}

/// Every token depends on its neighbor on `direction`; the token without
/// one goes to the root.
pub fn adjacency_parse(sentence: &Sentence, direction: Side) -> HeadAssignment {
    let n = sentence.len();
    let heads = (1..=n)
        .map(|i| match direction {
            Side::Left => i - 1,
            Side::Right if i == n => 0,
            Side::Right => i + 1,
        })
        .collect();
    HeadAssignment::new(sentence, heads)
}

/// Forms tagged FUNCTION: the `k` most frequent, ties broken by form.
pub fn most_frequent_forms(corpus: &[Sentence], k: usize) -> HashSet<String> {
    let mut counts: HashMap<&str, usize> = HashMap::new();
    for token in corpus.iter().flat_map(|s| &s.tokens) {
        *counts.entry(token.form.as_str()).or_default() += 1;
    }
    let mut ranked: Vec<(&str, usize)> = counts.into_iter().collect();
    ranked.sort_unstable_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    ranked
        .into_iter()
        .take(k)
        .map(|(form, _)| form.to_owned())
        .collect()
}

/// Replaces every tag with FUNCTION for the 100 most frequent forms of the
/// corpus and CONTENT otherwise. Counting is case-sensitive.
pub fn naive_pos_tag(corpus: &[Sentence]) -> Vec<Sentence> {
    naive_pos_tag_top(corpus, NAIVE_FUNCTION_FORMS)
}

pub fn naive_pos_tag_top(corpus: &[Sentence], k: usize) -> Vec<Sentence> {
    let function_forms = most_frequent_forms(corpus, k);
    corpus
        .iter()
        .map(|sentence| {
            let mut sentence = sentence.clone();
            for token in &mut sentence.tokens {
                token.upos = if function_forms.contains(&token.form) {
                    Upos::Function
                } else {
                    Upos::Content
                };
            }
            sentence
        })
        .collect()
}
