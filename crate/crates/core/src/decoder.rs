//! Two-step tree decoding.
//!
//! Content words are attached in rank order, each joining the head set
//! once attached. Function words are attached afterwards against the
//! frozen head set, so they always end up as leaves.

use crate::conllu::DependencyTree;
use crate::error::{Error, Result};
use crate::pos::Upos;
use crate::ranker::RankedSentence;
use crate::rules::{DirectionPolicy, RuleSet};

/// Picks the closest head for `dependent` (1-based) from `heads`, where 0
/// is the root.
///
/// Candidates must satisfy both the head rules and the direction
/// constraint; failing that, the direction constraint alone; failing that,
/// any candidate. Equal distances go to the leftmost candidate.
pub fn attach(
    tags: &[Upos],
    dependent: usize,
    heads: &[usize],
    policy: &DirectionPolicy,
    rules: &RuleSet,
) -> Result<usize> {
    if heads.is_empty() {
        return Err(Error::EmptyHeadSet);
    }
    let dep_tag = tags[dependent - 1];
    let directed = |h: usize| policy.allows(h, dependent, dep_tag);
    let licensed = |h: usize| h != 0 && rules.licenses(tags[h - 1], dep_tag);

    closest(
        dependent,
        heads
            .iter()
            .copied()
            .filter(|&h| directed(h) && licensed(h)),
    )
    .or_else(|| closest(dependent, heads.iter().copied().filter(|&h| directed(h))))
    .or_else(|| closest(dependent, heads.iter().copied()))
    .ok_or(Error::EmptyHeadSet)
}

fn closest(dependent: usize, candidates: impl Iterator<Item = usize>) -> Option<usize> {
    candidates.min_by_key(|&h| (h.abs_diff(dependent), h))
}

/// Decodes a ranked sentence into a tree.
pub fn decode<T>(
    ranked: &RankedSentence<T>,
    policy: &DirectionPolicy,
    rules: &RuleSet,
) -> Result<DependencyTree> {
    let tags = &ranked.tags;
    let n = tags.len();
    let mut heads = vec![0; n];
    let mut head_set: Vec<usize> = Vec::with_capacity(ranked.content.len());

    let mut function = ranked.function.clone();
    if ranked.content.is_empty() {
        // Nothing can head, so the fallback predicate takes the root and
        // the remaining words hang off it.
        let seed = ranked.predicate;
        heads[seed - 1] = 0;
        head_set.push(seed);
        function.retain(|&f| f != seed);
    }

    for &c in &ranked.content {
        let head = if head_set.is_empty() {
            0
        } else {
            attach(tags, c, &head_set, policy, rules)?
        };
        heads[c - 1] = head;
        head_set.push(c);
    }

    for &f in &function {
        heads[f - 1] = attach(tags, f, &head_set, policy, rules)?;
    }

    let mut tree = DependencyTree::new(heads);
    apply_final_punct_heuristic(&mut tree, tags);
    Ok(tree)
}

/// Reattaches sentence-final punctuation to the root's dependent.
pub fn apply_final_punct_heuristic(tree: &mut DependencyTree, tags: &[Upos]) {
    let last = tags.len();
    if last == 0 || tags[last - 1] != Upos::Punct {
        return;
    }
    if let Some(&predicate) = tree.root_dependents().first() {
        if predicate != last {
            tree.set_head(last, predicate);
        }
    }
}
