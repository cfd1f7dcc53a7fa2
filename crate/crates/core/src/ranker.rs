//! Personalized PageRank over the head-rule graph of a sentence.
//!
//! Every token is a node. A dependent gets one outgoing edge to each token
//! that can head it, so words that many others may attach to collect rank.
//! The teleport distribution favors the estimated main predicate.

use crate::conllu::Sentence;
use crate::error::{Error, Result};
use crate::pos::Upos;
use crate::rules::RuleSet;
use crate::scalar::Scalar;

/// Teleport probability.
pub const DEFAULT_TELEPORT: f64 = 0.05;
/// Personalization weight of the main predicate relative to other tokens.
pub const DEFAULT_PERSONALIZATION_WEIGHT: f64 = 5.0;
/// L1 change between iterations below which the walk has converged.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;
pub const DEFAULT_MAX_ITERATIONS: usize = 1000;

/// Directed multigraph with edges from dependent to candidate head.
/// Nodes are 0-based token positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SentenceGraph {
    out_edges: Vec<Vec<usize>>,
    in_degree: Vec<usize>,
}

impl SentenceGraph {
    /// Builds a graph from explicit `(dependent, head)` edges.
    pub fn from_edges(nodes: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut out_edges = vec![Vec::new(); nodes];
        let mut in_degree = vec![0; nodes];
        for (from, to) in edges {
            out_edges[from].push(to);
            in_degree[to] += 1;
        }
        SentenceGraph {
            out_edges,
            in_degree,
        }
    }

    pub fn node_count(&self) -> usize {
        self.out_edges.len()
    }

    pub fn edge_count(&self) -> usize {
        self.in_degree.iter().sum()
    }

    pub fn in_degree(&self) -> &[usize] {
        &self.in_degree
    }

    pub fn out_degree(&self, node: usize) -> usize {
        self.out_edges[node].len()
    }

    /// Edge targets of `node`, repeated per parallel edge.
    pub fn successors(&self, node: usize) -> &[usize] {
        &self.out_edges[node]
    }
}

/// One edge `d -> h` per licensing rule for every ordered pair of distinct
/// tokens.
pub fn build_graph(sentence: &Sentence, rules: &RuleSet) -> SentenceGraph {
    build_graph_from_tags(&sentence.tags(), rules)
}

pub fn build_graph_from_tags(tags: &[Upos], rules: &RuleSet) -> SentenceGraph {
    let n = tags.len();
    let mut edges = Vec::new();
    for (d, &dep_tag) in tags.iter().enumerate() {
        for (h, &head_tag) in tags.iter().enumerate() {
            if h == d {
                continue;
            }
            for _ in 0..rules.multiplicity(head_tag, dep_tag) {
                edges.push((d, h));
            }
        }
    }
    SentenceGraph::from_edges(n, edges)
}

/// First verb, else first content word, else the first token (1-based).
pub fn estimate_main_predicate(sentence: &Sentence) -> usize {
    main_predicate_from_tags(&sentence.tags())
}

pub fn main_predicate_from_tags(tags: &[Upos]) -> usize {
    tags.iter()
        .position(|&t| t == Upos::Verb)
        .or_else(|| tags.iter().position(|t| t.is_content()))
        .map_or(1, |i| i + 1)
}

/// Teleport distribution: `weight` on the predicate, 1 elsewhere,
/// normalized to sum to one.
pub fn personalization_vector<T: Scalar>(len: usize, predicate: usize, weight: T) -> Vec<T> {
    assert!(
        (1..=len).contains(&predicate),
        "predicate index {predicate} outside 1..={len}"
    );
    let total = T::from_count(len - 1) + weight;
    (1..=len)
        .map(|i| {
            if i == predicate {
                weight / total
            } else {
                T::one() / total
            }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PageRankConfig<T> {
    pub teleport: T,
    pub tolerance: T,
    pub max_iterations: usize,
}

impl<T: Scalar> Default for PageRankConfig<T> {
    fn default() -> Self {
        PageRankConfig {
            teleport: T::lit(DEFAULT_TELEPORT),
            tolerance: T::lit(DEFAULT_TOLERANCE),
            max_iterations: DEFAULT_MAX_ITERATIONS,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PageRankRun<T> {
    pub scores: Vec<T>,
    pub iterations: usize,
    pub converged: bool,
}

/// Personalized PageRank by power iteration.
///
/// With probability `teleport` the walk jumps according to
/// `personalization`; otherwise it follows a uniformly chosen outgoing
/// edge. Nodes without outgoing edges hand their mass to the
/// personalization vector.
pub fn pagerank<T: Scalar>(
    graph: &SentenceGraph,
    personalization: &[T],
    config: &PageRankConfig<T>,
) -> Result<PageRankRun<T>> {
    let n = graph.node_count();
    if personalization.len() != n {
        return Err(Error::InvalidParameter(format!(
            "personalization has {} entries for {n} nodes",
            personalization.len()
        )));
    }
    if !(config.teleport > T::zero() && config.teleport < T::one()) {
        return Err(Error::InvalidParameter(format!(
            "teleport {} outside (0, 1)",
            config.teleport
        )));
    }
    if personalization
        .iter()
        .any(|&p| !p.is_finite() || p < T::zero())
    {
        return Err(Error::InvalidParameter(
            "personalization entries must be finite and non-negative".into(),
        ));
    }
    let total: T = personalization.iter().copied().sum();
    if (total - T::one()).abs() > T::epsilon().sqrt() {
        return Err(Error::InvalidParameter(format!(
            "personalization sums to {total}, not 1"
        )));
    }
    if n == 0 {
        return Ok(PageRankRun {
            scores: Vec::new(),
            iterations: 0,
            converged: true,
        });
    }

    let damping = T::one() - config.teleport;
    let mut scores = personalization.to_vec();
    let mut next = vec![T::zero(); n];
    let mut iterations = 0;
    let mut converged = false;

    while iterations < config.max_iterations {
        iterations += 1;
        let dangling: T = (0..n)
            .filter(|&u| graph.out_degree(u) == 0)
            .map(|u| scores[u])
            .sum();
        let jump = config.teleport + damping * dangling;
        for (slot, &p) in next.iter_mut().zip(personalization) {
            *slot = jump * p;
        }
        for (u, &mass) in scores.iter().enumerate() {
            let targets = graph.successors(u);
            if targets.is_empty() {
                continue;
            }
            let share = damping * mass / T::from_count(targets.len());
            for &v in targets {
                next[v] = next[v] + share;
            }
        }

        let change: T = scores.iter().zip(&next).map(|(&a, &b)| (a - b).abs()).sum();
        std::mem::swap(&mut scores, &mut next);
        if change < config.tolerance {
            converged = true;
            break;
        }
    }

    let total: T = scores.iter().copied().sum();
    for s in &mut scores {
        *s = *s / total;
    }

    Ok(PageRankRun {
        scores,
        iterations,
        converged,
    })
}

/// How content words are ordered before decoding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum RankMode {
    /// Descending personalized PageRank.
    #[default]
    PageRank,
    /// Sentence order, ignoring scores.
    ReadingOrder,
}

/// A sentence's content words in rank order and its function words in
/// sentence order. Token positions are 1-based.
#[derive(Clone, Debug, PartialEq)]
pub struct RankedSentence<T> {
    pub tags: Vec<Upos>,
    /// Per-token scores; absent in reading-order mode.
    pub scores: Option<Vec<T>>,
    pub content: Vec<usize>,
    pub function: Vec<usize>,
    pub predicate: usize,
}

impl<T> RankedSentence<T> {
    pub fn len(&self) -> usize {
        self.tags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tags.is_empty()
    }
}

/// Orders positions by descending score. Scores within `tie` of the best
/// remaining one count as equal, and the earliest position wins.
pub fn order_by_score<T: Scalar>(positions: &[usize], scores: &[T], tie: T) -> Vec<usize> {
    let mut remaining = positions.to_vec();
    let mut ordered = Vec::with_capacity(remaining.len());
    while !remaining.is_empty() {
        let best = remaining
            .iter()
            .map(|&p| scores[p - 1])
            .fold(T::neg_infinity(), T::max);
        let pick = remaining
            .iter()
            .enumerate()
            .filter(|&(_, &p)| scores[p - 1] >= best - tie)
            .min_by_key(|&(_, &p)| p)
            .map(|(i, _)| i)
            .expect("non-empty");
        ordered.push(remaining.remove(pick));
    }
    ordered
}

/// Score tolerance treated as a tie when ranking.
pub fn tie_tolerance<T: Scalar>() -> T {
    T::epsilon() * T::lit(64.0)
}

/// Ranks sentences with fixed rules and parameters.
#[derive(Clone, Debug)]
pub struct Ranker<T> {
    pub rules: RuleSet,
    pub pagerank: PageRankConfig<T>,
    pub personalization_weight: T,
    pub mode: RankMode,
}

impl<T: Scalar> Ranker<T> {
    pub fn new(rules: RuleSet, mode: RankMode) -> Self {
        Ranker {
            rules,
            pagerank: PageRankConfig::default(),
            personalization_weight: T::lit(DEFAULT_PERSONALIZATION_WEIGHT),
            mode,
        }
    }

    pub fn with_teleport(mut self, teleport: T) -> Self {
        self.pagerank.teleport = teleport;
        self
    }

    pub fn with_personalization_weight(mut self, weight: T) -> Self {
        self.personalization_weight = weight;
        self
    }

    pub fn rank(&self, sentence: &Sentence) -> Result<RankedSentence<T>> {
        self.rank_tags(&sentence.tags())
    }

    pub fn rank_tags(&self, tags: &[Upos]) -> Result<RankedSentence<T>> {
        if tags.is_empty() {
            return Err(Error::InvalidParameter(
                "cannot rank an empty sentence".into(),
            ));
        }
        let predicate = main_predicate_from_tags(tags);
        let positions = 1..=tags.len();
        let in_reading_order: Vec<usize> = positions
            .clone()
            .filter(|&i| tags[i - 1].is_content())
            .collect();
        let function: Vec<usize> = positions.filter(|&i| tags[i - 1].is_function()).collect();

        let (content, scores) = match self.mode {
            RankMode::ReadingOrder => (in_reading_order, None),
            RankMode::PageRank => {
                if self.personalization_weight <= T::zero() {
                    return Err(Error::InvalidParameter(
                        "personalization weight must be positive".into(),
                    ));
                }
                let graph = build_graph_from_tags(tags, &self.rules);
                let personalization =
                    personalization_vector(tags.len(), predicate, self.personalization_weight);
                let run = pagerank(&graph, &personalization, &self.pagerank)?;
                let ordered = order_by_score(&in_reading_order, &run.scores, tie_tolerance());
                (ordered, Some(run.scores))
            }
        };

        Ok(RankedSentence {
            tags: tags.to_vec(),
            scores,
            content,
            function,
            predicate,
        })
    }
}

/// Ranks with default parameters.
pub fn rank<T: Scalar>(
    sentence: &Sentence,
    rules: &RuleSet,
    mode: RankMode,
) -> Result<RankedSentence<T>> {
    Ranker::new(rules.clone(), mode).rank(sentence)
}
