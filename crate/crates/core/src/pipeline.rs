//! Corpus-level parsing: tagging scenario, ADP direction pass, then
//! per-sentence parsing.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::baselines::{adjacency_parse, baseline_parse, naive_pos_tag, Side};
use crate::conllu::{validate_tree, DependencyTree, Sentence};
use crate::decoder::decode;
use crate::direction::{estimate_adp_direction, AdpDirectionEstimate};
use crate::error::Result;
use crate::ranker::{RankMode, Ranker, DEFAULT_PERSONALIZATION_WEIGHT, DEFAULT_TELEPORT};
use crate::rules::{Direction, DirectionPolicy, RuleSet};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum ParseMode {
    #[default]
    Udp,
    /// Content words ranked in reading order instead of by PageRank.
    UdpNoPr,
    Baseline,
    Adjacency,
}

impl ParseMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ParseMode::Udp => "udp",
            ParseMode::UdpNoPr => "udp-nopr",
            ParseMode::Baseline => "baseline",
            ParseMode::Adjacency => "adjacency",
        }
    }
}

impl fmt::Display for ParseMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ParseMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "udp" => Ok(ParseMode::Udp),
            "udp-nopr" => Ok(ParseMode::UdpNoPr),
            "baseline" => Ok(ParseMode::Baseline),
            "adjacency" => Ok(ParseMode::Adjacency),
            _ => Err(format!("unknown mode `{s}`")),
        }
    }
}

/// Where POS tags come from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum PosSource {
    /// The UPOS column as given.
    #[default]
    GoldColumn,
    /// CONTENT/FUNCTION by word frequency.
    Naive,
}

/// How ADP direction is chosen.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum AdpSetting {
    /// Estimated from bigram counts over the input.
    #[default]
    Auto,
    Fixed(Direction),
}

impl FromStr for AdpSetting {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "auto" => Ok(AdpSetting::Auto),
            "left" => Ok(AdpSetting::Fixed(Direction::HeadOnLeft)),
            "right" => Ok(AdpSetting::Fixed(Direction::HeadOnRight)),
            _ => Err(format!("unknown ADP direction `{s}`")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ParserConfig<T> {
    pub mode: ParseMode,
    pub pos: PosSource,
    pub adp: AdpSetting,
    pub teleport: T,
    pub personalization_weight: T,
    /// Fallback side for the baseline, chain side for adjacency.
    pub backoff: Side,
    /// Overrides the rules implied by `pos`.
    pub rules: Option<RuleSet>,
    /// Overrides the direction policy implied by `pos`.
    pub policy: Option<DirectionPolicy>,
}

impl<T: Scalar> Default for ParserConfig<T> {
    fn default() -> Self {
        ParserConfig {
            mode: ParseMode::Udp,
            pos: PosSource::GoldColumn,
            adp: AdpSetting::Auto,
            teleport: T::lit(DEFAULT_TELEPORT),
            personalization_weight: T::lit(DEFAULT_PERSONALIZATION_WEIGHT),
            backoff: Side::Right,
            rules: None,
            policy: None,
        }
    }
}

impl<T: Scalar> ParserConfig<T> {
    /// Rules and base policy for the configured tagging scenario.
    pub fn resolved_rules(&self) -> (RuleSet, DirectionPolicy) {
        let (rules, policy) = match self.pos {
            PosSource::GoldColumn => (RuleSet::universal(), DirectionPolicy::universal()),
            PosSource::Naive => (RuleSet::naive(), DirectionPolicy::free()),
        };
        (
            self.rules.clone().unwrap_or(rules),
            self.policy.clone().unwrap_or(policy),
        )
    }
}

/// Parsed corpus plus what was decided along the way.
#[derive(Clone, Debug)]
pub struct ParseOutcome {
    /// Input sentences (retagged in the naive scenario) with predicted heads.
    pub sentences: Vec<Sentence>,
    pub adp_counts: AdpDirectionEstimate,
    pub adp_direction: Direction,
    /// Sentences whose predicted heads pass [`validate_tree`].
    pub well_formed: usize,
}

/// Parses a single tagged sentence with a fully resolved policy.
pub fn parse_sentence<T: Scalar>(
    sentence: &Sentence,
    config: &ParserConfig<T>,
    rules: &RuleSet,
    policy: &DirectionPolicy,
) -> Result<DependencyTree> {
    let rank_mode = match config.mode {
        ParseMode::Udp => RankMode::PageRank,
        ParseMode::UdpNoPr => RankMode::ReadingOrder,
        ParseMode::Baseline => return Ok(baseline_parse(sentence, rules, config.backoff).tree),
        ParseMode::Adjacency => return Ok(adjacency_parse(sentence, config.backoff).tree),
    };
    let ranker = Ranker::new(rules.clone(), rank_mode)
        .with_teleport(config.teleport)
        .with_personalization_weight(config.personalization_weight);
    let ranked = ranker.rank(sentence)?;
    decode(&ranked, policy, rules)
}

/// Parses a corpus. The ADP direction is estimated over the whole
/// (possibly retagged) input before any sentence is parsed. Output order
/// follows input order.
pub fn parse_corpus<T: Scalar>(
    corpus: &[Sentence],
    config: &ParserConfig<T>,
) -> Result<ParseOutcome> {
    let tagged = match config.pos {
        PosSource::GoldColumn => corpus.to_vec(),
        PosSource::Naive => naive_pos_tag(corpus),
    };
    let (rules, base_policy) = config.resolved_rules();

    let adp_counts = estimate_adp_direction(&tagged);
    let adp_direction = match config.adp {
        AdpSetting::Auto => adp_counts.resolved(),
        AdpSetting::Fixed(direction) => direction,
    };
    let policy = base_policy.with_adp(adp_direction);

    let trees = tagged
        .par_iter()
        .map(|s| parse_sentence(s, config, &rules, &policy))
        .collect::<Result<Vec<_>>>()?;

    let mut sentences = tagged;
    let mut well_formed = 0;
    for (sentence, tree) in sentences.iter_mut().zip(&trees) {
        if validate_tree(sentence, tree).is_empty() {
            well_formed += 1;
        }
        sentence.set_predicted(tree);
    }

    Ok(ParseOutcome {
        sentences,
        adp_counts,
        adp_direction,
        well_formed,
    })
}
