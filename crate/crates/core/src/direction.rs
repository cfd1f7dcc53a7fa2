//! Runtime estimate of adposition attachment direction.
//!
//! Adjacent ADP-nominal pairs suggest prepositions, nominal-ADP pairs
//! postpositions. Pairs never cross sentence boundaries.

use std::ops::Add;

use crate::conllu::Sentence;
use crate::pos::Upos;
use crate::rules::Direction;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct AdpDirectionEstimate {
    pub adp_nominal_count: usize,
    pub nominal_adp_count: usize,
}

impl AdpDirectionEstimate {
    /// Prepositions (head on the right) unless nominal-ADP pairs are
    /// strictly more frequent.
    pub fn resolved(&self) -> Direction {
        if self.adp_nominal_count >= self.nominal_adp_count {
            Direction::HeadOnRight
        } else {
            Direction::HeadOnLeft
        }
    }

    /// Counts for a single tag sequence.
    pub fn from_tags(tags: &[Upos]) -> Self {
        let mut estimate = Self::default();
        for pair in tags.windows(2) {
            match (pair[0], pair[1]) {
                (Upos::Adp, t) if t.is_nominal() => estimate.adp_nominal_count += 1,
                (t, Upos::Adp) if t.is_nominal() => estimate.nominal_adp_count += 1,
                _ => {}
            }
        }
        estimate
    }
}

impl Add for AdpDirectionEstimate {
    type Output = Self;

    fn add(self, other: Self) -> Self {
        AdpDirectionEstimate {
            adp_nominal_count: self.adp_nominal_count + other.adp_nominal_count,
            nominal_adp_count: self.nominal_adp_count + other.nominal_adp_count,
        }
    }
}

/// Counts ADP/nominal bigrams over a whole corpus.
pub fn estimate_adp_direction<'a>(
    corpus: impl IntoIterator<Item = &'a Sentence>,
) -> AdpDirectionEstimate {
    corpus
        .into_iter()
        .map(|s| AdpDirectionEstimate::from_tags(&s.tags()))
        .fold(AdpDirectionEstimate::default(), Add::add)
}
