//! A training-free dependency parser for Universal Dependencies.
//!
//! Content words are ranked with personalized PageRank over a graph built
//! from a small set of POS head rules, then attached in rank order; function
//! words are attached afterwards as leaves. The crate also provides the
//! comparison baselines, CoNLL-U I/O, tree validation and evaluation.
//!
//! Numeric code is generic over [`Scalar`]; the aliases below fix it to
//! `f64` (or `f32`).

pub mod baselines;
pub mod conllu;
pub mod decoder;
pub mod direction;
pub mod error;
pub mod eval;
pub mod pipeline;
pub mod pos;
pub mod ranker;
pub mod rules;
pub mod scalar;

pub use conllu::{read_conllu, validate_tree, write_conllu, DependencyTree, Sentence, Token};
pub use error::{Error, Result};
pub use pos::Upos;
pub use rules::{Direction, DirectionPolicy, RuleSet};
pub use scalar::Scalar;

pub type RankedSentence = ranker::RankedSentence<f64>;
pub type RankedSentenceF32 = ranker::RankedSentence<f32>;
pub type Ranker = ranker::Ranker<f64>;
pub type RankerF32 = ranker::Ranker<f32>;
pub type PageRankConfig = ranker::PageRankConfig<f64>;
pub type ParserConfig = pipeline::ParserConfig<f64>;
pub type ParserConfigF32 = pipeline::ParserConfig<f32>;
