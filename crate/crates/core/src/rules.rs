//! Head rules and attachment-direction constraints.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::pos::Upos;

/// Licensed `(head, dependent)` tag pairs.
///
/// Pairs are kept as a multiset: a pair listed twice yields two parallel
/// edges in the ranking graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleSet {
    pairs: Vec<(Upos, Upos)>,
}

impl RuleSet {
    /// Builds a rule set. Every head tag must be a content tag.
    pub fn new(pairs: impl IntoIterator<Item = (Upos, Upos)>) -> Result<Self> {
        let pairs: Vec<_> = pairs.into_iter().collect();
        if let Some((head, dep)) = pairs.iter().find(|(h, _)| h.is_function()) {
            return Err(Error::InvalidParameter(format!(
                "rule {head} -> {dep} has a function-word head"
            )));
        }
        Ok(RuleSet { pairs })
    }

    /// The UD head rules: ADJ heads ADV; NOUN and PROPN head ADJ, NOUN,
    /// PROPN, ADP, DET, NUM; VERB heads ADV, AUX, NOUN, PROPN, PRON, SCONJ.
    pub fn universal() -> Self {
        use Upos::*;
        let mut pairs = vec![(Adj, Adv)];
        for head in [Noun, Propn] {
            for dep in [Adj, Noun, Propn, Adp, Det, Num] {
                pairs.push((head, dep));
            }
        }
        for dep in [Adv, Aux, Noun, Propn, Pron, Sconj] {
            pairs.push((Verb, dep));
        }
        RuleSet { pairs }
    }

    /// Rules for the two-tag CONTENT/FUNCTION scenario.
    pub fn naive() -> Self {
        RuleSet {
            pairs: vec![
                (Upos::Content, Upos::Content),
                (Upos::Content, Upos::Function),
            ],
        }
    }

    pub fn pairs(&self) -> &[(Upos, Upos)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Whether `head` may govern `dependent`.
    pub fn licenses(&self, head: Upos, dependent: Upos) -> bool {
        self.pairs.contains(&(head, dependent))
    }

    /// How many times the pair is listed.
    pub fn multiplicity(&self, head: Upos, dependent: Upos) -> usize {
        self.pairs
            .iter()
            .filter(|&&p| p == (head, dependent))
            .count()
    }
}

impl Default for RuleSet {
    fn default() -> Self {
        RuleSet::universal()
    }
}

/// Where a dependent's head must lie.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// The head is to the right of the dependent.
    HeadOnRight,
    /// The head is to the left of the dependent.
    HeadOnLeft,
    Free,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::HeadOnRight => "RIGHT",
            Direction::HeadOnLeft => "LEFT",
            Direction::Free => "FREE",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "RIGHT" => Ok(Direction::HeadOnRight),
            "LEFT" => Ok(Direction::HeadOnLeft),
            "FREE" => Ok(Direction::Free),
            _ => Err(format!("unknown direction `{s}`")),
        }
    }
}

/// Per-tag attachment direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectionPolicy {
    directions: [Direction; Upos::COUNT],
}

impl DirectionPolicy {
    /// No constraints at all.
    pub fn free() -> Self {
        DirectionPolicy {
            directions: [Direction::Free; Upos::COUNT],
        }
    }

    /// AUX, DET and SCONJ attach rightwards; CONJ and PUNCT leftwards.
    pub fn universal() -> Self {
        let mut policy = Self::free();
        for tag in [Upos::Aux, Upos::Det, Upos::Sconj] {
            policy.set(tag, Direction::HeadOnRight);
        }
        for tag in [Upos::Conj, Upos::Punct] {
            policy.set(tag, Direction::HeadOnLeft);
        }
        policy
    }

    pub fn get(&self, tag: Upos) -> Direction {
        self.directions[tag.ordinal()]
    }

    pub fn set(&mut self, tag: Upos, direction: Direction) {
        self.directions[tag.ordinal()] = direction;
    }

    /// Copy with the ADP direction replaced.
    pub fn with_adp(mut self, direction: Direction) -> Self {
        self.set(Upos::Adp, direction);
        self
    }

    /// Whether attaching `dependent` to `head` respects the direction of
    /// `dependent_tag`. Indices are 1-based; head 0 is the root, which is
    /// always acceptable.
    pub fn allows(&self, head: usize, dependent: usize, dependent_tag: Upos) -> bool {
        if head == 0 {
            return true;
        }
        match self.get(dependent_tag) {
            Direction::HeadOnRight => head > dependent,
            Direction::HeadOnLeft => head < dependent,
            Direction::Free => true,
        }
    }
}

impl Default for DirectionPolicy {
    fn default() -> Self {
        DirectionPolicy::universal()
    }
}

/// Head-rule licensing check.
pub fn delta(head: Upos, dependent: Upos, rules: &RuleSet) -> bool {
    rules.licenses(head, dependent)
}

/// Direction check.
pub fn kappa(head: usize, dependent: usize, dependent_tag: Upos, policy: &DirectionPolicy) -> bool {
    policy.allows(head, dependent, dependent_tag)
}

pub fn is_content(tag: Upos) -> bool {
    tag.is_content()
}

pub fn is_nominal(tag: Upos) -> bool {
    tag.is_nominal()
}

/// Parses a rule configuration.
///
/// ```text
/// # head rules
/// VERB NOUN
/// DIR DET RIGHT
/// ```
///
/// Lines `HEAD DEP` license a pair, lines `DIR TAG LEFT|RIGHT|FREE` set a
/// direction on top of `base_policy`. If the text contains no `HEAD DEP`
/// line, the returned rule set is empty.
pub fn parse_rules(text: &str, base_policy: DirectionPolicy) -> Result<(RuleSet, DirectionPolicy)> {
    let mut pairs = Vec::new();
    let mut policy = base_policy;

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::RuleFile {
            line: line_no,
            message,
        };
        let tag = |s: &str| s.parse::<Upos>().map_err(|e| err(e.to_string()));

        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields.as_slice() {
            ["DIR", t, d] => {
                let direction = d.parse::<Direction>().map_err(err)?;
                policy.set(tag(t)?, direction);
            }
            [h, d] => {
                let head = tag(h)?;
                if head.is_function() {
                    return Err(err(format!("{head} is a function tag and cannot head")));
                }
                pairs.push((head, tag(d)?));
            }
            _ => return Err(err(format!("cannot parse `{line}`"))),
        }
    }

    Ok((RuleSet { pairs }, policy))
}
