//! CoNLL-U reading, writing and tree validation.
//!
//! Only syntactic words take part in parsing. Multiword-token ranges
//! (`3-4`) and empty nodes (`5.1`) are kept verbatim and re-emitted at the
//! same position on output.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::pos::Upos;

/// Relation label written for every predicted attachment.
pub const UNLABELED_RELATION: &str = "dep";

/// A syntactic word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    /// 1-based position in the sentence.
    pub index: usize,
    pub form: String,
    pub lemma: String,
    pub upos: Upos,
    pub xpos: String,
    pub feats: String,
    /// Head from column 7; 0 is the virtual root.
    pub gold_head: Option<usize>,
    pub deprel: String,
    pub deps: String,
    pub misc: String,
    pub pred_head: Option<usize>,
}

impl Token {
    pub fn new(index: usize, form: impl Into<String>, upos: Upos) -> Self {
        Token {
            index,
            form: form.into(),
            lemma: "_".to_owned(),
            upos,
            xpos: "_".to_owned(),
            feats: "_".to_owned(),
            gold_head: None,
            deprel: "_".to_owned(),
            deps: "_".to_owned(),
            misc: "_".to_owned(),
            pred_head: None,
        }
    }

    pub fn with_gold_head(mut self, head: usize) -> Self {
        self.gold_head = Some(head);
        self
    }
}

/// A sentence of syntactic words plus metadata.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Sentence {
    pub tokens: Vec<Token>,
    /// `# key = value` comments.
    pub meta: BTreeMap<String, String>,
    comments: Vec<String>,
    /// Lines that are not syntactic words, keyed by the number of tokens
    /// that precede them.
    passthrough: Vec<(usize, String)>,
}

impl Sentence {
    /// Builds a sentence from tokens, renumbering them from 1.
    pub fn from_tokens(tokens: impl IntoIterator<Item = Token>) -> Self {
        let tokens = tokens
            .into_iter()
            .enumerate()
            .map(|(i, mut t)| {
                t.index = i + 1;
                t
            })
            .collect();
        Sentence {
            tokens,
            ..Default::default()
        }
    }

    /// Builds a sentence from `(form, tag)` pairs.
    pub fn from_tagged<'a>(words: impl IntoIterator<Item = (&'a str, Upos)>) -> Self {
        Self::from_tokens(
            words
                .into_iter()
                .map(|(form, upos)| Token::new(0, form, upos)),
        )
    }

    /// Builds a sentence from tags alone; forms are `w1`, `w2`, ...
    pub fn from_tags(tags: &[Upos]) -> Self {
        Self::from_tokens(
            tags.iter()
                .enumerate()
                .map(|(i, &upos)| Token::new(0, format!("w{}", i + 1), upos)),
        )
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn tags(&self) -> Vec<Upos> {
        self.tokens.iter().map(|t| t.upos).collect()
    }

    /// The token at 1-based `index`.
    pub fn token(&self, index: usize) -> &Token {
        &self.tokens[index - 1]
    }

    pub fn id(&self) -> Option<&str> {
        self.meta.get("sent_id").map(String::as_str)
    }

    /// Adds a `# key = value` comment.
    pub fn set_meta(&mut self, key: impl Into<String>, value: impl Into<String>) {
        let key = key.into();
        let value = value.into();
        self.comments
            .retain(|c| parse_meta(c).map(|(k, _)| k) != Some(key.as_str()));
        self.comments.push(format!("# {key} = {value}"));
        self.meta.insert(key, value);
    }

    /// Raw comment lines preceding the first token.
    pub fn comments(&self) -> &[String] {
        &self.comments
    }

    /// Verbatim range and empty-node lines with their positions.
    pub fn passthrough(&self) -> &[(usize, String)] {
        &self.passthrough
    }

    /// Copies a tree's heads into the `pred_head` fields.
    pub fn set_predicted(&mut self, tree: &DependencyTree) {
        assert_eq!(tree.len(), self.len(), "tree length differs from sentence");
        for (token, &head) in self.tokens.iter_mut().zip(tree.heads()) {
            token.pred_head = Some(head);
        }
    }

    /// The gold tree, if every token carries a gold head.
    pub fn gold_tree(&self) -> Option<DependencyTree> {
        self.tokens
            .iter()
            .map(|t| t.gold_head)
            .collect::<Option<Vec<_>>>()
            .map(DependencyTree::new)
    }

    /// The predicted tree, if every token carries a predicted head.
    pub fn predicted_tree(&self) -> Option<DependencyTree> {
        self.tokens
            .iter()
            .map(|t| t.pred_head)
            .collect::<Option<Vec<_>>>()
            .map(DependencyTree::new)
    }
}

/// Head assignment for a sentence: `heads()[i]` is the head of token
/// `i + 1`, and 0 denotes the virtual root.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DependencyTree {
    heads: Vec<usize>,
}

impl DependencyTree {
    pub fn new(heads: Vec<usize>) -> Self {
        DependencyTree { heads }
    }

    pub fn heads(&self) -> &[usize] {
        &self.heads
    }

    pub fn into_heads(self) -> Vec<usize> {
        self.heads
    }

    pub fn len(&self) -> usize {
        self.heads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heads.is_empty()
    }

    /// Head of the token at 1-based `index`.
    pub fn head(&self, index: usize) -> usize {
        self.heads[index - 1]
    }

    pub fn set_head(&mut self, index: usize, head: usize) {
        self.heads[index - 1] = head;
    }

    /// Tokens attached to the virtual root, in sentence order.
    pub fn root_dependents(&self) -> Vec<usize> {
        self.dependents(0)
    }

    /// Tokens attached to `head`, in sentence order.
    pub fn dependents(&self, head: usize) -> Vec<usize> {
        self.heads
            .iter()
            .enumerate()
            .filter(|&(_, &h)| h == head)
            .map(|(i, _)| i + 1)
            .collect()
    }
}

/// A broken structural constraint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// The tree does not cover exactly the sentence's tokens.
    LengthMismatch {
        tokens: usize,
        heads: usize,
    },
    HeadOutOfRange {
        token: usize,
        head: usize,
    },
    SelfAttachment {
        token: usize,
    },
    NoRoot,
    MultipleRoots {
        tokens: Vec<usize>,
    },
    /// Tokens lying on a cycle.
    Cycle {
        tokens: Vec<usize>,
    },
    /// Tokens whose head chain never reaches the root.
    Disconnected {
        tokens: Vec<usize>,
    },
    /// A function word with a dependent.
    FunctionHead {
        head: usize,
        dependent: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::LengthMismatch { tokens, heads } => {
                write!(f, "{heads} heads for {tokens} tokens")
            }
            Violation::HeadOutOfRange { token, head } => {
                write!(f, "token {token} has out-of-range head {head}")
            }
            Violation::SelfAttachment { token } => write!(f, "token {token} heads itself"),
            Violation::NoRoot => f.write_str("no token attached to the root"),
            Violation::MultipleRoots { tokens } => {
                write!(f, "multiple root dependents: {tokens:?}")
            }
            Violation::Cycle { tokens } => write!(f, "cycle through tokens {tokens:?}"),
            Violation::Disconnected { tokens } => {
                write!(f, "tokens not connected to the root: {tokens:?}")
            }
            Violation::FunctionHead { head, dependent } => {
                write!(f, "function word {head} heads token {dependent}")
            }
        }
    }
}

/// Checks single-rootedness, acyclicity, connectivity and function-word
/// leafness. Returns every violation found; an empty list means the tree is
/// valid.
///
/// A sentence without any content word cannot keep all function words as
/// leaves, so in that case its root dependent may head the others.
pub fn validate_tree(sentence: &Sentence, tree: &DependencyTree) -> Vec<Violation> {
    let n = sentence.len();
    let mut violations = Vec::new();
    if tree.len() != n {
        violations.push(Violation::LengthMismatch {
            tokens: n,
            heads: tree.len(),
        });
        return violations;
    }

    let mut bad_range = false;
    for (i, &head) in tree.heads().iter().enumerate() {
        let token = i + 1;
        if head > n {
            violations.push(Violation::HeadOutOfRange { token, head });
            bad_range = true;
        } else if head == token {
            violations.push(Violation::SelfAttachment { token });
            bad_range = true;
        }
    }

    let roots = tree.root_dependents();
    match roots.len() {
        0 => violations.push(Violation::NoRoot),
        1 => {}
        _ => violations.push(Violation::MultipleRoots {
            tokens: roots.clone(),
        }),
    }

    if !bad_range {
        let (cycle, disconnected) = unreachable_tokens(tree);
        if !cycle.is_empty() {
            violations.push(Violation::Cycle { tokens: cycle });
        }
        if !disconnected.is_empty() {
            violations.push(Violation::Disconnected {
                tokens: disconnected,
            });
        }
    }

    let has_content = sentence.tokens.iter().any(|t| t.upos.is_content());
    for (i, &head) in tree.heads().iter().enumerate() {
        if head == 0 || head > n || head == i + 1 {
            continue;
        }
        let head_token = sentence.token(head);
        if head_token.upos.is_function() {
            let exempt = !has_content && roots.len() == 1 && roots[0] == head;
            if !exempt {
                violations.push(Violation::FunctionHead {
                    head,
                    dependent: i + 1,
                });
            }
        }
    }

    violations
}

/// Splits the tokens that never reach the root into those on a cycle and
/// those merely leading into one.
fn unreachable_tokens(tree: &DependencyTree) -> (Vec<usize>, Vec<usize>) {
    #[derive(Clone, Copy, PartialEq)]
    enum State {
        Unvisited,
        InProgress,
        Reaches,
        Stuck,
    }

    let n = tree.len();
    let mut state = vec![State::Unvisited; n + 1];
    state[0] = State::Reaches;
    let mut on_cycle = vec![false; n + 1];

    for start in 1..=n {
        if state[start] != State::Unvisited {
            continue;
        }
        let mut path = Vec::new();
        let mut node = start;
        while state[node] == State::Unvisited {
            state[node] = State::InProgress;
            path.push(node);
            node = tree.head(node);
        }
        let outcome = match state[node] {
            State::InProgress => {
                let pos = path.iter().position(|&p| p == node).unwrap();
                for &p in &path[pos..] {
                    on_cycle[p] = true;
                }
                State::Stuck
            }
            other => other,
        };
        for p in path {
            state[p] = outcome;
        }
    }

    let mut cycle = Vec::new();
    let mut disconnected = Vec::new();
    for token in 1..=n {
        if state[token] == State::Stuck {
            if on_cycle[token] {
                cycle.push(token);
            } else {
                disconnected.push(token);
            }
        }
    }
    (cycle, disconnected)
}

fn parse_meta(comment: &str) -> Option<(&str, &str)> {
    let body = comment.strip_prefix('#')?.trim();
    let (key, value) = body.split_once('=')?;
    let key = key.trim();
    if key.is_empty() || key.contains(char::is_whitespace) {
        return None;
    }
    Some((key, value.trim()))
}

#[derive(Default)]
struct SentenceBuilder {
    sentence: Sentence,
    first_line: usize,
    /// Line number of each token, for late head-range errors.
    token_lines: Vec<usize>,
    started: bool,
}

impl SentenceBuilder {
    fn push_line(&mut self, line_no: usize, line: &str) -> Result<()> {
        if !self.started {
            self.started = true;
            self.first_line = line_no;
        }

        if line.starts_with('#') {
            if self.sentence.tokens.is_empty() && self.sentence.passthrough.is_empty() {
                if let Some((k, v)) = parse_meta(line) {
                    self.sentence.meta.insert(k.to_owned(), v.to_owned());
                }
                self.sentence.comments.push(line.to_owned());
            } else {
                let pos = self.sentence.tokens.len();
                self.sentence.passthrough.push((pos, line.to_owned()));
            }
            return Ok(());
        }

        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 10 {
            return Err(format_error(
                line_no,
                format!("expected 10 tab-separated columns, found {}", fields.len()),
            ));
        }

        let id = fields[0];
        if is_range_or_empty_node(id) {
            let pos = self.sentence.tokens.len();
            self.sentence.passthrough.push((pos, line.to_owned()));
            return Ok(());
        }

        let index: usize = id
            .parse()
            .map_err(|_| format_error(line_no, format!("invalid token id `{id}`")))?;
        let expected = self.sentence.tokens.len() + 1;
        if index != expected {
            return Err(format_error(
                line_no,
                format!("token id {index} out of sequence, expected {expected}"),
            ));
        }

        let upos: Upos = fields[3]
            .parse()
            .map_err(|e| format_error(line_no, format!("{e}")))?;

        let gold_head = match fields[6] {
            "_" => None,
            h => Some(h.parse::<usize>().map_err(|_| {
                format_error(line_no, format!("head `{h}` is not a non-negative integer"))
            })?),
        };

        self.sentence.tokens.push(Token {
            index,
            form: fields[1].to_owned(),
            lemma: fields[2].to_owned(),
            upos,
            xpos: fields[4].to_owned(),
            feats: fields[5].to_owned(),
            gold_head,
            deprel: fields[7].to_owned(),
            deps: fields[8].to_owned(),
            misc: fields[9].to_owned(),
            pred_head: None,
        });
        self.token_lines.push(line_no);
        Ok(())
    }

    fn finish(self) -> Result<Option<Sentence>> {
        if !self.started {
            return Ok(None);
        }
        if self.sentence.tokens.is_empty() {
            return Err(format_error(self.first_line, "sentence without tokens"));
        }
        let n = self.sentence.len();
        for (token, &line) in self.sentence.tokens.iter().zip(&self.token_lines) {
            if let Some(head) = token.gold_head {
                if head > n {
                    return Err(format_error(
                        line,
                        format!("head {head} exceeds sentence length {n}"),
                    ));
                }
            }
        }
        Ok(Some(self.sentence))
    }
}

fn is_range_or_empty_node(id: &str) -> bool {
    let split = |sep: char| {
        id.split_once(sep).is_some_and(|(a, b)| {
            !a.is_empty()
                && !b.is_empty()
                && a.bytes().all(|c| c.is_ascii_digit())
                && b.bytes().all(|c| c.is_ascii_digit())
        })
    };
    split('-') || split('.')
}

fn format_error(line: usize, message: impl Into<String>) -> Error {
    Error::Format {
        line,
        message: message.into(),
    }
}

/// Reads all sentences from CoNLL-U input.
pub fn read_conllu<R: BufRead>(reader: R) -> Result<Vec<Sentence>> {
    let mut sentences = Vec::new();
    let mut builder = SentenceBuilder::default();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.trim().is_empty() {
            if let Some(sentence) = std::mem::take(&mut builder).finish()? {
                sentences.push(sentence);
            }
            continue;
        }
        builder.push_line(i + 1, line)?;
    }
    if let Some(sentence) = builder.finish()? {
        sentences.push(sentence);
    }
    Ok(sentences)
}

/// Reads CoNLL-U from a string.
pub fn read_conllu_str(text: &str) -> Result<Vec<Sentence>> {
    read_conllu(text.as_bytes())
}

/// Writes sentences with their predicted heads in column 7 and the
/// relation `dep` in column 8. Enhanced dependencies are cleared.
pub fn write_conllu<W: Write>(mut writer: W, sentences: &[Sentence]) -> Result<()> {
    for (s, sentence) in sentences.iter().enumerate() {
        for (t, token) in sentence.tokens.iter().enumerate() {
            if token.pred_head.is_none() {
                return Err(Error::MissingPredictedHead {
                    sentence: s + 1,
                    token: t + 1,
                });
            }
        }

        for comment in &sentence.comments {
            writeln!(writer, "{comment}")?;
        }
        let mut passthrough = sentence.passthrough.iter().peekable();
        for (pos, token) in sentence.tokens.iter().enumerate() {
            while let Some((_, line)) = passthrough.next_if(|(p, _)| *p == pos) {
                writeln!(writer, "{line}")?;
            }
            writeln!(
                writer,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t_\t{}",
                token.index,
                token.form,
                token.lemma,
                token.upos,
                token.xpos,
                token.feats,
                token.pred_head.unwrap(),
                UNLABELED_RELATION,
                token.misc,
            )?;
        }
        for (_, line) in passthrough {
            writeln!(writer, "{line}")?;
        }
        writeln!(writer)?;
    }
    Ok(())
}

/// Writes CoNLL-U to a string.
pub fn write_conllu_string(sentences: &[Sentence]) -> Result<String> {
    let mut buf = Vec::new();
    write_conllu(&mut buf, sentences)?;
    Ok(String::from_utf8(buf).expect("CoNLL-U output is UTF-8"))
}
