//! Attachment scores and derived statistics.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::conllu::Sentence;
use crate::error::{Error, Result};
use crate::pos::Upos;
use crate::scalar::Scalar;

/// Group label for sentences without the grouping field.
pub const UNKNOWN_GROUP: &str = "unknown";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub correct: usize,
    pub total: usize,
}

impl Tally {
    pub fn fraction(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.correct as f64 / self.total as f64
        }
    }

    fn add(&mut self, correct: bool) {
        self.total += 1;
        self.correct += usize::from(correct);
    }

    fn merge(&mut self, other: Tally) {
        self.correct += other.correct;
        self.total += other.total;
    }
}

/// Unlabeled attachment scores over a corpus. All tokens count,
/// punctuation included; per-POS buckets use gold tags.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct EvalReport {
    pub attachment: Tally,
    pub per_pos: BTreeMap<Upos, Tally>,
    pub roots: Tally,
    /// Sentences whose gold tree has zero or several root dependents.
    /// Their root is scored against the first gold root, if any.
    pub irregular_gold_roots: usize,
}

impl EvalReport {
    pub fn uas(&self) -> f64 {
        self.attachment.fraction()
    }

    pub fn root_accuracy(&self) -> f64 {
        self.roots.fraction()
    }

    pub fn token_count(&self) -> usize {
        self.attachment.total
    }

    pub fn sentence_count(&self) -> usize {
        self.roots.total
    }

    pub fn merge(&mut self, other: &EvalReport) {
        self.attachment.merge(other.attachment);
        for (&tag, &tally) in &other.per_pos {
            self.per_pos.entry(tag).or_default().merge(tally);
        }
        self.roots.merge(other.roots);
        self.irregular_gold_roots += other.irregular_gold_roots;
    }

    /// Human-readable report.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "Sentences: {}", self.sentence_count()).unwrap();
        writeln!(out, "Tokens: {}", self.token_count()).unwrap();
        writeln!(out, "UAS {:.2}", 100.0 * self.uas()).unwrap();
        writeln!(out, "Root accuracy {:.2}", 100.0 * self.root_accuracy()).unwrap();
        if self.irregular_gold_roots > 0 {
            writeln!(
                out,
                "Warning: {} gold sentence(s) without exactly one root",
                self.irregular_gold_roots
            )
            .unwrap();
        }
        writeln!(
            out,
            "{:<9}{:>9}{:>9}{:>9}",
            "POS", "correct", "total", "UAS"
        )
        .unwrap();
        for (tag, tally) in &self.per_pos {
            writeln!(
                out,
                "{:<9}{:>9}{:>9}{:>9.2}",
                tag.as_str(),
                tally.correct,
                tally.total,
                100.0 * tally.fraction()
            )
            .unwrap();
        }
        out
    }

    /// One `key=value` pair per line.
    pub fn to_key_values(&self) -> String {
        let mut out = String::new();
        self.write_key_values(&mut out, "");
        out
    }

    fn write_key_values(&self, out: &mut String, prefix: &str) {
        writeln!(out, "{prefix}sentences={}", self.sentence_count()).unwrap();
        writeln!(out, "{prefix}tokens={}", self.token_count()).unwrap();
        writeln!(out, "{prefix}correct={}", self.attachment.correct).unwrap();
        writeln!(out, "{prefix}uas={:.6}", self.uas()).unwrap();
        writeln!(out, "{prefix}root_correct={}", self.roots.correct).unwrap();
        writeln!(out, "{prefix}root_accuracy={:.6}", self.root_accuracy()).unwrap();
        writeln!(
            out,
            "{prefix}irregular_gold_roots={}",
            self.irregular_gold_roots
        )
        .unwrap();
        for (tag, tally) in &self.per_pos {
            writeln!(out, "{prefix}pos.{tag}.correct={}", tally.correct).unwrap();
            writeln!(out, "{prefix}pos.{tag}.total={}", tally.total).unwrap();
            writeln!(out, "{prefix}pos.{tag}.uas={:.6}", tally.fraction()).unwrap();
        }
    }
}

fn predicted_head(sentence: &Sentence, s: usize, t: usize) -> Result<usize> {
    let token = &sentence.tokens[t];
    token
        .pred_head
        .or(token.gold_head)
        .ok_or(Error::MissingPredictedHead {
            sentence: s + 1,
            token: t + 1,
        })
}

fn check_alignment(gold: &[Sentence], pred: &[Sentence]) -> Result<()> {
    for (s, (g, p)) in gold.iter().zip(pred).enumerate() {
        if g.len() != p.len() {
            return Err(Error::Misaligned {
                sentence: s + 1,
                token: None,
                message: format!("{} gold tokens vs {} predicted", g.len(), p.len()),
            });
        }
        for (t, (gt, pt)) in g.tokens.iter().zip(&p.tokens).enumerate() {
            if gt.form != pt.form {
                return Err(Error::Misaligned {
                    sentence: s + 1,
                    token: Some(t + 1),
                    message: format!("form `{}` vs `{}`", gt.form, pt.form),
                });
            }
        }
    }
    if gold.len() != pred.len() {
        return Err(Error::Misaligned {
            sentence: gold.len().min(pred.len()) + 1,
            token: None,
            message: format!("{} gold sentences vs {} predicted", gold.len(), pred.len()),
        });
    }
    Ok(())
}

fn score_sentence(gold: &Sentence, pred: &Sentence, s: usize) -> Result<EvalReport> {
    let mut report = EvalReport::default();
    let mut gold_roots = Vec::new();
    let mut pred_root = None;

    for (t, token) in gold.tokens.iter().enumerate() {
        let gold_head = token.gold_head.ok_or(Error::MissingGoldHead {
            sentence: s + 1,
            token: t + 1,
        })?;
        let pred_head = predicted_head(pred, s, t)?;
        let correct = gold_head == pred_head;
        report.attachment.add(correct);
        report.per_pos.entry(token.upos).or_default().add(correct);
        if gold_head == 0 {
            gold_roots.push(t);
        }
        if pred_head == 0 && pred_root.is_none() {
            pred_root = Some(t);
        }
    }

    if gold_roots.len() != 1 {
        report.irregular_gold_roots = 1;
    }
    let root_hit = matches!((gold_roots.first(), pred_root), (Some(&g), Some(p)) if g == p);
    report.roots.add(root_hit);
    Ok(report)
}

/// Scores `pred` against `gold`.
///
/// Predicted heads come from `pred_head`, or from column 7 for corpora
/// read back from disk.
pub fn uas(gold: &[Sentence], pred: &[Sentence]) -> Result<EvalReport> {
    check_alignment(gold, pred)?;
    let mut report = EvalReport::default();
    for (s, (g, p)) in gold.iter().zip(pred).enumerate() {
        report.merge(&score_sentence(g, p, s)?);
    }
    Ok(report)
}

/// Additional parse errors per POS error:
/// `(E(parse with predicted POS) - E(parse with gold POS)) / E(POS)`, with
/// `E(x) = 1 - accuracy(x)`.
pub fn error_propagation<T: Scalar>(
    parse_acc_pred_pos: T,
    parse_acc_gold_pos: T,
    pos_acc: T,
) -> Result<T> {
    let unit = |x: T| x >= T::zero() && x <= T::one();
    if !(unit(parse_acc_pred_pos) && unit(parse_acc_gold_pos) && unit(pos_acc)) {
        return Err(Error::InvalidParameter(
            "accuracies must lie in [0, 1]".into(),
        ));
    }
    if pos_acc == T::one() {
        return Err(Error::UndefinedErrorPropagation);
    }
    let error = |acc: T| T::one() - acc;
    Ok((error(parse_acc_pred_pos) - error(parse_acc_gold_pos)) / error(pos_acc))
}

/// Mean and population standard deviation. Empty input gives zeros.
pub fn mean_and_std<T: Scalar>(values: &[T]) -> (T, T) {
    if values.is_empty() {
        return (T::zero(), T::zero());
    }
    let n = T::from_count(values.len());
    let mean = values.iter().copied().sum::<T>() / n;
    let var = values.iter().map(|&v| (v - mean) * (v - mean)).sum::<T>() / n;
    (mean, var.sqrt())
}

/// Scores per group of sentences.
#[derive(Clone, Debug, PartialEq)]
pub struct DomainReport {
    pub key: String,
    pub groups: BTreeMap<String, EvalReport>,
    /// Mean of group UAS values, each group weighted equally.
    pub mean_uas: f64,
    /// Population standard deviation of group UAS values.
    pub std_uas: f64,
}

impl DomainReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{:<16}{:>10}{:>9}", self.key, "sentences", "UAS").unwrap();
        for (name, report) in &self.groups {
            writeln!(
                out,
                "{:<16}{:>10}{:>9.2}",
                name,
                report.sentence_count(),
                100.0 * report.uas()
            )
            .unwrap();
        }
        writeln!(
            out,
            "mean {:.2} std {:.2}",
            100.0 * self.mean_uas,
            100.0 * self.std_uas
        )
        .unwrap();
        out
    }

    pub fn to_key_values(&self) -> String {
        let mut out = String::new();
        writeln!(out, "group_key={}", self.key).unwrap();
        writeln!(out, "group_count={}", self.groups.len()).unwrap();
        writeln!(out, "group_mean_uas={:.6}", self.mean_uas).unwrap();
        writeln!(out, "group_std_uas={:.6}", self.std_uas).unwrap();
        for (name, report) in &self.groups {
            report.write_key_values(&mut out, &format!("group.{name}."));
        }
        out
    }
}

/// Scores each group of sentences sharing the `key` metadata value of the
/// gold sentence. Sentences without it fall under `unknown`.
pub fn domain_report(gold: &[Sentence], pred: &[Sentence], key: &str) -> Result<DomainReport> {
    check_alignment(gold, pred)?;
    let mut groups: BTreeMap<String, EvalReport> = BTreeMap::new();
    for (s, (g, p)) in gold.iter().zip(pred).enumerate() {
        let name = g.meta.get(key).map_or(UNKNOWN_GROUP, String::as_str);
        groups
            .entry(name.to_owned())
            .or_default()
            .merge(&score_sentence(g, p, s)?);
    }
    let values: Vec<f64> = groups.values().map(EvalReport::uas).collect();
    let (mean_uas, std_uas) = mean_and_std(&values);
    Ok(DomainReport {
        key: key.to_owned(),
        groups,
        mean_uas,
        std_uas,
    })
}
