//! `udp`: parse, score and inspect CoNLL-U corpora.
//!
//! Exit status is 0 on success, 1 on a usage error and 2 when the input
//! data cannot be read or processed.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use udp_core::baselines::Side;
use udp_core::direction::estimate_adp_direction;
use udp_core::eval::{domain_report, uas};
use udp_core::pipeline::{parse_corpus, AdpSetting, ParseMode, PosSource};
use udp_core::rules::parse_rules;
use udp_core::{read_conllu, write_conllu, Direction, ParserConfig, Sentence, Upos};

#[derive(Parser, Debug)]
#[command(
    name = "udp",
    version,
    about = "Training-free Universal Dependencies parser"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a corpus and write CoNLL-U with predicted heads.
    Parse(ParseArgs),
    /// Score predicted heads against gold heads.
    Eval(EvalArgs),
    /// Print token, tag and ADP bigram statistics.
    Stats(StatsArgs),
}

#[derive(Args, Debug)]
struct ParseArgs {
    /// Input CoNLL-U file; standard input if omitted or `-`.
    input: Option<PathBuf>,
    /// Output file; standard output if omitted or `-`.
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ModeArg::Udp)]
    mode: ModeArg,
    /// Source of POS tags.
    #[arg(long, value_enum, default_value_t = PosArg::GoldColumn)]
    pos: PosArg,
    /// ADP attachment direction.
    #[arg(long, value_enum, default_value_t = AdpArg::Auto)]
    adp: AdpArg,
    /// PageRank teleport probability, in (0, 1).
    #[arg(long, default_value_t = 0.05, value_parser = probability)]
    teleport: f64,
    /// Teleport weight of the main predicate relative to other tokens.
    #[arg(long, default_value_t = 5.0, value_parser = positive)]
    personalization_weight: f64,
    /// Baseline fallback side; chain direction in adjacency mode.
    #[arg(long, value_enum, default_value_t = SideArg::Right)]
    backoff_direction: SideArg,
    /// Head-rule file: `HEAD DEP` and `DIR TAG LEFT|RIGHT|FREE` lines.
    #[arg(long)]
    rules: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EvalArgs {
    gold: PathBuf,
    pred: PathBuf,
    /// Also report UAS per value of this sentence metadata field.
    #[arg(long, value_name = "KEY")]
    group_by: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct StatsArgs {
    /// Input CoNLL-U file; standard input if omitted or `-`.
    input: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Udp,
    UdpNopr,
    Baseline,
    Adjacency,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PosArg {
    GoldColumn,
    Naive,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AdpArg {
    Auto,
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SideArg {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Kv,
}

fn probability(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if x > 0.0 && x < 1.0 {
        Ok(x)
    } else {
        Err(format!("{x} is not in (0, 1)"))
    }
}

fn positive(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(format!("{x} is not a positive number"))
    }
}

fn file_path(path: &Option<PathBuf>) -> Option<&Path> {
    path.as_deref().filter(|p| p != &Path::new("-"))
}

fn read_corpus(path: Option<&Path>) -> anyhow::Result<Vec<Sentence>> {
    let reader: Box<dyn BufRead> = match path {
        Some(p) => Box::new(BufReader::new(
            File::open(p).with_context(|| format!("cannot open {}", p.display()))?,
        )),
        None => Box::new(io::stdin().lock()),
    };
    let name = path.map_or_else(|| "<stdin>".to_owned(), |p| p.display().to_string());
    read_conllu(reader).with_context(|| format!("reading {name}"))
}

fn parse(args: ParseArgs) -> anyhow::Result<()> {
    let mut config = ParserConfig {
        mode: match args.mode {
            ModeArg::Udp => ParseMode::Udp,
            ModeArg::UdpNopr => ParseMode::UdpNoPr,
            ModeArg::Baseline => ParseMode::Baseline,
            ModeArg::Adjacency => ParseMode::Adjacency,
        },
        pos: match args.pos {
            PosArg::GoldColumn => PosSource::GoldColumn,
            PosArg::Naive => PosSource::Naive,
        },
        adp: match args.adp {
            AdpArg::Auto => AdpSetting::Auto,
            AdpArg::Left => AdpSetting::Fixed(Direction::HeadOnLeft),
            AdpArg::Right => AdpSetting::Fixed(Direction::HeadOnRight),
        },
        teleport: args.teleport,
        personalization_weight: args.personalization_weight,
        backoff: match args.backoff_direction {
            SideArg::Left => Side::Left,
            SideArg::Right => Side::Right,
        },
        rules: None,
        policy: None,
    };
    if let Some(path) = &args.rules {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read {}", path.display()))?;
        let (default_rules, base_policy) = config.resolved_rules();
        let (rules, policy) =
            parse_rules(&text, base_policy).with_context(|| format!("in {}", path.display()))?;
        config.rules = Some(if rules.is_empty() {
            default_rules
        } else {
            rules
        });
        config.policy = Some(policy);
    }

    let corpus = read_corpus(file_path(&args.input))?;
    let outcome = parse_corpus(&corpus, &config)?;

    match file_path(&args.output) {
        Some(p) => {
            let file = File::create(p).with_context(|| format!("cannot create {}", p.display()))?;
            let mut w = BufWriter::new(file);
            write_conllu(&mut w, &outcome.sentences)?;
            w.flush()?;
        }
        None => {
            let mut w = BufWriter::new(io::stdout().lock());
            write_conllu(&mut w, &outcome.sentences)?;
            w.flush()?;
        }
    }

    let counts = outcome.adp_counts;
    eprintln!(
        "adp direction {} (adp-nominal {}, nominal-adp {})",
        direction_name(outcome.adp_direction),
        counts.adp_nominal_count,
        counts.nominal_adp_count
    );
    let total = outcome.sentences.len();
    if config.mode == ParseMode::Baseline {
        eprintln!(
            "well-formed trees {}/{} ({:.2}%)",
            outcome.well_formed,
            total,
            if total == 0 {
                100.0
            } else {
                100.0 * outcome.well_formed as f64 / total as f64
            }
        );
    } else if outcome.well_formed != total {
        bail!(
            "{} of {total} trees are malformed",
            total - outcome.well_formed
        );
    }
    Ok(())
}

fn eval(args: EvalArgs) -> anyhow::Result<()> {
    let gold = read_corpus(Some(&args.gold))?;
    let pred = read_corpus(Some(&args.pred))?;
    let report = uas(&gold, &pred)?;
    let mut out = match args.format {
        Format::Text => report.to_text(),
        Format::Kv => report.to_key_values(),
    };
    if let Some(key) = &args.group_by {
        let domains = domain_report(&gold, &pred, key)?;
        match args.format {
            Format::Text => {
                out.push('\n');
                out.push_str(&domains.to_text());
            }
            Format::Kv => out.push_str(&domains.to_key_values()),
        }
    }
    io::stdout().lock().write_all(out.as_bytes())?;
    Ok(())
}

fn stats(args: StatsArgs) -> anyhow::Result<()> {
    let corpus = read_corpus(file_path(&args.input))?;
    let mut histogram = [0usize; Upos::COUNT];
    for token in corpus.iter().flat_map(|s| &s.tokens) {
        histogram[token.upos.ordinal()] += 1;
    }
    let counts = estimate_adp_direction(&corpus);

    let mut out = BufWriter::new(io::stdout().lock());
    writeln!(out, "sentences {}", corpus.len())?;
    writeln!(out, "tokens {}", histogram.iter().sum::<usize>())?;
    for tag in Upos::ALL {
        let n = histogram[tag.ordinal()];
        if n > 0 {
            writeln!(out, "tag {tag} {n}")?;
        }
    }
    writeln!(out, "adp-nominal {}", counts.adp_nominal_count)?;
    writeln!(out, "nominal-adp {}", counts.nominal_adp_count)?;
    writeln!(out, "direction {}", direction_name(counts.resolved()))?;
    out.flush()?;
    Ok(())
}

fn direction_name(direction: Direction) -> &'static str {
    match direction {
        Direction::HeadOnRight => "right",
        Direction::HeadOnLeft => "left",
        Direction::Free => "free",
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Parse(args) => parse(args),
        Command::Eval(args) => eval(args),
        Command::Stats(args) => stats(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("udp: error: {e:#}");
            ExitCode::from(2)
        }
    }
}
