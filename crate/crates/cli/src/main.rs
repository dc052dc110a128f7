use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::{fs, io};

use clap::{Args, Parser, Subcommand, ValueEnum};
use clinsum_core::{
    data, evaluate_concepts, evaluate_negation, format_text, format_trace, format_tsv, load_eval, load_rules,
    sentence_lines, split_note, ChainProvider, CommandProvider, DetectError, Detector, Dictionary,
    DictionaryError, EvalError, GroupsError, Lexicon, LexiconError, Metrics, NegationMethod, Pipeline,
    PipelineError, ProviderError, RulesError, SemanticGroups, TreeProvider, TreebankProvider, WindowConfig,
};
use clinsum_tree::{match_all, parse_pattern, PatternError, Treebank, TreebankError};
use thiserror::Error;

#[derive(Parser)]
#[command(name = "clinsum", version, about = "Summarize clinical notes into itemized concepts with negation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Itemized concepts per note section.
    Summarize {
        note: PathBuf,
        #[command(flatten)]
        res: Resources,
        #[command(flatten)]
        concepts: ConceptFiles,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Negation detection over tokenized sentences, one per line.
    Negate {
        sentences: PathBuf,
        #[command(flatten)]
        res: Resources,
        #[command(flatten)]
        concepts: ConceptFiles,
        /// Print per-sentence records and the final itemized output.
        #[arg(long)]
        trace: bool,
    },
    /// Print every match of a tree pattern in a treebank.
    Tregex {
        pattern: String,
        #[arg(long, required = true)]
        trees: Vec<PathBuf>,
    },
    /// Negation accuracy against an annotated file.
    EvalNeg {
        eval: PathBuf,
        #[command(flatten)]
        res: Resources,
        #[arg(long, value_enum, default_value_t = Mode::Syntax)]
        mode: Mode,
        #[arg(long, default_value_t = 5)]
        window: usize,
        /// Let commas continue a window scope.
        #[arg(long)]
        no_comma_terminator: bool,
    },
    /// Concept identification scores against an annotated file.
    EvalCon {
        eval: PathBuf,
        #[command(flatten)]
        concepts: ConceptFiles,
        #[arg(long, value_enum, default_value_t = Switch::On)]
        filter: Switch,
    },
}

#[derive(Args)]
struct Resources {
    /// Treebank sidecar file; may be repeated.
    #[arg(long)]
    trees: Vec<PathBuf>,
    /// Parser command reading one fragment per line and writing one tree per line.
    #[arg(long)]
    parser_cmd: Option<String>,
    #[arg(long)]
    lexicon: Option<PathBuf>,
    #[arg(long)]
    rules: Option<PathBuf>,
    #[arg(long)]
    stopwords: Option<PathBuf>,
}

#[derive(Args)]
struct ConceptFiles {
    #[arg(long)]
    dict: Option<PathBuf>,
    #[arg(long)]
    groups: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Tsv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Syntax,
    Negex,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Read { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Lexicon(#[from] LexiconError),
    #[error("{0}")]
    Rules(#[from] RulesError),
    #[error("{0}")]
    Dictionary(#[from] DictionaryError),
    #[error("{0}")]
    Groups(#[from] GroupsError),
    #[error("{0}")]
    Treebank(#[from] TreebankError),
    #[error("{0}")]
    Pattern(#[from] PatternError),
    #[error("{0}")]
    Pipeline(#[from] PipelineError),
    #[error("{0}")]
    Eval(#[from] EvalError),
    #[error("{0}")]
    Input(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        let missing = match self {
            CliError::Pipeline(e) => matches!(e.source, DetectError::Provider(ProviderError::Missing { .. })),
            CliError::Eval(EvalError::MissingTrees { .. }) => true,
            CliError::Eval(EvalError::Detect(DetectError::Provider(ProviderError::Missing { .. }))) => true,
            _ => false,
        };
        if missing {
            2
        } else {
            1
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

fn load_treebank(paths: &[PathBuf]) -> Result<Treebank, CliError> {
    let mut bank = Treebank::new();
    for p in paths {
        bank.extend(Treebank::parse(&read(p)?)?);
    }
    Ok(bank)
}

impl Resources {
    fn provider(&self) -> Result<Box<dyn TreeProvider>, CliError> {
        let bank = TreebankProvider::new(load_treebank(&self.trees)?);
        Ok(match &self.parser_cmd {
            Some(cmd) => Box::new(ChainProvider::new(vec![
                Box::new(bank),
                Box::new(CommandProvider::new(cmd.clone())),
            ])),
            None => Box::new(bank),
        })
    }

    fn lexicon(&self) -> Result<Lexicon, CliError> {
        Ok(match &self.lexicon {
            Some(p) => Lexicon::parse(&read(p)?)?,
            None => data::lexicon(),
        })
    }

    fn detector(&self) -> Result<Detector, CliError> {
        let rules = match &self.rules {
            Some(p) => load_rules(p)?,
            None => data::rules(),
        };
        let stopwords: HashSet<String> = match &self.stopwords {
            Some(p) => data::parse_stopwords(&read(p)?),
            None => data::stopwords(),
        };
        Ok(Detector::new(self.lexicon()?, rules, stopwords))
    }
}

impl ConceptFiles {
    fn dictionary(&self) -> Result<Dictionary, CliError> {
        Ok(match &self.dict {
            Some(p) => Dictionary::parse(&read(p)?)?,
            None => data::dictionary(),
        })
    }

    fn groups(&self) -> Result<SemanticGroups, CliError> {
        Ok(match &self.groups {
            Some(p) => SemanticGroups::parse(&read(p)?)?,
            None => data::groups(),
        })
    }

    fn pipeline(&self, res: &Resources) -> Result<Pipeline, CliError> {
        Ok(Pipeline {
            detector: res.detector()?,
            dictionary: self.dictionary()?,
            groups: Some(self.groups()?),
        })
    }
}

fn metrics_report(label: &str, m: &Metrics) -> String {
    format!(
        "{label}\naccuracy\t{:.3}\nprecision\t{:.3}\nrecall\t{:.3}\nf1\t{:.3}\ntp\t{}\nfp\t{}\nfn\t{}\ntotal\t{}\n",
        m.accuracy, m.precision, m.recall, m.f1, m.tp, m.fp, m.fn_, m.total
    )
}

fn run(command: Command) -> Result<String, CliError> {
    match command {
        Command::Summarize {
            note,
            res,
            concepts,
            format,
        } => {
            let pipeline = concepts.pipeline(&res)?;
            let doc = split_note(&read(&note)?);
            let summaries = pipeline.summarize(&doc, res.provider()?.as_ref())?;
            Ok(match format {
                Format::Text => format_text(&summaries),
                Format::Tsv => format_tsv(&summaries),
            })
        }
        Command::Negate {
            sentences,
            res,
            concepts,
            trace,
        } => {
            let pipeline = concepts.pipeline(&res)?;
            let doc = sentence_lines(&read(&sentences)?);
            let summaries = pipeline.summarize_tokenized(&doc, res.provider()?.as_ref())?;
            if trace {
                return Ok(format_trace(&summaries));
            }
            let mut out = String::new();
            let analyses = summaries.iter().flat_map(|s| &s.sentences);
            for (i, a) in analyses.enumerate() {
                for n in &a.negations {
                    let span = n.span.map_or("none".to_string(), |s| s.to_string());
                    let _ = writeln!(
                        out,
                        "{i}\t{}\t{}\t{}\t{span}\t{}",
                        n.trigger.term.text(),
                        n.trigger.term.phrase_type,
                        n.rule_name,
                        n.negated_tokens.join(" ")
                    );
                }
            }
            Ok(out)
        }
        Command::Tregex { pattern, trees } => {
            let pattern = parse_pattern(&pattern)?;
            let bank = load_treebank(&trees)?;
            let mut out = String::new();
            for (i, entry) in bank.entries().iter().enumerate() {
                for b in match_all(&pattern, &entry.tree) {
                    let node = entry.tree.find(b.root).expect("bound node exists");
                    let _ = write!(out, "{i}\t{node}");
                    for (name, id) in &b.captures {
                        let captured = entry.tree.find(*id).expect("bound node exists");
                        let _ = write!(out, "\t{name}={captured}");
                    }
                    out.push('\n');
                }
            }
            Ok(out)
        }
        Command::EvalNeg {
            eval,
            res,
            mode,
            window,
            no_comma_terminator,
        } => {
            let records = load_eval(&eval)?;
            let label = match mode {
                Mode::Syntax => "mode\tsyntax",
                Mode::Negex => "mode\tnegex",
            };
            let result = match mode {
                Mode::Syntax => {
                    let detector = res.detector()?;
                    let provider = res.provider()?;
                    let method = NegationMethod::Syntax {
                        detector: &detector,
                        provider: provider.as_ref(),
                    };
                    evaluate_negation(&records, &method)?
                }
                Mode::Negex => {
                    let mut config = WindowConfig::default()
                        .with_window(window)
                        .map_err(|e| CliError::Input(e.to_string()))?;
                    if no_comma_terminator {
                        config = config.without_comma();
                    }
                    let lexicon = res.lexicon()?;
                    let method = NegationMethod::Negex {
                        lexicon: &lexicon,
                        config: &config,
                    };
                    evaluate_negation(&records, &method)?
                }
            };
            let mut out = metrics_report(label, &result.metrics);
            for o in result.outcomes.iter().filter(|o| o.polarity == clinsum_core::Polarity::Negated && !o.covered) {
                let _ = writeln!(out, "missed\t{}\t{}", o.record, o.text);
            }
            Ok(out)
        }
        Command::EvalCon { eval, concepts, filter } => {
            let records = load_eval(&eval)?;
            let dict = concepts.dictionary()?;
            let groups = concepts.groups()?;
            let m = evaluate_concepts(&records, &dict, (filter == Switch::On).then_some(&groups));
            let label = match filter {
                Switch::On => "filter\ton",
                Switch::Off => "filter\toff",
            };
            Ok(metrics_report(label, &m))
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            log::debug!("{e:?}");
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
