//! Command-line surface.

use std::fs;
use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand};
use cricket_rules_core::lexicon::lint;
use cricket_rules_core::validation::{parse_rule_pairs, ValidationOptions};
use cricket_rules_core::{
    import_raw, parse_corpus, AnalysisType, Category, Corpus, CorpusError, FeatureLexicon, LoadReport, Opponents,
    RawContext, Roster,
};

use crate::analysis::{self, parse_categories, AnalysisError, AnalysisRequest, Dataset, DEFAULT_TOP_K};
use crate::json::render;
use crate::{server, svg, synth};

/// Lexicon shipped with the tool, used when `--lexicon` is not given.
pub const SHIPPED_LEXICON: &str = include_str!("../data/lexicon.tsv");

const EXIT_CODES: &str = "\
Exit codes:
   0  success
   2  usage error
   3  file could not be read or written
   4  invalid input file or filter
   5  corpus has no valid records
   6  filter selected no deliveries
   7  no delivery produced a feature pair (all-zero matrix)
   8  matrix has no usable dimension (rank zero) or is empty
   9  holdout split leaves one side empty
  10  unknown player
  11  lexicon lint found problems
  12  biplot comparison failed";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Input(String),
    #[error("corpus contains no valid records")]
    EmptyCorpus,
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("lexicon lint found {0} problem(s)")]
    Lint(usize),
    #[error("server error: {0}")]
    Server(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Server(_) => 3,
            CliError::Input(_) => 4,
            CliError::EmptyCorpus => 5,
            CliError::Analysis(e) => e.exit_code(),
            CliError::Lint(_) => 11,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "cricket-rules",
    version,
    about = "Mine batting and bowling strength and weakness rules from ball-by-ball commentary",
    after_help = EXIT_CODES
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Import commentary into a corpus file and report rejected lines.
    Ingest(IngestArgs),
    /// Mine rules and biplots for one filter; writes the analysis JSON.
    Analyze(AnalyzeArgs),
    /// Date-based holdout validation, or comparison with a human rule file.
    Validate(ValidateArgs),
    /// Export the confrontation matrix as a labeled text table.
    Cm(ExportArgs),
    /// Export the correspondence analysis at full precision.
    Ca(ExportArgs),
    /// Serve the read-only JSON API.
    Serve(ServeArgs),
    /// Lexicon utilities.
    #[command(subcommand)]
    Lexicon(LexiconCommand),
    /// Generate a seeded synthetic corpus.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    /// Input file: corpus records, or one commentary line per line with --raw.
    pub input: PathBuf,
    /// Write the accepted records as a corpus file.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Treat input as raw commentary lines.
    #[arg(long, requires_all = ["match_id", "date"])]
    pub raw: bool,
    #[arg(long)]
    pub match_id: Option<String>,
    #[arg(long)]
    pub date: Option<NaiveDate>,
    #[arg(long, default_value_t = 1)]
    pub innings: u8,
}

#[derive(Debug, Clone, Args)]
pub struct DataArgs {
    /// Corpus file (tab-separated records).
    #[arg(long)]
    pub corpus: PathBuf,
    /// Lexicon file; defaults to the shipped lexicon.
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
    /// Bowler roster (`player<TAB>fast|spin`), needed for class opponents.
    #[arg(long)]
    pub roster: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct FilterArgs {
    #[arg(long)]
    pub player: String,
    /// bat or bowl.
    #[arg(long = "type", default_value = "bat")]
    pub analysis_type: AnalysisType,
    /// all, fast, spin, or a comma-separated list of players.
    #[arg(long, default_value = "all")]
    pub opponents: Opponents,
    /// First date included (YYYY-MM-DD).
    #[arg(long)]
    pub from: Option<NaiveDate>,
    /// Last date included (YYYY-MM-DD).
    #[arg(long)]
    pub to: Option<NaiveDate>,
    /// Number of top bowling features reported per rule.
    #[arg(long, default_value_t = DEFAULT_TOP_K)]
    pub top_k: usize,
}

impl FilterArgs {
    pub fn request(&self) -> AnalysisRequest {
        let mut req = AnalysisRequest::new(self.player.clone(), self.analysis_type);
        req.opponents = self.opponents.clone();
        req.from = self.from;
        req.to = self.to;
        req.top_k = self.top_k;
        req
    }
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub filter: FilterArgs,
    /// Biplot categories: all, or a comma-separated subset of
    /// response, outcome, footwork, shot-area.
    #[arg(long, default_value = "all")]
    pub categories: String,
    /// Also write one SVG biplot per category into this directory.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub filter: FilterArgs,
    /// Holdout cutoff; defaults to one year before the latest delivery.
    #[arg(long)]
    pub cutoff: Option<NaiveDate>,
    /// Biplot compared between train and test.
    #[arg(long, default_value = "response")]
    pub category: Category,
    /// Compare the other rules too, not only strength and weakness.
    #[arg(long)]
    pub include_other: bool,
    /// Human-authored rule file (`anchor<TAB>bowling-feature`); compares it
    /// with rules mined from the whole selection instead of a holdout.
    #[arg(long)]
    pub compare_rules: Option<PathBuf>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub filter: FilterArgs,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, env = server::BIND_ENV, default_value = server::DEFAULT_BIND)]
    pub bind: SocketAddr,
}

#[derive(Debug, Subcommand)]
pub enum LexiconCommand {
    /// Report unknown features, non-normalized n-grams and duplicate lines.
    Lint {
        /// Lexicon file; defaults to the shipped lexicon.
        file: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, default_value_t = 2019)]
    pub seed: u64,
    /// Deliveries per batsman in each of the two epochs.
    #[arg(long, default_value_t = 250)]
    pub per_epoch: usize,
    /// Comma-separated batsmen; defaults to every synthetic batsman.
    #[arg(long, value_delimiter = ',')]
    pub batsmen: Vec<String>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Also write the bowler roster here.
    #[arg(long)]
    pub roster_out: Option<PathBuf>,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn emit(out: &mut dyn Write, path: Option<&Path>, contents: &str) -> Result<(), CliError> {
    match path {
        Some(p) => write(p, contents),
        None => out.write_all(contents.as_bytes()).map_err(|source| CliError::Io {
            path: PathBuf::from("<stdout>"),
            source,
        }),
    }
}

fn corpus_result(r: Result<(Corpus, LoadReport), CorpusError>) -> Result<(Corpus, LoadReport), CliError> {
    r.map_err(|e| match e {
        CorpusError::EmptyCorpus => CliError::EmptyCorpus,
    })
}

pub fn load_lexicon(path: Option<&Path>) -> Result<FeatureLexicon, CliError> {
    let text = match path {
        Some(p) => read(p)?,
        None => SHIPPED_LEXICON.to_string(),
    };
    FeatureLexicon::parse(&text).map_err(|e| CliError::Input(format!("lexicon: {e}")))
}

/// Load corpus, lexicon and roster; rejected corpus lines are reported on
/// stderr.
pub fn load_dataset(args: &DataArgs) -> Result<Dataset, CliError> {
    let (corpus, report) = corpus_result(parse_corpus(&read(&args.corpus)?))?;
    if !report.rejected.is_empty() {
        eprintln!(
            "warning: {} corpus line(s) rejected, first at line {}",
            report.rejected.len(),
            report.rejected[0].line
        );
    }
    let lexicon = load_lexicon(args.lexicon.as_deref())?;
    let roster = match &args.roster {
        Some(p) => Roster::parse(&read(p)?).map_err(|e| CliError::Input(e.to_string()))?,
        None => Roster::default(),
    };
    Ok(Dataset::new(corpus, lexicon, roster))
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Ingest(a) => ingest(&a, out),
        Command::Analyze(a) => {
            let ds = load_dataset(&a.data)?;
            let mut req = a.filter.request();
            req.categories = parse_categories(&a.categories)?;
            let run = analysis::run_analysis(&ds, &req)?;
            if let Some(dir) = &a.svg {
                fs::create_dir_all(dir).map_err(|source| CliError::Io {
                    path: dir.clone(),
                    source,
                })?;
                for &c in &req.categories {
                    let b = cricket_rules_core::biplot(&run.ca, c);
                    let title = format!("{} ({}): {} biplot", req.player, req.analysis_type.label(), c.label());
                    write(&dir.join(format!("{}.svg", c.label())), &svg::render(&b, &title))?;
                }
            }
            let doc = analysis::analysis_json(&ds, &req, &run);
            emit(out, a.output.as_deref(), &render(&doc))
        }
        Command::Validate(a) => {
            let ds = load_dataset(&a.data)?;
            let req = a.filter.request();
            let doc = match &a.compare_rules {
                Some(path) => {
                    let pairs = parse_rule_pairs(&read(path)?)
                        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
                    analysis::compare_rules(&ds, &req, &pairs)?
                }
                None => {
                    let opts = ValidationOptions {
                        cutoff: a.cutoff,
                        top_k: req.top_k,
                        category: a.category,
                        include_other: a.include_other,
                    };
                    analysis::validate(&ds, &req, &opts)?
                }
            };
            emit(out, a.output.as_deref(), &render(&doc))
        }
        Command::Cm(a) => {
            let ds = load_dataset(&a.data)?;
            let run = analysis::run_analysis(&ds, &a.filter.request());
            let text = run?.cm.to_text();
            emit(out, a.output.as_deref(), &text)
        }
        Command::Ca(a) => {
            let ds = load_dataset(&a.data)?;
            let run = analysis::run_analysis(&ds, &a.filter.request())?;
            emit(out, a.output.as_deref(), &run.ca.to_text())
        }
        Command::Serve(a) => {
            let ds = Arc::new(load_dataset(&a.data)?);
            let rt = tokio::runtime::Runtime::new().map_err(CliError::Server)?;
            rt.block_on(server::serve(ds, a.bind)).map_err(CliError::Server)
        }
        Command::Lexicon(LexiconCommand::Lint { file }) => {
            let text = match &file {
                Some(p) => read(p)?,
                None => SHIPPED_LEXICON.to_string(),
            };
            let issues = lint(&text);
            let mut report = String::new();
            for i in &issues {
                report.push_str(&format!("line {}: {}\n", i.line, i.problem));
            }
            if issues.is_empty() {
                let lexicon = FeatureLexicon::parse(&text).map_err(|e| CliError::Input(e.to_string()))?;
                report.push_str(&format!("ok: {} n-grams\n", lexicon.len()));
            }
            emit(out, None, &report)?;
            if issues.is_empty() {
                Ok(())
            } else {
                Err(CliError::Lint(issues.len()))
            }
        }
        Command::Synth(a) => {
            let mut cfg = synth::SynthConfig::two_epoch(a.seed, a.per_epoch);
            if !a.batsmen.is_empty() {
                let known: Vec<&'static str> = synth::BATSMEN.iter().map(|b| b.name).collect();
                cfg.batsmen = a
                    .batsmen
                    .iter()
                    .map(|b| {
                        known
                            .iter()
                            .copied()
                            .find(|k| k == b)
                            .ok_or_else(|| CliError::Input(format!("unknown synthetic batsman {b:?}; known: {}", known.join(", "))))
                    })
                    .collect::<Result<_, _>>()?;
            }
            let corpus = Corpus::new(synth::generate(&cfg)).map_err(|_| CliError::EmptyCorpus)?;
            if let Some(p) = &a.roster_out {
                write(p, &synth::roster_text())?;
            }
            emit(out, a.output.as_deref(), &corpus.to_text())
        }
    }
}

fn ingest(a: &IngestArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let text = read(&a.input)?;
    let result = if a.raw {
        let ctx = RawContext {
            match_id: a.match_id.clone().unwrap_or_default(),
            date: a.date.expect("clap enforces --date with --raw"),
            innings: a.innings,
        };
        import_raw(&text, &ctx)
    } else {
        parse_corpus(&text)
    };
    let (corpus, report) = corpus_result(result)?;
    let mut msg = format!("{} accepted, {} rejected\n", report.accepted, report.rejected.len());
    for r in &report.rejected {
        msg.push_str(&format!("line {}: {}\n", r.line, r.reason));
    }
    emit(out, None, &msg)?;
    if let Some(p) = &a.output {
        write(p, &corpus.to_text())?;
    }
    Ok(())
}
