//! Command-line front end: `trace`, `sweep`, `eval` and `matrix-inspect`.
//!
//! Settings come from built-in defaults, then an optional `key = value`
//! config file (`--config`), then command-line flags, later sources
//! overriding earlier ones.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::corpus::{load_answer_set, ProjectBundle};
use crate::embeddings::{load_embeddings, EmbeddingTable};
use crate::error::{Error, Result};
use crate::evalkit::{check_answer_ids, evaluate, EvalReport};
use crate::linker::{
    best_f2, filter_links, links_csv, parse_links, score_all, sweep, sweep_csv, threshold_grid,
    LinkerConfig, Method, SweepRow,
};
use crate::pipeline::PreparedCorpus;
use crate::preprocess::{Normalizer, Preprocessor, StopwordList};
use crate::vectorize::term_document_csv;
use crate::wordsim::{build_matrix, oov_rate, Neighbor, WordSimConfig, WordSimilarityMatrix};

pub const DEFAULT_SWEEP_STEP: f64 = 0.01;

#[derive(Debug, Parser)]
#[command(name = "reqtrace", version, about = "Recover trace links between high- and low-level requirements")]
pub struct Cli {
    /// Config file with `key = value` lines; flags override it
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Score all HLR x LLR pairs and write links above the link threshold
    Trace {
        #[command(flatten)]
        pipeline: PipelineArgs,
        /// Term-document matrix CSV dump
        #[arg(long, value_name = "FILE")]
        dump_tdm: Option<PathBuf>,
        /// Word-similarity matrix dump as `term_i,term_j,value` CSV
        #[arg(long, value_name = "FILE")]
        dump_matrix: Option<PathBuf>,
    },
    /// Sweep the link threshold and report precision/recall/F1/F2 per step
    Sweep {
        #[command(flatten)]
        pipeline: PipelineArgs,
    },
    /// Evaluate a links file against an answer set
    Eval {
        /// Links CSV (`hlr_id,llr_id,score`) or whitespace-separated id pairs
        #[arg(long, value_name = "FILE")]
        links: PathBuf,
        /// Gold answer set, one `HLR_ID LLR_ID` pair per line
        #[arg(long, value_name = "FILE")]
        answers: PathBuf,
        /// Also write the report as JSON
        #[arg(long, value_name = "FILE")]
        json: Option<PathBuf>,
    },
    /// Show the strongest related words of one vocabulary term
    MatrixInspect {
        #[command(flatten)]
        pipeline: PipelineArgs,
        /// Vocabulary term to inspect
        #[arg(long)]
        term: String,
        /// Number of neighbors to list
        #[arg(long, default_value_t = 10)]
        k: usize,
    },
}

#[derive(Debug, Clone, Default, Args)]
pub struct PipelineArgs {
    /// High-level requirements, `ID<TAB>text` per line
    #[arg(long, value_name = "FILE")]
    pub high: Option<PathBuf>,
    /// Low-level requirements, `ID<TAB>text` per line
    #[arg(long, value_name = "FILE")]
    pub low: Option<PathBuf>,
    /// Gold answer set (required by sweep)
    #[arg(long, value_name = "FILE")]
    pub answers: Option<PathBuf>,
    /// Word vectors in word2vec/GloVe text format (required by the enhanced method)
    #[arg(long, value_name = "FILE")]
    pub embeddings: Option<PathBuf>,
    /// Stopword list, one word per line [default: bundled English list]
    #[arg(long, value_name = "FILE")]
    pub stopwords: Option<PathBuf>,
    /// Word normalizer: lemma or porter [default: lemma]
    #[arg(long)]
    pub normalizer: Option<String>,
    /// Word similarities below this are zeroed [default: 0.5]
    #[arg(long)]
    pub sim_threshold: Option<f64>,
    /// Cap on the summed similarity of each word's related words [default: 1.0]
    #[arg(long)]
    pub syn_threshold: Option<f64>,
    /// Minimum score for a pair to become a link [default: 0.5]
    #[arg(long)]
    pub link_threshold: Option<f64>,
    /// Scoring method: enhanced or plain-vsm [default: enhanced]
    #[arg(long)]
    pub method: Option<String>,
    /// Threshold grid step for sweep [default: 0.01]
    #[arg(long)]
    pub sweep_step: Option<f64>,
    /// Output file [default: standard output]
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

/// Fully resolved settings for one pipeline run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub high: PathBuf,
    pub low: PathBuf,
    pub answers: Option<PathBuf>,
    pub embeddings: Option<PathBuf>,
    pub stopwords: Option<PathBuf>,
    pub normalizer: Normalizer,
    pub wordsim: WordSimConfig,
    pub linker: LinkerConfig,
    pub sweep_step: f64,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    /// Defaults for everything but the two requirement files.
    pub fn new(high: impl Into<PathBuf>, low: impl Into<PathBuf>) -> Self {
        Self {
            high: high.into(),
            low: low.into(),
            answers: None,
            embeddings: None,
            stopwords: None,
            normalizer: Normalizer::default(),
            wordsim: WordSimConfig::default(),
            linker: LinkerConfig::default(),
            sweep_step: DEFAULT_SWEEP_STEP,
            out: None,
        }
    }

    /// Merges flags over config-file values over defaults, then validates.
    pub fn resolve(args: &PipelineArgs, file: &ConfigFile) -> Result<Self> {
        let path = |flag: &Option<PathBuf>, key: &str| flag.clone().or_else(|| file.path(key));
        let parsed = |flag: Option<f64>, key: &str| -> Result<Option<f64>> {
            match flag {
                Some(v) => Ok(Some(v)),
                None => file.number(key),
            }
        };
        let text = |flag: &Option<String>, key: &str| flag.clone().or_else(|| file.get(key).map(str::to_owned));

        let high = path(&args.high, "high").ok_or_else(|| Error::InvalidConfig("--high is required".into()))?;
        let low = path(&args.low, "low").ok_or_else(|| Error::InvalidConfig("--low is required".into()))?;
        let mut cfg = RunConfig::new(high, low);
        cfg.answers = path(&args.answers, "answers");
        cfg.embeddings = path(&args.embeddings, "embeddings");
        cfg.stopwords = path(&args.stopwords, "stopwords");
        cfg.out = path(&args.out, "out");
        if let Some(n) = text(&args.normalizer, "normalizer") {
            cfg.normalizer = n.parse()?;
        }
        let defaults = WordSimConfig::default();
        cfg.wordsim = WordSimConfig::new(
            parsed(args.sim_threshold, "sim_threshold")?.unwrap_or(defaults.similarity_threshold()),
            parsed(args.syn_threshold, "syn_threshold")?.unwrap_or(defaults.synonym_threshold()),
        )?;
        let method = match text(&args.method, "method") {
            Some(m) => m.parse()?,
            None => Method::default(),
        };
        cfg.linker = LinkerConfig::new(
            parsed(args.link_threshold, "link_threshold")?.unwrap_or(LinkerConfig::default().link_threshold()),
            method,
        )?;
        cfg.sweep_step = parsed(args.sweep_step, "sweep_step")?.unwrap_or(DEFAULT_SWEEP_STEP);
        threshold_grid(cfg.sweep_step)?;
        Ok(cfg)
    }

    /// Every input path that is set must exist.
    pub fn check_paths(&self) -> Result<()> {
        let inputs = [
            Some(&self.high),
            Some(&self.low),
            self.answers.as_ref(),
            self.embeddings.as_ref(),
            self.stopwords.as_ref(),
        ];
        for p in inputs.into_iter().flatten() {
            fs::metadata(p).map_err(|e| Error::io(p, e))?;
        }
        Ok(())
    }
}

/// Parsed `key = value` config file. Relative paths resolve against the
/// file's directory.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
    base: Option<PathBuf>,
}

const CONFIG_KEYS: &[&str] = &[
    "high",
    "low",
    "answers",
    "embeddings",
    "stopwords",
    "normalizer",
    "sim_threshold",
    "syn_threshold",
    "link_threshold",
    "method",
    "sweep_step",
    "out",
];

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::parse(&text)?;
        cfg.base = path.parent().map(Path::to_path_buf);
        Ok(cfg)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::InvalidConfig(format!("config line {}: expected `key = value`", n + 1))
            })?;
            let key = key.trim().replace('-', "_");
            if !CONFIG_KEYS.contains(&key.as_str()) {
                return Err(Error::InvalidConfig(format!("config line {}: unknown key `{key}`", n + 1)));
            }
            values.insert(key, value.trim().to_owned());
        }
        Ok(Self { values, base: None })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    fn path(&self, key: &str) -> Option<PathBuf> {
        let p = PathBuf::from(self.get(key)?);
        match &self.base {
            Some(base) if p.is_relative() => Some(base.join(p)),
            _ => Some(p),
        }
    }

    fn number(&self, key: &str) -> Result<Option<f64>> {
        self.get(key)
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|_| Error::InvalidConfig(format!("config key `{key}`: `{v}` is not a number")))
            })
            .transpose()
    }
}

/// An error tagged with the pipeline stage that produced it.
#[derive(Debug)]
pub struct StageError {
    pub stage: &'static str,
    pub error: Error,
}

impl StageError {
    pub fn exit_code(&self) -> i32 {
        self.error.class().exit_code()
    }
}

impl fmt::Display for StageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} failed: {}", self.stage, self.error)
    }
}

impl std::error::Error for StageError {}

trait StageExt<T> {
    fn stage(self, stage: &'static str) -> std::result::Result<T, StageError>;
}

impl<T> StageExt<T> for Result<T> {
    fn stage(self, stage: &'static str) -> std::result::Result<T, StageError> {
        self.map_err(|error| StageError { stage, error })
    }
}

fn io_stage<'a>(path: &'a Path, stage: &'static str) -> impl Fn(io::Error) -> StageError + 'a {
    move |e| StageError {
        stage,
        error: Error::io(path, e),
    }
}

/// Everything the pipeline built on the way to scoring.
pub struct PipelineRun {
    pub corpus: PreparedCorpus,
    pub embeddings: Option<EmbeddingTable>,
    pub matrix: Option<WordSimilarityMatrix>,
}

impl PipelineRun {
    pub fn oov_rate(&self) -> Option<f64> {
        self.embeddings.as_ref().map(|t| oov_rate(&self.corpus.vocab, t))
    }
}

/// Loads inputs and builds vectors, plus the word-similarity matrix when
/// embeddings are available.
pub fn run_pipeline(cfg: &RunConfig, need_matrix: bool) -> std::result::Result<PipelineRun, StageError> {
    cfg.check_paths().stage("config")?;
    if need_matrix && cfg.embeddings.is_none() {
        return Err(Error::InvalidConfig(
            "--embeddings is required for the enhanced method and matrix inspection".into(),
        ))
        .stage("config");
    }
    let bundle = ProjectBundle::load(&cfg.high, &cfg.low, cfg.answers.as_deref()).stage("load requirements")?;
    if let Some(answers) = &bundle.answers {
        check_answer_ids(answers, &bundle).stage("load answers")?;
    }
    let stopwords = match &cfg.stopwords {
        Some(p) => StopwordList::load(p).stage("load stopwords")?,
        None => StopwordList::english(),
    };
    let pre = Preprocessor::new(stopwords, cfg.normalizer);
    let corpus = PreparedCorpus::prepare(bundle, &pre).stage("vectorize")?;

    let embeddings = cfg
        .embeddings
        .as_deref()
        .map(|p| load_embeddings(p, Some(&corpus.vocab)))
        .transpose()
        .stage("load embeddings")?;
    let matrix = if need_matrix || cfg.linker.method == Method::Enhanced {
        embeddings
            .as_ref()
            .map(|t| build_matrix(&corpus.vocab, t, &cfg.wordsim))
    } else {
        None
    };
    Ok(PipelineRun {
        corpus,
        embeddings,
        matrix,
    })
}

fn write_output(path: Option<&Path>, content: &str, out: &mut dyn Write) -> std::result::Result<(), StageError> {
    match path {
        Some(p) => fs::write(p, content).map_err(io_stage(p, "write output")),
        None => out
            .write_all(content.as_bytes())
            .map_err(io_stage(Path::new("<stdout>"), "write output")),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceSummary {
    pub pairs: usize,
    pub links: usize,
    pub vocab_size: usize,
    pub oov_rate: Option<f64>,
    pub empty_docs: usize,
}

impl fmt::Display for TraceSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "pairs scored:    {}", self.pairs)?;
        writeln!(f, "links emitted:   {}", self.links)?;
        writeln!(f, "vocabulary size: {}", self.vocab_size)?;
        match self.oov_rate {
            Some(r) => writeln!(f, "OOV rate:        {:.4}", r)?,
            None => writeln!(f, "OOV rate:        n/a (no embeddings)")?,
        }
        write!(f, "empty documents: {}", self.empty_docs)
    }
}

/// Runs the full pipeline and writes the links CSV to `cfg.out` (or `out`).
///
/// The summary goes to `out` when the CSV goes to a file, else to `log`.
pub fn cmd_trace(
    cfg: &RunConfig,
    dump_tdm: Option<&Path>,
    dump_matrix: Option<&Path>,
    out: &mut dyn Write,
    log: &mut dyn Write,
) -> std::result::Result<TraceSummary, StageError> {
    let run = run_pipeline(cfg, cfg.linker.method == Method::Enhanced)?;
    let scored = score_all(&run.corpus.bundle, &run.corpus.vectors, run.matrix.as_ref(), &cfg.linker).stage("score")?;
    let links = filter_links(&scored, cfg.linker.link_threshold());

    if let Some(p) = dump_tdm {
        let csv = term_document_csv(&run.corpus.vocab, &run.corpus.ordered_vectors());
        fs::write(p, csv).map_err(io_stage(p, "dump term-document matrix"))?;
    }
    if let (Some(p), Some(m)) = (dump_matrix, &run.matrix) {
        fs::write(p, m.triples_csv(&run.corpus.vocab)).map_err(io_stage(p, "dump matrix"))?;
    }
    write_output(cfg.out.as_deref(), &links_csv(&links), out)?;

    let summary = TraceSummary {
        pairs: scored.len(),
        links: links.len(),
        vocab_size: run.corpus.vocab.len(),
        oov_rate: run.oov_rate(),
        empty_docs: run.corpus.empty_docs(crate::corpus::Level::High)
            + run.corpus.empty_docs(crate::corpus::Level::Low),
    };
    let sink: &mut dyn Write = if cfg.out.is_some() { out } else { log };
    writeln!(sink, "{summary}").map_err(io_stage(Path::new("<stdout>"), "write output"))?;
    Ok(summary)
}

pub fn cmd_eval(
    links_path: &Path,
    answers_path: &Path,
    json_out: Option<&Path>,
    out: &mut dyn Write,
) -> std::result::Result<EvalReport, StageError> {
    let text = fs::read_to_string(links_path).map_err(io_stage(links_path, "load links"))?;
    let links = parse_links(&text, &links_path.display().to_string()).stage("load links")?;
    let answers = load_answer_set(answers_path).stage("load answers")?;
    let report = evaluate(&links, &answers).stage("evaluate")?;
    writeln!(out, "{report}").map_err(io_stage(Path::new("<stdout>"), "write output"))?;
    if let Some(p) = json_out {
        fs::write(p, report.to_json() + "\n").map_err(io_stage(p, "write report"))?;
    }
    Ok(report)
}

pub fn cmd_sweep(
    cfg: &RunConfig,
    out: &mut dyn Write,
    log: &mut dyn Write,
) -> std::result::Result<Vec<SweepRow>, StageError> {
    if cfg.answers.is_none() {
        return Err(Error::InvalidConfig("sweep needs --answers".into())).stage("config");
    }
    let run = run_pipeline(cfg, cfg.linker.method == Method::Enhanced)?;
    let answers = run.corpus.bundle.answers.as_ref().expect("answers loaded");
    let scored = score_all(&run.corpus.bundle, &run.corpus.vectors, run.matrix.as_ref(), &cfg.linker).stage("score")?;
    let grid = threshold_grid(cfg.sweep_step).stage("config")?;
    let rows = sweep(&scored, answers, &grid).stage("evaluate")?;
    write_output(cfg.out.as_deref(), &sweep_csv(&rows), out)?;

    let sink: &mut dyn Write = if cfg.out.is_some() { out } else { log };
    if let Some(best) = best_f2(&rows) {
        writeln!(
            sink,
            "best F2 {:.4} at threshold {} (precision {:.4}, recall {:.4}, F1 {:.4}) -> {}",
            best.f2,
            best.threshold,
            best.precision,
            best.recall,
            best.f1,
            best.hayes_level()
        )
        .map_err(io_stage(Path::new("<stdout>"), "write output"))?;
    }
    Ok(rows)
}

/// Top-`k` neighbors of `term` in the word-similarity matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct InspectReport {
    pub term: String,
    pub has_embedding: bool,
    pub pre_cap_sum: f64,
    pub post_cap_sum: f64,
    pub neighbors: Vec<(String, Neighbor)>,
}

pub fn cmd_matrix_inspect(
    cfg: &RunConfig,
    term: &str,
    k: usize,
    out: &mut dyn Write,
) -> std::result::Result<InspectReport, StageError> {
    let run = run_pipeline(cfg, true)?;
    let vocab = &run.corpus.vocab;
    let matrix = run.matrix.as_ref().expect("matrix built when embeddings are set");

    let lowered = term.to_lowercase();
    let resolved = if vocab.contains(&lowered) {
        lowered
    } else {
        let stopwords = match &cfg.stopwords {
            Some(p) => StopwordList::load(p).stage("load stopwords")?,
            None => StopwordList::english(),
        };
        Preprocessor::new(stopwords, cfg.normalizer)
            .process(term)
            .into_iter()
            .next()
            .filter(|t| vocab.contains(t))
            .ok_or_else(|| StageError {
                stage: "matrix inspect",
                error: Error::UnknownTerm(term.to_owned()),
            })?
    };
    let i = vocab.index_of(&resolved).expect("resolved term is in vocabulary");
    let report = InspectReport {
        has_embedding: run.embeddings.as_ref().is_some_and(|t| t.contains(&resolved)),
        pre_cap_sum: matrix.row_pre_cap_sum(i).stage("matrix inspect")?,
        post_cap_sum: matrix.row_offdiag_sum(i).stage("matrix inspect")?,
        neighbors: matrix
            .top_neighbors(i, k)
            .stage("matrix inspect")?
            .into_iter()
            .map(|n| (vocab.term(n.col).unwrap_or("?").to_owned(), n))
            .collect(),
        term: resolved,
    };

    let mut text = format!(
        "term `{}` ({}), off-diagonal sum {:.4} before cap, {:.4} after (synonym threshold {})\n",
        report.term,
        if report.has_embedding { "embedded" } else { "no embedding" },
        report.pre_cap_sum,
        report.post_cap_sum,
        cfg.wordsim.synonym_threshold()
    );
    if report.neighbors.is_empty() {
        text.push_str("no related words\n");
    } else {
        text.push_str("neighbor,pre_cap,post_cap\n");
        for (word, n) in &report.neighbors {
            text.push_str(&format!("{word},{:.6},{:.6}\n", n.pre_cap, n.value));
        }
    }
    out.write_all(text.as_bytes())
        .map_err(io_stage(Path::new("<stdout>"), "write output"))?;
    Ok(report)
}

fn resolve(config: Option<&Path>, args: &PipelineArgs) -> std::result::Result<RunConfig, StageError> {
    let file = match config {
        Some(p) => ConfigFile::load(p).stage("config")?,
        None => ConfigFile::default(),
    };
    RunConfig::resolve(args, &file).stage("config")
}

/// Runs one parsed command, returning the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write, log: &mut dyn Write) -> i32 {
    let config = cli.config.as_deref();
    let result = match &cli.command {
        Command::Trace {
            pipeline,
            dump_tdm,
            dump_matrix,
        } => resolve(config, pipeline)
            .and_then(|cfg| cmd_trace(&cfg, dump_tdm.as_deref(), dump_matrix.as_deref(), out, log).map(drop)),
        Command::Sweep { pipeline } => resolve(config, pipeline).and_then(|cfg| cmd_sweep(&cfg, out, log).map(drop)),
        Command::Eval { links, answers, json } => cmd_eval(links, answers, json.as_deref(), out).map(drop),
        Command::MatrixInspect { pipeline, term, k } => {
            resolve(config, pipeline).and_then(|cfg| cmd_matrix_inspect(&cfg, term, *k, out).map(drop))
        }
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(log, "error: {e}");
            e.exit_code()
        }
    }
}

/// Parses `args` and runs the command against the real stdout and stderr.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli, &mut io::stdout().lock(), &mut io::stderr().lock()),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                1
            } else {
                0
            }
        }
    }
}
