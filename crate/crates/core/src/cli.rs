//! Command-line front end.
//!
//! Failures print exactly one line on stderr:
//!
//! ```text
//! error stage=fit kind=missing_input message="missing stage input out/embeddings.emb (run the embed stage first)"
//! ```
//!
//! `message` is a JSON string, so the line splits cleanly on the first two
//! spaces.

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::pipeline::{Pipeline, PipelineConfig, PipelineError, Stage};

pub const THREADS_ENV: &str = "CONVO_TOPICS_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "convo-topics",
    version,
    about = "Topic modeling and model preference analytics for pairwise chat logs"
)]
pub struct Cli {
    /// TOML config file; built-in defaults when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Layout seed, overriding the config.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Run directory, overriding the config.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Input JSONL, overriding the config.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Abort on the first malformed input line.
    #[arg(long, global = true)]
    pub strict: bool,
    /// Print the effective config as TOML and exit.
    #[arg(long)]
    pub print_config: bool,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Parse, normalize and filter the input into documents.
    Preprocess,
    /// Produce document vectors.
    Embed,
    /// Layout, clustering, keywords and the topic hierarchy.
    Fit,
    /// Win matrices, rates, coverage and rankings.
    Analyze,
    /// SVG figures.
    Report,
    /// Every stage in order.
    All,
}

impl Command {
    fn stages(self) -> Vec<Stage> {
        match self {
            Command::Preprocess => vec![Stage::Preprocess],
            Command::Embed => vec![Stage::Embed],
            Command::Fit => vec![Stage::Fit],
            Command::Analyze => vec![Stage::Analyze],
            Command::Report => vec![Stage::Report],
            Command::All => Stage::ALL.to_vec(),
        }
    }
}

/// A failure tagged with where it happened.
#[derive(Debug)]
pub struct Failure {
    pub stage: &'static str,
    pub error: PipelineError,
}

impl Failure {
    fn config(error: PipelineError) -> Self {
        Self { stage: "config", error }
    }

    pub fn line(&self) -> String {
        let message = serde_json::to_string(&self.error.to_string()).expect("strings serialize");
        format!(
            "error stage={} kind={} message={message}",
            self.stage,
            self.error.kind()
        )
    }
}

/// Applies file config and flag overrides.
pub fn resolve_config(cli: &Cli) -> Result<PipelineConfig, PipelineError> {
    let mut config = match &cli.config {
        Some(p) => PipelineConfig::load(p)?,
        None => PipelineConfig::default(),
    };
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(out) = &cli.out {
        config.output_dir = out.clone();
    }
    if let Some(input) = &cli.input {
        config.input = input.clone();
    }
    config.strict |= cli.strict;
    config.validate()?;
    Ok(config)
}

fn configure_threads() -> Result<(), PipelineError> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| PipelineError::Config(format!("{THREADS_ENV} must be a positive integer, got {value:?}")))?;
    // a second call in the same process keeps the first pool
    if rayon::ThreadPoolBuilder::new().num_threads(n).build_global().is_err() {
        log::debug!("rayon pool already initialised");
    }
    Ok(())
}

/// Runs the parsed command; `Ok(Some(text))` is output for stdout.
pub fn run(cli: &Cli) -> Result<Option<String>, Failure> {
    let config = resolve_config(cli).map_err(Failure::config)?;
    if cli.print_config {
        return Ok(Some(config.to_toml()));
    }
    let Some(command) = cli.command else {
        return Err(Failure::config(PipelineError::Config(
            "no subcommand given (preprocess, embed, fit, analyze, report, all)".into(),
        )));
    };
    configure_threads().map_err(Failure::config)?;
    let pipeline = Pipeline::new(config).map_err(Failure::config)?;
    for stage in command.stages() {
        pipeline.run_stage(stage).map_err(|error| Failure {
            stage: stage.name(),
            error,
        })?;
    }
    Ok(None)
}

/// Entry point for the binary; returns the process exit code.
pub fn main_from_env() -> i32 {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Some(text)) => {
            print!("{text}");
            0
        }
        Ok(None) => 0,
        Err(f) => {
            eprintln!("{}", f.line());
            1
        }
    }
}
