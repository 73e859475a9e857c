mod http;

use std::fs::{self, File};
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use sat2probe::eval::{GroupField, ModelResponse, ScoreRecord};
use sat2probe::harness::report::{self, read_csv, write_csv, write_rows};
use sat2probe::harness::{
    add_stories, clue_tally, evaluate, export_dimacs, generate_dataset, read_dataset, read_jsonl, score_responses,
    verify, write_jsonl, ChatResponder, DatasetRecord, MockModel, MockPolicy, Responder, RunConfig,
};
use sat2probe::logic::{decide, read_dimacs};
use sat2probe::par::Execution;
use sat2probe::verbalize::chat::{LoggingClient, RetryingClient};
use sat2probe::verbalize::mock::StoryWriter;
use sat2probe::verbalize::{ChatClient, Theme};

use crate::http::HttpClient;

#[derive(Parser)]
#[command(name = "sat2probe", version, about = "Generate, verbalize and score 2-SAT reasoning probes")]
struct Cli {
    /// Master seed (overrides the config).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Run configuration, JSON or TOML.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,
    /// Maximum concurrent requests or formulas.
    #[arg(long, global = true)]
    parallelism: Option<usize>,
    /// Output-token budget per reply.
    #[arg(long, global = true)]
    max_output_tokens: Option<u32>,
    /// Skip re-deciding every stored formula on load.
    #[arg(long, global = true)]
    no_verify: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the dataset described by the config.
    Generate {
        #[arg(long, default_value = "dataset.jsonl")]
        output: String,
    },
    /// Replace (or extend) template verbalizations with stories.
    VerbalizeLlm {
        #[arg(long)]
        dataset: PathBuf,
        /// Themes to write; defaults to the config's.
        #[arg(long, value_delimiter = ',')]
        themes: Vec<Theme>,
        /// Use the offline story writer instead of an endpoint.
        #[arg(long)]
        mock_writer: bool,
        #[command(flatten)]
        endpoint: EndpointArgs,
        #[arg(long)]
        keep_templates: bool,
        #[arg(long, default_value = "dataset_llm.jsonl")]
        output: String,
    },
    /// Answer every prompt with a model.
    Evaluate {
        #[arg(long)]
        dataset: PathBuf,
        /// oracle, anti_oracle, always_yes, always_no or coin(p).
        #[arg(long, conflicts_with_all = ["model", "endpoint"])]
        mock: Option<MockPolicy>,
        /// Filler words before a mock answer.
        #[arg(long, default_value_t = 0, requires = "mock")]
        mock_padding: usize,
        #[command(flatten)]
        endpoint: EndpointArgs,
        /// Output file; defaults to responses-<model>.jsonl.
        #[arg(long)]
        output: Option<String>,
    },
    /// Score responses and write the metric tables.
    Score {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long, required = true, num_args = 1..)]
        responses: Vec<PathBuf>,
    },
    /// Friedman tests with BH adjustment over the swept knobs.
    Stats {
        #[arg(long)]
        scores: PathBuf,
        /// Single BH family label; by default one family per generator.
        #[arg(long)]
        family: Option<String>,
        #[arg(long, default_value = "pvalues.csv")]
        output: String,
    },
    /// Write every instance as a DIMACS file.
    ExportDimacs {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long, default_value = "dimacs")]
        dir: String,
    },
}

#[derive(Args, Clone)]
struct EndpointArgs {
    /// Endpoint name from the config.
    #[arg(long)]
    endpoint: Option<String>,
    /// Model id for an ad-hoc endpoint.
    #[arg(long)]
    model: Option<String>,
    #[arg(long, env = "CHAT_API_BASE")]
    base_url: Option<String>,
    /// Transport attempts per request.
    #[arg(long, default_value_t = 4)]
    retries: u32,
    #[arg(long, default_value_t = 300)]
    timeout_secs: u64,
    /// Append every exchange to this JSONL file.
    #[arg(long)]
    log_requests: Option<PathBuf>,
}

/// Integrity problems end the run with this code.
const INTEGRITY_FAILED: u8 = 2;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(INTEGRITY_FAILED),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn load_config(cli: &Cli) -> Result<RunConfig> {
    let mut config = match &cli.config {
        None => RunConfig::default(),
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            if path.extension().is_some_and(|e| e == "toml") {
                toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
            } else {
                serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
            }
        }
    };
    if let Some(seed) = cli.seed {
        config.master_seed = seed;
    }
    if let Some(p) = cli.parallelism {
        config.parallelism = p;
    }
    if let Some(t) = cli.max_output_tokens {
        config.max_output_tokens = Some(t);
    }
    Ok(config)
}

fn out_path(cli: &Cli, name: &str) -> Result<PathBuf> {
    fs::create_dir_all(&cli.out_dir).with_context(|| format!("creating {}", cli.out_dir.display()))?;
    Ok(cli.out_dir.join(name))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?))
}

fn open(path: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(File::open(path).with_context(|| format!("opening {}", path.display()))?))
}

fn check(records: &[DatasetRecord], cli: &Cli) -> bool {
    if cli.no_verify {
        return true;
    }
    let failures = verify(records, Execution::Parallel);
    for f in &failures {
        eprintln!("integrity: {}: {}", f.id, f.reason);
    }
    failures.is_empty()
}

fn load_dataset(path: &Path, cli: &Cli) -> Result<(Vec<DatasetRecord>, bool)> {
    let records = read_dataset(open(path)?).with_context(|| format!("reading {}", path.display()))?;
    let ok = check(&records, cli);
    Ok((records, ok))
}

fn file_safe(name: &str) -> String {
    name.chars().map(|c| if c.is_ascii_alphanumeric() || "-_.".contains(c) { c } else { '_' }).collect()
}

fn chat_client(args: &EndpointArgs, config: &RunConfig) -> Result<(String, Arc<dyn ChatClient>, Option<u32>)> {
    let spec = match &args.endpoint {
        Some(name) => Some(
            config
                .endpoints
                .iter()
                .find(|e| &e.name == name)
                .with_context(|| format!("no endpoint `{name}` in the config"))?,
        ),
        None => None,
    };
    let name = match (spec, &args.model) {
        (Some(s), _) => s.name.clone(),
        (None, Some(m)) => m.clone(),
        (None, None) => bail!("give --mock, --endpoint or --model"),
    };
    let model = spec.and_then(|s| s.model.clone()).or_else(|| args.model.clone()).unwrap_or_else(|| name.clone());
    let base_url = spec
        .and_then(|s| s.base_url.clone())
        .or_else(|| args.base_url.clone())
        .or_else(|| std::env::var("OPENAI_BASE_URL").ok())
        .unwrap_or_else(|| "https://api.openai.com/v1".to_string());
    let key = std::env::var("CHAT_API_KEY").or_else(|_| std::env::var("OPENAI_API_KEY")).ok();
    let budget = spec.and_then(|s| s.max_output_tokens).or(config.max_output_tokens);
    let http = HttpClient::new(&base_url, key, &model, Duration::from_secs(args.timeout_secs));
    let retrying = RetryingClient::new(http, args.retries, Duration::from_secs(1));
    let client: Arc<dyn ChatClient> = match &args.log_requests {
        Some(path) => {
            let sink = fs::OpenOptions::new()
                .create(true)
                .append(true)
                .open(path)
                .with_context(|| format!("opening {}", path.display()))?;
            Arc::new(LoggingClient::new(retrying, Box::new(sink)))
        }
        None => Arc::new(retrying),
    };
    Ok((name, client, budget))
}

fn run(cli: Cli) -> Result<bool> {
    let config = load_config(&cli)?;
    match &cli.command {
        Command::Generate { output } => {
            let (records, skipped) = generate_dataset(&config, Execution::Parallel);
            for s in &skipped {
                eprintln!("skipped {}: {}", s.label, s.error);
            }
            let ok = check(&records, &cli);
            let path = out_path(&cli, output)?;
            write_jsonl(create(&path)?, &records)?;
            let config_path = out_path(&cli, "config.json")?;
            fs::write(&config_path, serde_json::to_string_pretty(&config)? + "\n")?;
            eprintln!("wrote {} records to {}", records.len(), path.display());
            Ok(ok)
        }
        Command::VerbalizeLlm { dataset, themes, mock_writer, endpoint, keep_templates, output } => {
            let (records, ok) = load_dataset(dataset, &cli)?;
            if !ok {
                return Ok(false);
            }
            let themes = if themes.is_empty() { config.themes.clone() } else { themes.clone() };
            let mut opts = config.story.clone();
            let client: Arc<dyn ChatClient> = if *mock_writer {
                Arc::new(StoryWriter::new())
            } else {
                let (_, client, budget) = chat_client(endpoint, &config)?;
                opts.max_tokens = opts.max_tokens.or(budget);
                client
            };
            let (out, failures) =
                add_stories(&records, &themes, client.as_ref(), &opts, config.parallelism, *keep_templates);
            let path = out_path(&cli, output)?;
            write_jsonl(create(&path)?, &out)?;
            let t = clue_tally(&out);
            eprintln!(
                "wrote {} records to {}; {} clues: {} first pass, {} retried, {} fallback; {} failed stories",
                out.len(),
                path.display(),
                t.clues,
                t.first_pass,
                t.retried,
                t.fallback,
                failures.len()
            );
            Ok(true)
        }
        Command::Evaluate { dataset, mock, mock_padding, endpoint, output } => {
            let (records, ok) = load_dataset(dataset, &cli)?;
            if !ok {
                return Ok(false);
            }
            let responder: Box<dyn Responder> = match mock {
                Some(policy) => {
                    Box::new(MockModel::new(*policy).with_padding(*mock_padding).with_budget(config.max_output_tokens))
                }
                None => {
                    let (name, client, max_tokens) = chat_client(endpoint, &config)?;
                    Box::new(ChatResponder { name, client, max_tokens })
                }
            };
            let responses = evaluate(&records, responder.as_ref(), config.parallelism);
            let failed = responses.iter().filter(|r| r.error.is_some()).count();
            let truncated = responses.iter().filter(|r| r.truncated).count();
            let name = output.clone().unwrap_or_else(|| format!("responses-{}.jsonl", file_safe(responder.name())));
            let path = out_path(&cli, &name)?;
            write_jsonl(create(&path)?, &responses)?;
            eprintln!(
                "wrote {} responses to {} ({failed} failed, {truncated} truncated)",
                responses.len(),
                path.display()
            );
            Ok(true)
        }
        Command::Score { dataset, responses } => {
            let (records, ok) = load_dataset(dataset, &cli)?;
            let mut all: Vec<ModelResponse> = Vec::new();
            for p in responses {
                all.extend(
                    read_jsonl::<_, ModelResponse>(open(p)?).with_context(|| format!("reading {}", p.display()))?,
                );
            }
            let (scores, mismatches) = score_responses(&records, &all);
            for m in &mismatches {
                eprintln!("mismatch: {} / {}: {}", m.instance_id, m.verbalization_id, m.reason);
            }
            write_csv(create(&out_path(&cli, "scores.csv")?)?, &scores)?;
            let fields = [GroupField::Model, GroupField::Generator, GroupField::Clauses, GroupField::Level];
            write_csv(create(&out_path(&cli, "metrics.csv")?)?, &report::metrics_table(&scores, &fields))?;
            let by_verbalization = [GroupField::Model, GroupField::Generator, GroupField::Verbalization];
            write_csv(
                create(&out_path(&cli, "metrics_by_verbalization.csv")?)?,
                &report::metrics_table(&scores, &by_verbalization),
            )?;
            write_rows(create(&out_path(&cli, "table1.csv")?)?, &report::main_table(&scores))?;
            eprintln!("scored {} responses into {}", scores.len(), cli.out_dir.display());
            Ok(ok && mismatches.is_empty())
        }
        Command::Stats { scores, family, output } => {
            let scores: Vec<ScoreRecord> =
                read_csv(open(scores)?).with_context(|| format!("reading {}", scores.display()))?;
            let rows = report::significance(&scores, family.as_deref());
            let path = out_path(&cli, output)?;
            write_csv(create(&path)?, &rows)?;
            eprintln!("wrote {} tests to {}", rows.len(), path.display());
            Ok(true)
        }
        Command::ExportDimacs { dataset, dir } => {
            let (records, ok) = load_dataset(dataset, &cli)?;
            let dir = out_path(&cli, dir)?;
            let paths = export_dimacs(&records, &dir)?;
            let mut agree = true;
            for (r, p) in records.iter().zip(&paths) {
                let f = read_dimacs(&fs::read_to_string(p)?).with_context(|| format!("re-reading {}", p.display()))?;
                if decide(&f).is_sat() != r.ground_truth.is_sat() {
                    eprintln!("integrity: {} decides differently after export", r.id);
                    agree = false;
                }
            }
            eprintln!("wrote {} files to {}", paths.len(), dir.display());
            Ok(ok && agree)
        }
    }
}
