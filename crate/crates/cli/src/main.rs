//! `gamsum`: corpus ingestion, labeling, training, summarization,
//! evaluation and explanation export.

mod io;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use gamsum::corpus::{load_model, save_model, split_corpus, CorpusSplit, LabelRecord, ModelKind, Subset};
use gamsum::eval::F1Averaging;
use gamsum::gam::{export_shape_tables, importance_ratios, importance_tsv, shape_tables_json, shape_tables_tsv, ImportanceStatistic};
use gamsum::pipeline::{evaluate_summaries, run_repeats, summarize_all, train_from_split, TrainOptions, TrainerConfigs};
use gamsum::summarizer::{lead_baseline, oracle_baseline, Summary, SummaryBudget};

#[derive(Debug, Parser)]
#[command(name = "gamsum", version, about = "Interpretable extractive summarization with additive models")]
struct Cli {
    /// Root seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for per-document work; does not change any output.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Summary length: `sentences:K` or `words:W`.
    #[arg(long, global = true, default_value = "sentences:3", value_parser = parse_budget)]
    budget: SummaryBudget,
    #[command(subcommand)]
    command: Command,
}

fn parse_budget(s: &str) -> std::result::Result<SummaryBudget, String> {
    s.parse().map_err(|e: gamsum::Error| e.to_string())
}

fn parse_ratios(s: &str) -> std::result::Result<[f64; 3], String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("bad ratio `{p}`: {e}")))
        .collect::<std::result::Result<_, _>>()?;
    parts
        .try_into()
        .map_err(|v: Vec<f64>| format!("expected three ratios, got {}", v.len()))
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate a corpus, write a train/validation/test split and per-document stats.
    Ingest {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        /// Train, validation and test fractions.
        #[arg(long, default_value = "0.8,0.1,0.1", value_parser = parse_ratios)]
        ratios: [f64; 3],
    },
    /// Compute greedy oracle labels (or copy supplied ones) for every document.
    Label {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Train a sentence classifier and write a model file.
    Train {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, value_enum)]
        model: Kind,
        #[arg(long)]
        out: PathBuf,
        /// Trainer settings as JSON with optional `ebm`, `gaminet` and `logistic` sections.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Training log (tab-separated).
        #[arg(long)]
        log: Option<PathBuf>,
        /// Do not use the validation split for early stopping.
        #[arg(long)]
        no_validation: bool,
        /// Keep the natural class imbalance.
        #[arg(long)]
        no_undersample: bool,
    },
    /// Score sentences with a model and write summaries.
    Summarize {
        #[command(flatten)]
        select: SelectArgs,
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write Lead or Oracle summaries.
    Baseline {
        #[command(flatten)]
        select: SelectArgs,
        #[arg(long, value_enum)]
        kind: BaselineKind,
        /// Labels for the oracle baseline; computed when absent.
        #[arg(long)]
        labels: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// ROUGE and sentence F1 of summaries against the corpus references.
    Evaluate {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        summaries: PathBuf,
        /// Labels for sentence F1; computed when absent.
        #[arg(long)]
        labels: Option<PathBuf>,
        /// Stem tokens before matching.
        #[arg(long)]
        stem: bool,
        #[arg(long, value_enum, default_value = "micro")]
        averaging: Averaging,
        /// Report file (JSON).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Row label in the printed table.
        #[arg(long, default_value = "model")]
        name: String,
    },
    /// Export shape tables, importance ratios and per-sentence contributions.
    Explain {
        #[command(flatten)]
        select: SelectArgs,
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, value_enum, default_value = "std")]
        statistic: Statistic,
    },
    /// Train and evaluate repeatedly with derived seeds; report per-run and mean scores.
    Repeats {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, value_enum)]
        model: Kind,
        #[arg(long, default_value_t = 10)]
        repeats: usize,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
struct DataArgs {
    #[arg(long)]
    corpus: PathBuf,
    /// Split file from `ingest`; without one, every document trains and nothing validates.
    #[arg(long)]
    split: Option<PathBuf>,
    /// Labels from `label`; computed when absent.
    #[arg(long)]
    labels: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SelectArgs {
    #[arg(long)]
    corpus: PathBuf,
    /// Restrict to one part of this split.
    #[arg(long, requires = "subset")]
    split: Option<PathBuf>,
    #[arg(long, value_enum, requires = "split")]
    subset: Option<Part>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Kind {
    Ebm,
    Gaminet,
    #[value(alias = "lr")]
    Logistic,
}

impl From<Kind> for ModelKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Ebm => ModelKind::Ebm,
            Kind::Gaminet => ModelKind::Gaminet,
            Kind::Logistic => ModelKind::Logistic,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BaselineKind {
    Lead,
    Oracle,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Part {
    Train,
    Validation,
    Test,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Averaging {
    Micro,
    Macro,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Statistic {
    Std,
    Mad,
}

fn require_file(path: &Path, what: &str) -> Result<()> {
    if !path.is_file() {
        bail!("{what} `{}` does not exist or is not a file", path.display());
    }
    Ok(())
}

fn require_opt(path: &Option<PathBuf>, what: &str) -> Result<()> {
    path.as_deref().map_or(Ok(()), |p| require_file(p, what))
}

fn output_parent(path: &Path) -> Result<()> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() && !dir.is_dir() => {
            bail!("output directory `{}` does not exist", dir.display())
        }
        _ => Ok(()),
    }
}

impl Command {
    /// Checks every path before any work starts.
    fn validate_paths(&self) -> Result<()> {
        match self {
            Command::Ingest { corpus, .. } | Command::Label { corpus, .. } => require_file(corpus, "corpus")?,
            Command::Train { data, config, out, log, .. } => {
                data.validate()?;
                require_opt(config, "config")?;
                output_parent(out)?;
                if let Some(log) = log {
                    output_parent(log)?;
                }
            }
            Command::Summarize { select, model, out } => {
                select.validate()?;
                require_file(model, "model")?;
                output_parent(out)?;
            }
            Command::Baseline { select, labels, out, .. } => {
                select.validate()?;
                require_opt(labels, "labels")?;
                output_parent(out)?;
            }
            Command::Evaluate {
                corpus,
                summaries,
                labels,
                out,
                ..
            } => {
                require_file(corpus, "corpus")?;
                require_file(summaries, "summaries")?;
                require_opt(labels, "labels")?;
                if let Some(out) = out {
                    output_parent(out)?;
                }
            }
            Command::Explain { select, model, .. } => {
                select.validate()?;
                require_file(model, "model")?;
            }
            Command::Repeats { data, config, out, .. } => {
                data.validate()?;
                require_opt(config, "config")?;
                output_parent(out)?;
            }
        }
        Ok(())
    }
}

impl DataArgs {
    fn validate(&self) -> Result<()> {
        require_file(&self.corpus, "corpus")?;
        require_opt(&self.split, "split")?;
        require_opt(&self.labels, "labels")
    }
}

impl SelectArgs {
    fn validate(&self) -> Result<()> {
        require_file(&self.corpus, "corpus")?;
        require_opt(&self.split, "split")
    }

    fn subset(&self) -> Result<Option<Vec<String>>> {
        match (&self.split, self.subset) {
            (Some(path), Some(part)) => {
                let split = CorpusSplit::load(path).with_context(|| format!("reading split `{}`", path.display()))?;
                let part = match part {
                    Part::Train => Subset::Train,
                    Part::Validation => Subset::Validation,
                    Part::Test => Subset::Test,
                };
                Ok(Some(split.ids(part).to_vec()))
            }
            _ => Ok(None),
        }
    }
}

fn load_configs(path: &Option<PathBuf>) -> Result<TrainerConfigs> {
    let Some(path) = path else {
        return Ok(TrainerConfigs::default());
    };
    let text = std::fs::read_to_string(path).with_context(|| format!("reading config `{}`", path.display()))?;
    let configs: TrainerConfigs =
        serde_json::from_str(&text).with_context(|| format!("parsing config `{}`", path.display()))?;
    configs.ebm.validate()?;
    configs.gaminet.validate()?;
    Ok(configs)
}

fn load_split(data: &DataArgs, ids: &[String]) -> Result<CorpusSplit> {
    match &data.split {
        Some(path) => CorpusSplit::load(path).with_context(|| format!("reading split `{}`", path.display())),
        None => Ok(CorpusSplit {
            train: ids.to_vec(),
            validation: Vec::new(),
            test: Vec::new(),
        }),
    }
}

fn run(cli: Cli) -> Result<()> {
    cli.command.validate_paths()?;
    let budget = cli.budget;
    match cli.command {
        Command::Ingest { corpus, out_dir, ratios } => {
            let raw = io::read_corpus(&corpus)?;
            let docs = gamsum::pipeline::preprocess_corpus(&raw)?;
            let ids: Vec<String> = docs.iter().map(|d| d.id.clone()).collect();
            let split = split_corpus(&ids, ratios, cli.seed)?;
            std::fs::create_dir_all(&out_dir)?;
            split.save(out_dir.join("split.json"))?;
            std::fs::write(out_dir.join("documents.tsv"), io::document_stats(&docs))?;
            println!(
                "{} documents: {} train, {} validation, {} test",
                ids.len(),
                split.train.len(),
                split.validation.len(),
                split.test.len()
            );
        }
        Command::Label { corpus, out } => {
            let labeled = io::labeled_corpus(&corpus, None, budget)?;
            let records: Vec<LabelRecord> = labeled
                .docs
                .iter()
                .zip(&labeled.labels)
                .map(|(d, l)| LabelRecord {
                    id: d.id.clone(),
                    labels: l.clone(),
                })
                .collect();
            gamsum::corpus::write_labels(&out, &records)?;
            let positives: usize = labeled.labels.iter().flatten().map(|&l| usize::from(l)).sum();
            let total: usize = labeled.labels.iter().map(Vec::len).sum();
            println!("{} documents, {positives} of {total} sentences labeled 1", records.len());
        }
        Command::Train {
            data,
            model,
            out,
            config,
            log,
            no_validation,
            no_undersample,
        } => {
            let configs = load_configs(&config)?;
            let labeled = io::labeled_corpus(&data.corpus, data.labels.as_deref(), budget)?;
            let ids: Vec<String> = labeled.docs.iter().map(|d| d.id.clone()).collect();
            let split = load_split(&data, &ids)?;
            let options = TrainOptions {
                configs,
                undersample: !no_undersample,
                use_validation: !no_validation,
                ..TrainOptions::new(model.into(), cli.seed)
            };
            let art = train_from_split(&labeled, &split, &options)?;
            for n in &art.notices {
                log::warn!("{n}");
            }
            save_model(&art.file, &out)?;
            if let Some(log) = log {
                std::fs::write(log, &art.log)?;
            }
            println!(
                "trained {} with {} terms; wrote {}",
                art.file.model_kind,
                art.file.model.terms().len(),
                out.display()
            );
        }
        Command::Summarize { select, model, out } => {
            let file = load_model(&model).with_context(|| format!("loading model `{}`", model.display()))?;
            let docs = io::selected_documents(&select.corpus, select.subset()?.as_deref())?;
            let summaries = summarize_all(&file, &docs, budget)?;
            io::write_summaries(&out, &summaries)?;
            println!("wrote {} summaries to {}", summaries.len(), out.display());
        }
        Command::Baseline {
            select,
            kind,
            labels,
            out,
        } => {
            let labeled = io::labeled_corpus(&select.corpus, labels.as_deref(), budget)?;
            let (docs, labs) = match select.subset()? {
                Some(ids) => labeled.subset(&ids)?,
                None => (labeled.docs.clone(), labeled.labels.clone()),
            };
            let summaries: Vec<Summary> = match kind {
                BaselineKind::Lead => docs.iter().map(|d| lead_baseline(d, budget)).collect(),
                BaselineKind::Oracle => docs
                    .iter()
                    .zip(&labs)
                    .map(|(d, l)| oracle_baseline(d, l, budget))
                    .collect::<gamsum::Result<_>>()?,
            };
            io::write_summaries(&out, &summaries)?;
            println!("wrote {} summaries to {}", summaries.len(), out.display());
        }
        Command::Evaluate {
            corpus,
            summaries,
            labels,
            stem,
            averaging,
            out,
            name,
        } => {
            let summaries = io::read_summaries(&summaries)?;
            let labeled = io::labeled_corpus(&corpus, labels.as_deref(), budget)?;
            let ids: Vec<String> = summaries.iter().map(|s| s.id.clone()).collect();
            let (docs, labs) = labeled.subset(&ids)?;
            let averaging = match averaging {
                Averaging::Micro => F1Averaging::Micro,
                Averaging::Macro => F1Averaging::Macro,
            };
            let report = evaluate_summaries(&summaries, &docs, &labs, stem, averaging)?;
            print!("{}", report.table(&name));
            if let Some(out) = out {
                std::fs::write(out, report.to_json() + "\n")?;
            }
        }
        Command::Explain {
            select,
            model,
            out_dir,
            statistic,
        } => {
            let file = load_model(&model).with_context(|| format!("loading model `{}`", model.display()))?;
            let docs = io::selected_documents(&select.corpus, select.subset()?.as_deref())?;
            let data = io::feature_dataset(&docs)?;
            let stat = match statistic {
                Statistic::Std => ImportanceStatistic::Std,
                Statistic::Mad => ImportanceStatistic::Mad,
            };
            let ratios = importance_ratios(&file.model, &data, stat)?;
            let tables = export_shape_tables(&file.model);
            let table_dir = out_dir.join("tables");
            std::fs::create_dir_all(&table_dir)?;
            for table in &tables {
                let path = table_dir.join(format!("{}.tsv", io::file_stem(table)));
                std::fs::write(path, shape_tables_tsv(std::slice::from_ref(table)))?;
            }
            std::fs::write(out_dir.join("shapes.json"), shape_tables_json(&tables))?;
            std::fs::write(out_dir.join("importance.tsv"), importance_tsv(&ratios))?;
            std::fs::write(out_dir.join("contributions.tsv"), io::contributions_tsv(&file.model, &docs))?;
            println!("{} term tables; top term {}", tables.len(), ratios[0].name);
        }
        Command::Repeats {
            data,
            model,
            repeats,
            config,
            out,
        } => {
            let configs = load_configs(&config)?;
            let labeled = io::labeled_corpus(&data.corpus, data.labels.as_deref(), budget)?;
            let ids: Vec<String> = labeled.docs.iter().map(|d| d.id.clone()).collect();
            let split = load_split(&data, &ids)?;
            if split.test.is_empty() {
                bail!("repeats needs a split with a non-empty test part");
            }
            let options = TrainOptions {
                configs,
                ..TrainOptions::new(model.into(), cli.seed)
            };
            let summary = run_repeats(&labeled, &split, &options, repeats, budget)?;
            std::fs::write(&out, io::repeats_tsv(&summary))?;
            let m = &summary.mean;
            println!(
                "{} over {repeats} runs: ROUGE-1 {:.2} ROUGE-2 {:.2} ROUGE-L {:.2} F1 {:.2}",
                summary.kind,
                100.0 * m.rouge_1,
                100.0 * m.rouge_2,
                100.0 * m.rouge_l,
                100.0 * m.sentence_f1
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(n) = cli.workers {
        if n == 0 {
            eprintln!("error: --workers must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot start {n} workers: {e}");
            return ExitCode::FAILURE;
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
