use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use gamiscreen::evaluation::export::{calibration_table, roc_csv, roc_svg};
use gamiscreen::logit::LogitError;
use gamiscreen::pipeline::{
    evaluate_model, ingest, read_score_input, run_study, Format, Group, InputFormat, ScoreLine,
    StudyConfig, StudyError, StudyReport, Scorer,
};
use gamiscreen::text::LexiconFile;
use gamiscreen::{paper_model, FittedModel};

const EXIT_INPUT: u8 = 2;
const EXIT_STATISTICAL: u8 = 3;
const EXIT_IO: u8 = 4;

/// Screens app-store listings for gamification with a keyword logistic model.
#[derive(Parser)]
#[command(name = "gamiscreen", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a listing file and write it as a dataset document.
    Ingest {
        input: PathBuf,
        /// Defaults to the input file extension.
        #[arg(long, value_enum)]
        format: Option<DataFormat>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Split, screen, fit and validate a model on a labeled dataset.
    Train {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        seed: u64,
        /// Lexicon and variable grouping file. The built-in lexicon is used when omitted.
        #[arg(long)]
        lexicon: Option<PathBuf>,
        #[arg(long, default_value = "forced")]
        select: String,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        report: PathBuf,
    },
    /// Score one split of a labeled dataset with a saved model.
    Evaluate {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long, value_enum, default_value = "validation")]
        split: SplitArg,
        /// Split seed. Defaults to the seed recorded in the model.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        roc_csv: Option<PathBuf>,
        /// Where to write the evaluation JSON. Standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Score listings, one JSON line per record.
    Score {
        /// Model file. The published model is used when omitted.
        #[arg(long)]
        model: Option<PathBuf>,
        /// Reads standard input when omitted.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "auto")]
        format: ScoreFormat,
        /// Include matched keywords and per-variable contributions.
        #[arg(long)]
        explain: bool,
    },
    /// Print the tables of a study report and draw its ROC curves.
    Report {
        #[arg(long)]
        study: PathBuf,
        #[arg(long)]
        roc_svg: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum DataFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum SplitArg {
    Generation,
    Validation,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScoreFormat {
    Auto,
    Csv,
    Json,
    Text,
}

/// Marks an error that should exit with a specific code.
#[derive(Debug)]
struct Coded(u8);

impl std::fmt::Display for Coded {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "exit code {}", self.0)
    }
}

impl std::error::Error for Coded {}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(Coded(code)) = cause.downcast_ref() {
            return *code;
        }
        if let Some(e) = cause.downcast_ref::<StudyError>() {
            if e.is_statistical() {
                return EXIT_STATISTICAL;
            }
        }
        if let Some(
            LogitError::Separation(_) | LogitError::Singular | LogitError::Degenerate(_),
        ) = cause.downcast_ref()
        {
            return EXIT_STATISTICAL;
        }
        if cause.is::<io::Error>() {
            return EXIT_IO;
        }
    }
    EXIT_INPUT
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Ingest { input, format, out } => cmd_ingest(&input, format, &out),
        Command::Train { dataset, seed, lexicon, select, alpha, out, report } => {
            let config = StudyConfig { seed, selection: select, alpha, ..StudyConfig::default() };
            cmd_train(&dataset, lexicon.as_deref(), &config, &out, &report)
        }
        Command::Evaluate { model, dataset, split, seed, roc_csv, out } => {
            cmd_evaluate(&model, &dataset, split, seed, roc_csv.as_deref(), out.as_deref())
        }
        Command::Score { model, input, format, explain } => {
            cmd_score(model.as_deref(), input.as_deref(), format, explain)
        }
        Command::Report { study, roc_svg } => cmd_report(&study, roc_svg.as_deref()),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_dataset(path: &Path, format: Option<DataFormat>) -> Result<gamiscreen::pipeline::Dataset> {
    let format = match format {
        Some(DataFormat::Csv) => Format::Csv,
        Some(DataFormat::Json) => Format::Json,
        None => Format::from_path(path),
    };
    ingest(path, format).with_context(|| format!("loading dataset {}", path.display()))
}

fn load_model(path: &Path) -> Result<FittedModel> {
    let text = read_text(path)?;
    FittedModel::from_json(&text)
        .map_err(|e| anyhow::Error::new(e).context(Coded(EXIT_INPUT)))
        .with_context(|| format!("invalid model file {}", path.display()))
}

fn cmd_ingest(input: &Path, format: Option<DataFormat>, out: &Path) -> Result<()> {
    let dataset = load_dataset(input, format)?;
    write_file(out, &dataset.to_json())?;
    let s = &dataset.summary;
    eprintln!(
        "{} records ({} labeled, {} positive) written to {}",
        s.n_records,
        s.n_labeled,
        s.n_positive,
        out.display()
    );
    Ok(())
}

fn cmd_train(
    dataset: &Path,
    lexicon: Option<&Path>,
    config: &StudyConfig,
    out: &Path,
    report: &Path,
) -> Result<()> {
    let dataset = load_dataset(dataset, None)?;
    let file = match lexicon {
        Some(path) => LexiconFile::load(path)
            .with_context(|| format!("loading lexicon {}", path.display()))?,
        None => LexiconFile::embedded(),
    };
    let (lexicon, grouping) = file.into_parts().context("invalid lexicon")?;
    let outcome = run_study(&dataset, &lexicon, &grouping, config)?;
    write_file(out, &outcome.model.to_json())?;
    write_file(report, &outcome.report.to_json())?;
    let r = &outcome.report;
    eprintln!(
        "fitted {} variables on {} listings; validation AUC {:.3} on {}",
        outcome.model.n_vars(),
        r.split.n_generation,
        r.validation.roc.auc,
        r.split.n_validation
    );
    Ok(())
}

fn cmd_evaluate(
    model: &Path,
    dataset: &Path,
    split: SplitArg,
    seed: Option<u64>,
    roc_path: Option<&Path>,
    out: Option<&Path>,
) -> Result<()> {
    let model = load_model(model)?;
    let dataset = load_dataset(dataset, None)?;
    let group = match split {
        SplitArg::Generation => Group::Generation,
        SplitArg::Validation => Group::Validation,
        SplitArg::All => Group::All,
    };
    let report = evaluate_model(model, &dataset, group, seed, &Default::default())?;
    if let Some(path) = roc_path {
        write_file(path, &roc_csv(&report.evaluation.roc))?;
    }
    let mut json = serde_json::to_string_pretty(&report)?;
    json.push('\n');
    match out {
        Some(path) => write_file(path, &json)?,
        None => io::stdout().write_all(json.as_bytes())?,
    }
    Ok(())
}

fn cmd_score(
    model: Option<&Path>,
    input: Option<&Path>,
    format: ScoreFormat,
    explain: bool,
) -> Result<()> {
    let model = match model {
        Some(path) => load_model(path)?,
        None => paper_model(),
    };
    let scorer = Scorer::new(model).context("model cannot score text")?;
    let bytes = match input {
        Some(path) => fs::read(path).with_context(|| format!("reading {}", path.display()))?,
        None => {
            let mut buf = Vec::new();
            io::stdin().read_to_end(&mut buf).context("reading standard input")?;
            buf
        }
    };
    let format = match format {
        ScoreFormat::Auto => InputFormat::Auto,
        ScoreFormat::Csv => InputFormat::Csv,
        ScoreFormat::Json => InputFormat::Json,
        ScoreFormat::Text => InputFormat::Text,
    };
    let lines = scorer.score_all(read_score_input(&bytes, format)?);

    let stdout = io::stdout();
    let mut w = io::BufWriter::new(stdout.lock());
    let mut rejected = 0;
    for line in &lines {
        let value = match line {
            ScoreLine::Scored(s) if !explain => serde_json::json!({
                "id": s.id,
                "probability": s.probability,
                "flags": s.flags,
            }),
            ScoreLine::Rejected { .. } => {
                rejected += 1;
                serde_json::to_value(line)?
            }
            _ => serde_json::to_value(line)?,
        };
        serde_json::to_writer(&mut w, &value)?;
        writeln!(w)?;
    }
    w.flush()?;
    if rejected > 0 {
        bail!(Coded(EXIT_INPUT));
    }
    Ok(())
}

fn cmd_report(study: &Path, svg: Option<&Path>) -> Result<()> {
    let text = read_text(study)?;
    let report = StudyReport::from_json(&text)
        .map_err(|e| anyhow::Error::new(e).context(Coded(EXIT_INPUT)))
        .with_context(|| format!("invalid study report {}", study.display()))?;
    print!("{}", render_report(&report));
    if let Some(path) = svg {
        let curves = [
            ("generation", &report.generation.roc),
            ("validation", &report.validation.roc),
        ];
        write_file(path, &roc_svg(&curves))?;
    }
    Ok(())
}

fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<String>| {
        let mut s = String::new();
        for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
            if i == 0 {
                s.push_str(&format!("{cell:<w$}"));
            } else {
                s.push_str(&format!("  {cell:>w$}"));
            }
        }
        s.trim_end().to_string() + "\n"
    };
    let mut out = line(header.iter().map(|h| h.to_string()).collect());
    out.push_str(&line(widths.iter().map(|w| "-".repeat(*w)).collect()));
    for row in rows {
        out.push_str(&line(row.clone()));
    }
    out
}

fn p_text(p: f64) -> String {
    if p < 0.001 {
        "<0.001".into()
    } else {
        format!("{p:.3}")
    }
}

fn render_report(r: &StudyReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "seed {} ({}), lexicon {}\nlistings {}: generation {}, validation {}\n\n",
        r.seed, r.rng, r.lexicon_version, r.dataset.n_records, r.split.n_generation, r.split.n_validation
    ));

    out.push_str("Univariate screen (generation group)\n");
    let rows: Vec<Vec<String>> = r
        .univariate
        .iter()
        .map(|u| match u.stats() {
            Some(s) => vec![
                u.variable_name.clone(),
                format!("{:.2}", s.odds_ratio),
                format!("{:.2}-{:.2}", s.ci_low, s.ci_high),
                p_text(s.p_value),
            ],
            None => {
                let status = serde_json::to_value(&u.outcome)
                    .ok()
                    .and_then(|v| v.get("status").and_then(|s| s.as_str()).map(str::to_string))
                    .unwrap_or_else(|| "failed".into());
                vec![u.variable_name.clone(), "-".into(), status, "-".into()]
            }
        })
        .collect();
    out.push_str(&table(&["Variable", "OR", "95% CI", "p"], &rows));

    out.push_str(&format!(
        "\nSelected by {:?}: {}\n\nMultivariable model\n",
        r.selection.strategy,
        r.selection.selected.join(", ")
    ));
    let stat_row = |name: &str, s: &gamiscreen::logit::TermStats| {
        vec![
            name.to_string(),
            format!("{:.2}", s.coefficient),
            format!("{:.2}", s.standard_error),
            format!("{:.2}", s.odds_ratio),
            format!("{:.2}-{:.2}", s.ci_low, s.ci_high),
            p_text(s.p_value),
        ]
    };
    let mut rows: Vec<Vec<String>> =
        r.model.variables.iter().map(|v| stat_row(&v.name, &v.stats)).collect();
    rows.push(stat_row("Constant", &r.model.intercept));
    out.push_str(&table(&["Variable", "Coef", "SE", "OR", "95% CI", "p"], &rows));
    if let Some(aic) = r.model.training.aic {
        out.push_str(&format!("AIC {aic:.2}\n"));
    }

    out.push_str("\nDiscrimination\n");
    let rows: Vec<Vec<String>> = [("generation", &r.generation), ("validation", &r.validation)]
        .iter()
        .map(|(name, g)| {
            vec![
                name.to_string(),
                g.n_obs.to_string(),
                g.n_positive.to_string(),
                format!("{:.3}", g.roc.auc),
                format!("{:.3}-{:.3}", g.roc.auc_ci_low, g.roc.auc_ci_high),
            ]
        })
        .collect();
    out.push_str(&table(&["Group", "n", "Positive", "AUC", "95% CI"], &rows));

    out.push_str("\nModel comparison (generation group)\n");
    let rows: Vec<Vec<String>> = r
        .comparison
        .candidates
        .iter()
        .map(|c| {
            vec![
                c.name.clone(),
                c.variables.len().to_string(),
                c.auc.map_or("-".into(), |a| format!("{a:.3}")),
                c.aic.map_or("-".into(), |a| format!("{a:.2}")),
                c.error.clone().unwrap_or_default(),
            ]
        })
        .collect();
    out.push_str(&table(&["Model", "Variables", "AUC", "AIC", "Note"], &rows));
    if let Some(ranking) = &r.comparison.ranking {
        out.push_str(&format!("selected {}", ranking.selected));
        if ranking.conflict {
            out.push_str(" (AIC prefers a different model)");
        }
        out.push('\n');
    }

    out.push_str("\nCalibration (validation group)\n");
    out.push_str(&calibration_table(&r.calibration));
    out
}
