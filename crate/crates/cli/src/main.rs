use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use sentlen::harness::{DEFAULT_HISTOGRAM_BIN, DEFAULT_MIN_SENTENCES, DEFAULT_SEED};
use sentlen::{analyze_corpus, emit_reports, fmt6, AnalysisConfig, DfaSettings, Lexicons, OutputFormat};

#[derive(Parser)]
#[command(name = "sentlen", version, about = "Sentence-length series analysis of a directory of books")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze every .txt book in a directory and write reports.
    Analyze(AnalyzeArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(clap::Args)]
struct AnalyzeArgs {
    /// Directory of UTF-8 .txt books.
    input_dir: PathBuf,
    /// Output directory, created if missing.
    #[arg(long)]
    out: PathBuf,
    /// Stopword list, one word per line (default: bundled English list).
    #[arg(long, value_name = "FILE")]
    stopwords: Option<PathBuf>,
    /// Lemma table, `surface<TAB>lemma` per line (default: bundled English table).
    #[arg(long, value_name = "FILE")]
    lemmas: Option<PathBuf>,
    /// Polynomial degree removed in each DFA window.
    #[arg(long, value_name = "L", default_value_t = 1)]
    dfa_degree: usize,
    /// Smallest DFA window.
    #[arg(long, value_name = "M", default_value_t = 8)]
    dfa_min: usize,
    /// Largest DFA window as a fraction of the series length.
    #[arg(long, value_name = "F", default_value_t = 0.25)]
    dfa_max_frac: f64,
    /// Number of log-spaced DFA windows.
    #[arg(long, value_name = "K", default_value_t = 16)]
    dfa_points: usize,
    /// Base seed for the shuffled DFA controls.
    #[arg(long, value_name = "S", default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Significance threshold for the KS and rank tests.
    #[arg(long, value_name = "P", default_value_t = 0.01)]
    p_threshold: f64,
    /// Books with fewer sentences are skipped.
    #[arg(long, value_name = "N", default_value_t = DEFAULT_MIN_SENTENCES)]
    min_sentences: usize,
    /// Bin width of the sentence-count histogram.
    #[arg(long, value_name = "W", default_value_t = DEFAULT_HISTOGRAM_BIN)]
    histogram_bin: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Worker threads (default: all cores).
    #[arg(long, value_name = "N")]
    jobs: Option<usize>,
    /// Also write every series, fluctuation curve and ECDF as CSV.
    #[arg(long)]
    export_series: bool,
}

fn analyze(args: AnalyzeArgs) -> Result<()> {
    let lexicons = Lexicons::load(args.stopwords.as_deref(), args.lemmas.as_deref())
        .context("loading lexicons")?;
    let config = AnalysisConfig {
        lexicons,
        dfa: DfaSettings {
            degree: args.dfa_degree,
            min_window: args.dfa_min,
            max_fraction: args.dfa_max_frac,
            points: args.dfa_points,
        },
        seed: args.seed,
        p_threshold: args.p_threshold,
        min_sentences: args.min_sentences,
        histogram_bin: args.histogram_bin,
        jobs: args.jobs,
    };
    let run = analyze_corpus(&args.input_dir, &config)
        .with_context(|| format!("analyzing {}", args.input_dir.display()))?;
    let format = match args.format {
        Format::Csv => OutputFormat::Csv,
        Format::Json => OutputFormat::Json,
    };
    let written = emit_reports(&run, &args.out, format, args.export_series)
        .with_context(|| format!("writing reports to {}", args.out.display()))?;

    let s = &run.summary;
    let opt = |v: Option<f64>| v.map(fmt6).unwrap_or_else(|| "-".into());
    eprintln!(
        "{} books analyzed, {} skipped, {} comparisons",
        s.book_count, s.skipped_count, s.comparison_count
    );
    for b in &run.skipped {
        eprintln!("  skipped {}: {}", b.book_id, b.reason);
    }
    eprintln!(
        "mean r {}  KS accepted: plain {}%  mapped {}%  mean h {}  mean h* {}",
        opt(s.mean_r),
        opt(s.ks_plain_acceptance),
        opt(s.ks_mapped_acceptance),
        opt(s.mean_h),
        opt(s.mean_h_shuffled)
    );
    eprintln!("{} files written to {}", written.len(), args.out.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(args) => analyze(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
