//! Whole-book and whole-corpus analysis.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::correlation::{
    fit_linear_map, goodman_kruskal_gamma, kendall_tau, pearson, spearman, DEFAULT_SIGNIFICANCE,
};
use crate::dfa::{self, hurst, DfaConfig};
use crate::distribution::{
    fit_ccdf_stretched_exp, ks_after_linear_map, ks_two_sample, mean_normalize, Ecdf,
};
use crate::error::{Error, Result};
use crate::series::{extract_all, LengthSeries, MeasureKind};
use crate::text::{book_id, load_document, Lexicons};
use crate::{
    FluctuationCurve64, HurstEstimate64, Ks64, LinearMap64, Pearson64, RankTest64,
    StretchedExpFit64,
};

pub const DEFAULT_MIN_SENTENCES: usize = 200;
pub const DEFAULT_HISTOGRAM_BIN: usize = 1000;
pub const DEFAULT_SEED: u64 = 20_160_101;

/// DFA grid, resolved per series length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DfaSettings {
    pub degree: usize,
    pub min_window: usize,
    /// Largest window as a fraction of the series length.
    pub max_fraction: f64,
    pub points: usize,
}

impl Default for DfaSettings {
    fn default() -> Self {
        DfaSettings {
            degree: dfa::DEFAULT_DEGREE,
            min_window: dfa::DEFAULT_MIN_WINDOW,
            max_fraction: dfa::DEFAULT_MAX_FRACTION,
            points: dfa::DEFAULT_POINTS,
        }
    }
}

impl DfaSettings {
    pub fn config(&self, n: usize, seed: u64) -> Result<DfaConfig> {
        DfaConfig::log_spaced(n, self.degree, self.min_window, self.max_fraction, self.points, seed)
    }
}

#[derive(Debug, Clone)]
pub struct AnalysisConfig {
    pub lexicons: Lexicons,
    pub dfa: DfaSettings,
    /// Base seed; every (book, measure) shuffle derives its own from it.
    pub seed: u64,
    pub p_threshold: f64,
    pub min_sentences: usize,
    pub histogram_bin: usize,
    /// Worker threads; `None` uses every core.
    pub jobs: Option<usize>,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            lexicons: Lexicons::bundled(),
            dfa: DfaSettings::default(),
            seed: DEFAULT_SEED,
            p_threshold: DEFAULT_SIGNIFICANCE,
            min_sentences: DEFAULT_MIN_SENTENCES,
            histogram_bin: DEFAULT_HISTOGRAM_BIN,
            jobs: None,
        }
    }
}

impl AnalysisConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.p_threshold > 0.0 && self.p_threshold < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "p threshold must be in (0, 1), got {}",
                self.p_threshold
            )));
        }
        if self.histogram_bin == 0 {
            return Err(Error::InvalidConfig("histogram bin width must be positive".into()));
        }
        if self.jobs == Some(0) {
            return Err(Error::InvalidConfig("jobs must be positive".into()));
        }
        if self.dfa.points == 0 || !(self.dfa.max_fraction > 0.0 && self.dfa.max_fraction <= 0.25) {
            return Err(Error::InvalidConfig(
                "DFA needs at least one window and a largest-window fraction in (0, 0.25]".into(),
            ));
        }
        Ok(())
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// Shuffle seed of one (book, measure): independent of scheduling and of
/// which other books are in the run.
pub fn derive_seed(base: u64, book_id: &str, kind: MeasureKind) -> u64 {
    splitmix64(base ^ splitmix64(fnv1a(book_id) ^ (kind.index() as u64 + 1)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonResult {
    pub pair: (MeasureKind, MeasureKind),
    pub pearson: Pearson64,
    pub spearman: RankTest64,
    pub kendall: RankTest64,
    pub gamma: RankTest64,
    /// KS on mean-normalized series.
    pub ks_plain: Ks64,
    /// KS after the least-squares map from the first series to the second.
    pub ks_mapped: Ks64,
    pub linear_map: LinearMap64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KindHurst {
    pub kind: MeasureKind,
    #[serde(flatten)]
    pub estimate: HurstEstimate64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BookReport {
    pub book_id: String,
    pub sentence_count: usize,
    pub comparisons: Vec<ComparisonResult>,
    pub hurst: Vec<KindHurst>,
    pub max_abs_delta_h: f64,
    /// Stretched-exponential fit of the word-count CCDF.
    pub words_ccdf_fit: Option<StretchedExpFit64>,
    pub dfa_windows: Vec<usize>,
    #[serde(skip)]
    pub series: Vec<LengthSeries>,
    #[serde(skip)]
    pub curves: Vec<FluctuationCurve64>,
}

impl BookReport {
    pub fn h(&self, kind: MeasureKind) -> f64 {
        self.hurst[kind.index()].estimate.h
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum BookOutcome {
    Analyzed(Box<BookReport>),
    Skipped { book_id: String, reason: String },
}

fn compare(a: &[f64], b: &[f64], threshold: f64) -> Result<(Pearson64, RankTest64, RankTest64, RankTest64, Ks64, Ks64, LinearMap64)> {
    let ks_plain = ks_two_sample(&mean_normalize(a)?, &mean_normalize(b)?, threshold)?;
    Ok((
        pearson(a, b)?,
        spearman(a, b)?.at_threshold(threshold),
        kendall_tau(a, b)?.at_threshold(threshold),
        goodman_kruskal_gamma(a, b)?.at_threshold(threshold),
        ks_plain,
        ks_after_linear_map(a, b, threshold)?,
        fit_linear_map(a, b)?,
    ))
}

/// Load one book and run every comparison and DFA estimate on it.
pub fn analyze_book(path: &Path, config: &AnalysisConfig) -> Result<BookOutcome> {
    let doc = load_document(path, &config.lexicons.stops, &config.lexicons.lemmas)?;
    if doc.sentence_count < config.min_sentences {
        return Ok(BookOutcome::Skipped {
            book_id: doc.id,
            reason: format!(
                "{} sentences, below the floor of {}",
                doc.sentence_count, config.min_sentences
            ),
        });
    }
    let series = extract_all(&doc);
    let values: Vec<Vec<f64>> = series.iter().map(LengthSeries::as_f64).collect();

    let comparisons = MeasureKind::pairs()
        .into_par_iter()
        .map(|(ka, kb)| {
            let (pearson, spearman, kendall, gamma, ks_plain, ks_mapped, linear_map) =
                compare(&values[ka.index()], &values[kb.index()], config.p_threshold)?;
            Ok(ComparisonResult {
                pair: (ka, kb),
                pearson,
                spearman,
                kendall,
                gamma,
                ks_plain,
                ks_mapped,
                linear_map,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let dfa_windows = config.dfa.config(doc.sentence_count, 0)?.window_sizes;
    let fits = MeasureKind::ALL
        .par_iter()
        .map(|&kind| {
            let seed = derive_seed(config.seed, &doc.id, kind);
            let cfg = config.dfa.config(doc.sentence_count, seed)?;
            let (estimate, curve) = hurst(&values[kind.index()], &cfg)?;
            Ok((KindHurst { kind, estimate }, curve))
        })
        .collect::<Result<Vec<_>>>()?;
    let (hurst, curves): (Vec<_>, Vec<_>) = fits.into_iter().unzip();

    let max_abs_delta_h = MeasureKind::pairs()
        .iter()
        .map(|&(a, b)| (hurst[a.index()].estimate.h - hurst[b.index()].estimate.h).abs())
        .fold(0.0, f64::max);

    Ok(BookOutcome::Analyzed(Box::new(BookReport {
        book_id: doc.id,
        sentence_count: doc.sentence_count,
        comparisons,
        hurst,
        max_abs_delta_h,
        words_ccdf_fit: fit_ccdf_stretched_exp(&values[0]).ok(),
        dfa_windows,
        series,
        curves,
    })))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedBook {
    pub book_id: String,
    pub path: PathBuf,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub lower: usize,
    pub upper: usize,
    pub count: usize,
}

/// `percent[i][j]` for `i < j` in canonical measure order; `None` elsewhere.
pub type AcceptanceTable = Vec<Vec<Option<f64>>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusSummary {
    pub book_count: usize,
    pub skipped_count: usize,
    pub comparison_count: usize,
    pub p_threshold: f64,
    pub seed: u64,
    pub histogram_bin: usize,
    pub sentence_count_histogram: Vec<HistogramBin>,
    /// `(x, C(x))` over every book × pair.
    pub r_cdf: Vec<(f64, f64)>,
    pub kappa_plain_cdf: Vec<(f64, f64)>,
    pub kappa_mapped_cdf: Vec<(f64, f64)>,
    pub delta_h_cdf: Vec<(f64, f64)>,
    pub ks_acceptance_plain: AcceptanceTable,
    pub ks_acceptance_mapped: AcceptanceTable,
    /// Percent of comparisons accepted.
    pub ks_plain_acceptance: Option<f64>,
    pub ks_mapped_acceptance: Option<f64>,
    pub mean_r: Option<f64>,
    pub min_r: Option<f64>,
    pub max_r: Option<f64>,
    pub mean_r_char_char: Option<f64>,
    pub mean_r_word_char: Option<f64>,
    /// Share of Spearman, Kendall and γ tests rejecting independence.
    pub rank_rejection_rate: Option<f64>,
    pub mean_h: Option<f64>,
    pub mean_h_shuffled: Option<f64>,
    pub max_abs_delta_h: Option<f64>,
    pub h_vs_length_r: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct CorpusRun {
    pub reports: Vec<BookReport>,
    pub skipped: Vec<SkippedBook>,
    pub summary: CorpusSummary,
}

/// Pearson r between sentence count and the word-count Hurst exponent.
pub fn hurst_length_correlation(reports: &[BookReport]) -> Result<f64> {
    if reports.len() < 3 {
        return Err(Error::TooShort {
            what: "books for the length/Hurst correlation",
            needed: 3,
            got: reports.len(),
        });
    }
    let n: Vec<f64> = reports.iter().map(|r| r.sentence_count as f64).collect();
    let h: Vec<f64> = reports.iter().map(|r| r.h(MeasureKind::Words)).collect();
    Ok(pearson(&n, &h)?.r)
}

fn corpus_books(dir: &Path) -> Result<Vec<PathBuf>> {
    let entries = fs::read_dir(dir).map_err(|source| Error::Ingest {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut books = Vec::new();
    for entry in entries {
        let path = entry
            .map_err(|source| Error::Ingest {
                path: dir.to_path_buf(),
                source,
            })?
            .path();
        if path.is_file() && path.extension().is_some_and(|e| e == "txt") {
            books.push(path);
        }
    }
    books.sort();
    if books.is_empty() {
        return Err(Error::EmptyCorpus(dir.to_path_buf()));
    }
    Ok(books)
}

/// Analyze every `*.txt` in `dir`. Per-book failures land in the skip list.
pub fn analyze_corpus(dir: &Path, config: &AnalysisConfig) -> Result<CorpusRun> {
    config.validate()?;
    let books = corpus_books(dir)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs.unwrap_or(0))
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
    let outcomes: Vec<(PathBuf, Result<BookOutcome>)> = pool.install(|| {
        books
            .par_iter()
            .map(|p| (p.clone(), analyze_book(p, config)))
            .collect()
    });

    let mut reports = Vec::new();
    let mut skipped = Vec::new();
    for (path, outcome) in outcomes {
        match outcome {
            Ok(BookOutcome::Analyzed(r)) => reports.push(*r),
            Ok(BookOutcome::Skipped { book_id, reason }) => skipped.push(SkippedBook {
                book_id,
                path,
                reason,
            }),
            Err(e) => skipped.push(SkippedBook {
                book_id: book_id(&path),
                reason: e.to_string(),
                path,
            }),
        }
    }
    reports.sort_by(|a, b| a.book_id.cmp(&b.book_id));
    skipped.sort_by(|a, b| a.book_id.cmp(&b.book_id));
    let summary = summarize(&reports, skipped.len(), config);
    Ok(CorpusRun {
        reports,
        skipped,
        summary,
    })
}

fn mean_of(v: impl IntoIterator<Item = f64>) -> Option<f64> {
    let (s, n) = v.into_iter().fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    (n > 0).then(|| s / n as f64)
}

fn cdf(values: Vec<f64>) -> Vec<(f64, f64)> {
    Ecdf::new(&values).map(|e| e.curve()).unwrap_or_default()
}

fn percent(hits: usize, total: usize) -> Option<f64> {
    (total > 0).then(|| 100.0 * hits as f64 / total as f64)
}

fn acceptance_table(reports: &[BookReport], mapped: bool) -> AcceptanceTable {
    let mut table = vec![vec![None; 6]; 6];
    for (a, b) in MeasureKind::pairs() {
        let hits = reports
            .iter()
            .flat_map(|r| &r.comparisons)
            .filter(|c| c.pair == (a, b))
            .filter(|c| if mapped { c.ks_mapped.accepted } else { c.ks_plain.accepted })
            .count();
        table[a.index()][b.index()] = percent(hits, reports.len());
    }
    table
}

pub fn sentence_histogram(counts: &[usize], bin: usize) -> Vec<HistogramBin> {
    let Some(&max) = counts.iter().max() else {
        return Vec::new();
    };
    (0..=max / bin)
        .map(|i| HistogramBin {
            lower: i * bin,
            upper: (i + 1) * bin,
            count: counts.iter().filter(|&&c| c / bin == i).count(),
        })
        .collect()
}

/// Corpus aggregates over already sorted reports.
pub fn summarize(reports: &[BookReport], skipped_count: usize, config: &AnalysisConfig) -> CorpusSummary {
    let comparisons: Vec<&ComparisonResult> = reports.iter().flat_map(|r| &r.comparisons).collect();
    let rs: Vec<f64> = comparisons.iter().map(|c| c.pearson.r).collect();
    let pair_r = |pred: fn(MeasureKind, MeasureKind) -> bool| {
        mean_of(
            comparisons
                .iter()
                .filter(|c| pred(c.pair.0, c.pair.1))
                .map(|c| c.pearson.r),
        )
    };
    let delta_h: Vec<f64> = reports
        .iter()
        .flat_map(|r| {
            MeasureKind::pairs()
                .into_iter()
                .map(move |(a, b)| (r.h(a) - r.h(b)).abs())
        })
        .collect();
    let rank_tests: Vec<bool> = comparisons
        .iter()
        .flat_map(|c| [c.spearman.rejected, c.kendall.rejected, c.gamma.rejected])
        .collect();
    let counts: Vec<usize> = reports.iter().map(|r| r.sentence_count).collect();
    let hursts = || reports.iter().flat_map(|r| &r.hurst).map(|h| h.estimate);

    CorpusSummary {
        book_count: reports.len(),
        skipped_count,
        comparison_count: comparisons.len(),
        p_threshold: config.p_threshold,
        seed: config.seed,
        histogram_bin: config.histogram_bin,
        sentence_count_histogram: sentence_histogram(&counts, config.histogram_bin),
        r_cdf: cdf(rs.clone()),
        kappa_plain_cdf: cdf(comparisons.iter().map(|c| c.ks_plain.kappa).collect()),
        kappa_mapped_cdf: cdf(comparisons.iter().map(|c| c.ks_mapped.kappa).collect()),
        delta_h_cdf: cdf(delta_h),
        ks_acceptance_plain: acceptance_table(reports, false),
        ks_acceptance_mapped: acceptance_table(reports, true),
        ks_plain_acceptance: percent(
            comparisons.iter().filter(|c| c.ks_plain.accepted).count(),
            comparisons.len(),
        ),
        ks_mapped_acceptance: percent(
            comparisons.iter().filter(|c| c.ks_mapped.accepted).count(),
            comparisons.len(),
        ),
        mean_r: mean_of(rs.iter().copied()),
        min_r: rs.iter().copied().reduce(f64::min),
        max_r: rs.iter().copied().reduce(f64::max),
        mean_r_char_char: pair_r(|a, b| a.counts_characters() && b.counts_characters()),
        mean_r_word_char: pair_r(|a, b| a.counts_characters() != b.counts_characters()),
        rank_rejection_rate: percent(rank_tests.iter().filter(|&&r| r).count(), rank_tests.len())
            .map(|p| p / 100.0),
        mean_h: mean_of(hursts().map(|h| h.h)),
        mean_h_shuffled: mean_of(hursts().map(|h| h.h_shuffled)),
        max_abs_delta_h: reports.iter().map(|r| r.max_abs_delta_h).reduce(f64::max),
        h_vs_length_r: hurst_length_correlation(reports).ok(),
    }
}
