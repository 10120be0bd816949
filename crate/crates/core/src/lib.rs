//! Sentence-length time series of written texts.
//!
//! A book is segmented into sentences, each sentence is measured six ways
//! (words and characters, with and without stopwords, surface or lemma
//! forms), and the six resulting series are compared pairwise:
//!
//! - [`correlation`]: Pearson r, Spearman ρ, Kendall τ-b, Goodman–Kruskal γ
//!   and the least-squares map between two series.
//! - [`distribution`]: empirical CDFs, two-sample Kolmogorov–Smirnov tests
//!   (plain mean-normalized and after the linear map) and the
//!   stretched-exponential CCDF fit.
//! - [`dfa`]: detrended fluctuation analysis and Hurst exponents, with a
//!   shuffled control.
//!
//! [`harness`] runs all of it over a directory of books and [`export`]
//! writes per-book records, corpus summaries and plot-ready CSVs.
//!
//! The numerical modules are generic over [`Scalar`] (`f32` or `f64`); the
//! aliases at the crate root pin the `f64` versions used by the harness.
//!
//! ```
//! use sentlen::{Lexicons, MeasureKind, document_from_text, extract_all};
//!
//! let lex = Lexicons::bundled();
//! let doc = document_from_text(
//!     "excerpt",
//!     "To Sherlock Holmes she is always the woman.",
//!     &lex.stops,
//!     &lex.lemmas,
//! );
//! let series = extract_all(&doc);
//! assert_eq!(series[0].kind, MeasureKind::Words);
//! assert_eq!(series[0].values, vec![8]);
//! assert_eq!(series[3].values, vec![4]);
//! ```

pub mod correlation;
pub mod dfa;
pub mod distribution;
mod error;
pub mod export;
pub mod harness;
mod scalar;
pub mod series;
pub mod text;

pub use correlation::{
    fit_linear_map, goodman_kruskal_gamma, kendall_tau, pearson, spearman, PearsonResult,
    RankTestResult, DEFAULT_SIGNIFICANCE,
};
pub use dfa::{
    dfa_curve, estimate_hurst, fluctuation, hurst, integrate_profile, shuffled_hurst, DfaConfig,
    FluctuationCurve, HurstEstimate, ScalingFit,
};
pub use distribution::{
    fit_ccdf_stretched_exp, fit_stretched_exp_points, ks_after_linear_map, ks_distance, ks_p_value,
    ks_two_sample, mean_normalize, Ecdf,
    KsResult, LinearMap, StretchedExpFit,
};
pub use error::{Error, Result};
pub use export::{emit_reports, fmt6, OutputFormat};
pub use harness::{
    analyze_book, analyze_corpus, derive_seed, hurst_length_correlation, summarize,
    AnalysisConfig, BookOutcome, BookReport, ComparisonResult, CorpusRun, CorpusSummary,
    DfaSettings, KindHurst, SkippedBook,
};
pub use scalar::Scalar;
pub use series::{extract_all, extract_series, LengthSeries, MeasureKind};
pub use text::{
    document_from_text, lemmatize, load_document, remove_stopwords, segment_sentences, tokenize,
    Document, LemmaLexicon, Lexicons, SegmentationRules, Sentence, StopwordList, Token,
};

pub type Pearson64 = PearsonResult<f64>;
pub type RankTest64 = RankTestResult<f64>;
pub type Ks64 = KsResult<f64>;
pub type LinearMap64 = LinearMap<f64>;
pub type StretchedExpFit64 = StretchedExpFit<f64>;
pub type Ecdf64 = Ecdf<f64>;
pub type FluctuationCurve64 = FluctuationCurve<f64>;
pub type ScalingFit64 = ScalingFit<f64>;
pub type HurstEstimate64 = HurstEstimate<f64>;

pub type Pearson32 = PearsonResult<f32>;
pub type Ks32 = KsResult<f32>;
pub type LinearMap32 = LinearMap<f32>;
pub type FluctuationCurve32 = FluctuationCurve<f32>;
pub type HurstEstimate32 = HurstEstimate<f32>;
