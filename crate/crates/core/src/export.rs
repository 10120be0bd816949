//! Writing corpus runs to disk.
//!
//! Layout under the output directory:
//!
//! ```text
//! books/<id>.{csv,json}      per-book comparison records
//! summary.{csv,json}         corpus aggregates
//! skipped.csv                books that were not analyzed, with the reason
//! plots/*.csv                plot-ready tables
//! series/, dfa/, ecdf/       per-series CSVs, only with `include_series`
//! ```
//!
//! Every real number is written with 6 significant digits.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;
use serde_json::Value;

use crate::distribution::Ecdf;
use crate::error::{Error, Result};
use crate::harness::{AcceptanceTable, BookReport, CorpusRun, CorpusSummary};
use crate::series::MeasureKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::InvalidConfig(format!("unknown format `{other}`"))),
        }
    }
}

/// `%g`-style rendering with 6 significant digits.
pub fn fmt6(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{v:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (5 - exp) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_owned()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn round6(v: f64) -> f64 {
    fmt6(v).parse().unwrap_or(v)
}

/// Round every non-integer number in a JSON tree to 6 significant digits.
fn round_json(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64().and_then(|x| serde_json::Number::from_f64(round6(x))) {
                *n = x;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_json),
        Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    let io = |source| Error::Output {
        path: path.to_path_buf(),
        source,
    };
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(io)?;
    }
    let mut f = fs::File::create(path).map_err(io)?;
    f.write_all(bytes).map_err(io)
}

fn write_json<S: Serialize>(path: &Path, value: &S) -> Result<()> {
    let mut tree = serde_json::to_value(value)?;
    round_json(&mut tree);
    let mut text = serde_json::to_string_pretty(&tree)?;
    text.push('\n');
    write_file(path, text.as_bytes())
}

fn write_csv(path: &Path, header: &[&str], rows: Vec<Vec<String>>) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Output {
        path: path.to_path_buf(),
        source: e.into_error(),
    })?;
    write_file(path, &bytes)
}

fn opt(v: Option<f64>) -> String {
    v.map(fmt6).unwrap_or_default()
}

const COMPARISON_HEADER: &[&str] = &[
    "measure_a",
    "measure_b",
    "pearson_r",
    "spearman_rho",
    "spearman_p",
    "kendall_tau",
    "kendall_p",
    "gamma",
    "gamma_p",
    "ks_plain_kappa",
    "ks_plain_p",
    "ks_plain_accepted",
    "ks_mapped_kappa",
    "ks_mapped_p",
    "ks_mapped_accepted",
    "alpha",
    "beta",
];

fn comparison_rows(report: &BookReport) -> Vec<Vec<String>> {
    report
        .comparisons
        .iter()
        .map(|c| {
            vec![
                c.pair.0.symbol().to_owned(),
                c.pair.1.symbol().to_owned(),
                fmt6(c.pearson.r),
                fmt6(c.spearman.statistic),
                fmt6(c.spearman.p_value),
                fmt6(c.kendall.statistic),
                fmt6(c.kendall.p_value),
                fmt6(c.gamma.statistic),
                fmt6(c.gamma.p_value),
                fmt6(c.ks_plain.kappa),
                fmt6(c.ks_plain.p_value),
                c.ks_plain.accepted.to_string(),
                fmt6(c.ks_mapped.kappa),
                fmt6(c.ks_mapped.p_value),
                c.ks_mapped.accepted.to_string(),
                fmt6(c.linear_map.alpha),
                fmt6(c.linear_map.beta),
            ]
        })
        .collect()
}

fn summary_rows(s: &CorpusSummary) -> Vec<Vec<String>> {
    let int = |v: usize| v.to_string();
    let mut rows = vec![
        ("book_count", int(s.book_count)),
        ("skipped_count", int(s.skipped_count)),
        ("comparison_count", int(s.comparison_count)),
        ("p_threshold", fmt6(s.p_threshold)),
        ("seed", s.seed.to_string()),
        ("histogram_bin", int(s.histogram_bin)),
        ("ks_plain_acceptance_percent", opt(s.ks_plain_acceptance)),
        ("ks_mapped_acceptance_percent", opt(s.ks_mapped_acceptance)),
        ("mean_r", opt(s.mean_r)),
        ("min_r", opt(s.min_r)),
        ("max_r", opt(s.max_r)),
        ("mean_r_char_char", opt(s.mean_r_char_char)),
        ("mean_r_word_char", opt(s.mean_r_word_char)),
        ("rank_rejection_rate", opt(s.rank_rejection_rate)),
        ("mean_h", opt(s.mean_h)),
        ("mean_h_shuffled", opt(s.mean_h_shuffled)),
        ("max_abs_delta_h", opt(s.max_abs_delta_h)),
        ("h_vs_length_r", opt(s.h_vs_length_r)),
    ];
    rows.push(("ks_mapped_variant", "linear map only".into()));
    rows.into_iter()
        .map(|(k, v)| vec![k.to_owned(), v])
        .collect()
}

fn curve_rows(points: &[(f64, f64)]) -> Vec<Vec<String>> {
    points.iter().map(|&(x, c)| vec![fmt6(x), fmt6(c)]).collect()
}

fn table_rows(variant: &str, table: &AcceptanceTable) -> Vec<Vec<String>> {
    MeasureKind::ALL
        .iter()
        .map(|k| {
            let mut row = vec![variant.to_owned(), k.symbol().to_owned()];
            row.extend(table[k.index()].iter().map(|&v| opt(v)));
            row
        })
        .collect()
}

fn file_name(id: &str, kind: MeasureKind) -> String {
    format!("{id}_{}.csv", kind.name())
}

/// Write every artifact of `run` below `out_dir` and return the paths, in
/// the order written.
pub fn emit_reports(
    run: &CorpusRun,
    out_dir: &Path,
    format: OutputFormat,
    include_series: bool,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir).map_err(|source| Error::Output {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let mut written = Vec::new();
    let mut emit = |rel: String, f: &mut dyn FnMut(&Path) -> Result<()>| -> Result<()> {
        let path = out_dir.join(rel);
        f(&path)?;
        written.push(path);
        Ok(())
    };

    for report in &run.reports {
        let rel = format!("books/{}.{}", report.book_id, format.extension());
        emit(rel, &mut |p| match format {
            OutputFormat::Csv => write_csv(p, COMPARISON_HEADER, comparison_rows(report)),
            OutputFormat::Json => write_json(p, report),
        })?;
    }

    let s = &run.summary;
    emit(format!("summary.{}", format.extension()), &mut |p| match format {
        OutputFormat::Csv => write_csv(p, &["metric", "value"], summary_rows(s)),
        OutputFormat::Json => write_json(p, s),
    })?;

    emit("skipped.csv".into(), &mut |p| {
        let rows = run
            .skipped
            .iter()
            .map(|b| vec![b.book_id.clone(), b.reason.clone()])
            .collect();
        write_csv(p, &["book_id", "reason"], rows)
    })?;

    emit("plots/fig1a_sentence_counts.csv".into(), &mut |p| {
        let rows = s
            .sentence_count_histogram
            .iter()
            .map(|b| vec![b.lower.to_string(), b.upper.to_string(), b.count.to_string()])
            .collect();
        write_csv(p, &["bin_lower", "bin_upper", "books"], rows)
    })?;
    for (name, points) in [
        ("fig2c_pearson_cdf", &s.r_cdf),
        ("fig3c_ks_plain_cdf", &s.kappa_plain_cdf),
        ("fig3c_ks_mapped_cdf", &s.kappa_mapped_cdf),
        ("fig4c_delta_h_cdf", &s.delta_h_cdf),
    ] {
        emit(format!("plots/{name}.csv"), &mut |p| {
            write_csv(p, &["x", "cumulative"], curve_rows(points))
        })?;
    }
    emit("plots/fig4b_hurst.csv".into(), &mut |p| {
        let rows = run
            .reports
            .iter()
            .flat_map(|r| {
                r.hurst.iter().map(move |h| {
                    vec![
                        r.book_id.clone(),
                        r.sentence_count.to_string(),
                        h.kind.symbol().to_owned(),
                        fmt6(h.estimate.h),
                        fmt6(h.estimate.intercept),
                        fmt6(h.estimate.fit_r2),
                        fmt6(h.estimate.h_shuffled),
                        h.estimate.shuffle_seed.to_string(),
                    ]
                })
            })
            .collect();
        write_csv(
            p,
            &["book_id", "sentence_count", "measure", "h", "intercept", "fit_r2", "h_shuffled", "shuffle_seed"],
            rows,
        )
    })?;
    emit("plots/table2_ks_acceptance.csv".into(), &mut |p| {
        let mut header = vec!["variant", "measure"];
        header.extend(MeasureKind::ALL.iter().map(|k| k.symbol()));
        let mut rows = table_rows("plain", &s.ks_acceptance_plain);
        rows.extend(table_rows("mapped", &s.ks_acceptance_mapped));
        write_csv(p, &header, rows)
    })?;

    if include_series {
        for report in &run.reports {
            for (series, curve) in report.series.iter().zip(&report.curves) {
                let id = &report.book_id;
                emit(format!("series/{}", file_name(id, series.kind)), &mut |p| {
                    let rows = series
                        .values
                        .iter()
                        .enumerate()
                        .map(|(i, v)| vec![i.to_string(), v.to_string()])
                        .collect();
                    write_csv(p, &["sentence_index", "value"], rows)
                })?;
                emit(format!("dfa/{}", file_name(id, series.kind)), &mut |p| {
                    let rows = curve
                        .points
                        .iter()
                        .map(|&(m, f)| vec![m.to_string(), fmt6(f)])
                        .collect();
                    write_csv(p, &["m", "F"], rows)
                })?;
                emit(format!("ecdf/{}", file_name(id, series.kind)), &mut |p| {
                    let curve = Ecdf::new(&series.as_f64()).map(|e| e.curve()).unwrap_or_default();
                    write_csv(p, &["x", "cumulative"], curve_rows(&curve))
                })?;
            }
        }
    }
    Ok(written)
}
