//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Concordant, discordant and tie counts by enumerating every pair.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct PairOracle {
    pub concordant: i64,
    pub discordant: i64,
    pub tied_x: i64,
    pub tied_y: i64,
    pub n0: i64,
}

pub fn enumerate_pairs(x: &[f64], y: &[f64]) -> PairOracle {
    let mut o = PairOracle::default();
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            o.n0 += 1;
            let dx = x[i] - x[j];
            let dy = y[i] - y[j];
            if dx == 0.0 {
                o.tied_x += 1;
            }
            if dy == 0.0 {
                o.tied_y += 1;
            }
            if dx * dy > 0.0 {
                o.concordant += 1;
            } else if dx * dy < 0.0 {
                o.discordant += 1;
            }
        }
    }
    o
}

pub fn oracle_tau_b(x: &[f64], y: &[f64]) -> Option<f64> {
    let o = enumerate_pairs(x, y);
    let denom = ((o.n0 - o.tied_x) as f64) * ((o.n0 - o.tied_y) as f64);
    (denom > 0.0).then(|| (o.concordant - o.discordant) as f64 / denom.sqrt())
}

pub fn oracle_gamma(x: &[f64], y: &[f64]) -> Option<f64> {
    let o = enumerate_pairs(x, y);
    let untied = o.concordant + o.discordant;
    (untied > 0).then(|| (o.concordant - o.discordant) as f64 / untied as f64)
}

/// Pearson r on integer data: r² is formed exactly in rationals, so the
/// only rounding is the final conversion and square root.
pub fn oracle_pearson(x: &[i64], y: &[i64]) -> Option<f64> {
    let n = BigInt::from(x.len());
    let sum = |v: &[i64]| v.iter().map(|&a| BigInt::from(a)).sum::<BigInt>();
    let dot = |a: &[i64], b: &[i64]| {
        a.iter()
            .zip(b)
            .map(|(&p, &q)| BigInt::from(p) * BigInt::from(q))
            .sum::<BigInt>()
    };
    let (sx, sy) = (sum(x), sum(y));
    let sxy = &n * dot(x, y) - &sx * &sy;
    let sxx = &n * dot(x, x) - &sx * &sx;
    let syy = &n * dot(y, y) - &sy * &sy;
    if sxx.is_zero() || syy.is_zero() {
        return None;
    }
    let r2 = BigRational::new(&sxy * &sxy, sxx * syy);
    let r = r2.to_f64()?.sqrt();
    Some(if sxy.is_negative() { -r } else { r })
}

fn ecdf_at(sorted: &[f64], x: f64) -> f64 {
    sorted.iter().filter(|&&v| v <= x).count() as f64 / sorted.len() as f64
}

/// `sup |C_a − C_b|` by brute force over a dense grid: every sample value,
/// every midpoint between consecutive merged values and one point below
/// and above the merged range.
pub fn brute_ks(a: &[f64], b: &[f64]) -> f64 {
    let mut merged: Vec<f64> = a.iter().chain(b).copied().collect();
    merged.sort_by(|p, q| p.partial_cmp(q).unwrap());
    let mut grid = vec![merged[0] - 1.0, merged[merged.len() - 1] + 1.0];
    for w in merged.windows(2) {
        grid.push(w[0]);
        grid.push((w[0] + w[1]) / 2.0);
    }
    grid.push(merged[merged.len() - 1]);
    grid.iter()
        .map(|&x| (ecdf_at(a, x) - ecdf_at(b, x)).abs())
        .fold(0.0, f64::max)
}

/// Small integers, so ties are common.
pub fn tied_sample(rng: &mut ChaCha8Rng, n: usize, range: i64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(0..range) as f64).collect()
}

const WORDS: &[&str] = &[
    "the", "a", "of", "and", "to", "she", "he", "it", "was", "is", "house", "river", "walked",
    "slowly", "toward", "light", "letter", "remembered", "evening", "quiet", "garden", "captain",
    "whale", "never", "said", "morning", "window", "darkness", "beneath", "strange", "ship",
];

/// Synthetic prose: `sentences` sentences whose word counts follow a slowly
/// drifting random level.
pub fn synthetic_book(rng: &mut ChaCha8Rng, sentences: usize) -> String {
    let mut out = String::new();
    let mut level = 12.0f64;
    for _ in 0..sentences {
        level = (level + rng.random_range(-1.5..1.5)).clamp(3.0, 30.0);
        let len = (level + rng.random_range(-3.0..3.0)).round().max(1.0) as usize;
        for w in 0..len {
            let word = WORDS[rng.random_range(0..WORDS.len())];
            if w == 0 {
                let mut c = word.chars();
                let first = c.next().unwrap().to_uppercase();
                out.extend(first);
                out.push_str(c.as_str());
            } else {
                out.push(' ');
                out.push_str(word);
            }
        }
        out.push_str(match rng.random_range(0..10) {
            0 => "? ",
            1 => "! ",
            _ => ". ",
        });
    }
    out
}
