//! Detrended fluctuation analysis.
//!
//! The profile is the running sum of the mean-subtracted series. For each
//! window size `m` it is cut into `s = ⌊N/m⌋` windows from the start and `s`
//! more from the end, a degree-`l` polynomial is removed from each, and
//! `F(m)` is the root mean square residual over all `2s` windows. The Hurst
//! exponent `h` is the slope of `ln F` against `ln m`.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{mean, Scalar};

pub const DEFAULT_DEGREE: usize = 1;
pub const DEFAULT_MIN_WINDOW: usize = 8;
pub const DEFAULT_MAX_FRACTION: f64 = 0.25;
pub const DEFAULT_POINTS: usize = 16;
/// Fewest curve points a scaling fit runs on.
pub const MIN_FIT_POINTS: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DfaConfig {
    /// Polynomial degree `l` removed from each window.
    pub detrend_degree: usize,
    /// Ascending window sizes `m`.
    pub window_sizes: Vec<usize>,
    /// Inclusive `[m_min, m_max]` used by the log-log fit.
    pub fit_range: (usize, usize),
    pub shuffle_seed: u64,
}

impl DfaConfig {
    /// `points` log-spaced window sizes from `m_min` to `⌊max_fraction·n⌋`
    /// (rounded, deduplicated), fitted over the whole range.
    pub fn log_spaced(
        n: usize,
        detrend_degree: usize,
        m_min: usize,
        max_fraction: f64,
        points: usize,
        shuffle_seed: u64,
    ) -> Result<DfaConfig> {
        if !(max_fraction > 0.0 && max_fraction <= 0.25) {
            return Err(Error::InvalidConfig(format!(
                "largest window fraction must be in (0, 0.25], got {max_fraction}"
            )));
        }
        if points == 0 {
            return Err(Error::InvalidConfig("need at least one window size".into()));
        }
        let m_min = m_min.max(detrend_degree + 2);
        let m_max = ((n as f64) * max_fraction).floor() as usize;
        if m_max < m_min {
            return Err(Error::TooShort {
                what: "series for DFA windows",
                needed: (m_min as f64 / max_fraction).ceil() as usize,
                got: n,
            });
        }
        let (lo, hi) = ((m_min as f64).ln(), (m_max as f64).ln());
        let mut window_sizes: Vec<usize> = (0..points)
            .map(|i| {
                if points == 1 {
                    m_min
                } else {
                    let t = i as f64 / (points - 1) as f64;
                    ((lo + t * (hi - lo)).exp().round() as usize).clamp(m_min, m_max)
                }
            })
            .collect();
        window_sizes.dedup();
        let fit_range = (window_sizes[0], *window_sizes.last().unwrap());
        Ok(DfaConfig {
            detrend_degree,
            window_sizes,
            fit_range,
            shuffle_seed,
        })
    }

    /// Default grid for a series of length `n`.
    pub fn for_length(n: usize, shuffle_seed: u64) -> Result<DfaConfig> {
        DfaConfig::log_spaced(
            n,
            DEFAULT_DEGREE,
            DEFAULT_MIN_WINDOW,
            DEFAULT_MAX_FRACTION,
            DEFAULT_POINTS,
            shuffle_seed,
        )
    }

    fn validate(&self, n: usize) -> Result<()> {
        if self.window_sizes.is_empty() {
            return Err(Error::InvalidConfig("no window sizes".into()));
        }
        if self.window_sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig("window sizes must be strictly ascending".into()));
        }
        let smallest = self.window_sizes[0];
        if smallest < self.detrend_degree + 2 {
            return Err(Error::InvalidConfig(format!(
                "window {smallest} too small for degree {}",
                self.detrend_degree
            )));
        }
        let largest = *self.window_sizes.last().unwrap();
        if n < 4 * largest {
            return Err(Error::TooShort {
                what: "series for DFA windows",
                needed: 4 * largest,
                got: n,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FluctuationCurve<T> {
    /// `(m, F(m))`
    pub points: Vec<(usize, T)>,
}

/// Log-log fit `ln F = h·ln m + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit<T> {
    pub h: T,
    pub intercept: T,
    pub fit_r2: T,
    pub points_used: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HurstEstimate<T> {
    pub h: T,
    pub intercept: T,
    pub fit_r2: T,
    /// Exponent of the shuffled series.
    pub h_shuffled: T,
    pub shuffle_seed: u64,
}

/// Running sum of `w_i − mean(w)`.
pub fn integrate_profile<T: Scalar>(w: &[T]) -> Vec<T> {
    if w.is_empty() {
        return Vec::new();
    }
    let m = mean(w);
    let mut acc = T::zero();
    w.iter()
        .map(|&v| {
            acc = acc + (v - m);
            acc
        })
        .collect()
}

/// Least-squares polynomial fitting on one window length: basis powers of
/// the centered, scaled coordinate and the inverse Gram matrix.
struct WindowBasis<T> {
    powers: Vec<Vec<T>>,
    gram_inv: Vec<Vec<T>>,
}

impl<T: Scalar> WindowBasis<T> {
    fn new(m: usize, degree: usize) -> WindowBasis<T> {
        let k = degree + 1;
        let half = T::of((m - 1) as f64 / 2.0);
        let powers: Vec<Vec<T>> = (0..m)
            .map(|i| {
                let u = (T::of_usize(i) - half) / half;
                let mut row = Vec::with_capacity(k);
                let mut p = T::one();
                for _ in 0..k {
                    row.push(p);
                    p = p * u;
                }
                row
            })
            .collect();
        let mut gram = vec![vec![T::zero(); k]; k];
        for row in &powers {
            for a in 0..k {
                for b in 0..k {
                    gram[a][b] = gram[a][b] + row[a] * row[b];
                }
            }
        }
        WindowBasis {
            powers,
            gram_inv: invert(gram),
        }
    }

    /// Mean squared residual of `z` after removing the fitted polynomial.
    fn residual_mean_square(&self, z: &[T]) -> T {
        let k = self.gram_inv.len();
        let mut rhs = vec![T::zero(); k];
        for (row, &zi) in self.powers.iter().zip(z) {
            for a in 0..k {
                rhs[a] = rhs[a] + row[a] * zi;
            }
        }
        let coef: Vec<T> = self
            .gram_inv
            .iter()
            .map(|g| g.iter().zip(&rhs).fold(T::zero(), |s, (&gi, &r)| s + gi * r))
            .collect();
        let mut ss = T::zero();
        for (row, &zi) in self.powers.iter().zip(z) {
            let fit = row.iter().zip(&coef).fold(T::zero(), |s, (&p, &c)| s + p * c);
            let r = zi - fit;
            ss = ss + r * r;
        }
        ss / T::of_usize(z.len())
    }
}

/// Gauss–Jordan inverse with partial pivoting; the Gram matrices here are
/// small and positive definite.
fn invert<T: Scalar>(mut a: Vec<Vec<T>>) -> Vec<Vec<T>> {
    let n = a.len();
    let mut inv: Vec<Vec<T>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let d = a[col][col];
        for j in 0..n {
            a[col][j] = a[col][j] / d;
            inv[col][j] = inv[col][j] / d;
        }
        for i in 0..n {
            if i != col {
                let f = a[i][col];
                for j in 0..n {
                    a[i][j] = a[i][j] - f * a[col][j];
                    inv[i][j] = inv[i][j] - f * inv[col][j];
                }
            }
        }
    }
    inv
}

/// `F(m)` of an already integrated profile, degree-`l` detrending.
pub fn fluctuation<T: Scalar>(profile: &[T], m: usize, l: usize) -> Result<T> {
    let n = profile.len();
    if m < l + 2 || m > n / 4 {
        return Err(Error::InvalidInput(format!(
            "window {m} outside [{}, {}] for length {n}, degree {l}",
            l + 2,
            n / 4
        )));
    }
    Ok(fluctuation_with(profile, m, &WindowBasis::new(m, l)))
}

fn fluctuation_with<T: Scalar>(profile: &[T], m: usize, basis: &WindowBasis<T>) -> T {
    let n = profile.len();
    let s = n / m;
    let mut total = T::zero();
    for i in 0..s {
        total = total + basis.residual_mean_square(&profile[i * m..(i + 1) * m]);
        total = total + basis.residual_mean_square(&profile[n - (i + 1) * m..n - i * m]);
    }
    (total / T::of_usize(2 * s)).sqrt()
}

/// Fluctuation function of `series` at every configured window size.
pub fn dfa_curve<T: Scalar>(series: &[T], config: &DfaConfig) -> Result<FluctuationCurve<T>> {
    config.validate(series.len())?;
    let profile = integrate_profile(series);
    let points = config
        .window_sizes
        .iter()
        .map(|&m| {
            let basis = WindowBasis::new(m, config.detrend_degree);
            (m, fluctuation_with(&profile, m, &basis))
        })
        .collect();
    Ok(FluctuationCurve { points })
}

/// Least squares of `ln F` on `ln m` over points with `m` in `fit_range`
/// and `F > 0`.
pub fn estimate_hurst<T: Scalar>(
    curve: &FluctuationCurve<T>,
    fit_range: (usize, usize),
) -> Result<ScalingFit<T>> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = curve
        .points
        .iter()
        .filter(|&&(m, f)| m >= fit_range.0 && m <= fit_range.1 && f > T::zero() && f.is_finite())
        .map(|&(m, f)| ((m as f64).ln(), f.as_f64().ln()))
        .unzip();
    if xs.len() < MIN_FIT_POINTS {
        return Err(Error::UndefinedExponent(format!(
            "{} positive fluctuation points in fit range, need {MIN_FIT_POINTS}",
            xs.len()
        )));
    }
    let k = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::UndefinedExponent("single window size in fit range".into()));
    }
    let h = sxy / sxx;
    let intercept = my - h * mx;
    let sse: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - (h * x + intercept)).powi(2))
        .sum();
    let fit_r2 = if syy > 0.0 { (1.0 - sse / syy).clamp(0.0, 1.0) } else { 1.0 };
    Ok(ScalingFit {
        h: T::of(h),
        intercept: T::of(intercept),
        fit_r2: T::of(fit_r2),
        points_used: xs.len(),
    })
}

/// Hurst exponent of a uniformly shuffled copy, seeded by
/// `config.shuffle_seed`.
pub fn shuffled_hurst<T: Scalar>(series: &[T], config: &DfaConfig) -> Result<T> {
    let mut shuffled = series.to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(config.shuffle_seed);
    shuffled.shuffle(&mut rng);
    let curve = dfa_curve(&shuffled, config)?;
    Ok(estimate_hurst(&curve, config.fit_range)?.h)
}

/// `h` of the series and `h*` of its shuffle.
pub fn hurst<T: Scalar>(series: &[T], config: &DfaConfig) -> Result<(HurstEstimate<T>, FluctuationCurve<T>)> {
    let curve = dfa_curve(series, config)?;
    let fit = estimate_hurst(&curve, config.fit_range)?;
    let h_shuffled = shuffled_hurst(series, config)?;
    Ok((
        HurstEstimate {
            h: fit.h,
            intercept: fit.intercept,
            fit_r2: fit.fit_r2,
            h_shuffled,
            shuffle_seed: config.shuffle_seed,
        },
        curve,
    ))
}
