//! Empirical distributions and the two-sample Kolmogorov–Smirnov test.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::correlation::fit_linear_map;
use crate::error::{Error, Result};
use crate::scalar::{mean, Scalar};

/// Smallest sample the KS test accepts on either side.
pub const KS_MIN_SAMPLE: usize = 5;
/// Smallest series the CCDF fit accepts.
pub const CCDF_MIN_SAMPLE: usize = 50;
/// Fewest CCDF points a stretched-exponential fit runs on.
pub const CCDF_MIN_POINTS: usize = 5;

/// Right-continuous empirical CDF.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ecdf<T> {
    pub sorted_samples: Vec<T>,
    pub n: usize,
}

fn total_cmp<T: Scalar>(a: &T, b: &T) -> Ordering {
    a.partial_cmp(b).expect("finite values are ordered")
}

impl<T: Scalar> Ecdf<T> {
    pub fn new(samples: &[T]) -> Result<Ecdf<T>> {
        if samples.is_empty() {
            return Err(Error::TooShort {
                what: "ECDF samples",
                needed: 1,
                got: 0,
            });
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite sample".into()));
        }
        let mut sorted_samples = samples.to_vec();
        sorted_samples.sort_by(total_cmp);
        Ok(Ecdf {
            n: sorted_samples.len(),
            sorted_samples,
        })
    }

    /// Share of samples ≤ `x`.
    pub fn eval(&self, x: T) -> T {
        let below = self.sorted_samples.partition_point(|&v| v <= x);
        T::of_usize(below) / T::of_usize(self.n)
    }

    /// `(x, C(x))` at every distinct sample value.
    pub fn curve(&self) -> Vec<(T, T)> {
        let mut out = Vec::new();
        let s = &self.sorted_samples;
        for (i, &v) in s.iter().enumerate() {
            if i + 1 == s.len() || s[i + 1] != v {
                out.push((v, T::of_usize(i + 1) / T::of_usize(self.n)));
            }
        }
        out
    }
}

/// `sup |C_a − C_b|`, exact: evaluated after each distinct merged value.
pub fn ks_distance<T: Scalar>(a: &Ecdf<T>, b: &Ecdf<T>) -> T {
    let (sa, sb) = (&a.sorted_samples, &b.sorted_samples);
    let (na, nb) = (T::of_usize(a.n), T::of_usize(b.n));
    let (mut i, mut j) = (0, 0);
    let mut best = T::zero();
    while i < sa.len() || j < sb.len() {
        let v = match (sa.get(i), sb.get(j)) {
            (Some(&x), Some(&y)) => x.min(y),
            (Some(&x), None) => x,
            (None, Some(&y)) => y,
            (None, None) => unreachable!(),
        };
        while i < sa.len() && sa[i] <= v {
            i += 1;
        }
        while j < sb.len() && sb[j] <= v {
            j += 1;
        }
        let d = (T::of_usize(i) / na - T::of_usize(j) / nb).abs();
        best = best.max(d);
    }
    best
}

/// Kolmogorov survival function `Q(λ) = P(K > λ)`.
pub fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    let q = if lambda < 1.18 {
        // Theta-function form; converges fast where the alternating series does not.
        let c = std::f64::consts::PI.powi(2) / (8.0 * lambda * lambda);
        let mut p = 0.0;
        for k in 1..=100 {
            let odd = (2 * k - 1) as f64;
            let term = (-odd * odd * c).exp();
            p += term;
            if term < 1e-12 * p.max(f64::MIN_POSITIVE) {
                break;
            }
        }
        1.0 - (2.0 * std::f64::consts::PI).sqrt() / lambda * p
    } else {
        let mut sum = 0.0;
        let mut sign = 1.0;
        for k in 1..=100 {
            let kf = k as f64;
            let term = (-2.0 * kf * kf * lambda * lambda).exp();
            sum += sign * term;
            if term < 1e-12 {
                break;
            }
            sign = -sign;
        }
        2.0 * sum
    };
    q.clamp(0.0, 1.0)
}

/// Asymptotic two-sample p-value for distance `kappa` between samples of
/// sizes `na` and `nb`.
pub fn ks_p_value(kappa: f64, na: usize, nb: usize) -> f64 {
    let ne = (na * nb) as f64 / (na + nb) as f64;
    let sq = ne.sqrt();
    kolmogorov_q((sq + 0.12 + 0.11 / sq) * kappa)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsResult<T> {
    pub kappa: T,
    pub p_value: T,
    /// `p_value ≥ threshold`
    pub accepted: bool,
}

pub fn ks_two_sample<T: Scalar>(a: &[T], b: &[T], threshold: T) -> Result<KsResult<T>> {
    for s in [a, b] {
        if s.len() < KS_MIN_SAMPLE {
            return Err(Error::TooShort {
                what: "KS sample",
                needed: KS_MIN_SAMPLE,
                got: s.len(),
            });
        }
    }
    let kappa = ks_distance(&Ecdf::new(a)?, &Ecdf::new(b)?);
    let p = T::of(ks_p_value(kappa.as_f64(), a.len(), b.len()));
    Ok(KsResult {
        kappa,
        p_value: p,
        accepted: p >= threshold,
    })
}

/// `y ≈ alpha·x + beta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearMap<T> {
    pub alpha: T,
    pub beta: T,
}

impl<T: Scalar> LinearMap<T> {
    pub fn apply(&self, x: T) -> T {
        self.alpha * x + self.beta
    }
}

/// Fit the least-squares map from `x` to `y`, push every `x` through it and
/// KS-test the mapped values against `y`. No mean normalization.
pub fn ks_after_linear_map<T: Scalar>(x: &[T], y: &[T], threshold: T) -> Result<KsResult<T>> {
    let map = fit_linear_map(x, y)?;
    let mapped: Vec<T> = x.iter().map(|&v| map.apply(v)).collect();
    ks_two_sample(&mapped, y, threshold)
}

/// Divide by the series mean.
pub fn mean_normalize<T: Scalar>(series: &[T]) -> Result<Vec<T>> {
    if series.is_empty() {
        return Err(Error::TooShort {
            what: "series",
            needed: 1,
            got: 0,
        });
    }
    let m = mean(series);
    if m == T::zero() || !m.is_finite() {
        return Err(Error::Degenerate("series mean is zero".into()));
    }
    Ok(series.iter().map(|&v| v / m).collect())
}

/// `CCDF(x) = exp(−mu·x^b)`, fitted in `ln(−ln CCDF)` against `ln x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StretchedExpFit<T> {
    pub mu: T,
    pub b: T,
    /// Root mean square residual in the transformed coordinates.
    pub fit_rmse: T,
    pub points_used: usize,
}

/// Empirical `(x, #{> x}/n)` at each distinct value.
pub fn empirical_ccdf<T: Scalar>(series: &[T]) -> Result<Vec<(T, T)>> {
    let ecdf = Ecdf::new(series)?;
    Ok(ecdf
        .curve()
        .into_iter()
        .map(|(x, c)| (x, T::one() - c))
        .collect())
}

/// Fit a stretched exponential to the empirical CCDF of a length series.
pub fn fit_ccdf_stretched_exp<T: Scalar>(series: &[T]) -> Result<StretchedExpFit<T>> {
    if series.len() < CCDF_MIN_SAMPLE {
        return Err(Error::TooShort {
            what: "CCDF fit sample",
            needed: CCDF_MIN_SAMPLE,
            got: series.len(),
        });
    }
    // NaN fails this check too
    if !series.iter().all(|&v| v >= T::one()) {
        return Err(Error::InvalidInput("CCDF fit needs values ≥ 1".into()));
    }
    fit_stretched_exp_points(&empirical_ccdf(series)?)
}

/// Fit `(x, ccdf)` points directly. Points outside `0 < ccdf < 1` or with
/// `x ≤ 0` are ignored.
pub fn fit_stretched_exp_points<T: Scalar>(points: &[(T, T)]) -> Result<StretchedExpFit<T>> {
    let (lx, ly): (Vec<f64>, Vec<f64>) = points
        .iter()
        .map(|&(x, c)| (x.as_f64(), c.as_f64()))
        .filter(|&(x, c)| x > 0.0 && c > 0.0 && c < 1.0)
        .map(|(x, c)| (x.ln(), (-c.ln()).ln()))
        .unzip();
    if lx.len() < CCDF_MIN_POINTS {
        return Err(Error::TooShort {
            what: "CCDF points",
            needed: CCDF_MIN_POINTS,
            got: lx.len(),
        });
    }
    let map = fit_linear_map(&lx, &ly)?;
    let sse: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(&x, &y)| (y - map.apply(x)).powi(2))
        .sum();
    Ok(StretchedExpFit {
        mu: T::of(map.beta.exp()),
        b: T::of(map.alpha),
        fit_rmse: T::of((sse / lx.len() as f64).sqrt()),
        points_used: lx.len(),
    })
}
