//! Linear and rank association between two aligned series.
//!
//! Rank-test p-values are two-sided under the independence null. Below ten
//! observations they come from full permutation enumeration; from ten up the
//! usual normal approximations are used (tie-corrected variance of Kendall's
//! S for τ-b and γ, `ρ·√(n−1)` for Spearman).

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::distribution::LinearMap;
use crate::error::{Error, Result};
use crate::scalar::{mean, Scalar};

pub const DEFAULT_SIGNIFICANCE: f64 = 0.01;

/// Observations below this count get exact permutation p-values.
pub const EXACT_BELOW: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PearsonResult<T> {
    pub r: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankTestResult<T> {
    pub statistic: T,
    pub p_value: T,
    /// Significance threshold the rejection decision was taken at.
    pub null_rejected_at: T,
    pub rejected: bool,
    /// Whether `p_value` comes from permutation enumeration.
    pub exact: bool,
}

impl<T: Scalar> RankTestResult<T> {
    fn new(statistic: f64, p_value: f64, exact: bool) -> Self {
        let p_value = p_value.clamp(0.0, 1.0);
        RankTestResult {
            statistic: T::of(statistic.clamp(-1.0, 1.0)),
            p_value: T::of(p_value),
            null_rejected_at: T::of(DEFAULT_SIGNIFICANCE),
            rejected: p_value < DEFAULT_SIGNIFICANCE,
            exact,
        }
    }

    /// Re-take the rejection decision at another threshold.
    pub fn at_threshold(mut self, threshold: T) -> Self {
        self.null_rejected_at = threshold;
        self.rejected = self.p_value < threshold;
        self
    }
}

fn check_pair<T: Scalar>(x: &[T], y: &[T]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(Error::TooShort {
            what: "paired observations",
            needed: 2,
            got: x.len(),
        });
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("non-finite value".into()));
    }
    Ok(())
}

fn cmp<T: Scalar>(a: &T, b: &T) -> Ordering {
    a.partial_cmp(b).expect("finite values are ordered")
}

/// Pearson product-moment correlation, 1/N normalization throughout.
pub fn pearson<T: Scalar>(x: &[T], y: &[T]) -> Result<PearsonResult<T>> {
    check_pair(x, y)?;
    let (mx, my) = (mean(x), mean(y));
    let (mut sxy, mut sxx, mut syy) = (T::zero(), T::zero(), T::zero());
    for (&a, &b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy = sxy + dx * dy;
        sxx = sxx + dx * dx;
        syy = syy + dy * dy;
    }
    if sxx == T::zero() || syy == T::zero() {
        return Err(Error::Degenerate("zero variance".into()));
    }
    let r = sxy / (sxx.sqrt() * syy.sqrt());
    Ok(PearsonResult {
        r: r.max(-T::one()).min(T::one()),
    })
}

/// Least-squares line `y ≈ alpha·x + beta`.
pub fn fit_linear_map<T: Scalar>(x: &[T], y: &[T]) -> Result<LinearMap<T>> {
    check_pair(x, y)?;
    let (mx, my) = (mean(x), mean(y));
    let (mut sxy, mut sxx) = (T::zero(), T::zero());
    for (&a, &b) in x.iter().zip(y) {
        let dx = a - mx;
        sxy = sxy + dx * (b - my);
        sxx = sxx + dx * dx;
    }
    if sxx == T::zero() {
        return Err(Error::Degenerate("constant x in linear fit".into()));
    }
    let alpha = sxy / sxx;
    Ok(LinearMap {
        alpha,
        beta: my - alpha * mx,
    })
}

/// Pair counts behind τ-b and γ.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub(crate) struct PairCounts {
    /// n(n−1)/2
    pub n0: i128,
    /// pairs tied in x
    pub n1: i128,
    /// pairs tied in y
    pub n2: i128,
    /// pairs tied in both
    pub n3: i128,
    /// discordant pairs
    pub discordant: i128,
    /// tie group sizes in x and y
    pub x_ties: Vec<usize>,
    pub y_ties: Vec<usize>,
}

impl PairCounts {
    /// C − D
    pub fn s(&self) -> i128 {
        self.untied() - 2 * self.discordant
    }

    /// C + D
    pub fn untied(&self) -> i128 {
        self.n0 - self.n1 - self.n2 + self.n3
    }
}

fn tie_groups<T: Scalar>(sorted: &[T]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        if j - i > 1 {
            out.push(j - i);
        }
        i = j;
    }
    out
}

fn tied_pairs(groups: &[usize]) -> i128 {
    groups.iter().map(|&t| (t * (t - 1) / 2) as i128).sum()
}

/// Sort `v` in place and return the number of inversions (strictly
/// greater elements preceding smaller ones).
fn merge_count<T: Scalar>(v: &mut [T], buf: &mut Vec<T>) -> i128 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut inv = merge_count(&mut v[..mid], buf) + merge_count(&mut v[mid..], buf);
    buf.clear();
    let (mut i, mut j) = (0, mid);
    while i < mid && j < n {
        if v[j] < v[i] {
            inv += (mid - i) as i128;
            buf.push(v[j]);
            j += 1;
        } else {
            buf.push(v[i]);
            i += 1;
        }
    }
    buf.extend_from_slice(&v[i..mid]);
    buf.extend_from_slice(&v[j..n]);
    v.copy_from_slice(buf);
    inv
}

/// O(n log n) concordance counting.
pub(crate) fn pair_counts<T: Scalar>(x: &[T], y: &[T]) -> PairCounts {
    let n = x.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| cmp(&x[a], &x[b]).then(cmp(&y[a], &y[b])));
    let xs: Vec<T> = order.iter().map(|&i| x[i]).collect();
    let mut ys: Vec<T> = order.iter().map(|&i| y[i]).collect();

    let x_ties = tie_groups(&xs);
    let mut n3 = 0i128;
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && xs[j] == xs[i] && ys[j] == ys[i] {
            j += 1;
        }
        n3 += ((j - i) * (j - i - 1) / 2) as i128;
        i = j;
    }

    let mut buf = Vec::with_capacity(n);
    let discordant = merge_count(&mut ys, &mut buf);
    let y_ties = tie_groups(&ys);
    PairCounts {
        n0: (n * (n - 1) / 2) as i128,
        n1: tied_pairs(&x_ties),
        n2: tied_pairs(&y_ties),
        n3,
        discordant,
        x_ties,
        y_ties,
    }
}

/// Variance of S under independence, tie-corrected.
fn s_variance(n: usize, x_ties: &[usize], y_ties: &[usize]) -> f64 {
    let n = n as f64;
    let term = |t: f64| t * (t - 1.0) * (2.0 * t + 5.0);
    let sum_by = |g: &[usize], f: &dyn Fn(f64) -> f64| g.iter().map(|&t| f(t as f64)).sum::<f64>();
    let v0 = term(n) - sum_by(x_ties, &term) - sum_by(y_ties, &term);
    let pair = |t: f64| t * (t - 1.0);
    let triple = |t: f64| t * (t - 1.0) * (t - 2.0);
    let v1 = sum_by(x_ties, &pair) * sum_by(y_ties, &pair) / (2.0 * n * (n - 1.0));
    let v2 = if n > 2.0 {
        sum_by(x_ties, &triple) * sum_by(y_ties, &triple) / (9.0 * n * (n - 1.0) * (n - 2.0))
    } else {
        0.0
    };
    v0 / 18.0 + v1 + v2
}

fn normal_two_sided(z: f64) -> f64 {
    libm::erfc(z.abs() / std::f64::consts::SQRT_2)
}

fn s_test_p(n: usize, c: &PairCounts) -> f64 {
    let var = s_variance(n, &c.x_ties, &c.y_ties);
    if var <= 0.0 {
        return 1.0;
    }
    normal_two_sided(c.s() as f64 / var.sqrt())
}

/// Two-sided permutation p-value: share of all orderings of `y` whose
/// statistic is at least as extreme as the observed one.
fn exact_p(x: &[f64], y: &[f64], stat: impl Fn(&[f64], &[f64]) -> f64) -> f64 {
    let observed = stat(x, y).abs();
    let tol = 1e-12 * observed.max(1.0);
    let mut perm = y.to_vec();
    let n = perm.len();
    let mut hits = 0u64;
    let mut total = 0u64;
    let mut count = |p: &[f64]| {
        total += 1;
        if stat(x, p).abs() >= observed - tol {
            hits += 1;
        }
    };
    // Heap's algorithm, iterative.
    count(&perm);
    let mut c = vec![0usize; n];
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            count(&perm);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    hits as f64 / total as f64
}

/// `(C − D, C + D)` by direct pair enumeration; used per permutation on
/// small samples, where it beats sorting.
fn direct_counts(x: &[f64], y: &[f64]) -> (i64, i64) {
    let (mut s, mut untied) = (0i64, 0i64);
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            let prod = (x[i] - x[j]) * (y[i] - y[j]);
            if prod != 0.0 {
                s += prod.signum() as i64;
                untied += 1;
            }
        }
    }
    (s, untied)
}

fn to_f64<T: Scalar>(v: &[T]) -> Vec<f64> {
    v.iter().map(|&a| a.as_f64()).collect()
}

fn tau_b(c: &PairCounts) -> Option<f64> {
    let denom = ((c.n0 - c.n1) as f64) * ((c.n0 - c.n2) as f64);
    (denom > 0.0).then(|| c.s() as f64 / denom.sqrt())
}

fn gamma(c: &PairCounts) -> Option<f64> {
    let untied = c.untied();
    (untied > 0).then(|| c.s() as f64 / untied as f64)
}

/// Kendall's τ-b.
pub fn kendall_tau<T: Scalar>(x: &[T], y: &[T]) -> Result<RankTestResult<T>> {
    check_pair(x, y)?;
    let counts = pair_counts(x, y);
    let tau = tau_b(&counts)
        .ok_or_else(|| Error::Degenerate("all pairs tied in one variable".into()))?;
    let n = x.len();
    if n < EXACT_BELOW {
        // the τ-b denominator is the same for every ordering of y
        let p = exact_p(&to_f64(x), &to_f64(y), |a, b| direct_counts(a, b).0 as f64);
        Ok(RankTestResult::new(tau, p, true))
    } else {
        Ok(RankTestResult::new(tau, s_test_p(n, &counts), false))
    }
}

/// Goodman–Kruskal γ = (C − D)/(C + D), tied pairs excluded.
pub fn goodman_kruskal_gamma<T: Scalar>(x: &[T], y: &[T]) -> Result<RankTestResult<T>> {
    check_pair(x, y)?;
    let counts = pair_counts(x, y);
    let g = gamma(&counts).ok_or_else(|| Error::Degenerate("no untied pairs".into()))?;
    let n = x.len();
    if n < EXACT_BELOW {
        let p = exact_p(&to_f64(x), &to_f64(y), |a, b| match direct_counts(a, b) {
            (_, 0) => 0.0,
            (s, untied) => s as f64 / untied as f64,
        });
        Ok(RankTestResult::new(g, p, true))
    } else {
        Ok(RankTestResult::new(g, s_test_p(n, &counts), false))
    }
}

/// 1-based ranks, ties sharing the average of the ranks they span.
pub fn mid_ranks<T: Scalar>(v: &[T]) -> Vec<T> {
    let n = v.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| cmp(&v[a], &v[b]));
    let mut ranks = vec![T::zero(); n];
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && v[order[j]] == v[order[i]] {
            j += 1;
        }
        let r = T::of((i + j + 1) as f64 / 2.0);
        for &k in &order[i..j] {
            ranks[k] = r;
        }
        i = j;
    }
    ranks
}

/// Spearman's ρ: Pearson of mid-ranks.
pub fn spearman<T: Scalar>(x: &[T], y: &[T]) -> Result<RankTestResult<T>> {
    check_pair(x, y)?;
    let (rx, ry) = (mid_ranks(x), mid_ranks(y));
    let rho = pearson(&rx, &ry)?.r.as_f64();
    let n = x.len();
    if n < EXACT_BELOW {
        let p = exact_p(&to_f64(&rx), &to_f64(&ry), |a, b| {
            pearson(a, b).map(|r| r.r).unwrap_or(0.0)
        });
        Ok(RankTestResult::new(rho, p, true))
    } else {
        let z = rho * ((n - 1) as f64).sqrt();
        Ok(RankTestResult::new(rho, normal_two_sided(z), false))
    }
}
