//! Robust estimators of location.
//!
//! None of these is monotone, but all are shift-invariant
//! (`E(x + a·1) = E(x) + a`) and therefore weakly monotone. The
//! window-based estimators (shorth, LMS, LTS) work on the sorted sample
//! and consider the contiguous windows `{x₍ₖ₎, …, x₍ₖ₊⌊n/2⌋₎}` holding
//! `h = ⌊n/2⌋ + 1` values.

use std::collections::HashMap;
use std::fmt;
use std::ops::RangeInclusive;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::domain::check_values;
use crate::error::{Error, Result};
use crate::penalty::{
    minimize_penalty_with_candidates, MinimizerConfig, PenaltyClass, PenaltySpec,
};

fn magnitude(s: &[f64]) -> f64 {
    s.iter().fold(0.0, |m, t| m.max(t.abs()))
}

fn sorted(x: &[f64]) -> Vec<f64> {
    let mut s = x.to_vec();
    s.sort_by(f64::total_cmp);
    s
}

/// Most frequent value, using exact equality. Ties go to the smallest
/// value.
pub fn mode(x: &[f64]) -> Result<f64> {
    check_values(x)?;
    let s = sorted(x);
    let (mut best, mut best_count) = (s[0], 0usize);
    let mut i = 0;
    while i < s.len() {
        let mut j = i + 1;
        while j < s.len() && s[j] == s[i] {
            j += 1;
        }
        if j - i > best_count {
            best = s[i];
            best_count = j - i;
        }
        i = j;
    }
    Ok(best)
}

/// Mode of continuous data: values are grouped into bins of width
/// `epsilon` (by `round(x / ε)`), the fullest bin wins with ties going to
/// the lowest bin, and the smallest original value in that bin is
/// returned.
pub fn mode_quantized(x: &[f64], epsilon: f64) -> Result<f64> {
    check_values(x)?;
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "mode quantum must be positive, got {epsilon}"
        )));
    }
    let mut bins: HashMap<i64, (usize, f64)> = HashMap::new();
    for &v in x {
        let key = (v / epsilon).round() as i64;
        let entry = bins.entry(key).or_insert((0, v));
        entry.0 += 1;
        entry.1 = entry.1.min(v);
    }
    let (_, &(_, value)) = bins
        .iter()
        .max_by(|(ka, (ca, _)), (kb, (cb, _))| ca.cmp(cb).then(kb.cmp(ka)))
        .expect("non-empty input");
    Ok(value)
}

/// One candidate half-sample: sorted positions `k-1 ..= k-1+half`
/// (`k` is 1-based).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowIndex {
    pub k: usize,
    pub half: usize,
    pub length: f64,
}

impl WindowIndex {
    /// 0-based positions of the window in the sorted sample.
    pub fn members(&self) -> RangeInclusive<usize> {
        self.k - 1..=self.k - 1 + self.half
    }
}

fn windows_of_sorted(s: &[f64]) -> Vec<WindowIndex> {
    let n = s.len();
    let half = n / 2;
    (1..=n.div_ceil(2))
        .map(|k| WindowIndex {
            k,
            half,
            length: (s[k - 1 + half] - s[k - 1]).abs(),
        })
        .collect()
}

/// All `⌊(n+1)/2⌋` candidate windows with their lengths.
pub fn candidate_windows(x: &[f64]) -> Result<Vec<WindowIndex>> {
    check_values(x)?;
    if x.len() < 2 {
        return Err(Error::TooFewValues {
            min: 2,
            got: x.len(),
        });
    }
    Ok(windows_of_sorted(&sorted(x)))
}

/// Sorted sample together with the shortest window (ties to smallest `k`).
pub fn shortest_window(x: &[f64]) -> Result<(Vec<f64>, WindowIndex)> {
    check_values(x)?;
    if x.len() < 2 {
        return Err(Error::TooFewValues {
            min: 2,
            got: x.len(),
        });
    }
    let s = sorted(x);
    // Lengths equal up to rounding count as ties, so the choice survives a
    // shift of the data.
    let tie = 4.0 * f64::EPSILON * magnitude(&s);
    let best = windows_of_sorted(&s)
        .into_iter()
        .reduce(|best, w| if w.length < best.length - tie { w } else { best })
        .expect("n >= 2 gives at least one window");
    Ok((s, best))
}

/// Arithmetic mean of the shortest half-sample.
pub fn shorth(x: &[f64]) -> Result<f64> {
    let (s, w) = shortest_window(x)?;
    let members = &s[w.members()];
    Ok(members.iter().sum::<f64>() / members.len() as f64)
}

/// Least median of squares: midpoint of the shortest half-sample.
pub fn lms(x: &[f64]) -> Result<f64> {
    let (s, w) = shortest_window(x)?;
    Ok(0.5 * (s[w.k - 1] + s[w.k - 1 + w.half]))
}

/// Least trimmed squares: the mean of the `h` consecutive sorted values
/// with the smallest sum of squared deviations from their own mean.
///
/// In one dimension the optimal `h`-subset is always contiguous in sorted
/// order, so scanning the windows is exact.
pub fn lts(x: &[f64]) -> Result<f64> {
    check_values(x)?;
    if x.len() < 2 {
        return Err(Error::TooFewValues {
            min: 2,
            got: x.len(),
        });
    }
    let s = sorted(x);
    let h = s.len() / 2 + 1;
    let tie = 4.0 * h as f64 * f64::EPSILON * magnitude(&s) * (s[s.len() - 1] - s[0]);
    let mut best = (f64::INFINITY, 0.0);
    for window in s.windows(h) {
        let mean = (window.iter().sum::<f64>() / h as f64).clamp(window[0], window[h - 1]);
        let sse: f64 = window.iter().map(|v| (v - mean) * (v - mean)).sum();
        if sse < best.0 - tie {
            best = (sse, mean);
        }
    }
    Ok(best.1)
}

/// Weights `Δ` of an OWA penalty, applied to the squared residuals sorted
/// in increasing order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OwaWeights(Vec<f64>);

impl OwaWeights {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidWeights("no OWA weights given".into()));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidWeights(
                "OWA weights must be finite and non-negative".into(),
            ));
        }
        if !weights.iter().any(|&w| w > 0.0) {
            return Err(Error::InvalidWeights("OWA weights sum to zero".into()));
        }
        Ok(Self(weights))
    }

    /// `Δ = 1`: least squares.
    pub fn least_squares(n: usize) -> Self {
        Self(vec![1.0; n])
    }

    /// `Δ = (0, …, 0, 1)`: Chebyshev (minimax) regression.
    pub fn chebyshev(n: usize) -> Self {
        let mut w = vec![0.0; n];
        w[n - 1] = 1.0;
        Self(w)
    }

    /// Weight on the median squared residual: least median of squares.
    pub fn lms(n: usize) -> Self {
        let mut w = vec![0.0; n];
        if n % 2 == 1 {
            w[n / 2] = 1.0;
        } else {
            w[n / 2 - 1] = 0.5;
            w[n / 2] = 0.5;
        }
        Self(w)
    }

    /// Unit weight on the `⌊n/2⌋ + 1` smallest squared residuals: least
    /// trimmed squares.
    pub fn lts(n: usize) -> Self {
        let h = n / 2 + 1;
        Self((0..n).map(|i| if i < h { 1.0 } else { 0.0 }).collect())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `P(x, y) = Σᵢ Δᵢ S₍ᵢ₎((x − y·1)²)` with `S₍ᵢ₎` the i-th smallest.
pub fn owa_penalty(delta: &OwaWeights) -> PenaltySpec {
    let w = delta.0.clone();
    PenaltySpec::from_whole("owa", PenaltyClass::LowerSemicontinuous, 0.0, move |x, y| {
        let mut stack = [0.0f64; 16];
        let mut heap = Vec::new();
        let r: &mut [f64] = if x.len() <= stack.len() {
            &mut stack[..x.len()]
        } else {
            heap.resize(x.len(), 0.0);
            &mut heap
        };
        for (ri, &xi) in r.iter_mut().zip(x) {
            *ri = (xi - y) * (xi - y);
        }
        r.sort_unstable_by(f64::total_cmp);
        r.iter().zip(&w).map(|(a, b)| a * b).sum()
    })
}

/// Minimiser configuration used by [`owa_penalty_estimator`].
pub fn owa_minimizer_config() -> MinimizerConfig {
    MinimizerConfig::default().with_grid_points(4001)
}

/// Regression operator defined by an OWA penalty (leftmost minimiser).
///
/// The penalty is piecewise quadratic with breakpoints where the order of
/// the residuals changes, i.e. at the data points and at midpoints of
/// pairs; all of these are injected as candidates.
pub fn owa_penalty_estimator(x: &[f64], delta: &OwaWeights) -> Result<f64> {
    check_values(x)?;
    if delta.len() != x.len() {
        return Err(Error::LengthMismatch {
            expected: x.len(),
            got: delta.len(),
        });
    }
    let mut midpoints = Vec::with_capacity(x.len() * (x.len() - 1) / 2);
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            midpoints.push(0.5 * (x[i] + x[j]));
        }
    }
    minimize_penalty_with_candidates(&owa_penalty(delta), x, &owa_minimizer_config(), &midpoints)
}

/// Kernel applied to each point's mean squared distance to the sample.
#[derive(Clone)]
pub struct DensityKernel {
    name: String,
    kernel: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl fmt::Debug for DensityKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DensityKernel({})", self.name)
    }
}

impl Default for DensityKernel {
    fn default() -> Self {
        Self::cauchy()
    }
}

impl DensityKernel {
    /// `K(t) = 1 / (1 + t)`.
    pub fn cauchy() -> Self {
        Self::new("cauchy", |t| 1.0 / (1.0 + t))
    }

    /// The kernel should be positive and non-increasing on `[0, ∞)`.
    pub fn new(name: impl Into<String>, kernel: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            kernel: Arc::new(kernel),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.kernel)(t)
    }
}

/// Density-based mean: `Σ wᵢ xᵢ` with `wᵢ ∝ K((1/n) Σⱼ (xᵢ − xⱼ)²)`.
pub fn density_mean(x: &[f64], kernel: &DensityKernel) -> Result<f64> {
    check_values(x)?;
    let n = x.len() as f64;
    let (mut num, mut den) = (0.0, 0.0);
    for &xi in x {
        let msd = x.iter().map(|&xj| (xi - xj) * (xi - xj)).sum::<f64>() / n;
        let u = kernel.eval(msd);
        if !(u > 0.0) || !u.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "density kernel returned {u} at {msd}"
            )));
        }
        num += u * xi;
        den += u;
    }
    Ok(num / den)
}
