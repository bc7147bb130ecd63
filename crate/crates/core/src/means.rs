//! Closed-form mean families.
//!
//! Every function validates its input (non-empty, finite) and returns a
//! [`Result`]. Weight vectors are normalised internally. The power-type
//! families (power, Gini, Lehmer) are restricted to `[0, ∞)^n`; zero
//! components are resolved by explicit limit rules rather than by evaluating
//! `0^q`.

use serde::{Deserialize, Serialize};

use crate::domain::{check_nonnegative, check_values, ScalarFunction, WeightVector};
use crate::error::{Error, Result};

pub fn arithmetic_mean(x: &[f64]) -> Result<f64> {
    check_values(x)?;
    Ok(x.iter().sum::<f64>() / x.len() as f64)
}

fn max_of(x: &[f64]) -> f64 {
    x.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

fn min_of(x: &[f64]) -> f64 {
    x.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Weighted power mean `(Σ wᵢ xᵢᵖ / Σ wᵢ)^{1/p}`.
///
/// `p = 0` is the weighted geometric mean and `p = ±∞` the max/min over the
/// components carrying positive weight. For `p ≤ 0` a zero component with
/// positive weight forces the result to 0.
pub fn power_mean(x: &[f64], w: &WeightVector, p: f64) -> Result<f64> {
    check_nonnegative(x)?;
    w.check_len(x.len())?;
    if p.is_nan() {
        return Err(Error::InvalidConfig("exponent p is NaN".into()));
    }
    let active = || {
        x.iter()
            .zip(w.as_slice())
            .filter(|(_, &wi)| wi > 0.0)
            .map(|(&xi, &wi)| (xi, wi))
    };
    if p == f64::INFINITY {
        return Ok(active().map(|(v, _)| v).fold(f64::NEG_INFINITY, f64::max));
    }
    if p == f64::NEG_INFINITY {
        return Ok(active().map(|(v, _)| v).fold(f64::INFINITY, f64::min));
    }
    let scale = active().map(|(v, _)| v).fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(0.0);
    }
    if p <= 0.0 && active().any(|(v, _)| v == 0.0) {
        return Ok(0.0);
    }
    let total = w.total();
    if p == 0.0 {
        let log_mean = active().map(|(v, wi)| wi * (v / scale).ln()).sum::<f64>() / total;
        return Ok(scale * log_mean.exp());
    }
    let s = active().map(|(v, wi)| wi * (v / scale).powf(p)).sum::<f64>() / total;
    Ok(scale * s.powf(1.0 / p))
}

/// Weighted quasi-arithmetic mean `g⁻¹(Σ wᵢ g(xᵢ) / Σ wᵢ)`.
pub fn quasi_arithmetic_mean(x: &[f64], w: &WeightVector, g: &ScalarFunction) -> Result<f64> {
    check_values(x)?;
    w.check_len(x.len())?;
    g.require_invertible()?;
    let s = x
        .iter()
        .zip(w.as_slice())
        .map(|(&v, &wi)| wi * g.eval(v))
        .sum::<f64>()
        / w.total();
    g.inverse(s)
}

/// Ordered weighted average: `Σ wᵢ x₍ᵢ₎` with `x` sorted non-increasingly,
/// so `w = (1, 0, …, 0)` selects the maximum.
pub fn owa(x: &[f64], w: &WeightVector) -> Result<f64> {
    check_values(x)?;
    w.check_len(x.len())?;
    let mut sorted = x.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    Ok(sorted
        .iter()
        .zip(w.normalized())
        .map(|(v, wi)| v * wi)
        .sum())
}

/// The `k`-th smallest value, `1 ≤ k ≤ n`.
pub fn order_statistic(x: &[f64], k: usize) -> Result<f64> {
    check_values(x)?;
    if k == 0 || k > x.len() {
        return Err(Error::IndexOutOfRange { k, n: x.len() });
    }
    let mut sorted = x.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(sorted[k - 1])
}

/// How the median of an even number of values is resolved.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum MedianConvention {
    /// Midpoint of the two central order statistics.
    #[default]
    Midpoint,
    Lower,
    Upper,
}

pub fn median(x: &[f64]) -> Result<f64> {
    median_with(x, MedianConvention::Midpoint)
}

pub fn median_with(x: &[f64], convention: MedianConvention) -> Result<f64> {
    check_values(x)?;
    let mut sorted = x.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    if n % 2 == 1 {
        return Ok(sorted[n / 2]);
    }
    let (lower, upper) = (sorted[n / 2 - 1], sorted[n / 2]);
    Ok(match convention {
        MedianConvention::Midpoint => 0.5 * (lower + upper),
        MedianConvention::Lower => lower,
        MedianConvention::Upper => upper,
    })
}

fn weighted_ratio(x: &[f64], weights: impl Iterator<Item = f64>) -> Result<(f64, f64)> {
    let mut num = 0.0;
    let mut den = 0.0;
    for (i, (&v, wi)) in x.iter().zip(weights).enumerate() {
        if !(wi >= 0.0) {
            return Err(Error::InvalidWeights(format!(
                "weight function returned {wi} at position {i}"
            )));
        }
        num += wi * v;
        den += wi;
    }
    if den <= 0.0 {
        return Err(Error::ZeroTotalWeight);
    }
    Ok((num, den))
}

/// Bajraktarević mean `g⁻¹(Σ wᵢ(xᵢ) g(xᵢ) / Σ wᵢ(xᵢ))`, one weight function
/// per coordinate.
pub fn bajraktarevic_mean(
    x: &[f64],
    weight_fns: &[ScalarFunction],
    g: &ScalarFunction,
) -> Result<f64> {
    check_values(x)?;
    if weight_fns.len() != x.len() {
        return Err(Error::LengthMismatch {
            expected: x.len(),
            got: weight_fns.len(),
        });
    }
    g.require_invertible()?;
    let gx: Vec<f64> = x.iter().map(|&v| g.eval(v)).collect();
    let (num, den) = weighted_ratio(&gx, x.iter().zip(weight_fns).map(|(&v, w)| w.eval(v)))?;
    g.inverse(num / den)
}

/// Mixture function `Σ w(xᵢ) xᵢ / Σ w(xᵢ)`.
pub fn mixture_mean(x: &[f64], w: &ScalarFunction) -> Result<f64> {
    check_values(x)?;
    let (num, den) = weighted_ratio(x, x.iter().map(|&v| w.eval(v)))?;
    Ok(num / den)
}

/// Generalised mixture: coordinate `i` is weighted by `wᵢ(xᵢ)`.
pub fn generalized_mixture_mean(x: &[f64], weight_fns: &[ScalarFunction]) -> Result<f64> {
    check_values(x)?;
    if weight_fns.len() != x.len() {
        return Err(Error::LengthMismatch {
            expected: x.len(),
            got: weight_fns.len(),
        });
    }
    let (num, den) = weighted_ratio(x, x.iter().zip(weight_fns).map(|(&v, w)| w.eval(v)))?;
    Ok(num / den)
}

/// `t^e` extended to `t = 0` by its one-sided limit.
fn pow_limit(t: f64, e: f64) -> f64 {
    if t > 0.0 {
        t.powf(e)
    } else if e > 0.0 {
        0.0
    } else if e == 0.0 {
        1.0
    } else {
        f64::INFINITY
    }
}

/// Weighted Gini mean `(Σ wᵢ xᵢ^{p+q} / Σ wᵢ xᵢ^q)^{1/p}`, or for `p = 0`
/// `exp(Σ wᵢ xᵢ^q ln xᵢ / Σ wᵢ xᵢ^q)`.
///
/// Zero components take the limit `xᵢ → 0⁺`: they drop out when `q > 0`
/// (and `p + q > 0`), and any limit that diverges resolves to 0, which
/// makes 0 absorbing for `q < 0`. The all-zero input maps to 0.
pub fn gini_mean(x: &[f64], w: &WeightVector, p: f64, q: f64) -> Result<f64> {
    check_nonnegative(x)?;
    w.check_len(x.len())?;
    if !p.is_finite() || !q.is_finite() {
        return Err(Error::InvalidConfig("Gini exponents must be finite".into()));
    }
    let active: Vec<(f64, f64)> = x
        .iter()
        .zip(w.as_slice())
        .filter(|(_, &wi)| wi > 0.0)
        .map(|(&v, &wi)| (v, wi))
        .collect();
    let scale = active.iter().map(|&(v, _)| v).fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(0.0);
    }
    let has_zero = active.iter().any(|&(v, _)| v == 0.0);

    if p == 0.0 {
        if has_zero && q <= 0.0 {
            return Ok(0.0);
        }
        let (mut num, mut den) = (0.0, 0.0);
        for &(v, wi) in &active {
            if v == 0.0 {
                continue;
            }
            let t = v / scale;
            let tq = t.powf(q);
            num += wi * tq * t.ln();
            den += wi * tq;
        }
        return Ok(scale * (num / den).exp());
    }

    let (mut num, mut den) = (0.0, 0.0);
    for &(v, wi) in &active {
        let t = v / scale;
        num += wi * pow_limit(t, p + q);
        den += wi * pow_limit(t, q);
    }
    if num.is_infinite() || den.is_infinite() || den == 0.0 {
        return Ok(0.0);
    }
    Ok(scale * (num / den).powf(1.0 / p))
}

/// Parameter of the Lehmer family. Any real `q` is admitted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LehmerParams {
    pub q: f64,
}

impl LehmerParams {
    pub fn new(q: f64) -> Self {
        Self { q }
    }
}

/// Lehmer mean `Σ xᵢ^{q+1} / Σ xᵢ^q` on `[0, ∞)^n`.
///
/// Zero components: dropped for `q > 0` (0 is neutral), absorbing for
/// `q < 0`; `q = 0` is the arithmetic mean and the all-zero vector maps to 0.
/// `q = 1` is the contra-harmonic mean.
pub fn lehmer_mean(x: &[f64], params: LehmerParams) -> Result<f64> {
    check_nonnegative(x)?;
    let q = params.q;
    if q.is_nan() {
        return Err(Error::InvalidConfig("Lehmer parameter q is NaN".into()));
    }
    let scale = max_of(x);
    if scale == 0.0 {
        return Ok(0.0);
    }
    if q == 0.0 {
        return arithmetic_mean(x);
    }
    if q < 0.0 && x.contains(&0.0) {
        return Ok(0.0);
    }
    // Homogeneity lets us evaluate on x / max(x) and avoid overflow for large |q|.
    let (mut num, mut den) = (0.0, 0.0);
    for &v in x {
        if v == 0.0 {
            continue;
        }
        let t = v / scale;
        let tq = t.powf(q);
        num += tq * t;
        den += tq;
    }
    Ok(scale * num / den)
}

/// Largest arity `n` for which the Lehmer mean `L_q` is guaranteed weakly
/// monotone: `1 + ((q+1)/(q−1))^{q−1}`.
///
/// The value is 2 at `q = 1` (contra-harmonic mean), increases towards
/// `1 + e²` as `q → ∞` and decreases towards the same limit as `q → −∞`.
/// For `q ∈ [−1, 0]` the Lehmer mean is monotone, so the bound is `+∞`.
/// `q ∈ (0, 1)` is rejected: those means are not weakly monotone.
pub fn lehmer_max_args(q: f64) -> Result<f64> {
    if q.is_nan() {
        return Err(Error::InvalidConfig("Lehmer parameter q is NaN".into()));
    }
    if q > 0.0 && q < 1.0 {
        return Err(Error::LehmerBoundExcluded { q });
    }
    if q == 1.0 {
        return Ok(2.0);
    }
    if (-1.0..=0.0).contains(&q) {
        return Ok(f64::INFINITY);
    }
    if q.is_infinite() {
        return Ok(1.0 + std::f64::consts::E.powi(2));
    }
    // (q+1)/(q-1) = 1 + 2/(q-1)
    Ok(1.0 + ((q - 1.0) * (2.0 / (q - 1.0)).ln_1p()).exp())
}

/// Maximum of the inputs; exposed for the estimator registry and filters.
pub fn maximum(x: &[f64]) -> Result<f64> {
    check_values(x)?;
    Ok(max_of(x))
}

pub fn minimum(x: &[f64]) -> Result<f64> {
    check_values(x)?;
    Ok(min_of(x))
}

/// `(min + max) / 2`.
pub fn midrange(x: &[f64]) -> Result<f64> {
    check_values(x)?;
    Ok(0.5 * (min_of(x) + max_of(x)))
}
