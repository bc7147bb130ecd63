//! Value types shared by every module: intervals, validated input vectors,
//! weight vectors and scalar generator functions.

use std::fmt;
use std::ops::Deref;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A closed, non-empty interval `[lo, hi]` with finite endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() || lo > hi {
            return Err(Error::InvalidInterval { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    /// The unit interval `[0, 1]`.
    pub const fn unit() -> Self {
        Self { lo: 0.0, hi: 1.0 }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.lo && t <= self.hi
    }

    /// Checks that every value lies inside the interval.
    pub fn check(&self, values: &[f64]) -> Result<()> {
        for (index, &value) in values.iter().enumerate() {
            if !self.contains(value) {
                return Err(Error::OutOfDomain {
                    index,
                    value,
                    lo: self.lo,
                    hi: self.hi,
                });
            }
        }
        Ok(())
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Rejects empty inputs and non-finite components.
pub(crate) fn check_values(x: &[f64]) -> Result<()> {
    if x.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(index) = x.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { index });
    }
    Ok(())
}

pub(crate) fn check_nonnegative(x: &[f64]) -> Result<()> {
    check_values(x)?;
    if let Some(index) = x.iter().position(|&v| v < 0.0) {
        return Err(Error::NegativeInput {
            index,
            value: x[index],
        });
    }
    Ok(())
}

/// A non-empty list of finite reals, each inside a declared interval.
///
/// Dereferences to `[f64]`, so it can be passed anywhere a slice is accepted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputVector {
    values: Vec<f64>,
    domain: Interval,
}

impl InputVector {
    pub fn new(values: Vec<f64>, domain: Interval) -> Result<Self> {
        check_values(&values)?;
        domain.check(&values)?;
        Ok(Self { values, domain })
    }

    /// Wraps `values` with the tightest interval containing them.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        check_values(&values)?;
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(Self {
            values,
            domain: Interval::new(lo, hi)?,
        })
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Returns `x + a·1`, checked against the same domain.
    pub fn shifted(&self, a: f64) -> Result<Self> {
        Self::new(self.values.iter().map(|v| v + a).collect(), self.domain)
    }
}

impl Deref for InputVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.values
    }
}

/// Non-negative weights with a positive total. Normalisation happens at the
/// point of use, so callers may pass unnormalised weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightVector {
    weights: Vec<f64>,
}

impl WeightVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidWeights("no weights given".into()));
        }
        if let Some(i) = weights.iter().position(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidWeights(format!(
                "weight {} at position {i} is negative or non-finite",
                weights[i]
            )));
        }
        if !weights.iter().any(|&w| w > 0.0) {
            return Err(Error::InvalidWeights("all weights are zero".into()));
        }
        Ok(Self { weights })
    }

    pub fn uniform(n: usize) -> Self {
        assert!(n > 0, "uniform weights need n >= 1");
        Self {
            weights: vec![1.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }

    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn normalized(&self) -> Vec<f64> {
        let total = self.total();
        self.weights.iter().map(|w| w / total).collect()
    }

    pub(crate) fn check_len(&self, n: usize) -> Result<()> {
        if self.weights.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: self.weights.len(),
            });
        }
        Ok(())
    }
}

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A real function used as a generator (`g` of a quasi-arithmetic or
/// Bajraktarević mean) or as a weight function (`w` of a mixture).
#[derive(Clone)]
pub struct ScalarFunction {
    name: String,
    eval: RealFn,
    inverse: Option<RealFn>,
    derivative: Option<RealFn>,
    strictly_monotone: bool,
}

impl fmt::Debug for ScalarFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarFunction")
            .field("name", &self.name)
            .field("inverse", &self.inverse.is_some())
            .field("derivative", &self.derivative.is_some())
            .field("strictly_monotone", &self.strictly_monotone)
            .finish()
    }
}

impl ScalarFunction {
    pub fn new(name: impl Into<String>, eval: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            eval: Arc::new(eval),
            inverse: None,
            derivative: None,
            strictly_monotone: false,
        }
    }

    /// Attaches an inverse and marks the function strictly monotone.
    pub fn with_inverse(mut self, inverse: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.inverse = Some(Arc::new(inverse));
        self.strictly_monotone = true;
        self
    }

    pub fn with_derivative(
        mut self,
        derivative: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.derivative = Some(Arc::new(derivative));
        self
    }

    pub fn with_monotone(mut self, strictly_monotone: bool) -> Self {
        self.strictly_monotone = strictly_monotone;
        self
    }

    pub fn identity() -> Self {
        Self::new("t", |t| t).with_inverse(|t| t).with_derivative(|_| 1.0)
    }

    pub fn constant(c: f64) -> Self {
        Self::new(format!("{c}"), move |_| c).with_derivative(|_| 0.0)
    }

    /// `t ↦ t^k` on `[0, ∞)`. Invertible for `k ≠ 0`.
    pub fn power(k: f64) -> Self {
        let f = Self::new(format!("t^{k}"), move |t: f64| t.powf(k))
            .with_derivative(move |t: f64| if k == 0.0 { 0.0 } else { k * t.powf(k - 1.0) });
        if k == 0.0 {
            f
        } else {
            f.with_inverse(move |s: f64| s.powf(1.0 / k))
        }
    }

    /// Natural logarithm with `exp` as inverse.
    pub fn ln() -> Self {
        Self::new("ln(t)", f64::ln)
            .with_inverse(f64::exp)
            .with_derivative(|t| 1.0 / t)
    }

    /// `t ↦ e^{k t}`.
    pub fn exp(k: f64) -> Self {
        let f = Self::new(format!("exp({k}t)"), move |t: f64| (k * t).exp())
            .with_derivative(move |t: f64| k * (k * t).exp());
        if k == 0.0 {
            f
        } else {
            f.with_inverse(move |s: f64| s.ln() / k)
        }
    }

    /// `t ↦ αt + β`.
    pub fn affine(alpha: f64, beta: f64) -> Self {
        let f = Self::new(format!("{alpha}t+{beta}"), move |t| alpha * t + beta)
            .with_derivative(move |_| alpha);
        if alpha == 0.0 {
            f
        } else {
            f.with_inverse(move |s| (s - beta) / alpha)
        }
    }

    pub fn sqrt() -> Self {
        Self::new("sqrt(t)", f64::sqrt)
            .with_inverse(|s| s * s)
            .with_derivative(|t| 0.5 / t.sqrt())
    }

    /// `t ↦ f(1 − t)`, the generator of a dual mixture.
    pub fn reflected(&self) -> Self {
        let inner = self.eval.clone();
        let mut out = Self::new(format!("{}(1-t)", self.name), move |t| inner(1.0 - t));
        if let Some(d) = self.derivative.clone() {
            out = out.with_derivative(move |t| -d(1.0 - t));
        }
        out
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        (self.eval)(t)
    }

    pub fn has_inverse(&self) -> bool {
        self.inverse.is_some()
    }

    pub fn is_strictly_monotone(&self) -> bool {
        self.strictly_monotone
    }

    pub fn inverse(&self, s: f64) -> Result<f64> {
        self.inverse
            .as_ref()
            .map(|inv| inv(s))
            .ok_or(Error::MissingInverse)
    }

    /// Analytic derivative when attached, otherwise a central difference
    /// (one-sided at the ends of `within`).
    pub fn derivative(&self, t: f64, within: Interval) -> f64 {
        if let Some(d) = &self.derivative {
            return d(t);
        }
        let h = 1e-6 * within.width().max(1.0);
        let lo = (t - h).max(within.lo());
        let hi = (t + h).min(within.hi());
        if hi <= lo {
            return 0.0;
        }
        (self.eval(hi) - self.eval(lo)) / (hi - lo)
    }

    /// Requires an inverse and a strict-monotonicity declaration.
    pub(crate) fn require_invertible(&self) -> Result<()> {
        if self.inverse.is_none() {
            return Err(Error::MissingInverse);
        }
        if !self.strictly_monotone {
            return Err(Error::NotMonotone);
        }
        Ok(())
    }

    /// Checks `inverse(eval(t)) = t` to within `1e-9` (relative to `|t|`)
    /// at `samples` evenly spaced points of `within`.
    pub fn check_round_trip(&self, within: Interval, samples: usize) -> Result<()> {
        let inv = self.inverse.as_ref().ok_or(Error::MissingInverse)?;
        let samples = samples.max(2);
        for i in 0..samples {
            let t = within.lo() + within.width() * i as f64 / (samples - 1) as f64;
            let back = inv(self.eval(t));
            if !((back - t).abs() <= 1e-9 * t.abs().max(1.0)) {
                return Err(Error::NonInvertible { t, got: back });
            }
        }
        Ok(())
    }
}

impl FromStr for ScalarFunction {
    type Err = Error;

    /// Parses the compact generator syntax used on the command line:
    /// `t`/`id`, a bare number (constant), `t^k`/`pow:k`, `exp`/`exp:k`,
    /// `ln`/`log` and `sqrt`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidConfig(format!("unrecognised function '{s}'"));
        if let Ok(c) = s.parse::<f64>() {
            return Ok(Self::constant(c));
        }
        let num = |v: &str| v.trim().parse::<f64>().map_err(|_| bad());
        match s {
            "t" | "id" | "identity" => return Ok(Self::identity()),
            "ln" | "log" => return Ok(Self::ln()),
            "exp" => return Ok(Self::exp(1.0)),
            "sqrt" => return Ok(Self::sqrt()),
            _ => {}
        }
        if let Some(k) = s.strip_prefix("t^").or_else(|| s.strip_prefix("pow:")) {
            return Ok(Self::power(num(k)?));
        }
        if let Some(c) = s.strip_prefix("const:") {
            return Ok(Self::constant(num(c)?));
        }
        if let Some(k) = s.strip_prefix("exp:") {
            return Ok(Self::exp(num(k)?));
        }
        Err(bad())
    }
}
