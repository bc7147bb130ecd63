//! Named registry of every mean and estimator in the crate, used by the
//! command-line tool and by tests that sweep over all of them.
//!
//! ```
//! use weakmean::catalog::{Mean, MeanParams};
//!
//! let params = MeanParams { q: Some(1.0), ..Default::default() };
//! let lehmer = Mean::from_name("lehmer", &params).unwrap();
//! assert!((lehmer.eval(&[1.0, 0.5]).unwrap() - 5.0 / 6.0).abs() < 1e-15);
//! ```

use std::fmt;
use std::str::FromStr;

use crate::domain::{Interval, ScalarFunction, WeightVector};
use crate::error::{Error, Result};
use crate::means::{self, LehmerParams};
use crate::robust::{self, DensityKernel, OwaWeights};
use crate::transforms::internal_switch;
use crate::verify::{AggregatorHandle, Arity, Declared};

/// Weight vector choice for the OWA penalty estimator.
#[derive(Debug, Clone, PartialEq)]
pub enum OwaCase {
    /// `Δ = 1`
    LeastSquares,
    /// `Δ = (0, …, 0, 1)`
    Chebyshev,
    /// Weight on the middle squared residual(s).
    Lms,
    /// Unit weight on the `⌊n/2⌋ + 1` smallest squared residuals.
    Lts,
    Custom(Vec<f64>),
}

impl OwaCase {
    pub fn weights(&self, n: usize) -> Result<OwaWeights> {
        match self {
            OwaCase::LeastSquares => Ok(OwaWeights::least_squares(n)),
            OwaCase::Chebyshev => Ok(OwaWeights::chebyshev(n)),
            OwaCase::Lms => Ok(OwaWeights::lms(n)),
            OwaCase::Lts => Ok(OwaWeights::lts(n)),
            OwaCase::Custom(w) => {
                if w.len() != n {
                    return Err(Error::LengthMismatch { expected: n, got: w.len() });
                }
                OwaWeights::new(w.clone())
            }
        }
    }
}

impl FromStr for OwaCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "ls" | "least-squares" | "ones" => OwaCase::LeastSquares,
            "chebyshev" | "minimax" => OwaCase::Chebyshev,
            "lms" | "median" => OwaCase::Lms,
            "lts" | "trimmed" => OwaCase::Lts,
            list => OwaCase::Custom(parse_list(list)?),
        })
    }
}

impl fmt::Display for OwaCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OwaCase::LeastSquares => f.write_str("ls"),
            OwaCase::Chebyshev => f.write_str("chebyshev"),
            OwaCase::Lms => f.write_str("lms"),
            OwaCase::Lts => f.write_str("lts"),
            OwaCase::Custom(w) => f.write_str(&join(w)),
        }
    }
}

/// Comma-separated numbers.
pub fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidConfig(format!("'{t}' is not a number")))
        })
        .collect()
}

fn join(v: &[f64]) -> String {
    v.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(",")
}

/// Parameters a mean may need. Unused fields are ignored.
#[derive(Debug, Clone, Default)]
pub struct MeanParams {
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub k: Option<usize>,
    pub weights: Option<Vec<f64>>,
    /// Generator of quasi-arithmetic and Bajraktarević means.
    pub g: Option<ScalarFunction>,
    /// Weight function of mixture and Bajraktarević means.
    pub w: Option<ScalarFunction>,
    /// Quantisation step for the mode.
    pub epsilon: Option<f64>,
    pub delta: Option<OwaCase>,
}

#[derive(Debug, Clone)]
pub enum Mean {
    Arithmetic,
    Power { p: f64, weights: Option<Vec<f64>> },
    QuasiArithmetic { g: ScalarFunction, weights: Option<Vec<f64>> },
    Owa { weights: Vec<f64> },
    OrderStatistic { k: usize },
    Median,
    Lehmer { q: f64 },
    Gini { p: f64, q: f64, weights: Option<Vec<f64>> },
    Mixture { w: ScalarFunction },
    Bajraktarevic { w: ScalarFunction, g: ScalarFunction },
    Maximum,
    Minimum,
    Midrange,
    Mode { epsilon: Option<f64> },
    Shorth,
    Lms,
    Lts,
    OwaPenalty { delta: OwaCase },
    Density,
    InternalSwitch,
}

/// Names accepted by [`Mean::from_name`], with the parameters they use.
pub const NAMES: &[(&str, &str)] = &[
    ("mean", "arithmetic mean"),
    ("power", "weighted power mean; p, optional weights"),
    ("geometric", "power mean with p = 0"),
    ("harmonic", "power mean with p = -1"),
    ("quasi-arithmetic", "generator g, optional weights"),
    ("owa", "ordered weighted average; weights"),
    ("order-statistic", "k-th smallest; k"),
    ("median", "median (midpoint for even n)"),
    ("lehmer", "Lehmer mean; q"),
    ("contraharmonic", "Lehmer mean with q = 1"),
    ("gini", "Gini mean; p, q, optional weights"),
    ("mixture", "mixture function; weight function w"),
    ("bajraktarevic", "weight function w, generator g"),
    ("max", "maximum"),
    ("min", "minimum"),
    ("midrange", "(min + max) / 2"),
    ("mode", "most frequent value; optional epsilon"),
    ("shorth", "mean of the shortest half"),
    ("lms", "least median of squares"),
    ("lts", "least trimmed squares"),
    ("owa-penalty", "OWA penalty estimator; delta"),
    ("density", "density-based mean, Cauchy kernel"),
    ("internal-switch", "min if x1 + x2 >= 1, else max (2 arguments)"),
];

fn need<T: Clone>(v: &Option<T>, what: &str, mean: &str) -> Result<T> {
    v.clone()
        .ok_or_else(|| Error::InvalidConfig(format!("{mean} needs parameter {what}")))
}

impl Mean {
    pub fn from_name(name: &str, params: &MeanParams) -> Result<Mean> {
        let weights = params.weights.clone();
        Ok(match name {
            "mean" | "arithmetic" => Mean::Arithmetic,
            "power" => Mean::Power { p: need(&params.p, "p", name)?, weights },
            "geometric" => Mean::Power { p: 0.0, weights },
            "harmonic" => Mean::Power { p: -1.0, weights },
            "quasi-arithmetic" => Mean::QuasiArithmetic { g: need(&params.g, "g", name)?, weights },
            "owa" => Mean::Owa { weights: need(&weights, "weights", name)? },
            "order-statistic" => Mean::OrderStatistic { k: need(&params.k, "k", name)? },
            "median" => Mean::Median,
            "lehmer" => Mean::Lehmer { q: need(&params.q, "q", name)? },
            "contraharmonic" => Mean::Lehmer { q: 1.0 },
            "gini" => Mean::Gini {
                p: need(&params.p, "p", name)?,
                q: need(&params.q, "q", name)?,
                weights,
            },
            "mixture" => Mean::Mixture { w: need(&params.w, "w", name)? },
            "bajraktarevic" => Mean::Bajraktarevic {
                w: need(&params.w, "w", name)?,
                g: need(&params.g, "g", name)?,
            },
            "max" | "maximum" => Mean::Maximum,
            "min" | "minimum" => Mean::Minimum,
            "midrange" => Mean::Midrange,
            "mode" => Mean::Mode { epsilon: params.epsilon },
            "shorth" => Mean::Shorth,
            "lms" => Mean::Lms,
            "lts" => Mean::Lts,
            "owa-penalty" => Mean::OwaPenalty { delta: need(&params.delta, "delta", name)? },
            "density" | "density-mean" => Mean::Density,
            "internal-switch" => Mean::InternalSwitch,
            other => {
                return Err(Error::InvalidConfig(format!(
                    "unknown mean '{other}'; known: {}",
                    NAMES.iter().map(|(n, _)| *n).collect::<Vec<_>>().join(", ")
                )))
            }
        })
    }

    /// Name with its parameters, e.g. `lehmer(q=1)`.
    pub fn label(&self) -> String {
        let w = |w: &Option<Vec<f64>>| match w {
            Some(w) => format!(",w={}", join(w)),
            None => String::new(),
        };
        match self {
            Mean::Arithmetic => "mean".into(),
            Mean::Power { p, weights } => format!("power(p={p}{})", w(weights)),
            Mean::QuasiArithmetic { g, weights } => {
                format!("quasi-arithmetic(g={}{})", g.name(), w(weights))
            }
            Mean::Owa { weights } => format!("owa(w={})", join(weights)),
            Mean::OrderStatistic { k } => format!("order-statistic(k={k})"),
            Mean::Median => "median".into(),
            Mean::Lehmer { q } => format!("lehmer(q={q})"),
            Mean::Gini { p, q, weights } => format!("gini(p={p},q={q}{})", w(weights)),
            Mean::Mixture { w } => format!("mixture(w={})", w.name()),
            Mean::Bajraktarevic { w, g } => format!("bajraktarevic(w={},g={})", w.name(), g.name()),
            Mean::Maximum => "max".into(),
            Mean::Minimum => "min".into(),
            Mean::Midrange => "midrange".into(),
            Mean::Mode { epsilon: None } => "mode".into(),
            Mean::Mode { epsilon: Some(e) } => format!("mode(epsilon={e})"),
            Mean::Shorth => "shorth".into(),
            Mean::Lms => "lms".into(),
            Mean::Lts => "lts".into(),
            Mean::OwaPenalty { delta } => format!("owa-penalty(delta={delta})"),
            Mean::Density => "density".into(),
            Mean::InternalSwitch => "internal-switch".into(),
        }
    }

    fn weight_vector(weights: &Option<Vec<f64>>, n: usize) -> Result<WeightVector> {
        match weights {
            Some(w) => WeightVector::new(w.clone()),
            None => Ok(WeightVector::uniform(n)),
        }
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.is_empty() {
            return Err(Error::EmptyInput);
        }
        let n = x.len();
        match self {
            Mean::Arithmetic => means::arithmetic_mean(x),
            Mean::Power { p, weights } => means::power_mean(x, &Self::weight_vector(weights, n)?, *p),
            Mean::QuasiArithmetic { g, weights } => {
                means::quasi_arithmetic_mean(x, &Self::weight_vector(weights, n)?, g)
            }
            Mean::Owa { weights } => means::owa(x, &WeightVector::new(weights.clone())?),
            Mean::OrderStatistic { k } => means::order_statistic(x, *k),
            Mean::Median => means::median(x),
            Mean::Lehmer { q } => means::lehmer_mean(x, LehmerParams::new(*q)),
            Mean::Gini { p, q, weights } => {
                means::gini_mean(x, &Self::weight_vector(weights, n)?, *p, *q)
            }
            Mean::Mixture { w } => means::mixture_mean(x, w),
            Mean::Bajraktarevic { w, g } => means::bajraktarevic_mean(x, &vec![w.clone(); n], g),
            Mean::Maximum => means::maximum(x),
            Mean::Minimum => means::minimum(x),
            Mean::Midrange => means::midrange(x),
            Mean::Mode { epsilon: None } => robust::mode(x),
            Mean::Mode { epsilon: Some(e) } => robust::mode_quantized(x, *e),
            Mean::Shorth => robust::shorth(x),
            Mean::Lms => robust::lms(x),
            Mean::Lts => robust::lts(x),
            Mean::OwaPenalty { delta } => robust::owa_penalty_estimator(x, &delta.weights(n)?),
            Mean::Density => robust::density_mean(x, &DensityKernel::cauchy()),
            Mean::InternalSwitch => internal_switch(x),
        }
    }

    /// Fixed arity forced by the parameters, if any.
    pub fn arity(&self) -> Arity {
        match self {
            Mean::Power { weights: Some(w), .. }
            | Mean::QuasiArithmetic { weights: Some(w), .. }
            | Mean::Gini { weights: Some(w), .. }
            | Mean::Owa { weights: w } => Arity::Fixed(w.len()),
            Mean::OwaPenalty { delta: OwaCase::Custom(w) } => Arity::Fixed(w.len()),
            Mean::InternalSwitch => Arity::Fixed(2),
            _ => Arity::Variadic,
        }
    }

    /// Properties known to hold at arity `n`.
    pub fn declared(&self, n: usize) -> Declared {
        match self {
            Mean::Arithmetic
            | Mean::Owa { .. }
            | Mean::OrderStatistic { .. }
            | Mean::Median
            | Mean::Maximum
            | Mean::Minimum
            | Mean::Midrange => Declared::MONOTONE_SHIFT_INVARIANT,
            Mean::Power { .. } => Declared::MONOTONE,
            Mean::QuasiArithmetic { g, .. } if g.is_strictly_monotone() => Declared::MONOTONE,
            Mean::Lehmer { q } => lehmer_declared(*q, n),
            Mean::Mode { epsilon: None }
            | Mean::Shorth
            | Mean::Lms
            | Mean::Lts
            | Mean::OwaPenalty { .. }
            | Mean::Density => Declared::SHIFT_INVARIANT,
            _ => Declared::NONE,
        }
    }

    /// Handle on `[0, 1]ⁿ` (or the fixed arity the parameters imply).
    pub fn handle(&self, n: usize) -> AggregatorHandle {
        self.handle_on(n, Interval::unit())
    }

    pub fn handle_on(&self, n: usize, domain: Interval) -> AggregatorHandle {
        let arity = match self.arity() {
            Arity::Variadic => Arity::Fixed(n),
            fixed => fixed,
        };
        let n = match arity {
            Arity::Fixed(m) => m,
            Arity::Variadic => n,
        };
        let mean = self.clone();
        AggregatorHandle::new(self.label(), arity, domain, move |x| mean.eval(x))
            .with_declared(self.declared(n))
    }
}

fn lehmer_declared(q: f64, n: usize) -> Declared {
    if (-1.0..=0.0).contains(&q) {
        return Declared::MONOTONE;
    }
    match means::lehmer_max_args(q) {
        Ok(b) if n as f64 <= b => Declared {
            weakly_monotone: true,
            ..Declared::NONE
        },
        _ => Declared::NONE,
    }
}

/// The Lehmer mean `L_q` as an `n`-argument handle on `[0, 1]ⁿ`.
pub fn lehmer_handle(q: f64, n: usize) -> AggregatorHandle {
    Mean::Lehmer { q }.handle(n)
}
