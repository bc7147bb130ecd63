//! Sampling-based falsification of monotonicity-class properties.
//!
//! Every check draws points from the aggregator's domain, looks for an
//! input at which the property fails by more than `tol`, and returns a
//! [`PropertyReport`]. A violated report carries a witness that can be
//! re-evaluated with [`PropertyReport::replay`].
//!
//! Sampling is deterministic: samples are drawn in chunks of
//! [`CHUNK`], chunk `c` using a ChaCha8 stream `c` seeded with
//! `cfg.seed`, so the same configuration finds the same witness no matter
//! how many threads evaluate the chunks.
//!
//! ```
//! use weakmean::verify::{check_weak_monotonicity, SamplerConfig};
//! use weakmean::catalog::lehmer_handle;
//!
//! let cfg = SamplerConfig::default().with_samples(20_000);
//! let report = check_weak_monotonicity(&lehmer_handle(1.0, 3), &cfg).unwrap();
//! assert!(report.is_violated());
//! assert!(report.replay(&lehmer_handle(1.0, 3)).unwrap());
//! ```

mod handle;
mod report;
mod table;

pub use handle::{AggregatorHandle, Arity, Declared};
pub use report::{Property, PropertyReport, Verdict, Witness};
pub use table::{lehmer_bound_table, BoundCell, BoundRow, BoundTable, Theory};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::{Interval, ScalarFunction};
use crate::error::{Error, Result};

/// Samples drawn from one RNG stream.
pub const CHUNK: usize = 1024;

/// Chunks evaluated between checks for an early stop.
const BATCH: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub samples: usize,
    /// Upper limit on the shift `a` (or the scale factor for
    /// homogeneity). `None` lets the shift reach the domain edge.
    pub shift_max: Option<f64>,
    pub seed: u64,
    pub tol: f64,
    /// Share of samples with coordinates pinned to the domain faces or to
    /// a shared interior value.
    pub boundary_fraction: f64,
    /// Arity used for variadic aggregators.
    pub n: usize,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            samples: 100_000,
            shift_max: None,
            seed: 0,
            tol: 1e-9,
            boundary_fraction: 0.2,
            n: 3,
        }
    }
}

impl SamplerConfig {
    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = n;
        self
    }

    pub fn with_shift_max(mut self, shift_max: f64) -> Self {
        self.shift_max = Some(shift_max);
        self
    }

    pub fn with_boundary_fraction(mut self, fraction: f64) -> Self {
        self.boundary_fraction = fraction;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::InvalidConfig("samples must be positive".into()));
        }
        if !(self.tol > 0.0) || !self.tol.is_finite() {
            return Err(Error::InvalidConfig(format!("tol must be positive, got {}", self.tol)));
        }
        if !(0.0..=1.0).contains(&self.boundary_fraction) {
            return Err(Error::InvalidConfig(format!(
                "boundary_fraction must lie in [0, 1], got {}",
                self.boundary_fraction
            )));
        }
        if let Some(s) = self.shift_max {
            if !(s > 0.0) || !s.is_finite() {
                return Err(Error::InvalidConfig(format!("shift_max must be positive, got {s}")));
            }
        }
        if self.n == 0 {
            return Err(Error::InvalidConfig("n must be at least 1".into()));
        }
        Ok(())
    }

    fn arity(&self, f: &AggregatorHandle) -> Result<usize> {
        match f.arity() {
            Arity::Fixed(m) => Ok(m),
            Arity::Variadic => Ok(self.n),
        }
    }
}

enum Trial {
    Pass,
    Inconclusive,
    Violated(Witness),
}

/// Draws points from `domainⁿ`.
struct Sampler {
    domain: Interval,
    n: usize,
    boundary_fraction: f64,
    /// Pinned coordinates go to the lower face only, so that shifts along
    /// the diagonal stay inside the domain.
    lower_face_only: bool,
}

impl Sampler {
    fn uniform(&self, rng: &mut ChaCha8Rng) -> f64 {
        let (lo, w) = (self.domain.lo(), self.domain.width());
        (lo + w * rng.random::<f64>()).min(self.domain.hi())
    }

    /// Returns the point and whether it was boundary-biased.
    fn point(&self, rng: &mut ChaCha8Rng) -> (Vec<f64>, bool) {
        if rng.random::<f64>() >= self.boundary_fraction {
            return ((0..self.n).map(|_| self.uniform(rng)).collect(), false);
        }
        // Each coordinate goes to a face, to a value shared with other
        // coordinates, or stays free.
        let shared = self.uniform(rng);
        let x = (0..self.n)
            .map(|_| match rng.random_range(0..4u8) {
                0 => self.domain.lo(),
                1 if !self.lower_face_only => self.domain.hi(),
                1 => self.domain.lo(),
                2 => shared,
                _ => self.uniform(rng),
            })
            .collect();
        (x, true)
    }

    /// A shift `a > 0` with `x + a·1` inside the domain, or `None` when the
    /// point touches the upper face.
    fn shift(&self, rng: &mut ChaCha8Rng, x: &[f64], cap: Option<f64>, biased: bool) -> Option<f64> {
        let top = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut room = self.domain.hi() - top;
        if let Some(c) = cap {
            room = room.min(c);
        }
        if !(room > 0.0) {
            return None;
        }
        if biased && rng.random::<bool>() {
            return Some(room);
        }
        // (0, room]
        Some(room * (1.0 - rng.random::<f64>()))
    }
}

fn shifted(x: &[f64], a: f64, hi: f64) -> Vec<f64> {
    x.iter().map(|&t| (t + a).min(hi)).collect()
}

fn run(
    f: &AggregatorHandle,
    cfg: &SamplerConfig,
    property: Property,
    lower_face_only: bool,
    trial: impl Fn(&Sampler, &mut ChaCha8Rng) -> Trial + Sync,
) -> Result<PropertyReport> {
    cfg.validate()?;
    let n = cfg.arity(f)?;
    if !f.arity().accepts(n) {
        return Err(Error::ArityMismatch(format!(
            "{} does not accept {n} arguments",
            f.name()
        )));
    }
    let sampler = Sampler {
        domain: f.domain(),
        n,
        boundary_fraction: cfg.boundary_fraction,
        lower_face_only,
    };
    let chunks = cfg.samples.div_ceil(CHUNK);

    // (samples examined in chunk, inconclusive count, first violation)
    let run_chunk = |c: usize| {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(c as u64);
        let len = CHUNK.min(cfg.samples - c * CHUNK);
        let mut inconclusive = 0;
        for i in 0..len {
            match trial(&sampler, &mut rng) {
                Trial::Pass => {}
                Trial::Inconclusive => inconclusive += 1,
                Trial::Violated(w) => return (i + 1, inconclusive, Some(w)),
            }
        }
        (len, inconclusive, None)
    };

    let mut samples_used = 0;
    let mut inconclusive = 0;
    let mut start = 0;
    while start < chunks {
        let end = (start + BATCH).min(chunks);
        let results: Vec<_> = (start..end).into_par_iter().map(run_chunk).collect();
        for (used, inc, witness) in results {
            samples_used += used;
            inconclusive += inc;
            if let Some(witness) = witness {
                return Ok(PropertyReport {
                    property,
                    verdict: Verdict::Violated,
                    aggregator: f.name().to_string(),
                    witness: Some(witness),
                    samples_used,
                    seed: cfg.seed,
                    tol: cfg.tol,
                    inconclusive,
                });
            }
        }
        start = end;
    }
    Ok(PropertyReport {
        property,
        verdict: Verdict::NoViolationFound,
        aggregator: f.name().to_string(),
        witness: None,
        samples_used,
        seed: cfg.seed,
        tol: cfg.tol,
        inconclusive,
    })
}

macro_rules! eval_or_skip {
    ($f:expr, $x:expr) => {
        match $f.eval_unchecked($x) {
            Ok(v) if v.is_finite() => v,
            _ => return Trial::Inconclusive,
        }
    };
}

/// `F(x + a·1) ≥ F(x) − tol` for `a > 0`.
pub fn check_weak_monotonicity(f: &AggregatorHandle, cfg: &SamplerConfig) -> Result<PropertyReport> {
    let hi = f.domain().hi();
    run(f, cfg, Property::WeaklyMonotone, true, |s, rng| {
        let (x, biased) = s.point(rng);
        let Some(a) = s.shift(rng, &x, cfg.shift_max, biased) else {
            return Trial::Pass;
        };
        let xa = shifted(&x, a, hi);
        let fx = eval_or_skip!(f, &x);
        let fxa = eval_or_skip!(f, &xa);
        if fxa < fx - cfg.tol {
            Trial::Violated(Witness { x, y: None, a: Some(a), values: vec![fx, fxa] })
        } else {
            Trial::Pass
        }
    })
}

/// `x ≤ y ⇒ F(x) ≤ F(y) + tol`, with `y` raised in one or several
/// coordinates.
pub fn check_monotonicity(f: &AggregatorHandle, cfg: &SamplerConfig) -> Result<PropertyReport> {
    let hi = f.domain().hi();
    run(f, cfg, Property::Monotone, false, |s, rng| {
        let (x, _) = s.point(rng);
        let mut y = x.clone();
        let raise = |rng: &mut ChaCha8Rng, i: usize, y: &mut Vec<f64>| {
            // Sometimes move up to another coordinate's value, which creates
            // ties; otherwise a uniform step towards the upper face.
            let above: Vec<f64> = x.iter().copied().filter(|&v| v > x[i]).collect();
            if !above.is_empty() && rng.random::<bool>() {
                y[i] = above[rng.random_range(0..above.len())];
            } else {
                y[i] = x[i] + (hi - x[i]) * rng.random::<f64>();
            }
        };
        if rng.random::<bool>() {
            let i = rng.random_range(0..s.n);
            raise(rng, i, &mut y);
        } else {
            for i in 0..s.n {
                if rng.random::<bool>() {
                    raise(rng, i, &mut y);
                }
            }
        }
        let fx = eval_or_skip!(f, &x);
        let fy = eval_or_skip!(f, &y);
        if fy < fx - cfg.tol {
            Trial::Violated(Witness { x, y: Some(y), a: None, values: vec![fx, fy] })
        } else {
            Trial::Pass
        }
    })
}

/// `|F(x + a·1) − F(x) − a| ≤ tol`.
pub fn check_shift_invariance(f: &AggregatorHandle, cfg: &SamplerConfig) -> Result<PropertyReport> {
    let hi = f.domain().hi();
    run(f, cfg, Property::ShiftInvariant, true, |s, rng| {
        let (x, biased) = s.point(rng);
        let Some(a) = s.shift(rng, &x, cfg.shift_max, biased) else {
            return Trial::Pass;
        };
        let xa = shifted(&x, a, hi);
        let fx = eval_or_skip!(f, &x);
        let fxa = eval_or_skip!(f, &xa);
        if (fxa - fx - a).abs() > cfg.tol {
            Trial::Violated(Witness { x, y: None, a: Some(a), values: vec![fx, fxa] })
        } else {
            Trial::Pass
        }
    })
}

/// `|F(λx) − λF(x)| ≤ tol·max(1, λ)` for `λ > 0` with `λx` in the domain.
/// `shift_max` caps `λ` (default 10).
pub fn check_homogeneity(f: &AggregatorHandle, cfg: &SamplerConfig) -> Result<PropertyReport> {
    let domain = f.domain();
    if !domain.contains(0.0) {
        return Err(Error::InvalidConfig(format!(
            "homogeneity needs a domain containing 0, got {domain}"
        )));
    }
    let cap = cfg.shift_max.unwrap_or(10.0);
    run(f, cfg, Property::Homogeneous, false, |s, rng| {
        let (x, _) = s.point(rng);
        let mut lmax = cap;
        for &t in &x {
            if t > 0.0 {
                lmax = lmax.min(domain.hi() / t);
            } else if t < 0.0 {
                lmax = lmax.min(domain.lo() / t);
            }
        }
        let lambda = lmax * (1.0 - rng.random::<f64>());
        let lx: Vec<f64> = x
            .iter()
            .map(|&t| (lambda * t).clamp(domain.lo(), domain.hi()))
            .collect();
        let fx = eval_or_skip!(f, &x);
        let flx = eval_or_skip!(f, &lx);
        if (flx - lambda * fx).abs() > cfg.tol * lambda.max(1.0) {
            Trial::Violated(Witness { x, y: None, a: Some(lambda), values: vec![fx, flx] })
        } else {
            Trial::Pass
        }
    })
}

/// `|F(t, …, t) − t| ≤ tol`.
pub fn check_idempotency(f: &AggregatorHandle, cfg: &SamplerConfig) -> Result<PropertyReport> {
    let domain = f.domain();
    run(f, cfg, Property::Idempotent, false, |s, rng| {
        let t = if rng.random::<f64>() < s.boundary_fraction {
            if rng.random::<bool>() {
                domain.lo()
            } else {
                domain.hi()
            }
        } else {
            s.uniform(rng)
        };
        let x = vec![t; s.n];
        let ft = eval_or_skip!(f, &x);
        if (ft - t).abs() > cfg.tol {
            Trial::Violated(Witness { x, y: None, a: None, values: vec![ft] })
        } else {
            Trial::Pass
        }
    })
}

/// `min(x) − tol ≤ F(x) ≤ max(x) + tol`.
pub fn check_averaging(f: &AggregatorHandle, cfg: &SamplerConfig) -> Result<PropertyReport> {
    run(f, cfg, Property::Averaging, false, |s, rng| {
        let (x, _) = s.point(rng);
        let fx = eval_or_skip!(f, &x);
        let lo = x.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if fx < lo - cfg.tol || fx > hi + cfg.tol {
            Trial::Violated(Witness { x, y: None, a: None, values: vec![fx] })
        } else {
            Trial::Pass
        }
    })
}

/// `F(x)` equals one of the `xᵢ` within `tol`.
pub fn check_internality(f: &AggregatorHandle, cfg: &SamplerConfig) -> Result<PropertyReport> {
    run(f, cfg, Property::Internal, false, |s, rng| {
        let (x, _) = s.point(rng);
        let fx = eval_or_skip!(f, &x);
        if x.iter().any(|&t| (t - fx).abs() <= cfg.tol) {
            Trial::Pass
        } else {
            Trial::Violated(Witness { x, y: None, a: None, values: vec![fx] })
        }
    })
}

/// Runs the check for `property`. [`Property::MixtureCondition`] is not a
/// property of a handle; use [`check_mixture_sufficient_condition`].
pub fn check(property: Property, f: &AggregatorHandle, cfg: &SamplerConfig) -> Result<PropertyReport> {
    match property {
        Property::Monotone => check_monotonicity(f, cfg),
        Property::WeaklyMonotone => check_weak_monotonicity(f, cfg),
        Property::ShiftInvariant => check_shift_invariance(f, cfg),
        Property::Homogeneous => check_homogeneity(f, cfg),
        Property::Idempotent => check_idempotency(f, cfg),
        Property::Averaging => check_averaging(f, cfg),
        Property::Internal => check_internality(f, cfg),
        Property::MixtureCondition => Err(Error::InvalidConfig(
            "the mixture condition is checked on a weight function, not an aggregator".into(),
        )),
    }
}

/// Forward difference of `F` along the unit diagonal:
/// `(F(x + h·1) − F(x)) / (h√n)`.
pub fn directional_derivative(f: &AggregatorHandle, x: &[f64], h: f64) -> Result<f64> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::InvalidConfig(format!("step must be positive, got {h}")));
    }
    let fx = f.eval(x)?;
    let xh: Vec<f64> = x.iter().map(|t| t + h).collect();
    let fxh = f.eval(&xh)?;
    Ok((fxh - fx) / (h * (x.len() as f64).sqrt()))
}

/// Step used by [`directional_derivative_auto`]: `1e-6` times the scale of `x`.
pub fn default_step(x: &[f64]) -> f64 {
    1e-6 * x.iter().fold(1.0f64, |m, t| m.max(t.abs()))
}

/// [`directional_derivative`] with [`default_step`].
pub fn directional_derivative_auto(f: &AggregatorHandle, x: &[f64]) -> Result<f64> {
    directional_derivative(f, x, default_step(x))
}

/// Checks `w(t) ≥ w'(t)(b − t)` on `grid` evenly spaced points of
/// `[a, b]`. This is sufficient for the mixture function generated by a
/// non-decreasing `w` to be monotone; a violation says nothing about
/// monotonicity itself.
pub fn check_mixture_sufficient_condition(
    w: &ScalarFunction,
    interval: Interval,
    grid: usize,
) -> Result<PropertyReport> {
    if grid < 2 {
        return Err(Error::InvalidConfig("grid needs at least 2 points".into()));
    }
    let tol = 1e-9;
    let (a, b) = (interval.lo(), interval.hi());
    let mut report = PropertyReport {
        property: Property::MixtureCondition,
        verdict: Verdict::NoViolationFound,
        aggregator: format!("mixture(w={})", w.name()),
        witness: None,
        samples_used: grid,
        seed: 0,
        tol,
        inconclusive: 0,
    };
    for j in 0..grid {
        let t = if j + 1 == grid {
            b
        } else {
            a + (b - a) * j as f64 / (grid - 1) as f64
        };
        let lhs = w.eval(t);
        let rhs = w.derivative(t, interval) * (b - t);
        if !lhs.is_finite() || !rhs.is_finite() {
            report.inconclusive += 1;
            continue;
        }
        if lhs < rhs - tol * rhs.abs().max(1.0) {
            report.verdict = Verdict::Violated;
            report.witness = Some(Witness { x: vec![t], y: None, a: None, values: vec![lhs, rhs] });
            report.samples_used = j + 1;
            return Ok(report);
        }
    }
    Ok(report)
}

impl PropertyReport {
    /// Re-evaluates the witness and reports whether the violation still
    /// holds. Reports without a witness replay as `false`.
    pub fn replay(&self, f: &AggregatorHandle) -> Result<bool> {
        let Some(w) = &self.witness else {
            return Ok(false);
        };
        let tol = self.tol;
        let hi = f.domain().hi();
        let fx = f.eval(&w.x)?;
        let need_a = || {
            w.a.ok_or_else(|| Error::ReportParse("witness is missing the shift a".into()))
        };
        Ok(match self.property {
            Property::WeaklyMonotone => {
                let fxa = f.eval(&shifted(&w.x, need_a()?, hi))?;
                fxa < fx - tol
            }
            Property::ShiftInvariant => {
                let a = need_a()?;
                let fxa = f.eval(&shifted(&w.x, a, hi))?;
                (fxa - fx - a).abs() > tol
            }
            Property::Monotone => {
                let y = w
                    .y
                    .as_ref()
                    .ok_or_else(|| Error::ReportParse("witness is missing y".into()))?;
                f.eval(y)? < fx - tol
            }
            Property::Homogeneous => {
                let l = need_a()?;
                let d = f.domain();
                let lx: Vec<f64> = w.x.iter().map(|&t| (l * t).clamp(d.lo(), d.hi())).collect();
                (f.eval(&lx)? - l * fx).abs() > tol * l.max(1.0)
            }
            Property::Idempotent => (fx - w.x[0]).abs() > tol,
            Property::Averaging => {
                let lo = w.x.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = w.x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                fx < lo - tol || fx > hi + tol
            }
            Property::Internal => !w.x.iter().any(|&t| (t - fx).abs() <= tol),
            Property::MixtureCondition => {
                return Err(Error::InvalidConfig(
                    "mixture-condition reports replay against a weight function".into(),
                ))
            }
        })
    }
}
