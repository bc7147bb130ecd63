//! Penalty-based means: `F(x) = argmin_y P(x, y)`.
//!
//! A [`PenaltySpec`] describes `P` either as a sum of per-coordinate terms
//! `p(xᵢ, y, i)` or as a whole function of `(x, y)`. [`minimize_penalty`]
//! locates the minimiser over a bracket. When the minimiser set is not a
//! single point the infimum (leftmost minimiser) is reported.
//!
//! The minimiser scans a uniform grid to which every input value (and any
//! caller-supplied candidate) is added, then refines around the best grid
//! points with golden-section search followed by a parabolic polish. The
//! injected data points matter for quasi-penalties such as the mode's,
//! whose minimisers sit exactly on the inputs and are invisible to a grid.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::domain::{check_values, InputVector, Interval, ScalarFunction};
use crate::error::{Error, Result};

/// What kind of minimiser set the penalty is declared to have.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PenaltyClass {
    /// Quasi-convex in `y`: the minimisers form an interval.
    QuasiConvex,
    /// Only lower semi-continuous in `y`: the minimiser set may be
    /// disconnected.
    LowerSemicontinuous,
}

type TermFn = Arc<dyn Fn(f64, f64, usize) -> f64 + Send + Sync>;
type WholeFn = Arc<dyn Fn(&[f64], f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Form {
    Terms(TermFn),
    Whole(WholeFn),
}

#[derive(Clone)]
pub struct PenaltySpec {
    name: String,
    form: Form,
    constant: f64,
    class: PenaltyClass,
}

impl fmt::Debug for PenaltySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PenaltySpec")
            .field("name", &self.name)
            .field("constant", &self.constant)
            .field("class", &self.class)
            .finish()
    }
}

impl PenaltySpec {
    /// `P(x, y) = Σᵢ term(xᵢ, y, i)`.
    pub fn from_terms(
        name: impl Into<String>,
        class: PenaltyClass,
        constant: f64,
        term: impl Fn(f64, f64, usize) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            form: Form::Terms(Arc::new(term)),
            constant,
            class,
        }
    }

    pub fn from_whole(
        name: impl Into<String>,
        class: PenaltyClass,
        constant: f64,
        penalty: impl Fn(&[f64], f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            form: Form::Whole(Arc::new(penalty)),
            constant,
            class,
        }
    }

    /// `Σ (xᵢ − y)²`, minimised by the arithmetic mean.
    pub fn least_squares() -> Self {
        Self::from_terms("least-squares", PenaltyClass::QuasiConvex, 0.0, |xi, y, _| {
            (xi - y) * (xi - y)
        })
    }

    /// `Σ |xᵢ − y|`, minimised by the median.
    pub fn absolute_deviation() -> Self {
        Self::from_terms("absolute-deviation", PenaltyClass::QuasiConvex, 0.0, |xi, y, _| {
            (xi - y).abs()
        })
    }

    /// `Σ wᵢ (xᵢ − y)²` with fixed weights.
    pub fn weighted_squares(weights: Vec<f64>) -> Self {
        Self::from_terms("weighted-squares", PenaltyClass::QuasiConvex, 0.0, move |xi, y, i| {
            weights[i] * (xi - y) * (xi - y)
        })
    }

    /// `Σ Hδ(xᵢ − y)` with the Huber function `Hδ`.
    pub fn huber(delta: f64) -> Self {
        Self::from_terms("huber", PenaltyClass::QuasiConvex, 0.0, move |xi, y, _| {
            huber(xi - y, delta)
        })
    }

    /// The mode's quasi-penalty: the number of inputs different from `y`.
    pub fn mode() -> Self {
        Self::from_terms("mode", PenaltyClass::LowerSemicontinuous, 0.0, |xi, y, _| {
            if xi == y {
                0.0
            } else {
                1.0
            }
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    pub fn class(&self) -> PenaltyClass {
        self.class
    }

    #[inline]
    pub fn evaluate(&self, x: &[f64], y: f64) -> f64 {
        match &self.form {
            Form::Terms(term) => x.iter().enumerate().map(|(i, &xi)| term(xi, y, i)).sum(),
            Form::Whole(whole) => whole(x, y),
        }
    }

    /// Samples the two penalty axioms on `domain^n`: `P(x, y) ≥ c`
    /// everywhere and `P(t·1, t) = c` (both to `1e-12`).
    pub fn check_axioms(&self, domain: Interval, n: usize, samples: usize, seed: u64) -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tol = 1e-12;
        let mut x = vec![0.0; n];
        for _ in 0..samples {
            for xi in x.iter_mut() {
                *xi = domain.lo() + domain.width() * rng.random::<f64>();
            }
            let y = domain.lo() + domain.width() * rng.random::<f64>();
            let v = self.evaluate(&x, y);
            if !(v >= self.constant - tol) {
                return Err(Error::PenaltyAxiom(format!(
                    "{}: P({x:?}, {y}) = {v} < c = {}",
                    self.name, self.constant
                )));
            }
            let t = domain.lo() + domain.width() * rng.random::<f64>();
            x.fill(t);
            let v = self.evaluate(&x, t);
            if !((v - self.constant).abs() <= tol) {
                return Err(Error::PenaltyAxiom(format!(
                    "{}: P(t·1, t) = {v} != c = {} at t = {t}",
                    self.name, self.constant
                )));
            }
        }
        Ok(())
    }
}

#[inline]
pub fn huber(r: f64, delta: f64) -> f64 {
    let a = r.abs();
    if a <= delta {
        0.5 * r * r
    } else {
        delta * (a - 0.5 * delta)
    }
}

/// Quadratic penalty `Σ w(xᵢ)(xᵢ − y)²` whose minimiser is the mixture
/// mean generated by `w`.
pub fn mixture_penalty(w: ScalarFunction) -> PenaltySpec {
    PenaltySpec::from_terms(
        format!("mixture[{}]", w.name()),
        PenaltyClass::QuasiConvex,
        0.0,
        move |xi, y, _| w.eval(xi) * (xi - y) * (xi - y),
    )
}

/// Evaluates `P(x + a·1, y + a)`; `x + a·1` must stay inside `x`'s domain.
///
/// Penalties built from terms that depend only on `xᵢ − y` return
/// `P(x, y)` unchanged.
pub fn shifted_penalty_value(p: &PenaltySpec, x: &InputVector, a: f64, y: f64) -> Result<f64> {
    let shifted = x.shifted(a)?;
    Ok(p.evaluate(&shifted, y + a))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Bracket {
    /// `[min(x), max(x)]`.
    Auto,
    Fixed(Interval),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimizerConfig {
    pub grid_points: usize,
    pub refine_tol: f64,
    pub bracket: Bracket,
    /// Reject penalties declared quasi-convex whose sampled values are not
    /// unimodal on the grid.
    pub check_quasi_convexity: bool,
}

impl Default for MinimizerConfig {
    fn default() -> Self {
        Self {
            grid_points: 2001,
            refine_tol: 1e-10,
            bracket: Bracket::Auto,
            check_quasi_convexity: false,
        }
    }
}

impl MinimizerConfig {
    pub fn with_grid_points(mut self, grid_points: usize) -> Self {
        self.grid_points = grid_points;
        self
    }

    pub fn with_bracket(mut self, bracket: Bracket) -> Self {
        self.bracket = bracket;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid_points < 3 {
            return Err(Error::InvalidConfig(format!(
                "grid_points must be at least 3, got {}",
                self.grid_points
            )));
        }
        if !(self.refine_tol > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "refine_tol must be positive, got {}",
                self.refine_tol
            )));
        }
        Ok(())
    }
}

/// Number of distinct local grid minima refined for quasi-penalties.
const MAX_BASINS: usize = 8;

/// Values within this relative distance of the best are treated as ties.
#[inline]
fn tie_tol(f: f64) -> f64 {
    8.0 * f64::EPSILON * f.abs()
}

/// Leftmost global minimiser of `P(x, ·)` over the configured bracket.
pub fn minimize_penalty(p: &PenaltySpec, x: &[f64], cfg: &MinimizerConfig) -> Result<f64> {
    minimize_penalty_with_candidates(p, x, cfg, &[])
}

/// As [`minimize_penalty`], with extra points injected into the scan (for
/// instance the breakpoints of a piecewise-smooth penalty).
pub fn minimize_penalty_with_candidates(
    p: &PenaltySpec,
    x: &[f64],
    cfg: &MinimizerConfig,
    extra: &[f64],
) -> Result<f64> {
    check_values(x)?;
    cfg.validate()?;
    let (a, b) = match cfg.bracket {
        Bracket::Auto => (
            x.iter().copied().fold(f64::INFINITY, f64::min),
            x.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        ),
        Bracket::Fixed(iv) => (iv.lo(), iv.hi()),
    };
    if !(a <= b) {
        return Err(Error::EmptyBracket);
    }
    let f = |y: f64| p.evaluate(x, y);
    let finite = |y: f64, v: f64| {
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinitePenalty { y })
        }
    };
    if a == b {
        finite(a, f(a))?;
        return Ok(a);
    }

    let m = cfg.grid_points;
    let mut injected: Vec<f64> = x
        .iter()
        .chain(extra)
        .copied()
        .filter(|&v| v >= a && v <= b)
        .collect();
    injected.sort_by(f64::total_cmp);
    injected.dedup();
    let mut ys: Vec<f64> = Vec::with_capacity(m + injected.len());
    ys.extend((0..m).map(|i| a + (b - a) * (i as f64 / (m - 1) as f64)));
    ys.extend_from_slice(&injected);
    ys.sort_by(f64::total_cmp);
    ys.dedup();
    let vals = ys
        .iter()
        .map(|&y| finite(y, f(y)))
        .collect::<Result<Vec<f64>>>()?;

    if cfg.check_quasi_convexity && p.class == PenaltyClass::QuasiConvex {
        check_unimodal(&ys, &vals)?;
    }

    // Discrete local minima, best first; ties keep the leftmost.
    let mut basins: Vec<usize> = (0..ys.len())
        .filter(|&j| {
            (j == 0 || vals[j] <= vals[j - 1]) && (j + 1 == ys.len() || vals[j] <= vals[j + 1])
        })
        .collect();
    basins.sort_by(|&i, &j| vals[i].total_cmp(&vals[j]).then(i.cmp(&j)));
    let keep = match p.class {
        PenaltyClass::QuasiConvex => 1,
        PenaltyClass::LowerSemicontinuous => MAX_BASINS,
    };
    basins.truncate(keep);

    let mut best: Vec<(f64, f64)> = Vec::with_capacity(2 * basins.len());
    for &j in &basins {
        best.push((ys[j], vals[j]));
        let lo = ys[j.saturating_sub(1)];
        let hi = ys[(j + 1).min(ys.len() - 1)];
        let (mut y, mut v, polished) = refine(&f, lo, hi, (a, b), cfg.refine_tol);
        if !polished {
            // A minimum that is not locally quadratic sits on a kink; kinks
            // of the penalties used here are at injected points.
            if let Some(c) = nearest(&injected, y) {
                let fc = f(c);
                if (c - y).abs() <= 1e-6 * (b - a) && fc <= v + tie_tol(v) {
                    y = c;
                    v = fc;
                }
            }
        }
        if v.is_finite() {
            best.push((y, v));
        }
    }
    let f_best = best.iter().map(|&(_, v)| v).fold(f64::INFINITY, f64::min);
    let y_best = best
        .iter()
        .filter(|&&(_, v)| v <= f_best + tie_tol(f_best))
        .map(|&(y, _)| y)
        .fold(f64::INFINITY, f64::min);

    Ok(leftmost_on_plateau(&f, &ys, &vals, y_best, f_best, a, b, cfg.refine_tol))
}

fn check_unimodal(ys: &[f64], vals: &[f64]) -> Result<()> {
    let slack = |v: f64| 1e-12 * v.abs().max(1.0);
    let mut rising = false;
    for j in 1..vals.len() {
        if vals[j] > vals[j - 1] + slack(vals[j - 1]) {
            rising = true;
        } else if rising && vals[j] < vals[j - 1] - slack(vals[j - 1]) {
            return Err(Error::NotQuasiConvex { y: ys[j] });
        }
    }
    Ok(())
}

fn nearest(sorted: &[f64], y: f64) -> Option<f64> {
    let i = sorted.partition_point(|&t| t < y);
    let right = sorted.get(i).copied();
    let left = i.checked_sub(1).map(|j| sorted[j]);
    match (left, right) {
        (Some(l), Some(r)) => Some(if y - l <= r - y { l } else { r }),
        (l, r) => l.or(r),
    }
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search on `[lo, hi]` followed by a parabolic polish.
/// Returns the best point seen, its value, and whether the polish applied.
fn refine(
    f: &impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    bracket: (f64, f64),
    tol: f64,
) -> (f64, f64, bool) {
    let (mut lo, mut hi) = (lo, hi);
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut iterations = 0;
    while hi - lo > tol && iterations < 200 {
        if fc <= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - INV_PHI * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INV_PHI * (hi - lo);
            fd = f(d);
        }
        iterations += 1;
    }
    let (y, v) = if fc <= fd { (c, fc) } else { (d, fd) };
    match parabolic_polish(f, y, v, bracket) {
        Some((yp, vp)) if vp <= v + tie_tol(v) => (yp, vp, true),
        _ => (y, v, false),
    }
}

/// Fits parabolas through `y ± h` for a shrinking sequence of `h` and
/// returns the vertex once two successive fits agree. On a locally
/// quadratic penalty this recovers the minimiser to far better than the
/// `√ε` resolution of comparison-based search.
fn parabolic_polish(
    f: &impl Fn(f64) -> f64,
    y: f64,
    fy: f64,
    (a, b): (f64, f64),
) -> Option<(f64, f64)> {
    let room = (y - a).min(b - y);
    let mut h = (0.25 * (b - a)).min(room);
    let floor = 1e-7 * (b - a);
    let mut previous: Option<f64> = None;
    while h > floor {
        let (fl, fr) = (f(y - h), f(y + h));
        let curvature = fl - 2.0 * fy + fr;
        if curvature > 0.0 {
            let vertex = y + 0.5 * h * (fl - fr) / curvature;
            if let Some(prev) = previous {
                if (vertex - prev).abs() <= 1e-6 * h && vertex >= a && vertex <= b {
                    return Some((prev, f(prev)));
                }
            }
            previous = Some(vertex);
        } else {
            previous = None;
        }
        h *= 0.25;
    }
    None
}

/// Moves `y` left across a flat stretch of the penalty so that the
/// infimum of the minimiser set is reported. Stretches narrower than
/// `1e-6` of the bracket are not resolved.
#[allow(clippy::too_many_arguments)]
fn leftmost_on_plateau(
    f: &impl Fn(f64) -> f64,
    ys: &[f64],
    vals: &[f64],
    y: f64,
    fy: f64,
    a: f64,
    b: f64,
    tol: f64,
) -> f64 {
    let level = fy + tie_tol(fy);
    let probe = y - (1e-6 * (b - a)).max(10.0 * tol);
    if probe < a || f(probe) > level {
        return y;
    }
    // Nearest scanned point left of the probe that is above the level.
    let split = ys.partition_point(|&t| t < probe);
    let mut bad = match (0..split).rev().find(|&j| vals[j] > level) {
        Some(j) => ys[j],
        None => {
            if f(a) <= level {
                return a;
            }
            a
        }
    };
    let mut good = probe;
    while good - bad > tol {
        let mid = 0.5 * (bad + good);
        if f(mid) <= level {
            good = mid;
        } else {
            bad = mid;
        }
    }
    good
}
