//! Constructions that build new aggregators from old ones: φ-transforms,
//! duals and two-level compositions.
//!
//! Each construction records which of the monotonicity-class properties
//! it is known to carry over (see [`Declared`]), with a provenance note.
//! These annotations are metadata; [`crate::verify`] is what tests them.
//!
//! A nonlinear φ can break weak monotonicity. With `φ(t) = √t` the shorth
//! becomes non-monotone along the diagonal:
//!
//! ```
//! use weakmean::catalog::Mean;
//! use weakmean::domain::{Interval, ScalarFunction};
//! use weakmean::transforms::{phi_transform, PhiTransform};
//!
//! let shorth = Mean::Shorth.handle_on(5, Interval::new(0.0, 8.0).unwrap());
//! let phi = PhiTransform::new(ScalarFunction::sqrt(), Interval::new(0.0, 64.0).unwrap()).unwrap();
//! let f = phi_transform(&shorth, &phi).unwrap();
//! let x = [1.0, 8.0, 16.0, 35.0, 47.9];
//! let x1: Vec<f64> = x.iter().map(|t| t + 1.0).collect();
//! assert!(f.eval(&x1).unwrap() < f.eval(&x).unwrap());
//! ```

use crate::domain::{Interval, ScalarFunction};
use crate::error::{Error, Result};
use crate::means;
use crate::verify::{AggregatorHandle, Arity, Declared};

/// Tolerance of the three-point collinearity test.
pub const LINEARITY_TOL: f64 = 1e-10;

/// An invertible scalar function used to conjugate an aggregator.
#[derive(Debug, Clone)]
pub struct PhiTransform {
    phi: ScalarFunction,
    linear: bool,
}

impl PhiTransform {
    /// Checks the inverse round trip on `within` and detects whether `φ` is
    /// affine there.
    pub fn new(phi: ScalarFunction, within: Interval) -> Result<Self> {
        phi.require_invertible()?;
        phi.check_round_trip(within, 64)?;
        let linear = is_collinear(&phi, within);
        Ok(Self { phi, linear })
    }

    /// `φ(t) = αt + β`, `α ≠ 0`.
    pub fn affine(alpha: f64, beta: f64) -> Result<Self> {
        if alpha == 0.0 || !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "affine transform needs finite α ≠ 0, got α = {alpha}, β = {beta}"
            )));
        }
        Ok(Self {
            phi: ScalarFunction::affine(alpha, beta),
            linear: true,
        })
    }

    /// Overrides the detected linearity.
    pub fn declared_linear(mut self, linear: bool) -> Self {
        self.linear = linear;
        self
    }

    pub fn is_linear(&self) -> bool {
        self.linear
    }

    pub fn phi(&self) -> &ScalarFunction {
        &self.phi
    }
}

/// Compares the midpoint value with the chord through the endpoints, and
/// the quarter points likewise.
fn is_collinear(phi: &ScalarFunction, within: Interval) -> bool {
    let (a, b) = (within.lo(), within.hi());
    if a == b {
        return true;
    }
    let (fa, fb) = (phi.eval(a), phi.eval(b));
    let scale = fa.abs().max(fb.abs()).max(1.0);
    [0.25, 0.5, 0.75].iter().all(|&s| {
        let t = a + s * (b - a);
        let chord = fa + s * (fb - fa);
        (phi.eval(t) - chord).abs() <= LINEARITY_TOL * scale
    })
}

/// `x ↦ φ⁻¹(A(φ(x₁), …, φ(xₙ)))`.
///
/// The domain of the result is the preimage of `A`'s domain under `φ`.
/// An affine `φ` carries over all of `A`'s declared properties; any
/// strictly monotone `φ` carries over monotonicity, and nothing else.
pub fn phi_transform(a: &AggregatorHandle, phi: &PhiTransform) -> Result<AggregatorHandle> {
    let f = phi.phi.clone();
    let inner = a.domain();
    let (u, v) = (f.inverse(inner.lo())?, f.inverse(inner.hi())?);
    let domain = Interval::new(u.min(v), u.max(v))?;

    let d = a.declared();
    let (declared, why) = if phi.linear {
        (d, "affine φ-transform keeps the declared properties")
    } else {
        (
            Declared { monotone: d.monotone, weakly_monotone: d.monotone, shift_invariant: false },
            "nonlinear φ-transform keeps monotonicity only",
        )
    };
    let name = format!("phi[{}]({})", f.name(), a.name());
    let inner_handle = a.clone();
    let out = AggregatorHandle::new(name, a.arity(), domain, move |x| {
        let y: Vec<f64> = x
            .iter()
            .map(|&t| f.eval(t).clamp(inner.lo(), inner.hi()))
            .collect();
        let s = inner_handle.eval_unchecked(&y)?;
        f.inverse(s)
    });
    Ok(out.with_declared(declared).with_provenance(why))
}

/// `x ↦ 1 − A(1 − x₁, …, 1 − xₙ)` for `A` on `[0, 1]ⁿ`.
pub fn dual(a: &AggregatorHandle) -> Result<AggregatorHandle> {
    let d = a.domain();
    if d.lo() != 0.0 || d.hi() != 1.0 {
        return Err(Error::DualDomain { lo: d.lo(), hi: d.hi() });
    }
    let inner = a.clone();
    let out = AggregatorHandle::new(format!("dual({})", a.name()), a.arity(), d, move |x| {
        let y: Vec<f64> = x.iter().map(|t| 1.0 - t).collect();
        Ok(1.0 - inner.eval_unchecked(&y)?)
    });
    Ok(out
        .with_declared(a.declared())
        .with_provenance("duals under standard negation keep the declared properties"))
}

/// `x ↦ A(B₁(x), B₂(x))`.
///
/// Annotated weakly monotone when `A` is monotone and both `Bᵢ` are weakly
/// monotone, or when `A` is weakly monotone and both `Bᵢ` are
/// shift-invariant.
pub fn compose(
    a: &AggregatorHandle,
    b1: &AggregatorHandle,
    b2: &AggregatorHandle,
) -> Result<AggregatorHandle> {
    if !a.arity().accepts(2) {
        return Err(Error::ArityMismatch(format!(
            "outer function {} must take 2 arguments, takes {:?}",
            a.name(),
            a.arity()
        )));
    }
    let arity = match (b1.arity(), b2.arity()) {
        (Arity::Fixed(m), Arity::Fixed(k)) if m != k => {
            return Err(Error::ArityMismatch(format!(
                "inner functions take {m} and {k} arguments"
            )))
        }
        (Arity::Fixed(m), _) | (_, Arity::Fixed(m)) => Arity::Fixed(m),
        _ => Arity::Variadic,
    };
    let (d1, d2) = (b1.domain(), b2.domain());
    let domain = Interval::new(d1.lo().max(d2.lo()), d1.hi().min(d2.hi()))?;

    let (da, e1, e2) = (a.declared(), b1.declared(), b2.declared());
    let by_monotone_outer = da.monotone && e1.weakly_monotone && e2.weakly_monotone;
    let by_shift_inner = da.weakly_monotone && e1.shift_invariant && e2.shift_invariant;
    let declared = Declared {
        monotone: da.monotone && e1.monotone && e2.monotone,
        weakly_monotone: by_monotone_outer || by_shift_inner,
        shift_invariant: da.shift_invariant && e1.shift_invariant && e2.shift_invariant,
    };
    let why = match (by_monotone_outer, by_shift_inner) {
        (true, _) => "monotone outer function of weakly monotone inner functions",
        (false, true) => "weakly monotone outer function of shift-invariant inner functions",
        _ => "no composition rule applies",
    };

    let name = format!("{}({}, {})", a.name(), b1.name(), b2.name());
    let (a, b1, b2) = (a.clone(), b1.clone(), b2.clone());
    let out = AggregatorHandle::new(name, arity, domain, move |x| {
        let y = [b1.eval_unchecked(x)?, b2.eval_unchecked(x)?];
        a.eval_unchecked(&y)
    });
    Ok(out.with_declared(declared).with_provenance(why))
}

/// `min(x)` if `x₁ + x₂ ≥ 1`, otherwise `max(x)`.
pub fn internal_switch(x: &[f64]) -> Result<f64> {
    if x.len() != 2 {
        return Err(Error::ArityMismatch(format!(
            "the switch function takes 2 arguments, got {}",
            x.len()
        )));
    }
    if x[0] + x[1] >= 1.0 {
        means::minimum(x)
    } else {
        means::maximum(x)
    }
}

/// [`internal_switch`] on `[0, 1]²`: internal and averaging, but not
/// weakly monotone.
pub fn internal_switch_example() -> AggregatorHandle {
    AggregatorHandle::new("internal-switch", Arity::Fixed(2), Interval::unit(), internal_switch)
}
