use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::domain::Interval;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Arity {
    Fixed(usize),
    Variadic,
}

impl Arity {
    pub fn accepts(self, n: usize) -> bool {
        match self {
            Arity::Fixed(m) => m == n,
            Arity::Variadic => n >= 1,
        }
    }
}

/// Properties an aggregator is known to have. These are metadata recorded
/// at construction time; the verifier is what tests them.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Declared {
    pub monotone: bool,
    pub weakly_monotone: bool,
    pub shift_invariant: bool,
}

impl Declared {
    pub const NONE: Declared = Declared {
        monotone: false,
        weakly_monotone: false,
        shift_invariant: false,
    };

    /// Monotone, hence weakly monotone.
    pub const MONOTONE: Declared = Declared {
        monotone: true,
        weakly_monotone: true,
        shift_invariant: false,
    };

    /// Shift-invariant, hence weakly monotone.
    pub const SHIFT_INVARIANT: Declared = Declared {
        monotone: false,
        weakly_monotone: true,
        shift_invariant: true,
    };

    pub const MONOTONE_SHIFT_INVARIANT: Declared = Declared {
        monotone: true,
        weakly_monotone: true,
        shift_invariant: true,
    };
}

type EvalFn = Arc<dyn Fn(&[f64]) -> Result<f64> + Send + Sync>;

/// A named aggregation function `F: Iⁿ → ℝ` with its arity and domain.
///
/// Handles are cheap to clone and safe to call from several threads.
#[derive(Clone)]
pub struct AggregatorHandle {
    name: String,
    eval: EvalFn,
    arity: Arity,
    domain: Interval,
    declared: Declared,
    provenance: Option<String>,
}

impl fmt::Debug for AggregatorHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AggregatorHandle")
            .field("name", &self.name)
            .field("arity", &self.arity)
            .field("domain", &self.domain)
            .field("declared", &self.declared)
            .field("provenance", &self.provenance)
            .finish()
    }
}

impl AggregatorHandle {
    pub fn new(
        name: impl Into<String>,
        arity: Arity,
        domain: Interval,
        eval: impl Fn(&[f64]) -> Result<f64> + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            eval: Arc::new(eval),
            arity,
            domain,
            declared: Declared::NONE,
            provenance: None,
        }
    }

    pub fn with_declared(mut self, declared: Declared) -> Self {
        self.declared = declared;
        self
    }

    /// Records why the declared properties hold.
    pub fn with_provenance(mut self, why: impl Into<String>) -> Self {
        self.provenance = Some(why.into());
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> Arity {
        self.arity
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn declared(&self) -> Declared {
        self.declared
    }

    pub fn provenance(&self) -> Option<&str> {
        self.provenance.as_deref()
    }

    /// Evaluates after checking arity and domain membership.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if !self.arity.accepts(x.len()) {
            return Err(Error::ArityMismatch(format!(
                "{} takes {:?} arguments, got {}",
                self.name,
                self.arity,
                x.len()
            )));
        }
        self.domain.check(x)?;
        (self.eval)(x)
    }

    /// Evaluates without the domain check (used by constructions that have
    /// already validated their inputs).
    pub(crate) fn eval_unchecked(&self, x: &[f64]) -> Result<f64> {
        (self.eval)(x)
    }
}
