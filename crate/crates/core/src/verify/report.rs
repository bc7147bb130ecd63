//! Property reports and their two serialisations.
//!
//! The line format is a single line of space-separated `key=value` pairs,
//! with vectors written as comma-separated numbers:
//!
//! ```text
//! property=weakly-monotone verdict=violated aggregator=lehmer(q=1) samples=3 seed=7 tol=1e-9 inconclusive=0 x=1,0,0 a=0.1 values=1,0.9461538461538461
//! ```
//!
//! The machine format is one JSON object per report with the field names of
//! [`PropertyReport`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    Monotone,
    WeaklyMonotone,
    ShiftInvariant,
    Homogeneous,
    Idempotent,
    Averaging,
    Internal,
    /// The sufficient condition `w(t) ≥ w'(t)(b − t)` for a mixture
    /// function to be monotone.
    MixtureCondition,
}

impl Property {
    pub const ALL: [Property; 8] = [
        Property::Monotone,
        Property::WeaklyMonotone,
        Property::ShiftInvariant,
        Property::Homogeneous,
        Property::Idempotent,
        Property::Averaging,
        Property::Internal,
        Property::MixtureCondition,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Property::Monotone => "monotone",
            Property::WeaklyMonotone => "weakly-monotone",
            Property::ShiftInvariant => "shift-invariant",
            Property::Homogeneous => "homogeneous",
            Property::Idempotent => "idempotent",
            Property::Averaging => "averaging",
            Property::Internal => "internal",
            Property::MixtureCondition => "mixture-condition",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = match s {
            "weak-monotone" | "weakly-monotonic" => "weakly-monotone",
            "monotonic" => "monotone",
            other => other,
        };
        Property::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::ReportParse(format!("unknown property '{s}'")))
    }
}

/// Sampling never proves a property, so the positive verdict is only
/// "no violation found".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    NoViolationFound,
    Violated,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::NoViolationFound => "no-violation-found",
            Verdict::Violated => "violated",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The concrete point(s) at which a property failed.
///
/// `x` is always present. `y` is the second point for pairwise checks
/// (monotonicity), `a` the shift or scale factor, and `values` the
/// function values compared, in the order they were computed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub x: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub property: Property,
    pub verdict: Verdict,
    pub aggregator: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub samples_used: usize,
    pub seed: u64,
    pub tol: f64,
    /// Sample points at which the aggregator returned an error.
    #[serde(default)]
    pub inconclusive: usize,
}

impl PropertyReport {
    pub fn is_violated(&self) -> bool {
        self.verdict == Verdict::Violated
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialises")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::ReportParse(e.to_string()))
    }

    pub fn to_line(&self) -> String {
        let mut out = format!(
            "property={} verdict={} aggregator={} samples={} seed={} tol={} inconclusive={}",
            self.property,
            self.verdict,
            self.aggregator.replace(char::is_whitespace, "_"),
            self.samples_used,
            self.seed,
            self.tol,
            self.inconclusive,
        );
        if let Some(w) = &self.witness {
            out.push_str(&format!(" x={}", join(&w.x)));
            if let Some(y) = &w.y {
                out.push_str(&format!(" y={}", join(y)));
            }
            if let Some(a) = w.a {
                out.push_str(&format!(" a={a}"));
            }
            out.push_str(&format!(" values={}", join(&w.values)));
        }
        out
    }

    pub fn from_line(line: &str) -> Result<Self> {
        let bad = |m: String| Error::ReportParse(m);
        let mut property = None;
        let mut verdict = None;
        let mut aggregator = None;
        let mut samples_used = None;
        let mut seed = None;
        let mut tol = None;
        let mut inconclusive = 0;
        let (mut x, mut y, mut a, mut values) = (None, None, None, None);
        for field in line.split_whitespace() {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| bad(format!("field '{field}' has no '='")))?;
            let num = |v: &str| v.parse::<f64>().map_err(|_| bad(format!("bad number '{v}'")));
            let int = |v: &str| v.parse::<u64>().map_err(|_| bad(format!("bad integer '{v}'")));
            match key {
                "property" => property = Some(value.parse::<Property>()?),
                "verdict" => {
                    verdict = Some(match value {
                        "violated" => Verdict::Violated,
                        "no-violation-found" => Verdict::NoViolationFound,
                        other => return Err(bad(format!("unknown verdict '{other}'"))),
                    })
                }
                "aggregator" => aggregator = Some(value.to_string()),
                "samples" => samples_used = Some(int(value)? as usize),
                "seed" => seed = Some(int(value)?),
                "tol" => tol = Some(num(value)?),
                "inconclusive" => inconclusive = int(value)? as usize,
                "x" => x = Some(split(value)?),
                "y" => y = Some(split(value)?),
                "a" => a = Some(num(value)?),
                "values" => values = Some(split(value)?),
                other => return Err(bad(format!("unknown field '{other}'"))),
            }
        }
        let missing = |k: &str| bad(format!("missing field '{k}'"));
        let witness = match x {
            Some(x) => Some(Witness {
                x,
                y,
                a,
                values: values.ok_or_else(|| missing("values"))?,
            }),
            None => None,
        };
        Ok(Self {
            property: property.ok_or_else(|| missing("property"))?,
            verdict: verdict.ok_or_else(|| missing("verdict"))?,
            aggregator: aggregator.ok_or_else(|| missing("aggregator"))?,
            witness,
            samples_used: samples_used.ok_or_else(|| missing("samples"))?,
            seed: seed.ok_or_else(|| missing("seed"))?,
            tol: tol.ok_or_else(|| missing("tol"))?,
            inconclusive,
        })
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_line())
    }
}

fn join(v: &[f64]) -> String {
    v.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(",")
}

fn split(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| Error::ReportParse(format!("bad number '{t}'")))
        })
        .collect()
}
