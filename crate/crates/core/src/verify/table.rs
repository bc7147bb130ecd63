use std::fmt;

use serde::{Deserialize, Serialize};

use super::{check_weak_monotonicity, PropertyReport, SamplerConfig};
use crate::catalog::lehmer_handle;
use crate::error::{Error, Result};
use crate::means::lehmer_max_args;

/// What the arity bound says about a cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Theory {
    /// `n` is within the bound, so weak monotonicity is guaranteed.
    WithinBound,
    /// `n` exceeds the bound. The bound is only sufficient, so this is not
    /// a claim of failure.
    BeyondBound,
    /// `q ∈ (0, 1)`: not weakly monotone, no bound applies.
    Excluded,
}

impl Theory {
    fn short(self) -> &'static str {
        match self {
            Theory::WithinBound => "in",
            Theory::BeyondBound => "out",
            Theory::Excluded => "excl",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCell {
    pub n: usize,
    pub theory: Theory,
    pub empirical: PropertyReport,
}

impl BoundCell {
    /// A violation inside the guaranteed region would contradict the bound.
    pub fn is_coherent(&self) -> bool {
        !(self.theory == Theory::WithinBound && self.empirical.is_violated())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub q: f64,
    /// `None` for excluded `q`; may be `+∞`.
    pub bound: Option<f64>,
    pub cells: Vec<BoundCell>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundTable {
    pub n_max: usize,
    pub rows: Vec<BoundRow>,
}

impl BoundTable {
    pub fn is_coherent(&self) -> bool {
        self.rows.iter().flat_map(|r| &r.cells).all(BoundCell::is_coherent)
    }

    pub fn cell(&self, q: f64, n: usize) -> Option<&BoundCell> {
        self.rows
            .iter()
            .find(|r| r.q == q)
            .and_then(|r| r.cells.iter().find(|c| c.n == n))
    }
}

/// For each `q` and each arity `2 ≤ n ≤ n_max`, compares the theoretical
/// arity bound of the Lehmer mean with a sampled weak-monotonicity check
/// on `[0, 1]ⁿ`.
pub fn lehmer_bound_table(q_values: &[f64], n_max: usize, cfg: &SamplerConfig) -> Result<BoundTable> {
    if n_max < 2 {
        return Err(Error::InvalidConfig(format!("n_max must be at least 2, got {n_max}")));
    }
    let mut rows = Vec::with_capacity(q_values.len());
    for &q in q_values {
        if !q.is_finite() {
            return Err(Error::InvalidConfig(format!("q must be finite, got {q}")));
        }
        let bound = match lehmer_max_args(q) {
            Ok(b) => Some(b),
            Err(Error::LehmerBoundExcluded { .. }) => None,
            Err(e) => return Err(e),
        };
        let mut cells = Vec::with_capacity(n_max - 1);
        for n in 2..=n_max {
            let theory = match bound {
                None => Theory::Excluded,
                Some(b) if n as f64 <= b => Theory::WithinBound,
                Some(_) => Theory::BeyondBound,
            };
            let empirical = check_weak_monotonicity(&lehmer_handle(q, n), cfg)?;
            cells.push(BoundCell { n, theory, empirical });
        }
        rows.push(BoundRow { q, bound, cells });
    }
    Ok(BoundTable { n_max, rows })
}

impl fmt::Display for BoundTable {
    /// One row per `q`. Cells read `theory/empirical`, where theory is
    /// `in`, `out` or `excl` and empirical is `ok` (no violation found) or
    /// `VIOL`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = 9;
        write!(f, "{:>8} {:>10}", "q", "bound")?;
        for n in 2..=self.n_max {
            write!(f, " {:>width$}", format!("n={n}"))?;
        }
        writeln!(f)?;
        for row in &self.rows {
            let bound = match row.bound {
                None => "excluded".to_string(),
                Some(b) if b.is_infinite() => "inf".to_string(),
                Some(b) => format!("{:.4}", b),
            };
            write!(f, "{:>8} {:>10}", row.q, bound)?;
            for cell in &row.cells {
                let emp = if cell.empirical.is_violated() { "VIOL" } else { "ok" };
                write!(f, " {:>width$}", format!("{}/{}", cell.theory.short(), emp))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_table() {
        let cfg = SamplerConfig::default().with_samples(20_000).with_seed(3);
        let t = lehmer_bound_table(&[0.5, 1.0, 3.0], 5, &cfg).unwrap();
        assert!(t.is_coherent());
        assert_eq!(t.rows[0].bound, None);
        assert_eq!(t.cell(0.5, 2).unwrap().theory, Theory::Excluded);
        assert_eq!(t.rows[1].bound, Some(2.0));
        let c = t.cell(1.0, 2).unwrap();
        assert_eq!(c.theory, Theory::WithinBound);
        assert!(!c.empirical.is_violated());
        let c = t.cell(1.0, 3).unwrap();
        assert_eq!(c.theory, Theory::BeyondBound);
        assert!(c.empirical.is_violated());
        let c = t.cell(3.0, 5).unwrap();
        assert_eq!(c.theory, Theory::WithinBound);
        assert!(!c.empirical.is_violated());

        let text = t.to_string();
        assert_eq!(text.lines().count(), 4);
        assert!(text.contains("excluded"));
        assert!(text.contains("out/VIOL"));
    }

    #[test]
    fn rejects_bad_arguments() {
        let cfg = SamplerConfig::default().with_samples(10);
        assert!(lehmer_bound_table(&[1.0], 1, &cfg).is_err());
        assert!(lehmer_bound_table(&[f64::NAN], 3, &cfg).is_err());
    }
}
