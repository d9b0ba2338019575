use serde::{Deserialize, Serialize};
use std::fmt;

use crate::constants::log_gamma;
use crate::error::{domain, Error, Result};

/// The Gaussian weight `γⁿ_α` on `ℂⁿ`: variance parameter `α` and dimension `n`.
///
/// Norms on `ℋⁿ_{p,α}` integrate against the dilated measure `γⁿ_{αp/2}`;
/// the pairing `⟨f, g⟩_α` uses `γⁿ_α` itself.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FockWeight {
    alpha: f64,
    n: usize,
}

impl FockWeight {
    pub fn new(alpha: f64, n: usize) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return domain(format!("alpha must be finite and > 0, got {alpha}"));
        }
        if n == 0 {
            return domain("dimension n must be >= 1");
        }
        Ok(Self { alpha, n })
    }

    /// One complex dimension.
    pub fn line(alpha: f64) -> Result<Self> {
        Self::new(alpha, 1)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub(crate) fn require_line(&self) -> Result<()> {
        if self.n != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: self.n,
            });
        }
        Ok(())
    }

    pub(crate) fn require_dim(&self, n: usize) -> Result<()> {
        if self.n != n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: n,
            });
        }
        Ok(())
    }
}

/// A multi-index `(j₁, …, jₙ)` of non-negative integers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(components: Vec<u32>) -> Self {
        Self(components)
    }

    pub fn single(j: u32) -> Self {
        Self(vec![j])
    }

    pub fn zero(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[u32] {
        &self.0
    }

    /// `|j| = Σ jₖ`.
    pub fn total(&self) -> u64 {
        self.0.iter().map(|&j| j as u64).sum()
    }

    /// `ln j! = Σ ln jₖ!`.
    pub fn ln_factorial(&self) -> f64 {
        self.0.iter().map(|&j| ln_factorial(j)).sum()
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, j) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{j}")?;
        }
        write!(f, ")")
    }
}

pub(crate) fn ln_factorial(j: u32) -> f64 {
    if j < 2 {
        0.0
    } else {
        log_gamma(j as f64 + 1.0).expect("positive argument")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_validation() {
        assert!(FockWeight::new(0.0, 1).is_err());
        assert!(FockWeight::new(-1.0, 1).is_err());
        assert!(FockWeight::new(1.0, 0).is_err());
        assert!(FockWeight::new(f64::NAN, 1).is_err());
        assert!(FockWeight::new(2.0, 3).is_ok());
    }

    #[test]
    fn multi_index_bookkeeping() {
        let j = MultiIndex::new(vec![3, 0, 2]);
        assert_eq!(j.total(), 5);
        assert!((j.ln_factorial() - 12f64.ln()).abs() < 1e-14);
        assert_eq!(j.to_string(), "(3,0,2)");
    }
}
