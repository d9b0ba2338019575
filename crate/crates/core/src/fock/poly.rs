use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use super::weight::MultiIndex;
use crate::error::{Error, Result};

/// A holomorphic polynomial on `ℂⁿ`, stored as its nonzero Taylor
/// coefficients at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct HoloPoly {
    n: usize,
    terms: BTreeMap<MultiIndex, Complex64>,
}

impl HoloPoly {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(index: MultiIndex, coeff: Complex64) -> Self {
        let mut p = Self::zero(index.dim());
        p.add_term(index, coeff).expect("index matches its own dimension");
        p
    }

    /// `coeffs[k]` is the coefficient of `z^k` in one variable.
    pub fn from_coeffs(coeffs: &[Complex64]) -> Self {
        let mut p = Self::zero(1);
        for (k, &c) in coeffs.iter().enumerate() {
            p.add_term(MultiIndex::single(k as u32), c).unwrap();
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn add_term(&mut self, index: MultiIndex, coeff: Complex64) -> Result<()> {
        if index.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: index.dim(),
            });
        }
        let entry = self.terms.entry(index).or_insert(Complex64::new(0.0, 0.0));
        *entry += coeff;
        if *entry == Complex64::new(0.0, 0.0) {
            self.terms.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        }
        Ok(())
    }

    pub fn coeff(&self, index: &MultiIndex) -> Complex64 {
        self.terms.get(index).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Complex64)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; zero for the zero polynomial.
    pub fn degree(&self) -> u64 {
        self.terms.keys().map(MultiIndex::total).max().unwrap_or(0)
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        let mut out = Self::zero(self.n);
        if s != Complex64::new(0.0, 0.0) {
            for (j, c) in &self.terms {
                out.terms.insert(j.clone(), c * s);
            }
        }
        out
    }

    /// Dense one-variable coefficients `[a₀, …, a_d]`.
    pub fn coeffs_1d(&self) -> Result<Vec<Complex64>> {
        if self.n != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: self.n,
            });
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.degree() as usize + 1];
        for (j, c) in &self.terms {
            out[j.components()[0] as usize] = *c;
        }
        Ok(out)
    }

    pub fn eval(&self, z: &[Complex64]) -> Result<Complex64> {
        if z.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: z.len(),
            });
        }
        let mut sum = Complex64::new(0.0, 0.0);
        for (j, c) in &self.terms {
            let mut t = *c;
            for (zk, &jk) in z.iter().zip(j.components()) {
                t *= zk.powu(jk);
            }
            sum += t;
        }
        Ok(sum)
    }

    /// Horner evaluation in one variable.
    /// Zeros of a one-variable polynomial, with multiplicity.
    pub fn roots_1d(&self) -> Result<Vec<Complex64>> {
        Ok(roots(&self.coeffs_1d()?))
    }

    pub fn eval1(&self, z: Complex64) -> Result<Complex64> {
        Ok(horner(&self.coeffs_1d()?, z))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&PolyJson::from(self)).expect("plain data serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: PolyJson = serde_json::from_str(s)
            .map_err(|e| Error::InvalidConfig(format!("polynomial JSON: {e}")))?;
        Self::try_from(raw)
    }
}

pub(crate) fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Roots of `Σ cₖ zᵏ` by Aberth–Ehrlich iteration, with multiplicity.
/// Leading zero coefficients are dropped; a constant has no roots.
pub(crate) fn roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let zero = Complex64::new(0.0, 0.0);
    let Some(top) = coeffs.iter().rposition(|&c| c != zero) else {
        return Vec::new();
    };
    let low = coeffs.iter().position(|&c| c != zero).unwrap_or(0);
    let mut out = vec![zero; low];
    let c = &coeffs[low..=top];
    let n = c.len() - 1;
    if n == 0 {
        return out;
    }
    let lead = c[n];
    let monic: Vec<Complex64> = c.iter().map(|&a| a / lead).collect();
    let deriv: Vec<Complex64> = (1..=n).map(|k| monic[k] * k as f64).collect();
    // Cauchy bound on the root moduli.
    let bound = 1.0 + monic[..n].iter().map(|a| a.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(0.5 * bound, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let pz = horner(&monic, z[i]);
            if pz == zero {
                continue;
            }
            let ratio = pz / horner(&deriv, z[i]);
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm() / z[i].norm().max(1.0));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    out.extend(z);
    out
}

/// Wire form: `{"n": int, "terms": [{"index": [j1..jn], "re": float, "im": float}]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolyJson {
    pub n: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermJson {
    pub index: Vec<u32>,
    pub re: f64,
    pub im: f64,
}

impl From<&HoloPoly> for PolyJson {
    fn from(p: &HoloPoly) -> Self {
        Self {
            n: p.n,
            terms: p
                .terms
                .iter()
                .map(|(j, c)| TermJson {
                    index: j.components().to_vec(),
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
    }
}

impl TryFrom<PolyJson> for HoloPoly {
    type Error = Error;

    fn try_from(raw: PolyJson) -> Result<Self> {
        if raw.n == 0 {
            return Err(Error::InvalidConfig("polynomial dimension must be >= 1".into()));
        }
        let mut p = HoloPoly::zero(raw.n);
        for t in raw.terms {
            if !t.re.is_finite() || !t.im.is_finite() {
                return Err(Error::InvalidConfig("non-finite coefficient".into()));
            }
            p.add_term(MultiIndex::new(t.index), Complex64::new(t.re, t.im))?;
        }
        Ok(p)
    }
}

impl Serialize for HoloPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for HoloPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PolyJson::deserialize(d)?;
        HoloPoly::try_from(raw).map_err(serde::de::Error::custom)
    }
}
