use num_complex::Complex64;
use std::f64::consts::PI;

use super::weight::ln_factorial;
use super::FockWeight;
use crate::error::{domain, Result};
use crate::quadrature::PolarGrid;

/// Orthonormal basis functions `ψ_k` sampled as sections
/// `ψ_k(z) e^{-α|z|²/2}` on a polar grid, for repeated `p`-norm evaluation of
/// one-variable polynomials given by their `ψ`-coefficients.
///
/// Since `|f|^p e^{-αp|z|²/2} = |f e^{-α|z|²/2}|^p`, one table serves every
/// exponent.
#[derive(Debug, Clone)]
pub struct SectionTable {
    alpha: f64,
    degree: usize,
    values: Vec<Complex64>,
    area: Vec<f64>,
}

impl SectionTable {
    pub fn new(weight: &FockWeight, degree: usize, grid: &PolarGrid) -> Result<Self> {
        weight.require_line()?;
        let alpha = weight.alpha();
        let stride = degree + 1;
        let n_nodes = grid.len();
        let mut values = Vec::with_capacity(n_nodes * stride);
        let mut area = Vec::with_capacity(n_nodes);
        let ln_norms: Vec<f64> = (0..=degree)
            .map(|k| 0.5 * (k as f64 * alpha.ln() - ln_factorial(k as u32)))
            .collect();
        for &(r, w) in grid.radial() {
            let ln_r = r.ln();
            let ln_env = -0.5 * alpha * r * r;
            let mags: Vec<f64> = (0..=degree)
                .map(|k| (ln_norms[k] + k as f64 * ln_r + ln_env).exp())
                .collect();
            for &(u, wt) in grid.angles() {
                let mut phase = Complex64::new(1.0, 0.0);
                for &m in &mags {
                    values.push(phase * m);
                    phase *= u;
                }
                area.push(w * wt);
            }
        }
        Ok(Self {
            alpha,
            degree,
            values,
            area,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `‖Σ cₖ ψₖ‖_{p,α}`.
    pub fn norm(&self, psi_coeffs: &[Complex64], p: f64) -> Result<f64> {
        if psi_coeffs.len() > self.degree + 1 {
            return domain(format!(
                "polynomial of degree {} exceeds table degree {}",
                psi_coeffs.len() - 1,
                self.degree
            ));
        }
        if !(p >= 1.0) {
            return domain(format!("exponent must be >= 1, got {p}"));
        }
        let stride = self.degree + 1;
        let half_p = 0.5 * p;
        let power: fn(f64, f64) -> f64 = if half_p == 1.0 {
            |m2, _| m2
        } else if half_p == 2.0 {
            |m2, _| m2 * m2
        } else {
            |m2, e| m2.powf(e)
        };
        let mut sum = 0.0;
        for (node, &w) in self.values.chunks_exact(stride).zip(&self.area) {
            let v: Complex64 = node.iter().zip(psi_coeffs).map(|(b, c)| b * c).sum();
            let m2 = v.norm_sqr();
            if m2 > 0.0 {
                sum += w * power(m2, half_p);
            }
        }
        let density = self.alpha * p / (2.0 * PI);
        Ok((density * sum).powf(1.0 / p))
    }
}
