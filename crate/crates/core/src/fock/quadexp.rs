use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::ComplexSymMatrix;

/// The quadratic exponential `z ↦ exp(α a z + (α/2) c z²)` with `|c| < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadExp {
    a: Complex64,
    c: Complex64,
    alpha: f64,
}

impl QuadExp {
    pub fn new(a: Complex64, c: Complex64, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(Error::Domain(format!("alpha must be > 0, got {alpha}")));
        }
        if !(c.norm() < 1.0) {
            return Err(Error::NotIntegrable(format!(
                "quadratic coefficient |c| = {} must be < 1",
                c.norm()
            )));
        }
        Ok(Self { a, c, alpha })
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }

    pub fn c(&self) -> Complex64 {
        self.c
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        (self.alpha * (self.a * z + 0.5 * self.c * z * z)).exp()
    }

    /// `ln ‖g‖_{p,α} = -ln(1 - |c|²)/(2p) + (α/2)(|a|² + Re(c̄a²))/(1 - |c|²)`.
    pub fn ln_norm(&self, p: f64) -> f64 {
        let s = 1.0 - self.c.norm_sqr();
        let quad = self.a.norm_sqr() + (self.c.conj() * self.a * self.a).re;
        -s.ln() / (2.0 * p) + 0.5 * self.alpha * quad / s
    }

    /// The real quadratic form behind `‖g‖^p_{p,α}`: writing `z = x₁ + i x₂`,
    /// `|g|^p dγ¹_{αp/2} = (αp/2π) exp(-(x, Mx) + 2(v, x)) dx` with
    /// `M = (αp/2)[[1 - Re c, Im c], [Im c, 1 + Re c]]` and
    /// `v = (αp/2)(Re a, -Im a)`.
    ///
    /// Built for any `c`, so integrability can be probed at `|c| ≥ 1`.
    pub fn lp_quadratic_form(
        a: Complex64,
        c: Complex64,
        alpha: f64,
        p: f64,
    ) -> Result<(ComplexSymMatrix, [f64; 2])> {
        let s = alpha * p / 2.0;
        let m = ComplexSymMatrix::from_real_rows(&[
            vec![s * (1.0 - c.re), s * c.im],
            vec![s * c.im, s * (1.0 + c.re)],
        ])?;
        Ok((m, [s * a.re, -s * a.im]))
    }
}
