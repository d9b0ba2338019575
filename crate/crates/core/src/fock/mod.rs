//! The spaces `ℋⁿ_{p,α}` made concrete: norms, pairings, the reproducing
//! kernel, the Hölder-extremal operator `G`, and coefficient bounds.

mod poly;
mod quadexp;
mod section;
mod weight;

pub use poly::{HoloPoly, PolyJson, TermJson};
pub use quadexp::QuadExp;
pub use section::SectionTable;
pub use weight::{FockWeight, MultiIndex};

use num_complex::Complex64;
use std::f64::consts::LN_2;

use crate::constants::{conjugate_exponent, log_gamma};
use crate::error::{domain, Error, Result};
use crate::quadrature::{weighted_lp_integral, PolarGrid};

fn check_p(p: f64) -> Result<()> {
    if !(p >= 1.0) || !p.is_finite() {
        return domain(format!("exponent must be finite and >= 1, got {p}"));
    }
    Ok(())
}

/// `ln ‖z^j‖_{p,α}`, a sum of per-coordinate terms
/// `(jₖ/2) ln(2/(αp)) + ln Γ(jₖp/2 + 1) / p`.
pub fn ln_monomial_norm(j: &MultiIndex, p: f64, w: &FockWeight) -> Result<f64> {
    check_p(p)?;
    w.require_dim(j.dim())?;
    let ln_scale = (2.0 / (w.alpha() * p)).ln();
    let mut total = 0.0;
    for &jk in j.components() {
        if jk > 0 {
            let jk = jk as f64;
            total += 0.5 * jk * ln_scale + log_gamma(jk * p / 2.0 + 1.0)? / p;
        }
    }
    Ok(total)
}

pub fn monomial_norm(j: &MultiIndex, p: f64, w: &FockWeight) -> Result<f64> {
    Ok(ln_monomial_norm(j, p, w)?.exp())
}

/// `‖f‖_{p,α}` by polar quadrature (one complex dimension). Unless `p` is
/// an even integer the grid is first split at the zeros of `f`.
pub fn poly_norm(f: &HoloPoly, p: f64, w: &FockWeight, grid: &PolarGrid) -> Result<f64> {
    w.require_line()?;
    check_p(p)?;
    let coeffs = f.coeffs_1d()?;
    if f.is_zero() {
        return Ok(0.0);
    }
    let smooth = p == p.round() && p as i64 % 2 == 0;
    let adapted;
    let grid = if smooth {
        grid
    } else {
        adapted = grid.with_singular_points(&poly::roots(&coeffs))?;
        &adapted
    };
    let integral = weighted_lp_integral(|z| poly::horner(&coeffs, z), p, w, grid)?;
    Ok(integral.powf(1.0 / p))
}

/// `⟨z^j, z^j⟩_α = j! / α^{|j|}`.
pub fn ln_monomial_sq_norm(j: &MultiIndex, alpha: f64) -> f64 {
    j.ln_factorial() - j.total() as f64 * alpha.ln()
}

/// `⟨f, g⟩_α = Σ a_j b̄_j j!/α^{|j|}`, exact by orthogonality of monomials.
pub fn poly_pairing(f: &HoloPoly, g: &HoloPoly, w: &FockWeight) -> Result<Complex64> {
    w.require_dim(f.dim())?;
    w.require_dim(g.dim())?;
    let mut sum = Complex64::new(0.0, 0.0);
    for (j, a) in f.terms() {
        let b = g.coeff(j);
        if b != Complex64::new(0.0, 0.0) {
            sum += a * b.conj() * ln_monomial_sq_norm(j, w.alpha()).exp();
        }
    }
    Ok(sum)
}

/// `ψ_{j,α}(z) = √(α^{|j|}/j!) z^j`, orthonormal for `⟨·,·⟩_α`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedMonomial {
    pub index: MultiIndex,
    pub alpha: f64,
}

impl NormalizedMonomial {
    pub fn new(index: MultiIndex, alpha: f64) -> Self {
        Self { index, alpha }
    }

    pub fn coefficient(&self) -> f64 {
        (-0.5 * ln_monomial_sq_norm(&self.index, self.alpha)).exp()
    }

    pub fn to_poly(&self) -> HoloPoly {
        HoloPoly::monomial(self.index.clone(), Complex64::new(self.coefficient(), 0.0))
    }
}

/// The reproducing kernel `h_z^α(w) = exp(α Σ wₖ z̄ₖ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReproducingKernel {
    z: Vec<Complex64>,
    alpha: f64,
}

pub fn kernel_eval(z: &[Complex64], w: &FockWeight) -> Result<ReproducingKernel> {
    w.require_dim(z.len())?;
    Ok(ReproducingKernel {
        z: z.to_vec(),
        alpha: w.alpha(),
    })
}

impl ReproducingKernel {
    pub fn eval(&self, w: &[Complex64]) -> Result<Complex64> {
        if w.len() != self.z.len() {
            return Err(Error::DimensionMismatch {
                expected: self.z.len(),
                found: w.len(),
            });
        }
        let s: Complex64 = w.iter().zip(&self.z).map(|(wk, zk)| wk * zk.conj()).sum();
        Ok((self.alpha * s).exp())
    }

    /// `‖h_z^α‖_{p,α} = e^{(α/2)|z|²}`, the same for every exponent.
    pub fn norm(&self) -> f64 {
        (0.5 * self.alpha * self.z.iter().map(|z| z.norm_sqr()).sum::<f64>()).exp()
    }

    /// Taylor partial sum of total degree `≤ degree` (one variable).
    pub fn truncated(&self, degree: u32) -> Result<HoloPoly> {
        if self.z.len() != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: self.z.len(),
            });
        }
        let t = self.alpha * self.z[0].conj();
        let mut coeffs = Vec::with_capacity(degree as usize + 1);
        let mut c = Complex64::new(1.0, 0.0);
        for k in 0..=degree {
            if k > 0 {
                c = c * t / k as f64;
            }
            coeffs.push(c);
        }
        Ok(HoloPoly::from_coeffs(&coeffs))
    }
}

/// `(|f(z)|, e^{(α/2)|z|²} ‖f‖_{p,α})`; the first never exceeds the second.
pub fn pointwise_bound_check(
    f: &HoloPoly,
    z: Complex64,
    p: f64,
    w: &FockWeight,
    grid: &PolarGrid,
) -> Result<(f64, f64)> {
    w.require_line()?;
    let lhs = f.eval1(z)?.norm();
    let rhs = (0.5 * w.alpha() * z.norm_sqr()).exp() * poly_norm(f, p, w, grid)?;
    Ok((lhs, rhs))
}

/// `G_{p,α}(h)(z) = |h(z)|^{p-2} h(z) e^{-α(p/2 - 1)|z|²}`.
///
/// The output is not holomorphic for `p ≠ 2`, so it is only available as a
/// pointwise evaluator.
#[derive(Debug, Clone)]
pub struct GOperator {
    h: HoloPoly,
    p: f64,
    weight: FockWeight,
}

pub fn g_operator_eval(h: &HoloPoly, p: f64, w: &FockWeight) -> Result<GOperator> {
    if !(p > 1.0) || !p.is_finite() {
        return domain(format!("exponent must be finite and > 1, got {p}"));
    }
    w.require_dim(h.dim())?;
    if h.is_zero() {
        return Err(Error::ZeroFunction);
    }
    Ok(GOperator {
        h: h.clone(),
        p,
        weight: *w,
    })
}

impl GOperator {
    pub fn eval(&self, z: &[Complex64]) -> Result<Complex64> {
        let v = self.h.eval(z)?;
        Ok(self.apply(v, z.iter().map(|x| x.norm_sqr()).sum()))
    }

    pub fn eval1(&self, z: Complex64) -> Complex64 {
        self.apply(self.h.eval1(z).expect("one-variable source"), z.norm_sqr())
    }

    fn apply(&self, v: Complex64, r2: f64) -> Complex64 {
        let m = v.norm();
        if m == 0.0 {
            return v;
        }
        let ln_scale = (self.p - 2.0) * m.ln() - self.weight.alpha() * (self.p / 2.0 - 1.0) * r2;
        v * ln_scale.exp()
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// `‖G(h)‖_{p',α} = (p'/p)^{n/p'} ‖h‖_{p,α}^{p/p'}` given `‖h‖_{p,α}`.
    pub fn norm_from_source(&self, h_norm: f64) -> f64 {
        let q = conjugate_exponent(self.p).expect("validated exponent");
        let n = self.weight.n() as f64;
        ((n / q) * (q / self.p).ln() + (self.p / q) * h_norm.ln()).exp()
    }

    /// `‖G(h)‖_{p',α}` with `‖h‖_{p,α}` computed on `grid`.
    pub fn norm(&self, grid: &PolarGrid) -> Result<f64> {
        Ok(self.norm_from_source(poly_norm(&self.h, self.p, &self.weight, grid)?))
    }

    /// `⟨h, G(h)⟩_α = (2/p)^n ‖h‖^p_{p,α}` given `‖h‖_{p,α}`.
    pub fn source_pairing_from_norm(&self, h_norm: f64) -> f64 {
        let n = self.weight.n() as f64;
        (n * (2.0 / self.p).ln() + self.p * h_norm.ln()).exp()
    }
}

/// `λ` with `P_α G_{p,α}(ψ_j) = λ ψ_j`:
/// `(2/p)^{|j|p/2 + n} Πₖ Γ(jₖp/2 + 1) / (√j!)^p`, independent of `α`.
pub fn projection_eigenvalue(j: &MultiIndex, p: f64, w: &FockWeight) -> Result<f64> {
    check_p(p)?;
    w.require_dim(j.dim())?;
    let n = j.dim() as f64;
    let mut ln = (j.total() as f64 * p / 2.0 + n) * (LN_2 - p.ln());
    for &jk in j.components() {
        ln += log_gamma(jk as f64 * p / 2.0 + 1.0)?;
    }
    ln -= 0.5 * p * j.ln_factorial();
    Ok(ln.exp())
}

/// Sharp bound on `|a_j| / ‖f‖_{p,α}` for `f = Σ a_k z^k`:
/// `(αp/2)^{j/2} / Γ(jp/2 + 1)^{1/p}`.
pub fn taylor_coeff_bound(j: u32, p: f64, w: &FockWeight) -> Result<f64> {
    w.require_line()?;
    Ok((-ln_monomial_norm(&MultiIndex::single(j), p, w)?).exp())
}

pub fn quadexp_norm(g: &QuadExp, p: f64, w: &FockWeight) -> Result<f64> {
    check_p(p)?;
    w.require_line()?;
    if (g.alpha() - w.alpha()).abs() > 0.0 {
        return domain("quadratic exponential built for a different alpha");
    }
    Ok(g.ln_norm(p).exp())
}

#[cfg(test)]
mod tests;
