//! The pairing ratio `ℛ_{p,α}(g, h) = |⟨g, h⟩_α| / (‖g‖_{p,α} ‖h‖_{p',α})`
//! in its closed forms (monomials, tensor products, quadratic exponentials)
//! and the critical-point analysis of the Gaussian family.

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::constants::{log_gamma, stirling_gap, ExponentPair};
use crate::error::{domain, Error, Result};
use crate::fock::{poly_norm, poly_pairing, FockWeight, HoloPoly, MultiIndex, QuadExp};
use crate::quadrature::PolarGrid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RatioMethod {
    ExactMonomial,
    StirlingForm,
    GaussianClosedForm,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridInfo {
    pub n_r: usize,
    pub n_theta: usize,
    pub radius: f64,
}

impl From<&PolarGrid> for GridInfo {
    fn from(g: &PolarGrid) -> Self {
        Self {
            n_r: g.n_r(),
            n_theta: g.n_theta(),
            radius: g.radius(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioResult {
    pub value: f64,
    pub method: RatioMethod,
    pub grid: Option<GridInfo>,
}

impl RatioResult {
    /// The proven ceiling `ℛ ≤ C_p^n`, with relative slack for rounding.
    pub fn within_upper_bound(&self, p: &ExponentPair, n: usize) -> bool {
        self.value <= p.c_p().powi(n as i32) * (1.0 + 1e-9)
    }
}

/// `ℛ_{p,α}(f, h)` with the norms by quadrature and the pairing exact.
pub fn ratio_general(
    f: &HoloPoly,
    h: &HoloPoly,
    p: &ExponentPair,
    w: &FockWeight,
    grid: &PolarGrid,
) -> Result<RatioResult> {
    if f.is_zero() || h.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let pairing = poly_pairing(f, h, w)?;
    let nf = poly_norm(f, p.p(), w, grid)?;
    let nh = poly_norm(h, p.conj(), w, grid)?;
    Ok(RatioResult {
        value: pairing.norm() / (nf * nh),
        method: RatioMethod::Quadrature,
        grid: Some(grid.into()),
    })
}

/// `ln ℛ(z^k, z^k) = (k/2) ln(pp'/4) + ln Γ(k+1) - ln Γ(kp/2+1)/p - ln Γ(kp'/2+1)/p'`.
pub fn ln_ratio_monomial(k: u64, p: &ExponentPair) -> f64 {
    if k == 0 {
        return 0.0;
    }
    let kf = k as f64;
    let lg = |x: f64| log_gamma(x).expect("positive argument");
    0.5 * kf * (p.p() * p.conj() / 4.0).ln() + lg(kf + 1.0)
        - p.inv_p() * lg(kf * p.p() / 2.0 + 1.0)
        - p.inv_conj() * lg(kf * p.conj() / 2.0 + 1.0)
}

/// `ℛ_{p,α}(z^k, z^k)`, which does not depend on `α`.
pub fn ratio_monomial(k: u64, p: &ExponentPair) -> f64 {
    ln_ratio_monomial(k, p).exp()
}

/// The same ratio written as `√C_p · exp(S(k) - S(kp/2)/p - S(kp'/2)/p')`.
pub fn ratio_monomial_stirling(k: u64, p: &ExponentPair) -> Result<f64> {
    Ok(p.c_p().sqrt() * stirling_gap(p, k)?.exp())
}

/// Product of the one-variable monomial ratios over the coordinates of `j`.
pub fn ratio_monomial_tensor(j: &MultiIndex, p: &ExponentPair) -> f64 {
    j.components()
        .iter()
        .map(|&k| ln_ratio_monomial(k as u64, p))
        .sum::<f64>()
        .exp()
}

fn require_disk(c: Complex64, name: &str) -> Result<()> {
    if !(c.norm() < 1.0) {
        return domain(format!("|{name}| = {} must be < 1", c.norm()));
    }
    Ok(())
}

/// Closed-form `ℛ_{p,α}(g, h)` for `g = exp(αaz + (α/2)cz²)`, `h = exp(αbz + (α/2)dz²)`.
pub fn ratio_gaussian(g: &QuadExp, h: &QuadExp, p: &ExponentPair) -> Result<f64> {
    if g.alpha() != h.alpha() {
        return domain("quadratic exponentials built for different alpha");
    }
    let (a, c, b, d) = (g.a(), g.c(), h.a(), h.c());
    let one = Complex64::new(1.0, 0.0);
    let sc = 1.0 - c.norm_sqr();
    let sd = 1.0 - d.norm_sqr();
    let cross = one - c * d.conj();
    let prefactor = 0.5 * (p.inv_p() * sc.ln() + p.inv_conj() * sd.ln() - cross.norm().ln());
    let bc2 = (b * b).conj();
    let expo = ((2.0 * a * b.conj() + a * a * d.conj() + bc2 * c) / cross
        - (a.norm_sqr() + a * a * c.conj()) / sc
        - (b.norm_sqr() + bc2 * d) / sd)
        .re;
    Ok((prefactor + 0.5 * g.alpha() * expo).exp())
}

/// The exponent of the Gaussian ratio as a function of `a` with `(b, c, d)`
/// fixed; its supremum over `a` is zero.
pub fn gaussian_exponent(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> f64 {
    let one = Complex64::new(1.0, 0.0);
    let bc2 = (b * b).conj();
    ((2.0 * a * b.conj() + a * a * d.conj() + bc2 * c) / (one - c * d.conj())
        - (a.norm_sqr() + a * a * c.conj()) / (1.0 - c.norm_sqr())
        - (b.norm_sqr() + bc2 * d) / (1.0 - d.norm_sqr()))
    .re
}

/// `(∂f/∂x, ∂f/∂y)` of [`gaussian_exponent`] at `a = x + iy`, from
/// `½(f_x + i f_y) = (b + ā d)/(1 - c̄ d) - (ā c + a)/(1 - |c|²)`.
pub fn gaussian_gradient(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> (f64, f64) {
    let one = Complex64::new(1.0, 0.0);
    let half = (b + a.conj() * d) / (one - c.conj() * d) - (a.conj() * c + a) / (1.0 - c.norm_sqr());
    (2.0 * half.re, 2.0 * half.im)
}

/// The unique maximizer `a₀ = (b̄(d - c) + b(1 - c d̄)) / (1 - |d|²)` of
/// [`gaussian_exponent`].
pub fn gaussian_critical_point(b: Complex64, c: Complex64, d: Complex64) -> Result<Complex64> {
    require_disk(c, "c")?;
    require_disk(d, "d")?;
    let one = Complex64::new(1.0, 0.0);
    Ok((b.conj() * (d - c) + b * (one - c * d.conj())) / (1.0 - d.norm_sqr()))
}

/// Hessian of [`gaussian_exponent`] in `(x, y)`; constant in `a`.
pub fn gaussian_hessian(c: Complex64, d: Complex64) -> Result<[[f64; 2]; 2]> {
    require_disk(c, "c")?;
    require_disk(d, "d")?;
    let one = Complex64::new(1.0, 0.0);
    let sc = 1.0 - c.norm_sqr();
    let m = d / (one - c.conj() * d);
    let h11 = 2.0 * (m - (one + c) / sc).re;
    let h12 = 2.0 * (m - c / sc).im;
    let h22 = 2.0 * (-m - (one - c) / sc).re;
    Ok([[h11, h12], [h12, h22]])
}

pub fn is_negative_definite(h: &[[f64; 2]; 2]) -> bool {
    h[0][0] < 0.0 && h[0][0] * h[1][1] - h[0][1] * h[1][0] > 0.0
}

/// The one-parameter reduction of the Gaussian-family supremum.
///
/// For each `y ∈ [0, 1)` the best `x` is `x(y) = 2y / ((2 - p')y² + p')`, and
/// the squared ratio there is
/// `g(y) = ((p')² - (2 - p')²y²)^{1/p} ((2 - p')y² + p')^{1 - 2/p} / p'`,
/// which extends continuously to `g(1) = C_p`.
#[derive(Debug, Clone, Copy)]
pub struct GaussianReduction {
    p: ExponentPair,
}

pub fn gaussian_family_reduction(p: &ExponentPair) -> GaussianReduction {
    GaussianReduction { p: *p }
}

impl GaussianReduction {
    pub fn x_of_y(&self, y: f64) -> f64 {
        let q = self.p.conj();
        2.0 * y / ((2.0 - q) * y * y + q)
    }

    pub fn g_of_y(&self, y: f64) -> f64 {
        let q = self.p.conj();
        let t = 2.0 - q;
        (q * q - t * t * y * y).powf(self.p.inv_p()) * (t * y * y + q).powf(1.0 - 2.0 / self.p.p()) / q
    }

    /// `g(1)`, approached only in the limit `|c|, |d| → 1`.
    pub fn sup(&self) -> f64 {
        self.g_of_y(1.0)
    }

    pub fn sup_attained(&self) -> bool {
        false
    }
}

/// Squared ratio on the reduced domain, parameterized by `1 - x` and `1 - y`
/// so points near the corner keep full precision.
fn reduced_sq_ratio(p: &ExponentPair, ex: f64, ey: f64) -> f64 {
    let one_minus_x2 = ex * (2.0 - ex);
    let one_minus_y2 = ey * (2.0 - ey);
    let one_minus_xy = ex + ey - ex * ey;
    (p.inv_p() * one_minus_x2.ln() + p.inv_conj() * one_minus_y2.ln() - one_minus_xy.ln()).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianSup {
    pub value: f64,
    pub x: f64,
    pub y: f64,
    pub not_attained: bool,
    pub evaluations: usize,
}

const GOLDEN: f64 = 0.618_033_988_749_894_8;
const MAX_HALVINGS: u32 = 60;

/// Numerical supremum of `ℛ_{p,α}` over quadratic exponential pairs.
///
/// With the linear coefficients eliminated the ratio reduces to
/// `√((1 - x²)^{1/p} (1 - y²)^{1/p'} / (1 - xy))` on `[0, 1)²`. The search
/// moves `y` toward 1 by halving `1 - y`, maximizes over `x` by golden
/// section in `-ln(1 - x)`, and stops once successive maxima differ by less
/// than `tol / 2` (the deficit shrinks geometrically, so the remaining gap is
/// bounded by the last step).
pub fn gaussian_family_sup(p: &ExponentPair, alpha: f64, tol: f64) -> Result<GaussianSup> {
    if !(tol > 0.0) {
        return domain(format!("tolerance must be > 0, got {tol}"));
    }
    if !(alpha > 0.0) {
        return domain(format!("alpha must be > 0, got {alpha}"));
    }
    let mut evaluations = 0usize;
    let mut prev: Option<f64> = None;
    for m in 1..=MAX_HALVINGS {
        let ey = 0.5f64.powi(m as i32);
        let mut f = |s: f64| {
            evaluations += 1;
            reduced_sq_ratio(p, (-s).exp(), ey)
        };
        let (mut lo, mut hi) = (0.0, 80.0);
        let mut x1 = hi - GOLDEN * (hi - lo);
        let mut x2 = lo + GOLDEN * (hi - lo);
        let mut f1 = f(x1);
        let mut f2 = f(x2);
        while hi - lo > 1e-9 {
            if f1 < f2 {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + GOLDEN * (hi - lo);
                f2 = f(x2);
            } else {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - GOLDEN * (hi - lo);
                f1 = f(x1);
            }
        }
        let s = 0.5 * (lo + hi);
        let value = f(s).sqrt();
        if let Some(before) = prev {
            if m >= 3 && (value - before).abs() < 0.5 * tol {
                return Ok(GaussianSup {
                    value,
                    x: 1.0 - (-s).exp(),
                    y: 1.0 - ey,
                    not_attained: true,
                    evaluations,
                });
            }
        }
        prev = Some(value);
    }
    Err(Error::ConvergenceFailure(format!(
        "Gaussian-family search did not reach tolerance {tol:e} after {MAX_HALVINGS} halvings"
    )))
}

/// Largest closed-form ratio over `count` random quadratic exponential pairs
/// with parameters drawn from the full complex domain.
pub fn gaussian_spot_check(
    p: &ExponentPair,
    alpha: f64,
    count: usize,
    rng: &mut impl Rng,
) -> Result<f64> {
    let mut best = 0.0f64;
    let disk = |rng: &mut dyn rand::RngCore| {
        let r: f64 = rng.gen::<f64>().sqrt() * 0.999;
        Complex64::from_polar(r, rng.gen::<f64>() * std::f64::consts::TAU)
    };
    for _ in 0..count {
        let a = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let b = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let c = disk(rng);
        let d = disk(rng);
        let g = QuadExp::new(a, c, alpha)?;
        let h = QuadExp::new(b, d, alpha)?;
        best = best.max(ratio_gaussian(&g, &h, p)?);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pair(p: f64) -> ExponentPair {
        ExponentPair::new(p).unwrap()
    }

    #[test]
    fn monomial_ratio_examples() {
        for p in [1.5, 3.0, 4.0] {
            assert_eq!(ratio_monomial(0, &pair(p)), 1.0);
        }
        // (4/3)^{1/2} Γ(2) / (Γ(3)^{1/4} Γ(5/3)^{3/4}), 30-digit reference.
        assert!((ratio_monomial(1, &pair(4.0)) - 1.048_426_392_061_078).abs() < 1e-13);
        for k in [1, 5, 40, 300] {
            assert!((ratio_monomial(k, &pair(2.0)) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn stirling_form_agrees() {
        for p in [1.2, 1.5, 3.0, 4.0, 9.0] {
            let e = pair(p);
            for k in 1..=200 {
                let direct = ratio_monomial(k, &e);
                let st = ratio_monomial_stirling(k, &e).unwrap();
                assert!((direct - st).abs() < 1e-11, "p={p} k={k}: {direct} vs {st}");
            }
        }
    }

    #[test]
    fn tensor_examples() {
        let e = pair(4.0);
        assert_eq!(ratio_monomial_tensor(&MultiIndex::zero(3), &e), 1.0);
        let v = ratio_monomial_tensor(&MultiIndex::new(vec![1, 1]), &e);
        assert!((v - 1.099_197_899_570_209).abs() < 1e-13);
        let v = ratio_monomial_tensor(&MultiIndex::new(vec![3, 7]), &e);
        assert!(v < e.c_p());
    }

    #[test]
    fn gaussian_ratio_examples() {
        let e = pair(3.0);
        for t in [0.0, 0.3, -0.8] {
            let g = QuadExp::new(c(0.0, 0.0), c(t, 0.0), 1.0).unwrap();
            assert!((ratio_gaussian(&g, &g, &e).unwrap() - 1.0).abs() < 1e-14);
        }
        let g = QuadExp::new(c(0.0, 0.0), c(0.5, 0.0), 1.0).unwrap();
        let h = QuadExp::new(c(0.0, 0.0), c(-0.5, 0.0), 1.0).unwrap();
        let v = ratio_gaussian(&g, &h, &pair(2.0)).unwrap();
        assert!((v - (0.75f64 / 1.25).sqrt()).abs() < 1e-15);
        let k = QuadExp::new(c(1.0, 0.0), c(0.0, 0.0), 1.0).unwrap();
        for p in [1.5, 2.0, 4.0] {
            assert!((ratio_gaussian(&k, &k, &pair(p)).unwrap() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn critical_point_examples() {
        let b = c(0.7, -1.1);
        let d = c(0.2, 0.4);
        assert!((gaussian_critical_point(b, d, d).unwrap() - b).norm() < 1e-15);
        let a0 = gaussian_critical_point(c(1.0, 0.0), c(0.0, 0.0), c(0.5, 0.0)).unwrap();
        assert!((a0 - c(2.0, 0.0)).norm() < 1e-15);
        assert!(gaussian_critical_point(b, c(1.0, 0.0), d).is_err());
    }

    #[test]
    fn critical_point_by_finite_differences() {
        let (b, cc, d) = (c(1.0, 0.0), c(0.0, 0.0), c(0.5, 0.0));
        let a0 = gaussian_critical_point(b, cc, d).unwrap();
        let h = 1e-6;
        let fx = (gaussian_exponent(a0 + h, b, cc, d) - gaussian_exponent(a0 - h, b, cc, d)) / (2.0 * h);
        let fy = (gaussian_exponent(a0 + c(0.0, h), b, cc, d)
            - gaussian_exponent(a0 - c(0.0, h), b, cc, d))
            / (2.0 * h);
        assert!(fx.abs() < 1e-8 && fy.abs() < 1e-8);
        assert!(gaussian_exponent(a0, b, cc, d).abs() < 1e-14);
    }

    #[test]
    fn hessian_examples() {
        let h = gaussian_hessian(c(0.0, 0.0), c(0.0, 0.0)).unwrap();
        assert_eq!(h, [[-2.0, 0.0], [0.0, -2.0]]);
        let h = gaussian_hessian(c(0.9, 0.0), c(-0.9, 0.0)).unwrap();
        assert!(is_negative_definite(&h));
        let mut prev = f64::NEG_INFINITY;
        for t in [0.9, 0.99, 0.999, 0.9999] {
            let h11 = gaussian_hessian(c(0.0, 0.0), c(t, 0.0)).unwrap()[0][0];
            assert!(h11 < 0.0 && h11 > prev);
            prev = h11;
        }
        assert!(prev > -1e-3);
    }

    #[test]
    fn hessian_matches_finite_differences() {
        let (a, b, cc, d) = (c(0.3, 0.2), c(-0.4, 0.9), c(0.9, 0.0), c(-0.9, 0.0));
        let h = gaussian_hessian(cc, d).unwrap();
        let step = 1e-4;
        let f = |x: f64, y: f64| gaussian_exponent(a + c(x, y), b, cc, d);
        let fxx = (f(step, 0.0) - 2.0 * f(0.0, 0.0) + f(-step, 0.0)) / (step * step);
        let fyy = (f(0.0, step) - 2.0 * f(0.0, 0.0) + f(0.0, -step)) / (step * step);
        let fxy = (f(step, step) - f(step, -step) - f(-step, step) + f(-step, -step)) / (4.0 * step * step);
        assert!((fxx - h[0][0]).abs() < 1e-6 * h[0][0].abs().max(1.0));
        assert!((fyy - h[1][1]).abs() < 1e-6 * h[1][1].abs().max(1.0));
        assert!((fxy - h[0][1]).abs() < 1e-6 * h[0][1].abs().max(1.0));
    }

    #[test]
    fn reduction_examples() {
        for p in [1.2, 1.5, 3.0, 4.0] {
            let r = gaussian_family_reduction(&pair(p));
            assert!((r.g_of_y(0.0) - 1.0).abs() < 1e-15);
            assert!((r.sup() - pair(p).c_p()).abs() < 1e-12);
            assert!(!r.sup_attained());
        }
        let r4 = gaussian_family_reduction(&pair(4.0));
        assert!((r4.x_of_y(1.0) - 1.0).abs() < 1e-15);
        assert!((r4.sup() - 1.139_753_528_477_389).abs() < 1e-12);
    }

    #[test]
    fn reduction_matches_reduced_ratio() {
        for p in [1.5, 3.0, 4.0] {
            let e = pair(p);
            let r = gaussian_family_reduction(&e);
            for y in [0.1, 0.5, 0.9, 0.99] {
                let x = r.x_of_y(y);
                let direct = reduced_sq_ratio(&e, 1.0 - x, 1.0 - y);
                assert!((direct - r.g_of_y(y)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn family_sup_examples() {
        let s = gaussian_family_sup(&pair(2.0), 1.0, 1e-6).unwrap();
        assert!((s.value - 1.0).abs() < 1e-6);
        for p in [1.5, 4.0] {
            let s = gaussian_family_sup(&pair(p), 1.0, 1e-4).unwrap();
            assert!((s.value - pair(p).c_p().sqrt()).abs() < 1e-4, "p={p}: {}", s.value);
            assert!(s.value <= pair(p).c_p().sqrt() + 1e-14);
            assert!(s.not_attained && s.y < 1.0 && s.x < 1.0);
        }
        assert!(gaussian_family_sup(&pair(3.0), 1.0, 0.0).is_err());
    }
}
