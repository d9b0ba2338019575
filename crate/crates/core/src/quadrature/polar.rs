use num_complex::Complex64;
use std::f64::consts::PI;

use super::gauss_legendre::GaussLegendre;
use crate::error::{domain, Error, Result};
use crate::fock::FockWeight;

pub const DEFAULT_RADIAL_NODES: usize = 256;
pub const DEFAULT_ANGULAR_NODES: usize = 256;
/// Relative mass allowed beyond the cutoff radius.
const TAIL_EPS: f64 = 1e-17;

/// Envelope `r (1 + r)^power exp(linear·r - decay·r²)` bounding the radial
/// profile of an integrand; used to pick the cutoff radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailModel {
    pub decay: f64,
    pub linear: f64,
    pub power: f64,
}

impl TailModel {
    pub fn gaussian(decay: f64) -> Self {
        Self {
            decay,
            linear: 0.0,
            power: 0.0,
        }
    }

    fn ln_envelope(&self, r: f64) -> f64 {
        r.ln() + self.power * r.ln_1p() + self.linear * r - self.decay * r * r
    }

    /// `-(ln envelope)'`, positive past the peak.
    fn decay_slope(&self, r: f64) -> f64 {
        2.0 * self.decay * r - 1.0 / r - self.power / (1.0 + r) - self.linear
    }

    /// Smallest radius whose tail mass is below `eps` times the total.
    ///
    /// `-ln envelope` is convex, so past the peak the tail is bounded by
    /// `envelope(R) / slope(R)`.
    pub fn cutoff_radius(&self, eps: f64) -> Result<f64> {
        if !(self.decay > 0.0) || self.linear < 0.0 || self.power < 0.0 {
            return domain(format!("invalid tail model {self:?}"));
        }
        // Peak: slope(r) = 0 has a unique positive root.
        let (mut lo, mut hi) = (1e-12, 1.0);
        while self.decay_slope(hi) <= 0.0 {
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.decay_slope(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let peak = hi;
        let ln_peak = self.ln_envelope(peak);
        let width = 1.0 / self.decay.sqrt();
        let far = peak + 60.0 * width;
        let steps = 4000;
        let h = far / steps as f64;
        let rel_mass: f64 = (1..steps)
            .map(|i| (self.ln_envelope(i as f64 * h) - ln_peak).exp())
            .sum::<f64>()
            * h;
        let target = eps.ln() + ln_peak + rel_mass.ln();
        let ln_tail = |r: f64| self.ln_envelope(r) - self.decay_slope(r).ln();
        let mut lo = peak * (1.0 + 1e-9) + 1e-9;
        while self.decay_slope(lo) <= 0.0 {
            lo *= 1.01;
        }
        let mut hi = lo + width;
        while ln_tail(hi) > target {
            hi += width;
        }
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if ln_tail(mid) > target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(hi)
    }
}

/// Tensor-product rule on the disk of radius `R`: Gauss–Legendre in `r`,
/// uniform in `θ`. Weights are Lebesgue area weights `r dr dθ`.
///
/// With singular points attached, both directions switch to Gauss–Legendre
/// panels whose ends sit at the moduli and arguments of those points, so a
/// `|z - z₀|^p` cusp falls on a panel corner instead of between nodes.
#[derive(Debug, Clone)]
pub struct PolarGrid {
    n_r: usize,
    n_theta: usize,
    radius: f64,
    radial_breaks: Vec<f64>,
    angular_breaks: Vec<f64>,
    radial: Vec<(f64, f64)>,
    angles: Vec<(Complex64, f64)>,
    refine_tol: Option<f64>,
}

/// Fewest nodes on any panel.
const MIN_PANEL_NODES: usize = 8;

fn panel_nodes(total: usize, len: f64, span: f64) -> usize {
    ((total as f64 * len / span).round() as usize).max(MIN_PANEL_NODES)
}

/// Geometric layers `σ, σ², …` of the half-panel next to each singular end.
const GRADING_RATIO: f64 = 0.2;
const GRADING_LAYERS: usize = 6;
const LAYER_NODES: usize = 8;

/// Gauss–Legendre on `[a, b]`, graded geometrically towards the ends flagged
/// singular.
fn panel(n: usize, a: f64, b: f64, sing_a: bool, sing_b: bool, out: &mut Vec<(f64, f64)>) {
    let half = 0.5 * (b - a);
    let layer_rule = GaussLegendre::new(LAYER_NODES);
    let layers = |from: f64, dir: f64, out: &mut Vec<(f64, f64)>| {
        let mut outer = half * GRADING_RATIO;
        for k in 0..GRADING_LAYERS {
            let inner = if k + 1 == GRADING_LAYERS { 0.0 } else { outer * GRADING_RATIO };
            let (x, y) = (from + dir * inner, from + dir * outer);
            out.extend(layer_rule.mapped(x.min(y), x.max(y)));
            outer *= GRADING_RATIO;
        }
    };
    let lo = if sing_a { a + half * GRADING_RATIO } else { a };
    let hi = if sing_b { b - half * GRADING_RATIO } else { b };
    if sing_a {
        layers(a, 1.0, out);
    }
    out.extend(GaussLegendre::new(n).mapped(lo, hi));
    if sing_b {
        layers(b, -1.0, out);
    }
}

fn radial_rule(n_r: usize, radius: f64, breaks: &[f64]) -> Vec<(f64, f64)> {
    if breaks.is_empty() {
        return GaussLegendre::new(n_r).mapped(0.0, radius).map(|(r, w)| (r, w * r)).collect();
    }
    let mut ends = vec![0.0];
    ends.extend_from_slice(breaks);
    ends.push(radius);
    let last = ends.len() - 2;
    let mut out = Vec::new();
    for (i, pair) in ends.windows(2).enumerate() {
        let (a, b) = (pair[0], pair[1]);
        panel(panel_nodes(n_r, b - a, radius), a, b, i > 0, i < last, &mut out);
    }
    out.iter().map(|&(r, w)| (r, w * r)).collect()
}

fn angular_rule(n_theta: usize, breaks: &[f64]) -> Vec<(Complex64, f64)> {
    if breaks.is_empty() {
        let dtheta = 2.0 * PI / n_theta as f64;
        return (0..n_theta)
            .map(|j| (Complex64::from_polar(1.0, (j as f64 + 0.5) * dtheta), dtheta))
            .collect();
    }
    let mut ends = breaks.to_vec();
    ends.push(breaks[0] + 2.0 * PI);
    let mut out = Vec::new();
    for pair in ends.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        panel(panel_nodes(n_theta, b - a, 2.0 * PI), a, b, true, true, &mut out);
    }
    out.iter().map(|&(t, w)| (Complex64::from_polar(1.0, t), w)).collect()
}

/// Sorted values with near-duplicates (closer than `gap`) merged.
fn sorted_breaks(mut v: Vec<f64>, gap: f64) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup_by(|b, a| *b - *a < gap);
    v
}

impl PolarGrid {
    pub fn new(n_r: usize, n_theta: usize, radius: f64) -> Result<Self> {
        Self::with_breaks(n_r, n_theta, radius, Vec::new(), Vec::new())
    }

    fn with_breaks(
        n_r: usize,
        n_theta: usize,
        radius: f64,
        radial_breaks: Vec<f64>,
        angular_breaks: Vec<f64>,
    ) -> Result<Self> {
        if n_r == 0 || n_theta == 0 {
            return domain("grid needs at least one node per direction");
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return domain(format!("grid radius must be finite and > 0, got {radius}"));
        }
        Ok(Self {
            n_r,
            n_theta,
            radius,
            radial: radial_rule(n_r, radius, &radial_breaks),
            angles: angular_rule(n_theta, &angular_breaks),
            radial_breaks,
            angular_breaks,
            refine_tol: None,
        })
    }

    pub fn for_tail(n_r: usize, n_theta: usize, tail: &TailModel) -> Result<Self> {
        Self::new(n_r, n_theta, tail.cutoff_radius(TAIL_EPS)?)
    }

    /// Default grid for `‖f‖_{p,α}` with `deg f ≤ degree`.
    pub fn for_polynomial(weight: &FockWeight, p: f64, degree: u64) -> Result<Self> {
        Self::for_tail(DEFAULT_RADIAL_NODES, DEFAULT_ANGULAR_NODES, &polynomial_tail(weight, p, degree))
    }

    /// A grid wide enough for both `‖f‖_{p,α}` and `‖h‖_{p',α}`.
    pub fn for_ratio(weight: &FockWeight, p: f64, deg_f: u64, deg_h: u64) -> Result<Self> {
        let q = crate::constants::conjugate_exponent(p)?;
        let rf = polynomial_tail(weight, p, deg_f).cutoff_radius(TAIL_EPS)?;
        let rh = polynomial_tail(weight, q, deg_h).cutoff_radius(TAIL_EPS)?;
        Self::new(DEFAULT_RADIAL_NODES, DEFAULT_ANGULAR_NODES, rf.max(rh))
    }

    pub fn with_resolution(&self, n_r: usize, n_theta: usize) -> Result<Self> {
        let mut g = Self::with_breaks(
            n_r,
            n_theta,
            self.radius,
            self.radial_breaks.clone(),
            self.angular_breaks.clone(),
        )?;
        g.refine_tol = self.refine_tol;
        Ok(g)
    }

    /// The same grid with panels split at the moduli and arguments of
    /// `points` lying inside the disk. Points at the origin only need the
    /// radial rule and are ignored.
    pub fn with_singular_points(&self, points: &[Complex64]) -> Result<Self> {
        let gap = 1e-9 * self.radius;
        let inside: Vec<Complex64> = points
            .iter()
            .copied()
            .filter(|z| z.is_finite() && z.norm() > gap && z.norm() < self.radius - gap)
            .collect();
        let radial = sorted_breaks(inside.iter().map(|z| z.norm()).collect(), gap);
        let mut angular = sorted_breaks(
            inside.iter().map(|z| z.arg().rem_euclid(2.0 * PI)).collect(),
            1e-12,
        );
        if angular.len() > 1 && angular[0] + 2.0 * PI - angular[angular.len() - 1] < 1e-12 {
            angular.pop();
        }
        let mut g = Self::with_breaks(self.n_r, self.n_theta, self.radius, radial, angular)?;
        g.refine_tol = self.refine_tol;
        Ok(g)
    }

    /// Makes integrals also run on a grid with twice the radial nodes and
    /// fail with [`Error::GridTooCoarse`] when the relative change exceeds `tol`.
    pub fn with_refinement_check(mut self, tol: f64) -> Self {
        self.refine_tol = Some(tol);
        self
    }

    pub fn n_r(&self) -> usize {
        self.n_r
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Number of quadrature nodes, which exceeds `n_r · n_θ` when panels
    /// are split.
    pub fn len(&self) -> usize {
        self.radial.len() * self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `(r, r·w_r)` pairs: radial nodes with their weight times `r`.
    pub fn radial(&self) -> &[(f64, f64)] {
        &self.radial
    }

    /// `(e^{iθ_j}, w_θ)` pairs; the angular weights sum to `2π`.
    pub fn angles(&self) -> &[(Complex64, f64)] {
        &self.angles
    }

    /// Every node as `(z, |z|², area weight)`.
    pub fn nodes(&self) -> impl Iterator<Item = (Complex64, f64, f64)> + '_ {
        self.radial.iter().flat_map(move |&(r, w)| {
            self.angles.iter().map(move |&(u, wt)| (u * r, r * r, w * wt))
        })
    }

    fn refined(&self) -> Result<Self> {
        Self::with_breaks(
            2 * self.n_r,
            self.n_theta,
            self.radius,
            self.radial_breaks.clone(),
            self.angular_breaks.clone(),
        )
    }
}

pub(crate) fn polynomial_tail(weight: &FockWeight, p: f64, degree: u64) -> TailModel {
    TailModel {
        decay: weight.alpha() * p / 2.0,
        linear: 0.0,
        power: degree as f64 * p,
    }
}

fn lp_sum(f: &dyn Fn(Complex64) -> Complex64, p: f64, beta: f64, grid: &PolarGrid) -> f64 {
    let density = beta / PI;
    grid.nodes()
        .map(|(z, r2, w)| {
            let m = f(z).norm();
            if m == 0.0 {
                0.0
            } else {
                (p * m.ln() - beta * r2).exp() * w
            }
        })
        .sum::<f64>()
        * density
}

/// `∫_ℂ |f|^p dγ¹_{αp/2}` by polar quadrature (the `p`-th power of the norm).
pub fn weighted_lp_integral(
    f: impl Fn(Complex64) -> Complex64,
    p: f64,
    weight: &FockWeight,
    grid: &PolarGrid,
) -> Result<f64> {
    weight.require_line()?;
    if !(p >= 1.0) || !p.is_finite() {
        return domain(format!("exponent must be finite and >= 1, got {p}"));
    }
    let beta = weight.alpha() * p / 2.0;
    let value = lp_sum(&f, p, beta, grid);
    if let Some(tol) = grid.refine_tol {
        let fine = lp_sum(&f, p, beta, &grid.refined()?);
        check_refinement(value, fine, tol)?;
    }
    Ok(value)
}

fn pairing_sum(
    f: &dyn Fn(Complex64) -> Complex64,
    g: &dyn Fn(Complex64) -> Complex64,
    alpha: f64,
    grid: &PolarGrid,
) -> Complex64 {
    let density = alpha / PI;
    grid.nodes()
        .map(|(z, r2, w)| f(z) * g(z).conj() * ((-alpha * r2).exp() * w))
        .sum::<Complex64>()
        * density
}

/// `⟨f, g⟩_α = ∫_ℂ f ḡ dγ¹_α` by polar quadrature (undilated measure).
pub fn weighted_pairing(
    f: impl Fn(Complex64) -> Complex64,
    g: impl Fn(Complex64) -> Complex64,
    weight: &FockWeight,
    grid: &PolarGrid,
) -> Result<Complex64> {
    weight.require_line()?;
    let value = pairing_sum(&f, &g, weight.alpha(), grid);
    if let Some(tol) = grid.refine_tol {
        let fine = pairing_sum(&f, &g, weight.alpha(), &grid.refined()?);
        let change = (fine - value).norm();
        if change > tol * fine.norm().max(f64::MIN_POSITIVE) {
            return Err(Error::GridTooCoarse { change, tol });
        }
    }
    Ok(value)
}

fn check_refinement(coarse: f64, fine: f64, tol: f64) -> Result<()> {
    let change = (fine - coarse).abs();
    if change > tol * fine.abs().max(f64::MIN_POSITIVE) {
        return Err(Error::GridTooCoarse { change, tol });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(alpha: f64) -> FockWeight {
        FockWeight::line(alpha).unwrap()
    }

    #[test]
    fn probability_normalization() {
        for (alpha, p) in [(1.0, 2.0), (0.5, 1.5), (3.0, 4.0), (1.0, 10.0)] {
            let w = line(alpha);
            let grid = PolarGrid::for_polynomial(&w, p, 0).unwrap();
            let mass = weighted_lp_integral(|_| Complex64::new(1.0, 0.0), p, &w, &grid).unwrap();
            assert!((mass - 1.0).abs() < 1e-10, "alpha={alpha} p={p}: {mass}");
            assert!(grid.radial().iter().all(|&(_, w)| w > 0.0));
        }
    }

    #[test]
    fn second_moment() {
        let w = line(1.0);
        let grid = PolarGrid::for_polynomial(&w, 2.0, 1).unwrap();
        let v = weighted_lp_integral(|z| z, 2.0, &w, &grid).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cutoff_grows_with_degree() {
        let w = line(1.0);
        let r0 = polynomial_tail(&w, 2.0, 0).cutoff_radius(TAIL_EPS).unwrap();
        let r20 = polynomial_tail(&w, 2.0, 20).cutoff_radius(TAIL_EPS).unwrap();
        assert!(r20 > r0);
        // e^{-R^2} below 1e-17 for the bare Gaussian.
        assert!((-r0 * r0).exp() < 1e-16);
    }

    #[test]
    fn refinement_flags_coarse_grid() {
        let w = line(1.0);
        let coarse = PolarGrid::new(4, 16, 8.0).unwrap().with_refinement_check(1e-9);
        let res = weighted_lp_integral(|z| z.powu(6), 3.0, &w, &coarse);
        assert!(matches!(res, Err(Error::GridTooCoarse { .. })));
        let fine = PolarGrid::for_polynomial(&w, 3.0, 6).unwrap().with_refinement_check(1e-9);
        assert!(weighted_lp_integral(|z| z.powu(6), 3.0, &w, &fine).is_ok());
    }

    #[test]
    fn singular_points_keep_the_rule_exact() {
        let w = line(1.0);
        let pts = [
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.3, 0.4),
            Complex64::new(0.3, -0.4),
            Complex64::new(0.0, 0.0),
            Complex64::new(40.0, 0.0),
        ];
        let grid = PolarGrid::for_polynomial(&w, 2.0, 2).unwrap().with_singular_points(&pts).unwrap();
        assert!(grid.radial().iter().all(|&(_, w)| w > 0.0));
        assert!(grid.angles().iter().all(|&(_, w)| w > 0.0));
        let turn: f64 = grid.angles().iter().map(|&(_, w)| w).sum();
        assert!((turn - 2.0 * PI).abs() < 1e-13);
        let mass = weighted_lp_integral(|_| Complex64::new(1.0, 0.0), 2.0, &w, &grid).unwrap();
        assert!((mass - 1.0).abs() < 1e-12, "{mass}");
        // ‖1 + z‖²_{2,1} = 1 + 1.
        let v = weighted_lp_integral(|z| z + 1.0, 2.0, &w, &grid).unwrap();
        assert!((v - 2.0).abs() < 1e-12, "{v}");
    }

    #[test]
    fn rejects_higher_dimension() {
        let w = FockWeight::new(1.0, 2).unwrap();
        let grid = PolarGrid::new(8, 8, 5.0).unwrap();
        assert!(weighted_lp_integral(|z| z, 2.0, &w, &grid).is_err());
    }
}
