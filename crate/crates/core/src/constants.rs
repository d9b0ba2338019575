//! Exponent bookkeeping, the duality constant `C_p`, `ln Γ` on the positive
//! reals, and the exact Stirling remainder `S(x)`.

use std::f64::consts::{LN_2, PI};

use crate::error::{domain, Result};
use crate::quadrature::gauss_legendre::GaussLegendre;

/// `ln(2π) / 2`.
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// A Hölder exponent `p ∈ (1, ∞)` together with its conjugate and `C_p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentPair {
    p: f64,
    p_conj: f64,
    c_p: f64,
}

impl ExponentPair {
    pub fn new(p: f64) -> Result<Self> {
        let p_conj = conjugate_exponent(p)?;
        Ok(Self {
            p,
            p_conj,
            c_p: c_p(p)?,
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// The conjugate exponent `p' = p / (p - 1)`.
    pub fn conj(&self) -> f64 {
        self.p_conj
    }

    pub fn c_p(&self) -> f64 {
        self.c_p
    }

    pub fn inv_p(&self) -> f64 {
        1.0 / self.p
    }

    /// `1/p'`, computed as `1 - 1/p` so the two reciprocals sum to one.
    pub fn inv_conj(&self) -> f64 {
        1.0 - 1.0 / self.p
    }

    /// The pair with the roles of `p` and `p'` exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            p: self.p_conj,
            p_conj: self.p,
            c_p: self.c_p,
        }
    }

    pub fn is_self_dual(&self) -> bool {
        self.p == 2.0
    }
}

fn check_exponent(p: f64) -> Result<()> {
    if !p.is_finite() || p <= 1.0 {
        return domain(format!("exponent must be finite and > 1, got {p}"));
    }
    Ok(())
}

pub fn conjugate_exponent(p: f64) -> Result<f64> {
    check_exponent(p)?;
    Ok(p / (p - 1.0))
}

/// `C_p = 2 p^{-1/p} p'^{-1/p'}`, evaluated in the log domain.
pub fn c_p(p: f64) -> Result<f64> {
    Ok(ln_c_p(p)?.exp())
}

pub(crate) fn ln_c_p(p: f64) -> Result<f64> {
    check_exponent(p)?;
    let q = p / (p - 1.0);
    Ok(LN_2 - p.ln() / p - q.ln() / q)
}

// Lanczos approximation, g = 607/128, 15 terms.
const LANCZOS_G_HALF: f64 = 5.242_187_5;
const LANCZOS_COEFFS: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_747,
    -0.491_913_816_097_620_2,
    0.339_946_499_848_118_9e-4,
    0.465_236_289_270_485_76e-4,
    -0.983_744_753_048_795_6e-4,
    0.158_088_703_224_912_5e-3,
    -0.210_264_441_724_104_88e-3,
    0.217_439_618_115_212_64e-3,
    -0.164_318_106_536_763_9e-3,
    0.844_182_239_838_527_4e-4,
    -0.261_908_384_015_814_1e-4,
    0.368_991_826_595_316_2e-5,
];

/// Below this argument `ln Γ` uses the Lanczos sum; above it the Stirling
/// series, which also gives `S(x)` without cancellation.
const STIRLING_SERIES_MIN: f64 = 10.0;

// B_{2m} / (2m (2m - 1)) for m = 1..=7.
const STIRLING_SERIES: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
];

fn stirling_series(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    STIRLING_SERIES
        .iter()
        .rev()
        .fold(0.0, |acc, &c| acc * inv2 + c)
        * inv
}

/// `ln Γ(x)` for real `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("log_gamma requires finite x > 0, got {x}"));
    }
    if x >= STIRLING_SERIES_MIN {
        return Ok((x - 0.5) * x.ln() - x + HALF_LN_2PI + stirling_series(x));
    }
    let t = x + LANCZOS_G_HALF;
    let mut ser = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        ser += c / (x + i as f64);
    }
    Ok((x + 0.5) * t.ln() - t + (2.506_628_274_631_000_7 * ser / x).ln())
}

/// The Stirling remainder `S(x) = ln Γ(x) - ½ ln 2π + ½ ln x - x ln x + x`.
///
/// This is the fast path. [`stirling_remainder_integral`] evaluates the
/// Binet-type integral representation of the same quantity.
pub fn stirling_remainder(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("stirling_remainder requires finite x > 0, got {x}"));
    }
    if x >= STIRLING_SERIES_MIN {
        return Ok(stirling_series(x));
    }
    Ok(log_gamma(x)? - HALF_LN_2PI + 0.5 * x.ln() - x * x.ln() + x)
}

/// Upper truncation of the remainder integral: `e^{-2πT} < 1e-18`.
const REMAINDER_CUTOFF: f64 = 7.0;

fn remainder_integrand(t: f64, x: f64) -> f64 {
    let u = t / x;
    // 2 arctan(u) / t, with the removable singularity at t = 0 expanded.
    let atan_over_t = if u < 1e-6 {
        (1.0 - u * u / 3.0) / x
    } else {
        u.atan() / t
    };
    2.0 * atan_over_t * t / (2.0 * PI * t).exp_m1()
}

/// `S(x) = ∫₀^∞ 2 arctan(t/x) / (e^{2πt} - 1) dt` by composite Gauss–Legendre.
///
/// Panels are graded geometrically toward `t = 0` on the scale `x`, since the
/// integrand has branch points at `t = ±ix`.
pub fn stirling_remainder_integral(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("stirling_remainder requires finite x > 0, got {x}"));
    }
    let rule = GaussLegendre::new(24);
    let mut breaks = vec![0.0];
    let mut b = (x / 64.0).min(REMAINDER_CUTOFF / 64.0);
    while b < REMAINDER_CUTOFF {
        breaks.push(b);
        b *= 2.0;
    }
    breaks.push(REMAINDER_CUTOFF);
    let total = breaks
        .windows(2)
        .map(|w| rule.integrate(w[0], w[1], |t| remainder_integrand(t, x)))
        .sum();
    Ok(total)
}

/// `S(k) - S(kp/2)/p - S(kp'/2)/p'`: strictly negative for `p ≠ 2`, zero at `p = 2`.
pub fn stirling_gap(p: &ExponentPair, k: u64) -> Result<f64> {
    if k == 0 {
        return domain("stirling_gap requires k >= 1");
    }
    if p.is_self_dual() {
        return Ok(0.0);
    }
    let k = k as f64;
    Ok(stirling_remainder(k)?
        - p.inv_p() * stirling_remainder(k * p.p() / 2.0)?
        - p.inv_conj() * stirling_remainder(k * p.conj() / 2.0)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugates() {
        assert_eq!(conjugate_exponent(2.0).unwrap(), 2.0);
        assert!((conjugate_exponent(4.0).unwrap() - 4.0 / 3.0).abs() < 1e-15);
        assert!((conjugate_exponent(1.5).unwrap() - 3.0).abs() < 1e-15);
        assert!(conjugate_exponent(1.0).is_err());
        assert!(conjugate_exponent(0.5).is_err());
        assert!(conjugate_exponent(f64::INFINITY).is_err());
        assert!(conjugate_exponent(f64::NAN).is_err());
    }

    #[test]
    fn c_p_values() {
        assert_eq!(c_p(2.0).unwrap(), 1.0);
        // 2 * 4^{-1/4} * (4/3)^{-3/4}, evaluated to 30 digits offline.
        assert!((c_p(4.0).unwrap() - 1.139_753_528_477_389).abs() < 1e-14);
        assert!((c_p(4.0 / 3.0).unwrap() - c_p(4.0).unwrap()).abs() < 1e-14);
        assert!(c_p(1.0).is_err());
    }

    #[test]
    fn exponent_pair_reciprocals() {
        for p in [1.01, 1.1, 1.5, 2.0, 3.0, 7.5, 100.0] {
            let e = ExponentPair::new(p).unwrap();
            assert!((e.inv_p() + 1.0 / e.conj() - 1.0).abs() < 1e-15);
            // C_p >= 1 with equality only at the self-dual point, and C_p < 2.
            assert!(e.c_p() >= 1.0 && e.c_p() < 2.0);
            assert_eq!(e.c_p() == 1.0, p == 2.0);
            assert_eq!(e.swapped().conj(), p);
        }
    }

    #[test]
    fn log_gamma_known_values() {
        assert!(log_gamma(1.0).unwrap().abs() < 1e-15);
        assert!((log_gamma(5.0).unwrap() - 24f64.ln()).abs() < 1e-14);
        assert!((log_gamma(0.5).unwrap() - 0.5 * PI.ln()).abs() < 1e-14);
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-1.0).is_err());
    }

    #[test]
    fn log_gamma_recurrence() {
        // ln Γ(x+1) = ln Γ(x) + ln x across the Lanczos/Stirling switch.
        let mut x = 1e-3;
        while x < 1e4 {
            let lhs = log_gamma(x + 1.0).unwrap();
            let rhs = log_gamma(x).unwrap() + x.ln();
            let scale = lhs.abs().max(1.0);
            assert!((lhs - rhs).abs() <= 1e-13 * scale, "x = {x}: {lhs} vs {rhs}");
            x *= 1.37;
        }
    }

    #[test]
    fn stirling_remainder_values() {
        // 1 - ln(2π)/2 and ln Γ(2) - ln(2π)/2 + ln2/2 - 2 ln 2 + 2.
        assert!((stirling_remainder(1.0).unwrap() - 0.081_061_466_795_327_26).abs() < 1e-14);
        assert!((stirling_remainder(2.0).unwrap() - 0.041_340_695_955_409_29).abs() < 1e-14);
        let big = stirling_remainder(1e4).unwrap();
        assert!(big > 0.0 && big < 1e-4);
        assert!(stirling_remainder(0.0).is_err());
    }

    #[test]
    fn integral_matches_identity() {
        for x in [0.5, 1.0, 2.0 / 3.0, 2.0, 10.0, 100.0, 0.01, 9.99, 10.01] {
            let quad = stirling_remainder_integral(x).unwrap();
            let ident = stirling_remainder(x).unwrap();
            assert!((quad - ident).abs() < 1e-12, "x = {x}: {quad} vs {ident}");
        }
    }

    #[test]
    fn remainder_decreasing() {
        let mut prev = f64::INFINITY;
        for i in 1..400 {
            let s = stirling_remainder(0.05 * i as f64).unwrap();
            assert!(s < prev);
            prev = s;
        }
    }

    #[test]
    fn gap_examples() {
        let two = ExponentPair::new(2.0).unwrap();
        assert_eq!(stirling_gap(&two, 7).unwrap(), 0.0);
        let four = ExponentPair::new(4.0).unwrap();
        assert!((stirling_gap(&four, 1).unwrap() + 0.018_115_652_164_183_74).abs() < 1e-13);
        let g500 = stirling_gap(&four, 500).unwrap();
        assert!(g500 < 0.0 && g500.abs() < 1e-4);
        // Leading asymptotic term (1/12 - 1/(6p^2) - 1/(6p'^2)) / k.
        let lead = (1.0 / 12.0 - 1.0 / 96.0 - 9.0 / 96.0) / 500.0;
        assert!((g500 - lead).abs() < 1e-3 * lead.abs());
        assert!(stirling_gap(&four, 0).is_err());
    }
}
