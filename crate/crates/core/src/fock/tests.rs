use super::*;
use crate::quadrature::{weighted_pairing, PolarGrid};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn line(alpha: f64) -> FockWeight {
    FockWeight::line(alpha).unwrap()
}

fn z_pow(k: u32) -> HoloPoly {
    HoloPoly::monomial(MultiIndex::single(k), c(1.0, 0.0))
}

#[test]
fn monomial_norm_examples() {
    let w = line(1.0);
    assert_eq!(monomial_norm(&MultiIndex::single(0), 3.7, &w).unwrap(), 1.0);
    assert!((monomial_norm(&MultiIndex::single(1), 2.0, &w).unwrap() - 1.0).abs() < 1e-15);
    let v = monomial_norm(&MultiIndex::single(2), 4.0, &w).unwrap();
    assert!((v - 1.5f64.powf(0.25)).abs() < 1e-14);
    // Radial substitution oracle: ∫ r^{kp} (αp) r e^{-αp r²/2} dr on a fine rule.
    let rule = crate::quadrature::gauss_legendre::GaussLegendre::new(400);
    let (k, p, alpha) = (2.0, 4.0, 1.0);
    let direct = rule.integrate(0.0, 8.0, |r: f64| {
        r.powf(k * p) * alpha * p * r * (-alpha * p * r * r / 2.0).exp()
    });
    assert!((direct.powf(1.0 / p) - v).abs() < 1e-12);
}

#[test]
fn monomial_norm_large_index_no_overflow() {
    let w = line(0.7);
    let v = ln_monomial_norm(&MultiIndex::single(10_000), 3.0, &w).unwrap();
    assert!(v.is_finite());
    let two = FockWeight::new(0.7, 2).unwrap();
    let t = ln_monomial_norm(&MultiIndex::new(vec![10_000, 10_000]), 3.0, &two).unwrap();
    assert!((t - 2.0 * v).abs() < 1e-9 * t.abs());
}

#[test]
fn poly_norm_examples() {
    let w = line(1.0);
    let grid = PolarGrid::for_polynomial(&w, 3.0, 1).unwrap();
    let five = HoloPoly::from_coeffs(&[c(5.0, 0.0)]);
    assert!((poly_norm(&five, 3.0, &w, &grid).unwrap() - 5.0).abs() < 1e-12);

    let w2 = line(2.0);
    let grid2 = PolarGrid::for_polynomial(&w2, 2.0, 3).unwrap();
    let v = poly_norm(&z_pow(3), 2.0, &w2, &grid2).unwrap();
    assert!((v - 0.75f64.sqrt()).abs() < 1e-12);

    let one_plus_z = HoloPoly::from_coeffs(&[c(1.0, 0.0), c(1.0, 0.0)]);
    let g = PolarGrid::for_polynomial(&w, 3.0, 1).unwrap();
    let coarse = poly_norm(&one_plus_z, 3.0, &w, &g).unwrap();
    let fine = poly_norm(&one_plus_z, 3.0, &w, &g.with_resolution(512, 512).unwrap()).unwrap();
    assert!((coarse - fine).abs() < 1e-9 * fine);
}

#[test]
fn zero_poly_norm_is_zero() {
    let w = line(1.0);
    let grid = PolarGrid::new(8, 8, 6.0).unwrap();
    assert_eq!(poly_norm(&HoloPoly::zero(1), 2.5, &w, &grid).unwrap(), 0.0);
}

#[test]
fn pairing_examples() {
    let w = line(1.0);
    assert_eq!(poly_pairing(&z_pow(1), &z_pow(2), &w).unwrap(), c(0.0, 0.0));
    let w2 = line(2.0);
    let v = poly_pairing(&z_pow(3), &z_pow(3), &w2).unwrap();
    assert!((v - c(0.75, 0.0)).norm() < 1e-15);
    for k in 0..6 {
        let psi = NormalizedMonomial::new(MultiIndex::single(k), 2.0).to_poly();
        assert!((poly_pairing(&psi, &psi, &w2).unwrap() - c(1.0, 0.0)).norm() < 1e-14);
    }
    let two = FockWeight::new(1.0, 2).unwrap();
    assert!(matches!(
        poly_pairing(&z_pow(1), &z_pow(1), &two),
        Err(Error::DimensionMismatch { .. })
    ));
}

#[test]
fn pairing_against_quadrature() {
    let w2 = line(2.0);
    let grid = PolarGrid::for_polynomial(&w2, 1.0, 6).unwrap();
    let f = HoloPoly::from_coeffs(&[c(1.0, 0.5), c(0.0, -2.0), c(0.3, 0.0), c(1.0, 1.0)]);
    let g = HoloPoly::from_coeffs(&[c(-0.5, 0.0), c(1.0, 1.0), c(0.0, 0.0), c(2.0, -1.0)]);
    let exact = poly_pairing(&f, &g, &w2).unwrap();
    let quad = weighted_pairing(|z| f.eval1(z).unwrap(), |z| g.eval1(z).unwrap(), &w2, &grid).unwrap();
    assert!((exact - quad).norm() < 1e-12 * exact.norm());
}

#[test]
fn kernel_examples() {
    let w = line(1.0);
    let k0 = kernel_eval(&[c(0.0, 0.0)], &w).unwrap();
    assert_eq!(k0.norm(), 1.0);
    assert_eq!(k0.eval(&[c(3.0, -2.0)]).unwrap(), c(1.0, 0.0));
    let k1 = kernel_eval(&[c(1.0, 0.0)], &w).unwrap();
    assert!((k1.norm() - 0.5f64.exp()).abs() < 1e-15);
    let w_two = FockWeight::new(1.0, 2).unwrap();
    let k2 = kernel_eval(&[c(1.0, 0.0), c(1.0, 0.0)], &w_two).unwrap();
    assert!((k2.norm() - 1f64.exp()).abs() < 1e-15);
}

#[test]
fn kernel_norm_by_quadrature() {
    let w = line(1.0);
    let z = c(0.6, -0.8);
    let k = kernel_eval(&[z], &w).unwrap();
    for p in [1.5, 2.0, 3.0] {
        let grid = PolarGrid::for_tail(
            256,
            256,
            &crate::quadrature::TailModel {
                decay: p / 2.0,
                linear: p * z.norm(),
                power: 0.0,
            },
        )
        .unwrap();
        let integral = weighted_lp_integral(|u| k.eval(&[u]).unwrap(), p, &w, &grid).unwrap();
        assert!((integral.powf(1.0 / p) - k.norm()).abs() < 1e-10);
    }
}

#[test]
fn kernel_reproduces_polynomials() {
    // ⟨f, h_z⟩_α = f(z).
    let w = line(1.5);
    let f = HoloPoly::from_coeffs(&[c(1.0, 0.0), c(-0.5, 2.0), c(0.25, 0.25)]);
    let z = c(0.4, 0.9);
    let h = kernel_eval(&[z], &w).unwrap().truncated(40).unwrap();
    let v = poly_pairing(&f, &h, &w).unwrap();
    assert!((v - f.eval1(z).unwrap()).norm() < 1e-13);
}

#[test]
fn pointwise_bound_examples() {
    let w = line(1.0);
    let grid = PolarGrid::for_polynomial(&w, 2.0, 1).unwrap();
    let one = HoloPoly::from_coeffs(&[c(1.0, 0.0)]);
    let (l, r) = pointwise_bound_check(&one, c(0.0, 0.0), 2.0, &w, &grid).unwrap();
    assert!((l - 1.0).abs() < 1e-15 && (r - 1.0).abs() < 1e-12);
    let (l, r) = pointwise_bound_check(&z_pow(1), c(2.0, 0.0), 2.0, &w, &grid).unwrap();
    assert!((l - 2.0).abs() < 1e-15);
    assert!((r - 2f64.exp()).abs() < 1e-11);
}

#[test]
fn pointwise_bound_sharp_on_kernel_truncation() {
    let w = line(1.0);
    let z = c(0.5, 0.0);
    let f = kernel_eval(&[z], &w).unwrap().truncated(30).unwrap();
    let grid = PolarGrid::for_polynomial(&w, 3.0, 30).unwrap();
    let (l, r) = pointwise_bound_check(&f, z, 3.0, &w, &grid).unwrap();
    assert!(l / r >= 0.999 && l / r <= 1.0 + 1e-9, "{}", l / r);
}

#[test]
fn g_operator_identity_at_two() {
    let w = line(1.0);
    let h = HoloPoly::from_coeffs(&[c(1.0, 0.0), c(0.5, -0.5)]);
    let g = g_operator_eval(&h, 2.0, &w).unwrap();
    for z in [c(0.0, 0.0), c(1.0, 2.0), c(-0.3, 0.1)] {
        assert!((g.eval1(z) - h.eval1(z).unwrap()).norm() < 1e-14);
    }
    assert!(matches!(
        g_operator_eval(&HoloPoly::zero(1), 3.0, &w),
        Err(Error::ZeroFunction)
    ));
}

#[test]
fn g_operator_involution() {
    let w = line(1.0);
    let h = HoloPoly::from_coeffs(&[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.3)]);
    let p = 3.0;
    let q = conjugate_exponent(p).unwrap();
    let gp = g_operator_eval(&h, p, &w).unwrap();
    for i in 0..20 {
        let z = Complex64::from_polar(0.2 * i as f64, 0.7 * i as f64);
        let inner = gp.eval1(z);
        // G_{p'} applied to the value of G_p(h) at z.
        let m = inner.norm();
        let back = if m == 0.0 {
            inner
        } else {
            inner * ((q - 2.0) * m.ln() - (q / 2.0 - 1.0) * z.norm_sqr()).exp()
        };
        let target = h.eval1(z).unwrap();
        assert!((back - target).norm() < 1e-12 * target.norm().max(1.0));
    }
}

#[test]
fn g_operator_pairing_and_norm() {
    let w = line(1.0);
    let h = HoloPoly::from_coeffs(&[c(1.0, 0.0), c(1.0, 0.0)]);
    let p = 3.0;
    let g = g_operator_eval(&h, p, &w).unwrap();
    let grid = PolarGrid::for_polynomial(&w, 1.0, 3).unwrap();
    let h_norm = poly_norm(&h, p, &w, &PolarGrid::for_polynomial(&w, p, 1).unwrap()).unwrap();
    let quad = weighted_pairing(|z| h.eval1(z).unwrap(), |z| g.eval1(z), &w, &grid).unwrap();
    let closed = g.source_pairing_from_norm(h_norm);
    assert!((quad.re - closed).abs() < 1e-9 * closed && quad.im.abs() < 1e-12);

    let q = conjugate_exponent(p).unwrap();
    let ggrid = PolarGrid::for_polynomial(&w, q, 2).unwrap();
    let g_norm = weighted_lp_integral(|z| g.eval1(z), q, &w, &ggrid).unwrap().powf(1.0 / q);
    assert!((g_norm - g.norm_from_source(h_norm)).abs() < 1e-8 * g_norm);
    // Hölder equality: ⟨h, G(h)⟩ = C_p ‖h‖ ‖G(h)‖.
    let cp = crate::constants::c_p(p).unwrap();
    assert!((closed - cp * h_norm * g_norm).abs() < 1e-8 * closed);
}

#[test]
fn projection_eigenvalue_examples() {
    let w = line(1.0);
    for p in [1.5, 3.0, 4.0] {
        let v = projection_eigenvalue(&MultiIndex::single(0), p, &w).unwrap();
        assert!((v - 2.0 / p).abs() < 1e-15);
    }
    let v = projection_eigenvalue(&MultiIndex::single(1), 4.0, &w).unwrap();
    assert!((v - 0.25).abs() < 1e-15);
    for j in 0..8 {
        let v = projection_eigenvalue(&MultiIndex::single(j), 2.0, &w).unwrap();
        assert!((v - 1.0).abs() < 1e-13);
    }
}

#[test]
fn taylor_bound_examples() {
    let w = line(1.0);
    assert_eq!(taylor_coeff_bound(0, 3.0, &w).unwrap(), 1.0);
    assert!((taylor_coeff_bound(2, 2.0, &w).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
    for j in 0..10 {
        for p in [1.5, 3.0] {
            let b = taylor_coeff_bound(j, p, &w).unwrap();
            let n = monomial_norm(&MultiIndex::single(j), p, &w).unwrap();
            assert!((b * n - 1.0).abs() < 1e-14);
        }
    }
}

#[test]
fn quadexp_examples() {
    let w = line(1.0);
    let g = QuadExp::new(c(0.0, 0.0), c(0.0, 0.0), 1.0).unwrap();
    assert!((quadexp_norm(&g, 3.0, &w).unwrap() - 1.0).abs() < 1e-15);
    let g = QuadExp::new(c(1.0, 0.0), c(0.0, 0.0), 1.0).unwrap();
    assert!((quadexp_norm(&g, 2.0, &w).unwrap() - 0.5f64.exp()).abs() < 1e-15);
    let g = QuadExp::new(c(0.0, 0.0), c(0.5, 0.0), 1.0).unwrap();
    assert!((quadexp_norm(&g, 2.0, &w).unwrap() - 0.75f64.powf(-0.25)).abs() < 1e-15);
    assert!(matches!(
        QuadExp::new(c(0.0, 0.0), c(0.6, 0.8), 1.0),
        Err(Error::NotIntegrable(_))
    ));
}

#[test]
fn quadexp_norm_matches_gaussian_integral() {
    use crate::quadrature::gaussian_integral;
    for (a, cc, p) in [
        (c(0.3, -0.7), c(0.5, 0.2), 3.0),
        (c(1.0, 1.0), c(-0.8, 0.1), 1.5),
        (c(0.0, 0.4), c(0.0, -0.9), 4.0),
    ] {
        let alpha = 1.3;
        let g = QuadExp::new(a, cc, alpha).unwrap();
        let (m, v) = QuadExp::lp_quadratic_form(a, cc, alpha, p).unwrap();
        let integral = gaussian_integral(&m, &v).unwrap();
        let closed = (g.ln_norm(p) * p).exp();
        let via_matrix = integral.re * alpha * p / (2.0 * std::f64::consts::PI);
        assert!(integral.im.abs() < 1e-14 * integral.re);
        assert!((via_matrix - closed).abs() < 1e-10 * closed);
    }
}

#[test]
fn quadexp_integrability_matches_matrix() {
    for cc in [c(0.99, 0.0), c(1.0, 0.0), c(0.0, -1.0), c(0.8, 0.7), c(0.7, 0.7)] {
        let (m, _) = QuadExp::lp_quadratic_form(c(0.0, 0.0), cc, 1.0, 2.0).unwrap();
        let ok = QuadExp::new(c(0.0, 0.0), cc, 1.0).is_ok();
        assert_eq!(m.real_part_positive_definite(), ok, "c = {cc}");
    }
}

#[test]
fn section_table_matches_poly_norm() {
    let w = line(1.0);
    let grid = PolarGrid::for_polynomial(&w, 1.5, 5).unwrap();
    let table = SectionTable::new(&w, 5, &grid).unwrap();
    let psi = [c(0.3, 0.1), c(-1.0, 0.2), c(0.0, 0.0), c(0.5, 0.5), c(0.1, -0.2), c(0.05, 0.0)];
    let coeffs: Vec<Complex64> = psi
        .iter()
        .enumerate()
        .map(|(k, &cf)| cf * NormalizedMonomial::new(MultiIndex::single(k as u32), 1.0).coefficient())
        .collect();
    let f = HoloPoly::from_coeffs(&coeffs);
    for p in [1.5, 2.0, 3.0] {
        let a = table.norm(&psi, p).unwrap();
        let b = weighted_lp_integral(|z| f.eval1(z).unwrap(), p, &w, &grid).unwrap().powf(1.0 / p);
        assert!((a - b).abs() < 1e-12 * b);
        let adapted = poly_norm(&f, p, &w, &grid).unwrap();
        assert!((a - adapted).abs() < 1e-7 * b);
    }
}

#[test]
fn norm_with_zeros_matches_adaptive_oracle() {
    // Nested adaptive quadrature split at the zeros 1 ± √3.
    let w = line(1.0);
    let f = HoloPoly::from_coeffs(&[c(1.0, 0.0), c(1.0, 0.0), c(-0.5, 0.0)]);
    let grid = PolarGrid::for_polynomial(&w, 1.5, 2).unwrap();
    let v = poly_norm(&f, 1.5, &w, &grid).unwrap();
    assert!((v - 1.6996283314455847).abs() < 1e-11, "{v}");
}
