use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use super::{maximize_ratio_free, psi_ratio, psi_scale, psi_to_poly, SearchConfig};
use crate::constants::{c_p, stirling_gap, stirling_remainder, stirling_remainder_integral, ExponentPair};
use crate::error::Result;
use crate::fock::{
    g_operator_eval, ln_monomial_norm, poly_norm, poly_pairing, taylor_coeff_bound, FockWeight,
    HoloPoly, MultiIndex, QuadExp, SectionTable,
};
use crate::quadrature::{gaussian_integral, weighted_lp_integral, PolarGrid};
use crate::ratio::{
    gaussian_critical_point, gaussian_exponent, gaussian_family_reduction, gaussian_family_sup,
    gaussian_hessian, ratio_gaussian, ratio_general, ratio_monomial, ratio_monomial_stirling,
};

/// Sample sizes for the randomized checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct SuiteCounts {
    /// Random exponents for the scalar identities.
    pub scalars: usize,
    /// Random polynomial pairs per exponent in the strict Hölder check.
    pub holder_pairs: usize,
    /// Random polynomials for the coefficient and projection bounds.
    pub polynomials: usize,
    /// Random quadratic exponential parameters.
    pub gaussians: usize,
    /// Samples for the checks that run a full-resolution quadrature each.
    pub quadrature: usize,
}

impl Default for SuiteCounts {
    fn default() -> Self {
        Self {
            scalars: 100,
            holder_pairs: 1000,
            polynomials: 200,
            gaussians: 500,
            quadrature: 12,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantEntry {
    pub name: String,
    pub samples: usize,
    /// Smallest slack over all samples; negative means violated.
    pub worst_margin: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub seed: u64,
    pub counts: SuiteCounts,
    pub entries: Vec<InvariantEntry>,
    pub all_passed: bool,
}

struct Tracker {
    name: &'static str,
    samples: usize,
    worst: f64,
    strict: bool,
}

impl Tracker {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            samples: 0,
            worst: f64::INFINITY,
            strict: false,
        }
    }

    fn strict(name: &'static str) -> Self {
        Self {
            strict: true,
            ..Self::new(name)
        }
    }

    fn record(&mut self, margin: f64) {
        self.samples += 1;
        let m = if margin.is_nan() { f64::NEG_INFINITY } else { margin };
        self.worst = self.worst.min(m);
    }

    /// Slack of `|a - b| ≤ tol · max(1, |b|)`.
    fn close(&mut self, a: f64, b: f64, tol: f64) {
        self.record(tol * b.abs().max(1.0) - (a - b).abs());
    }

    fn check(&mut self, ok: bool) {
        self.record(if ok { 0.0 } else { -1.0 });
    }

    fn finish(self) -> InvariantEntry {
        let passed = self.samples > 0 && if self.strict { self.worst > 0.0 } else { self.worst >= 0.0 };
        InvariantEntry {
            name: self.name.to_string(),
            samples: self.samples,
            worst_margin: self.worst,
            passed,
        }
    }
}

fn finish_or_error(t: Tracker, outcome: Result<()>) -> InvariantEntry {
    let mut t = t;
    if outcome.is_err() {
        t.record(f64::NEG_INFINITY);
    }
    t.finish()
}

fn rng_for(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn random_exponent(rng: &mut impl Rng) -> ExponentPair {
    loop {
        let p = 1.0 + 19.0 * rng.gen::<f64>();
        if p > 1.01 && (p - 2.0).abs() > 1e-3 {
            return ExponentPair::new(p).expect("sampled exponent");
        }
    }
}

fn random_complex(rng: &mut impl Rng, scale: f64) -> Complex64 {
    Complex64::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale))
}

fn random_disk(rng: &mut impl Rng, radius: f64) -> Complex64 {
    Complex64::from_polar(radius * rng.gen::<f64>().sqrt(), TAU * rng.gen::<f64>())
}

/// `ψ`-coefficients of a random polynomial of degree at most `max_degree`
/// with a non-negligible leading coefficient.
fn random_psi(rng: &mut impl Rng, max_degree: usize) -> Vec<Complex64> {
    let d = rng.gen_range(0..=max_degree);
    let mut c: Vec<Complex64> = (0..=d).map(|_| random_complex(rng, 1.0)).collect();
    while c[d].norm() < 0.1 {
        c[d] = random_complex(rng, 1.0);
    }
    c
}

const HOLDER_EXPONENTS: [f64; 3] = [1.5, 3.0, 4.0];
const CORPUS_DEGREE: usize = 8;
const CORPUS_GRID: usize = 128;

fn corpus_table(w: &FockWeight, p: &ExponentPair) -> Result<SectionTable> {
    let d = CORPUS_DEGREE as u64;
    let grid = PolarGrid::for_ratio(w, p.p(), d, d)?.with_resolution(CORPUS_GRID, CORPUS_GRID)?;
    SectionTable::new(w, CORPUS_DEGREE, &grid)
}

/// Tolerance of the Gaussian-family supremum that random pairs are checked
/// against.
pub const DEFAULT_SUP_TOL: f64 = 1e-6;

/// Runs every structural invariant of the crate against seeded random
/// samples. Failures are reported as entries, never as errors.
pub fn run_invariant_suite(seed: u64, counts: &SuiteCounts) -> InvariantReport {
    run_invariant_suite_with_tol(seed, counts, DEFAULT_SUP_TOL)
}

pub fn run_invariant_suite_with_tol(seed: u64, counts: &SuiteCounts, sup_tol: f64) -> InvariantReport {
    type Check = fn(&mut ChaCha20Rng, &SuiteCounts, f64) -> InvariantEntry;
    let checks: Vec<Check> = vec![
        c_p_self_duality,
        c_p_range,
        stirling_gap_negative,
        stirling_remainder_decreasing,
        stirling_identity,
        gaussian_integral_matches_quadexp,
        lp_integral_converges,
        not_integrable_iff_outside_disk,
        parseval,
        norm_homogeneity,
        tensor_norm_factorization,
        strict_holder,
        duality_sandwich,
        g_operator_norm_identity,
        pointwise_bound,
        taylor_bound,
        ratio_scale_invariance,
        monomial_ratio_alpha_invariance,
        stirling_form_equality,
        strict_monomial_bound,
        monomial_limit_gap,
        fixed_monomial_inequality,
        projection_contraction,
        critical_point_gradient,
        hessian_negative_definite,
        gaussian_reduction_spot_check,
        gaussian_reduction_monotone,
        objective_phase_invariance,
        search_within_proven_bound,
    ];
    let entries: Vec<InvariantEntry> = checks
        .iter()
        .enumerate()
        .map(|(i, check)| check(&mut rng_for(seed, i as u64), counts, sup_tol))
        .collect();
    let all_passed = entries.iter().all(|e| e.passed);
    InvariantReport {
        seed,
        counts: *counts,
        entries,
        all_passed,
    }
}

fn c_p_self_duality(rng: &mut ChaCha20Rng, counts: &SuiteCounts, _: f64) -> InvariantEntry {
    let mut t = Tracker::new("c_p_self_duality");
    for _ in 0..counts.scalars {
        let e = random_exponent(rng);
        t.record(1e-14 - (e.c_p() - e.swapped().c_p()).abs());
    }
    t.finish()
}

fn c_p_range(rng: &mut ChaCha20Rng, counts: &SuiteCounts, _: f64) -> InvariantEntry {
    let mut t = Tracker::new("c_p_range");
    t.check(c_p(2.0).ok() == Some(1.0));
    for _ in 0..counts.scalars {
        let v = random_exponent(rng).c_p();
        t.record((v - 1.0).min(2.0 - v));
    }
    t.finish()
}

fn stirling_gap_negative(rng: &mut ChaCha20Rng, counts: &SuiteCounts, _: f64) -> InvariantEntry {
    let mut t = Tracker::strict("stirling_gap_negative");
    let mut exps: Vec<ExponentPair> = HOLDER_EXPONENTS
        .iter()
        .map(|&p| ExponentPair::new(p).expect("fixed exponent"))
        .collect();
    exps.extend((0..counts.scalars / 10).map(|_| random_exponent(rng)));
    let outcome = (|| {
        for e in &exps {
            for k in 1..=500 {
                t.record(-stirling_gap(e, k)?);
            }
        }
        Ok(())
    })();
    finish_or_error(t, outcome)
}

fn stirling_remainder_decreasing(_: &mut ChaCha20Rng, _: &SuiteCounts, _: f64) -> InvariantEntry {
    let mut t = Tracker::strict("stirling_remainder_decreasing");
    let outcome = (|| {
        let mut x = 0.05;
        let mut prev = stirling_remainder(x)?;
        while x < 1e4 {
            x *= 1.1;
            let s = stirling_remainder(x)?;
            t.record(prev - s);
            prev = s;
        }
        Ok(())
    })();
    finish_or_error(t, outcome)
}

fn stirling_identity(rng: &mut ChaCha20Rng, counts: &SuiteCounts, _: f64) -> InvariantEntry {
    let mut t = Tracker::new("stirling_integral_vs_identity");
    let mut xs = vec![0.5, 1.0, 2.0 / 3.0, 2.0, 10.0, 100.0];
    xs.extend((0..counts.scalars).map(|_| 10f64.powf(rng.gen_range(-2.0..3.0))));
    let outcome = (|| {
        for x in xs {
            t.record(1e-10 - (stirling_remainder_integral(x)? - stirling_remainder(x)?).abs());
        }
        Ok(())
    })();
    finish_or_error(t, outcome)
}

fn gaussian_integral_matches_quadexp(rng: &mut ChaCha20Rng, counts: &SuiteCounts, _: f64) -> InvariantEntry {
    let mut t = Tracker::new("gaussian_integral_vs_quadexp_norm");
    let outcome = (|| {
        for _ in 0..counts.gaussians {
            let e = random_exponent(rng);
            let alpha = rng.gen_range(0.3..3.0);
            let a = random_complex(rng, 1.0);
            let c = random_disk(rng, 0.9);
            let (m, v) = QuadExp::lp_quadratic_form(a, c, alpha, e.p())?;
            let integral = gaussian_integral(&m, &v)?;
            let ln_via_matrix = (integral.re * alpha * e.p() / TAU).ln();
            let ln_closed = QuadExp::new(a, c, alpha)?.ln_norm(e.p()) * e.p();
            t.record(1e-10 - (ln_via_matrix - ln_closed).abs() - integral.im.abs() / integral.re);
        }
        Ok(())
    })();
    finish_or_error(t, outcome)
}

fn lp_integral_converges(rng: &mut ChaCha20Rng, counts: &SuiteCounts, _: f64) -> InvariantEntry {
    let mut t = Tracker::new("lp_integral_grid_convergence");
    let outcome = (|| {
        for _ in 0..counts.quadrature {
            let alpha = rng.gen_range(0.5..2.0);
            let w = FockWeight::line(alpha)?;
            let p = rng.gen_range(1.2..6.0);
            let f = psi_to_poly(&random_psi(rng, 6), alpha);
            let grid = PolarGrid::for_polynomial(&w, p, f.degree())?.with_singular_points(&f.roots_1d()?)?;
            let fine = grid.with_resolution(2 * grid.n_r(), 2 * grid.n_theta())?;
            let coeffs = f.coeffs_1d()?;
            let eval = |z| crate::fock::HoloPoly::from_coeffs(&coeffs).eval1(z).expect("1-D");
            let a = weighted_lp_integral(eval, p, &w, &grid)?;
            let b = weighted_lp_integral(eval, p, &w, &fine)?;
            t.record(1e-9 - (a - b).abs() / b);
        }
        Ok(())
    })();
    finish_or_error(t, outcome)
}

fn not_integrable_iff_outside_disk(rng: &mut ChaCha20Rng, counts: &SuiteCounts, _: f64) -> InvariantEntry {
    let mut t = Tracker::new("not_integrable_iff_outside_disk");
    for _ in 0..counts.gaussians {
        let c = random_disk(rng, 2.0);
        if (c.norm() - 1.0).abs() < 1e-9 {
            continue;
        }
        let p = rng.gen_range(1.1..8.0);
        let Ok((m, v)) = QuadExp::lp_quadratic_form(random_complex(rng, 1.0), c, 1.0, p) else {
            t.check(false);
            continue;
        };
        let integrable = gaussian_integral(&m, &v).is_ok();
        t.check(integrable == (c.norm() < 1.0) && integrable == QuadExp::new(Complex64::ZERO, c, 1.0).is_ok());
    }
    t.finish()
}

fn parseval(rng: &mut ChaCha20Rng, counts: &SuiteCounts, _: f64) -> InvariantEntry {
    let mut t = Tracker::new("parseval");
    let outcome = (|| {
        for _ in 0..counts.quadrature {
            let alpha = rng.gen_range(0.5..2.0);
            let w = FockWeight::line(alpha)?;
            let f = psi_to_poly(&random_psi(rng, 8), alpha);
            let grid = PolarGrid::for_polynomial(&w, 2.0, f.degree())?;
            let quad = poly_norm(&f, 2.0, &w, &grid)?;
            let exact = poly_pairing(&f, &f, &w)?.re.sqrt();
            t.record(1e-12 - (quad - exact).abs() / exact);
        }
        Ok(())
    })();
    finish_or_error(t, outcome)
}

fn norm_homogeneity(rng: &mut ChaCha20Rng, counts: &SuiteCounts, _: f64) -> InvariantEntry {
    let mut t = Tracker::new("norm_homogeneity");
    let outcome = (|| {
        for _ in 0..counts.quadrature {
            let w = FockWeight::line(1.0)?;
            let p = rng.gen_range(1.2..6.0);
            let f = psi_to_poly(&random_psi(rng, 6), 1.0);
            let lambda = random_complex(rng, 3.0);
            let grid = PolarGrid::for_polynomial(&w, p, f.degree())?;
            let a = poly_norm(&f.scaled(lambda), p, &w, &grid)?;
            let b = lambda.norm() * poly_norm(&f, p, &w, &grid)?;
            t.record(1e-12 - (a - b).abs() / b);
        }
        Ok(())
    })();
    finish_or_error(t, outcome)
}

fn tensor_norm_factorization(rng: &mut ChaCha20Rng, counts: &SuiteCounts, _: f64) -> InvariantEntry {
    let mut t = Tracker::new("tensor_norm_factorization");
    let outcome = (|| {
        for _ in 0..counts.scalars {
            let p = rng.gen_range(1.1..10.0);
            let alpha = rng.gen_range(0.2..4.0);
            let (j1, j2) = (rng.gen_range(0..40u32), rng.gen_range(0..40u32));
            let w2 = FockWeight::new(alpha, 2)?;
            let w1 = FockWeight::line(alpha)?;
            let joint = ln_monomial_norm(&MultiIndex::new(vec![j1, j2]), p, &w2)?;
            let split = ln_monomial_norm(&MultiIndex::single(j1), p, &w1)?
                + ln_monomial_norm(&MultiIndex::single(j2), p, &w1)?;
            t.close(joint, split, 1e-13);
        }
        Ok(())
    })();
    finish_or_error(t, outcome)
}

fn strict_holder(rng: &mut ChaCha20Rng, counts: &SuiteCounts, _: f64) -> InvariantEntry {
    let mut t = Tracker::strict("strict_holder");
    let outcome = (|| {
        let w = FockWeight::line(1.0)?;
        for &p in &HOLDER_EXPONENTS {
            let e = ExponentPair::new(p)?;
            let table = corpus_table(&w, &e)?;
            for _ in 0..counts.holder_pairs {
                let f = random_psi(rng, 6);
                let h = random_psi(rng, 6);
                t.record(e.c_p() - psi_ratio(&table, &f, &h, &e)?);
            }
        }
        Ok(())
    })();
    finish_or_error(t, outcome)
}

/// For `h` a monomial or quadratic exponential, a well-chosen trial `g` in
/// the same family gives `|⟨g, h⟩| / ‖g‖_p`, a lower estimate of the dual
/// norm, which must land in `[‖h‖_{p'}, C_p ‖h‖_{p'}]`.
fn duality_sandwich(rng: &mut ChaCha20Rng, counts: &SuiteCounts, _: f64) -> InvariantEntry {
    let mut t = Tracker::new("duality_sandwich");
    let record = |t: &mut Tracker, est: f64, cp: f64| {
        t.record((est - (1.0 - 1e-6)).min(cp * (1.0 + 1e-6) - est));
    };
    let outcome = (|| {
        for &p in &HOLDER_EXPONENTS {
            let e = ExponentPair::new(p)?;
            let w = FockWeight::line(1.0)?;
            for j in 0..=10u32 {
                let z = HoloPoly::monomial(MultiIndex::single(j), Complex64::ONE);
                let grid = PolarGrid::for_ratio(&w, p, j as u64, j as u64)?;
                record(&mut t, ratio_general(&z, &z, &e, &w, &grid)?.value, e.c_p());
            }
        }
        for _ in 0..counts.gaussians {
            let e = random_exponent(rng);
            let alpha = rng.gen_range(0.3..3.0);
            let b = random_complex(rng, 1.5);
            let d = random_disk(rng, 0.95);
            let y = d.norm();
            // Best |c| for this |d|, with the phase of c aligned to d.
            let x = y * e.p() / (1.0 + (1.0 - y * y * e.p() * (2.0 - e.p())).sqrt());
            let c = if y > 0.0 { d * (x / y) } else { Complex64::ZERO };
            let a = gaussian_critical_point(b, c, d)?;
            let g = QuadExp::new(a, c, alpha)?;
            let h = QuadExp::new(b, d, alpha)?;
            record(&mut t, ratio_gaussian(&g, &h, &e)?, e.c_p());
        }
        Ok(())
    })();
    finish_or_error(t, outcome)
}

fn g_operator_norm_identity(rng: &mut ChaCha20Rng, counts: &SuiteCounts, _: f64) -> InvariantEntry {
    let mut t = Tracker::new("g_operator_norm_identity");
    let outcome = (|| {
        for _ in 0..counts.quadrature {
            let alpha = rng.gen_range(0.5..2.0);
            let w = FockWeight::line(alpha)?;
            let e = ExponentPair::new(rng.gen_range(1.2..5.0))?;
            let h = psi_to_poly(&random_psi(rng, 5), alpha);
            let g = g_operator_eval(&h, e.p(), &w)?;
            let grid = PolarGrid::for_polynomial(&w, e.p(), h.degree())?;
            let via_quad = weighted_lp_integral(|z| g.eval1(z), e.conj(), &w, &grid)?.powf(e.inv_conj());
            let via_source = g.norm(&grid)?;
            t.record(1e-8 - (via_quad - via_source).abs() / via_source);
        }
        Ok(())
    })();
    finish_or_error(t, outcome)
}

fn pointwise_bound(rng: &mut ChaCha20Rng, counts: &SuiteCounts, _: f64) -> InvariantEntry {
    let mut t = Tracker::new("pointwise_bound");
    let outcome = (|| {
        let w = FockWeight::line(1.0)?;
        for &p in &HOLDER_EXPONENTS {
            let e = ExponentPair::new(p)?;
            let table = corpus_table(&w, &e)?;
            for _ in 0..counts.polynomials {
                let c = random_psi(rng, CORPUS_DEGREE);
                let f = psi_to_poly(&c, 1.0);
                let z = random_disk(rng, 3.0);
                let v = f.eval1(z)?.norm() * (-0.5 * z.norm_sqr()).exp() / table.norm(&c, p)?;
                t.record(1.0 + 1e-9 - v);
            }
        }
        Ok(())
    })();
    finish_or_error(t, outcome)
}

fn taylor_bound(rng: &mut ChaCha20Rng, counts: &SuiteCounts, _: f64) -> InvariantEntry {
    let mut t = Tracker::new("taylor_coeff_bound");
    let outcome = (|| {
        let w = FockWeight::line(1.0)?;
        for &p in &HOLDER_EXPONENTS {
            let e = ExponentPair::new(p)?;
            let table = corpus_table(&w, &e)?;
            for _ in 0..counts.polynomials {
                let c = random_psi(rng, CORPUS_DEGREE);
                let norm = table.norm(&c, p)?;
                for (j, cj) in c.iter().enumerate() {
                    let aj = cj.norm() * psi_scale(j, 1.0);
                    let bound = taylor_coeff_bound(j as u32, p, &w)? * norm * (1.0 + 1e-8);
                    t.record((bound - aj) / bound);
                }
            }
        }
        Ok(())
    })();
    finish_or_error(t, outcome)
}

fn ratio_scale_invariance(rng: &mut ChaCha20Rng, counts: &SuiteCounts, _: f64) -> InvariantEntry {
    let mut t = Tracker::new("ratio_scale_invariance");
    let outcome = (|| {
        for _ in 0..counts.quadrature {
            let e = ExponentPair::new(rng.gen_range(1.2..5.0))?;
            let alpha = rng.gen_range(0.5..2.0);
            let w = FockWeight::line(alpha)?;
            let f = psi_to_poly(&random_psi(rng, 5), alpha);
            let h = psi_to_poly(&random_psi(rng, 5), alpha);
            let (lambda, mu) = (random_complex(rng, 3.0), random_complex(rng, 3.0));
            let grid = PolarGrid::for_ratio(&w, e.p(), 5, 5)?;
            let a = ratio_general(&f, &h, &e, &w, &grid)?.value;
            let b = ratio_general(&f.scaled(lambda), &h.scaled(mu), &e, &w, &grid)?.value;
            t.record(1e-12 - (a - b).abs());
        }
        Ok(())
    })();
    finish_or_error(t, outcome)
}

fn monomial_ratio_alpha_invariance(rng: &mut ChaCha20Rng, counts: &SuiteCounts, _: f64) -> InvariantEntry {
    let mut t = Tracker::new("monomial_ratio_alpha_invariance");
    let outcome = (|| {
        for _ in 0..counts.quadrature {
            let e = ExponentPair::new(rng.gen_range(1.2..5.0))?;
            let k = rng.gen_range(0..=8u32);
            let z = HoloPoly::monomial(MultiIndex::single(k), Complex64::ONE);
            let mut values = Vec::new();
            for alpha in [0.5, 1.0, 3.0] {
                let w = FockWeight::line(alpha)?;
                let grid = PolarGrid::for_ratio(&w, e.p(), k as u64, k as u64)?;
                values.push(ratio_general(&z, &z, &e, &w, &grid)?.value);
            }
            let spread = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
                - values.iter().cloned().fold(f64::INFINITY, f64::min);
            t.record(1e-9 - spread);
        }
        Ok(())
    })();
    finish_or_error(t, outcome)
}

fn stirling_form_equality(rng: &mut ChaCha20Rng, counts: &SuiteCounts, _: f64) -> InvariantEntry {
    let mut t = Tracker::new("stirling_form_equality");
    let outcome = (|| {
        for _ in 0..counts.scalars / 10 {
            let e = random_exponent(rng);
            for k in 1..=200 {
                t.record(1e-11 - (ratio_monomial(k, &e) - ratio_monomial_stirling(k, &e)?).abs());
            }
        }
        Ok(())
    })();
    finish_or_error(t, outcome)
}

fn strict_monomial_bound(rng: &mut ChaCha20Rng, counts: &SuiteCounts, _: f64) -> InvariantEntry {
    let mut t = Tracker::strict("strict_monomial_bound");
    for _ in 0..counts.scalars / 10 {
        let e = random_exponent(rng);
        let root = e.c_p().sqrt();
        for k in 0..=500 {
            t.record(root - ratio_monomial(k, &e));
        }
    }
    t.finish()
}

fn monomial_limit_gap(rng: &mut ChaCha20Rng, counts: &SuiteCounts, _: f64) -> InvariantEntry {
    let mut t = Tracker::strict("monomial_limit_gap");
    for _ in 0..counts.scalars {
        let e = random_exponent(rng);
        t.record(1e-3 - (e.c_p().sqrt() - ratio_monomial(500, &e)));
    }
    t.finish()
}

/// `ℛ(f, z^j) ≤ ℛ(z^j, z^j)`, and near-equality forces `f` close to
/// `span{z^j}`.
fn fixed_monomial_inequality(rng: &mut ChaCha20Rng, counts: &SuiteCounts, _: f64) -> InvariantEntry {
    let mut t = Tracker::new("fixed_monomial_inequality");
    let outcome = (|| {
        let w = FockWeight::line(1.0)?;
        for &p in &HOLDER_EXPONENTS {
            let e = ExponentPair::new(p)?;
            let table = corpus_table(&w, &e)?;
            for i in 0..counts.polynomials {
                let j = rng.gen_range(0..=5usize);
                let mut f = random_psi(rng, CORPUS_DEGREE);
                if i % 10 == 0 {
                    f = vec![Complex64::ZERO; j + 1];
                    f[j] = random_complex(rng, 1.0) + 0.1;
                }
                if f.len() <= j {
                    f.resize(j + 1, Complex64::ZERO);
                }
                let mut h = vec![Complex64::ZERO; j + 1];
                h[j] = Complex64::ONE;
                let r = psi_ratio(&table, &f, &h, &e)?;
                let target = ratio_monomial(j as u64, &e);
                let mut margin = target * (1.0 + 1e-9) - r;
                if r >= target * (1.0 - 1e-9) {
                    let off: f64 = f.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, c)| c.norm_sqr()).sum();
                    let total: f64 = f.iter().map(|c| c.norm_sqr()).sum();
                    margin = margin.min(1e-6 - (off / total).sqrt());
                }
                t.record(margin);
            }
        }
        Ok(())
    })();
    finish_or_error(t, outcome)
}

fn projection_contraction(rng: &mut ChaCha20Rng, counts: &SuiteCounts, _: f64) -> InvariantEntry {
    let mut t = Tracker::new("projection_contraction");
    let outcome = (|| {
        let w = FockWeight::line(1.0)?;
        for &p in &HOLDER_EXPONENTS {
            let e = ExponentPair::new(p)?;
            let table = corpus_table(&w, &e)?;
            for _ in 0..counts.polynomials {
                let f = random_psi(rng, CORPUS_DEGREE);
                let norm = table.norm(&f, p)?;
                for j in 0..f.len() {
                    let mut proj = vec![Complex64::ZERO; j + 1];
                    proj[j] = f[j];
                    t.record((norm - table.norm(&proj, p)?) / norm + 1e-12);
                }
            }
        }
        Ok(())
    })();
    finish_or_error(t, outcome)
}

fn critical_point_gradient(rng: &mut ChaCha20Rng, counts: &SuiteCounts, _: f64) -> InvariantEntry {
    let mut t = Tracker::new("critical_point_gradient");
    // The exponent is a quadratic polynomial in (x, y), so a wide central
    // difference is exact up to rounding.
    let step = 0.5;
    let outcome = (|| {
        for _ in 0..counts.gaussians {
            let b = random_complex(rng, 1.5);
            let c = random_disk(rng, 0.95);
            let d = random_disk(rng, 0.95);
            let a = gaussian_critical_point(b, c, d)?;
            let f = |u: Complex64| gaussian_exponent(a + u, b, c, d);
            let gx = (f(Complex64::new(step, 0.0)) - f(Complex64::new(-step, 0.0))) / (2.0 * step);
            let gy = (f(Complex64::new(0.0, step)) - f(Complex64::new(0.0, -step))) / (2.0 * step);
            t.record(1e-10 - gx.hypot(gy));
            t.record(1e-10 - f(Complex64::ZERO).abs());
        }
        Ok(())
    })();
    finish_or_error(t, outcome)
}

fn hessian_negative_definite(rng: &mut ChaCha20Rng, counts: &SuiteCounts, _: f64) -> InvariantEntry {
    let mut t = Tracker::strict("hessian_negative_definite");
    let outcome = (|| {
        for _ in 0..counts.gaussians {
            let h = gaussian_hessian(random_disk(rng, 0.999), random_disk(rng, 0.999))?;
            let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
            t.record((-h[0][0]).min(det));
        }
        Ok(())
    })();
    finish_or_error(t, outcome)
}

fn gaussian_reduction_spot_check(rng: &mut ChaCha20Rng, counts: &SuiteCounts, tol: f64) -> InvariantEntry {
    let mut t = Tracker::new("gaussian_reduction_spot_check");
    let outcome = (|| {
        for &p in &HOLDER_EXPONENTS {
            let e = ExponentPair::new(p)?;
            let sup = gaussian_family_sup(&e, 1.0, tol)?.value;
            for _ in 0..counts.gaussians / 25 {
                let g = QuadExp::new(random_complex(rng, 2.0), random_disk(rng, 0.999), 1.0)?;
                let h = QuadExp::new(random_complex(rng, 2.0), random_disk(rng, 0.999), 1.0)?;
                t.record(sup + tol - ratio_gaussian(&g, &h, &e)?);
            }
        }
        Ok(())
    })();
    finish_or_error(t, outcome)
}

fn gaussian_reduction_monotone(rng: &mut ChaCha20Rng, counts: &SuiteCounts, _: f64) -> InvariantEntry {
    let mut t = Tracker::new("gaussian_reduction_monotone");
    for _ in 0..counts.scalars / 10 {
        let e = random_exponent(rng);
        let r = gaussian_family_reduction(&e);
        let ys: Vec<f64> = (0..=200).map(|i| i as f64 / 200.0).collect();
        for w in ys.windows(2) {
            t.record((r.g_of_y(w[1]) - r.g_of_y(w[0])).min(r.x_of_y(w[1]) - r.x_of_y(w[0])) + 1e-15);
        }
        t.close(r.x_of_y(0.0), 0.0, 1e-15);
        t.close(r.x_of_y(1.0), 1.0, 1e-15);
        t.close(r.sup(), e.c_p(), 1e-12);
    }
    t.finish()
}

fn objective_phase_invariance(rng: &mut ChaCha20Rng, counts: &SuiteCounts, _: f64) -> InvariantEntry {
    let mut t = Tracker::new("objective_phase_invariance");
    let outcome = (|| {
        let w = FockWeight::line(1.0)?;
        let e = ExponentPair::new(4.0)?;
        let table = corpus_table(&w, &e)?;
        for _ in 0..counts.polynomials {
            let f = random_psi(rng, 6);
            let h = random_psi(rng, 6);
            let rot = Complex64::from_polar(1.0, TAU * rng.gen::<f64>());
            let turned: Vec<Complex64> = f.iter().map(|c| c * rot).collect();
            let a = psi_ratio(&table, &f, &h, &e)?;
            let b = psi_ratio(&table, &turned, &h, &e)?;
            t.record(1e-12 - (a - b).abs());
        }
        Ok(())
    })();
    finish_or_error(t, outcome)
}

fn search_within_proven_bound(rng: &mut ChaCha20Rng, _: &SuiteCounts, _: f64) -> InvariantEntry {
    let mut t = Tracker::new("search_bound_and_reproducibility");
    let outcome = (|| {
        for p in [1.5, 3.0] {
            let cfg = SearchConfig {
                p,
                degree: 2,
                restarts: 2,
                seed: rng.gen(),
                budget: 4000,
                ..SearchConfig::default()
            };
            let first = maximize_ratio_free(&cfg)?;
            let second = maximize_ratio_free(&cfg)?;
            t.record(c_p(p)? * (1.0 + 1e-9) - first.best_ratio);
            t.check(first == second);
        }
        Ok(())
    })();
    finish_or_error(t, outcome)
}
