//! Numerical search for maximizers of `ℛ_{p,α}` over polynomials of bounded
//! degree, the monomial sweep, and the randomized invariant harness.
//!
//! Polynomials are handled through their coefficients in the orthonormal
//! basis `ψ_k = √(α^k/k!) z^k`, where the pairing is the plain Hermitian
//! product of coefficient vectors and the norms come from a precomputed
//! [`SectionTable`].

pub mod nelder_mead;
mod suite;

pub use suite::{
    run_invariant_suite, run_invariant_suite_with_tol, InvariantEntry, InvariantReport, SuiteCounts,
    DEFAULT_SUP_TOL,
};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::constants::ExponentPair;
use crate::error::{Error, Result};
use crate::fock::{monomial_norm, poly_norm, FockWeight, HoloPoly, MultiIndex, SectionTable};
use crate::quadrature::PolarGrid;
use crate::ratio::ratio_monomial;
use nelder_mead::{minimize, NmOptions};

/// Largest polynomial degree the explorer accepts.
pub const MAX_DEGREE: u32 = 24;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchConfig {
    pub p: f64,
    pub alpha: f64,
    pub degree: u32,
    pub restarts: u32,
    pub seed: u64,
    pub tol: f64,
    /// Objective evaluations allowed per restart.
    pub budget: usize,
    /// Nodes per direction of the polar grid used inside the search.
    pub search_grid: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            p: 4.0,
            alpha: 1.0,
            degree: 4,
            restarts: 8,
            seed: 0,
            tol: 1e-10,
            budget: 20_000,
            search_grid: 32,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<ExponentPair> {
        let pair = ExponentPair::new(self.p)?;
        FockWeight::line(self.alpha)?;
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.degree > MAX_DEGREE {
            return bad(format!("degree must be <= {MAX_DEGREE}, got {}", self.degree));
        }
        if self.restarts == 0 {
            return bad("restarts must be >= 1".into());
        }
        if !(self.tol > 0.0) || !self.tol.is_finite() {
            return bad(format!("tol must be finite and > 0, got {}", self.tol));
        }
        if self.budget == 0 {
            return bad("budget must be >= 1".into());
        }
        if self.search_grid < 8 {
            return bad(format!("search_grid must be >= 8, got {}", self.search_grid));
        }
        Ok(pair)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub iteration: u32,
    pub best_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchReport {
    pub config: SearchConfig,
    pub best_ratio: f64,
    /// Maximizer candidates, normalized to unit norm and gauge-fixed.
    pub best_f: HoloPoly,
    pub best_h: HoloPoly,
    pub gap_to_sqrt_cp: f64,
    pub gap_to_cp: f64,
    pub evaluations: usize,
    pub converged: bool,
    pub trace: Vec<TracePoint>,
}

/// `√(α^k / k!)`, the factor with `ψ_k = scale · z^k`.
pub fn psi_scale(k: usize, alpha: f64) -> f64 {
    let ln_fact: f64 = (1..=k).map(|i| (i as f64).ln()).sum();
    (0.5 * (k as f64 * alpha.ln() - ln_fact)).exp()
}

pub fn psi_to_poly(coeffs: &[Complex64], alpha: f64) -> HoloPoly {
    let mono: Vec<Complex64> = coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| c * psi_scale(k, alpha))
        .collect();
    HoloPoly::from_coeffs(&mono)
}

pub fn poly_to_psi(f: &HoloPoly, alpha: f64) -> Result<Vec<Complex64>> {
    Ok(f.coeffs_1d()?
        .iter()
        .enumerate()
        .map(|(k, a)| a / psi_scale(k, alpha))
        .collect())
}

/// Share of the squared `ψ`-coefficient mass of `f` sitting on index `j`.
pub fn psi_mass_fraction(f: &HoloPoly, j: usize, alpha: f64) -> Result<f64> {
    let c = poly_to_psi(f, alpha)?;
    let total: f64 = c.iter().map(|v| v.norm_sqr()).sum();
    if total == 0.0 {
        return Err(Error::ZeroFunction);
    }
    Ok(c.get(j).map_or(0.0, |v| v.norm_sqr()) / total)
}

/// Rotates the coefficients so the first nonzero one is real and positive.
pub fn fix_gauge(coeffs: &mut [Complex64]) {
    if let Some(i) = coeffs.iter().position(|c| c.norm() > 0.0) {
        let lead = coeffs[i];
        let rot = lead.conj() / lead.norm();
        for c in coeffs.iter_mut() {
            *c *= rot;
        }
        coeffs[i] = Complex64::new(lead.norm(), 0.0);
    }
}

/// `|Σ f_k h̄_k| / (‖f‖_p ‖h‖_{p'})` for `ψ`-coefficient vectors.
pub fn psi_ratio(table: &SectionTable, f: &[Complex64], h: &[Complex64], p: &ExponentPair) -> Result<f64> {
    let pairing: Complex64 = f.iter().zip(h).map(|(a, b)| a * b.conj()).sum();
    Ok(pairing.norm() / (table.norm(f, p.p())? * table.norm(h, p.conj())?))
}

/// A block of `ψ`-coefficients with one entry pinned to 1, so that the free
/// real parameters are the real and imaginary parts of the others.
#[derive(Debug, Clone, Copy)]
struct Block {
    len: usize,
    pivot: usize,
}

impl Block {
    fn n_params(&self) -> usize {
        2 * (self.len - 1)
    }

    fn expand(&self, x: &[f64]) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.len);
        let mut it = x.chunks_exact(2);
        for k in 0..self.len {
            if k == self.pivot {
                out.push(Complex64::new(1.0, 0.0));
            } else {
                let c = it.next().expect("parameter count");
                out.push(Complex64::new(c[0], c[1]));
            }
        }
        out
    }

    /// Re-pins on the largest coefficient; `None` if the pivot is already it.
    fn repivot(&self, coeffs: &[Complex64]) -> Option<(Block, Vec<f64>)> {
        let (big, &v) = coeffs
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()).then(b.0.cmp(&a.0)))?;
        if big == self.pivot || v.norm() <= 1.0 + 1e-9 {
            return None;
        }
        let block = Block { len: self.len, pivot: big };
        let mut x = Vec::with_capacity(block.n_params());
        for (k, c) in coeffs.iter().enumerate() {
            if k != big {
                let s = c / v;
                x.push(s.re);
                x.push(s.im);
            }
        }
        Some((block, x))
    }
}

enum Target {
    Free,
    FixedMonomial(usize),
}

struct RestartOutcome {
    f: Vec<Complex64>,
    h: Vec<Complex64>,
    evaluations: usize,
    converged: bool,
}

struct Searcher<'a> {
    cfg: &'a SearchConfig,
    pair: ExponentPair,
    table: SectionTable,
    target: Target,
}

impl Searcher<'_> {
    fn len(&self) -> usize {
        self.cfg.degree as usize + 1
    }

    fn objective(&self, blocks: &[Block], x: &[f64]) -> f64 {
        let (bf, rest) = x.split_at(blocks[0].n_params());
        let f = blocks[0].expand(bf);
        let ratio = match self.target {
            Target::Free => {
                let h = blocks[1].expand(rest);
                psi_ratio(&self.table, &f, &h, &self.pair)
            }
            Target::FixedMonomial(j) => self.table.norm(&f, self.pair.p()).map(|n| f[j].norm() / n),
        };
        match ratio {
            Ok(r) if r > 0.0 => -r.ln(),
            _ => f64::MAX,
        }
    }

    fn run_restart(&self, index: u32) -> RestartOutcome {
        let mut rng = ChaCha20Rng::seed_from_u64(self.cfg.seed);
        rng.set_stream(index as u64);
        let len = self.len();
        let pivot = index as usize % len;
        let mut blocks = match self.target {
            Target::Free => vec![Block { len, pivot }; 2],
            Target::FixedMonomial(_) => vec![Block { len, pivot }],
        };
        let n_params: usize = blocks.iter().map(Block::n_params).sum();
        let mut x: Vec<f64> = (0..n_params).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let opts = NmOptions {
            max_evals: self.cfg.budget,
            f_tol: self.cfg.tol,
            x_tol: self.cfg.tol.sqrt().min(1e-4),
            initial_step: 0.25,
        };
        let mut evaluations = 0usize;
        let mut best = f64::INFINITY;
        let converged = loop {
            let remaining = self.cfg.budget.saturating_sub(evaluations);
            let res = minimize(
                |v| self.objective(&blocks, v),
                &x,
                &NmOptions {
                    max_evals: remaining,
                    ..opts
                },
            );
            evaluations += res.evals;
            let improved = best - res.f > self.cfg.tol;
            best = best.min(res.f);
            x = res.x;
            let mut moved = false;
            let mut offset = 0;
            let mut next_x = Vec::with_capacity(x.len());
            let mut next_blocks = blocks.clone();
            for (b, nb) in blocks.iter().zip(next_blocks.iter_mut()) {
                let part = &x[offset..offset + b.n_params()];
                offset += b.n_params();
                match b.repivot(&b.expand(part)) {
                    Some((block, params)) => {
                        *nb = block;
                        next_x.extend(params);
                        moved = true;
                    }
                    None => next_x.extend_from_slice(part),
                }
            }
            blocks = next_blocks;
            x = next_x;
            if !res.converged {
                break false;
            }
            if !improved && !moved {
                break true;
            }
        };
        let (bf, rest) = x.split_at(blocks[0].n_params());
        let f = blocks[0].expand(bf);
        let h = match self.target {
            Target::Free => blocks[1].expand(rest),
            Target::FixedMonomial(j) => {
                let mut h = vec![Complex64::new(0.0, 0.0); len];
                h[j] = Complex64::new(1.0, 0.0);
                h
            }
        };
        RestartOutcome {
            f,
            h,
            evaluations,
            converged,
        }
    }

    fn run(self) -> Result<SearchReport> {
        let cfg = self.cfg;
        let weight = FockWeight::line(cfg.alpha)?;
        let degree = cfg.degree as u64;
        let fine_grid = PolarGrid::for_ratio(&weight, self.pair.p(), degree, degree)?;
        let fine = SectionTable::new(&weight, cfg.degree as usize, &fine_grid)?;
        let fine_ratio = |f: &[Complex64], h: &[Complex64]| -> Result<f64> {
            match self.target {
                Target::Free => psi_ratio(&fine, f, h, &self.pair),
                Target::FixedMonomial(j) => {
                    let hn = monomial_norm(&MultiIndex::single(j as u32), self.pair.conj(), &weight)?
                        * psi_scale(j, cfg.alpha);
                    Ok(f[j].norm() / (fine.norm(f, self.pair.p())? * hn))
                }
            }
        };

        let mut best: Option<(f64, Vec<Complex64>, Vec<Complex64>)> = None;
        let mut evaluations = 0;
        let mut converged = true;
        let mut trace = Vec::with_capacity(cfg.restarts as usize);
        for r in 0..cfg.restarts {
            let out = self.run_restart(r);
            evaluations += out.evaluations;
            converged &= out.converged;
            let value = fine_ratio(&out.f, &out.h)?;
            if best.as_ref().map_or(true, |b| value > b.0) {
                best = Some((value, out.f, out.h));
            }
            trace.push(TracePoint {
                iteration: r,
                best_ratio: best.as_ref().map_or(value, |b| b.0),
            });
        }
        let (_, mut f, mut h) = best.expect("at least one restart");
        // Final value on a grid split at the zeros of f and h.
        let nf = poly_norm(&psi_to_poly(&f, cfg.alpha), self.pair.p(), &weight, &fine_grid)?;
        let nh = match self.target {
            Target::Free => poly_norm(&psi_to_poly(&h, cfg.alpha), self.pair.conj(), &weight, &fine_grid)?,
            Target::FixedMonomial(j) => {
                monomial_norm(&MultiIndex::single(j as u32), self.pair.conj(), &weight)?
                    * psi_scale(j, cfg.alpha)
            }
        };
        let pairing: Complex64 = f.iter().zip(&h).map(|(a, b)| a * b.conj()).sum();
        let best_ratio = pairing.norm() / (nf * nh);
        f.iter_mut().for_each(|c| *c /= nf);
        h.iter_mut().for_each(|c| *c /= nh);
        fix_gauge(&mut f);
        fix_gauge(&mut h);
        let cp = self.pair.c_p();
        Ok(SearchReport {
            config: cfg.clone(),
            best_ratio,
            best_f: psi_to_poly(&f, cfg.alpha),
            best_h: psi_to_poly(&h, cfg.alpha),
            gap_to_sqrt_cp: cp.sqrt() - best_ratio,
            gap_to_cp: cp - best_ratio,
            evaluations,
            converged,
            trace,
        })
    }
}

fn searcher(cfg: &SearchConfig, target: Target) -> Result<Searcher<'_>> {
    let pair = cfg.validate()?;
    let weight = FockWeight::line(cfg.alpha)?;
    let degree = cfg.degree as u64;
    let grid = PolarGrid::for_ratio(&weight, pair.p(), degree, degree)?
        .with_resolution(cfg.search_grid, cfg.search_grid)?;
    let table = SectionTable::new(&weight, cfg.degree as usize, &grid)?;
    Ok(Searcher {
        cfg,
        pair,
        table,
        target,
    })
}

/// Maximizes `ℛ_{p,α}(f, h)` over pairs of polynomials of degree at most
/// `cfg.degree`. Running out of budget is reported through `converged`.
pub fn maximize_ratio_free(cfg: &SearchConfig) -> Result<SearchReport> {
    searcher(cfg, Target::Free)?.run()
}

/// Maximizes `ℛ_{p,α}(f, z^j)` over `f` alone.
pub fn maximize_ratio_monomial_fixed(j: u32, cfg: &SearchConfig) -> Result<SearchReport> {
    if j > cfg.degree {
        return Err(Error::InvalidConfig(format!(
            "monomial degree {j} exceeds search degree {}",
            cfg.degree
        )));
    }
    searcher(cfg, Target::FixedMonomial(j as usize))?.run()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub k: u64,
    pub ratio: f64,
    pub gap: f64,
}

/// `(k, ℛ(z^k, z^k), √C_p - ℛ(z^k, z^k))` for `k = 0..=kmax`.
pub fn monomial_sweep(p: &ExponentPair, kmax: u64) -> Vec<SweepRow> {
    let root = p.c_p().sqrt();
    (0..=kmax)
        .map(|k| {
            let ratio = ratio_monomial(k, p);
            SweepRow {
                k,
                ratio,
                gap: root - ratio,
            }
        })
        .collect()
}
