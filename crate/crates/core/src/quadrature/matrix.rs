//! Complex symmetric matrices and the closed-form Gaussian integral
//! `∫_{ℝ^k} exp(-(x, Ax) + 2(v, x)) dx = π^{k/2} / √det(A) · exp((v, A⁻¹v))`.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// A `k × k` complex matrix with `A = Aᵀ` (symmetric, not Hermitian).
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSymMatrix {
    k: usize,
    entries: Vec<Complex64>,
    real_part_positive_definite: bool,
}

impl ComplexSymMatrix {
    /// Builds the matrix from its rows; rejects anything not exactly symmetric.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let k = rows.len();
        if k == 0 {
            return Err(Error::Domain("matrix must be at least 1x1".into()));
        }
        let mut entries = Vec::with_capacity(k * k);
        for row in rows {
            if row.len() != k {
                return Err(Error::DimensionMismatch {
                    expected: k,
                    found: row.len(),
                });
            }
            entries.extend_from_slice(row);
        }
        for i in 0..k {
            for j in 0..i {
                if entries[i * k + j] != entries[j * k + i] {
                    return Err(Error::Domain(format!(
                        "matrix is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        let real_part_positive_definite = real_cholesky_ok(k, &entries);
        Ok(Self {
            k,
            entries,
            real_part_positive_definite,
        })
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.k + j]
    }

    /// Whether every eigenvalue of `Re(A)` is positive.
    pub fn real_part_positive_definite(&self) -> bool {
        self.real_part_positive_definite
    }

    pub fn scaled(&self, s: f64) -> Self {
        let entries: Vec<Complex64> = self.entries.iter().map(|&z| z * s).collect();
        let real_part_positive_definite = real_cholesky_ok(self.k, &entries);
        Self {
            k: self.k,
            entries,
            real_part_positive_definite,
        }
    }

    pub fn determinant(&self) -> Complex64 {
        lu_determinant(self.k, self.entries.clone())
    }

    /// Solves `A x = b` by Gaussian elimination with partial pivoting.
    pub fn solve(&self, b: &[Complex64]) -> Result<Vec<Complex64>> {
        let k = self.k;
        if b.len() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                found: b.len(),
            });
        }
        let mut a = self.entries.clone();
        let mut x = b.to_vec();
        for col in 0..k {
            let piv = (col..k)
                .max_by(|&i, &j| a[i * k + col].norm().total_cmp(&a[j * k + col].norm()))
                .unwrap();
            if a[piv * k + col].norm() == 0.0 {
                return Err(Error::Domain("matrix is singular".into()));
            }
            if piv != col {
                for j in 0..k {
                    a.swap(piv * k + j, col * k + j);
                }
                x.swap(piv, col);
            }
            let d = a[col * k + col];
            for i in col + 1..k {
                let f = a[i * k + col] / d;
                for j in col..k {
                    let t = a[col * k + j];
                    a[i * k + j] -= f * t;
                }
                let t = x[col];
                x[i] -= f * t;
            }
        }
        for col in (0..k).rev() {
            let mut s = x[col];
            for j in col + 1..k {
                s -= a[col * k + j] * x[j];
            }
            x[col] = s / a[col * k + col];
        }
        Ok(x)
    }

    /// `√det(A)` continued from the positive root at `Re(A)` along
    /// `A(t) = (1 - t) Re(A) + t A`.
    ///
    /// Every `A(t)` shares the real part `Re(A)`, so when that is positive
    /// definite the determinant never vanishes on the path.
    pub fn sqrt_det_homotopy(&self) -> Result<Complex64> {
        self.require_integrable()?;
        let k = self.k;
        let at = |t: f64| -> Complex64 {
            let entries = self
                .entries
                .iter()
                .map(|z| Complex64::new(z.re, t * z.im))
                .collect();
            lu_determinant(k, entries)
        };
        let mut t: f64 = 0.0;
        let mut step: f64 = 1.0 / 16.0;
        let mut prev = at(0.0);
        let mut phase = 0.0;
        while t < 1.0 {
            let next_t = (t + step).min(1.0);
            let next = at(next_t);
            let delta = (next / prev).arg();
            if delta.abs() > PI / 8.0 && step > 1e-12 {
                step *= 0.5;
                continue;
            }
            phase += delta;
            prev = next;
            t = next_t;
            if delta.abs() < PI / 32.0 {
                step = (step * 2.0).min(0.25);
            }
        }
        let ln = Complex64::new(prev.norm().ln(), phase) * 0.5;
        Ok(ln.exp())
    }

    /// `√det(A)` as the product of principal square roots of the eigenvalues,
    /// for `k ≤ 2`. Eigenvalues of a complex symmetric matrix with positive
    /// definite real part lie in the open right half-plane, so this agrees
    /// with the homotopy branch.
    pub fn sqrt_det_direct(&self) -> Result<Complex64> {
        self.require_integrable()?;
        match self.k {
            1 => Ok(self.entries[0].sqrt()),
            2 => {
                let (a, b, d) = (self.get(0, 0), self.get(0, 1), self.get(1, 1));
                let half_tr = (a + d) * 0.5;
                let disc = ((a - d) * 0.5).powu(2) + b * b;
                let s = disc.sqrt();
                Ok((half_tr + s).sqrt() * (half_tr - s).sqrt())
            }
            k => Err(Error::Domain(format!(
                "direct square-root determinant only for k <= 2, got {k}"
            ))),
        }
    }

    fn require_integrable(&self) -> Result<()> {
        if self.real_part_positive_definite {
            Ok(())
        } else {
            Err(Error::NotIntegrable(
                "real part of the quadratic form is not positive definite".into(),
            ))
        }
    }
}

fn real_cholesky_ok(k: usize, entries: &[Complex64]) -> bool {
    let mut l = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..=i {
            let mut s = entries[i * k + j].re;
            for m in 0..j {
                s -= l[i * k + m] * l[j * k + m];
            }
            if i == j {
                if !(s > 0.0) {
                    return false;
                }
                l[i * k + i] = s.sqrt();
            } else {
                l[i * k + j] = s / l[j * k + j];
            }
        }
    }
    true
}

fn lu_determinant(k: usize, mut a: Vec<Complex64>) -> Complex64 {
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..k {
        let piv = (col..k)
            .max_by(|&i, &j| a[i * k + col].norm().total_cmp(&a[j * k + col].norm()))
            .unwrap();
        if a[piv * k + col].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if piv != col {
            for j in 0..k {
                a.swap(piv * k + j, col * k + j);
            }
            det = -det;
        }
        let d = a[col * k + col];
        det *= d;
        for i in col + 1..k {
            let f = a[i * k + col] / d;
            for j in col..k {
                let t = a[col * k + j];
                a[i * k + j] -= f * t;
            }
        }
    }
    det
}

/// `∫_{ℝ^k} exp(-(x, Ax) + 2(v, x)) dx` in closed form.
pub fn gaussian_integral(a: &ComplexSymMatrix, v: &[f64]) -> Result<Complex64> {
    if v.len() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: v.len(),
        });
    }
    let sqrt_det = a.sqrt_det_homotopy()?;
    let vc: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let sol = a.solve(&vc)?;
    let quad: Complex64 = vc.iter().zip(&sol).map(|(x, y)| x * y).sum();
    Ok(PI.powf(a.dim() as f64 / 2.0) / sqrt_det * quad.exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_asymmetric() {
        let rows = vec![vec![c(1.0, 0.0), c(0.0, 1.0)], vec![c(0.0, -1.0), c(1.0, 0.0)]];
        assert!(ComplexSymMatrix::from_rows(&rows).is_err());
    }

    #[test]
    fn identity_integral_is_pi() {
        let a = ComplexSymMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let v = gaussian_integral(&a, &[0.0, 0.0]).unwrap();
        assert!((v - c(PI, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn not_integrable_without_definite_real_part() {
        let a = ComplexSymMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, -0.5]]).unwrap();
        assert!(!a.real_part_positive_definite());
        assert!(matches!(
            gaussian_integral(&a, &[0.0, 0.0]),
            Err(Error::NotIntegrable(_))
        ));
        let purely_imag =
            ComplexSymMatrix::from_rows(&[vec![c(0.0, 1.0)]]).unwrap();
        assert!(gaussian_integral(&purely_imag, &[0.0]).is_err());
    }

    #[test]
    fn branch_follows_homotopy_past_negative_axis() {
        // det = (1 + 3i)^3 has argument beyond π; the principal root of det
        // picks the wrong branch.
        let z = c(1.0, 3.0);
        let o = c(0.0, 0.0);
        let a = ComplexSymMatrix::from_rows(&[vec![z, o, o], vec![o, z, o], vec![o, o, z]]).unwrap();
        let expected = z.sqrt().powu(3);
        assert!((a.sqrt_det_homotopy().unwrap() - expected).norm() < 1e-12);
        assert!((a.determinant().sqrt() + expected).norm() < 1e-12);
    }

    #[test]
    fn direct_and_homotopy_branches_agree_in_two_dimensions() {
        let mut state = 7u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        for _ in 0..200 {
            let (d1, d2, off) = (0.1 + next().abs(), 0.1 + next().abs(), 0.3 * next());
            let rows = vec![
                vec![c(d1 + off.abs(), 5.0 * next()), c(off, 5.0 * next())],
                vec![c(0.0, 0.0), c(d2 + off.abs(), 5.0 * next())],
            ];
            let rows = vec![rows[0].clone(), vec![rows[0][1], rows[1][1]]];
            let a = ComplexSymMatrix::from_rows(&rows).unwrap();
            assert!(a.real_part_positive_definite());
            let h = a.sqrt_det_homotopy().unwrap();
            assert!((h - a.sqrt_det_direct().unwrap()).norm() < 1e-12 * h.norm());
            assert!((h - a.determinant().sqrt()).norm() < 1e-12 * h.norm());
        }
    }

    #[test]
    fn solve_roundtrip() {
        let a = ComplexSymMatrix::from_rows(&[
            vec![c(2.0, 0.3), c(0.1, -0.4), c(0.0, 0.2)],
            vec![c(0.1, -0.4), c(1.5, 1.0), c(0.3, 0.0)],
            vec![c(0.0, 0.2), c(0.3, 0.0), c(1.0, -2.0)],
        ])
        .unwrap();
        let b = vec![c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.5)];
        let x = a.solve(&b).unwrap();
        for i in 0..3 {
            let row: Complex64 = (0..3).map(|j| a.get(i, j) * x[j]).sum();
            assert!((row - b[i]).norm() < 1e-13);
        }
    }
}
