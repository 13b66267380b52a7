//! Cyclic Jacobi kernels: Hermitian eigendecomposition and the one-sided
//! (Hestenes) variant used for singular values and null spaces.

use num_complex::Complex64;

use super::matrix::{ComplexMatrix, ONE, ZERO};
use crate::error::{Error, Result};

pub const DEFAULT_MAX_SWEEPS: usize = 100;
pub const DEFAULT_OFF_DIAGONAL_TOL: f64 = 1e-14;
/// Relative anti-Hermitian defect tolerated on input.
pub const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy)]
pub struct JacobiOptions {
    pub max_sweeps: usize,
    /// Stop once the off-diagonal Frobenius mass is below `off_tol * ‖A‖_F`.
    pub off_tol: f64,
}

impl Default for JacobiOptions {
    fn default() -> Self {
        Self {
            max_sweeps: DEFAULT_MAX_SWEEPS,
            off_tol: DEFAULT_OFF_DIAGONAL_TOL,
        }
    }
}

#[derive(Debug, Clone)]
pub struct HermEigResult {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Unitary; column `k` belongs to `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

impl HermEigResult {
    /// `U f(Λ) U*`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let u = &self.eigenvectors;
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| u[(i, k)] * u[(j, k)].conj() * f(self.eigenvalues[k]))
                .sum()
        })
    }
}

/// 2×2 unitary `[[g00, g01], [g10, g11]]` that diagonalizes the Hermitian
/// block `[[a, g], [conj(g), b]]` under `G* B G`.
fn jacobi_rotation(a: f64, b: f64, g: Complex64) -> [Complex64; 4] {
    let abs_g = g.norm();
    let phase = g / abs_g;
    let theta = (b - a) / (2.0 * abs_g);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let w_bar = phase.conj();
    [
        Complex64::new(c, 0.0),
        Complex64::new(s, 0.0),
        -w_bar * s,
        w_bar * c,
    ]
}

/// `M ← M G` on columns `p, q`.
fn rotate_columns(m: &mut ComplexMatrix, p: usize, q: usize, g: &[Complex64; 4]) {
    for k in 0..m.rows() {
        let mp = m[(k, p)];
        let mq = m[(k, q)];
        m[(k, p)] = mp * g[0] + mq * g[2];
        m[(k, q)] = mp * g[1] + mq * g[3];
    }
}

/// `M ← G* M` on rows `p, q`.
fn rotate_rows(m: &mut ComplexMatrix, p: usize, q: usize, g: &[Complex64; 4]) {
    for k in 0..m.cols() {
        let mp = m[(p, k)];
        let mq = m[(q, k)];
        m[(p, k)] = g[0].conj() * mp + g[2].conj() * mq;
        m[(q, k)] = g[1].conj() * mp + g[3].conj() * mq;
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

pub fn herm_eig(a: &ComplexMatrix) -> Result<HermEigResult> {
    herm_eig_with(a, JacobiOptions::default())
}

pub fn herm_eig_with(a: &ComplexMatrix, opts: JacobiOptions) -> Result<HermEigResult> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "herm_eig of a {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    let norm = a.frobenius_norm();
    let defect = a.anti_hermitian_defect();
    if defect > HERMITIAN_TOL * norm {
        return Err(Error::NotHermitian {
            defect: defect / norm,
        });
    }
    let n = a.rows();
    let mut work = a.hermitian_part();
    let mut vecs = ComplexMatrix::identity(n);
    let threshold = opts.off_tol * norm;

    let mut converged = norm == 0.0;
    for _ in 0..opts.max_sweeps {
        if converged || off_diagonal_norm(&work) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let g = work[(p, q)];
                if g.norm() <= f64::MIN_POSITIVE {
                    continue;
                }
                let rot = jacobi_rotation(work[(p, p)].re, work[(q, q)].re, g);
                rotate_columns(&mut work, p, q, &rot);
                rotate_rows(&mut work, p, q, &rot);
                work[(p, q)] = ZERO;
                work[(q, p)] = ZERO;
                work[(p, p)] = Complex64::new(work[(p, p)].re, 0.0);
                work[(q, q)] = Complex64::new(work[(q, q)].re, 0.0);
                rotate_columns(&mut vecs, p, q, &rot);
            }
        }
    }
    if !converged && off_diagonal_norm(&work) > threshold {
        return Err(Error::NoConvergence {
            sweeps: opts.max_sweeps,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| work[(i, i)].re.total_cmp(&work[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| work[(i, i)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, k| vecs[(i, order[k])]);
    Ok(HermEigResult {
        eigenvalues,
        eigenvectors,
    })
}

/// Singular values (descending) and matching right singular vectors.
#[derive(Debug, Clone)]
pub struct SvdResult {
    pub singular_values: Vec<f64>,
    /// Unitary `n × n`; column `k` pairs with `singular_values[k]`.
    pub right_vectors: ComplexMatrix,
}

/// One-sided Jacobi: orthogonalizes the columns of `a` by right rotations.
/// Small singular values are resolved to absolute accuracy `~ m·eps·‖A‖`,
/// which is what null-space extraction needs.
pub fn svd_right(a: &ComplexMatrix) -> Result<SvdResult> {
    let (m, n) = a.shape();
    let mut work = a.clone();
    let mut v = ComplexMatrix::identity(n);
    let tol = (m as f64 * f64::EPSILON).max(1e-15);
    // Columns reduced to rounding noise cannot be orthogonalized relative to
    // their own norm; below this floor they count as zero.
    let floor = (tol * a.frobenius_norm()).powi(2);

    let mut converged = false;
    for _ in 0..DEFAULT_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = ZERO;
                for k in 0..m {
                    let xp = work[(k, p)];
                    let xq = work[(k, q)];
                    alpha += xp.norm_sqr();
                    beta += xq.norm_sqr();
                    gamma += xp.conj() * xq;
                }
                if alpha <= floor || beta <= floor || gamma.norm() <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let rot = jacobi_rotation(alpha, beta, gamma);
                rotate_columns(&mut work, p, q, &rot);
                rotate_columns(&mut v, p, q, &rot);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            sweeps: DEFAULT_MAX_SWEEPS,
        });
    }

    let norms: Vec<f64> = (0..n)
        .map(|j| {
            work.column(j)
                .iter()
                .map(|z| z.norm_sqr())
                .sum::<f64>()
                .sqrt()
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    Ok(SvdResult {
        singular_values: order.iter().map(|&i| norms[i]).collect(),
        right_vectors: ComplexMatrix::from_fn(n, n, |i, k| v[(i, order[k])]),
    })
}

/// Largest singular value.
pub fn spectral_norm(a: &ComplexMatrix) -> f64 {
    // Jacobi on a finite matrix only fails to converge on NaN input.
    svd_right(a)
        .map(|s| s.singular_values[0])
        .unwrap_or(f64::NAN)
}

/// `A^{p}` for Hermitian positive semidefinite `A`, via the spectral theorem.
pub fn herm_power(a: &ComplexMatrix, p: f64) -> Result<ComplexMatrix> {
    let eig = herm_eig(a)?;
    Ok(eig.reconstruct_with(|x| x.max(0.0).powf(p)))
}

pub(crate) fn unit_vector(n: usize, k: usize) -> Vec<Complex64> {
    let mut v = vec![ZERO; n];
    v[k] = ONE;
    v
}
