use num_complex::Complex64;

use super::eigen::{herm_eig, svd_right};
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

pub const DEFAULT_NULL_SPACE_TOL: f64 = 1e-9;
pub const DEFAULT_GRAM_RANK_TOL: f64 = 1e-10;

/// Sum of absolute eigenvalues of a Hermitian matrix.
pub fn trace_norm(a: &ComplexMatrix) -> Result<f64> {
    Ok(herm_eig(a)?.eigenvalues.iter().map(|l| l.abs()).sum())
}

/// Orthonormal basis (as `n × 1` columns) of `{x : ‖Ax‖ ≤ tol·‖A‖·‖x‖}`.
pub fn null_space(a: &ComplexMatrix, tol: f64) -> Result<Vec<ComplexMatrix>> {
    assert!(tol > 0.0, "null_space tolerance must be positive");
    let svd = svd_right(a)?;
    let cutoff = tol * svd.singular_values[0];
    Ok(svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= cutoff)
        .map(|(k, _)| ComplexMatrix::column_vector(&svd.right_vectors.column(k)))
        .collect())
}

/// Rank of the Gram matrix `G_ij = trace(A_i* A_j)`, counting eigenvalues
/// above `tol · λ_max`.
pub fn gram_rank(vectors: &[ComplexMatrix], tol: f64) -> Result<usize> {
    let first = vectors.first().ok_or(Error::EmptyInput)?;
    if vectors.iter().any(|v| v.shape() != first.shape()) {
        return Err(Error::DimensionMismatch(
            "gram_rank inputs differ in shape".into(),
        ));
    }
    let k = vectors.len();
    let gram = ComplexMatrix::from_fn(k, k, |i, j| vectors[i].hs_inner(&vectors[j]));
    let eig = herm_eig(&gram)?;
    let max = eig.eigenvalues.last().copied().unwrap_or(0.0);
    if max <= 0.0 {
        return Ok(0);
    }
    Ok(eig.eigenvalues.iter().filter(|&&l| l > tol * max).count())
}

/// Modified Gram–Schmidt with one re-orthogonalization pass. Vectors whose
/// residual norm falls below `drop_tol` times their original norm are dropped.
pub fn gram_schmidt(
    vectors: &[ComplexMatrix],
    inner: impl Fn(&ComplexMatrix, &ComplexMatrix) -> Complex64,
    drop_tol: f64,
) -> Vec<ComplexMatrix> {
    let mut basis: Vec<ComplexMatrix> = Vec::new();
    for v in vectors {
        let original = inner(v, v).re.sqrt();
        if original == 0.0 {
            continue;
        }
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                // inner(x, y) is linear in the first slot.
                let coeff = inner(&w, b);
                w -= &b.scale(coeff);
            }
        }
        let norm = inner(&w, &w).re.sqrt();
        if norm > drop_tol * original {
            basis.push(w.scale_real(1.0 / norm));
        }
    }
    basis
}

/// Hilbert–Schmidt inner product `⟨x, y⟩ = trace(y* x)`.
pub fn hs(x: &ComplexMatrix, y: &ComplexMatrix) -> Complex64 {
    y.hs_inner(x)
}

/// Largest residual of either orthonormal basis projected onto the other's
/// span. Zero iff the spans coincide; near one if the dimensions differ.
pub fn subspace_distance(a: &[ComplexMatrix], b: &[ComplexMatrix]) -> f64 {
    fn residual(v: &ComplexMatrix, basis: &[ComplexMatrix]) -> f64 {
        let mut w = v.clone();
        for u in basis {
            w -= &u.scale(u.hs_inner(v));
        }
        w.frobenius_norm()
    }
    let ab = a.iter().map(|v| residual(v, b)).fold(0.0, f64::max);
    let ba = b.iter().map(|v| residual(v, a)).fold(0.0, f64::max);
    ab.max(ba)
}
