use serde::{Deserialize, Serialize};

use super::gap::{spectral_gap, DEFAULT_M_MAX};
use crate::error::{Error, Result};
use crate::generator::{invariance_defect, LindbladGenerator, Superoperator};
use crate::matrixcore::{gram_schmidt, herm_eig, null_space, subspace::hs, ComplexMatrix};
use crate::states::FaithfulState;

/// Relative singular-value cutoff for commutants and fixed-point spaces.
pub const KERNEL_TOL: f64 = 1e-9;
/// Choi matrices are positive if their least eigenvalue is at least `-CHOI_TOL`.
pub const CHOI_TOL: f64 = 1e-9;
/// Invariance and unitality defects tolerated by [`purity_verdict`].
pub const PRECONDITION_TOL: f64 = 1e-8;

fn commutation_block(s: &ComplexMatrix) -> ComplexMatrix {
    let id = ComplexMatrix::identity(s.rows());
    &s.kron(&id) - &id.kron(&s.transpose())
}

/// Orthonormal (Hilbert–Schmidt) basis of `{x : [x, S] = 0 for all S in ops}`.
pub fn commutant(ops: &[ComplexMatrix], tol: f64) -> Result<Vec<ComplexMatrix>> {
    let first = ops.first().ok_or(Error::EmptyInput)?;
    if !first.is_square() || ops.iter().any(|s| s.shape() != first.shape()) {
        return Err(Error::DimensionMismatch(
            "commutant needs equal-sized square operators".into(),
        ));
    }
    let r = first.rows();
    let n = r * r;
    let mut stacked = ComplexMatrix::zeros(n * ops.len(), n);
    for (b, s) in ops.iter().enumerate() {
        let block = commutation_block(s);
        for i in 0..n {
            for j in 0..n {
                stacked[(b * n + i, j)] = block[(i, j)];
            }
        }
    }
    Ok(null_space(&stacked, tol)?
        .into_iter()
        .map(|v| ComplexMatrix::unvectorize(v.as_slice(), r))
        .collect())
}

/// Orthonormal basis of `{x : L(x) = 0}`. When `L(1) = 0` the normalized
/// identity is the first element.
pub fn fixed_point_algebra(l: &Superoperator, tol: f64) -> Result<Vec<ComplexMatrix>> {
    let r = l.dimension();
    let kernel: Vec<ComplexMatrix> = null_space(l.matrix(), tol)?
        .into_iter()
        .map(|v| ComplexMatrix::unvectorize(v.as_slice(), r))
        .collect();
    let id = ComplexMatrix::identity(r).scale_real(1.0 / (r as f64).sqrt());
    let in_kernel = kernel
        .iter()
        .map(|k| k.hs_inner(&id).norm_sqr())
        .sum::<f64>()
        > 1.0 - 1e-8;
    if !in_kernel {
        return Ok(kernel);
    }
    let dim = kernel.len();
    let mut seeds = vec![id];
    seeds.extend(kernel);
    Ok(gram_schmidt(&seeds, hs, 1e-6)
        .into_iter()
        .take(dim)
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChoiCheck {
    pub positive: bool,
    pub min_eigenvalue: f64,
}

/// Complete positivity via the Choi matrix `Σ E_ij ⊗ S(E_ij)`. A Choi matrix
/// that is not Hermitian (relative defect above `1e-9`) is reported as not
/// positive, with the least eigenvalue of its Hermitian part.
pub fn choi_positive(s: &Superoperator, tol: f64) -> ChoiCheck {
    let c = s.choi();
    let hermitian = c.anti_hermitian_defect() <= 1e-9 * c.frobenius_norm().max(1.0);
    let min_eigenvalue = herm_eig(&c.hermitian_part())
        .map(|e| e.eigenvalues[0])
        .unwrap_or(f64::NAN);
    ChoiCheck {
        positive: hermitian && min_eigenvalue >= -tol,
        min_eigenvalue,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PurityCertificate {
    pub ergodic: bool,
    pub irreducible: bool,
    pub fixed_point_dim: usize,
    pub commutant_dim: usize,
    pub spectral_gap_estimate: f64,
    pub method_notes: String,
}

impl PurityCertificate {
    pub fn is_pure(&self) -> bool {
        self.ergodic && self.irreducible
    }
}

/// Purity, ergodicity and irreducibility of a unital generator with a
/// faithful invariant state. The three notions coincide under those
/// hypotheses, so a disagreement is reported as an error.
pub fn purity_verdict(
    generator: &LindbladGenerator,
    state: &FaithfulState,
) -> Result<PurityCertificate> {
    purity_verdict_with(generator, state, DEFAULT_M_MAX)
}

pub fn purity_verdict_with(
    generator: &LindbladGenerator,
    state: &FaithfulState,
    m_max: usize,
) -> Result<PurityCertificate> {
    let unital = generator.unitality_defect();
    if unital > PRECONDITION_TOL {
        return Err(Error::NotUnital { defect: unital });
    }
    let l = generator.as_superoperator();
    let defect = invariance_defect(&l, state)?;
    if defect > PRECONDITION_TOL {
        return Err(Error::NoInvariantState { defect });
    }
    let commutant_dim = commutant(&generator.operator_set(), KERNEL_TOL)?.len();
    let fixed_point_dim = fixed_point_algebra(&l, KERNEL_TOL)?.len();
    let ergodic = fixed_point_dim == 1;
    let irreducible = commutant_dim == 1;
    if ergodic != irreducible {
        return Err(Error::EquivalenceViolated {
            ergodic,
            irreducible,
        });
    }
    let gap = spectral_gap(&l, state, m_max)?;
    Ok(PurityCertificate {
        ergodic,
        irreducible,
        fixed_point_dim,
        commutant_dim,
        spectral_gap_estimate: gap.epsilon,
        method_notes: format!(
            "kernel and commutant via one-sided Jacobi null space (rel tol {KERNEL_TOL:e}); \
             gap from min_m ||exp(L_0)^m||^(1/m), m <= {m_max}, on the omega-mean-zero subspace; \
             invariance defect {defect:.3e}, unitality defect {unital:.3e}"
        ),
    })
}
