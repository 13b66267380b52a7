use crate::error::{Error, Result};
use crate::generator::{invariance_defect, Superoperator};
use crate::matrixcore::{expm, gram_schmidt, spectral_norm, ComplexMatrix};
use crate::states::FaithfulState;

use super::certify::PRECONDITION_TOL;

/// Default number of powers in the Gelfand iteration.
pub const DEFAULT_M_MAX: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapEstimate {
    /// `−ln min_m ‖A^m‖^{1/m}`, clamped at zero.
    pub epsilon: f64,
    /// `max_m ‖A^m‖ e^{mε}` over the computed powers (including `m = 0`).
    pub constant: f64,
    pub powers: usize,
}

/// `⟨x, y⟩_ω = ω(y* x)`.
pub fn omega_inner(
    state: &FaithfulState,
    x: &ComplexMatrix,
    y: &ComplexMatrix,
) -> num_complex::Complex64 {
    state.expect(&y.adjoint().matmul(x))
}

/// `ω`-orthonormal basis of `H_0 = {x : ω(x) = 0}`, from the matrix units
/// `E_ij − ω(E_ij)·1` in lexicographic order.
pub fn mean_zero_basis(state: &FaithfulState) -> Vec<ComplexMatrix> {
    let r = state.dimension();
    let id = ComplexMatrix::identity(r);
    let seeds: Vec<ComplexMatrix> = (0..r * r)
        .map(|p| {
            let e = ComplexMatrix::unit(r, p / r, p % r);
            &e - &id.scale(state.expect(&e))
        })
        .collect();
    let basis = gram_schmidt(&seeds, |x, y| omega_inner(state, x, y), 1e-10);
    debug_assert_eq!(basis.len(), r * r - 1);
    basis
}

/// `ω`-orthonormal basis of `M_r`: the identity followed by [`mean_zero_basis`].
pub fn l2_basis(state: &FaithfulState) -> Vec<ComplexMatrix> {
    let mut basis = vec![ComplexMatrix::identity(state.dimension())];
    basis.extend(mean_zero_basis(state));
    basis
}

/// Matrix `A_ab = ⟨S(b_b), b_a⟩_ω` of `S` compressed to the span of an
/// `ω`-orthonormal family.
pub fn compress(
    s: &Superoperator,
    basis: &[ComplexMatrix],
    state: &FaithfulState,
) -> ComplexMatrix {
    let images: Vec<ComplexMatrix> = basis.iter().map(|b| s.apply(b)).collect();
    ComplexMatrix::from_fn(basis.len(), basis.len(), |a, b| {
        omega_inner(state, &images[b], &basis[a])
    })
}

/// Operator norm of `S` on `L²(M, ω)`.
pub fn l2_operator_norm(s: &Superoperator, state: &FaithfulState) -> f64 {
    spectral_norm(&compress(s, &l2_basis(state), state))
}

pub(crate) fn require_invariant(l: &Superoperator, state: &FaithfulState) -> Result<()> {
    let defect = invariance_defect(l, state)?;
    if defect > PRECONDITION_TOL {
        return Err(Error::NotInvariant { defect });
    }
    Ok(())
}

/// Decay rate of `exp(tL)` on `H_0`, from the Gelfand formula applied to
/// `A = exp(L)|_{H_0}`. Since `‖A^m‖^{1/m} ≥ ρ(A)` for every `m`, the
/// estimate never exceeds the true gap.
pub fn spectral_gap(l: &Superoperator, state: &FaithfulState, m_max: usize) -> Result<GapEstimate> {
    require_invariant(l, state)?;
    let m_max = m_max.max(1);
    let a = compress(
        &Superoperator::from_matrix(l.dimension(), expm(l.matrix())?)?,
        &mean_zero_basis(state),
        state,
    );

    // ln ‖A^m‖, with the running power kept at unit norm so that nothing
    // underflows for large gaps.
    let mut log_norms = Vec::with_capacity(m_max);
    let mut power = ComplexMatrix::identity(a.rows());
    let mut log_scale = 0.0;
    for _ in 0..m_max {
        power = power.matmul(&a);
        let norm = spectral_norm(&power);
        if norm == 0.0 {
            log_norms.push(f64::NEG_INFINITY);
            break;
        }
        log_scale += norm.ln();
        log_norms.push(log_scale);
        power = power.scale_real(1.0 / norm);
    }
    let epsilon = log_norms
        .iter()
        .enumerate()
        .map(|(i, ln)| -ln / (i + 1) as f64)
        .fold(0.0, f64::max);
    let constant = if epsilon.is_finite() {
        log_norms
            .iter()
            .enumerate()
            .map(|(i, ln)| (ln + epsilon * (i + 1) as f64).exp())
            .fold(1.0, f64::max)
    } else {
        1.0
    };
    Ok(GapEstimate {
        epsilon,
        constant,
        powers: log_norms.len(),
    })
}
