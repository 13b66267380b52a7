use super::{invariance_defect, solve_perturbation, Superoperator};
use crate::error::{Error, Result};
use crate::matrixcore::{herm_eig, ComplexMatrix};
use crate::states::{trace_pair, FaithfulState};

/// A non-invariant unperturbed generator and the perturbation that repairs it.
#[derive(Debug, Clone)]
pub struct PerturbationDemo {
    /// `L(x) = ω'(x)·1 − x`.
    pub l_before: Superoperator,
    pub ell: ComplexMatrix,
    /// `L(x) + [ℓ, x]`.
    pub l_after: Superoperator,
    pub defect_before: f64,
    pub defect_after: f64,
    /// `Ω' = Ω + ε(v + v*)`.
    pub perturbed_density: ComplexMatrix,
    /// Partial isometry from the lowest eigenspace into the next one.
    pub partial_isometry: ComplexMatrix,
}

/// Unit vector in the range of a spectral projection, taken from the
/// state's eigenbasis.
fn range_vector(state: &FaithfulState, projection: &ComplexMatrix) -> Vec<num_complex::Complex64> {
    let basis = state.basis();
    (0..state.dimension())
        .map(|k| basis.column(k))
        .find(|col| {
            let image = projection.matvec(col);
            image
                .iter()
                .zip(col)
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                < 1e-20
        })
        .expect("every spectral projection contains an eigenbasis vector")
}

/// Shows that for a non-tracial state an unperturbed generator can fail to
/// preserve `ω` while a commutator perturbation fixes it. `P(x) = ω'(x)·1`
/// with `ω'` the state of density `Ω + ε(v + v*)`, and `v` a rank-one partial
/// isometry with `v*v ≤ e_1`, `vv* ≤ e_2`.
pub fn necessity_demo(state: &FaithfulState, epsilon: f64) -> Result<PerturbationDemo> {
    if state.is_tracial() {
        return Err(Error::TracialState);
    }
    let e = state.spectral_projections();
    let xi = range_vector(state, &e[0]);
    let eta = range_vector(state, &e[1]);
    let v = ComplexMatrix::outer(&eta, &xi);
    let perturbed_density = state.density() + &(&v + &v.adjoint()).scale_real(epsilon);

    let min_eigenvalue = herm_eig(&perturbed_density.hermitian_part())?.eigenvalues[0];
    if min_eigenvalue <= 0.0 {
        return Err(Error::EpsilonTooLarge { min_eigenvalue });
    }

    let r = state.dimension();
    let id = ComplexMatrix::identity(r);
    let rank_one = Superoperator::from_fn(r, |x| {
        id.scale(trace_pair(&perturbed_density, x).expect("dimensions agree"))
    });
    let l_before = rank_one.sub(&Superoperator::identity(r));
    let defect_before = invariance_defect(&l_before, state)?;
    let ell = solve_perturbation(&l_before, state)?;
    let l_after = l_before.add(&Superoperator::commutator(&ell));
    let defect_after = invariance_defect(&l_after, state)?;

    Ok(PerturbationDemo {
        l_before,
        ell,
        l_after,
        defect_before,
        defect_after,
        perturbed_density,
        partial_isometry: v,
    })
}
