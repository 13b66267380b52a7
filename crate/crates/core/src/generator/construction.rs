use super::{dual, sharp, LindbladGenerator, Superoperator};
use crate::analysis::{choi_positive, CHOI_TOL};
use crate::error::{Error, Result};
use crate::matrixcore::{trace_norm, ComplexMatrix};
use crate::states::FaithfulState;

/// Relative tolerance for `E_A(Q(1)) = E_A(Q^#(1))`.
pub const CRITERION_TOL: f64 = 1e-9;
const BALANCE_TOL: f64 = 1e-10;

fn require_cp(q: &Superoperator) -> Result<()> {
    let check = choi_positive(q, CHOI_TOL);
    if check.positive {
        Ok(())
    } else {
        Err(Error::NotCompletelyPositive {
            min_eigenvalue: check.min_eigenvalue,
        })
    }
}

/// `L_0(x) = Q(x) − ½(Q(1)x + xQ(1))` without the CP check.
fn unperturbed_unchecked(q: &Superoperator) -> Superoperator {
    let r = q.dimension();
    let id = ComplexMatrix::identity(r);
    let q1 = q.apply(&id);
    q.sub(
        &Superoperator::sandwich(&q1, &id)
            .add(&Superoperator::sandwich(&id, &q1))
            .scale(0.5),
    )
}

/// Unperturbed part `L_0(x) = Q(x) − ½(Q(1)x + xQ(1))` of a completely
/// positive `Q`; always satisfies `L_0(1) = 0`.
pub fn unperturbed(q: &Superoperator) -> Result<Superoperator> {
    require_cp(q)?;
    Ok(unperturbed_unchecked(q))
}

fn check_dims(l: &Superoperator, state: &FaithfulState) -> Result<()> {
    if l.dimension() != state.dimension() {
        return Err(Error::DimensionMismatch(format!(
            "map on M_{} with a state on M_{}",
            l.dimension(),
            state.dimension()
        )));
    }
    Ok(())
}

/// `‖L_*(Ω)‖_1`; zero iff `ω ∘ L = 0`.
pub fn invariance_defect(l: &Superoperator, state: &FaithfulState) -> Result<f64> {
    check_dims(l, state)?;
    trace_norm(&dual(l).apply(state.density()).hermitian_part())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvarianceCriterion {
    pub holds: bool,
    /// `‖E_A(Q(1)) − E_A(Q^#(1))‖_F`.
    pub residual: f64,
}

/// Solvability test for a unital `ω`-preserving generator with CP part `q`:
/// `E_A(Q(1)) = E_A(Q^#(1))`, i.e. `eQ(1)e = eQ^#(1)e` on every minimal
/// spectral projection `e` of `Ω`.
pub fn invariance_criterion(
    q: &Superoperator,
    state: &FaithfulState,
) -> Result<InvarianceCriterion> {
    check_dims(q, state)?;
    require_cp(q)?;
    let id = ComplexMatrix::identity(q.dimension());
    let q1 = q.apply(&id);
    let qs1 = sharp(q, state)?.apply(&id);
    let delta = &state.centralizer_expectation(&q1)? - &state.centralizer_expectation(&qs1)?;
    let residual = delta.frobenius_norm();
    Ok(InvarianceCriterion {
        holds: residual <= CRITERION_TOL * (1.0 + q1.frobenius_norm()),
        residual,
    })
}

/// Canonical skew-adjoint `ℓ` with `ℓΩ − Ωℓ = T − E_A(T)`:
/// `ℓ = Σ_{i≠j} (λ_j − λ_i)^{-1} e_i T e_j` over the merged spectral
/// projections. It satisfies `E_A(ℓ) = 0`.
pub fn perturbation_for_target(
    state: &FaithfulState,
    target: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    let t = target - &state.centralizer_expectation(target)?;
    let r = state.dimension();
    if state.is_tracial() {
        let norm = t.frobenius_norm();
        if norm > 1e-12 * (1.0 + target.frobenius_norm()) {
            return Err(Error::DegenerateState { norm });
        }
        return Ok(ComplexMatrix::zeros(r, r));
    }
    let e = state.spectral_projections();
    let lambda = state.distinct_eigenvalues();
    let mut ell = ComplexMatrix::zeros(r, r);
    for i in 0..e.len() {
        let left = e[i].matmul(&t);
        for j in 0..e.len() {
            if i != j {
                ell += &left.matmul(&e[j]).scale_real(1.0 / (lambda[j] - lambda[i]));
            }
        }
    }
    Ok(ell)
}

/// Perturbation `ℓ` such that `L'(x) = L(x) + [ℓ, x]` has
/// `ω ∘ L' = ω ∘ E_A L E_A`; `L` must preserve adjoints.
pub fn solve_perturbation(l: &Superoperator, state: &FaithfulState) -> Result<ComplexMatrix> {
    check_dims(l, state)?;
    let lstar_omega = dual(l).apply(state.density()).hermitian_part();
    perturbation_for_target(state, &lstar_omega)
}

/// Generator produced by [`build_preserving`], with its perturbation kept
/// separately for reporting.
#[derive(Debug, Clone)]
pub struct PreservingGenerator {
    pub generator: LindbladGenerator,
    /// Skew-adjoint part `ℓ` of the drift `k = −½Q(1) + ℓ`.
    pub perturbation: ComplexMatrix,
}

/// Unital `ω`-preserving generator
/// `L(x) = Ω^{-1/2}(Σ v x v*)Ω^{-1/2} + kx + xk*` for a balanced family
/// `Σ v v* = Σ v* v`.
pub fn build_preserving(state: &FaithfulState, v: &[ComplexMatrix]) -> Result<PreservingGenerator> {
    let r = state.dimension();
    if let Some(bad) = v.iter().find(|m| m.shape() != (r, r)) {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} Kraus operator on M_{r}",
            bad.rows(),
            bad.cols()
        )));
    }
    let mut balance = ComplexMatrix::zeros(r, r);
    let mut scale = 0.0f64;
    for m in v {
        let mm = m.matmul(&m.adjoint());
        scale = scale.max(mm.frobenius_norm());
        balance += &mm;
        balance -= &m.adjoint().matmul(m);
    }
    let defect = balance.frobenius_norm();
    if defect > BALANCE_TOL * scale.max(1.0) {
        return Err(Error::UnbalancedKraus { defect });
    }

    let kraus: Vec<ComplexMatrix> = v
        .iter()
        .map(|m| state.inv_sqrt_density().matmul(m))
        .collect();
    let q = Superoperator::kraus(r, &kraus);
    let q1 = q.apply(&ComplexMatrix::identity(r)).hermitian_part();
    let ell = solve_perturbation(&unperturbed_unchecked(&q), state)?;
    let drift = &q1.scale_real(-0.5) + &ell;
    Ok(PreservingGenerator {
        generator: LindbladGenerator::new(kraus, drift)?,
        perturbation: ell,
    })
}
