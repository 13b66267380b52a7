//! Certificates and dynamics: commutants, fixed points, purity verdicts,
//! complete positivity, semigroup evolution, convergence trajectories and
//! spectral-gap estimates on the `ω`-mean-zero subspace.

mod certify;
mod dynamics;
mod gap;

pub use certify::{
    choi_positive, commutant, fixed_point_algebra, purity_verdict, purity_verdict_with, ChoiCheck,
    PurityCertificate, CHOI_TOL, KERNEL_TOL, PRECONDITION_TOL,
};
pub use dynamics::{
    contraction_check, contraction_norms, evolve, stationary_witness, time_grid, trajectory,
    trajectory_with_gap, ConvergenceReport, GridKind, CONTRACTION_TOL, DISTANCE_FLOOR, GAP_SLACK,
    LOG_GRID_START,
};
pub use gap::{
    compress, l2_basis, l2_operator_norm, mean_zero_basis, omega_inner, spectral_gap, GapEstimate,
    DEFAULT_M_MAX,
};
