use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not Hermitian (anti-Hermitian part {defect:.3e} relative to norm)")]
    NotHermitian { defect: f64 },
    #[error("Jacobi iteration did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("empty input")]
    EmptyInput,
    #[error("not a state: {0}")]
    NotAState(String),
    #[error("basis is not unitary (defect {defect:.3e})")]
    NotUnitary { defect: f64 },
    #[error("basis is not orthonormal (defect {defect:.3e})")]
    NotOrthonormal { defect: f64 },
    #[error("operator is numerically scalar; no admissible basis exists")]
    ScalarInput,
    #[error("map is not completely positive (Choi min eigenvalue {min_eigenvalue:.3e})")]
    NotCompletelyPositive { min_eigenvalue: f64 },
    #[error("state has a single distinct eigenvalue but the off-centralizer target is nonzero ({norm:.3e})")]
    DegenerateState { norm: f64 },
    #[error("Kraus family is unbalanced: |sum v v* - sum v* v| = {defect:.3e}")]
    UnbalancedKraus { defect: f64 },
    #[error("state is tracial; a non-tracial state is required")]
    TracialState,
    #[error("epsilon too large: perturbed density has eigenvalue {min_eigenvalue:.3e}")]
    EpsilonTooLarge { min_eigenvalue: f64 },
    #[error("generator is not unital (|L(1)| = {defect:.3e})")]
    NotUnital { defect: f64 },
    #[error("state is not invariant under the generator (defect {defect:.3e})")]
    NoInvariantState { defect: f64 },
    #[error("mean-zero subspace is not invariant (defect {defect:.3e})")]
    NotInvariant { defect: f64 },
    #[error("not a density matrix: {0}")]
    NotADensity(String),
    #[error("index {n} out of range 1..={max} for r = {r}")]
    IndexOutOfRange { r: usize, n: usize, max: usize },
    #[error("ergodicity ({ergodic}) and irreducibility ({irreducible}) verdicts disagree")]
    EquivalenceViolated { ergodic: bool, irreducible: bool },
    #[error("construction failed: {0}")]
    ConstructionFailed(String),
    #[error("invalid time grid: {0}")]
    InvalidGrid(String),
    #[error("schema violation: {0}")]
    Schema(String),
}
