//! Construction and certification of quantum dynamical semigroups on
//! `M_r(ℂ)` that preserve a faithful state.
//!
//! * [`matrixcore`]: dense complex kernels (Jacobi eigensolver and SVD,
//!   matrix exponential, null spaces, trace norm).
//! * [`states`]: faithful states and the centralizer expectation.
//! * [`weyl`]: admissible bases and clock/shift unitaries.
//! * [`generator`]: Lindblad generators, duals, the solvability criterion
//!   and the perturbation solver.
//! * [`analysis`]: purity certificates, evolution, trajectories and gaps.
//! * [`flowbuild`]: pure state-preserving generators of a prescribed index.
//! * [`schema`]: JSON documents for states, generators and models.

pub mod analysis;
pub mod error;
pub mod flowbuild;
pub mod generator;
pub mod matrixcore;
pub mod sampling;
pub mod schema;
pub mod states;
pub mod weyl;

pub use analysis::{ConvergenceReport, GapEstimate, GridKind, PurityCertificate};
pub use error::{Error, Result};
pub use flowbuild::{build_pure_flow, Branch, MetricOperatorSpace, PureFlowModel};
pub use generator::{LindbladGenerator, Superoperator};
pub use matrixcore::ComplexMatrix;
pub use num_complex::Complex64;
pub use states::FaithfulState;
pub use weyl::{WeylFamily, WeylPair};
