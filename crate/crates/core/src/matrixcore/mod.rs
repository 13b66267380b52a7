//! Dense complex kernels shared by every other module.

pub mod eigen;
pub mod expm;
pub mod matrix;
pub mod subspace;

pub use eigen::{
    herm_eig, herm_eig_with, herm_power, spectral_norm, svd_right, HermEigResult, JacobiOptions,
    SvdResult,
};
pub use expm::expm;
pub use matrix::ComplexMatrix;
pub use subspace::{gram_rank, gram_schmidt, null_space, subspace_distance, trace_norm};
