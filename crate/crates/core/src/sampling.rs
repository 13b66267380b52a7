//! Seeded random matrices, states, and densities.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::matrixcore::{gram_schmidt, subspace::hs, ComplexMatrix};
use crate::states::FaithfulState;

/// Entries i.i.d. standard complex Gaussian.
pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    })
}

pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    gaussian_matrix(rng, n, n).hermitian_part()
}

/// Haar-ish unitary: Gram–Schmidt on the columns of a Gaussian matrix.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    loop {
        let g = gaussian_matrix(rng, n, n);
        let cols: Vec<ComplexMatrix> = (0..n)
            .map(|j| ComplexMatrix::column_vector(&g.column(j)))
            .collect();
        let q = gram_schmidt(&cols, hs, 1e-8);
        if q.len() == n {
            let mut u = ComplexMatrix::zeros(n, n);
            for (j, c) in q.iter().enumerate() {
                u.set_column(j, c.as_slice());
            }
            return u;
        }
    }
}

/// Eigenvalue list drawn uniformly from `[min_weight, 1]`, normalized and
/// sorted decreasing.
pub fn eigenvalue_list<R: Rng + ?Sized>(rng: &mut R, r: usize, min_weight: f64) -> Vec<f64> {
    let mut raw: Vec<f64> = (0..r).map(|_| rng.random_range(min_weight..=1.0)).collect();
    let sum: f64 = raw.iter().sum();
    raw.iter_mut().for_each(|l| *l /= sum);
    raw.sort_by(|a, b| b.total_cmp(a));
    // Absorb rounding so the list sums to one within the state tolerance.
    let drift = 1.0 - raw.iter().sum::<f64>();
    raw[0] += drift;
    raw
}

/// Faithful state in a random basis with weights bounded below by `min_weight`
/// before normalization.
pub fn faithful_state<R: Rng + ?Sized>(rng: &mut R, r: usize, min_weight: f64) -> FaithfulState {
    let list = eigenvalue_list(rng, r, min_weight);
    let basis = unitary(rng, r);
    FaithfulState::new(&list, &basis).expect("sampled state is valid by construction")
}

/// Density `G G* / trace(G G*)` for Gaussian `G` (full rank almost surely).
pub fn density<R: Rng + ?Sized>(rng: &mut R, r: usize) -> ComplexMatrix {
    let g = gaussian_matrix(rng, r, r);
    let w = g.matmul(&g.adjoint());
    let tr = w.trace().re;
    w.scale_real(1.0 / tr).hermitian_part()
}
