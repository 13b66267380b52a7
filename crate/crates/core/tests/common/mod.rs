//! Test-only oracles and instance generators. The oracles recompute
//! quantities by routes that do not share code with the library path they
//! check.

#![allow(dead_code)]

use absorbing_flows::flowbuild::build_pure_flow;
use absorbing_flows::matrixcore::herm_eig;
use absorbing_flows::sampling;
use absorbing_flows::{Complex64, ComplexMatrix, FaithfulState, LindbladGenerator, Superoperator};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn flip() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
}

/// `‖A‖_1 = Σ|λ|` for Hermitian `A`, from the eigenvalues.
pub fn trace_norm_oracle(a: &ComplexMatrix) -> f64 {
    herm_eig(&a.hermitian_part())
        .unwrap()
        .eigenvalues
        .iter()
        .map(|l| l.abs())
        .sum()
}

/// Perturbation computed entrywise in the eigenbasis of `Ω`:
/// `ℓ'_ij = T'_ij / (λ_j − λ_i)` when the eigenvalues differ, 0 otherwise.
pub fn perturbation_oracle(
    state: &FaithfulState,
    t: &ComplexMatrix,
    merge_tol: f64,
) -> ComplexMatrix {
    let b = state.basis();
    let lam = state.eigenvalue_list();
    let tp = b.adjoint().matmul(t).matmul(b);
    let r = lam.len();
    let lp = ComplexMatrix::from_fn(r, r, |i, j| {
        let d = lam[j] - lam[i];
        if d.abs() <= merge_tol * lam[i].max(lam[j]) {
            c(0.0, 0.0)
        } else {
            tp[(i, j)] / d
        }
    });
    b.matmul(&lp).matmul(&b.adjoint())
}

/// Choi matrix `Σ E_ij ⊗ S(E_ij)` assembled block by block from `apply`.
pub fn choi_oracle(s: &Superoperator) -> ComplexMatrix {
    let r = s.dimension();
    let mut out = ComplexMatrix::zeros(r * r, r * r);
    for i in 0..r {
        for j in 0..r {
            let block = s.apply(&ComplexMatrix::unit(r, i, j));
            for a in 0..r {
                for b in 0..r {
                    out[(i * r + a, j * r + b)] = block[(a, b)];
                }
            }
        }
    }
    out
}

pub fn min_eigenvalue(h: &ComplexMatrix) -> f64 {
    herm_eig(&h.hermitian_part()).unwrap().eigenvalues[0]
}

/// `exp(tL)(x)` for `L(x) = ω(x)·1 − x`.
pub fn depolarizing_flow(state: &FaithfulState, t: f64, x: &ComplexMatrix) -> ComplexMatrix {
    let id = ComplexMatrix::identity(state.dimension());
    &x.scale_real((-t).exp()) + &id.scale(state.expect(x) * (1.0 - (-t).exp()))
}

pub fn random_matrix<R: Rng>(rng: &mut R, r: usize) -> ComplexMatrix {
    sampling::gaussian_matrix(rng, r, r)
}

pub fn random_state<R: Rng>(rng: &mut R, r: usize) -> FaithfulState {
    sampling::faithful_state(rng, r, 0.2)
}

/// Unital generator preserving `Ω = U diag(p·Ω_1, (1−p)·Ω_2) U*` whose
/// operators are block diagonal in the rotated frame, so the commutant
/// contains both block projections.
pub fn reducible_generator<R: Rng>(rng: &mut R) -> (LindbladGenerator, FaithfulState, usize) {
    let r1 = rng.random_range(2..=3usize);
    let r2 = rng.random_range(1..=2usize);
    let r = r1 + r2;
    let n1 = rng.random_range(1..r1 * r1);
    let list1 = sampling::eigenvalue_list(rng, r1, 0.3);
    let m1 = build_pure_flow(&list1, n1).unwrap();
    let (kraus2, drift2, list2) = if r2 == 1 {
        (vec![], ComplexMatrix::zeros(1, 1), vec![1.0])
    } else {
        let list2 = sampling::eigenvalue_list(rng, r2, 0.3);
        let m2 = build_pure_flow(&list2, rng.random_range(1..4)).unwrap();
        (
            m2.generator.kraus().to_vec(),
            m2.generator.drift().clone(),
            list2,
        )
    };
    let direct_sum = |a: &ComplexMatrix, b: &ComplexMatrix| {
        ComplexMatrix::from_fn(r, r, |i, j| match (i < r1, j < r1) {
            (true, true) => a[(i, j)],
            (false, false) => b[(i - r1, j - r1)],
            _ => c(0.0, 0.0),
        })
    };
    let zero1 = ComplexMatrix::zeros(r1, r1);
    let zero2 = ComplexMatrix::zeros(r2, r2);
    let count = m1.generator.kraus().len().max(kraus2.len());
    let u = sampling::unitary(rng, r);
    let rotate = |m: &ComplexMatrix| u.matmul(m).matmul(&u.adjoint());
    let kraus = (0..count)
        .map(|k| {
            rotate(&direct_sum(
                m1.generator.kraus().get(k).unwrap_or(&zero1),
                kraus2.get(k).unwrap_or(&zero2),
            ))
        })
        .collect();
    let drift = rotate(&direct_sum(m1.generator.drift(), &drift2));

    let p = rng.random_range(0.3..0.7);
    let weights: Vec<f64> = list1
        .iter()
        .map(|l| p * l)
        .chain(list2.iter().map(|l| (1.0 - p) * l))
        .collect();
    let density = rotate(&ComplexMatrix::real_diag(&weights));
    let state = FaithfulState::from_density(&density).unwrap();
    (LindbladGenerator::new(kraus, drift).unwrap(), state, r)
}

/// `L(x) = uxu* − x` with `u` diagonal with distinct phases in a random
/// frame, and a random state commuting with `u`. Commutant dimension `r`.
pub fn dephasing_generator<R: Rng>(rng: &mut R, r: usize) -> (LindbladGenerator, FaithfulState) {
    let w = sampling::unitary(rng, r);
    let phases: Vec<Complex64> = (0..r)
        .map(|k| Complex64::from_polar(1.0, std::f64::consts::TAU * (k as f64 + 0.25) / r as f64))
        .collect();
    let u = w.matmul(&ComplexMatrix::diag(&phases)).matmul(&w.adjoint());
    let list = sampling::eigenvalue_list(rng, r, 0.3);
    let state = FaithfulState::new(&list, &w).unwrap();
    let g = LindbladGenerator::new(vec![u], ComplexMatrix::identity(r).scale_real(-0.5)).unwrap();
    (g, state)
}
