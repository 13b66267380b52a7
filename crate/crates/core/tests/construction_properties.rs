mod common;

use absorbing_flows::analysis::{choi_positive, CHOI_TOL};
use absorbing_flows::generator::{
    build_preserving, dual, invariance_defect, sharp, solve_perturbation,
};
use absorbing_flows::sampling;
use absorbing_flows::weyl::{
    admissible_basis, check_irreducible_pair, clock_shift, weyl_family, DEFAULT_SEED,
};
use absorbing_flows::{ComplexMatrix, FaithfulState, LindbladGenerator, Superoperator};
use common::*;
use proptest::prelude::*;
use rand::Rng;

/// Non-scalar operators of several shapes: generic, Hermitian with a
/// repeated eigenvalue, rank one.
fn sample_non_scalar(seed: u64, r: usize, kind: u8) -> ComplexMatrix {
    let mut g = rng(seed);
    match kind % 3 {
        0 => random_matrix(&mut g, r),
        1 => {
            let mut d = vec![1.0; r];
            d[r - 1] = -0.5;
            let w = sampling::unitary(&mut g, r);
            w.matmul(&ComplexMatrix::real_diag(&d)).matmul(&w.adjoint())
        }
        _ => {
            let a = random_matrix(&mut g, r).column(0);
            let b = random_matrix(&mut g, r).column(1);
            ComplexMatrix::outer(&a, &b)
        }
    }
}

/// Basis of the centralizer: `ξ_a ξ_b*` for eigenvectors in the same
/// spectral cluster.
fn centralizer_basis(state: &FaithfulState) -> Vec<ComplexMatrix> {
    let b = state.basis();
    let lam = state.eigenvalue_list();
    let r = lam.len();
    let mut out = Vec::new();
    for i in 0..r {
        for j in 0..r {
            if (lam[i] - lam[j]).abs() <= 1e-9 * lam[i] {
                out.push(ComplexMatrix::outer(&b.column(i), &b.column(j)));
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn admissible_pairs_are_irreducible(seed in any::<u64>(), r in 2usize..=6, kind in any::<u8>()) {
        let t = sample_non_scalar(seed, r, kind);
        let pair = clock_shift(r, &admissible_basis(&t, DEFAULT_SEED).unwrap()).unwrap();
        prop_assert!(check_irreducible_pair(&t, &pair.u, 1e-9));
    }

    #[test]
    fn weyl_word_relations(r in 2usize..=12, seed in any::<u64>()) {
        let t = sample_non_scalar(seed, r, 0);
        let f = weyl_family(&clock_shift(r, &admissible_basis(&t, DEFAULT_SEED).unwrap()).unwrap());
        let ri = r as i64;
        for i in 0..ri {
            for j in 0..ri {
                let w = f.word(i, j);
                let adj = f.word(-i, -j).scale(f.lambda_pow(i * j));
                prop_assert!(w.adjoint().distance(&adj) <= 1e-10);
                for (p, q) in [(1, 0), (0, 1), ((i + 2) % ri, (j + 3) % ri)] {
                    let lhs = w.matmul(f.word(p, q));
                    let rhs = f.word(i + p, j + q).scale(f.lambda_pow(j * p));
                    prop_assert!(lhs.distance(&rhs) <= 1e-10);
                }
            }
        }
        // Normalized-trace orthonormality.
        let words = f.words();
        for (a, x) in words.iter().enumerate() {
            for (b, y) in words.iter().enumerate() {
                let ip = y.hs_inner(x) / r as f64;
                let expected = if a == b { 1.0 } else { 0.0 };
                prop_assert!((ip - c(expected, 0.0)).norm() <= 1e-10);
            }
        }
    }

    #[test]
    fn dual_is_an_exact_involution(seed in any::<u64>(), r in 2usize..=4) {
        let m = random_matrix(&mut rng(seed), r * r);
        let s = Superoperator::from_matrix(r, m).unwrap();
        prop_assert_eq!(dual(&dual(&s)), s);
    }

    #[test]
    fn sharp_is_an_involution(seed in any::<u64>(), r in 2usize..=4) {
        let mut g = rng(seed);
        let state = random_state(&mut g, r);
        let s = Superoperator::from_matrix(r, random_matrix(&mut g, r * r)).unwrap();
        let back = sharp(&sharp(&s, &state).unwrap(), &state).unwrap();
        prop_assert!(back.distance(&s) <= 1e-10 * s.matrix().frobenius_norm());
    }

    #[test]
    fn sharp_preserves_complete_positivity(seed in any::<u64>(), r in 2usize..=4, k in 1usize..4) {
        let mut g = rng(seed);
        let state = random_state(&mut g, r);
        let kraus: Vec<_> = (0..k).map(|_| random_matrix(&mut g, r)).collect();
        let q = sharp(&Superoperator::kraus(r, &kraus), &state).unwrap();
        let choi = choi_oracle(&q);
        prop_assert!(min_eigenvalue(&choi) >= -1e-9 * choi.frobenius_norm().max(1.0));
        prop_assert!(choi_positive(&q, CHOI_TOL * choi.frobenius_norm().max(1.0)).positive);
    }

    #[test]
    fn solvability_matches_solver(seed in any::<u64>(), r in 2usize..=4, negative in any::<bool>()) {
        let mut g = rng(seed);
        let state = random_state(&mut g, r);
        let v = sampling::unitary(&mut g, r);
        let base = build_preserving(&state, &[v]).unwrap().generator.as_superoperator();
        let h = random_matrix(&mut g, r);
        let skew = &h - &h.adjoint();
        let mut l = base.add(&Superoperator::commutator(&skew));
        if negative {
            // x ↦ ω'(x)·1 − x with ω' ≠ ω on the centralizer.
            let other = sampling::density(&mut g, r);
            let id = ComplexMatrix::identity(r);
            let tilt = Superoperator::from_fn(r, |x| {
                &id.scale(absorbing_flows::states::trace_pair(&other, x).unwrap()) - x
            });
            l = l.add(&tilt.scale(0.5));
        }
        let restriction = centralizer_basis(&state)
            .iter()
            .map(|a| state.expect(&l.apply(a)).norm())
            .fold(0.0, f64::max);
        let ell = solve_perturbation(&l, &state).unwrap();
        let fixed = invariance_defect(&l.add(&Superoperator::commutator(&ell)), &state).unwrap();
        let criterion = restriction <= 1e-8;
        prop_assert_eq!(criterion, !negative);
        prop_assert_eq!(fixed <= 1e-9, criterion);
    }

    #[test]
    fn build_preserving_is_unital_and_invariant(seed in any::<u64>(), r in 2usize..=5, k in 1usize..4) {
        let mut g = rng(seed);
        let state = random_state(&mut g, r);
        // Unitaries and normal operators both give balanced families.
        let family: Vec<ComplexMatrix> = (0..k)
            .map(|_| {
                let w = sampling::unitary(&mut g, r);
                if g.random_bool(0.5) {
                    w
                } else {
                    let d: Vec<_> = (0..r).map(|_| c(g.random_range(-1.0..1.0), g.random_range(-1.0..1.0))).collect();
                    w.matmul(&ComplexMatrix::diag(&d)).matmul(&w.adjoint())
                }
            })
            .collect();
        let built = build_preserving(&state, &family).unwrap();
        prop_assert!(built.generator.unitality_defect() <= 1e-10);
        prop_assert!(invariance_defect(&built.generator.as_superoperator(), &state).unwrap() <= 1e-9);
        prop_assert!((&built.perturbation + &built.perturbation.adjoint()).frobenius_norm() <= 1e-12);
    }

    #[test]
    fn perturbation_matches_entrywise_oracle(seed in any::<u64>(), r in 2usize..=6) {
        let mut g = rng(seed);
        let state = random_state(&mut g, r);
        let t = sampling::hermitian(&mut g, r);
        let ell = absorbing_flows::generator::perturbation_for_target(&state, &t).unwrap();
        let oracle = perturbation_oracle(&state, &t, 1e-9);
        prop_assert!(ell.distance(&oracle) <= 1e-10 * (1.0 + oracle.frobenius_norm()));
    }
}

#[test]
fn lindblad_generators_preserve_adjoints() {
    let mut g = rng(3);
    for r in 2..=4 {
        let gen = LindbladGenerator::new(vec![random_matrix(&mut g, r)], random_matrix(&mut g, r))
            .unwrap();
        let x = random_matrix(&mut g, r);
        assert!(gen.apply(&x.adjoint()).distance(&gen.apply(&x).adjoint()) < 1e-12);
    }
}
