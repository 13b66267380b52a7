//! Clock and shift unitaries over an admissible basis, and the Weyl words
//! `w_{i,j} = u^i v^j` indexed by `ℤ/r × ℤ/r`.
//!
//! Given a non-scalar `T`, [`admissible_basis`] returns an orthonormal basis
//! `ξ_0, …, ξ_{r−1}` with `⟨Tξ_0, ξ_k⟩ ≠ 0` for every `k ≥ 1`. The clock `u`
//! is diagonal in that basis with distinct eigenvalues `λ^{−k}`, so anything
//! commuting with `u` is diagonal there too, and commuting with `T` then forces
//! it to be scalar.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::analysis::commutant;
use crate::error::{Error, Result};
use crate::matrixcore::{eigen::unit_vector, gram_schmidt, subspace::hs, ComplexMatrix};
use crate::sampling;

pub const DEFAULT_SEED: u64 = 0x005e_ed0f_ab50;
const SCALAR_TOL: f64 = 1e-10;
const MIN_ORTHOGONAL_PART: f64 = 1e-8;
const RANDOM_CANDIDATES: usize = 256;
const ORTHONORMAL_TOL: f64 = 1e-12;

/// `⟨a, b⟩ = Σ a_i conj(b_i)`, linear in the first slot.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `e^{2πi k / r}` for any integer `k`.
pub fn root_of_unity(r: usize, k: i64) -> Complex64 {
    let k = k.rem_euclid(r as i64);
    Complex64::from_polar(1.0, TAU * k as f64 / r as f64)
}

/// Orthonormal basis (as the columns of a unitary) satisfying the
/// admissibility condition for `t`. Candidates for `ξ_0` are scanned in a
/// fixed order: standard basis vectors, the uniform superposition, then
/// unit vectors from a generator seeded with `seed`.
pub fn admissible_basis(t: &ComplexMatrix, seed: u64) -> Result<ComplexMatrix> {
    if !t.is_square() {
        return Err(Error::DimensionMismatch(
            "admissible_basis needs a square operator".into(),
        ));
    }
    let r = t.rows();
    if r < 2 {
        return Err(Error::DimensionMismatch(
            "admissible_basis needs r >= 2".into(),
        ));
    }
    let t_norm = t.frobenius_norm();
    if t.distance_from_scalar() <= SCALAR_TOL * t_norm {
        return Err(Error::ScalarInput);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let uniform = vec![Complex64::new(1.0 / (r as f64).sqrt(), 0.0); r];
    let candidates = (0..r)
        .map(|k| unit_vector(r, k))
        .chain(std::iter::once(uniform))
        .chain((0..RANDOM_CANDIDATES).map(|_| {
            let g = sampling::gaussian_matrix(&mut rng, r, 1).into_vec();
            let n = norm(&g);
            g.iter().map(|z| z / n).collect()
        }));

    for xi0 in candidates {
        let t_xi0 = t.matvec(&xi0);
        let a = inner(&t_xi0, &xi0);
        let zeta: Vec<Complex64> = t_xi0.iter().zip(&xi0).map(|(tx, x)| tx - a * x).collect();
        let zeta_norm = norm(&zeta);
        if zeta_norm < MIN_ORTHOGONAL_PART * t_norm {
            continue;
        }
        return Ok(complete_basis(&xi0, &zeta, zeta_norm));
    }
    Err(Error::ConstructionFailed(
        "no candidate vector escaped the eigenspaces of T".into(),
    ))
}

/// Orthonormal basis of `[ξ_0]^⊥` with `⟨ζ, ξ_k⟩ = ‖ζ‖/√(r−1)` for all `k`:
/// an orthonormal frame `f_1 = ζ/‖ζ‖, f_2, …` rotated by the unitary DFT,
/// whose first row is uniform.
fn complete_basis(xi0: &[Complex64], zeta: &[Complex64], zeta_norm: f64) -> ComplexMatrix {
    let r = xi0.len();
    let zeta_hat: Vec<Complex64> = zeta.iter().map(|z| z / zeta_norm).collect();
    let seeds: Vec<ComplexMatrix> = [xi0.to_vec(), zeta_hat]
        .into_iter()
        .chain((0..r).map(|k| unit_vector(r, k)))
        .map(|v| ComplexMatrix::column_vector(&v))
        .collect();
    let frame = gram_schmidt(&seeds, hs, 1e-8);
    debug_assert_eq!(frame.len(), r);

    let m = r - 1;
    let scale = 1.0 / (m as f64).sqrt();
    let mut basis = ComplexMatrix::zeros(r, r);
    basis.set_column(0, xi0);
    for k in 0..m {
        let mut col = vec![Complex64::new(0.0, 0.0); r];
        for (j, f) in frame[1..].iter().enumerate() {
            let w = Complex64::from_polar(scale, TAU * ((j * k) % m) as f64 / m as f64);
            for (c, fi) in col.iter_mut().zip(f.as_slice()) {
                *c += fi * w;
            }
        }
        basis.set_column(k + 1, &col);
    }
    basis
}

/// Clock/shift pair with `u^r = v^r = 1` and `vu = λuv`, `λ = e^{2πi/r}`.
#[derive(Debug, Clone)]
pub struct WeylPair {
    pub r: usize,
    pub lambda: Complex64,
    pub u: ComplexMatrix,
    pub v: ComplexMatrix,
    /// Columns are `ξ_0, …, ξ_{r−1}`.
    pub basis: ComplexMatrix,
}

/// `u ξ_k = λ^{−k} ξ_k`, `v ξ_k = ξ_{k⊕1}`.
pub fn clock_shift(r: usize, basis: &ComplexMatrix) -> Result<WeylPair> {
    if r < 2 || basis.shape() != (r, r) {
        return Err(Error::DimensionMismatch(format!(
            "clock_shift with r = {r} and a {}x{} basis",
            basis.rows(),
            basis.cols()
        )));
    }
    let defect = (&basis.adjoint().matmul(basis) - &ComplexMatrix::identity(r)).frobenius_norm();
    if defect > ORTHONORMAL_TOL {
        return Err(Error::NotOrthonormal { defect });
    }
    let mut u = ComplexMatrix::zeros(r, r);
    let mut v = ComplexMatrix::zeros(r, r);
    for k in 0..r {
        let xi_k = basis.column(k);
        let xi_next = basis.column((k + 1) % r);
        u += &ComplexMatrix::outer(&xi_k, &xi_k).scale(root_of_unity(r, -(k as i64)));
        v += &ComplexMatrix::outer(&xi_next, &xi_k);
    }
    Ok(WeylPair {
        r,
        lambda: root_of_unity(r, 1),
        u,
        v,
        basis: basis.clone(),
    })
}

/// All `r²` words `w_{i,j} = u^i v^j`.
#[derive(Debug, Clone)]
pub struct WeylFamily {
    pub r: usize,
    pub lambda: Complex64,
    words: Vec<ComplexMatrix>,
}

impl WeylFamily {
    /// Indices are reduced mod `r`.
    pub fn word(&self, i: i64, j: i64) -> &ComplexMatrix {
        let r = self.r as i64;
        &self.words[(i.rem_euclid(r) * r + j.rem_euclid(r)) as usize]
    }

    /// `λ^k`.
    pub fn lambda_pow(&self, k: i64) -> Complex64 {
        root_of_unity(self.r, k)
    }

    /// Words in lexicographic `(i, j)` order.
    pub fn words(&self) -> &[ComplexMatrix] {
        &self.words
    }
}

pub fn weyl_family(pair: &WeylPair) -> WeylFamily {
    let r = pair.r;
    let u_pows: Vec<ComplexMatrix> = (0..r).map(|i| pair.u.pow(i)).collect();
    let v_pows: Vec<ComplexMatrix> = (0..r).map(|j| pair.v.pow(j)).collect();
    let words = (0..r * r)
        .map(|idx| u_pows[idx / r].matmul(&v_pows[idx % r]))
        .collect();
    WeylFamily {
        r,
        lambda: pair.lambda,
        words,
    }
}

/// True iff the only operators commuting with both `t` and `u` are scalars.
pub fn check_irreducible_pair(t: &ComplexMatrix, u: &ComplexMatrix, tol: f64) -> bool {
    commutant(&[t.clone(), u.clone()], tol)
        .map(|c| c.len() == 1)
        .unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrixcore::gram_rank;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_state_basis() {
        let t = ComplexMatrix::real_diag(&[2.0 / 3.0, 1.0 / 3.0]);
        let b = admissible_basis(&t, DEFAULT_SEED).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((b[(0, 0)] - c(s, 0.0)).norm() < 1e-15 && (b[(1, 0)] - c(s, 0.0)).norm() < 1e-15);
        assert!((b[(0, 1)] - c(s, 0.0)).norm() < 1e-15 && (b[(1, 1)] + c(s, 0.0)).norm() < 1e-15);
        let overlap = inner(&t.matvec(&b.column(0)), &b.column(1));
        assert!((overlap - c(1.0 / 6.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn skew_operator_basis() {
        let t = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[-1.0, 0.0]]);
        let b = admissible_basis(&t, DEFAULT_SEED).unwrap();
        assert_eq!(b.column(0), vec![c(1.0, 0.0), c(0.0, 0.0)]);
        // ξ_1 spans the second coordinate; the phase makes the overlap positive.
        assert!((b[(1, 1)].norm() - 1.0).abs() < 1e-15);
        let overlap = inner(&t.matvec(&b.column(0)), &b.column(1));
        assert!((overlap.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn equal_overlaps_for_r3() {
        let t =
            ComplexMatrix::from_real_rows(&[&[1.0, 2.0, 0.0], &[0.5, -1.0, 3.0], &[0.0, 1.0, 2.0]]);
        let b = admissible_basis(&t, DEFAULT_SEED).unwrap();
        let xi0 = b.column(0);
        let txi0 = t.matvec(&xi0);
        let a = inner(&txi0, &xi0);
        let zeta: Vec<Complex64> = txi0.iter().zip(&xi0).map(|(x, y)| x - a * y).collect();
        let expected = norm(&zeta) / 2f64.sqrt();
        for k in 1..3 {
            let overlap = inner(&txi0, &b.column(k));
            assert!((overlap.norm() - expected).abs() < 1e-13);
            assert!(overlap.im.abs() < 1e-13 && overlap.re > 0.0);
        }
    }

    #[test]
    fn scalar_rejected() {
        assert_eq!(
            admissible_basis(&ComplexMatrix::identity(3).scale_real(2.5), 1),
            Err(Error::ScalarInput)
        );
        assert_eq!(
            admissible_basis(&ComplexMatrix::zeros(2, 2), 1),
            Err(Error::ScalarInput)
        );
    }

    #[test]
    fn qubit_clock_shift() {
        let p = clock_shift(2, &ComplexMatrix::identity(2)).unwrap();
        assert!(p
            .u
            .approx_eq(&ComplexMatrix::real_diag(&[1.0, -1.0]), 1e-15));
        assert!(p.v.approx_eq(
            &ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]),
            0.0
        ));
        assert!((p.lambda - c(-1.0, 0.0)).norm() < 1e-15);
        let vu = p.v.matmul(&p.u);
        let luv = p.u.matmul(&p.v).scale(p.lambda);
        assert!(vu.approx_eq(&luv, 1e-15));
    }

    #[test]
    fn qutrit_clock_shift() {
        let p = clock_shift(3, &ComplexMatrix::identity(3)).unwrap();
        let l = p.lambda;
        assert!(p.u.approx_eq(
            &ComplexMatrix::diag(&[c(1.0, 0.0), l.conj(), (l * l).conj()]),
            1e-15
        ));
        assert!(p.v.pow(3).approx_eq(&ComplexMatrix::identity(3), 0.0));
        assert_eq!(p.v[(1, 0)], c(1.0, 0.0));
    }

    #[test]
    fn clock_shift_rejects_bad_basis() {
        let b = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]);
        assert!(matches!(
            clock_shift(2, &b),
            Err(Error::NotOrthonormal { .. })
        ));
    }

    #[test]
    fn qubit_family() {
        let p = clock_shift(2, &ComplexMatrix::identity(2)).unwrap();
        let f = weyl_family(&p);
        assert_eq!(f.word(0, 0), &ComplexMatrix::identity(2));
        for (i, j) in [(0, 1), (1, 0), (1, 1)] {
            assert!(f.word(i, j).trace().norm() < 1e-15);
        }
        assert_eq!(gram_rank(f.words(), 1e-10).unwrap(), 4);
    }

    #[test]
    fn qutrit_family_is_a_basis() {
        let p = clock_shift(3, &ComplexMatrix::identity(3)).unwrap();
        assert_eq!(gram_rank(weyl_family(&p).words(), 1e-10).unwrap(), 9);
    }

    #[test]
    fn irreducible_pair_examples() {
        let flip = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert!(check_irreducible_pair(
            &ComplexMatrix::real_diag(&[2.0 / 3.0, 1.0 / 3.0]),
            &flip,
            1e-9
        ));
        assert!(!check_irreducible_pair(
            &ComplexMatrix::identity(2),
            &flip,
            1e-9
        ));
        assert!(!check_irreducible_pair(
            &ComplexMatrix::real_diag(&[1.0, 2.0]),
            &ComplexMatrix::real_diag(&[3.0, 4.0]),
            1e-9
        ));
    }
}
