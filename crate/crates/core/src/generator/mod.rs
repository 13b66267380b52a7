//! Lindblad generators `L(x) = Σ v_j x v_j* + kx + xk*` and linear maps on
//! `M_r(ℂ)` represented as `r² × r²` matrices.
//!
//! Vectorization is row-major: `vec(x)[i·r + j] = x[i][j]`, so the matrix
//! units `E_ij` are ordered lexicographically. In this basis `x ↦ a x b` has
//! matrix `a ⊗ bᵀ`.
//!
//! The dual `L_*` is taken with respect to the bilinear trace form
//! `trace(L_*(y) x) = trace(y L(x))`, not the Hilbert–Schmidt inner product.
//! Its matrix is `Π Mᵀ Π` where `Π` swaps `vec(x)` and `vec(xᵀ)`; the bare
//! transpose `Mᵀ` would represent the dual with respect to `trace(yᵀ x)`.

mod construction;
mod demo;

pub use construction::{
    build_preserving, invariance_criterion, invariance_defect, perturbation_for_target,
    solve_perturbation, unperturbed, InvarianceCriterion, PreservingGenerator, CRITERION_TOL,
};
pub use demo::{necessity_demo, PerturbationDemo};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrixcore::ComplexMatrix;
use crate::states::FaithfulState;

/// Linear map on `M_r(ℂ)` as an `r² × r²` matrix in the matrix-unit basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    r: usize,
    matrix: ComplexMatrix,
}

impl Superoperator {
    pub fn from_matrix(r: usize, matrix: ComplexMatrix) -> Result<Self> {
        if matrix.shape() != (r * r, r * r) {
            return Err(Error::DimensionMismatch(format!(
                "superoperator on M_{r} needs a {0}x{0} matrix, got {1}x{2}",
                r * r,
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(Self { r, matrix })
    }

    /// Matrix of `f` obtained by evaluating it on every matrix unit.
    pub fn from_fn(r: usize, f: impl Fn(&ComplexMatrix) -> ComplexMatrix) -> Self {
        let n = r * r;
        let mut matrix = ComplexMatrix::zeros(n, n);
        for col in 0..n {
            let image = f(&ComplexMatrix::unit(r, col / r, col % r));
            matrix.set_column(col, image.as_slice());
        }
        Self { r, matrix }
    }

    pub fn identity(r: usize) -> Self {
        Self {
            r,
            matrix: ComplexMatrix::identity(r * r),
        }
    }

    pub fn zero(r: usize) -> Self {
        Self {
            r,
            matrix: ComplexMatrix::zeros(r * r, r * r),
        }
    }

    /// `x ↦ a x b`.
    pub fn sandwich(a: &ComplexMatrix, b: &ComplexMatrix) -> Self {
        Self {
            r: a.rows(),
            matrix: a.kron(&b.transpose()),
        }
    }

    /// `x ↦ [ℓ, x]`.
    pub fn commutator(ell: &ComplexMatrix) -> Self {
        let id = ComplexMatrix::identity(ell.rows());
        Self {
            r: ell.rows(),
            matrix: &ell.kron(&id) - &id.kron(&ell.transpose()),
        }
    }

    /// `x ↦ Σ v x v*`; the zero map when `kraus` is empty.
    pub fn kraus(r: usize, kraus: &[ComplexMatrix]) -> Self {
        let mut acc = Self::zero(r);
        for v in kraus {
            acc.matrix += &v.kron(&v.conj());
        }
        acc
    }

    pub fn dimension(&self) -> usize {
        self.r
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            x.shape(),
            (self.r, self.r),
            "superoperator applied to a matrix of the wrong size"
        );
        ComplexMatrix::unvectorize(&self.matrix.matvec(x.as_slice()), self.r)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.r, other.r);
        Self {
            r: self.r,
            matrix: self.matrix.matmul(&other.matrix),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.r, other.r);
        Self {
            r: self.r,
            matrix: &self.matrix + &other.matrix,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.r, other.r);
        Self {
            r: self.r,
            matrix: &self.matrix - &other.matrix,
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            r: self.r,
            matrix: self.matrix.scale_real(s),
        }
    }

    /// `Σ_ij E_ij ⊗ L(E_ij)`.
    pub fn choi(&self) -> ComplexMatrix {
        let r = self.r;
        let m = &self.matrix;
        ComplexMatrix::from_fn(r * r, r * r, |row, col| {
            let (i, a) = (row / r, row % r);
            let (j, b) = (col / r, col % r);
            m[(a * r + b, i * r + j)]
        })
    }

    pub fn distance(&self, other: &Self) -> f64 {
        self.matrix.distance(&other.matrix)
    }
}

/// Trace dual `L_*`.
pub fn dual(s: &Superoperator) -> Superoperator {
    let r = s.r;
    let swap = |p: usize| (p % r) * r + p / r;
    let m = &s.matrix;
    Superoperator {
        r,
        matrix: ComplexMatrix::from_fn(r * r, r * r, |p, q| m[(swap(q), swap(p))]),
    }
}

/// `L^#(x) = Ω^{-1/2} L_*(Ω^{1/2} x Ω^{1/2}) Ω^{-1/2}`.
pub fn sharp(s: &Superoperator, state: &FaithfulState) -> Result<Superoperator> {
    if s.r != state.dimension() {
        return Err(Error::DimensionMismatch(format!(
            "superoperator on M_{} with a state on M_{}",
            s.r,
            state.dimension()
        )));
    }
    let inner = Superoperator::sandwich(state.sqrt_density(), state.sqrt_density());
    let outer = Superoperator::sandwich(state.inv_sqrt_density(), state.inv_sqrt_density());
    Ok(outer.compose(&dual(s)).compose(&inner))
}

/// `L(x) = Σ_j v_j x v_j* + kx + xk*`.
#[derive(Debug, Clone, PartialEq)]
pub struct LindbladGenerator {
    r: usize,
    kraus: Vec<ComplexMatrix>,
    drift: ComplexMatrix,
}

impl LindbladGenerator {
    pub fn new(kraus: Vec<ComplexMatrix>, drift: ComplexMatrix) -> Result<Self> {
        if !drift.is_square() {
            return Err(Error::DimensionMismatch("drift must be square".into()));
        }
        let r = drift.rows();
        if let Some(v) = kraus.iter().find(|v| v.shape() != (r, r)) {
            return Err(Error::DimensionMismatch(format!(
                "Kraus operator is {}x{} but the drift is {r}x{r}",
                v.rows(),
                v.cols()
            )));
        }
        Ok(Self { r, kraus, drift })
    }

    pub fn dimension(&self) -> usize {
        self.r
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn drift(&self) -> &ComplexMatrix {
        &self.drift
    }

    pub fn apply(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let mut out = self.drift.matmul(x);
        out += &x.matmul(&self.drift.adjoint());
        for v in &self.kraus {
            out += &v.matmul(x).matmul(&v.adjoint());
        }
        out
    }

    pub fn as_superoperator(&self) -> Superoperator {
        let mut s = Superoperator::kraus(self.r, &self.kraus);
        s.matrix += &Superoperator::sandwich(&self.drift, &ComplexMatrix::identity(self.r)).matrix;
        s.matrix +=
            &Superoperator::sandwich(&ComplexMatrix::identity(self.r), &self.drift.adjoint())
                .matrix;
        s
    }

    /// Completely positive part `x ↦ Σ v x v*`.
    pub fn cp_part(&self) -> Superoperator {
        Superoperator::kraus(self.r, &self.kraus)
    }

    /// `‖L(1)‖_F`.
    pub fn unitality_defect(&self) -> f64 {
        let k = &self.drift;
        let mut l1 = k + &k.adjoint();
        for v in &self.kraus {
            l1 += &v.matmul(&v.adjoint());
        }
        l1.frobenius_norm()
    }

    /// Operators whose commutant is the fixed-point algebra:
    /// `k, k*, v_1, …, v_n, v_1*, …, v_n*`.
    pub fn operator_set(&self) -> Vec<ComplexMatrix> {
        let mut ops = vec![self.drift.clone(), self.drift.adjoint()];
        ops.extend(self.kraus.iter().cloned());
        ops.extend(self.kraus.iter().map(ComplexMatrix::adjoint));
        ops
    }
}

/// The depolarizing generator `L(x) = ω(x)·1 − x` written in Lindblad form
/// with Kraus operators `√λ_b |a⟩⟨ξ_b|` and drift `−1/2`.
pub fn depolarizing(state: &FaithfulState) -> LindbladGenerator {
    let r = state.dimension();
    let mut kraus = Vec::with_capacity(r * r);
    for (b, &lambda) in state.eigenvalue_list().iter().enumerate() {
        let xi = state.basis().column(b);
        for a in 0..r {
            let mut e = vec![Complex64::new(0.0, 0.0); r];
            e[a] = Complex64::new(lambda.sqrt(), 0.0);
            kraus.push(ComplexMatrix::outer(&e, &xi));
        }
    }
    LindbladGenerator::new(kraus, ComplexMatrix::identity(r).scale_real(-0.5))
        .expect("shapes agree by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrixcore::herm_eig;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample(r: usize, seed: u64) -> ComplexMatrix {
        ComplexMatrix::from_fn(r, r, |i, j| {
            let t = (seed as f64 + 1.0) * (i as f64 * 1.7 + j as f64 * 0.31 + 0.2);
            c(t.sin(), (t * 1.3).cos())
        })
    }

    #[test]
    fn identity_generator() {
        let g = LindbladGenerator::new(vec![], ComplexMatrix::identity(3).scale_real(0.5)).unwrap();
        assert!(g
            .as_superoperator()
            .matrix()
            .approx_eq(&ComplexMatrix::identity(9), 0.0));
    }

    #[test]
    fn conjugation_is_unitary_superoperator() {
        let u = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let g = LindbladGenerator::new(vec![u], ComplexMatrix::zeros(2, 2)).unwrap();
        let m = g.as_superoperator();
        assert!(m
            .matrix()
            .adjoint()
            .matmul(m.matrix())
            .approx_eq(&ComplexMatrix::identity(4), 1e-15));
        // Each row/column holds a single unit entry.
        for row in 0..4 {
            assert_eq!(
                m.matrix()
                    .row(row)
                    .iter()
                    .filter(|z| z.norm() > 0.0)
                    .count(),
                1
            );
        }
    }

    #[test]
    fn matrix_matches_direct_evaluation() {
        let v1 = sample(3, 1);
        let v2 = sample(3, 2);
        let k = sample(3, 3);
        let g = LindbladGenerator::new(vec![v1, v2], k).unwrap();
        let s = g.as_superoperator();
        for seed in 10..30 {
            let x = sample(3, seed);
            assert!(s.apply(&x).approx_eq(&g.apply(&x), 1e-11));
        }
    }

    #[test]
    fn depolarizing_spectrum() {
        // L(x) = ω(x)1 − x; (M + 1) is the rank-one projector vec(1)·ω.
        let state = FaithfulState::diagonal(&[2.0 / 3.0, 1.0 / 3.0]).unwrap();
        let m = depolarizing(&state).as_superoperator();
        let id = Superoperator::identity(2);
        let p = m.add(&id);
        assert!(p.compose(&p).distance(&p) < 1e-14);
        assert!(m.apply(&ComplexMatrix::identity(2)).frobenius_norm() < 1e-15);
        // trace(M) = 0·1 + (−1)·3.
        assert!((m.matrix().trace() - c(-3.0, 0.0)).norm() < 1e-14);
        assert!((p.matrix().trace() - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn dual_of_sandwich() {
        let a = sample(3, 4);
        let b = sample(3, 5);
        let d = dual(&Superoperator::sandwich(&a, &b));
        assert!(d.distance(&Superoperator::sandwich(&b, &a)) < 1e-14);
        assert_eq!(
            dual(&Superoperator::identity(3)),
            Superoperator::identity(3)
        );
    }

    #[test]
    fn dual_of_kraus_map() {
        let vs = vec![sample(2, 6), sample(2, 7)];
        let d = dual(&Superoperator::kraus(2, &vs));
        let adj: Vec<ComplexMatrix> = vs.iter().map(ComplexMatrix::adjoint).collect();
        assert!(d.distance(&Superoperator::kraus(2, &adj)) < 1e-14);
    }

    #[test]
    fn dual_pairing() {
        let s = LindbladGenerator::new(vec![sample(3, 8)], sample(3, 9))
            .unwrap()
            .as_superoperator();
        let d = dual(&s);
        let (x, y) = (sample(3, 10), sample(3, 11));
        let lhs = d.apply(&y).matmul(&x).trace();
        let rhs = y.matmul(&s.apply(&x)).trace();
        assert!((lhs - rhs).norm() <= 1e-10 * x.frobenius_norm() * y.frobenius_norm());
    }

    #[test]
    fn sharp_examples() {
        let tracial = FaithfulState::tracial(2).unwrap();
        let s = LindbladGenerator::new(vec![sample(2, 12)], sample(2, 13))
            .unwrap()
            .as_superoperator();
        assert!(sharp(&s, &tracial).unwrap().distance(&dual(&s)) < 1e-13);

        let state = FaithfulState::diagonal(&[2.0 / 3.0, 1.0 / 3.0]).unwrap();
        assert!(
            sharp(&Superoperator::identity(2), &state)
                .unwrap()
                .distance(&Superoperator::identity(2))
                < 1e-14
        );

        let flip = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let w = state.inv_sqrt_density().matmul(&flip);
        let q = Superoperator::kraus(2, &[w]);
        let inv = ComplexMatrix::real_diag(&[1.5, 3.0]);
        let id = ComplexMatrix::identity(2);
        assert!(sharp(&q, &state).unwrap().apply(&id).approx_eq(&inv, 1e-14));
        assert!(q.apply(&id).approx_eq(&inv, 1e-14));
    }

    #[test]
    fn choi_of_transpose_is_swap() {
        let t = Superoperator::from_fn(2, ComplexMatrix::transpose);
        let eig = herm_eig(&t.choi()).unwrap();
        assert!((eig.eigenvalues[0] + 1.0).abs() < 1e-15);
        assert!((eig.eigenvalues[3] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn generator_shape_checks() {
        assert!(LindbladGenerator::new(
            vec![ComplexMatrix::identity(3)],
            ComplexMatrix::identity(2)
        )
        .is_err());
        assert!(Superoperator::from_matrix(2, ComplexMatrix::identity(3)).is_err());
    }
}
