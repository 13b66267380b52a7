//! Faithful states on `M_r(ℂ)` and the centralizer conditional expectation.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrixcore::{herm_eig, ComplexMatrix};

/// Eigenvalues whose relative gap is at most this share a spectral projection.
pub const DEGENERACY_TOL: f64 = 1e-9;
pub const SUM_TOL: f64 = 1e-12;
pub const UNITARY_TOL: f64 = 1e-10;

/// Faithful state `ω(x) = trace(Ωx)` with its spectral data.
#[derive(Debug, Clone)]
pub struct FaithfulState {
    r: usize,
    density: ComplexMatrix,
    /// Multiplicity-expanded, decreasing.
    eigenvalue_list: Vec<f64>,
    /// Column `k` is the eigenvector for `eigenvalue_list[k]`.
    basis: ComplexMatrix,
    /// Strictly increasing, one per merged group.
    distinct_eigenvalues: Vec<f64>,
    /// `spectral_projections[k]` belongs to `distinct_eigenvalues[k]`.
    spectral_projections: Vec<ComplexMatrix>,
    sqrt_density: ComplexMatrix,
    inv_sqrt_density: ComplexMatrix,
}

impl FaithfulState {
    /// State with density `basis · diag(list) · basis*`.
    pub fn new(eigenvalue_list: &[f64], basis: &ComplexMatrix) -> Result<Self> {
        let r = eigenvalue_list.len();
        if r < 2 {
            return Err(Error::NotAState(format!(
                "dimension must be at least 2, got {r}"
            )));
        }
        if basis.shape() != (r, r) {
            return Err(Error::DimensionMismatch(format!(
                "{r} eigenvalues but a {}x{} basis",
                basis.rows(),
                basis.cols()
            )));
        }
        if let Some(bad) = eigenvalue_list
            .iter()
            .find(|&&l| l.is_nan() || l <= 0.0 || !l.is_finite())
        {
            return Err(Error::NotAState(format!(
                "eigenvalue {bad} is not strictly positive"
            )));
        }
        if eigenvalue_list.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::NotAState(
                "eigenvalue list must be non-increasing".into(),
            ));
        }
        let sum: f64 = eigenvalue_list.iter().sum();
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(Error::NotAState(format!(
                "eigenvalues must sum to 1 (sum = {sum})"
            )));
        }
        let unitary_defect =
            (&basis.adjoint().matmul(basis) - &ComplexMatrix::identity(r)).frobenius_norm();
        if unitary_defect > UNITARY_TOL {
            return Err(Error::NotUnitary {
                defect: unitary_defect,
            });
        }

        let spectral = |f: &dyn Fn(f64) -> f64| {
            ComplexMatrix::from_fn(r, r, |i, j| {
                (0..r)
                    .map(|k| basis[(i, k)] * basis[(j, k)].conj() * f(eigenvalue_list[k]))
                    .sum()
            })
        };
        let density = spectral(&|l| l);
        let sqrt_density = spectral(&|l| l.sqrt());
        let inv_sqrt_density = spectral(&|l| 1.0 / l.sqrt());

        // Group in increasing order.
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for k in (0..r).rev() {
            let l = eigenvalue_list[k];
            match groups.last_mut() {
                Some(g) if (l - eigenvalue_list[*g.last().unwrap()]) <= DEGENERACY_TOL * l => {
                    g.push(k)
                }
                _ => groups.push(vec![k]),
            }
        }
        let distinct_eigenvalues = groups
            .iter()
            .map(|g| g.iter().map(|&k| eigenvalue_list[k]).sum::<f64>() / g.len() as f64)
            .collect();
        let spectral_projections = groups
            .iter()
            .map(|g| {
                g.iter()
                    .map(|&k| {
                        let col = basis.column(k);
                        ComplexMatrix::outer(&col, &col)
                    })
                    .sum()
            })
            .collect();

        Ok(Self {
            r,
            density,
            eigenvalue_list: eigenvalue_list.to_vec(),
            basis: basis.clone(),
            distinct_eigenvalues,
            spectral_projections,
            sqrt_density,
            inv_sqrt_density,
        })
    }

    /// State from a raw density matrix; the spectrum is renormalized to sum
    /// exactly to one if it is within `1e-10` of it.
    pub fn from_density(density: &ComplexMatrix) -> Result<Self> {
        let eig = herm_eig(density)?;
        let r = eig.eigenvalues.len();
        let list: Vec<f64> = eig.eigenvalues.iter().rev().copied().collect();
        let sum: f64 = list.iter().sum();
        if (sum - 1.0).abs() > 1e-10 {
            return Err(Error::NotAState(format!("trace {sum} is not 1")));
        }
        let list: Vec<f64> = list.iter().map(|l| l / sum).collect();
        let basis = ComplexMatrix::from_fn(r, r, |i, k| eig.eigenvectors[(i, r - 1 - k)]);
        Self::new(&list, &basis)
    }

    /// Diagonal state in the standard basis.
    pub fn diagonal(eigenvalue_list: &[f64]) -> Result<Self> {
        Self::new(
            eigenvalue_list,
            &ComplexMatrix::identity(eigenvalue_list.len()),
        )
    }

    /// Normalized trace on `M_r`.
    pub fn tracial(r: usize) -> Result<Self> {
        Self::diagonal(&vec![1.0 / r as f64; r])
    }

    pub fn dimension(&self) -> usize {
        self.r
    }

    pub fn density(&self) -> &ComplexMatrix {
        &self.density
    }

    pub fn eigenvalue_list(&self) -> &[f64] {
        &self.eigenvalue_list
    }

    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    pub fn distinct_eigenvalues(&self) -> &[f64] {
        &self.distinct_eigenvalues
    }

    pub fn spectral_projections(&self) -> &[ComplexMatrix] {
        &self.spectral_projections
    }

    /// `Ω^{1/2}`.
    pub fn sqrt_density(&self) -> &ComplexMatrix {
        &self.sqrt_density
    }

    /// `Ω^{-1/2}`.
    pub fn inv_sqrt_density(&self) -> &ComplexMatrix {
        &self.inv_sqrt_density
    }

    pub fn is_tracial(&self) -> bool {
        self.distinct_eigenvalues.len() == 1
    }

    /// `ω(x) = trace(Ωx)`.
    pub fn expect(&self, x: &ComplexMatrix) -> Complex64 {
        trace_pair(&self.density, x).expect("state applied to a matrix of the wrong dimension")
    }

    /// `E_A(x) = Σ_k e_k x e_k`.
    pub fn centralizer_expectation(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.shape() != (self.r, self.r) {
            return Err(Error::DimensionMismatch(format!(
                "E_A on M_{} applied to a {}x{} matrix",
                self.r,
                x.rows(),
                x.cols()
            )));
        }
        if self.is_tracial() {
            return Ok(x.clone());
        }
        Ok(self
            .spectral_projections
            .iter()
            .map(|e| e.matmul(x).matmul(e))
            .sum())
    }
}

/// `trace(D x)`, the bilinear pairing identifying `M` with its dual.
pub fn trace_pair(d: &ComplexMatrix, x: &ComplexMatrix) -> Result<Complex64> {
    if !d.is_square() || d.shape() != x.shape() {
        return Err(Error::DimensionMismatch(format!(
            "trace pairing of {}x{} with {}x{}",
            d.rows(),
            d.cols(),
            x.rows(),
            x.cols()
        )));
    }
    let n = d.rows();
    let mut s = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            s += d[(i, k)] * x[(k, i)];
        }
    }
    Ok(s)
}

/// Checks Hermiticity, unit trace, and positivity of a candidate density.
pub fn validate_density(rho: &ComplexMatrix, r: usize) -> Result<()> {
    if rho.shape() != (r, r) {
        return Err(Error::NotADensity(format!(
            "expected {r}x{r}, got {}x{}",
            rho.rows(),
            rho.cols()
        )));
    }
    if rho.anti_hermitian_defect() > 1e-10 {
        return Err(Error::NotADensity("matrix is not Hermitian".into()));
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
        return Err(Error::NotADensity(format!("trace is {tr}, not 1")));
    }
    let eig = herm_eig(&rho.hermitian_part()).map_err(|e| Error::NotADensity(e.to_string()))?;
    if eig.eigenvalues[0] < -1e-10 {
        return Err(Error::NotADensity(format!(
            "negative eigenvalue {}",
            eig.eigenvalues[0]
        )));
    }
    Ok(())
}
