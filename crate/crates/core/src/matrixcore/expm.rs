use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Taylor degree used on the scaled matrix. With `‖A/2^s‖ ≤ 1/2` the
/// truncation remainder is below `0.5^19 / 19! ≈ 1.6e-23`.
const TAYLOR_DEGREE: usize = 18;
const SCALED_NORM_BOUND: f64 = 0.5;

/// Matrix exponential by scaling and squaring.
pub fn expm(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "expm of a {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    let norm = a.frobenius_norm();
    if !norm.is_finite() {
        return Err(Error::DimensionMismatch(
            "expm of a non-finite matrix".into(),
        ));
    }
    let squarings = if norm > SCALED_NORM_BOUND {
        (norm / SCALED_NORM_BOUND).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a.scale_real(0.5f64.powi(squarings));

    let id = ComplexMatrix::identity(n);
    let mut e = id.clone();
    for k in (1..=TAYLOR_DEGREE).rev() {
        e = &id + &scaled.matmul(&e).scale_real(1.0 / k as f64);
    }
    for _ in 0..squarings {
        e = e.matmul(&e);
    }
    Ok(e)
}
