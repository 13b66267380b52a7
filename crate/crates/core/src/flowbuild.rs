//! End-to-end construction of pure, state-preserving generators of a given
//! index, and the index computation for arbitrary generators.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{purity_verdict, PurityCertificate};
use crate::error::{Error, Result};
use crate::generator::{build_preserving, invariance_defect, LindbladGenerator};
use crate::matrixcore::{gram_rank, subspace::DEFAULT_GRAM_RANK_TOL, ComplexMatrix};
use crate::states::FaithfulState;
use crate::weyl::{admissible_basis, clock_shift, weyl_family, DEFAULT_SEED};

/// Relative spread `(λ_max − λ_min)/λ_max` below which a list is constant.
pub const TRACIAL_SPREAD_TOL: f64 = 1e-10;
/// Largest invariance or unitality defect accepted for a built model.
pub const MODEL_DEFECT_TOL: f64 = 1e-9;
/// Largest `r` visited by [`sweep`].
pub const SWEEP_R_CAP: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    NonTracial,
    Tracial,
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Branch::NonTracial => "NonTracial",
            Branch::Tracial => "Tracial",
        })
    }
}

#[derive(Debug, Clone)]
pub struct MetricOperatorSpace {
    pub basis_ops: Vec<ComplexMatrix>,
    pub dim: usize,
    pub intersects_scalars: bool,
}

#[derive(Debug, Clone)]
pub struct PureFlowModel {
    pub generator: LindbladGenerator,
    pub state: FaithfulState,
    pub certificate: PurityCertificate,
    pub index: usize,
    pub branch: Branch,
    pub kraus_selection: Vec<(usize, usize)>,
}

/// `(1,0)` followed by the remaining nonzero pairs in lexicographic order,
/// `n` pairs in total.
pub fn select_kraus(r: usize, n: usize) -> Result<Vec<(usize, usize)>> {
    let max = (r * r).saturating_sub(1);
    if r < 2 || n < 1 || n > max {
        return Err(Error::IndexOutOfRange { r, n, max });
    }
    let rest = (0..r)
        .flat_map(|i| (0..r).map(move |j| (i, j)))
        .filter(|&p| p != (0, 0) && p != (1, 0));
    Ok(std::iter::once((1, 0)).chain(rest).take(n).collect())
}

/// `d = gram_rank(kraus ∪ {1}) − 1`; zero for an empty Kraus list.
pub fn index(generator: &LindbladGenerator) -> Result<(usize, MetricOperatorSpace)> {
    let basis_ops = generator.kraus().to_vec();
    if basis_ops.is_empty() {
        return Ok((
            0,
            MetricOperatorSpace {
                basis_ops,
                dim: 0,
                intersects_scalars: false,
            },
        ));
    }
    let dim = gram_rank(&basis_ops, DEFAULT_GRAM_RANK_TOL)?;
    let mut augmented = basis_ops.clone();
    augmented.push(ComplexMatrix::identity(generator.dimension()));
    let augmented_rank = gram_rank(&augmented, DEFAULT_GRAM_RANK_TOL)?;
    Ok((
        augmented_rank - 1,
        MetricOperatorSpace {
            basis_ops,
            dim,
            intersects_scalars: augmented_rank == dim,
        },
    ))
}

fn is_constant(list: &[f64]) -> bool {
    let max = list.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = list.iter().copied().fold(f64::INFINITY, f64::min);
    (max - min) <= TRACIAL_SPREAD_TOL * max
}

pub fn build_pure_flow(eigenvalue_list: &[f64], n: usize) -> Result<PureFlowModel> {
    build_pure_flow_seeded(eigenvalue_list, n, DEFAULT_SEED)
}

/// Pure unital generator preserving the diagonal state with the given
/// eigenvalues, whose Kraus operators span an `n`-dimensional space
/// meeting the scalars only at zero. `seed` only matters when the
/// admissible-basis search falls back to random candidates.
pub fn build_pure_flow_seeded(
    eigenvalue_list: &[f64],
    n: usize,
    seed: u64,
) -> Result<PureFlowModel> {
    let state = FaithfulState::diagonal(eigenvalue_list)?;
    let r = state.dimension();
    let kraus_selection = select_kraus(r, n)?;
    let branch = if is_constant(eigenvalue_list) {
        Branch::Tracial
    } else {
        Branch::NonTracial
    };

    let (state, generator) = match branch {
        Branch::NonTracial => {
            let pair = clock_shift(r, &admissible_basis(state.density(), seed)?)?;
            let family = weyl_family(&pair);
            let v: Vec<ComplexMatrix> = kraus_selection
                .iter()
                .map(|&(i, j)| family.word(i as i64, j as i64).clone())
                .collect();
            let built = build_preserving(&state, &v)?;
            (state, built.generator)
        }
        Branch::Tracial => {
            let state = FaithfulState::tracial(r)?;
            let t = &ComplexMatrix::unit(r, 0, 1) - &ComplexMatrix::unit(r, 1, 0);
            let pair = clock_shift(r, &admissible_basis(&t, seed)?)?;
            let family = weyl_family(&pair);
            let v: Vec<ComplexMatrix> = kraus_selection
                .iter()
                .map(|&(i, j)| family.word(i as i64, j as i64).clone())
                .collect();
            let drift = &ComplexMatrix::identity(r).scale_real(-(n as f64) / 2.0) + &t;
            (state, LindbladGenerator::new(v, drift)?)
        }
    };

    let fail = |what: String| Error::ConstructionFailed(format!("r = {r}, n = {n}: {what}"));
    let unital = generator.unitality_defect();
    if unital > MODEL_DEFECT_TOL {
        return Err(fail(format!("unitality defect {unital:.3e}")));
    }
    let defect = invariance_defect(&generator.as_superoperator(), &state)?;
    if defect > MODEL_DEFECT_TOL {
        return Err(fail(format!("invariance defect {defect:.3e}")));
    }
    let certificate = purity_verdict(&generator, &state).map_err(|e| fail(e.to_string()))?;
    if !certificate.is_pure() || certificate.spectral_gap_estimate <= 0.0 {
        return Err(fail(format!(
            "not certified pure (fixed points {}, commutant {}, gap {:.3e})",
            certificate.fixed_point_dim,
            certificate.commutant_dim,
            certificate.spectral_gap_estimate
        )));
    }
    let (computed, space) = index(&generator)?;
    if computed != n || space.intersects_scalars {
        return Err(fail(format!(
            "index {computed} (scalars met: {})",
            space.intersects_scalars
        )));
    }

    Ok(PureFlowModel {
        generator,
        state,
        certificate,
        index: n,
        branch,
        kraus_selection,
    })
}

/// Fixed non-constant list `λ_k ∝ r − k`; equals `(2/3, 1/3)` for `r = 2`.
pub fn non_constant_list(r: usize) -> Vec<f64> {
    let total = (r * (r + 1) / 2) as f64;
    (0..r).map(|k| (r - k) as f64 / total).collect()
}

pub fn constant_list(r: usize) -> Vec<f64> {
    vec![1.0 / r as f64; r]
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub r: usize,
    pub n: usize,
    pub branch: Branch,
    pub pure: bool,
    pub index: Option<usize>,
    pub gap: f64,
    pub max_defect: f64,
    pub model: Option<PureFlowModel>,
    pub error: Option<String>,
}

impl SweepRow {
    pub fn certified(&self) -> bool {
        self.certified_with(MODEL_DEFECT_TOL)
    }

    pub fn certified_with(&self, defect_tol: f64) -> bool {
        self.pure && self.index == Some(self.n) && self.max_defect <= defect_tol && self.gap > 0.0
    }
}

fn sweep_case(r: usize, n: usize, branch: Branch) -> SweepRow {
    let list = match branch {
        Branch::NonTracial => non_constant_list(r),
        Branch::Tracial => constant_list(r),
    };
    match build_pure_flow(&list, n) {
        Ok(model) => {
            let l = model.generator.as_superoperator();
            let defect = invariance_defect(&l, &model.state).unwrap_or(f64::INFINITY);
            SweepRow {
                r,
                n,
                branch: model.branch,
                pure: model.certificate.is_pure(),
                index: Some(model.index),
                gap: model.certificate.spectral_gap_estimate,
                max_defect: defect.max(model.generator.unitality_defect()),
                model: Some(model),
                error: None,
            }
        }
        Err(e) => SweepRow {
            r,
            n,
            branch,
            pure: false,
            index: None,
            gap: 0.0,
            max_defect: f64::INFINITY,
            model: None,
            error: Some(e.to_string()),
        },
    }
}

/// Every `(r, n)` with `2 ≤ r ≤ r_max`, `1 ≤ n ≤ r² − 1`, for the
/// non-constant list then the constant list. Rows come back in that order
/// regardless of scheduling.
pub fn sweep(r_max: usize) -> Result<Vec<SweepRow>> {
    if !(2..=SWEEP_R_CAP).contains(&r_max) {
        return Err(Error::IndexOutOfRange {
            r: r_max,
            n: r_max,
            max: SWEEP_R_CAP,
        });
    }
    let cases: Vec<(usize, usize, Branch)> = (2..=r_max)
        .flat_map(|r| {
            [Branch::NonTracial, Branch::Tracial]
                .into_iter()
                .flat_map(move |b| (1..r * r).map(move |n| (r, n, b)))
        })
        .collect();
    Ok(cases
        .into_par_iter()
        .map(|(r, n, b)| sweep_case(r, n, b))
        .collect())
}
