use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::gap::{l2_operator_norm, require_invariant, spectral_gap, DEFAULT_M_MAX};
use crate::error::{Error, Result};
use crate::generator::{dual, LindbladGenerator, Superoperator};
use crate::matrixcore::{expm, herm_eig, trace_norm, ComplexMatrix};
use crate::states::{validate_density, FaithfulState};

/// Fitted decay rate is `(1 − GAP_SLACK)·ε`.
pub const GAP_SLACK: f64 = 0.05;
/// First nonzero time of a logarithmic grid.
pub const LOG_GRID_START: f64 = 1e-2;
/// Distances at or below this are roundoff in `expm(tL)` and are left out
/// of the fitted bound.
pub const DISTANCE_FLOOR: f64 = 1e-10;
/// Slack allowed on the operator norm of `P_t` on `L²(M, ω)`.
pub const CONTRACTION_TOL: f64 = 1e-9;

/// `P_t = exp(tL)`.
pub fn evolve(l: &Superoperator, t: f64) -> Result<Superoperator> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidGrid(format!(
            "time must be finite and nonnegative, got {t}"
        )));
    }
    Superoperator::from_matrix(l.dimension(), expm(&l.matrix().scale_real(t))?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridKind {
    Linear,
    Log,
}

/// Linear: `steps` equally spaced points on `[0, t_max]`. Log: `t = 0`
/// followed by `steps − 1` log-spaced points on `[LOG_GRID_START, t_max]`.
pub fn time_grid(t_max: f64, steps: usize, kind: GridKind) -> Result<Vec<f64>> {
    if steps < 2 {
        return Err(Error::InvalidGrid(format!(
            "need at least 2 steps, got {steps}"
        )));
    }
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::InvalidGrid(format!(
            "t_max must be positive and finite, got {t_max}"
        )));
    }
    match kind {
        GridKind::Linear => Ok((0..steps)
            .map(|i| t_max * i as f64 / (steps - 1) as f64)
            .collect()),
        GridKind::Log => {
            if t_max <= LOG_GRID_START {
                return Err(Error::InvalidGrid(format!(
                    "log grid needs t_max > {LOG_GRID_START}"
                )));
            }
            let (a, b) = (LOG_GRID_START.ln(), t_max.ln());
            let m = steps - 1;
            let mut grid = vec![0.0];
            grid.extend((0..m).map(|i| {
                if m == 1 {
                    t_max
                } else {
                    (a + (b - a) * i as f64 / (m - 1) as f64).exp()
                }
            }));
            if let Some(last) = grid.last_mut() {
                *last = t_max;
            }
            Ok(grid)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub times: Vec<f64>,
    /// `‖ρ_t − Ω‖_1` with `ρ_t = (P_t)_*(ρ_0)`.
    pub distances: Vec<f64>,
    /// `max_ij |(ρ_t − Ω)_ij|`.
    pub max_entry_distances: Vec<f64>,
    /// `C'·e^{−rate·t}`, with `C'` fitted on distances above [`DISTANCE_FLOOR`].
    pub gap_bound_curve: Vec<f64>,
    pub initial_state: ComplexMatrix,
    pub decay_rate: f64,
    pub bound_constant: f64,
}

impl ConvergenceReport {
    pub fn final_distance(&self) -> f64 {
        *self
            .distances
            .last()
            .expect("grids have at least two points")
    }

    /// `t,trace_distance,gap_bound` with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,trace_distance,gap_bound\n");
        for ((t, d), g) in self
            .times
            .iter()
            .zip(&self.distances)
            .zip(&self.gap_bound_curve)
        {
            let _ = writeln!(out, "{t:.16e},{d:.16e},{g:.16e}");
        }
        out
    }
}

fn check_grid(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::InvalidGrid("empty time grid".into()));
    }
    if times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        return Err(Error::InvalidGrid(
            "times must be finite and nonnegative".into(),
        ));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid(
            "times must be strictly increasing".into(),
        ));
    }
    Ok(())
}

/// Predual orbit of `rho0` with the exponential envelope fitted at rate
/// `(1 − GAP_SLACK)·ε`, where `ε` comes from [`spectral_gap`].
pub fn trajectory(
    generator: &LindbladGenerator,
    state: &FaithfulState,
    rho0: &ComplexMatrix,
    times: &[f64],
) -> Result<ConvergenceReport> {
    let l = generator.as_superoperator();
    let gap = spectral_gap(&l, state, DEFAULT_M_MAX)?;
    trajectory_with_gap(&l, state, rho0, times, gap.epsilon)
}

/// As [`trajectory`], with the gap supplied by the caller.
pub fn trajectory_with_gap(
    l: &Superoperator,
    state: &FaithfulState,
    rho0: &ComplexMatrix,
    times: &[f64],
    epsilon: f64,
) -> Result<ConvergenceReport> {
    let r = state.dimension();
    if l.dimension() != r {
        return Err(Error::DimensionMismatch(format!(
            "generator on M_{} with a state on M_{r}",
            l.dimension()
        )));
    }
    validate_density(rho0, r)?;
    check_grid(times)?;

    let omega = state.density();
    let samples: Vec<(f64, f64)> = times
        .par_iter()
        .map(|&t| {
            let rho_t = dual(&evolve(l, t)?).apply(rho0);
            let delta = (&rho_t - omega).hermitian_part();
            Ok((trace_norm(&delta)?, delta.max_abs_entry()))
        })
        .collect::<Result<_>>()?;
    let (distances, max_entry_distances): (Vec<f64>, Vec<f64>) = samples.into_iter().unzip();

    let decay_rate = if epsilon.is_finite() {
        (1.0 - GAP_SLACK) * epsilon.max(0.0)
    } else {
        0.0
    };
    let bound_constant = times
        .iter()
        .zip(&distances)
        .filter(|(_, d)| **d > DISTANCE_FLOOR)
        .map(|(t, d)| d * (decay_rate * t).exp())
        .fold(0.0, f64::max);
    let gap_bound_curve = times
        .iter()
        .map(|t| bound_constant * (-decay_rate * t).exp())
        .collect();

    Ok(ConvergenceReport {
        times: times.to_vec(),
        distances,
        max_entry_distances,
        gap_bound_curve,
        initial_state: rho0.clone(),
        decay_rate,
        bound_constant,
    })
}

/// Norms of `P_t` on `L²(M, ω)` at the sampled times.
pub fn contraction_norms(
    l: &Superoperator,
    state: &FaithfulState,
    t_samples: &[f64],
) -> Result<Vec<f64>> {
    require_invariant(l, state)?;
    t_samples
        .iter()
        .map(|&t| Ok(l2_operator_norm(&evolve(l, t)?, state)))
        .collect()
}

/// True iff `‖P_t‖_{L²(ω)} ≤ 1 + CONTRACTION_TOL` at every sampled time.
pub fn contraction_check(
    l: &Superoperator,
    state: &FaithfulState,
    t_samples: &[f64],
) -> Result<bool> {
    Ok(contraction_norms(l, state, t_samples)?
        .iter()
        .all(|&n| n <= 1.0 + CONTRACTION_TOL))
}

/// A stationary density different from `Ω`, built from a non-scalar element
/// of a commutant basis: the projection onto the top eigenspace of its
/// mean-free Hermitian part, normalized. `None` when every element is
/// numerically scalar.
pub fn stationary_witness(commutant_basis: &[ComplexMatrix]) -> Option<ComplexMatrix> {
    let r = commutant_basis.first()?.rows();
    let id = ComplexMatrix::identity(r);
    let i = num_complex::Complex64::new(0.0, 1.0);
    let candidate = commutant_basis
        .iter()
        .flat_map(|b| {
            let re = b.hermitian_part();
            let im = (b - &b.adjoint()).scale(-i * 0.5);
            [re, im]
        })
        .map(|h| &h - &id.scale(h.trace() / r as f64))
        .max_by(|a, b| a.frobenius_norm().total_cmp(&b.frobenius_norm()))?;
    let scale = candidate.frobenius_norm();
    if scale < 1e-8 {
        return None;
    }
    let eig = herm_eig(&candidate.scale_real(1.0 / scale)).ok()?;
    let top = eig.eigenvalues[r - 1];
    let mut projection = ComplexMatrix::zeros(r, r);
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        if top - lambda <= 1e-8 {
            let col = eig.eigenvectors.column(k);
            projection += &ComplexMatrix::outer(&col, &col);
        }
    }
    let tr = projection.trace().re;
    Some(projection.scale_real(1.0 / tr))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{choi_positive, commutant, CHOI_TOL, KERNEL_TOL};
    use crate::generator::depolarizing;

    fn state() -> FaithfulState {
        FaithfulState::diagonal(&[2.0 / 3.0, 1.0 / 3.0]).unwrap()
    }

    #[test]
    fn evolve_at_zero_is_identity() {
        let l = depolarizing(&state()).as_superoperator();
        assert!(
            evolve(&l, 0.0)
                .unwrap()
                .distance(&Superoperator::identity(2))
                < 1e-15
        );
        assert!(evolve(&l, -1.0).is_err());
    }

    #[test]
    fn depolarizing_closed_form() {
        let s = state();
        let l = depolarizing(&s).as_superoperator();
        let t: f64 = 0.7;
        let p = evolve(&l, t).unwrap();
        let x = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[-3.0, 0.5]]);
        let id = ComplexMatrix::identity(2);
        let want = &x.scale_real((-t).exp()) + &id.scale(s.expect(&x) * (1.0 - (-t).exp()));
        assert!(p.apply(&x).approx_eq(&want, 1e-13));
        assert!(choi_positive(&p, CHOI_TOL).positive);
    }

    #[test]
    fn grids() {
        assert_eq!(
            time_grid(1.0, 3, GridKind::Linear).unwrap(),
            vec![0.0, 0.5, 1.0]
        );
        let log = time_grid(10.0, 4, GridKind::Log).unwrap();
        assert_eq!(log[0], 0.0);
        assert!(
            (log[1] - 0.01).abs() < 1e-15 && (log[2] - (0.01f64 * 1000f64.sqrt())).abs() < 1e-12
        );
        assert_eq!(log[3], 10.0);
        assert!(time_grid(1.0, 1, GridKind::Linear).is_err());
        assert!(time_grid(0.0, 4, GridKind::Linear).is_err());
    }

    #[test]
    fn depolarizing_trajectory() {
        let s = state();
        let g = depolarizing(&s);
        let rho0 = ComplexMatrix::unit(2, 1, 1);
        let times = time_grid(5.0, 11, GridKind::Linear).unwrap();
        let report = trajectory(&g, &s, &rho0, &times).unwrap();
        let d0 = 4.0 / 3.0;
        for (t, d) in report.times.iter().zip(&report.distances) {
            assert!((d - (-t).exp() * d0).abs() < 1e-12);
        }
        assert!((report.decay_rate - 0.95).abs() < 1e-9);
        assert!((report.bound_constant - d0).abs() < 1e-9);
        let csv = report.to_csv();
        assert!(csv.starts_with("t,trace_distance,gap_bound\n0.0000000000000000e0,"));
        assert_eq!(csv.lines().count(), 12);
    }

    #[test]
    fn invariant_state_stays_put() {
        let s = state();
        let g = depolarizing(&s);
        let report = trajectory(&g, &s, s.density(), &[0.0, 1.0, 10.0]).unwrap();
        assert!(report.distances.iter().all(|&d| d <= 1e-12));
    }

    #[test]
    fn rejects_bad_density() {
        let s = state();
        let g = depolarizing(&s);
        let bad = ComplexMatrix::real_diag(&[1.5, -0.5]);
        assert!(matches!(
            trajectory(&g, &s, &bad, &[0.0, 1.0]),
            Err(Error::NotADensity(_))
        ));
    }

    #[test]
    fn dephasing_does_not_decay() {
        let s = FaithfulState::tracial(2).unwrap();
        let u = ComplexMatrix::real_diag(&[1.0, -1.0]);
        let g =
            LindbladGenerator::new(vec![u], ComplexMatrix::identity(2).scale_real(-0.5)).unwrap();
        let witness =
            stationary_witness(&commutant(&g.operator_set(), KERNEL_TOL).unwrap()).unwrap();
        let report = trajectory(&g, &s, &witness, &[0.0, 1.0, 100.0]).unwrap();
        for d in &report.distances {
            assert!((d - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn witness_absent_for_scalars() {
        assert!(stationary_witness(&[ComplexMatrix::identity(3)]).is_none());
        assert!(stationary_witness(&[]).is_none());
    }

    #[test]
    fn depolarizing_is_contractive() {
        let s = state();
        let l = depolarizing(&s).as_superoperator();
        let norms = contraction_norms(&l, &s, &[0.0, 0.1, 1.0]).unwrap();
        assert!((norms[0] - 1.0).abs() < 1e-12 && (norms[2] - 1.0).abs() < 1e-12);
        assert!(contraction_check(&l, &s, &[0.1, 1.0, 10.0]).unwrap());
    }
}
