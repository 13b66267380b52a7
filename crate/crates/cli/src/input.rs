use std::fs;
use std::path::Path;

use absorbing_flows::generator::depolarizing;
use absorbing_flows::schema::{load_generator, matrix_from_json, LoadedGenerator, MatrixJson};
use absorbing_flows::states::validate_density;
use absorbing_flows::{sampling, ComplexMatrix, Error, FaithfulState};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::CliError;

pub const PRESET_DEPOLARIZING: &str = "preset:depolarizing";
const DEFAULT_PRESET_LIST: [f64; 3] = [0.5, 0.3, 0.2];
/// Lists are renormalized only when this close to summing to one.
const SUM_SLACK: f64 = 1e-9;

/// Comma-separated positive decimals summing to 1 within `SUM_SLACK`.
pub fn eigenvalues(text: &str) -> Result<Vec<f64>, CliError> {
    let values = text
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Invalid(format!("eigenvalue {s:?} is not a number")))
        })
        .collect::<Result<Vec<f64>, _>>()?;
    if values.len() < 2 {
        return Err(CliError::Invalid("need at least two eigenvalues".into()));
    }
    if values.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(CliError::Invalid("eigenvalues must be positive".into()));
    }
    let sum: f64 = values.iter().sum();
    if (sum - 1.0).abs() > SUM_SLACK {
        return Err(CliError::Invalid(format!(
            "eigenvalues must sum to 1 (got {sum})"
        )));
    }
    Ok(values.iter().map(|v| v / sum).collect())
}

pub fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", path.display())))
}

/// A model file, or the depolarizing preset on `eigenvalues`.
pub fn model(spec: &str, eigenvalues_text: Option<&str>) -> Result<LoadedGenerator, CliError> {
    if spec == PRESET_DEPOLARIZING {
        let list = match eigenvalues_text {
            Some(text) => eigenvalues(text)?,
            None => DEFAULT_PRESET_LIST.to_vec(),
        };
        let state = FaithfulState::diagonal(&list).map_err(|e| CliError::Invalid(e.to_string()))?;
        return Ok(LoadedGenerator {
            generator: depolarizing(&state),
            state,
            model: None,
        });
    }
    if let Some(name) = spec.strip_prefix("preset:") {
        return Err(CliError::Invalid(format!("unknown preset {name:?}")));
    }
    load_generator(&read(Path::new(spec))?).map_err(schema_error)
}

pub fn schema_error(e: Error) -> CliError {
    match e {
        Error::Schema(msg) => CliError::Schema(msg),
        other => CliError::Schema(other.to_string()),
    }
}

/// Initial density from a preset name, an inline JSON matrix or a JSON file.
pub fn rho0(spec: &str, state: &FaithfulState, seed: u64) -> Result<ComplexMatrix, CliError> {
    let r = state.dimension();
    let rho = match spec {
        "maximally-mixed" => ComplexMatrix::identity(r).scale_real(1.0 / r as f64),
        "omega" => state.density().clone(),
        "random" => sampling::density(&mut ChaCha8Rng::seed_from_u64(seed), r),
        _ => {
            if let Some(k) = spec.strip_prefix("pure-") {
                let k: usize = k
                    .parse()
                    .map_err(|_| CliError::Invalid(format!("bad basis index in {spec:?}")))?;
                if k >= r {
                    return Err(CliError::Invalid(format!("pure-{k} needs k < {r}")));
                }
                ComplexMatrix::unit(r, k, k)
            } else {
                let text = if spec.trim_start().starts_with('[') {
                    spec.to_string()
                } else {
                    read(Path::new(spec))?
                };
                let rows: MatrixJson = serde_json::from_str(&text)
                    .map_err(|e| CliError::Invalid(format!("not a density matrix: {e}")))?;
                matrix_from_json(&rows, r, "rho0").map_err(|e| CliError::Invalid(e.to_string()))?
            }
        }
    };
    validate_density(&rho, r).map_err(|e| CliError::Invalid(e.to_string()))?;
    Ok(rho)
}
